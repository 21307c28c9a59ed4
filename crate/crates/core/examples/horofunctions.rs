// Horofunctions on the line, the wedge of rays and F2 x Z/2.

use gromov_walk::boundary::{BoundaryPoint, LineEnd};
use gromov_walk::horo::{classify, horo_eval, pointwise_limit_check, Horofunction};
use gromov_walk::space::{q, ModelPoint, ModelSpace};

pub fn run_example() -> gromov_walk::Result<()> {
    let line = ModelSpace::line();
    let plus = Horofunction::busemann(&line, BoundaryPoint::Line(LineEnd::Plus));
    for x in [-2, 0, 3] {
        println!("line: rho_+inf({x}) = {}", horo_eval(&line, &plus, &ModelPoint::line(x))?);
    }
    let orbit: Vec<_> = (1..=6).map(|n| Horofunction::orbit(&line, ModelPoint::line(n))).collect();
    let probes: Vec<_> = (-3..=3).map(ModelPoint::line).collect();
    println!(
        "line: sup |rho_n - rho_+inf| on [-3, 3] along n = 1..6: {}",
        pointwise_limit_check(&line, &orbit, &plus, &probes)?
    );

    let wedge = ModelSpace::wedge();
    let h3 = Horofunction::busemann(&wedge, BoundaryPoint::Wedge(3));
    println!("wedge: h_3 is {:?}", classify(&wedge, &h3)?);
    let rho0 = Horofunction::orbit(&wedge, wedge.basepoint.clone());
    let far: Vec<_> = (1..=5).map(|n| Horofunction::busemann(&wedge, BoundaryPoint::Wedge(n))).collect();
    let probes: Vec<_> = (1..=4).map(|r| ModelPoint::ray(r, q(1))).collect();
    println!(
        "wedge: h_n against rho_x0 on the first four rays: {}",
        pointwise_limit_check(&wedge, &far, &rho0, &probes)?
    );

    let s = ModelSpace::f2z2();
    let c = s.parse_point("c")?;
    let g = s.parse_element("abab")?;
    let gc = s.parse_element("ababc")?;
    let rg = Horofunction::orbit(&s, s.orbit(&g)?);
    let rgc = Horofunction::orbit(&s, s.orbit(&gc)?);
    println!(
        "F2xZ/2: rho_g(c) = {}, rho_gc(c) = {}",
        horo_eval(&s, &rg, &c)?,
        horo_eval(&s, &rgc, &c)?
    );
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
