// Reduced words, cyclic reduction and distances in every model space.

use gromov_walk::coarse::gromov_product;
use gromov_walk::space::{q, ModelPoint, ModelSpace};
use gromov_walk::word::Word;

pub fn run_example() -> gromov_walk::Result<()> {
    let w: Word = "abBAab".parse()?;
    println!("abBAab reduces to {w}");
    let g: Word = "abbaBBA".parse()?;
    let (core, conj) = g.cyclic_reduce();
    println!("{g} = {conj} . {core} . {conj}^-1");
    assert_eq!(conj.mul(&core).mul(&conj.inv()), g);

    let f2 = ModelSpace::free(2);
    let x = ModelPoint::tree("ab");
    let y = ModelPoint::tree("aB");
    println!("d(ab, aB) = {}", f2.dist(&x, &y)?);
    println!("(ab . aB)_1 = {}", gromov_product(&f2, &f2.basepoint, &x, &y)?);

    let wedge = ModelSpace::wedge();
    let u = ModelPoint::ray(1, q(3));
    let v = ModelPoint::ray(4, q(2));
    println!("wedge: d(ray1 at 3, ray4 at 2) = {}", wedge.dist(&u, &v)?);

    let z = ModelSpace::zxz2();
    let a = ModelPoint::ZxZ2 { n: -2, bit: false };
    let b = ModelPoint::ZxZ2 { n: 3, bit: true };
    println!("ZxZ/2: d((-2,0), (3,1)) = {}", z.dist(&a, &b)?);

    let s = ModelSpace::f2z2();
    let p = s.parse_point("abc")?;
    println!("F2xZ/2: |abc| = {}", s.dist(&s.basepoint, &p)?);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
