//! Finitely supported step distributions.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::End;
use crate::error::{Error, Result};
use crate::word::{Alphabet, GroupElement, Word};

/// Tolerance on the total probability of a step distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepAtom {
    pub word: String,
    pub p: f64,
}

/// JSON form: `{"support": [{"word": "a", "p": 0.25}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub support: Vec<StepAtom>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepDistribution {
    alphabet: Alphabet,
    support: Vec<(GroupElement, f64)>,
    cumulative: Vec<f64>,
}

impl StepDistribution {
    pub fn new(alphabet: Alphabet, support: Vec<(GroupElement, f64)>) -> Result<StepDistribution> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut seen = HashSet::new();
        let mut total = 0.0;
        let mut cumulative = Vec::with_capacity(support.len());
        for (g, p) in &support {
            if !(p.is_finite() && *p > 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability of {g} must be positive, got {p}"
                )));
            }
            if !seen.insert(g.clone()) {
                return Err(Error::InvalidDistribution(format!("{g} appears twice")));
            }
            if let Alphabet::Free(rank) = alphabet {
                if g.central || g.word.rank_used() > rank {
                    return Err(Error::InvalidDistribution(format!("{g} is not in F_{rank}")));
                }
            }
            total += p;
            cumulative.push(total);
        }
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(StepDistribution {
            alphabet,
            support,
            cumulative,
        })
    }

    pub fn from_spec(alphabet: Alphabet, spec: &StepSpec) -> Result<StepDistribution> {
        let support = spec
            .support
            .iter()
            .map(|a| Ok((GroupElement::parse(&a.word, alphabet)?, a.p)))
            .collect::<Result<Vec<_>>>()?;
        StepDistribution::new(alphabet, support)
    }

    pub fn to_spec(&self) -> StepSpec {
        StepSpec {
            support: self
                .support
                .iter()
                .map(|(g, p)| StepAtom {
                    word: g.to_string(),
                    p: *p,
                })
                .collect(),
        }
    }

    /// Uniform measure on the generators of `F_rank` and their inverses.
    pub fn uniform_generators(rank: u8) -> StepDistribution {
        let p = 1.0 / (2.0 * rank as f64);
        let support = crate::word::Letter::alphabet(rank)
            .into_iter()
            .map(|l| (GroupElement::free(Word::from_letters([l])), p))
            .collect();
        StepDistribution::new(Alphabet::Free(rank), support).expect("valid uniform measure")
    }

    pub fn point_mass(alphabet: Alphabet, g: GroupElement) -> Result<StepDistribution> {
        StepDistribution::new(alphabet, vec![(g, 1.0)])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn support(&self) -> &[(GroupElement, f64)] {
        &self.support
    }

    pub fn probability(&self, g: &GroupElement) -> f64 {
        self.support
            .iter()
            .find(|(h, _)| h == g)
            .map_or(0.0, |(_, p)| *p)
    }

    /// Longest word in the support.
    pub fn max_step_len(&self) -> usize {
        self.support.iter().map(|(g, _)| g.word.len()).max().unwrap_or(0)
    }

    pub fn is_uniform(&self) -> bool {
        let p0 = self.support[0].1;
        self.support.iter().all(|(_, p)| (p - p0).abs() <= PROBABILITY_TOLERANCE)
    }

    /// The reflected measure `g -> mu(g^-1)`.
    pub fn reflected(&self) -> StepDistribution {
        StepDistribution::new(
            self.alphabet,
            self.support.iter().map(|(g, p)| (g.inv(), *p)).collect(),
        )
        .expect("reflection preserves validity")
    }

    /// Index of the next step; one uniform draw per call.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen::<f64>() * self.cumulative[self.cumulative.len() - 1];
        self.cumulative.partition_point(|c| *c <= u).min(self.support.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &GroupElement {
        &self.support[self.sample_index(rng)].0
    }
}

/// Outcome of the search for two independent hyperbolic elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonElementary {
    /// Two hyperbolic elements of the generated semigroup with disjoint
    /// fixed-point pairs, when found.
    pub witnesses: Option<(GroupElement, GroupElement)>,
}

impl NonElementary {
    pub fn holds(&self) -> bool {
        self.witnesses.is_some()
    }
}

/// Cap on the number of semigroup elements examined.
const NONELEMENTARY_CAP: usize = 4096;

/// Searches products of at most `search_len` support elements for two
/// hyperbolic elements whose fixed points on the tree boundary are disjoint.
/// The free-group part of each element is used; the central involution of
/// `F_2 x Z/2` acts trivially on the boundary.
pub fn check_nonelementary(mu: &StepDistribution, search_len: usize) -> NonElementary {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut hyperbolic: Vec<(GroupElement, End, End)> = Vec::new();
    let mut layer: Vec<GroupElement> = vec![GroupElement::identity()];
    for _ in 0..search_len {
        let mut next = Vec::new();
        for u in &layer {
            for (g, _) in mu.support() {
                let x = u.mul(g);
                if seen.len() >= NONELEMENTARY_CAP || !seen.insert(x.clone()) {
                    continue;
                }
                next.push(x.clone());
                let (Ok(plus), Ok(minus)) = (
                    End::attracting_fixed_point(&x.word),
                    End::attracting_fixed_point(&x.word.inv()),
                ) else {
                    continue;
                };
                for (y, p2, m2) in &hyperbolic {
                    if [&plus, &minus].iter().all(|e| *e != p2 && *e != m2) {
                        return NonElementary {
                            witnesses: Some((y.clone(), x)),
                        };
                    }
                }
                hyperbolic.push((x, plus, minus));
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    NonElementary { witnesses: None }
}
