//! Collinear zero-sum triples (czt).
//!
//! A triple `a + b + c = 0` of nonzero elements is collinear when one norm
//! carries the other two: `|a| + |b| = |c|` up to relabeling. A normed
//! group in which every such triple is collinear behaves, triple by triple,
//! like points on a line, and this is the local obstruction that decides
//! whether mass can always merge without branching. This module evaluates
//! collinearity exactly, exhausts finite groups, checks the linearity that
//! the property forces along a cyclic subgroup, and probes sampled infinite
//! groups through norm oracles.

use num::bigint::BigInt;
use num::Zero;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::sampled::NormOracle;
use crate::scalar::Scalar;

/// Exact collinearity verdict for one zero-sum triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collinearity {
    /// Some entry vanishes; the triple constrains nothing.
    Trivial,
    /// Which of `|a|+|b|=|c|`, `|a|+|c|=|b|`, `|b|+|c|=|a|` hold.
    Collinear { holds: [bool; 3] },
    /// All three equalities fail; the norms are the witness.
    Noncollinear { norms: [Scalar; 3] },
}

fn classify(na: Scalar, nb: Scalar, nc: Scalar) -> Collinearity {
    let holds = [
        &na + &nb == nc,
        &na + &nc == nb,
        &nb + &nc == na,
    ];
    if holds.iter().any(|&h| h) {
        Collinearity::Collinear { holds }
    } else {
        Collinearity::Noncollinear {
            norms: [na, nb, nc],
        }
    }
}

/// Evaluates the three collinearity equalities on `a + b + c = 0`.
pub fn collinearity(
    spec: &GroupSpec,
    a: &GroupElement,
    b: &GroupElement,
    c: &GroupElement,
) -> Result<Collinearity> {
    for g in [a, b, c] {
        spec.conforms(g)?;
    }
    if !spec.is_zero(&spec.add(&spec.add(a, b)?, c)?) {
        return Err(Error::NotZeroMean);
    }
    if spec.is_zero(a) || spec.is_zero(b) || spec.is_zero(c) {
        return Ok(Collinearity::Trivial);
    }
    Ok(classify(spec.norm(a)?, spec.norm(b)?, spec.norm(c)?))
}

/// Exhausts every nontrivial zero-sum triple of a finite group. `None`
/// means all are collinear; otherwise the first noncollinear triple in
/// enumeration order is the witness.
pub fn has_czt(spec: &GroupSpec) -> Result<Option<[GroupElement; 3]>> {
    spec.ensure_valid_norm()?;
    for (a, b, c) in spec.enumerate_zero_mean_triples()? {
        if spec.is_zero(&a) || spec.is_zero(&b) || spec.is_zero(&c) {
            continue;
        }
        let verdict = classify(spec.norm(&a)?, spec.norm(&b)?, spec.norm(&c)?);
        if matches!(verdict, Collinearity::Noncollinear { .. }) {
            return Ok(Some([a, b, c]));
        }
    }
    Ok(None)
}

/// Outcome of [`czt_cyclic_forcing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CyclicForcing {
    /// Every supplied value sits on the forced line `|ng| = n |g|`.
    Linear,
    /// The first multiple that leaves the line.
    Violation {
        n: usize,
        value: Scalar,
        forced: Scalar,
    },
}

/// Checks candidate norms `|g|, |2g|, ..., |Ng|` along an infinite cyclic
/// subgroup against the values that triple collinearity forces. Triples
/// like `(-g, -(n-1)g, ng)` and `(-2g, -(n-2)g, ng)` tie each norm to
/// earlier ones, and chasing them through the whole group pins the line
/// `|ng| = n |g|`; the checker verifies that pinned value on the supplied
/// window and reports the first break.
pub fn czt_cyclic_forcing(values: &[Scalar]) -> Result<CyclicForcing> {
    if values.is_empty() {
        return Err(Error::InvalidInput(
            "need at least the norm of the generator".into(),
        ));
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_positive() {
            return Err(Error::InvalidInput(format!(
                "norm of {}g must be positive, got {v}",
                i + 1
            )));
        }
    }
    let unit = &values[0];
    for (i, v) in values.iter().enumerate() {
        let n = i + 1;
        let forced = &Scalar::from_int(n as i64) * unit;
        if v != &forced {
            return Ok(CyclicForcing::Violation {
                n,
                value: v.clone(),
                forced,
            });
        }
    }
    Ok(CyclicForcing::Linear)
}

/// A sampled triple whose three equalities all fail.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWitness {
    pub triple: [Vec<BigInt>; 3],
    pub norms: [Scalar; 3],
}

/// Collinearity check over a norm oracle on a slice of `Z^d`. Triples whose
/// entries include a norm-zero point are trivial (the oracle may have a
/// kernel, in which case it norms the quotient). Returns the first
/// noncollinear triple, if any.
pub fn czt_sampled(
    oracle: &dyn NormOracle,
    triples: &[[Vec<BigInt>; 3]],
) -> Result<Option<SampledWitness>> {
    for (at, t) in triples.iter().enumerate() {
        for v in t {
            if v.len() != oracle.dim() {
                return Err(Error::DimensionMismatch {
                    index: at,
                    expected: oracle.dim(),
                    found: v.len(),
                });
            }
        }
        let zero_sum = (0..oracle.dim()).all(|k| (&(&t[0][k] + &t[1][k]) + &t[2][k]).is_zero());
        if !zero_sum {
            return Err(Error::NotZeroMean);
        }
        let norms = [
            oracle.norm(&t[0])?,
            oracle.norm(&t[1])?,
            oracle.norm(&t[2])?,
        ];
        if norms.iter().any(Scalar::is_zero) {
            continue;
        }
        let [na, nb, nc] = norms;
        if let Collinearity::Noncollinear { norms } = classify(na, nb, nc) {
            return Ok(Some(SampledWitness {
                triple: t.clone(),
                norms,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Coord, FactorSpec};
    use crate::sampled::{PullbackNorm, SqrtNorm};

    fn z4_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::zmod(
            4,
            vec![
                Scalar::zero(),
                Scalar::one(),
                Scalar::from_int(2),
                Scalar::one(),
            ],
        )])
        .unwrap()
    }

    fn mod_elem(vals: &[u64]) -> GroupElement {
        GroupElement::new(vals.iter().map(|&v| Coord::Mod(vec![v])).collect())
    }

    #[test]
    fn unit_pair_carries_the_double() {
        let spec = z4_spec();
        let out = collinearity(&spec, &mod_elem(&[1]), &mod_elem(&[1]), &mod_elem(&[2])).unwrap();
        assert_eq!(
            out,
            Collinearity::Collinear {
                holds: [true, false, false]
            }
        );
    }

    #[test]
    fn square_generators_meet_on_the_diagonal() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let out = collinearity(
            &spec,
            &mod_elem(&[1, 0]),
            &mod_elem(&[0, 1]),
            &mod_elem(&[1, 1]),
        )
        .unwrap();
        assert_eq!(
            out,
            Collinearity::Collinear {
                holds: [true, false, false]
            }
        );
    }

    #[test]
    fn cube_edge_midpoints_refuse_to_line_up() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let out = collinearity(
            &spec,
            &mod_elem(&[1, 1, 0]),
            &mod_elem(&[1, 0, 1]),
            &mod_elem(&[0, 1, 1]),
        )
        .unwrap();
        assert_eq!(
            out,
            Collinearity::Noncollinear {
                norms: [Scalar::from_int(2), Scalar::from_int(2), Scalar::from_int(2)]
            }
        );
    }

    #[test]
    fn zero_entries_give_no_information() {
        let spec = z4_spec();
        let out = collinearity(&spec, &spec.zero(), &mod_elem(&[1]), &mod_elem(&[3])).unwrap();
        assert_eq!(out, Collinearity::Trivial);
    }

    #[test]
    fn nonzero_sums_are_rejected() {
        let spec = z4_spec();
        assert!(matches!(
            collinearity(&spec, &mod_elem(&[1]), &mod_elem(&[1]), &mod_elem(&[1])),
            Err(Error::NotZeroMean)
        ));
    }

    #[test]
    fn doubling_norm_makes_the_cyclic_group_collinear() {
        assert_eq!(has_czt(&z4_spec()).unwrap(), None);
    }

    #[test]
    fn weighted_squares_stay_collinear() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::ratio(3, 2)),
        ])
        .unwrap();
        assert_eq!(has_czt(&spec).unwrap(), None);
        // The same family with the small weight first; order is cosmetic.
        let swapped = GroupSpec::new(vec![FactorSpec::ModM {
            moduli: vec![2, 2],
            norm_table: vec![
                Scalar::zero(),
                Scalar::ratio(1, 2),
                Scalar::one(),
                Scalar::ratio(3, 2),
            ],
        }])
        .unwrap();
        assert_eq!(has_czt(&swapped).unwrap(), None);
    }

    #[test]
    fn cube_witness_is_the_first_balanced_triple() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let witness = has_czt(&spec).unwrap().expect("the cube branches");
        assert_eq!(
            witness,
            [
                mod_elem(&[0, 1, 1]),
                mod_elem(&[1, 0, 1]),
                mod_elem(&[1, 1, 0])
            ]
        );
    }

    #[test]
    fn distance_norm_on_six_elements_fails_at_the_half_turn() {
        let spec = GroupSpec::new(vec![FactorSpec::zmod(
            6,
            [0i64, 1, 2, 3, 2, 1].map(Scalar::from_int).to_vec(),
        )])
        .unwrap();
        let witness = has_czt(&spec).unwrap().expect("order six branches");
        assert_eq!(witness, [mod_elem(&[2]), mod_elem(&[2]), mod_elem(&[2])]);
    }

    #[test]
    fn forced_line_accepts_linear_values_at_any_scale() {
        let linear = [1i64, 2, 3, 4, 5].map(Scalar::from_int);
        assert_eq!(czt_cyclic_forcing(&linear).unwrap(), CyclicForcing::Linear);
        let scaled = [2i64, 4, 6].map(Scalar::from_int);
        assert_eq!(czt_cyclic_forcing(&scaled).unwrap(), CyclicForcing::Linear);
    }

    #[test]
    fn dip_at_three_breaks_the_forced_line() {
        let values = [1i64, 2, 1].map(Scalar::from_int);
        assert_eq!(
            czt_cyclic_forcing(&values).unwrap(),
            CyclicForcing::Violation {
                n: 3,
                value: Scalar::one(),
                forced: Scalar::from_int(3),
            }
        );
    }

    #[test]
    fn flat_start_breaks_at_the_double() {
        let values = [1i64, 1].map(Scalar::from_int);
        assert_eq!(
            czt_cyclic_forcing(&values).unwrap(),
            CyclicForcing::Violation {
                n: 2,
                value: Scalar::one(),
                forced: Scalar::from_int(2),
            }
        );
    }

    #[test]
    fn nonpositive_values_are_invalid() {
        assert!(matches!(czt_cyclic_forcing(&[]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            czt_cyclic_forcing(&[Scalar::one(), Scalar::zero()]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn pullback_samples_sit_on_the_line() {
        let f = PullbackNorm::new(vec![Scalar::from_int(2), Scalar::from_int(3)]).unwrap();
        let mut triples = Vec::new();
        for am in -2i64..=2 {
            for an in -2i64..=2 {
                for bm in -2i64..=2 {
                    for bn in -2i64..=2 {
                        let a = vec![BigInt::from(am), BigInt::from(an)];
                        let b = vec![BigInt::from(bm), BigInt::from(bn)];
                        let c = vec![BigInt::from(-am - bm), BigInt::from(-an - bn)];
                        triples.push([a, b, c]);
                    }
                }
            }
        }
        assert_eq!(czt_sampled(&f, &triples).unwrap(), None);
    }

    #[test]
    fn concave_norm_samples_expose_a_witness() {
        let root = SqrtNorm;
        let triple = [
            [BigInt::from(16)].to_vec(),
            [BigInt::from(9)].to_vec(),
            [BigInt::from(-25)].to_vec(),
        ];
        let w = czt_sampled(&root, &[triple]).unwrap().expect("roots bend");
        assert_eq!(
            w.norms,
            [Scalar::from_int(4), Scalar::from_int(3), Scalar::from_int(5)]
        );
    }

    #[test]
    fn sampled_triples_must_sum_to_zero() {
        let f = PullbackNorm::new(vec![Scalar::one()]).unwrap();
        let bad = [
            [BigInt::from(1)].to_vec(),
            [BigInt::from(1)].to_vec(),
            [BigInt::from(1)].to_vec(),
        ];
        assert!(matches!(czt_sampled(&f, &[bad]), Err(Error::NotZeroMean)));
    }
}
