//! Norm oracles over integer lattice points.
//!
//! Some norms of interest are not representable as a [`crate::group::GroupSpec`]
//! (pullbacks along a dense line, fractional-power costs). An oracle exposes
//! such a norm on a sampled slice of `Z^d` while keeping every returned value
//! an exact rational; inputs the oracle cannot evaluate exactly are errors,
//! never approximations.

use num::bigint::BigInt;
use num::Signed;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exact norm on lattice points of a fixed dimension.
pub trait NormOracle {
    fn dim(&self) -> usize;

    /// Norm of a lattice point; must be nonnegative, symmetric under
    /// negation, and subadditive on the sampled set.
    fn norm(&self, v: &[BigInt]) -> Result<Scalar>;
}

/// `|c . v|` for a fixed rational row `c`: the pullback of the absolute
/// value along a linear map to the line. Rationally dependent coefficients
/// make the kernel visible at finite scale, which is exactly what sampled
/// checks probe.
#[derive(Debug, Clone)]
pub struct PullbackNorm {
    coeffs: Vec<Scalar>,
}

impl PullbackNorm {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty pullback row".into()));
        }
        Ok(PullbackNorm { coeffs })
    }
}

impl NormOracle for PullbackNorm {
    fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn norm(&self, v: &[BigInt]) -> Result<Scalar> {
        if v.len() != self.coeffs.len() {
            return Err(Error::ShapeMismatch {
                expected: self.coeffs.len(),
                found: v.len(),
            });
        }
        let mut acc = Scalar::zero();
        for (c, x) in self.coeffs.iter().zip(v) {
            acc = &acc + &(c * &Scalar::from_bigint(x.clone()));
        }
        Ok(acc.abs())
    }
}

/// `|v|^(1/2)` on `Z`, the unit-exponent case of concave branched-transport
/// costs. Exact only where the square root is rational, i.e. on perfect
/// squares; anything else is rejected.
#[derive(Debug, Clone, Default)]
pub struct SqrtNorm;

impl NormOracle for SqrtNorm {
    fn dim(&self) -> usize {
        1
    }

    fn norm(&self, v: &[BigInt]) -> Result<Scalar> {
        if v.len() != 1 {
            return Err(Error::ShapeMismatch {
                expected: 1,
                found: v.len(),
            });
        }
        let a = v[0].abs();
        let r = a.sqrt();
        if &r * &r != a {
            return Err(Error::InvalidInput(format!(
                "|{}|^(1/2) is irrational; sample perfect squares only",
                v[0]
            )));
        }
        Ok(Scalar::from_bigint(r))
    }
}

/// Row-sum norm balance of a plan under an oracle norm: for each row `i`
/// compares `|g_i|` with `sum_j |g_ij|` and returns the rows where they
/// differ. `upper` lists the entries `(i, j)`, `i < j`, row-major; the
/// reverse entry is the negation, which has the same oracle norm.
pub fn row_norm_violations(
    oracle: &dyn NormOracle,
    coeffs: &[Vec<BigInt>],
    upper: &[Vec<BigInt>],
) -> Result<Vec<(usize, Scalar, Scalar)>> {
    let n = coeffs.len();
    if upper.len() != n * (n - 1) / 2 {
        return Err(Error::ShapeMismatch {
            expected: n * (n - 1) / 2,
            found: upper.len(),
        });
    }
    let mut row_sum = vec![Scalar::zero(); n];
    let mut at = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let e = oracle.norm(&upper[at])?;
            row_sum[i] = &row_sum[i] + &e;
            row_sum[j] = &row_sum[j] + &e;
            at += 1;
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        let gi = oracle.norm(&coeffs[i])?;
        if gi != row_sum[i] {
            out.push((i, gi, row_sum[i].clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pullback_takes_absolute_values() {
        let f = PullbackNorm::new(vec![Scalar::from_int(2), Scalar::from_int(3)]).unwrap();
        assert_eq!(f.norm(&v(&[1, 0])).unwrap(), Scalar::from_int(2));
        assert_eq!(f.norm(&v(&[-1, -1])).unwrap(), Scalar::from_int(5));
        assert_eq!(f.norm(&v(&[3, -2])).unwrap(), Scalar::zero());
    }

    #[test]
    fn sqrt_norm_is_exact_on_squares() {
        let s = SqrtNorm;
        assert_eq!(s.norm(&v(&[9])).unwrap(), Scalar::from_int(3));
        assert_eq!(s.norm(&v(&[-4])).unwrap(), Scalar::from_int(2));
        assert!(s.norm(&v(&[2])).is_err());
    }

    #[test]
    fn row_balance_flags_concave_branching() {
        // Masses 16, 9, -25 shipped separately into the sink: under
        // |x|^(1/2) the sink row sums to 4 + 3 = 7 yet |-25|^(1/2) = 5.
        // Merged mass is strictly cheaper than split mass, the signature
        // imbalance of concave costs.
        let s = SqrtNorm;
        let coeffs = vec![v(&[16]), v(&[9]), v(&[-25])];
        let upper = vec![v(&[0]), v(&[16]), v(&[9])];
        let bad = row_norm_violations(&s, &coeffs, &upper).unwrap();
        assert_eq!(bad, vec![(2, Scalar::from_int(5), Scalar::from_int(7))]);
    }

    #[test]
    fn whole_shipments_stay_balanced() {
        let s = SqrtNorm;
        let coeffs = vec![v(&[4]), v(&[0]), v(&[-4])];
        let upper = vec![v(&[0]), v(&[4]), v(&[0])];
        assert!(row_norm_violations(&s, &coeffs, &upper)
            .unwrap()
            .is_empty());
    }
}
