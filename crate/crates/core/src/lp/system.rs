//! Interval linear systems `A x ≤ b` and rigorous Farkas certificate checks.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::numeric::{rational_to_string, Dyadic, Rational};

use super::LpError;

/// `A_lo ≤ A ≤ A_hi`, `b ≤ b_hi`, `x_lo ≤ x ≤ x_hi`, all row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalLinearSystem {
    pub row_names: Vec<String>,
    pub var_names: Vec<String>,
    pub a_lo: Vec<Vec<Dyadic>>,
    pub a_hi: Vec<Vec<Dyadic>>,
    pub b_hi: Vec<Dyadic>,
    pub x_lo: Vec<Dyadic>,
    pub x_hi: Vec<Dyadic>,
}

impl IntervalLinearSystem {
    /// Checks shapes and the ordering of every interval.
    pub fn new(
        a_lo: Vec<Vec<Dyadic>>,
        a_hi: Vec<Vec<Dyadic>>,
        b_hi: Vec<Dyadic>,
        x_lo: Vec<Dyadic>,
        x_hi: Vec<Dyadic>,
    ) -> Result<IntervalLinearSystem, LpError> {
        let m = b_hi.len();
        let n = x_lo.len();
        let dim = |what: &str| LpError::Dimension(what.to_string());
        if a_lo.len() != m || a_hi.len() != m || x_hi.len() != n {
            return Err(dim("row or column counts differ"));
        }
        for i in 0..m {
            if a_lo[i].len() != n || a_hi[i].len() != n {
                return Err(dim(&format!("row {i} has the wrong length")));
            }
            if (0..n).any(|j| a_lo[i][j] > a_hi[i][j]) {
                return Err(LpError::Invalid(format!("row {i}: A_lo > A_hi")));
            }
        }
        if (0..n).any(|j| x_lo[j] > x_hi[j]) {
            return Err(LpError::Invalid("x_lo > x_hi".into()));
        }
        Ok(IntervalLinearSystem {
            row_names: (0..m).map(|i| format!("r{i}")).collect(),
            var_names: (0..n).map(|j| format!("x{j}")).collect(),
            a_lo,
            a_hi,
            b_hi,
            x_lo,
            x_hi,
        })
    }

    /// A point system: `A_lo = A_hi = a`.
    pub fn exact(a: Vec<Vec<Dyadic>>, b: Vec<Dyadic>, x_lo: Vec<Dyadic>, x_hi: Vec<Dyadic>) -> Result<Self, LpError> {
        IntervalLinearSystem::new(a.clone(), a, b, x_lo, x_hi)
    }

    pub fn rows(&self) -> usize {
        self.b_hi.len()
    }

    pub fn cols(&self) -> usize {
        self.x_lo.len()
    }
}

/// Nonnegative row multipliers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    y: Vec<Rational>,
}

impl FarkasCertificate {
    pub fn new(y: Vec<Rational>) -> Result<FarkasCertificate, LpError> {
        if let Some(i) = y.iter().position(|v| v.is_negative()) {
            return Err(LpError::NegativeMultiplier(i));
        }
        Ok(FarkasCertificate { y })
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn scaled(&self, k: &Rational) -> Result<FarkasCertificate, LpError> {
        FarkasCertificate::new(self.y.iter().map(|v| v * k).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CertificateVerdict {
    /// `min (yᵀA)x − max yᵀb > 0` over all admissible `A`, `b`, `x`.
    Refuted {
        #[serde(with = "crate::numeric::serde_rational")]
        margin: Rational,
    },
    NotRefuted {
        reason: String,
    },
}

impl CertificateVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, CertificateVerdict::Refuted { .. })
    }
}

impl fmt::Display for CertificateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateVerdict::Refuted { margin } => write!(f, "Refuted (margin {})", rational_to_string(margin)),
            CertificateVerdict::NotRefuted { reason } => write!(f, "NotRefuted: {reason}"),
        }
    }
}

fn min_product(cl: &Rational, cu: &Rational, xl: &Rational, xu: &Rational) -> Rational {
    [cl * xl, cl * xu, cu * xl, cu * xu]
        .into_iter()
        .min()
        .expect("four products")
}

/// Exact rational check: with `c = yᵀA` ranging over `[yᵀA_lo, yᵀA_hi]`,
/// every `x` in the box has `c·x ≥ L`, while `yᵀb ≤ yᵀb_hi = R`. If `L > R`
/// no `x` satisfies `A x ≤ b` for any admissible `A` and `b`.
pub fn check_certificate(s: &IntervalLinearSystem, cert: &FarkasCertificate) -> Result<CertificateVerdict, LpError> {
    let y = cert.y();
    if y.len() != s.rows() {
        return Err(LpError::Dimension(format!(
            "{} multipliers for {} rows",
            y.len(),
            s.rows()
        )));
    }
    let mut lower = Rational::zero();
    for j in 0..s.cols() {
        let mut cl = Rational::zero();
        let mut cu = Rational::zero();
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            cl += yi * s.a_lo[i][j].to_rational();
            cu += yi * s.a_hi[i][j].to_rational();
        }
        lower += min_product(&cl, &cu, &s.x_lo[j].to_rational(), &s.x_hi[j].to_rational());
    }
    let rhs: Rational = y
        .iter()
        .zip(&s.b_hi)
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, b)| v * b.to_rational())
        .sum();
    let margin = lower - rhs;
    Ok(if margin.is_positive() {
        CertificateVerdict::Refuted { margin }
    } else {
        CertificateVerdict::NotRefuted {
            reason: format!(
                "combined row does not separate (margin {})",
                rational_to_string(&margin)
            ),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, rat_int};

    fn d(v: i64) -> Dyadic {
        Dyadic::from_int(v)
    }

    fn two_rows() -> IntervalLinearSystem {
        // x ≤ 1, −x ≤ −2, x in [0, 3]
        IntervalLinearSystem::exact(vec![vec![d(1)], vec![d(-1)]], vec![d(1), d(-2)], vec![d(0)], vec![d(3)]).unwrap()
    }

    #[test]
    fn contradiction_is_refuted() {
        let c = FarkasCertificate::new(vec![rat_int(1), rat_int(1)]).unwrap();
        let v = check_certificate(&two_rows(), &c).unwrap();
        assert_eq!(v, CertificateVerdict::Refuted { margin: rat_int(1) });
    }

    #[test]
    fn feasible_system_is_never_refuted() {
        let s = IntervalLinearSystem::exact(vec![vec![d(1)]], vec![d(1)], vec![d(0)], vec![d(3)]).unwrap();
        for y in [0, 1, 5] {
            let c = FarkasCertificate::new(vec![rat_int(y)]).unwrap();
            assert!(!check_certificate(&s, &c).unwrap().is_refuted());
        }
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(
            FarkasCertificate::new(vec![rat(-1, 2)]),
            Err(LpError::NegativeMultiplier(0))
        );
        let c = FarkasCertificate::new(vec![rat_int(1)]).unwrap();
        assert!(matches!(check_certificate(&two_rows(), &c), Err(LpError::Dimension(_))));
        assert!(
            IntervalLinearSystem::new(vec![vec![d(2)]], vec![vec![d(1)]], vec![d(0)], vec![d(0)], vec![d(1)]).is_err()
        );
    }

    #[test]
    fn widening_can_lose_refutation() {
        let mut s = two_rows();
        s.a_lo[0][0] = d(-1);
        let c = FarkasCertificate::new(vec![rat_int(1), rat_int(1)]).unwrap();
        assert!(!check_certificate(&s, &c).unwrap().is_refuted());
    }
}
