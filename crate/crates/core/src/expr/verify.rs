use serde::{Deserialize, Serialize};

use crate::bernstein::{to_unit_box, BernsteinTensor};
use crate::numeric::{rat_int, RatBox, Rational, DEFAULT_PREC};

use super::{eval_interval, Expr, ExprError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
    Lt,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Relation::Le | Relation::Lt)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    IntervalBb,
    Bernstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proven,
    CounterexampleBox,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub boxes_examined: usize,
    pub max_depth: usize,
    pub witness: Option<RatBox>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub method: Method,
    /// Cap on the number of boxes examined.
    pub budget: usize,
    pub prec: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            method: Method::IntervalBb,
            budget: 1 << 16,
            prec: DEFAULT_PREC,
        }
    }
}

/// Prove `e(x) <= bound` on `b` by interval bisection.
pub fn verify_upper(e: &Expr, b: &RatBox, bound: &Rational, budget: usize) -> Result<VerifyReport, ExprError> {
    interval_bb(e, b, bound, budget.max(1), DEFAULT_PREC)
}

/// Prove `e(x) >= bound` on `b` by interval bisection.
pub fn verify_lower(e: &Expr, b: &RatBox, bound: &Rational, budget: usize) -> Result<VerifyReport, ExprError> {
    interval_bb(&Expr::neg(e.clone()), b, &-bound, budget.max(1), DEFAULT_PREC)
}

/// General entry point. Strict relations are proven with margin `epsilon`,
/// i.e. `e < c` is established as `e <= c - epsilon`.
pub fn verify(
    e: &Expr,
    b: &RatBox,
    relation: Relation,
    bound: &Rational,
    epsilon: &Rational,
    opts: &VerifyOptions,
) -> Result<VerifyReport, ExprError> {
    if relation.is_strict() && *epsilon <= rat_int(0) {
        return Err(ExprError::Other("a strict relation needs a positive epsilon".into()));
    }
    let margin = if relation.is_strict() {
        epsilon.clone()
    } else {
        rat_int(0)
    };
    let (expr, target) = if relation.is_upper() {
        (e.clone(), bound - &margin)
    } else {
        (Expr::neg(e.clone()), -(bound + &margin))
    };
    match opts.method {
        Method::IntervalBb => interval_bb(&expr, b, &target, opts.budget.max(1), opts.prec),
        Method::Bernstein => bernstein_bb(&expr, b, &target, opts.budget.max(1)),
    }
}

fn interval_bb(e: &Expr, b: &RatBox, bound: &Rational, budget: usize, prec: u32) -> Result<VerifyReport, ExprError> {
    if e.arity() > b.dim() {
        return Err(ExprError::MissingVariable {
            index: e.arity() - 1,
            dim: b.dim(),
        });
    }
    let mut stack = vec![(b.clone(), 0usize)];
    let mut examined = 0usize;
    let mut max_depth = 0usize;
    while let Some((bx, depth)) = stack.pop() {
        if examined >= budget {
            return Ok(VerifyReport {
                verdict: Verdict::BudgetExhausted,
                boxes_examined: examined,
                max_depth,
                witness: None,
            });
        }
        examined += 1;
        max_depth = max_depth.max(depth);
        match eval_interval(e, &bx, prec) {
            Ok(v) if v.hi().to_rational() <= *bound => continue,
            // A domain failure on a wide box can be an artefact of overestimation.
            Ok(_) | Err(ExprError::Domain { .. }) => {}
            Err(other) => return Err(other),
        }
        let mid = RatBox::point(&bx.midpoint());
        let at_mid = eval_interval(e, &mid, prec)?;
        if at_mid.lo().to_rational() > *bound {
            return Ok(VerifyReport {
                verdict: Verdict::CounterexampleBox,
                boxes_examined: examined,
                max_depth,
                witness: Some(bx),
            });
        }
        let (lo, hi) = bx.bisect(bx.widest_axis());
        stack.push((hi, depth + 1));
        stack.push((lo, depth + 1));
    }
    Ok(VerifyReport {
        verdict: Verdict::Proven,
        boxes_examined: examined,
        max_depth,
        witness: None,
    })
}

/// Branch-and-bound on Bernstein coefficients. Leaves are proven when their
/// largest coefficient is at most `bound`; a corner coefficient above `bound`
/// is an exact polynomial value and yields a point witness.
fn bernstein_bb(e: &Expr, b: &RatBox, bound: &Rational, budget: usize) -> Result<VerifyReport, ExprError> {
    let p = e.to_poly(b.dim())?;
    let q = to_unit_box(&p, b)?;
    let root = BernsteinTensor::from_poly(&q).map_err(|er| ExprError::Other(er.to_string()))?;
    let mut stack = vec![(root, b.clone(), 0usize)];
    let mut examined = 0usize;
    let mut max_depth = 0usize;
    while let Some((t, bx, depth)) = stack.pop() {
        if examined >= budget {
            return Ok(VerifyReport {
                verdict: Verdict::BudgetExhausted,
                boxes_examined: examined,
                max_depth,
                witness: None,
            });
        }
        examined += 1;
        max_depth = max_depth.max(depth);
        if t.bound_max() <= *bound {
            continue;
        }
        let n = t.arity();
        for (mask, v) in t.corner_values().into_iter().enumerate() {
            if v > *bound {
                let corner: Vec<Rational> = (0..n)
                    .map(|a| {
                        if mask >> a & 1 == 1 {
                            bx.hi(a).clone()
                        } else {
                            bx.lo(a).clone()
                        }
                    })
                    .collect();
                return Ok(VerifyReport {
                    verdict: Verdict::CounterexampleBox,
                    boxes_examined: examined,
                    max_depth,
                    witness: Some(RatBox::point(&corner)),
                });
            }
        }
        let axis = t.split_axis();
        let (tl, tr) = t.subdivide(axis).map_err(|er| ExprError::Other(er.to_string()))?;
        let (bl, br) = bx.bisect(axis);
        stack.push((tr, br, depth + 1));
        stack.push((tl, bl, depth + 1));
    }
    Ok(VerifyReport {
        verdict: Verdict::Proven,
        boxes_examined: examined,
        max_depth,
        witness: None,
    })
}
