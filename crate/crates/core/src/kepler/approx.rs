//! The four one-sided polynomial approximations and their validation.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bernstein::range_enclosure;
use crate::expr::{verify, Expr, Method, Relation, Verdict, VerifyOptions, VerifyReport};
use crate::numeric::{rat, rat_int, Interval, RatBox, Rational, DEFAULT_PREC};
use crate::poly::{Ring, SparsePoly};

use super::functions::a_poly;
use super::surrogate::main_box;
use super::symbolic::Sym;
use super::{KeplerError, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ApproxName {
    AtanUpper,
    RcpUpper,
    SqrtLower,
    SqrtUpper,
}

impl ApproxName {
    pub const ALL: [ApproxName; 4] = [
        ApproxName::AtanUpper,
        ApproxName::RcpUpper,
        ApproxName::SqrtLower,
        ApproxName::SqrtUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ApproxName::AtanUpper => "ATAN_UPPER",
            ApproxName::RcpUpper => "RCP_UPPER",
            ApproxName::SqrtLower => "SQRT_LOWER",
            ApproxName::SqrtUpper => "SQRT_UPPER",
        }
    }

    /// Whether the body bounds its target from above.
    pub fn is_upper(self) -> bool {
        !matches!(self, ApproxName::SqrtLower)
    }
}

impl fmt::Display for ApproxName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ApproxName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        ApproxName::ALL
            .into_iter()
            .find(|n| n.as_str() == up)
            .ok_or_else(|| format!("unknown approximation {s}"))
    }
}

#[derive(Debug, Clone)]
pub struct Approximation {
    pub name: ApproxName,
    /// Univariate body in `t`.
    pub body: SparsePoly<Sym>,
    pub validity_domain: Interval,
    /// Point where the body touches its target, when it does.
    pub anchor: Option<Sym>,
    pub provenance: Provenance,
}

fn t() -> SparsePoly<Sym> {
    SparsePoly::var(0, 1)
}

fn c(s: Sym) -> SparsePoly<Sym> {
    SparsePoly::constant(1, s)
}

fn q(n: i64, d: i64) -> Sym {
    Sym::rational(rat(n, d))
}

fn lin(c0: Sym, c1: Sym) -> SparsePoly<Sym> {
    c(c0).add(&t().scale(&c1)).expect("arity 1")
}

/// The body of an approximation, in exact symbolic coefficients.
pub fn approximation_body(name: ApproxName) -> SparsePoly<Sym> {
    let eight_sqrt2 = Sym::sqrt2().scale(&rat_int(8));
    match name {
        // Tangent to arctan at √2/5.
        ApproxName::AtanUpper => {
            let s0 = Sym::sqrt2().scale(&rat(1, 5));
            let slope = q(25, 27);
            lin(Sym::a().sub(&slope.mul(&s0)), slope)
        }
        ApproxName::RcpUpper => {
            let coeffs = [q(1, 4), q(-37, 1600), q(1, 1000), q(-13, 640000), q(1, 6400000)];
            let mut p = SparsePoly::zero(1);
            for (k, ck) in coeffs.into_iter().enumerate() {
                p = p.add(&t().pow(k as u32).scale(&ck)).expect("arity 1");
            }
            p
        }
        ApproxName::SqrtLower => {
            let slope = Sym::k_pow(-1).scale(&rat(3, 64));
            lin(eight_sqrt2.sub(&slope.scale(&rat_int(128))), slope)
        }
        ApproxName::SqrtUpper => {
            // 1/(16√2) = √2/32
            let slope = Sym::sqrt2().scale(&rat(1, 32));
            lin(eight_sqrt2.sub(&slope.scale(&rat_int(128))), slope)
        }
    }
}

/// Horner evaluation of a univariate body at a symbolic point.
pub fn eval_body(body: &SparsePoly<Sym>, x: &Sym) -> Sym {
    let d = body.total_degree();
    let mut acc = Sym::zero();
    for k in (0..=d).rev() {
        acc = acc.mul(x).add(&body.coeff(&crate::poly::Monomial(vec![k])));
    }
    acc
}

fn delta_domain() -> Interval {
    Interval::from_rationals(&rat_int(128), &rat_int(501), DEFAULT_PREC).expect("ordered")
}

/// Certified range of `a0..a3` over `[2, 2.51]^6`.
pub fn a_range() -> &'static (Rational, Rational) {
    static R: OnceLock<(Rational, Rational)> = OnceLock::new();
    R.get_or_init(|| {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for i in 0..4 {
            let r = range_enclosure(&a_poly(i), &main_box(), &rat(1, 1000), 1 << 14).expect("a_i range converges");
            lo = Some(lo.map_or(r.lo.clone(), |l| l.min(r.lo.clone())));
            hi = Some(hi.map_or(r.hi.clone(), |h| h.max(r.hi.clone())));
        }
        (lo.unwrap(), hi.unwrap())
    })
}

fn univariate_range(p: &SparsePoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let b = RatBox::new(vec![(lo.clone(), hi.clone())]).expect("ordered");
    let r = range_enclosure(p, &b, &rat(1, 1 << 20), 1 << 12).expect("univariate range converges");
    (r.lo, r.hi)
}

fn rational_body(name: ApproxName) -> SparsePoly {
    approximation_body(name)
        .try_map_coeffs(|s| s.as_rational().ok_or(()))
        .expect("rational body")
}

/// Range of `½·sqrt̄(Δ)·rcp̄(aᵢ)` over `[2, 2.51]^6`.
fn atan_domain() -> Interval {
    let (alo, ahi) = a_range();
    let (rlo, rhi) = univariate_range(&rational_body(ApproxName::RcpUpper), alo, ahi);
    let u = approximation_body(ApproxName::SqrtUpper)
        .try_map_coeffs(|s| s.as_sqrt2_multiple().ok_or(()))
        .expect("sqrt2 multiple");
    let (ulo, uhi) = univariate_range(&u, &rat_int(128), &rat_int(501));
    assert!(rlo > rat_int(0) && ulo > rat_int(0));
    let w = DEFAULT_PREC + 16;
    let s2 = Sym::sqrt2().enclose(w);
    let lo = Interval::from_rational(&(ulo * rlo / rat_int(2)), w).mul(&s2, w);
    let hi = Interval::from_rational(&(uhi * rhi / rat_int(2)), w).mul(&s2, w);
    Interval::new(lo.lo().clone(), hi.hi().clone())
        .expect("ordered")
        .round_outward(DEFAULT_PREC)
}

pub fn approximation(name: ApproxName) -> Approximation {
    let body = approximation_body(name);
    let (validity_domain, anchor, provenance) = match name {
        ApproxName::SqrtUpper => (delta_domain(), None, Provenance::PaperStated),
        ApproxName::SqrtLower => (
            delta_domain(),
            Some(Sym::rational(rat_int(128))),
            Provenance::PaperStated,
        ),
        ApproxName::RcpUpper => {
            let (lo, hi) = a_range();
            (
                Interval::from_rationals(lo, hi, DEFAULT_PREC).expect("ordered"),
                None,
                Provenance::Reconstructed,
            )
        }
        ApproxName::AtanUpper => (
            atan_domain(),
            Some(Sym::sqrt2().scale(&rat(1, 5))),
            Provenance::Reconstructed,
        ),
    };
    Approximation {
        name,
        body,
        validity_domain,
        anchor,
        provenance,
    }
}

pub fn approximations() -> Vec<Approximation> {
    ApproxName::ALL.into_iter().map(approximation).collect()
}

fn domain_box(a: &Approximation) -> RatBox {
    RatBox::new(vec![(
        a.validity_domain.lo().to_rational(),
        a.validity_domain.hi().to_rational(),
    )])
    .expect("ordered")
}

fn proven(boxes: usize) -> VerifyReport {
    VerifyReport {
        verdict: Verdict::Proven,
        boxes_examined: boxes,
        max_depth: 0,
        witness: None,
    }
}

fn refuted(what: &str) -> Result<VerifyReport, KeplerError> {
    Err(KeplerError::Construction(what.to_string()))
}

fn merge(reports: Vec<VerifyReport>) -> VerifyReport {
    let mut out = proven(0);
    for r in reports {
        out.boxes_examined += r.boxes_examined;
        out.max_depth = out.max_depth.max(r.max_depth);
        if out.verdict == Verdict::Proven && r.verdict != Verdict::Proven {
            out.verdict = r.verdict;
            out.witness = r.witness;
        }
    }
    out
}

fn bernstein_nonneg(p: &SparsePoly, b: &RatBox, budget: usize) -> Result<VerifyReport, KeplerError> {
    let opts = VerifyOptions {
        method: Method::Bernstein,
        budget,
        prec: DEFAULT_PREC,
    };
    Ok(verify(
        &Expr::from_poly(p),
        b,
        Relation::Ge,
        &rat_int(0),
        &rat_int(0),
        &opts,
    )?)
}

fn linear_coeffs(body: &SparsePoly<Sym>) -> Option<(Sym, Sym)> {
    if body.total_degree() > 1 {
        return None;
    }
    Some((
        body.coeff(&crate::poly::Monomial(vec![0])),
        body.coeff(&crate::poly::Monomial(vec![1])),
    ))
}

/// Machine-check that `a.body` bounds its target on `a.validity_domain`.
///
/// Each case is reduced to polynomial or interval facts:
/// * `SQRT_UPPER = √2·u`: `u ≥ 0` and `2u² − t ≥ 0`, by Bernstein.
/// * `SQRT_LOWER`, a line through `(t0, √t0)`: for `t > t0` the claim is
///   `c·(√t + √t0) ≤ 1` with `c` the slope, by interval bisection.
/// * `RCP_UPPER`: `t·r(t) − 1 = G²·R` with `G = gcd(P, P')`, and `R ≥ 0` by Bernstein.
/// * `ATAN_UPPER`, a line through `(s0, arctan s0)` with slope `1/(1+s0²)`: the
///   difference has derivative of the sign of `s² − s0²`, so it is nonnegative
///   on `s ≥ 0`.
pub fn validate_approximation(a: &Approximation, budget: usize) -> Result<VerifyReport, KeplerError> {
    let dom = domain_box(a);
    match a.name {
        ApproxName::SqrtUpper => {
            let (u, factor) = match a.body.try_map_coeffs(|s| s.as_rational().ok_or(())) {
                Ok(u) => (u, rat_int(1)),
                Err(()) => match a.body.try_map_coeffs(|s| s.as_sqrt2_multiple().ok_or(())) {
                    Ok(u) => (u, rat_int(2)),
                    Err(()) => return refuted("SQRT_UPPER body is not in Q or √2·Q"),
                },
            };
            let t = SparsePoly::var(0, 1);
            let gap = u.pow(2).scale(&factor).sub(&t)?;
            Ok(merge(vec![
                bernstein_nonneg(&u, &dom, budget)?,
                bernstein_nonneg(&gap, &dom, budget)?,
            ]))
        }
        ApproxName::SqrtLower => {
            let Some(t0) = a.anchor.as_ref().and_then(|s| s.as_rational()) else {
                return refuted("SQRT_LOWER needs a rational anchor");
            };
            let Some((_, slope)) = linear_coeffs(&a.body) else {
                return refuted("SQRT_LOWER is not linear");
            };
            if *dom.lo(0) != t0 {
                return refuted("SQRT_LOWER anchor must be the domain's lower end");
            }
            let root = eval_body(&a.body, &Sym::rational(t0.clone()));
            if root.mul(&root).as_rational() != Some(t0) || !root.enclose(DEFAULT_PREC).lo().is_positive() {
                return Ok(VerifyReport {
                    verdict: Verdict::CounterexampleBox,
                    boxes_examined: 1,
                    max_depth: 0,
                    witness: Some(RatBox::point(&[dom.lo(0).clone()])),
                });
            }
            let e = Expr::mul(vec![
                slope.to_expr(),
                Expr::add(vec![Expr::sqrt(Expr::var(0)), root.to_expr()]),
            ]);
            let opts = VerifyOptions {
                method: Method::IntervalBb,
                budget,
                prec: DEFAULT_PREC,
            };
            Ok(verify(&e, &dom, Relation::Le, &rat_int(1), &rat_int(0), &opts)?)
        }
        ApproxName::RcpUpper => {
            let Ok(r) = a.body.try_map_coeffs(|s| s.as_rational().ok_or(())) else {
                return refuted("RCP_UPPER body is not rational");
            };
            if *dom.lo(0) <= rat_int(0) {
                return refuted("RCP_UPPER domain must be positive");
            }
            let p = dense(&r.mul(&SparsePoly::var(0, 1))?.add_constant(&rat_int(-1)));
            let g = gcd(&p, &derivative(&p));
            let (rest, rem) = divmod(&p, &mul(&g, &g));
            if !rem.is_empty() {
                return refuted("square-free split failed");
            }
            bernstein_nonneg(&sparse(&rest), &dom, budget)
        }
        ApproxName::AtanUpper => {
            let Some(s0) = a.anchor.clone() else {
                return refuted("ATAN_UPPER needs an anchor");
            };
            let Some((_, slope)) = linear_coeffs(&a.body) else {
                return refuted("ATAN_UPPER is not linear");
            };
            let touches = eval_body(&a.body, &s0) == Sym::a();
            let tangent = slope.mul(&Sym::one().add(&s0.mul(&s0))).as_rational() == Some(rat_int(1));
            let anchor_pos = s0.enclose(DEFAULT_PREC).lo().is_positive();
            if !(touches && tangent && anchor_pos) {
                return refuted("ATAN_UPPER is not the tangent at its anchor");
            }
            if dom.lo(0) < &rat_int(0) {
                return Ok(VerifyReport {
                    verdict: Verdict::CounterexampleBox,
                    boxes_examined: 1,
                    max_depth: 0,
                    witness: Some(RatBox::point(&[dom.lo(0).clone()])),
                });
            }
            Ok(proven(1))
        }
    }
}

// Dense univariate helpers, lowest degree first, no trailing zeros.

fn dense(p: &SparsePoly) -> Vec<Rational> {
    let d = p.total_degree() as usize;
    let mut v = vec![rat_int(0); d + 1];
    for (m, c) in p.terms() {
        v[m.0[0] as usize] = c.clone();
    }
    trim(v)
}

fn sparse(v: &[Rational]) -> SparsePoly {
    SparsePoly::from_terms(1, v.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone()))).expect("arity 1")
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_int(k as i64))
            .collect(),
    )
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![rat_int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(v)
}

fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quot = vec![rat_int(0); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / lead;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &f * y;
        }
        quot[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(quot), r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = divmod(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().cloned().unwrap_or_else(|| rat_int(1));
    x.iter().map(|c| c / &lead).collect()
}
