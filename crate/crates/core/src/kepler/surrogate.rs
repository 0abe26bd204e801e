//! The polynomial surrogate `g` and the rational polynomial `p = √2·(g − pt)`.

use std::sync::OnceLock;

use crate::bernstein::{to_unit_box, BernsteinTensor};
use crate::numeric::{rat, rat_int, RatBox};
use crate::poly::{Ring, SparsePoly};

use super::approx::{approximation_body, ApproxName};
use super::functions::{a_poly, delta_poly};
use super::symbolic::Sym;
use super::KeplerError;

fn lift(p: &SparsePoly) -> SparsePoly<Sym> {
    p.map_coeffs(|q| Sym::rational(q.clone()))
}

/// `g = −δ_oct/12·sqrt̲(Δ) + ⅔·Σ arctan̄(½·sqrt̄(Δ)·rcp̄(aᵢ))`, exactly.
pub fn build_surrogate_g() -> SparsePoly<Sym> {
    let delta = lift(&delta_poly());
    let compose = |name: ApproxName, arg: &SparsePoly<Sym>| {
        approximation_body(name)
            .compose(std::slice::from_ref(arg))
            .expect("univariate body")
    };
    let sqrt_lo = compose(ApproxName::SqrtLower, &delta);
    let sqrt_hi = compose(ApproxName::SqrtUpper, &delta).scale(&Sym::rational(rat(1, 2)));
    let mut g = sqrt_lo.scale(&Sym::delta_oct().scale(&rat(-1, 12)));
    let two_thirds = Sym::rational(rat(2, 3));
    for i in 0..4 {
        let rcp = compose(ApproxName::RcpUpper, &lift(&a_poly(i)));
        let arg = sqrt_hi.mul(&rcp).expect("arity 6");
        let at = compose(ApproxName::AtanUpper, &arg);
        g = g.add(&at.scale(&two_thirds)).expect("arity 6");
    }
    g
}

/// `√2·(g − pt)`. Every coefficient must cancel to a rational; anything else
/// is reported as a construction error.
pub fn build_p() -> Result<SparsePoly, KeplerError> {
    p_from_g(&build_surrogate_g())
}

pub(crate) fn p_from_g(g: &SparsePoly<Sym>) -> Result<SparsePoly, KeplerError> {
    let shifted = g.add_constant(&Sym::pt().neg()).scale(&Sym::sqrt2());
    if let Some((m, c)) = shifted.terms().find(|(_, c)| c.as_rational().is_none()) {
        return Err(KeplerError::Construction(format!(
            "coefficient of {:?} is {c}, not rational",
            m.0
        )));
    }
    Ok(shifted.map_coeffs(|c| c.as_rational().expect("checked above")))
}

/// The box `[2, 2.51]^6` of the main inequality.
pub fn main_box() -> RatBox {
    RatBox::cube(rat_int(2), rat(251, 100), 6).expect("ordered")
}

/// `p`, built once per process.
pub fn p_poly() -> &'static SparsePoly {
    static P: OnceLock<SparsePoly> = OnceLock::new();
    P.get_or_init(|| build_p().expect("surrogate cancels to a rational polynomial"))
}

/// Bernstein coefficients of `p` reparametrized from [`main_box`] to the unit cube.
pub fn p_tensor() -> &'static BernsteinTensor {
    static T: OnceLock<BernsteinTensor> = OnceLock::new();
    T.get_or_init(|| {
        let q = to_unit_box(p_poly(), &main_box()).expect("arity 6");
        BernsteinTensor::from_poly(&q).expect("tensor fits")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn g_at_corner_is_pt() {
        let g = build_surrogate_g();
        assert_eq!(g.eval_ring(&vec![rat_int(2); 6]).unwrap(), Sym::pt());
    }

    #[test]
    fn p_shape() {
        let p = p_poly();
        assert_eq!(p.total_degree(), 18);
        assert_eq!(p.eval_exact(&vec![rat_int(2); 6]).unwrap(), rat_int(0));
        // Constant term: −(Δ−128)/512 + (25/1296)(Δ+128)Σrcp̄ − 80/81 at y = 0.
        let want = rat(128, 512) + rat(25, 1296) * rat_int(128) * rat(1, 4) * rat_int(4) - rat(80, 81);
        assert_eq!(p.coeff(&Monomial(vec![0; 6])), want);
    }

    #[test]
    fn symbolic_residue_is_reported() {
        let g = build_surrogate_g().add_constant(&Sym::a());
        assert!(matches!(p_from_g(&g), Err(KeplerError::Construction(_))));
    }
}
