//! Exact coefficients in `Q[√2][A, K, 1/K]`, where `A = arctan(√2/5)` and
//! `K = π − 4A`. Every constant appearing in the surrogate lives here, so
//! cancellation is decided structurally.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::Expr;
use crate::numeric::{enclose_constant, rat_int, rational_to_string, ConstantName, Interval, Rational};
use crate::poly::Ring;

/// Basis element `√2^s · K^k · A^a` with `s ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymKey {
    pub sqrt2: bool,
    pub k_pow: i32,
    pub a_pow: u32,
}

impl SymKey {
    pub const ONE: SymKey = SymKey {
        sqrt2: false,
        k_pow: 0,
        a_pow: 0,
    };

    fn mul(self, o: SymKey) -> (SymKey, bool) {
        let doubled = self.sqrt2 && o.sqrt2;
        (
            SymKey {
                sqrt2: self.sqrt2 ^ o.sqrt2,
                k_pow: self.k_pow + o.k_pow,
                a_pow: self.a_pow + o.a_pow,
            },
            doubled,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sym(BTreeMap<SymKey, Rational>);

impl Sym {
    pub fn rational(q: Rational) -> Sym {
        Sym::term(SymKey::ONE, q)
    }

    pub fn term(key: SymKey, q: Rational) -> Sym {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(&q) {
            m.insert(key, q);
        }
        Sym(m)
    }

    pub fn sqrt2() -> Sym {
        Sym::term(
            SymKey {
                sqrt2: true,
                ..SymKey::ONE
            },
            rat_int(1),
        )
    }

    /// `K = π − 4 arctan(√2/5)`.
    pub fn k() -> Sym {
        Sym::k_pow(1)
    }

    pub fn k_pow(n: i32) -> Sym {
        Sym::term(
            SymKey {
                k_pow: n,
                ..SymKey::ONE
            },
            rat_int(1),
        )
    }

    /// `A = arctan(√2/5)`.
    pub fn a() -> Sym {
        Sym::term(
            SymKey {
                a_pow: 1,
                ..SymKey::ONE
            },
            rat_int(1),
        )
    }

    pub fn pi() -> Sym {
        Sym::k().add(&Sym::a().scale(&rat_int(4)))
    }

    /// `pt = 4A − π/3 = 8A/3 − K/3`.
    pub fn pt() -> Sym {
        Sym::a()
            .scale(&rat_int(4))
            .sub(&Sym::pi().scale(&Rational::new(1.into(), 3.into())))
    }

    /// `δ_oct = K/(2√2) = √2 K/4`.
    pub fn delta_oct() -> Sym {
        Sym::sqrt2().mul(&Sym::k()).scale(&Rational::new(1.into(), 4.into()))
    }

    pub fn scale(&self, q: &Rational) -> Sym {
        if Zero::is_zero(q) {
            return Sym::default();
        }
        Sym(self.0.iter().map(|(k, c)| (*k, c * q)).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymKey, &Rational)> {
        self.0.iter()
    }

    /// The value when it is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(rat_int(0)),
            1 => self.0.get(&SymKey::ONE).cloned(),
            _ => None,
        }
    }

    /// The rational `q` with `self = q·√2`, if any.
    pub fn as_sqrt2_multiple(&self) -> Option<Rational> {
        self.mul(&Sym::sqrt2()).as_rational().map(|q| q / rat_int(2))
    }

    pub fn enclose(&self, prec: u32) -> Interval {
        let w = prec + 16;
        let s2 = enclose_constant(ConstantName::Sqrt2, w);
        let a = enclose_constant(ConstantName::AtanSqrt2Over5, w);
        let k = enclose_constant(ConstantName::Pi, w).sub(&a.mul(&Interval::from_int(4), w), w);
        let kinv = k.recip(w).expect("K is positive");
        let mut acc = Interval::zero();
        for (key, q) in &self.0 {
            let mut t = Interval::from_rational(q, w);
            if key.sqrt2 {
                t = t.mul(&s2, w);
            }
            let kb = if key.k_pow >= 0 { &k } else { &kinv };
            t = t.mul(&kb.powi(key.k_pow.unsigned_abs(), w), w);
            t = t.mul(&a.powi(key.a_pow, w), w);
            acc = acc.add(&t, w);
        }
        acc.round_outward(prec)
    }

    /// Expression tree with named constants, for interval evaluation.
    pub fn to_expr(&self) -> Expr {
        let k = Expr::sub(
            Expr::named(ConstantName::Pi),
            Expr::mul(vec![Expr::int(4), Expr::named(ConstantName::AtanSqrt2Over5)]),
        );
        let terms: Vec<Expr> = self
            .0
            .iter()
            .map(|(key, q)| {
                let mut f = vec![Expr::rat(q.clone())];
                if key.sqrt2 {
                    f.push(Expr::named(ConstantName::Sqrt2));
                }
                match key.k_pow {
                    0 => {}
                    n if n > 0 => f.push(Expr::pow(k.clone(), n as u32)),
                    n => f.push(Expr::div(Expr::int(1), Expr::pow(k.clone(), n.unsigned_abs()))),
                }
                if key.a_pow > 0 {
                    f.push(Expr::pow(Expr::named(ConstantName::AtanSqrt2Over5), key.a_pow));
                }
                Expr::mul(f)
            })
            .collect();
        if terms.is_empty() {
            Expr::int(0)
        } else {
            Expr::add(terms)
        }
    }
}

impl Ring for Sym {
    fn zero() -> Self {
        Sym::default()
    }

    fn one() -> Self {
        Sym::rational(rat_int(1))
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(|| rat_int(0));
            *e += c;
            if Zero::is_zero(e) {
                m.remove(k);
            }
        }
        Sym(m)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<SymKey, Rational> = BTreeMap::new();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                let (k, doubled) = k1.mul(*k2);
                let mut c = c1 * c2;
                if doubled {
                    c *= rat_int(2);
                }
                *m.entry(k).or_insert_with(|| rat_int(0)) += c;
            }
        }
        m.retain(|_, c| !Zero::is_zero(c));
        Sym(m)
    }

    fn neg(&self) -> Self {
        Sym(self.0.iter().map(|(k, c)| (*k, -c)).collect())
    }

    fn from_rational(q: &Rational) -> Self {
        Sym::rational(q.clone())
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (key, q)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            let q = q.abs();
            let mut parts = Vec::new();
            if !q.is_one() || *key == SymKey::ONE {
                parts.push(rational_to_string(&q));
            }
            if key.sqrt2 {
                parts.push("sqrt2".to_string());
            }
            match key.k_pow {
                0 => {}
                1 => parts.push("K".to_string()),
                n => parts.push(format!("K^{n}")),
            }
            match key.a_pow {
                0 => {}
                1 => parts.push("A".to_string()),
                n => parts.push(format!("A^{n}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(Sym::sqrt2().mul(&Sym::sqrt2()).as_rational(), Some(rat_int(2)));
        assert_eq!(Sym::k().mul(&Sym::k_pow(-1)).as_rational(), Some(rat_int(1)));
        assert_eq!(Sym::sqrt2().scale(&rat(3, 7)).as_sqrt2_multiple(), Some(rat(3, 7)));
        assert!(Sym::a().as_rational().is_none());
    }

    #[test]
    fn constants_match_enclosures() {
        let cases = [
            (Sym::pi(), ConstantName::Pi),
            (Sym::pt(), ConstantName::Pt),
            (Sym::delta_oct(), ConstantName::DeltaOct),
            (Sym::sqrt2(), ConstantName::Sqrt2),
        ];
        for (s, name) in cases {
            let got = s.enclose(64);
            let want = enclose_constant(name, 64);
            assert!(got.intersects(&want), "{name}: {got} vs {want}");
            assert!(got.width().to_f64() < 1e-17);
        }
    }

    #[test]
    fn expr_form_agrees() {
        let s = Sym::delta_oct().mul(&Sym::k_pow(-2)).add(&Sym::a().scale(&rat(-5, 3)));
        let b = crate::numeric::RatBox::point(&[]);
        let e = crate::expr::eval_interval(&s.to_expr(), &b, 64).unwrap();
        assert!(e.intersects(&s.enclose(64)));
    }

    #[test]
    fn display_is_readable() {
        let s = Sym::pt();
        assert_eq!(s.to_string(), "8/3*A - 1/3*K");
    }
}
