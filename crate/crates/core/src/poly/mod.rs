//! Exact sparse multivariate polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numeric::{rat_int, Interval, RatBox, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("degenerate box: coordinate {0} has zero width")]
    DegenerateBox(usize),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Coefficient ring for [`SparsePoly`].
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
}

/// Exponent vector of fixed arity, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial as a map from monomials to non-zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<C: Ring = Rational> {
    arity: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> SparsePoly<C> {
    pub fn zero(arity: usize) -> Self {
        SparsePoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arity), c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, C::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(i: usize, arity: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = Self::zero(arity);
        p.terms.insert(Monomial(e), C::one());
        p
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (e, c) in terms {
            if e.len() != arity {
                return Err(PolyError::ArityMismatch {
                    expected: arity,
                    got: e.len(),
                });
            }
            accumulate(&mut acc, Monomial(e), c);
        }
        Ok(Self::from_map(arity, acc))
    }

    fn from_map(arity: usize, acc: HashMap<Monomial, C>) -> Self {
        SparsePoly {
            arity,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Maximum exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.arity];
        for m in self.terms.keys() {
            for (k, e) in d.iter_mut().zip(&m.0) {
                *k = (*k).max(*e);
            }
        }
        d
    }

    fn check(&self, o: &Self) -> Result<(), PolyError> {
        if self.arity != o.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: o.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m, c);
        }
        Ok(SparsePoly {
            arity: self.arity,
            terms,
        })
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, PolyError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                accumulate(&mut acc, m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(Self::from_map(self.arity, acc))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        SparsePoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.mul(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn add_constant(&self, c: &C) -> Self {
        self.add(&Self::constant(self.arity, c.clone())).unwrap()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(self.arity);
        for _ in 0..n {
            r = r.mul(self).unwrap();
        }
        r
    }

    /// Substitute `args[i]` for `x_i`.
    pub fn compose(&self, args: &[SparsePoly<C>]) -> Result<SparsePoly<C>, PolyError> {
        if args.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let out_arity = args.first().map(|a| a.arity).unwrap_or(0);
        if let Some(a) = args.iter().find(|a| a.arity != out_arity) {
            return Err(PolyError::ArityMismatch {
                expected: out_arity,
                got: a.arity,
            });
        }
        // Cache powers of each argument.
        let degs = self.degrees();
        let powers: Vec<Vec<SparsePoly<C>>> = args
            .iter()
            .zip(&degs)
            .map(|(a, &d)| {
                let mut v = vec![SparsePoly::one(out_arity)];
                for k in 1..=d as usize {
                    let next = v[k - 1].mul(a).unwrap();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = SparsePoly::zero(out_arity);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(out_arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]).unwrap();
                }
            }
            out = out.add(&t).unwrap();
        }
        Ok(out)
    }

    /// Rename variables: `x_i` becomes `x_{perm[i]}` in the result, so that
    /// `q(y) = p(y[perm[0]], ..., y[perm[n-1]])`.
    pub fn permute(&self, perm: &[usize]) -> Result<SparsePoly<C>, PolyError> {
        let args: Vec<_> = perm.iter().map(|&j| Self::var(j, self.arity)).collect();
        self.compose(&args)
    }

    /// Evaluate at a rational point inside the coefficient ring.
    pub fn eval_ring(&self, point: &[Rational]) -> Result<C, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let degs = self.degrees();
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&degs)
            .map(|(x, &d)| {
                let mut v = vec![<Rational as One>::one()];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut mono = <Rational as One>::one();
            for (i, &e) in m.0.iter().enumerate() {
                mono *= &powers[i][e as usize];
            }
            acc = acc.add(&c.mul(&C::from_rational(&mono)));
        }
        Ok(acc)
    }

    /// Map every coefficient through `f`, dropping any that become zero.
    pub fn map_coeffs<D: Ring, F: Fn(&C) -> D>(&self, f: F) -> SparsePoly<D> {
        SparsePoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn try_map_coeffs<D: Ring, E, F: Fn(&C) -> Result<D, E>>(&self, f: F) -> Result<SparsePoly<D>, E> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Ok(SparsePoly {
            arity: self.arity,
            terms,
        })
    }
}

fn accumulate<C: Ring>(acc: &mut HashMap<Monomial, C>, m: Monomial, c: C) {
    match acc.get_mut(&m) {
        Some(v) => *v = v.add(&c),
        None => {
            acc.insert(m, c);
        }
    }
}

fn add_term<C: Ring>(terms: &mut BTreeMap<Monomial, C>, m: &Monomial, c: &C) {
    match terms.get_mut(m) {
        Some(v) => {
            let s = v.add(c);
            if s.is_zero() {
                terms.remove(m);
            } else {
                *v = s;
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
    }
}

impl SparsePoly<Rational> {
    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.eval_ring(point)
    }

    /// Interval enclosure of the range over `b`, term by term.
    pub fn eval_interval(&self, b: &RatBox, prec: u32) -> Result<Interval, PolyError> {
        if b.dim() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: b.dim(),
            });
        }
        let xs = b.to_intervals(prec);
        let degs = self.degrees();
        let powers: Vec<Vec<Interval>> = xs
            .iter()
            .zip(&degs)
            .map(|(x, &d)| (0..=d).map(|k| x.powi(k, prec)).collect())
            .collect();
        let mut acc = Interval::zero();
        for (m, c) in &self.terms {
            let mut t = Interval::from_rational(c, prec);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize], prec);
                }
            }
            acc = acc.add(&t, prec);
        }
        Ok(acc)
    }

    /// `q(t) = p(lo + t (hi - lo))` coordinatewise, so `q` lives on `[0,1]^n`.
    pub fn affine_reparam(&self, b: &RatBox) -> Result<SparsePoly, PolyError> {
        if b.dim() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                got: b.dim(),
            });
        }
        let mut cur: HashMap<Monomial, Rational> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let degs = self.degrees();
        for (axis, &d) in degs.iter().enumerate() {
            let w = b.width(axis);
            if Zero::is_zero(&w) {
                return Err(PolyError::DegenerateBox(axis));
            }
            let lo = b.lo(axis).clone();
            let d = d as usize;
            if d == 0 {
                continue;
            }
            // (lo + w t)^e = sum_j C(e,j) lo^(e-j) w^j t^j
            let lo_pow = powers(&lo, d);
            let w_pow = powers(&w, d);
            let binom = binomials(d);
            let mut next: HashMap<Monomial, Rational> = HashMap::with_capacity(cur.len() * 2);
            for (m, c) in cur {
                let e = m.0[axis] as usize;
                for j in 0..=e {
                    if Zero::is_zero(&lo_pow[e - j]) {
                        continue;
                    }
                    let f = &c * &lo_pow[e - j] * &w_pow[j] * &binom[e][j];
                    let mut mm = m.clone();
                    mm.0[axis] = j as u32;
                    accumulate(&mut next, mm, f);
                }
            }
            cur = next;
        }
        Ok(Self::from_map(self.arity, cur))
    }
}

fn powers(x: &Rational, d: usize) -> Vec<Rational> {
    let mut v = vec![<Rational as One>::one()];
    for k in 1..=d {
        let n = &v[k - 1] * x;
        v.push(n);
    }
    v
}

/// Rows `0..=d` of Pascal's triangle as rationals.
pub(crate) fn binomials(d: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=d {
        let prev = &rows[n - 1];
        let mut r = vec![BigInt::one(); n + 1];
        for k in 1..n {
            r[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(r);
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    arity: usize,
    terms: Vec<(Vec<u32>, String, String)>,
}

impl Serialize for SparsePoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0.clone(), c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for (e, n, dd) in j.terms {
            let n: BigInt = n.parse().map_err(D::Error::custom)?;
            let dd: BigInt = dd.parse().map_err(D::Error::custom)?;
            if Zero::is_zero(&dd) {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((e, Rational::new(n, dd)));
        }
        SparsePoly::from_terms(j.arity, terms).map_err(D::Error::custom)
    }
}

/// Shorthand for building rational polynomials in tests and fixtures.
pub fn poly_from_ints(arity: usize, terms: &[(&[u32], i64)]) -> SparsePoly {
    SparsePoly::from_terms(arity, terms.iter().map(|(e, c)| (e.to_vec(), rat_int(*c)))).expect("arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    type P = SparsePoly<Rational>;

    fn x() -> P {
        P::var(0, 1)
    }

    #[test]
    fn difference_of_squares() {
        let one = P::one(1);
        let p = x().add(&one).unwrap().mul(&x().sub(&one).unwrap()).unwrap();
        assert_eq!(p, poly_from_ints(1, &[(&[2], 1), (&[0], -1)]));
    }

    #[test]
    fn additive_identity() {
        let p = poly_from_ints(2, &[(&[2, 1], 3), (&[0, 1], -2)]);
        assert_eq!(p.add(&P::zero(2)).unwrap(), p);
    }

    #[test]
    fn binomial_square_against_term_products() {
        let s = P::var(0, 2).add(&P::var(1, 2)).unwrap();
        let sq = s.mul(&s).unwrap();
        // Brute force: every ordered pair of terms.
        let mut expect = HashMap::new();
        for a in [[1u32, 0], [0, 1]] {
            for b in [[1u32, 0], [0, 1]] {
                *expect.entry(vec![a[0] + b[0], a[1] + b[1]]).or_insert(0) += 1;
            }
        }
        for (e, c) in expect {
            assert_eq!(sq.coeff(&Monomial(e)), rat_int(c));
        }
        assert_eq!(sq.monomial_count(), 3);
    }

    #[test]
    fn arity_mismatch() {
        assert!(P::var(0, 1).add(&P::var(0, 2)).is_err());
    }

    #[test]
    fn compose_shift() {
        let p = poly_from_ints(1, &[(&[2], 1)]);
        let q = p.compose(&[x().add_constant(&rat_int(1))]).unwrap();
        assert_eq!(q, poly_from_ints(1, &[(&[2], 1), (&[1], 2), (&[0], 1)]));
    }

    #[test]
    fn metadata() {
        let p = poly_from_ints(2, &[(&[2, 1], 1), (&[0, 1], 1)]);
        assert_eq!(p.total_degree(), 3);
        assert_eq!(P::zero(3).monomial_count(), 0);
        assert_eq!(p.degrees(), vec![2, 1]);
    }

    #[test]
    fn quadratic_discriminant_identity() {
        // variables (a, b, c, x)
        let v = |i| P::var(i, 4);
        let (a, b, c, xx) = (v(0), v(1), v(2), v(3));
        let two = rat_int(2);
        let four = rat_int(4);
        let lin = a.mul(&xx).unwrap().scale(&two).add(&b).unwrap();
        let quad = a
            .mul(&xx)
            .unwrap()
            .mul(&xx)
            .unwrap()
            .add(&b.mul(&xx).unwrap())
            .unwrap()
            .add(&c)
            .unwrap();
        let disc = b.mul(&b).unwrap().sub(&a.mul(&c).unwrap().scale(&four)).unwrap();
        let lhs = lin
            .mul(&lin)
            .unwrap()
            .sub(&a.mul(&quad).unwrap().scale(&four))
            .unwrap()
            .sub(&disc)
            .unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn reparam_linear_and_square() {
        let b = RatBox::new(vec![(rat(2, 1), rat(251, 100))]).unwrap();
        let q = x().affine_reparam(&b).unwrap();
        let expect = P::from_terms(1, vec![(vec![0], rat(2, 1)), (vec![1], rat(51, 100))]).unwrap();
        assert_eq!(q, expect);
        let b2 = RatBox::new(vec![(rat(0, 1), rat(2, 1))]).unwrap();
        let q2 = poly_from_ints(1, &[(&[2], 1)]).affine_reparam(&b2).unwrap();
        assert_eq!(q2, poly_from_ints(1, &[(&[2], 4)]));
        let flat = RatBox::new(vec![(rat(1, 1), rat(1, 1))]).unwrap();
        assert_eq!(x().affine_reparam(&flat), Err(PolyError::DegenerateBox(0)));
    }

    #[test]
    fn json_fixed_point() {
        let p = P::from_terms(2, vec![(vec![1, 0], rat(37, 1600)), (vec![0, 3], rat(-13, 640000))]).unwrap();
        let s1 = serde_json::to_string(&p).unwrap();
        let back: P = serde_json::from_str(&s1).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s1);
    }
}
