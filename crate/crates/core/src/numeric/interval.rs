use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::{format_decimal, Dyadic, NumericError, Rational};

/// Significant bits kept for precision `prec`: the leading bit plus `prec`
/// further bits, so an endpoint in `[1, 2)` has spacing `2^-prec`.
pub(crate) fn sig(prec: u32) -> u32 {
    prec + 1
}

/// Closed interval with dyadic endpoints.
///
/// Every operation takes a precision `prec` and returns the tightest
/// interval whose endpoints fit in `sig(prec)` significant bits and which
/// contains the exact image. Because results are optimal for the budget,
/// raising `prec` never widens a result.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::Inverted);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// Tightest `prec`-bit enclosure of a rational.
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::round_rational_down(q, sig(prec)),
            hi: Dyadic::round_rational_up(q, sig(prec)),
        }
    }

    pub fn from_rationals(lo: &Rational, hi: &Rational, prec: u32) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::Inverted);
        }
        Ok(Interval {
            lo: Dyadic::round_rational_down(lo, sig(prec)),
            hi: Dyadic::round_rational_up(hi, sig(prec)),
        })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn round_outward(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round_down(sig(prec)),
            hi: self.hi.round_up(sig(prec)),
        }
    }

    fn from_exact(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval { lo, hi }.round_outward(prec)
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Self::from_exact(&self.lo + &o.lo, &self.hi + &o.hi, prec)
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Self::from_exact(&self.lo - &o.hi, &self.hi - &o.lo, prec)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::from_exact(lo, hi, prec)
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Result<Interval, NumericError> {
        if o.contains_zero() {
            return Err(NumericError::Domain("division by an interval containing 0".into()));
        }
        let (a, b) = (self.lo.to_rational(), self.hi.to_rational());
        let (c, d) = (o.lo.to_rational(), o.hi.to_rational());
        let q = [&a / &c, &a / &d, &b / &c, &b / &d];
        let lo = q.iter().min().unwrap();
        let hi = q.iter().max().unwrap();
        Ok(Interval {
            lo: Dyadic::round_rational_down(lo, sig(prec)),
            hi: Dyadic::round_rational_up(hi, sig(prec)),
        })
    }

    pub fn recip(&self, prec: u32) -> Result<Interval, NumericError> {
        Interval::from_int(1).div(self, prec)
    }

    /// Natural power; even powers of a sign-straddling interval start at 0.
    pub fn powi(&self, n: u32, prec: u32) -> Interval {
        if n == 0 {
            return Interval::from_int(1);
        }
        let pow = |d: &Dyadic| -> Dyadic {
            let mut r = Dyadic::one();
            for _ in 0..n {
                r = &r * d;
            }
            r
        };
        let (pl, ph) = (pow(&self.lo), pow(&self.hi));
        let (lo, hi) = if n % 2 == 1 || !self.lo.is_negative() {
            (pl, ph)
        } else if !self.hi.is_positive() {
            (ph, pl)
        } else {
            (Dyadic::zero(), pl.max(ph))
        };
        Self::from_exact(lo, hi, prec)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Interval, NumericError> {
        if self.lo.is_negative() {
            return Err(NumericError::Domain(
                "square root of an interval with negative lower end".into(),
            ));
        }
        Ok(Interval {
            lo: sqrt_dyadic(&self.lo, prec, false),
            hi: sqrt_dyadic(&self.hi, prec, true),
        })
    }

    /// Arctangent; monotone, so each endpoint is rounded independently.
    pub fn atan(&self, prec: u32) -> Interval {
        let lo = atan_rounded(&self.lo, prec).lo;
        let hi = atan_rounded(&self.hi, prec).hi;
        Interval { lo, hi }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    /// Directed decimal rendering `[lo, hi]` that still encloses the value.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            format_decimal(&self.lo.to_rational(), digits, false),
            format_decimal(&self.hi.to_rational(), digits, true)
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(17))
    }
}

/// Floor (or ceiling) of `sqrt(d)` on the `prec`-bit grid, computed exactly.
fn sqrt_dyadic(d: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    // Scale so the integer square root carries at least prec + 2 bits.
    let m = d.mantissa();
    let mut e = d.exponent();
    let want = 2 * (prec as i64 + 2);
    let mut shift = (want - m.bits() as i64).max(0);
    if (e - shift).rem_euclid(2) != 0 {
        shift += 1;
    }
    let scaled: BigInt = m << shift as usize;
    e -= shift;
    let r = scaled.sqrt();
    let exact = &r * &r == scaled;
    let r = if up && !exact { r + 1 } else { r };
    let v = Dyadic::new(r, e / 2);
    if up {
        v.round_up(sig(prec))
    } else {
        v.round_down(sig(prec))
    }
}

/// Repeatedly compute `f` at growing working precision until the enclosure
/// falls inside a single `prec`-bit grid cell, then return that cell.
pub(crate) fn correctly_rounded<F>(prec: u32, f: F) -> Interval
where
    F: Fn(u32) -> Interval,
{
    let mut guard = 32u32;
    loop {
        let raw = f(prec + guard);
        let cell = raw.round_outward(prec);
        let settled = raw.lo.round_up(sig(prec)) == raw.hi.round_up(sig(prec))
            && raw.lo.round_down(sig(prec)) == raw.hi.round_down(sig(prec));
        if settled || guard > 4 * prec + 512 {
            return cell;
        }
        guard *= 2;
    }
}

fn atan_rounded(x: &Dyadic, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::zero();
    }
    let p = Interval::point(x.clone());
    correctly_rounded(prec, |w| atan_enclosure(&p, w))
}

/// Enclosure of `atan` over `x` with absolute error around `2^-w`.
///
/// Three half-angle reductions `x -> x / (1 + sqrt(1 + x^2))` bring any
/// argument below `tan(pi/16)`, where the alternating series is summed with an
/// explicit remainder bound.
pub(crate) fn atan_enclosure(x: &Interval, w: u32) -> Interval {
    let wp = w + 16;
    let one = Interval::from_int(1);
    let mut t = x.clone();
    for _ in 0..3 {
        let s = one.add(&t.powi(2, wp), wp).sqrt(wp).expect("1 + x^2 > 0");
        t = t.div(&one.add(&s, wp), wp).expect("1 + sqrt(..) > 0");
    }
    atan_series(&t, wp).mul(&Interval::from_int(8), wp)
}

/// `atan` for `|x| <= 1/2` by the alternating Taylor series with remainder.
pub(crate) fn atan_series(x: &Interval, w: u32) -> Interval {
    let amax = x.lo.abs().max(x.hi.abs());
    debug_assert!(amax <= Dyadic::new(BigInt::one(), -1));
    let x2 = x.powi(2, w);
    let mut power = x.clone();
    let mut sum = Interval::zero();
    let eps = Dyadic::new(BigInt::one(), -(w as i64) - 4);
    let mut bound = amax.clone();
    let amax2 = &amax * &amax;
    let mut k: i64 = 0;
    loop {
        let term = power.div(&Interval::from_int(2 * k + 1), w).unwrap();
        sum = if k % 2 == 0 {
            sum.add(&term, w)
        } else {
            sum.sub(&term, w)
        };
        power = power.mul(&x2, w);
        bound = (&bound * &amax2).round_up(w);
        k += 1;
        // Next omitted term bounds the tail of an alternating series.
        let next = bound.to_rational() / Rational::from_integer(BigInt::from(2 * k + 1));
        if next <= eps.to_rational() || bound.is_zero() {
            let r = Dyadic::round_rational_up(&next, w);
            let rem = Interval { lo: -&r, hi: r };
            return sum.add(&rem, w);
        }
    }
}
