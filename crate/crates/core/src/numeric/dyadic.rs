use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Exact binary fraction `mantissa * 2^exponent`.
///
/// Canonical form: the mantissa is odd, or the value is zero with exponent 0.
/// Addition, subtraction and multiplication never round.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> tz,
                exponent: exponent + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.sign() == Sign::Plus
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiply by `2^k`; exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// `floor(log2 |x|)` for non-zero values.
    pub fn floor_log2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.mantissa.bits() as i64 - 1 + self.exponent
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    /// Exact conversion when the rational has a power-of-two denominator.
    pub fn from_rational_exact(q: &Rational) -> Option<Self> {
        let den = q.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep the top 64 bits to stay within f64 range handling.
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 64).max(0);
        let m: i128 = (&self.mantissa >> shift as usize).try_into().unwrap_or(0);
        (m as f64) * 2f64.powi((self.exponent + shift) as i32)
    }

    /// Largest value with at most `prec` significant bits that is `<= self`.
    pub fn round_down(&self, prec: u32) -> Self {
        self.round(prec, false)
    }

    /// Smallest value with at most `prec` significant bits that is `>= self`.
    pub fn round_up(&self, prec: u32) -> Self {
        self.round(prec, true)
    }

    fn round(&self, prec: u32, up: bool) -> Self {
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let divisor = BigInt::one() << shift as usize;
        let m = if up {
            self.mantissa.div_ceil(&divisor)
        } else {
            self.mantissa.div_floor(&divisor)
        };
        Dyadic::new(m, self.exponent + shift as i64)
    }

    /// Round an exact rational downward onto the `prec`-bit dyadic grid.
    pub fn round_rational_down(q: &Rational, prec: u32) -> Self {
        Self::round_rational(q, prec, false)
    }

    /// Round an exact rational upward onto the `prec`-bit dyadic grid.
    pub fn round_rational_up(q: &Rational, prec: u32) -> Self {
        Self::round_rational(q, prec, true)
    }

    fn round_rational(q: &Rational, prec: u32, up: bool) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        if let Some(d) = Self::from_rational_exact(q) {
            return d.round(prec, up);
        }
        let num = q.numer();
        let den = q.denom();
        let e = floor_log2_ratio(&num.abs(), den) - prec as i64 + 1;
        // m = round(q / 2^e), so that |m| has prec bits (possibly prec+1 after a carry).
        let (n, d) = if e >= 0 {
            (num.clone(), den << e as usize)
        } else {
            (num << (-e) as usize, den.clone())
        };
        let m = if up { n.div_ceil(&d) } else { n.div_floor(&d) };
        Dyadic::new(m, e).round(prec, up)
    }
}

/// `floor(log2(n / d))` for positive integers.
pub(crate) fn floor_log2_ratio(n: &BigInt, d: &BigInt) -> i64 {
    let l = n.bits() as i64 - d.bits() as i64;
    let ge = if l >= 0 {
        n >= &(d << l as usize)
    } else {
        (n << (-l) as usize) >= *d
    };
    if ge {
        l
    } else {
        l - 1
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s1 = self.mantissa.sign();
        let s2 = other.mantissa.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if s1 != s2 {
            return rank(s1).cmp(&rank(s2));
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &rhs.mantissa << (rhs.exponent - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", &self.mantissa << self.exponent as usize)
        } else {
            write!(f, "{}/2^{}", self.mantissa, -self.exponent)
        }
    }
}
