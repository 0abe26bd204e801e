use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::interval::{atan_enclosure, atan_series, correctly_rounded};
use super::{rat, Interval, NumericError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstantName {
    Pi,
    Sqrt2,
    AtanSqrt2Over5,
    Pt,
    DeltaOct,
}

impl ConstantName {
    pub const ALL: [ConstantName; 5] = [
        ConstantName::Pi,
        ConstantName::Sqrt2,
        ConstantName::AtanSqrt2Over5,
        ConstantName::Pt,
        ConstantName::DeltaOct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstantName::Pi => "PI",
            ConstantName::Sqrt2 => "SQRT2",
            ConstantName::AtanSqrt2Over5 => "ATAN_SQRT2_OVER_5",
            ConstantName::Pt => "PT",
            ConstantName::DeltaOct => "DELTA_OCT",
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantName {
    type Err = NumericError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        match norm.as_str() {
            "PI" => Ok(ConstantName::Pi),
            "SQRT2" => Ok(ConstantName::Sqrt2),
            "ATAN_SQRT2_OVER_5" => Ok(ConstantName::AtanSqrt2Over5),
            "PT" => Ok(ConstantName::Pt),
            "DELTA_OCT" => Ok(ConstantName::DeltaOct),
            _ => Err(NumericError::Parse(s.to_string())),
        }
    }
}

fn raw_pi(w: u32) -> Interval {
    // 16 atan(1/5) - 4 atan(1/239)
    let a = atan_series(&Interval::from_rational(&rat(1, 5), w), w);
    let b = atan_series(&Interval::from_rational(&rat(1, 239), w), w);
    a.mul(&Interval::from_int(16), w)
        .sub(&b.mul(&Interval::from_int(4), w), w)
}

fn raw_sqrt2(w: u32) -> Interval {
    Interval::from_int(2).sqrt(w).expect("2 > 0")
}

fn raw_atan_sqrt2_over_5(w: u32) -> Interval {
    let x = raw_sqrt2(w).div(&Interval::from_int(5), w).expect("5 != 0");
    atan_enclosure(&x, w)
}

fn raw(name: ConstantName, w: u32) -> Interval {
    match name {
        ConstantName::Pi => raw_pi(w),
        ConstantName::Sqrt2 => raw_sqrt2(w),
        ConstantName::AtanSqrt2Over5 => raw_atan_sqrt2_over_5(w),
        ConstantName::Pt => {
            let pi = raw_pi(w);
            let a = raw_atan_sqrt2_over_5(w);
            a.mul(&Interval::from_int(4), w)
                .sub(&pi.div(&Interval::from_int(3), w).unwrap(), w)
        }
        ConstantName::DeltaOct => {
            let pi = raw_pi(w);
            let a = raw_atan_sqrt2_over_5(w);
            let num = pi.sub(&a.mul(&Interval::from_int(4), w), w);
            let den = raw_sqrt2(w).mul(&Interval::from_int(2), w);
            num.div(&den, w).unwrap()
        }
    }
}

fn cache() -> &'static Mutex<HashMap<(ConstantName, u32), Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<(ConstantName, u32), Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Tightest `precision`-bit enclosure of a named constant (one grid cell wide).
///
/// Values are memoized per `(name, precision)`.
pub fn enclose_constant(name: ConstantName, precision: u32) -> Interval {
    let precision = precision.max(8);
    if let Some(v) = cache().lock().unwrap().get(&(name, precision)) {
        return v.clone();
    }
    let v = correctly_rounded(precision, |w| raw(name, w));
    cache().lock().unwrap().insert((name, precision), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_rational, Rational};
    use num_bigint::BigInt;
    use num_traits::One;

    fn max_width(p: u32) -> Rational {
        Rational::new(BigInt::from(4), BigInt::one() << p as usize)
    }

    #[test]
    fn pi_53_bits() {
        let pi = enclose_constant(ConstantName::Pi, 53);
        assert!(pi.contains_rational(&parse_rational("3.14159265358979323846").unwrap()));
        assert!(pi.width().to_rational() <= max_width(53));
    }

    #[test]
    fn pt_and_delta_oct_values() {
        let pt = enclose_constant(ConstantName::Pt, 53);
        let (l, h) = pt.to_f64_pair();
        assert!((l - 0.0553736).abs() < 1e-6 && (h - 0.0553736).abs() < 1e-6);
        let d = enclose_constant(ConstantName::DeltaOct, 53);
        let (l, h) = d.to_f64_pair();
        assert!((l - 0.720903).abs() < 1e-6 && (h - 0.720903).abs() < 1e-6);
    }

    #[test]
    fn widths_at_many_precisions() {
        for p in [8u32, 16, 32, 64, 128, 256] {
            for name in ConstantName::ALL {
                let c = enclose_constant(name, p);
                assert!(c.width().to_rational() <= max_width(p), "{name} at {p}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for name in ConstantName::ALL {
            assert_eq!(name.as_str().parse::<ConstantName>().unwrap(), name);
        }
        assert_eq!("pt".parse::<ConstantName>().unwrap(), ConstantName::Pt);
    }
}
