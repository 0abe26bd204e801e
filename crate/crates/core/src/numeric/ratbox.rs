use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, rat, Interval, NumericError, Rational};

/// Axis-aligned box with rational endpoints; every coordinate satisfies `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatBox {
    bounds: Vec<(Rational, Rational)>,
}

impl RatBox {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Result<Self, NumericError> {
        if bounds.iter().any(|(l, h)| l > h) {
            return Err(NumericError::Inverted);
        }
        Ok(RatBox { bounds })
    }

    /// `[lo, hi]^n`.
    pub fn cube(lo: Rational, hi: Rational, n: usize) -> Result<Self, NumericError> {
        Self::new(vec![(lo, hi); n])
    }

    pub fn point(x: &[Rational]) -> Self {
        RatBox {
            bounds: x.iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn lo(&self, i: usize) -> &Rational {
        &self.bounds[i].0
    }

    pub fn hi(&self, i: usize) -> &Rational {
        &self.bounds[i].1
    }

    pub fn width(&self, i: usize) -> Rational {
        &self.bounds[i].1 - &self.bounds[i].0
    }

    /// Coordinate with the widest extent; ties go to the lowest index.
    pub fn widest_axis(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.width(i) > self.width(best) {
                best = i;
            }
        }
        best
    }

    pub fn bisect(&self, axis: usize) -> (RatBox, RatBox) {
        let (l, h) = &self.bounds[axis];
        let m = (l + h) / rat(2, 1);
        let mut a = self.clone();
        let mut b = self.clone();
        a.bounds[axis].1 = m.clone();
        b.bounds[axis].0 = m;
        (a, b)
    }

    pub fn midpoint(&self) -> Vec<Rational> {
        self.bounds.iter().map(|(l, h)| (l + h) / rat(2, 1)).collect()
    }

    pub fn lo_corner(&self) -> Vec<Rational> {
        self.bounds.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && self.bounds.iter().zip(x).all(|((l, h), v)| l <= v && v <= h)
    }

    pub fn to_intervals(&self, prec: u32) -> Vec<Interval> {
        self.bounds
            .iter()
            .map(|(l, h)| Interval::from_rationals(l, h, prec).expect("lo <= hi"))
            .collect()
    }

    /// Point at fractional position `t` (each in `[0,1]`) inside the box.
    pub fn at(&self, t: &[Rational]) -> Vec<Rational> {
        self.bounds.iter().zip(t).map(|((l, h), s)| l + (h - l) * s).collect()
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Serialize for RatBox {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self
            .bounds
            .iter()
            .map(|(l, h)| [rational_to_string(l), rational_to_string(h)])
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatBox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<[String; 2]> = Vec::deserialize(d)?;
        let mut bounds = Vec::with_capacity(v.len());
        for [l, h] in v {
            let l = parse_rational(&l).map_err(serde::de::Error::custom)?;
            let h = parse_rational(&h).map_err(serde::de::Error::custom)?;
            bounds.push((l, h));
        }
        RatBox::new(bounds).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a rational as a string such as `"251/100"`.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        rational_to_string(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
