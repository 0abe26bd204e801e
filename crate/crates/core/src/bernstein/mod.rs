//! Tensor-product Bernstein coefficients on the unit box.
//!
//! Coefficients are stored as integer numerators over one common positive
//! denominator so that basis changes and de Casteljau splits stay in integer
//! arithmetic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::numeric::{Interval, RatBox, Rational};
use crate::poly::{PolyError, SparsePoly};

/// Largest tensor we agree to materialize (entries).
pub const MAX_ENTRIES: usize = 32_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BernsteinError {
    #[error("tensor with {0} entries exceeds the limit of {MAX_ENTRIES}")]
    TooLarge(usize),
    #[error("axis {axis} out of range for arity {arity}")]
    BadAxis { axis: usize, arity: usize },
    #[error("budget exhausted after {boxes} boxes; best enclosure [{lo}, {hi}]")]
    BudgetExhausted {
        lo: Box<Rational>,
        hi: Box<Rational>,
        boxes: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinTensor {
    degrees: Vec<u32>,
    denom: BigInt,
    nums: Vec<BigInt>,
}

fn extent(degrees: &[u32]) -> Result<usize, BernsteinError> {
    let mut n: usize = 1;
    for &d in degrees {
        n = n
            .checked_mul(d as usize + 1)
            .filter(|&v| v <= MAX_ENTRIES)
            .ok_or(BernsteinError::TooLarge(usize::MAX))?;
    }
    Ok(n)
}

fn strides(degrees: &[u32]) -> Vec<usize> {
    let mut s = vec![1usize; degrees.len()];
    for a in (0..degrees.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * (degrees[a + 1] as usize + 1);
    }
    s
}

fn binom_row(k: u32) -> Vec<BigInt> {
    let mut r = vec![BigInt::one()];
    for i in 0..k {
        let next = &r[i as usize] * BigInt::from(k - i) / BigInt::from(i + 1);
        r.push(next);
    }
    r
}

fn binom_table(k: u32) -> Vec<Vec<BigInt>> {
    (0..=k).map(binom_row).collect()
}

/// Apply `f` to every fiber along `axis`, in place.
fn for_each_fiber<F>(nums: &mut [BigInt], degrees: &[u32], axis: usize, f: F)
where
    F: Fn(&mut [BigInt]) + Sync,
{
    let st = strides(degrees);
    let len = degrees[axis] as usize + 1;
    let stride = st[axis];
    let block = len * stride;
    nums.par_chunks_mut(block).for_each(|blk| {
        let mut fiber = vec![BigInt::zero(); len];
        for o in 0..stride {
            for (j, v) in fiber.iter_mut().enumerate() {
                *v = std::mem::take(&mut blk[o + j * stride]);
            }
            f(&mut fiber);
            for (j, v) in fiber.iter_mut().enumerate() {
                blk[o + j * stride] = std::mem::take(v);
            }
        }
    });
}

impl BernsteinTensor {
    /// Exact Bernstein coefficients of `p` on `[0,1]^n`, using `p`'s own
    /// per-variable degrees.
    pub fn from_poly(p: &SparsePoly) -> Result<Self, BernsteinError> {
        Self::from_poly_with_degrees(p, &p.degrees())
    }

    pub fn from_poly_with_degrees(p: &SparsePoly, degrees: &[u32]) -> Result<Self, BernsteinError> {
        let n = p.arity();
        if degrees.len() != n {
            return Err(PolyError::ArityMismatch {
                expected: n,
                got: degrees.len(),
            }
            .into());
        }
        let size = extent(degrees)?;
        let st = strides(degrees);
        let mut denom = BigInt::one();
        for (_, c) in p.terms() {
            denom = denom.lcm(c.denom());
        }
        let mut nums = vec![BigInt::zero(); size];
        for (m, c) in p.terms() {
            let mut idx = 0;
            for (a, &e) in m.0.iter().enumerate() {
                if e > degrees[a] {
                    return Err(PolyError::Malformed(format!(
                        "degree {e} exceeds requested {} on axis {a}",
                        degrees[a]
                    ))
                    .into());
                }
                idx += e as usize * st[a];
            }
            nums[idx] = c.numer() * (&denom / c.denom());
        }
        // Per axis: b_i = sum_{j<=i} C(i,j)/C(k,j) a_j, scaled by lcm_j C(k,j).
        for axis in 0..n {
            let k = degrees[axis];
            if k == 0 {
                continue;
            }
            let table = binom_table(k);
            let ck = &table[k as usize];
            let m = ck.iter().fold(BigInt::one(), |acc, c| acc.lcm(c));
            let w: Vec<BigInt> = ck.iter().map(|c| &m / c).collect();
            for_each_fiber(&mut nums, degrees, axis, |fiber| {
                let a: Vec<BigInt> = fiber.iter().zip(&w).map(|(x, s)| x * s).collect();
                for i in 0..=k as usize {
                    let mut s = BigInt::zero();
                    for j in 0..=i {
                        if !a[j].is_zero() {
                            s += &table[i][j] * &a[j];
                        }
                    }
                    fiber[i] = s;
                }
            });
            denom *= m;
        }
        let mut t = BernsteinTensor {
            degrees: degrees.to_vec(),
            denom,
            nums,
        };
        t.reduce();
        Ok(t)
    }

    /// Divide out the common factor of all numerators and the denominator.
    fn reduce(&mut self) {
        let mut g = self.denom.clone();
        for v in &self.nums {
            if g.is_one() {
                return;
            }
            if !v.is_zero() {
                g = g.gcd(v);
            }
        }
        if g.is_one() || g.is_zero() {
            return;
        }
        self.denom /= &g;
        self.nums.par_iter_mut().for_each(|v| *v /= &g);
    }

    pub fn arity(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    fn flat(&self, idx: &[u32]) -> usize {
        let st = strides(&self.degrees);
        idx.iter().zip(&st).map(|(&i, &s)| i as usize * s).sum()
    }

    fn unflat(&self, mut f: usize) -> Vec<u32> {
        let st = strides(&self.degrees);
        st.iter()
            .map(|&s| {
                let i = f / s;
                f %= s;
                i as u32
            })
            .collect()
    }

    pub fn coeff(&self, idx: &[u32]) -> Rational {
        Rational::new(self.nums[self.flat(idx)].clone(), self.denom.clone())
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        self.nums
            .iter()
            .map(|v| Rational::new(v.clone(), self.denom.clone()))
            .collect()
    }

    /// `C(k, i) * b_i` (product over axes) for the given multi-index.
    pub fn scaled_coeff(&self, idx: &[u32]) -> Rational {
        let mut s = BigInt::one();
        for (&i, &k) in idx.iter().zip(&self.degrees) {
            s *= &binom_row(k)[i as usize];
        }
        self.coeff(idx) * Rational::from_integer(s)
    }

    /// Largest coefficient: a certified upper bound of the polynomial on the unit box.
    pub fn bound_max(&self) -> Rational {
        let m = self.nums.par_iter().max().expect("non-empty tensor");
        Rational::new(m.clone(), self.denom.clone())
    }

    pub fn bound_min(&self) -> Rational {
        let m = self.nums.par_iter().min().expect("non-empty tensor");
        Rational::new(m.clone(), self.denom.clone())
    }

    /// Multi-index of the first maximal coefficient.
    pub fn argmax(&self) -> Vec<u32> {
        let (i, _) = self
            .nums
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty tensor");
        self.unflat(i)
    }

    /// Coefficients at the `2^n` box corners; these equal the polynomial values there.
    pub fn corner_values(&self) -> Vec<Rational> {
        let n = self.arity();
        (0..1usize << n)
            .map(|mask| {
                let idx: Vec<u32> = (0..n)
                    .map(|a| if mask >> a & 1 == 1 { self.degrees[a] } else { 0 })
                    .collect();
                self.coeff(&idx)
            })
            .collect()
    }

    /// Evaluate the Bernstein form at a point of the unit box.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.arity());
        let mut cur: Vec<Rational> = self.coeffs();
        // Contract the last axis first so the remaining layout stays row-major.
        for axis in (0..self.arity()).rev() {
            let k = self.degrees[axis];
            let basis = basis_values(k, &x[axis]);
            let len = k as usize + 1;
            cur = cur
                .chunks(len)
                .map(|c| c.iter().zip(&basis).map(|(a, b)| a * b).sum())
                .collect();
        }
        cur.pop().unwrap()
    }

    /// de Casteljau split at `1/2` along `axis`; both halves are reparametrized to `[0,1]`.
    pub fn subdivide(&self, axis: usize) -> Result<(Self, Self), BernsteinError> {
        if axis >= self.arity() {
            return Err(BernsteinError::BadAxis {
                axis,
                arity: self.arity(),
            });
        }
        let k = self.degrees[axis] as usize;
        if k == 0 {
            return Ok((self.clone(), self.clone()));
        }
        let mut left = self.nums.clone();
        let mut right = self.nums.clone();
        // Scaled by 2^k: left_i = 2^(k-i) sum_{j<=i} C(i,j) b_j.
        let table = binom_table(k as u32);
        for_each_fiber(&mut left, &self.degrees, axis, |f| {
            let b: Vec<BigInt> = f.to_vec();
            for i in 0..=k {
                let mut s = BigInt::zero();
                for j in 0..=i {
                    s += &table[i][j] * &b[j];
                }
                f[i] = s << (k - i);
            }
        });
        for_each_fiber(&mut right, &self.degrees, axis, |f| {
            let b: Vec<BigInt> = f.to_vec();
            for i in 0..=k {
                let mut s = BigInt::zero();
                for j in i..=k {
                    s += &table[k - i][j - i] * &b[j];
                }
                f[i] = s << i;
            }
        });
        let denom = &self.denom << k;
        let mut l = BernsteinTensor {
            degrees: self.degrees.clone(),
            denom: denom.clone(),
            nums: left,
        };
        let mut r = BernsteinTensor {
            degrees: self.degrees.clone(),
            denom,
            nums: right,
        };
        l.reduce();
        r.reduce();
        Ok((l, r))
    }

    /// Raise the degree along `axis` by one without changing the polynomial.
    pub fn elevate(&self, axis: usize) -> Result<Self, BernsteinError> {
        if axis >= self.arity() {
            return Err(BernsteinError::BadAxis {
                axis,
                arity: self.arity(),
            });
        }
        let k = self.degrees[axis] as usize;
        let mut degrees = self.degrees.clone();
        degrees[axis] += 1;
        let size = extent(&degrees)?;
        let mut nums = vec![BigInt::zero(); size];
        let old_st = strides(&self.degrees);
        let new_st = strides(&degrees);
        // Scatter: each old fiber value lands in positions i and i+1.
        for (f, v) in self.nums.iter().enumerate() {
            let mut rem = f;
            let mut base = 0;
            let mut i_axis = 0;
            for a in 0..self.arity() {
                let i = rem / old_st[a];
                rem %= old_st[a];
                if a == axis {
                    i_axis = i;
                } else {
                    base += i * new_st[a];
                }
            }
            // b'_i = (i b_{i-1} + (k+1-i) b_i) / (k+1)
            nums[base + i_axis * new_st[axis]] += v * BigInt::from(k + 1 - i_axis);
            nums[base + (i_axis + 1) * new_st[axis]] += v * BigInt::from(i_axis + 1);
        }
        let mut t = BernsteinTensor {
            degrees,
            denom: &self.denom * BigInt::from(k + 1),
            nums,
        };
        t.reduce();
        Ok(t)
    }

    /// Largest difference between neighbouring coefficients along each axis.
    fn axis_spreads(&self) -> Vec<BigInt> {
        let st = strides(&self.degrees);
        (0..self.arity())
            .map(|a| {
                let k = self.degrees[a] as usize;
                let mut best = BigInt::zero();
                for (f, v) in self.nums.iter().enumerate() {
                    if (f / st[a]) % (k + 1) < k {
                        let d = (&self.nums[f + st[a]] - v).abs();
                        if d > best {
                            best = d;
                        }
                    }
                }
                best
            })
            .collect()
    }

    /// Subdivision axis: largest coefficient spread, ties to the lowest index.
    pub fn split_axis(&self) -> usize {
        let s = self.axis_spreads();
        let mut best = 0;
        for a in 1..s.len() {
            if s[a] > s[best] {
                best = a;
            }
        }
        best
    }
}

fn basis_values(k: u32, x: &Rational) -> Vec<Rational> {
    let one_minus = Rational::one() - x;
    let c = binom_row(k);
    (0..=k)
        .map(|i| {
            Rational::from_integer(c[i as usize].clone())
                * num_traits::pow(x.clone(), i as usize)
                * num_traits::pow(one_minus.clone(), (k - i) as usize)
        })
        .collect()
}

/// Reparametrize `p` so that `[0,1]^n` maps onto `b`. Zero-width coordinates
/// are substituted by their value and leave a constant axis behind.
pub fn to_unit_box(p: &SparsePoly, b: &RatBox) -> Result<SparsePoly, PolyError> {
    if (0..b.dim()).all(|i| !b.width(i).is_zero()) {
        return p.affine_reparam(b);
    }
    if b.dim() != p.arity() {
        return Err(PolyError::ArityMismatch {
            expected: p.arity(),
            got: b.dim(),
        });
    }
    let args: Vec<SparsePoly> = (0..b.dim())
        .map(|i| {
            if b.width(i).is_zero() {
                SparsePoly::constant(b.dim(), b.lo(i).clone())
            } else {
                SparsePoly::var(i, b.dim()).scale(&b.width(i)).add_constant(b.lo(i))
            }
        })
        .collect();
    p.compose(&args)
}

/// Exact rational range enclosure produced by [`range_enclosure`].
#[derive(Debug, Clone, PartialEq)]
pub struct RangeEnclosure {
    /// Certified bounds: `lo <= p(x) <= hi` on the box.
    pub lo: Rational,
    pub hi: Rational,
    /// Attained values (from corner samples) bracketing the true range from inside.
    pub inner_lo: Rational,
    pub inner_hi: Rational,
    pub boxes: usize,
    pub subdivisions: usize,
}

impl RangeEnclosure {
    pub fn interval(&self, prec: u32) -> Interval {
        Interval::from_rationals(&self.lo, &self.hi, prec).expect("lo <= hi")
    }
}

struct Leaf {
    t: BernsteinTensor,
    lo: Rational,
    hi: Rational,
    key: Rational,
    seq: usize,
}

impl PartialEq for Leaf {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Leaf {}
impl PartialOrd for Leaf {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Leaf {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.cmp(&o.key).then(o.seq.cmp(&self.seq))
    }
}

/// Range of `p` on `b` by Bernstein coefficients with branch-and-bound
/// subdivision, stopping once the certified enclosure exceeds the attained
/// corner values by at most `tolerance` in total.
pub fn range_enclosure(
    p: &SparsePoly,
    b: &RatBox,
    tolerance: &Rational,
    budget: usize,
) -> Result<RangeEnclosure, BernsteinError> {
    let budget = budget.max(1);
    let q = to_unit_box(p, b)?;
    let root = BernsteinTensor::from_poly(&q)?;
    let corners = |t: &BernsteinTensor| {
        let c = t.corner_values();
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        (lo, hi)
    };
    let (mut inner_lo, mut inner_hi) = corners(&root);
    let mut seq = 0usize;
    let mut upper: BinaryHeap<Leaf> = BinaryHeap::new();
    let mut lower: BinaryHeap<Leaf> = BinaryHeap::new();
    let mk = |t: BernsteinTensor, seq: usize| {
        let lo = t.bound_min();
        let hi = t.bound_max();
        (t, lo, hi, seq)
    };
    let (t, lo, hi, s) = mk(root, seq);
    // Each leaf lives in both heaps (by max for the upper gap, by -min for the lower gap).
    let mut live: Vec<bool> = vec![true];
    upper.push(Leaf {
        t: t.clone(),
        lo: lo.clone(),
        hi: hi.clone(),
        key: hi.clone(),
        seq: s,
    });
    lower.push(Leaf {
        t,
        lo: lo.clone(),
        hi: hi.clone(),
        key: -lo,
        seq: s,
    });
    let mut boxes = 1usize;
    let mut subdivisions = 0usize;
    loop {
        while upper.peek().is_some_and(|l| !live[l.seq]) {
            upper.pop();
        }
        while lower.peek().is_some_and(|l| !live[l.seq]) {
            lower.pop();
        }
        let hi = upper.peek().unwrap().hi.clone();
        let lo = lower.peek().unwrap().lo.clone();
        let gap_hi = &hi - &inner_hi;
        let gap_lo = &inner_lo - &lo;
        if &gap_hi + &gap_lo <= *tolerance {
            return Ok(RangeEnclosure {
                lo,
                hi,
                inner_lo,
                inner_hi,
                boxes,
                subdivisions,
            });
        }
        if boxes + 1 > budget {
            return Err(BernsteinError::BudgetExhausted {
                lo: Box::new(lo),
                hi: Box::new(hi),
                boxes,
            });
        }
        let leaf = if gap_hi >= gap_lo {
            upper.pop().unwrap()
        } else {
            lower.pop().unwrap()
        };
        live[leaf.seq] = false;
        let axis = leaf.t.split_axis();
        let (l, r) = leaf.t.subdivide(axis)?;
        subdivisions += 1;
        boxes += 1;
        for child in [l, r] {
            let (cl, ch) = corners(&child);
            if cl < inner_lo {
                inner_lo = cl;
            }
            if ch > inner_hi {
                inner_hi = ch;
            }
            seq += 1;
            live.push(true);
            let (t, lo, hi, s) = mk(child, seq);
            upper.push(Leaf {
                t: t.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
                key: hi.clone(),
                seq: s,
            });
            lower.push(Leaf {
                t,
                lo: lo.clone(),
                hi,
                key: -lo,
                seq: s,
            });
        }
    }
}
