//! Random interval linear systems with known answers, and an exact
//! Fourier–Motzkin feasibility oracle over the rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use rigorkit::lp::IntervalLinearSystem;
use rigorkit::numeric::{Dyadic, Rational};

/// `k / 2^e`.
pub fn dy(k: i64, e: i64) -> Dyadic {
    Dyadic::new(BigInt::from(k), -e)
}

fn q(d: &Dyadic) -> Rational {
    d.to_rational()
}

/// A system together with a point that satisfies it for every admissible
/// matrix, or with the size of a built-in contradiction.
pub struct Planted {
    pub system: IntervalLinearSystem,
    pub witness: Option<Vec<Rational>>,
    /// Width of the gap between the two contradictory rows.
    pub delta: Option<Rational>,
}

fn random_rows(rng: &mut StdRng, m: usize, n: usize) -> (Vec<Vec<Dyadic>>, Vec<Vec<Dyadic>>) {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..m {
        let (mut l, mut h) = (Vec::new(), Vec::new());
        for _ in 0..n {
            let c = dy(rng.gen_range(-20..=20), 2);
            let w = if rng.gen_bool(0.3) {
                Dyadic::zero()
            } else {
                dy(1, rng.gen_range(10..=30))
            };
            l.push(&c - &w);
            h.push(&c + &w);
        }
        lo.push(l);
        hi.push(h);
    }
    (lo, hi)
}

fn row_max(lo: &[Dyadic], hi: &[Dyadic], x: &[Rational]) -> Rational {
    (0..x.len())
        .map(|j| std::cmp::max(q(&lo[j]) * &x[j], q(&hi[j]) * &x[j]))
        .sum()
}

fn row_min(lo: &[Dyadic], hi: &[Dyadic], xl: &[Dyadic], xh: &[Dyadic]) -> Rational {
    (0..lo.len())
        .map(|j| {
            [
                q(&lo[j]) * q(&xl[j]),
                q(&lo[j]) * q(&xh[j]),
                q(&hi[j]) * q(&xl[j]),
                q(&hi[j]) * q(&xh[j]),
            ]
            .into_iter()
            .min()
            .unwrap()
        })
        .sum()
}

fn boxes(rng: &mut StdRng, n: usize) -> (Vec<Dyadic>, Vec<Dyadic>) {
    let k: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    (
        k.iter().map(|&k| Dyadic::from_int(-k)).collect(),
        k.iter().map(|&k| Dyadic::from_int(k)).collect(),
    )
}

/// Every row holds at a planted point `x0` for every matrix in the box,
/// so the interval system is feasible.
pub fn planted_feasible(rng: &mut StdRng, max_m: usize, max_n: usize) -> Planted {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let (xl, xh) = boxes(rng, n);
    let x0: Vec<Dyadic> = (0..n)
        .map(|j| {
            let k = xh[j].to_f64() as i64 * 8;
            dy(rng.gen_range(-k..=k), 3)
        })
        .collect();
    let x0q: Vec<Rational> = x0.iter().map(q).collect();
    let (lo, hi) = random_rows(rng, m, n);
    let b = (0..m)
        .map(|i| {
            let top = row_max(&lo[i], &hi[i], &x0q);
            let slack = Rational::new(BigInt::from(rng.gen_range(0..=16)), BigInt::from(8));
            Dyadic::round_rational_up(&(top + slack), 64)
        })
        .collect();
    Planted {
        system: IntervalLinearSystem::new(lo, hi, b, xl, xh).unwrap(),
        witness: Some(x0q),
        delta: None,
    }
}

/// A feasible-looking system plus two rows `a·x ≤ t` and `−a·x ≤ −t − δ`
/// with `δ` much larger than what the interval widths can absorb.
pub fn constructed_infeasible(rng: &mut StdRng, max_m: usize, max_n: usize) -> Planted {
    let mut p = planted_feasible(rng, max_m, max_n);
    let s = &p.system;
    let n = s.cols();
    let (mut lo, mut hi, mut b) = (s.a_lo.clone(), s.a_hi.clone(), s.b_hi.clone());
    let (r_lo, r_hi) = random_rows(rng, 1, n);
    let (r_lo, r_hi) = (&r_lo[0], &r_hi[0]);
    // Make sure the row is not identically zero.
    let (r_lo, r_hi): (Vec<Dyadic>, Vec<Dyadic>) = if r_lo.iter().zip(r_hi).all(|(l, h)| l.is_zero() && h.is_zero()) {
        let mut l = r_lo.clone();
        let mut h = r_hi.clone();
        l[0] = Dyadic::one();
        h[0] = Dyadic::one();
        (l, h)
    } else {
        (r_lo.clone(), r_hi.clone())
    };
    let t = dy(rng.gen_range(-16..=16), 2);
    let delta = dy(rng.gen_range(2..=8), 2);
    lo.push(r_lo.clone());
    hi.push(r_hi.clone());
    b.push(t.clone());
    lo.push(r_hi.iter().map(|v| -v).collect());
    hi.push(r_lo.iter().map(|v| -v).collect());
    b.push(-(&t + &delta));
    // Shuffle the contradictory pair into the middle of the rows.
    let m = b.len();
    let k = rng.gen_range(0..m - 1);
    for v in [&mut lo, &mut hi] {
        let r = v.split_off(m - 2);
        for (off, row) in r.into_iter().enumerate() {
            v.insert(k + off, row);
        }
    }
    let r = b.split_off(m - 2);
    for (off, row) in r.into_iter().enumerate() {
        b.insert(k + off, row);
    }
    p.system = IntervalLinearSystem::new(lo, hi, b, s.x_lo.clone(), s.x_hi.clone()).unwrap();
    p.witness = None;
    p.delta = Some(q(&delta));
    p
}

/// Largest `|A_hi − A_lo|·max|x|` summed over a row, over all rows.
pub fn width_budget(s: &IntervalLinearSystem) -> Rational {
    (0..s.rows())
        .map(|i| {
            (0..s.cols())
                .map(|j| {
                    (q(&s.a_hi[i][j]) - q(&s.a_lo[i][j])) * std::cmp::max(q(&s.x_lo[j]).abs(), q(&s.x_hi[j]).abs())
                })
                .sum::<Rational>()
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Does `A x ≤ b` hold at `x` for every admissible matrix?
pub fn robustly_satisfied(s: &IntervalLinearSystem, x: &[Rational]) -> bool {
    (0..s.cols()).all(|j| q(&s.x_lo[j]) <= x[j] && x[j] <= q(&s.x_hi[j]))
        && (0..s.rows()).all(|i| row_max(&s.a_lo[i], &s.a_hi[i], x) <= q(&s.b_hi[i]))
}

/// Some row is violated by every point in the box, for every matrix.
pub fn trivially_infeasible(s: &IntervalLinearSystem) -> bool {
    (0..s.rows()).any(|i| row_min(&s.a_lo[i], &s.a_hi[i], &s.x_lo, &s.x_hi) > q(&s.b_hi[i]))
}

/// Exact feasibility of `A x ≤ b`, `lo ≤ x ≤ hi` by Fourier–Motzkin
/// elimination.
pub fn fm_feasible(a: &[Vec<Rational>], b: &[Rational], lo: &[Rational], hi: &[Rational]) -> bool {
    let n = lo.len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::from_integer(1.into());
        rows.push((e.clone(), hi[j].clone()));
        let neg: Vec<Rational> = e.iter().map(|v| -v).collect();
        rows.push((neg, -lo[j].clone()));
    }
    for j in 0..n {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for (r, c) in rows {
            if r[j].is_positive() {
                pos.push((r, c));
            } else if r[j].is_negative() {
                neg.push((r, c));
            } else {
                keep.push((r, c));
            }
        }
        for (rp, cp) in &pos {
            for (rn, cn) in &neg {
                // rp/rp[j] + rn/|rn[j]| eliminates x_j.
                let sp = rp[j].recip();
                let sn = -rn[j].recip();
                let r: Vec<Rational> = (0..n).map(|k| &rp[k] * &sp + &rn[k] * &sn).collect();
                keep.push((r, cp * &sp + cn * &sn));
            }
        }
        keep.sort();
        keep.dedup();
        rows = keep;
    }
    rows.iter().all(|(_, c)| !c.is_negative())
}

/// Exact feasibility of the midpoint system.
pub fn midpoint_feasible(s: &IntervalLinearSystem) -> bool {
    let two = Rational::from_integer(2.into());
    let a: Vec<Vec<Rational>> = (0..s.rows())
        .map(|i| {
            (0..s.cols())
                .map(|j| (q(&s.a_lo[i][j]) + q(&s.a_hi[i][j])) / &two)
                .collect()
        })
        .collect();
    let b: Vec<Rational> = s.b_hi.iter().map(q).collect();
    let lo: Vec<Rational> = s.x_lo.iter().map(q).collect();
    let hi: Vec<Rational> = s.x_hi.iter().map(q).collect();
    fm_feasible(&a, &b, &lo, &hi)
}
