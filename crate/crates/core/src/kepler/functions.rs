//! Δ, a₀..a₃ and γ as functions of six edge lengths `y1..y6`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::numeric::{rat, Rational};
use crate::poly::{poly_from_ints, SparsePoly};

use super::symbolic::Sym;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FunctionName {
    Delta,
    A0,
    A1,
    A2,
    A3,
    Gamma,
}

impl fmt::Display for FunctionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionName::Delta => "DELTA",
            FunctionName::A0 => "A0",
            FunctionName::A1 => "A1",
            FunctionName::A2 => "A2",
            FunctionName::A3 => "A3",
            FunctionName::Gamma => "GAMMA",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GeometricFunction {
    pub name: FunctionName,
    pub expr: Expr,
    pub poly: Option<SparsePoly>,
}

impl GeometricFunction {
    pub fn arity(&self) -> usize {
        6
    }

    pub fn get(name: FunctionName) -> GeometricFunction {
        match name {
            FunctionName::Delta => GeometricFunction {
                name,
                expr: delta_det_expr(),
                poly: Some(delta_poly()),
            },
            FunctionName::Gamma => GeometricFunction {
                name,
                expr: build_gamma(),
                poly: None,
            },
            _ => {
                let i = match name {
                    FunctionName::A0 => 0,
                    FunctionName::A1 => 1,
                    FunctionName::A2 => 2,
                    _ => 3,
                };
                let p = a_poly(i);
                GeometricFunction {
                    name,
                    expr: Expr::from_poly(&p),
                    poly: Some(p),
                }
            }
        }
    }
}

/// Argument orders (0-based) turning a₀ into a₁, a₂, a₃.
pub const A_PERMUTATIONS: [[usize; 6]; 3] = [[0, 4, 5, 3, 1, 2], [1, 3, 5, 4, 0, 2], [3, 4, 2, 0, 1, 5]];

/// Entry `(r, c)` of the bordered Cayley-Menger matrix, as `None` for zero,
/// `Some(None)` for one and `Some(Some(i))` for `y_i²`.
fn cm_entry(r: usize, c: usize) -> Option<Option<usize>> {
    // Squared distances between the four vertices (indices 1..4 of the matrix).
    const SQ: [[usize; 4]; 4] = [[9, 2, 1, 0], [2, 9, 3, 4], [1, 3, 9, 5], [0, 4, 5, 9]];
    match (r, c) {
        (0, 0) => None,
        (0, _) | (_, 0) => Some(None),
        _ if r == c => None,
        _ => Some(Some(SQ[r - 1][c - 1])),
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        // Insert n-1 at each position; moving it from the end to slot k costs n-1-k swaps.
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push((q, even ^ ((n - 1 - k) % 2 == 1)));
        }
    }
    out
}

/// Δ expanded: half the determinant of the bordered matrix with `y_i²` entries.
pub fn delta_poly() -> SparsePoly {
    let entry = |r: usize, c: usize| -> Option<SparsePoly> {
        cm_entry(r, c).map(|e| match e {
            None => SparsePoly::one(6),
            Some(i) => SparsePoly::var(i, 6).pow(2),
        })
    };
    let mut det = SparsePoly::zero(6);
    'perm: for (sigma, even) in permutations(5) {
        let mut t = SparsePoly::one(6);
        for (r, &c) in sigma.iter().enumerate() {
            match entry(r, c) {
                Some(e) => t = t.mul(&e).expect("arity 6"),
                None => continue 'perm,
            }
        }
        det = if even { det.add(&t) } else { det.sub(&t) }.expect("arity 6");
    }
    det.scale(&rat(1, 2))
}

fn det_expr(rows: &[usize], cols: &[usize]) -> Option<Expr> {
    if rows.is_empty() {
        return Some(Expr::int(1));
    }
    let r = rows[0];
    let mut terms = Vec::new();
    for (j, &c) in cols.iter().enumerate() {
        let Some(e) = cm_entry(r, c) else { continue };
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let Some(minor) = det_expr(&rows[1..], &rest) else {
            continue;
        };
        let t = match e {
            None => minor,
            Some(i) => Expr::mul(vec![Expr::pow(Expr::var(i), 2), minor]),
        };
        terms.push(if j % 2 == 0 { t } else { Expr::neg(t) });
    }
    match terms.len() {
        0 => None,
        1 => terms.pop(),
        _ => Some(Expr::add(terms)),
    }
}

/// Δ as a Laplace expansion of the determinant.
pub fn delta_det_expr() -> Expr {
    let idx: Vec<usize> = (0..5).collect();
    Expr::mul(vec![Expr::rat(rat(1, 2)), det_expr(&idx, &idx).expect("nonsingular")])
}

pub fn a0_poly() -> SparsePoly {
    let p = poly_from_ints(
        6,
        &[
            (&[2, 1, 0, 0, 0, 0], 1),
            (&[1, 2, 0, 0, 0, 0], 1),
            (&[2, 0, 1, 0, 0, 0], 1),
            (&[0, 2, 1, 0, 0, 0], 1),
            (&[1, 0, 2, 0, 0, 0], 1),
            (&[0, 1, 2, 0, 0, 0], 1),
            (&[1, 0, 0, 2, 0, 0], -1),
            (&[0, 1, 0, 0, 2, 0], -1),
            (&[0, 0, 1, 0, 0, 2], -1),
        ],
    );
    p.scale(&rat(1, 2))
        .add(&poly_from_ints(6, &[(&[1, 1, 1, 0, 0, 0], 1)]))
        .expect("arity 6")
}

/// `a_i` for `i` in `0..4`.
pub fn a_poly(i: usize) -> SparsePoly {
    let a0 = a0_poly();
    if i == 0 {
        a0
    } else {
        a0.permute(&A_PERMUTATIONS[i - 1]).expect("arity 6")
    }
}

/// Permute a point the way `a_i` permutes its arguments.
pub fn permute_point(i: usize, y: &[Rational]) -> Vec<Rational> {
    if i == 0 {
        y.to_vec()
    } else {
        A_PERMUTATIONS[i - 1].iter().map(|&j| y[j].clone()).collect()
    }
}

/// `γ = −δ_oct/12·√Δ + ⅔·Σ arctan(√Δ/(2aᵢ))`.
pub fn build_gamma() -> Expr {
    let sqrt_delta = Expr::sqrt(delta_det_expr());
    let first = Expr::mul(vec![
        Expr::rat(rat(-1, 12)),
        Sym::delta_oct().to_expr(),
        sqrt_delta.clone(),
    ]);
    let atans: Vec<Expr> = (0..4)
        .map(|i| {
            Expr::atan(Expr::div(
                sqrt_delta.clone(),
                Expr::mul(vec![Expr::int(2), Expr::from_poly(&a_poly(i))]),
            ))
        })
        .collect();
    Expr::add(vec![first, Expr::mul(vec![Expr::rat(rat(2, 3)), Expr::add(atans)])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{delta_x_expr, eval_interval};
    use crate::numeric::{enclose_constant, rat_int, ConstantName, Interval, RatBox};

    fn corner() -> Vec<Rational> {
        vec![rat_int(2); 6]
    }

    #[test]
    fn delta_at_corner() {
        let p = delta_poly();
        assert_eq!(p.eval_exact(&corner()).unwrap(), rat_int(128));
        assert!(p.degrees().iter().all(|&d| d <= 4));
        let e = eval_interval(&delta_det_expr(), &RatBox::point(&corner()), 64).unwrap();
        assert_eq!(e, Interval::from_int(128));
    }

    #[test]
    fn delta_matches_closed_form() {
        let squares: Vec<Expr> = (0..6).map(|i| Expr::pow(Expr::var(i), 2)).collect();
        let closed = delta_x_expr().substitute(&squares).to_poly(6).unwrap();
        assert_eq!(closed, delta_poly());
    }

    #[test]
    fn a0_at_corner() {
        assert_eq!(a0_poly().eval_exact(&corner()).unwrap(), rat_int(20));
        for i in 1..4 {
            assert_eq!(a_poly(i).eval_exact(&corner()).unwrap(), rat_int(20));
        }
    }

    #[test]
    fn permutation_parity() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, e)| *e).count(), 12);
        for (p, even) in perms {
            let mut inv = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    inv += usize::from(p[i] > p[j]);
                }
            }
            assert_eq!(even, inv % 2 == 0, "{p:?}");
        }
    }

    #[test]
    fn gamma_at_corner_is_pt() {
        let g = eval_interval(&build_gamma(), &RatBox::point(&corner()), 64).unwrap();
        let pt = enclose_constant(ConstantName::Pt, 64);
        assert!(g.intersects(&pt), "{g} vs {pt}");
        assert!(g.width().to_f64() < 1e-6);
    }
}
