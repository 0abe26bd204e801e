//! Dihedral angle of a tetrahedron from its six edge lengths.
//!
//! Vertices `v0..v3`; edges `y1 = |v0v1|, y2 = |v0v2|, y3 = |v0v3|,
//! y4 = |v2v3|, y5 = |v1v3|, y6 = |v1v2|`. The angle is taken along edge
//! `v0v1`, with `x_i = y_i^2`:
//!
//! `dih = pi/2 - atan(D4 / sqrt(4 x1 D))`, where `D` is the Cayley-Menger
//! polynomial (144 times the squared volume) and `D4` its partial derivative
//! in `x4`.

use crate::numeric::{ConstantName, Interval};

use super::{eval_on, Expr, ExprError};

fn x(i: usize) -> Expr {
    Expr::var(i - 1)
}

fn prod(f: &[usize]) -> Expr {
    Expr::mul(f.iter().map(|&i| x(i)).collect())
}

fn signed_sum(terms: &[(i64, usize)]) -> Expr {
    Expr::add(
        terms
            .iter()
            .map(|&(s, i)| if s > 0 { x(i) } else { Expr::neg(x(i)) })
            .collect(),
    )
}

/// `D(x1..x6)` over squared edge lengths.
pub fn delta_x_expr() -> Expr {
    Expr::sub(
        Expr::add(vec![
            Expr::mul(vec![
                prod(&[1, 4]),
                signed_sum(&[(-1, 1), (1, 2), (1, 3), (-1, 4), (1, 5), (1, 6)]),
            ]),
            Expr::mul(vec![
                prod(&[2, 5]),
                signed_sum(&[(1, 1), (-1, 2), (1, 3), (1, 4), (-1, 5), (1, 6)]),
            ]),
            Expr::mul(vec![
                prod(&[3, 6]),
                signed_sum(&[(1, 1), (1, 2), (-1, 3), (1, 4), (1, 5), (-1, 6)]),
            ]),
        ]),
        Expr::add(vec![
            prod(&[2, 3, 4]),
            prod(&[1, 3, 5]),
            prod(&[1, 2, 6]),
            prod(&[4, 5, 6]),
        ]),
    )
}

/// `∂D/∂x4`, the numerator of the angle formula.
pub fn delta4_x_expr() -> Expr {
    Expr::add(vec![
        Expr::neg(prod(&[2, 3])),
        Expr::neg(prod(&[1, 4])),
        prod(&[2, 5]),
        prod(&[3, 6]),
        Expr::neg(prod(&[5, 6])),
        Expr::mul(vec![
            x(1),
            signed_sum(&[(-1, 1), (1, 2), (1, 3), (-1, 4), (1, 5), (1, 6)]),
        ]),
    ])
}

fn dih_x_expr() -> Expr {
    let half_pi = Expr::div(Expr::named(ConstantName::Pi), Expr::int(2));
    let den = Expr::sqrt(Expr::mul(vec![Expr::int(4), x(1), delta_x_expr()]));
    Expr::sub(half_pi, Expr::atan(Expr::div(delta4_x_expr(), den)))
}

/// Dihedral angle along `v0v1` as an expression in the six edge lengths.
pub fn dihedral_expr() -> Expr {
    let squares: Vec<Expr> = (0..6).map(|i| Expr::pow(Expr::var(i), 2)).collect();
    dih_x_expr().substitute(&squares)
}

/// Enclosure of the dihedral angle from squared edge lengths.
pub fn dihedral_from_squares(xs: &[Interval], prec: u32) -> Result<Interval, ExprError> {
    if xs.len() != 6 {
        return Err(ExprError::Other("six squared lengths expected".into()));
    }
    let d = eval_on(&delta_x_expr(), xs, prec)?;
    if !d.lo().is_positive() {
        return Err(ExprError::DegenerateSimplex(format!(
            "Cayley-Menger value {d} is not certified positive"
        )));
    }
    eval_on(&dih_x_expr(), xs, prec)
}

/// Enclosure of the dihedral angle along the first edge from six edge lengths.
pub fn dihedral_from_edges(ys: &[Interval], prec: u32) -> Result<Interval, ExprError> {
    let xs: Vec<Interval> = ys.iter().map(|y| y.powi(2, prec)).collect();
    dihedral_from_squares(&xs, prec)
}
