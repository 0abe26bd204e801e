//! Expression trees over rationals, named constants, `sqrt` and `arctan`.

mod dihedral;
mod verify;

pub use dihedral::{delta4_x_expr, delta_x_expr, dihedral_expr, dihedral_from_edges, dihedral_from_squares};
pub use verify::{verify, verify_lower, verify_upper, Method, Relation, Verdict, VerifyOptions, VerifyReport};

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numeric::{
    enclose_constant, parse_rational, rational_to_string, ConstantName, Interval, NumericError, RatBox, Rational,
};
use crate::poly::{PolyError, SparsePoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("domain error at {path}: {message}")]
    Domain { path: String, message: String },
    #[error("expression uses variable {index} but the box has {dim} coordinates")]
    MissingVariable { index: usize, dim: usize },
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Other(String),
}

/// A leaf constant: an exact rational or a named transcendental.
#[derive(Debug, Clone, PartialEq)]
pub enum Const {
    Rational(Rational),
    Named(ConstantName),
}

impl Const {
    pub fn enclose(&self, prec: u32) -> Interval {
        match self {
            Const::Rational(q) => Interval::from_rational(q, prec),
            Const::Named(n) => enclose_constant(*n, prec),
        }
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Rational(q) => f.write_str(&rational_to_string(q)),
            Const::Named(n) => f.write_str(n.as_str()),
        }
    }
}

impl std::str::FromStr for Const {
    type Err = NumericError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<ConstantName>() {
            Ok(n) => Ok(Const::Named(n)),
            Err(_) => parse_rational(s).map(Const::Rational),
        }
    }
}

impl Serialize for Const {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Const {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Expression tree. Serialized as JSON objects tagged by `"node"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Expr {
    Variable { index: usize },
    Constant { value: Const },
    Add { args: Vec<Expr> },
    Sub { lhs: Box<Expr>, rhs: Box<Expr> },
    Mul { args: Vec<Expr> },
    Div { lhs: Box<Expr>, rhs: Box<Expr> },
    Pow { base: Box<Expr>, exponent: u32 },
    Sqrt { arg: Box<Expr> },
    Arctan { arg: Box<Expr> },
    Neg { arg: Box<Expr> },
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Variable { index }
    }

    pub fn rat(q: Rational) -> Expr {
        Expr::Constant {
            value: Const::Rational(q),
        }
    }

    pub fn int(n: i64) -> Expr {
        Expr::rat(crate::numeric::rat_int(n))
    }

    pub fn named(c: ConstantName) -> Expr {
        Expr::Constant { value: Const::Named(c) }
    }

    pub fn add(args: Vec<Expr>) -> Expr {
        Expr::Add { args }
    }

    pub fn mul(args: Vec<Expr>) -> Expr {
        Expr::Mul { args }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub {
            lhs: Box::new(a),
            rhs: Box::new(b),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div {
            lhs: Box::new(a),
            rhs: Box::new(b),
        }
    }

    pub fn pow(a: Expr, exponent: u32) -> Expr {
        Expr::Pow {
            base: Box::new(a),
            exponent,
        }
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt { arg: Box::new(a) }
    }

    pub fn atan(a: Expr) -> Expr {
        Expr::Arctan { arg: Box::new(a) }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg { arg: Box::new(a) }
    }

    /// Number of variables, i.e. one past the largest index used.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Variable { index } => index + 1,
            Expr::Constant { .. } => 0,
            Expr::Add { args } | Expr::Mul { args } => args.iter().map(Expr::arity).max().unwrap_or(0),
            Expr::Sub { lhs, rhs } | Expr::Div { lhs, rhs } => lhs.arity().max(rhs.arity()),
            Expr::Pow { base, .. } => base.arity(),
            Expr::Sqrt { arg } | Expr::Arctan { arg } | Expr::Neg { arg } => arg.arity(),
        }
    }

    /// Replace variable `i` by `args[i]`.
    pub fn substitute(&self, args: &[Expr]) -> Expr {
        match self {
            Expr::Variable { index } => args[*index].clone(),
            Expr::Constant { .. } => self.clone(),
            Expr::Add { args: a } => Expr::Add {
                args: a.iter().map(|e| e.substitute(args)).collect(),
            },
            Expr::Mul { args: a } => Expr::Mul {
                args: a.iter().map(|e| e.substitute(args)).collect(),
            },
            Expr::Sub { lhs, rhs } => Expr::sub(lhs.substitute(args), rhs.substitute(args)),
            Expr::Div { lhs, rhs } => Expr::div(lhs.substitute(args), rhs.substitute(args)),
            Expr::Pow { base, exponent } => Expr::pow(base.substitute(args), *exponent),
            Expr::Sqrt { arg } => Expr::sqrt(arg.substitute(args)),
            Expr::Arctan { arg } => Expr::atan(arg.substitute(args)),
            Expr::Neg { arg } => Expr::neg(arg.substitute(args)),
        }
    }

    /// Rational polynomial form, when the tree uses only ring operations
    /// (division only by non-zero rational constants).
    pub fn to_poly(&self, arity: usize) -> Result<SparsePoly, ExprError> {
        Ok(match self {
            Expr::Variable { index } => {
                if *index >= arity {
                    return Err(ExprError::MissingVariable {
                        index: *index,
                        dim: arity,
                    });
                }
                SparsePoly::var(*index, arity)
            }
            Expr::Constant {
                value: Const::Rational(q),
            } => SparsePoly::constant(arity, q.clone()),
            Expr::Constant { value: Const::Named(n) } => {
                return Err(ExprError::NotPolynomial(format!("named constant {n}")))
            }
            Expr::Add { args } => {
                let mut acc = SparsePoly::zero(arity);
                for a in args {
                    acc = acc.add(&a.to_poly(arity)?)?;
                }
                acc
            }
            Expr::Mul { args } => {
                let mut acc = SparsePoly::one(arity);
                for a in args {
                    acc = acc.mul(&a.to_poly(arity)?)?;
                }
                acc
            }
            Expr::Sub { lhs, rhs } => lhs.to_poly(arity)?.sub(&rhs.to_poly(arity)?)?,
            Expr::Div { lhs, rhs } => {
                let d = rhs.to_poly(arity)?;
                let c = match (d.monomial_count(), d.total_degree()) {
                    (1, 0) => d.terms().next().unwrap().1.clone(),
                    _ => return Err(ExprError::NotPolynomial("division by a non-constant".into())),
                };
                lhs.to_poly(arity)?.scale(&(Rational::from_integer(1.into()) / c))
            }
            Expr::Pow { base, exponent } => base.to_poly(arity)?.pow(*exponent),
            Expr::Neg { arg } => arg.to_poly(arity)?.neg(),
            Expr::Sqrt { .. } => return Err(ExprError::NotPolynomial("sqrt".into())),
            Expr::Arctan { .. } => return Err(ExprError::NotPolynomial("arctan".into())),
        })
    }

    /// Expression tree of a rational polynomial (sum of monomials).
    pub fn from_poly(p: &SparsePoly) -> Expr {
        let terms: Vec<Expr> = p
            .terms()
            .map(|(m, c)| {
                let mut f = vec![Expr::rat(c.clone())];
                for (i, &e) in m.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => f.push(Expr::var(i)),
                        _ => f.push(Expr::pow(Expr::var(i), e)),
                    }
                }
                if f.len() == 1 {
                    f.pop().unwrap()
                } else {
                    Expr::mul(f)
                }
            })
            .collect();
        if terms.is_empty() {
            Expr::int(0)
        } else {
            Expr::add(terms)
        }
    }
}

/// Interval enclosure of `e` over the box.
pub fn eval_interval(e: &Expr, b: &RatBox, prec: u32) -> Result<Interval, ExprError> {
    let xs = b.to_intervals(prec);
    eval_on(e, &xs, prec)
}

/// Same as [`eval_interval`], with variables already enclosed.
pub fn eval_on(e: &Expr, xs: &[Interval], prec: u32) -> Result<Interval, ExprError> {
    let mut path = String::from("$");
    eval_rec(e, xs, prec, &mut path)
}

fn domain(path: &str, e: NumericError) -> ExprError {
    ExprError::Domain {
        path: path.to_string(),
        message: e.to_string(),
    }
}

fn eval_rec(e: &Expr, xs: &[Interval], prec: u32, path: &mut String) -> Result<Interval, ExprError> {
    let child = |e: &Expr, tag: &str, path: &mut String| {
        let n = path.len();
        path.push_str(tag);
        let r = eval_rec(e, xs, prec, path);
        path.truncate(n);
        r
    };
    Ok(match e {
        Expr::Variable { index } => xs.get(*index).cloned().ok_or(ExprError::MissingVariable {
            index: *index,
            dim: xs.len(),
        })?,
        Expr::Constant { value } => value.enclose(prec),
        Expr::Add { args } => {
            let mut acc = Interval::zero();
            for (i, a) in args.iter().enumerate() {
                acc = acc.add(&child(a, &format!(".add[{i}]"), path)?, prec);
            }
            acc
        }
        Expr::Mul { args } => {
            let mut acc = Interval::from_int(1);
            for (i, a) in args.iter().enumerate() {
                acc = acc.mul(&child(a, &format!(".mul[{i}]"), path)?, prec);
            }
            acc
        }
        Expr::Sub { lhs, rhs } => {
            let l = child(lhs, ".sub.lhs", path)?;
            let r = child(rhs, ".sub.rhs", path)?;
            l.sub(&r, prec)
        }
        Expr::Div { lhs, rhs } => {
            let l = child(lhs, ".div.lhs", path)?;
            let r = child(rhs, ".div.rhs", path)?;
            l.div(&r, prec).map_err(|er| domain(path, er))?
        }
        Expr::Pow { base, exponent } => child(base, ".pow", path)?.powi(*exponent, prec),
        Expr::Sqrt { arg } => child(arg, ".sqrt", path)?.sqrt(prec).map_err(|er| domain(path, er))?,
        Expr::Arctan { arg } => child(arg, ".arctan", path)?.atan(prec),
        Expr::Neg { arg } => child(arg, ".neg", path)?.neg(),
    })
}
