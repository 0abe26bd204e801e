//! Textual constraint files and their normalization to `A x ≤ b`.
//!
//! ```text
//! # comment
//! var x y                      optional; fixes column order
//! bound 0 <= x <= 3            every variable needs one
//! c1: pi*x + 2 y <= 4
//! c2: x - y = 1/2              split into two rows
//! x >= sqrt2 / 4               unnamed rows are called r<k>
//! ```
//!
//! Coefficients are sums of products of rationals and the named constants
//! (`pi`, `sqrt2`, `atan_sqrt2_over_5`, `pt`, `delta_oct`). Division is only
//! by a rational. Products of two variables are rejected.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::numeric::{enclose_constant, parse_rational, ConstantName, Dyadic, Interval, Rational};

use super::{IntervalLinearSystem, LpError};

/// `q · Π consts`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Monom {
    consts: Vec<ConstantName>,
    q: Rational,
}

/// A sum of [`Monom`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coef(Vec<Monom>);

impl Coef {
    fn rational(q: Rational) -> Coef {
        Coef(vec![Monom { consts: vec![], q }])
    }

    fn constant(c: ConstantName) -> Coef {
        Coef(vec![Monom {
            consts: vec![c],
            q: Rational::one(),
        }])
    }

    fn add(&self, o: &Coef) -> Coef {
        let mut m: BTreeMap<Vec<ConstantName>, Rational> = BTreeMap::new();
        for t in self.0.iter().chain(&o.0) {
            *m.entry(t.consts.clone()).or_insert_with(Rational::zero) += &t.q;
        }
        Coef(
            m.into_iter()
                .filter(|(_, q)| !q.is_zero())
                .map(|(consts, q)| Monom { consts, q })
                .collect(),
        )
    }

    fn mul(&self, o: &Coef) -> Coef {
        let mut out = Coef::default();
        for a in &self.0 {
            for b in &o.0 {
                let mut consts = [a.consts.clone(), b.consts.clone()].concat();
                consts.sort();
                out = out.add(&Coef(vec![Monom { consts, q: &a.q * &b.q }]));
            }
        }
        out
    }

    fn scale(&self, q: &Rational) -> Coef {
        self.mul(&Coef::rational(q.clone()))
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.0.as_slice() {
            [] => Some(Rational::zero()),
            [m] if m.consts.is_empty() => Some(m.q.clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Outward enclosure at `prec` bits.
    pub fn enclose(&self, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for m in &self.0 {
            let mut t = Interval::from_rational(&m.q, prec);
            for &c in &m.consts {
                t = t.mul(&enclose_constant(c, prec), prec);
            }
            acc = acc.add(&t, prec);
        }
        acc
    }
}

/// Linear form: coefficient per variable plus a constant (key `None`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Linear(BTreeMap<Option<usize>, Coef>);

impl Linear {
    fn constant(c: Coef) -> Linear {
        Linear(BTreeMap::from([(None, c)]))
    }

    fn var(j: usize) -> Linear {
        Linear(BTreeMap::from([(Some(j), Coef::rational(Rational::one()))]))
    }

    fn add(mut self, o: &Linear) -> Linear {
        for (k, c) in &o.0 {
            let e = self.0.entry(*k).or_default();
            *e = e.add(c);
        }
        self.0.retain(|_, c| !c.is_zero());
        self
    }

    fn neg(&self) -> Linear {
        Linear(self.0.iter().map(|(k, c)| (*k, c.scale(&-Rational::one()))).collect())
    }

    fn scalar(&self) -> Option<Coef> {
        match self.0.len() {
            0 => Some(Coef::default()),
            1 => self.0.get(&None).cloned(),
            _ => None,
        }
    }

    fn mul(&self, o: &Linear) -> Option<Linear> {
        let (s, other) = match (self.scalar(), o.scalar()) {
            (Some(s), _) => (s, o),
            (_, Some(s)) => (s, self),
            _ => return None,
        };
        let mut out = Linear(other.0.iter().map(|(k, c)| (*k, c.mul(&s))).collect());
        out.0.retain(|_, c| !c.is_zero());
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Le,
    Ge,
    Eq,
}

/// One parsed constraint `lhs op rhs`, kept symbolic.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub line: usize,
    lhs_minus_rhs: Linear,
    pub op: Op,
}

#[derive(Debug, Clone)]
struct Bound {
    lo: Coef,
    hi: Coef,
}

/// A parsed constraint file.
#[derive(Debug, Clone)]
pub struct ConstraintFile {
    pub vars: Vec<String>,
    pub constraints: Vec<Constraint>,
    bounds: BTreeMap<usize, Bound>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            // exponent
            if i < cs.len() && (cs[i] == 'e' || cs[i] == 'E') {
                let mut k = i + 1;
                if k < cs.len() && (cs[k] == '-' || cs[k] == '+') {
                    k += 1;
                }
                if k < cs.len() && cs[k].is_ascii_digit() {
                    i = k;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = cs[st..i].iter().collect();
            out.push(Tok::Num(parse_rational(&text).map_err(|e| e.to_string())?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a mut Vec<String>,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Linear, String> {
        let mut neg = false;
        if let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            neg = *c == '-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            let minus = *c == '-';
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&if minus { t.neg() } else { t });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Linear, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f).ok_or("product of two variables is not linear")?;
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let q = f
                        .scalar()
                        .and_then(|c| c.as_rational())
                        .filter(|q| !q.is_zero())
                        .ok_or("can only divide by a nonzero rational")?;
                    acc = acc.mul(&Linear::constant(Coef::rational(q.recip()))).expect("scalar");
                }
                // Juxtaposition such as `2 x` or `pi x`.
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f).ok_or("product of two variables is not linear")?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Linear, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Linear::constant(Coef::rational(q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Ok(c) = name.parse::<ConstantName>() {
                    return Ok(Linear::constant(Coef::constant(c)));
                }
                let j = match self.vars.iter().position(|v| *v == name) {
                    Some(j) => j,
                    None => {
                        self.vars.push(name);
                        self.vars.len() - 1
                    }
                };
                Ok(Linear::var(j))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.toks.get(self.pos) != Some(&Tok::Sym(')')) {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn parse_linear(text: &str, vars: &mut Vec<String>) -> Result<Linear, String> {
    let toks = tokenize(text)?;
    let mut p = ExprParser { toks, pos: 0, vars };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos + 1));
    }
    Ok(e)
}

fn split_op(s: &str) -> Option<(&str, Op, &str)> {
    for (pat, op) in [("<=", Op::Le), (">=", Op::Ge), ("=", Op::Eq)] {
        if let Some(i) = s.find(pat) {
            return Some((&s[..i], op, &s[i + pat.len()..]));
        }
    }
    None
}

impl ConstraintFile {
    pub fn parse(text: &str) -> Result<ConstraintFile, LpError> {
        let mut vars: Vec<String> = Vec::new();
        let mut constraints = Vec::new();
        let mut bounds = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let err = |m: String| LpError::Parse { line, message: m };
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix("var ") {
                for v in rest.split_whitespace() {
                    if !vars.iter().any(|x| x == v) {
                        vars.push(v.to_string());
                    }
                }
                continue;
            }
            if let Some(rest) = s.strip_prefix("bound ") {
                let parts: Vec<&str> = rest.split("<=").collect();
                let [lo, v, hi] = parts.as_slice() else {
                    return Err(err("expected `bound LO <= x <= HI`".into()));
                };
                let scalar = |t: &str, vars: &mut Vec<String>| -> Result<Coef, LpError> {
                    parse_linear(t, vars)
                        .map_err(&err)?
                        .scalar()
                        .ok_or_else(|| err(format!("bound `{}` must not contain variables", t.trim())))
                };
                let lo = scalar(lo, &mut vars)?;
                let hi = scalar(hi, &mut vars)?;
                let name = v.trim();
                let j = match vars.iter().position(|x| x == name) {
                    Some(j) => j,
                    None => {
                        vars.push(name.to_string());
                        vars.len() - 1
                    }
                };
                bounds.insert(j, Bound { lo, hi });
                continue;
            }
            let (name, body) = match s.split_once(':') {
                Some((n, b)) => (n.trim().to_string(), b),
                None => (format!("r{}", constraints.len()), s),
            };
            let (lhs, op, rhs) = split_op(body).ok_or_else(|| err("expected <=, >= or =".into()))?;
            if rhs.contains(['<', '>', '=']) {
                return Err(err("one comparison per constraint".into()));
            }
            let l = parse_linear(lhs, &mut vars).map_err(&err)?;
            let r = parse_linear(rhs, &mut vars).map_err(&err)?;
            constraints.push(Constraint {
                name,
                line,
                lhs_minus_rhs: l.add(&r.neg()),
                op,
            });
        }
        Ok(ConstraintFile {
            vars,
            constraints,
            bounds,
        })
    }

    /// Rows `a·x ≤ b` with coefficient enclosures at `prec` bits.
    ///
    /// `lhs ≤ rhs` becomes `(lhs − rhs)_vars ≤ −(lhs − rhs)_const`; `≥` is
    /// negated first; `=` gives both rows, `≤` first.
    pub fn normalize(&self, prec: u32) -> Result<IntervalLinearSystem, LpError> {
        let n = self.vars.len();
        let mut x_lo = Vec::with_capacity(n);
        let mut x_hi = Vec::with_capacity(n);
        for (j, v) in self.vars.iter().enumerate() {
            let b = self.bounds.get(&j).ok_or_else(|| LpError::MissingBounds(v.clone()))?;
            x_lo.push(b.lo.enclose(prec).lo().clone());
            x_hi.push(b.hi.enclose(prec).hi().clone());
        }
        let mut a_lo = Vec::new();
        let mut a_hi = Vec::new();
        let mut b_hi = Vec::new();
        let mut names = Vec::new();
        for c in &self.constraints {
            let signs: &[(i64, &str)] = match c.op {
                Op::Le => &[(1, "")],
                Op::Ge => &[(-1, "")],
                Op::Eq => &[(1, "+"), (-1, "-")],
            };
            for &(sgn, suffix) in signs {
                let e = if sgn > 0 {
                    c.lhs_minus_rhs.clone()
                } else {
                    c.lhs_minus_rhs.neg()
                };
                let mut lo = vec![Dyadic::zero(); n];
                let mut hi = vec![Dyadic::zero(); n];
                let mut rhs = Dyadic::zero();
                for (k, coef) in &e.0 {
                    let iv = coef.enclose(prec);
                    match k {
                        Some(j) => {
                            lo[*j] = iv.lo().clone();
                            hi[*j] = iv.hi().clone();
                        }
                        None => rhs = -iv.lo().clone(),
                    }
                }
                a_lo.push(lo);
                a_hi.push(hi);
                b_hi.push(rhs);
                names.push(format!("{}{}", c.name, suffix));
            }
        }
        let mut s = IntervalLinearSystem::new(a_lo, a_hi, b_hi, x_lo, x_hi)?;
        s.row_names = names;
        s.var_names = self.vars.clone();
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ConstantName;

    #[test]
    fn pi_coefficient_is_enclosed() {
        let f = ConstraintFile::parse("bound 0 <= x <= 1\npi*x <= 4").unwrap();
        let s = f.normalize(64).unwrap();
        let pi = enclose_constant(ConstantName::Pi, 64);
        assert_eq!((&s.a_lo[0][0], &s.a_hi[0][0]), (pi.lo(), pi.hi()));
        assert_eq!(s.b_hi, vec![Dyadic::from_int(4)]);
    }

    #[test]
    fn equality_splits() {
        let s = ConstraintFile::parse("bound 0 <= x <= 2\ne: x = 1")
            .unwrap()
            .normalize(64)
            .unwrap();
        assert_eq!(s.rows(), 2);
        assert_eq!(s.row_names, ["e+", "e-"]);
        assert_eq!(s.a_lo[1][0], Dyadic::from_int(-1));
        assert_eq!(s.b_hi, vec![Dyadic::from_int(1), Dyadic::from_int(-1)]);
    }

    #[test]
    fn two_row_system() {
        let s = ConstraintFile::parse("var x\nbound 0 <= x <= 3\nx <= 1\n-x <= -2\n")
            .unwrap()
            .normalize(64)
            .unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 1));
    }

    #[test]
    fn mixed_forms() {
        let text = "var y x\nbound -1 <= x <= 1\nbound 0 <= y <= pi/2\nc: 2 x - (y - 1)/3 >= sqrt2 * x + 1/4 # note";
        let s = ConstraintFile::parse(text).unwrap().normalize(64).unwrap();
        assert_eq!(s.var_names, ["y", "x"]);
        // Row: −(2 − √2)·x + y/3 ≤ 1/12.
        let k = enclose_constant(ConstantName::Sqrt2, 64).sub(&Interval::from_int(2), 64);
        let got = Interval::new(s.a_lo[0][1].clone(), s.a_hi[0][1].clone()).unwrap();
        assert!(got.intersects(&k) && got.width().to_f64() < 1e-15, "{got} vs {k}");
        let third = crate::numeric::rat(1, 3);
        assert!(s.a_lo[0][0].to_rational() < third && third < s.a_hi[0][0].to_rational());
        let slack = s.b_hi[0].to_rational() - crate::numeric::rat(1, 12);
        assert!(slack >= Rational::zero() && slack < crate::numeric::rat(1, 1 << 40));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ConstraintFile::parse("x*y <= 1"),
            Err(LpError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ConstraintFile::parse("x <= 1").unwrap().normalize(64),
            Err(LpError::MissingBounds(_))
        ));
        assert!(ConstraintFile::parse("bound 0 <= x <= 1\nx / x <= 1").is_err());
        assert!(ConstraintFile::parse("\n\nx + 1").is_err());
    }
}
