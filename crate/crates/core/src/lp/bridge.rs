//! Untrusted solvers: LP file emission, solution parsing, the built-in
//! floating-point solver and external solver processes.
//!
//! External protocol: the solver is run as `<solver> <problem.lp> <solution>`
//! and must write one nonnegative multiplier per row of the emitted LP,
//! either as `r<i> <value>` lines or as a single vector `(v0, v1, ..)`.
//! Nothing it returns is trusted; [`check_certificate`] decides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numeric::{Dyadic, Rational};

use super::{check_certificate, CertificateVerdict, FarkasCertificate, IntervalLinearSystem, LpError};

/// Multipliers in `[−CLAMP, 0)` are solver noise and become 0.
pub const CLAMP: f64 = 1.0 / (1u64 << 20) as f64;
/// Denominator bound when turning solver floats into rationals.
pub const MAX_DENOMINATOR: u64 = 1 << 30;

fn mid(lo: &Dyadic, hi: &Dyadic) -> f64 {
    (lo.to_f64() + hi.to_f64()) / 2.0
}

/// CPLEX LP text of the midpoint feasibility problem: zero objective, rows
/// `r<i>`, columns `x<j>`, box bounds.
pub fn emit_lp(s: &IntervalLinearSystem) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "\\ rigorkit feasibility LP: {} rows, {} columns",
        s.rows(),
        s.cols()
    )
    .unwrap();
    for (j, v) in s.var_names.iter().enumerate() {
        writeln!(out, "\\ x{j} = {v}").unwrap();
    }
    out.push_str("Minimize\n obj: 0 x0\nSubject To\n");
    for i in 0..s.rows() {
        write!(out, " r{i}:").unwrap();
        let mut any = false;
        for j in 0..s.cols() {
            let a = mid(&s.a_lo[i][j], &s.a_hi[i][j]);
            if a != 0.0 {
                write!(out, " {} {:e} x{j}", if a < 0.0 { '-' } else { '+' }, a.abs()).unwrap();
                any = true;
            }
        }
        if !any {
            out.push_str(" 0 x0");
        }
        writeln!(out, " <= {:e}", s.b_hi[i].to_f64()).unwrap();
    }
    out.push_str("Bounds\n");
    for j in 0..s.cols() {
        writeln!(out, " {:e} <= x{j} <= {:e}", s.x_lo[j].to_f64(), s.x_hi[j].to_f64()).unwrap();
    }
    out.push_str("End\n");
    out
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(v: f64, max_den: u64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let exact = Rational::from_float(v)?;
    if exact.denom() <= &BigInt::from(max_den) {
        return Some(exact);
    }
    // Continued fraction convergents of the exact binary value.
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut x = exact.clone();
    let bound = BigInt::from(max_den);
    loop {
        let a = x.floor().to_integer();
        let (p2, q2) = (&a * &p1 + &p0, &a * &q1 + &q0);
        if q2 > bound {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    Some(Rational::new(p1, q1))
}

/// Clamp, rationalize and validate solver multipliers.
pub fn certificate_from_floats(y: &[f64]) -> Result<FarkasCertificate, LpError> {
    let mut out = Vec::with_capacity(y.len());
    for (i, &v) in y.iter().enumerate() {
        if !v.is_finite() {
            return Err(LpError::Bridge(format!("multiplier {i} is not finite")));
        }
        if v < -CLAMP {
            return Err(LpError::NegativeMultiplier(i));
        }
        let v = v.max(0.0);
        out.push(rationalize(v, MAX_DENOMINATOR).expect("finite"));
    }
    FarkasCertificate::new(out)
}

/// Parse a solver solution for a system with `rows` rows.
pub fn parse_solution(text: &str, rows: usize) -> Result<FarkasCertificate, LpError> {
    parse_solution_named(text, rows, &[])
}

/// Like [`parse_solution`], also accepting the system's own row names in
/// place of `r<i>`.
pub fn parse_solution_named(text: &str, rows: usize, names: &[String]) -> Result<FarkasCertificate, LpError> {
    let t = text.trim();
    let bad = |m: String| LpError::Bridge(m);
    let values: Vec<f64> = if t.starts_with('(') || t.starts_with('[') {
        let inner = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        inner
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("bad number `{}`", x.trim())))
            })
            .collect::<Result<_, _>>()?
    } else {
        let mut v = vec![None; rows];
        for line in t.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(name), Some(val), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad(format!("expected `r<i> <value>`, got `{line}`")));
            };
            let i: usize = names
                .iter()
                .position(|n| n == name)
                .or_else(|| name.strip_prefix('r').and_then(|k| k.parse().ok()))
                .filter(|&k| k < rows)
                .ok_or_else(|| bad(format!("unknown row `{name}`")))?;
            let x: f64 = val.parse().map_err(|_| bad(format!("bad number `{val}`")))?;
            if v[i].replace(x).is_some() {
                return Err(bad(format!("row `{name}` listed twice")));
            }
        }
        v.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| bad(format!("no multiplier for r{i}"))))
            .collect::<Result<_, _>>()?
    };
    if values.len() != rows {
        return Err(LpError::Dimension(format!(
            "{} multipliers for {rows} rows",
            values.len()
        )));
    }
    certificate_from_floats(&values)
}

/// Floating-point search for multipliers on the midpoint system:
/// maximize `Σ u_j x_lo_j − w_j x_hi_j − yᵀb` with `Aᵀy = u − w`, `Σy = 1`
/// and `y, u, w ≥ 0`. Returns `None` when the optimum is not positive.
pub fn solve_builtin(s: &IntervalLinearSystem) -> Result<Option<FarkasCertificate>, LpError> {
    let (m, n) = (s.rows(), s.cols());
    if m == 0 {
        return Ok(None);
    }
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    let inf = f64::INFINITY;
    let y: Vec<_> = (0..m).map(|i| pb.add_var(-s.b_hi[i].to_f64(), (0.0, inf))).collect();
    let u: Vec<_> = (0..n).map(|j| pb.add_var(s.x_lo[j].to_f64(), (0.0, inf))).collect();
    let w: Vec<_> = (0..n).map(|j| pb.add_var(-s.x_hi[j].to_f64(), (0.0, inf))).collect();
    for j in 0..n {
        let mut e = LinearExpr::empty();
        for (i, &yi) in y.iter().enumerate() {
            let a = mid(&s.a_lo[i][j], &s.a_hi[i][j]);
            if a != 0.0 {
                e.add(yi, a);
            }
        }
        e.add(u[j], -1.0);
        e.add(w[j], 1.0);
        pb.add_constraint(e, ComparisonOp::Eq, 0.0);
    }
    let mut norm = LinearExpr::empty();
    for &v in &y {
        norm.add(v, 1.0);
    }
    pb.add_constraint(norm, ComparisonOp::Eq, 1.0);
    let sol = pb
        .solve()
        .map_err(|e| LpError::Bridge(format!("built-in solver: {e}")))?;
    if sol.objective() <= 0.0 {
        return Ok(None);
    }
    let ys: Vec<f64> = y.iter().map(|&v| *sol.var_value(v)).collect();
    certificate_from_floats(&ys).map(Some)
}

fn scratch_path(tag: &str) -> PathBuf {
    use std::sync::atomic::{AtomicU64, Ordering};
    static N: AtomicU64 = AtomicU64::new(0);
    let k = N.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("rigorkit-{}-{k}.{tag}", std::process::id()))
}

/// Run `solver problem.lp solution` and parse the solution it writes.
pub fn solve_external(
    s: &IntervalLinearSystem,
    solver: &Path,
    timeout: Duration,
) -> Result<FarkasCertificate, LpError> {
    let lp = scratch_path("lp");
    let sol = scratch_path("sol");
    let io = |e: std::io::Error| LpError::Bridge(format!("{}: {e}", solver.display()));
    std::fs::write(&lp, emit_lp(s)).map_err(io)?;
    let result = (|| {
        let mut child = Command::new(solver).arg(&lp).arg(&sol).spawn().map_err(io)?;
        let start = Instant::now();
        let status = loop {
            if let Some(st) = child.try_wait().map_err(io)? {
                break st;
            }
            if start.elapsed() > timeout {
                let _ = child.kill();
                let _ = child.wait();
                return Err(LpError::Bridge(format!("solver timed out after {timeout:?}")));
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        if !status.success() {
            return Err(LpError::Bridge(format!("solver exited with {status}")));
        }
        let text = std::fs::read_to_string(&sol).map_err(io)?;
        parse_solution(&text, s.rows())
    })();
    let _ = std::fs::remove_file(&lp);
    let _ = std::fs::remove_file(&sol);
    result
}

/// Which untrusted source produced the multipliers.
#[derive(Debug, Clone)]
pub enum SolverChoice {
    Builtin,
    External { path: PathBuf, timeout: Duration },
}

/// Ask the solver, then check. Solver failures become `NotRefuted`.
pub fn refute(s: &IntervalLinearSystem, solver: &SolverChoice) -> Result<CertificateVerdict, LpError> {
    let cert = match solver {
        SolverChoice::Builtin => solve_builtin(s),
        SolverChoice::External { path, timeout } => solve_external(s, path, *timeout).map(Some),
    };
    match cert {
        Ok(Some(c)) => check_certificate(s, &c),
        Ok(None) => Ok(CertificateVerdict::NotRefuted {
            reason: "solver found no separating multipliers".into(),
        }),
        Err(e @ LpError::Dimension(_)) => Err(e),
        Err(e) => Ok(CertificateVerdict::NotRefuted {
            reason: format!("no usable certificate: {e}"),
        }),
    }
}
