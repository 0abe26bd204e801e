//! Named inequalities as self-contained JSON documents, and a parallel runner.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::{verify, Const, Expr, Method, Relation, Verdict, VerifyOptions, VerifyReport};
use crate::numeric::{rat_int, serde_rational, ConstantName, RatBox, Rational, DEFAULT_PREC};

use super::approx::{approximations, validate_approximation};
use super::functions::{build_gamma, delta_det_expr};
use super::lemmas::{diameter_entries, dihedral_entries};
use super::surrogate::{main_box, p_poly, p_tensor};
use super::{KeplerError, Provenance};

pub const SCHEMA: &str = "rigorkit.inequality/1";

/// Replacement of the expression by a certified polynomial upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surrogate {
    /// `γ ≤ g` on `[2, 2.51]^6` and `g ≤ pt ⇔ √2·(g − pt) ≤ 0`.
    KeplerG,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedInequality {
    pub schema: String,
    pub id: String,
    pub description: String,
    pub expr: Expr,
    #[serde(rename = "box")]
    pub domain: RatBox,
    pub relation: Relation,
    pub bound: Const,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate: Option<Surrogate>,
    pub provenance: Provenance,
    pub budget: usize,
    #[serde(default)]
    pub refs: Vec<String>,
}

impl NamedInequality {
    pub fn file_name(&self) -> String {
        let stem: String = self
            .id
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        format!("{stem}.json")
    }

    /// Pretty-printed document with the expression tree kept on one line.
    pub fn to_json(&self) -> String {
        const MARK: &str = "\u{0}expr\u{0}";
        let mut v = serde_json::to_value(self).expect("serializable");
        let expr = std::mem::replace(&mut v["expr"], serde_json::Value::String(MARK.into()));
        let mark = serde_json::to_string(MARK).expect("string");
        let compact = serde_json::to_string(&expr).expect("serializable");
        let mut s = serde_json::to_string_pretty(&v)
            .expect("serializable")
            .replacen(&mark, &compact, 1);
        s.push('\n');
        s
    }
}

fn kepler_main() -> NamedInequality {
    NamedInequality {
        schema: SCHEMA.to_string(),
        id: "586468779".to_string(),
        description: "gamma(y) <= pt for all edge lengths y in [2, 2.51]^6. Certified through the \
                      polynomial surrogate g: each approximation is validated, then the Bernstein \
                      coefficients of sqrt(2)*(g - pt) are shown to be at most 0."
            .to_string(),
        expr: build_gamma(),
        domain: main_box(),
        relation: Relation::Le,
        bound: Const::Named(ConstantName::Pt),
        epsilon: rat_int(0),
        method: Method::Bernstein,
        surrogate: Some(Surrogate::KeplerG),
        provenance: Provenance::PaperStated,
        budget: 1 << 12,
        refs: vec!["calc 586468779".into()],
    }
}

fn delta_range() -> Vec<NamedInequality> {
    [(Relation::Ge, 128, "lower"), (Relation::Le, 501, "upper")]
        .into_iter()
        .map(|(relation, b, tag)| NamedInequality {
            schema: SCHEMA.to_string(),
            id: format!("delta-range-{tag}"),
            description: format!(
                "Delta(y) {} {b} on [2, 2.51]^6, with Delta half the bordered Cayley-Menger determinant.",
                relation.symbol()
            ),
            expr: delta_det_expr(),
            domain: main_box(),
            relation,
            bound: Const::Rational(rat_int(b)),
            epsilon: rat_int(0),
            method: Method::Bernstein,
            surrogate: None,
            provenance: Provenance::PaperStated,
            budget: 1 << 10,
            refs: vec!["range of Delta over [2, 2.51]^6".into()],
        })
        .collect()
}

/// Every built-in entry, ordered by id.
pub fn builtin_corpus() -> Vec<NamedInequality> {
    let mut v = vec![kepler_main()];
    v.extend(delta_range());
    v.extend(diameter_entries());
    v.extend(dihedral_entries());
    v.sort_by(|a, b| a.id.cmp(&b.id));
    v
}

pub fn parse_entry(text: &str, file: &str) -> Result<NamedInequality, KeplerError> {
    let e: NamedInequality = serde_json::from_str(text).map_err(|e| KeplerError::Corpus {
        file: file.to_string(),
        message: format!("line {}, column {}: {e}", e.line(), e.column()),
    })?;
    if e.schema != SCHEMA {
        return Err(KeplerError::Corpus {
            file: file.to_string(),
            message: format!("unsupported schema {:?}, expected {SCHEMA:?}", e.schema),
        });
    }
    Ok(e)
}

/// Read every `*.json` file in `dir`.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<NamedInequality>, KeplerError> {
    let io = |e: std::io::Error| KeplerError::Corpus {
        file: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = fs::read_to_string(&p).map_err(io)?;
        out.push(parse_entry(&text, &p.display().to_string())?);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

pub fn write_corpus_dir(dir: &Path, entries: &[NamedInequality]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for e in entries {
        fs::write(dir.join(e.file_name()), e.to_json())?;
    }
    Ok(())
}

fn report(verdict: Verdict, boxes: usize) -> VerifyReport {
    VerifyReport {
        verdict,
        boxes_examined: boxes,
        max_depth: 0,
        witness: None,
    }
}

fn run_surrogate(e: &NamedInequality, budget: usize) -> Result<VerifyReport, KeplerError> {
    if e.relation != Relation::Le
        || e.bound != Const::Named(ConstantName::Pt)
        || e.domain != main_box()
        || e.expr != build_gamma()
    {
        return Err(KeplerError::Construction(
            "the kepler_g surrogate only certifies gamma <= PT on [2, 2.51]^6".into(),
        ));
    }
    // γ ≤ g needs Δ inside the square-root domains, then each approximation.
    let mut boxes = 0;
    for d in delta_range() {
        let r = run_entry(&d, budget)?;
        boxes += r.boxes_examined;
        if r.verdict != Verdict::Proven {
            return Ok(VerifyReport {
                boxes_examined: boxes,
                ..r
            });
        }
    }
    for a in approximations() {
        let r = validate_approximation(&a, budget)?;
        boxes += r.boxes_examined;
        if r.verdict != Verdict::Proven {
            return Ok(VerifyReport {
                boxes_examined: boxes,
                ..r
            });
        }
    }
    if p_tensor().bound_max() <= rat_int(0) {
        return Ok(report(Verdict::Proven, boxes + 1));
    }
    let opts = VerifyOptions {
        method: Method::Bernstein,
        budget,
        prec: DEFAULT_PREC,
    };
    let r = verify(
        &Expr::from_poly(p_poly()),
        &e.domain,
        Relation::Le,
        &rat_int(0),
        &rat_int(0),
        &opts,
    )?;
    Ok(VerifyReport {
        boxes_examined: r.boxes_examined + boxes,
        ..r
    })
}

/// Verify one entry with the given box budget.
pub fn run_entry(e: &NamedInequality, budget: usize) -> Result<VerifyReport, KeplerError> {
    if e.surrogate == Some(Surrogate::KeplerG) {
        return run_surrogate(e, budget);
    }
    let opts = VerifyOptions {
        method: e.method,
        budget,
        prec: DEFAULT_PREC,
    };
    let (expr, bound) = match &e.bound {
        Const::Rational(q) => (e.expr.clone(), q.clone()),
        Const::Named(n) => {
            if e.method == Method::Bernstein {
                return Err(KeplerError::Construction(format!(
                    "Bernstein needs a rational bound, got {n}"
                )));
            }
            (Expr::sub(e.expr.clone(), Expr::named(*n)), rat_int(0))
        }
    };
    Ok(verify(&expr, &e.domain, e.relation, &bound, &e.epsilon, &opts)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusResult {
    pub id: String,
    pub method: Method,
    pub provenance: Provenance,
    pub verdict: Option<Verdict>,
    pub boxes_examined: usize,
    pub millis: u128,
    pub witness: Option<RatBox>,
    pub error: Option<String>,
}

impl CorpusResult {
    pub fn proven(&self) -> bool {
        self.verdict == Some(Verdict::Proven)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub results: Vec<CorpusResult>,
}

impl CorpusReport {
    /// PaperStated entries that were not proven.
    pub fn failures(&self) -> Vec<&CorpusResult> {
        self.results
            .iter()
            .filter(|r| r.provenance == Provenance::PaperStated && !r.proven())
            .collect()
    }

    /// Reconstructed entries that were not proven.
    pub fn warnings(&self) -> Vec<&CorpusResult> {
        self.results
            .iter()
            .filter(|r| r.provenance == Provenance::Reconstructed && !r.proven())
            .collect()
    }

    pub fn ok(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn table(&self) -> String {
        let w = self.results.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut s = format!(
            "{:<w$}  {:<11}  {:<13}  {:<17}  {:>9}  {:>8}\n",
            "id", "method", "provenance", "verdict", "boxes", "ms"
        );
        for r in &self.results {
            let method = match r.method {
                Method::IntervalBb => "interval_bb",
                Method::Bernstein => "bernstein",
            };
            let prov = match r.provenance {
                Provenance::PaperStated => "paper_stated",
                Provenance::Reconstructed => "reconstructed",
            };
            let verdict = match (&r.verdict, &r.error) {
                (Some(v), _) => format!("{v:?}"),
                (None, _) => "Error".to_string(),
            };
            let _ = writeln!(
                s,
                "{:<w$}  {:<11}  {:<13}  {:<17}  {:>9}  {:>8}",
                r.id, method, prov, verdict, r.boxes_examined, r.millis
            );
            if let Some(err) = &r.error {
                let _ = writeln!(s, "  error: {err}");
            }
            if let Some(b) = &r.witness {
                let _ = writeln!(s, "  witness box: {}", serde_json::to_string(b).unwrap_or_default());
            }
        }
        for r in self.warnings() {
            let _ = writeln!(s, "warning: reconstructed entry {} was not proven", r.id);
        }
        s
    }
}

/// Run every entry whose id matches the glob `filter`. Entries run in
/// parallel; results come back ordered by id. `budget` overrides the
/// per-entry budget when given.
pub fn run_corpus(
    entries: &[NamedInequality],
    filter: Option<&str>,
    budget: Option<usize>,
) -> Result<CorpusReport, KeplerError> {
    let pattern = match filter {
        Some(f) => Some(glob::Pattern::new(f).map_err(|e| KeplerError::Corpus {
            file: "<filter>".into(),
            message: e.to_string(),
        })?),
        None => None,
    };
    let selected: Vec<&NamedInequality> = entries
        .iter()
        .filter(|e| pattern.as_ref().is_none_or(|p| p.matches(&e.id)))
        .collect();
    let mut results: Vec<CorpusResult> = selected
        .par_iter()
        .map(|e| {
            let start = Instant::now();
            let r = run_entry(e, budget.unwrap_or(e.budget));
            let millis = start.elapsed().as_millis();
            let (verdict, boxes_examined, witness, error) = match r {
                Ok(r) => (Some(r.verdict), r.boxes_examined, r.witness, None),
                Err(err) => (None, 0, None, Some(err.to_string())),
            };
            CorpusResult {
                id: e.id.clone(),
                method: e.method,
                provenance: e.provenance,
                verdict,
                boxes_examined,
                millis,
                witness,
                error,
            }
        })
        .collect();
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(CorpusReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn entries_round_trip() {
        for e in builtin_corpus() {
            let back = parse_entry(&e.to_json(), "mem").unwrap();
            assert_eq!(back, e, "{}", e.id);
        }
    }

    #[test]
    fn ids_are_unique() {
        let v = builtin_corpus();
        let mut ids: Vec<_> = v.iter().map(|e| e.id.clone()).collect();
        ids.dedup();
        assert_eq!(ids.len(), v.len());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_entry("{\n  \"schema\": 3\n}", "bad.json").unwrap_err();
        let KeplerError::Corpus { file, message } = err else {
            panic!()
        };
        assert_eq!(file, "bad.json");
        assert!(message.starts_with("line 2"), "{message}");
        let mut e = builtin_corpus().pop().unwrap();
        e.schema = "other/2".into();
        assert!(parse_entry(&e.to_json(), "x").is_err());
    }

    #[test]
    fn named_bounds_run_through_interval_bisection() {
        let e = NamedInequality {
            schema: SCHEMA.into(),
            id: "pi-gt-3".into(),
            description: String::new(),
            expr: Expr::var(0),
            domain: RatBox::new(vec![(rat_int(0), rat_int(3))]).unwrap(),
            relation: Relation::Lt,
            bound: Const::Named(ConstantName::Pi),
            epsilon: rat(1, 10),
            method: Method::IntervalBb,
            surrogate: None,
            provenance: Provenance::PaperStated,
            budget: 10,
            refs: vec![],
        };
        assert_eq!(run_entry(&e, 10).unwrap().verdict, Verdict::Proven);
        let report = run_corpus(std::slice::from_ref(&e), Some("pi-*"), None).unwrap();
        assert!(report.ok());
        assert!(run_corpus(&[e], Some("other*"), None).unwrap().results.is_empty());
    }

    #[test]
    fn delta_range_is_proven() {
        for e in delta_range() {
            assert_eq!(run_entry(&e, e.budget).unwrap().verdict, Verdict::Proven, "{}", e.id);
        }
    }
}
