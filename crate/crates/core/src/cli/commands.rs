use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde_json::json;

use crate::bernstein::range_enclosure;
use crate::expr::{eval_interval, Const, Expr, Method, Relation, Verdict};
use crate::hypermap::{
    archive_diff as diff_archives, enumerate_parallel, Archive, FaceSizeBaseline, Limits, Successors,
};
use crate::kepler::{
    builtin_corpus, parse_entry, run_corpus, run_entry, write_corpus_dir, FunctionName, GeometricFunction,
    NamedInequality, Provenance, SCHEMA,
};
use crate::lp::{
    check_certificate, emit_lp, parse_solution_named, refute, CertificateVerdict, ConstraintFile, LpError, SolverChoice,
};
use crate::numeric::{enclose_constant, parse_rational, rat_int, rational_to_string, ConstantName, RatBox, Rational};
use crate::poly::SparsePoly;

use super::{
    ArchiveDiffArgs, ArchiveFormatArg, BoundArgs, CliError, ConstantsArgs, CorpusRunArgs, CorpusSource, EnumerateArgs,
    FunctionArg, InputHash, LpCheckArgs, MethodArg, ModeArg, Outcome, ProveArgs, TaskRecord, SOLVER_ENV,
};

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn read(path: &Path) -> Result<(String, InputHash), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let hash = InputHash::of_bytes(path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes).map_err(|_| usage(format!("{}: not UTF-8", path.display())))?;
    Ok((text, hash))
}

fn task(id: &str, verdict: impl Into<String>, ok: bool, millis: u128) -> TaskRecord {
    TaskRecord {
        id: id.into(),
        verdict: verdict.into(),
        counts: true,
        ok,
        millis,
        detail: None,
    }
}

fn function_name(f: FunctionArg) -> FunctionName {
    match f {
        FunctionArg::Delta => FunctionName::Delta,
        FunctionArg::A0 => FunctionName::A0,
        FunctionArg::A1 => FunctionName::A1,
        FunctionArg::A2 => FunctionName::A2,
        FunctionArg::A3 => FunctionName::A3,
        FunctionArg::Gamma => FunctionName::Gamma,
    }
}

/// `lo:hi[,lo:hi..]`; a single pair is repeated `arity` times.
pub fn parse_box(text: &str, arity: usize) -> Result<RatBox, CliError> {
    let pairs = text
        .split(',')
        .map(|p| {
            let (l, h) = p
                .split_once(':')
                .ok_or_else(|| usage(format!("box component `{p}` is not lo:hi")))?;
            let q = |s: &str| parse_rational(s).map_err(|e| usage(format!("box: {e}")));
            Ok((q(l)?, q(h)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let pairs = if pairs.len() == 1 && arity > 1 {
        vec![pairs[0].clone(); arity]
    } else {
        pairs
    };
    if pairs.len() < arity {
        return Err(usage(format!(
            "box has {} coordinates, the expression needs {arity}",
            pairs.len()
        )));
    }
    RatBox::new(pairs).map_err(|e| usage(format!("box: {e}")))
}

struct Resolved {
    label: String,
    expr: Expr,
    poly: Option<SparsePoly>,
    domain: RatBox,
    inputs: Vec<InputHash>,
}

fn resolve(function: Option<FunctionArg>, expr: Option<&PathBuf>, domain: Option<&str>) -> Result<Resolved, CliError> {
    let (label, e, poly, inputs, default_box) = match (function, expr) {
        (Some(f), _) => {
            let g = GeometricFunction::get(function_name(f));
            (g.name.to_string(), g.expr, g.poly, vec![], Some("2:2.51"))
        }
        (None, Some(path)) => {
            let (text, hash) = read(path)?;
            let e: Expr = serde_json::from_str(&text).map_err(|err| usage(format!("{}: {err}", path.display())))?;
            let poly = e.to_poly(e.arity()).ok();
            (path.display().to_string(), e, poly, vec![hash], None)
        }
        (None, None) => return Err(usage("one of --function or --expr is required")),
    };
    let text = domain
        .or(default_box)
        .ok_or_else(|| usage("--box is required with --expr"))?;
    let domain = parse_box(text, e.arity())?;
    Ok(Resolved {
        label,
        expr: e,
        poly,
        domain,
        inputs,
    })
}

fn box_string(b: &RatBox) -> String {
    let parts: Vec<String> = b
        .bounds()
        .iter()
        .map(|(l, h)| format!("[{}, {}]", rational_to_string(l), rational_to_string(h)))
        .collect();
    if parts.iter().all(|p| *p == parts[0]) && parts.len() > 1 {
        format!("{}^{}", parts[0], parts.len())
    } else {
        parts.join(" x ")
    }
}

fn decimal(q: &Rational) -> String {
    format!("{:.9}", crate::numeric::rational_to_f64(q))
}

pub fn bound(a: &BoundArgs) -> Result<Outcome, CliError> {
    let r = resolve(a.target.function, a.target.expr.as_ref(), a.target.domain.as_deref())?;
    let method = a.target.method.unwrap_or(if r.poly.is_some() {
        MethodArg::Bernstein
    } else {
        MethodArg::Interval
    });
    let mut out = String::new();
    writeln!(out, "function   {}", r.label).unwrap();
    writeln!(out, "box        {}", box_string(&r.domain)).unwrap();
    let start = Instant::now();
    let record = match method {
        MethodArg::Bernstein => {
            let p = r
                .poly
                .as_ref()
                .ok_or_else(|| usage(format!("{} is not a polynomial; use --method interval", r.label)))?;
            let tol = parse_rational(&a.tolerance).map_err(|e| usage(format!("--tolerance: {e}")))?;
            match range_enclosure(p, &r.domain, &tol, a.budget) {
                Ok(enc) => {
                    writeln!(out, "method     bernstein").unwrap();
                    writeln!(
                        out,
                        "enclosure  [{}, {}]",
                        rational_to_string(&enc.lo),
                        rational_to_string(&enc.hi)
                    )
                    .unwrap();
                    writeln!(out, "           [{}, {}]", decimal(&enc.lo), decimal(&enc.hi)).unwrap();
                    writeln!(
                        out,
                        "attained   [{}, {}]",
                        rational_to_string(&enc.inner_lo),
                        rational_to_string(&enc.inner_hi)
                    )
                    .unwrap();
                    writeln!(out, "boxes      {}", enc.boxes).unwrap();
                    let mut t = task(&r.label, "Enclosed", true, start.elapsed().as_millis());
                    t.detail = Some(json!({
                        "lo": rational_to_string(&enc.lo),
                        "hi": rational_to_string(&enc.hi),
                        "attained_lo": rational_to_string(&enc.inner_lo),
                        "attained_hi": rational_to_string(&enc.inner_hi),
                        "boxes": enc.boxes,
                    }));
                    t
                }
                Err(e) => {
                    writeln!(out, "method     bernstein").unwrap();
                    writeln!(out, "failed     {e}").unwrap();
                    task(&r.label, "Failed", false, start.elapsed().as_millis())
                }
            }
        }
        MethodArg::Interval => {
            writeln!(out, "method     interval").unwrap();
            match eval_interval(&r.expr, &r.domain, a.bits) {
                Ok(iv) => {
                    writeln!(out, "enclosure  {}", iv.to_decimal_string(18)).unwrap();
                    writeln!(out, "exact      [{}, {}]", iv.lo(), iv.hi()).unwrap();
                    let mut t = task(&r.label, "Enclosed", true, start.elapsed().as_millis());
                    t.detail = Some(json!({ "lo": iv.lo().to_string(), "hi": iv.hi().to_string() }));
                    t
                }
                Err(e) => {
                    writeln!(out, "failed     {e}").unwrap();
                    task(&r.label, "Failed", false, start.elapsed().as_millis())
                }
            }
        }
    };
    Ok(Outcome {
        stdout: out,
        inputs: r.inputs,
        tasks: vec![record],
    })
}

fn verdict_name(v: Option<Verdict>) -> String {
    v.map(|v| format!("{v:?}")).unwrap_or_else(|| "Error".into())
}

pub fn prove(a: &ProveArgs) -> Result<Outcome, CliError> {
    let (entry, inputs) = match &a.entry {
        Some(path) => {
            let (text, hash) = read(path)?;
            let e = parse_entry(&text, &path.display().to_string()).map_err(|e| usage(e.to_string()))?;
            (e, vec![hash])
        }
        None => {
            let r = resolve(a.function, a.expr.as_ref(), a.domain.as_deref())?;
            let (relation, c) = match (&a.le, &a.ge, &a.lt, &a.gt) {
                (Some(c), ..) => (Relation::Le, c),
                (_, Some(c), ..) => (Relation::Ge, c),
                (_, _, Some(c), _) => (Relation::Lt, c),
                (.., Some(c)) => (Relation::Gt, c),
                _ => return Err(usage("one of --le, --ge, --lt, --gt is required")),
            };
            let bound: Const = c.parse().map_err(|e| usage(format!("bound: {e}")))?;
            let method = match a.method {
                Some(MethodArg::Bernstein) => Method::Bernstein,
                Some(MethodArg::Interval) => Method::IntervalBb,
                None if r.poly.is_some() && matches!(bound, Const::Rational(_)) => Method::Bernstein,
                None => Method::IntervalBb,
            };
            let epsilon = parse_rational(&a.epsilon).map_err(|e| usage(format!("--epsilon: {e}")))?;
            let e = NamedInequality {
                schema: SCHEMA.into(),
                id: format!("{} {} {}", r.label, relation.symbol(), bound),
                description: String::new(),
                expr: r.expr,
                domain: r.domain,
                relation,
                bound,
                epsilon: if relation.is_strict() { epsilon } else { rat_int(0) },
                method,
                surrogate: None,
                provenance: Provenance::PaperStated,
                budget: 1 << 16,
                refs: vec![],
            };
            (e, r.inputs)
        }
    };
    let budget = a.budget.unwrap_or(entry.budget);
    let start = Instant::now();
    let result = run_entry(&entry, budget);
    let millis = start.elapsed().as_millis();
    let mut out = String::new();
    writeln!(out, "claim      {}", entry.id).unwrap();
    writeln!(out, "box        {}", box_string(&entry.domain)).unwrap();
    let t = match result {
        Ok(r) => {
            writeln!(out, "verdict    {:?}", r.verdict).unwrap();
            writeln!(out, "boxes      {}", r.boxes_examined).unwrap();
            if let Some(w) = &r.witness {
                writeln!(out, "witness    {}", box_string(w)).unwrap();
            }
            let mut t = task(
                &entry.id,
                format!("{:?}", r.verdict),
                r.verdict == Verdict::Proven,
                millis,
            );
            t.detail = Some(json!({ "boxes": r.boxes_examined, "witness": r.witness }));
            t
        }
        Err(e) => {
            writeln!(out, "verdict    Error").unwrap();
            writeln!(out, "error      {e}").unwrap();
            task(&entry.id, "Error", false, millis)
        }
    };
    Ok(Outcome {
        stdout: out,
        inputs,
        tasks: vec![t],
    })
}

fn load_entries(source: &CorpusSource) -> Result<(Vec<NamedInequality>, Vec<InputHash>), CliError> {
    match &source.dir {
        None => {
            let v = builtin_corpus();
            let hashes = v
                .iter()
                .map(|e| InputHash::of_bytes(format!("builtin:{}", e.id), e.to_json().as_bytes()))
                .collect();
            Ok((v, hashes))
        }
        Some(dir) => {
            let rd = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
            let mut paths: Vec<PathBuf> = rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            let mut entries = Vec::new();
            let mut hashes = Vec::new();
            for p in paths {
                let (text, hash) = read(&p)?;
                entries.push(parse_entry(&text, &p.display().to_string()).map_err(|e| usage(e.to_string()))?);
                hashes.push(hash);
            }
            entries.sort_by(|a, b| a.id.cmp(&b.id));
            Ok((entries, hashes))
        }
    }
}

fn check_filter(filter: Option<&str>) -> Result<(), CliError> {
    if let Some(f) = filter {
        glob::Pattern::new(f).map_err(|e| usage(format!("--filter: {e}")))?;
    }
    Ok(())
}

pub fn corpus_run(a: &CorpusRunArgs) -> Result<Outcome, CliError> {
    check_filter(a.source.filter.as_deref())?;
    let (entries, mut inputs) = load_entries(&a.source)?;
    if let (None, Some(f)) = (&a.source.dir, &a.source.filter) {
        let p = glob::Pattern::new(f).expect("checked");
        inputs.retain(|h| p.matches(h.name.trim_start_matches("builtin:")));
    }
    let report = run_corpus(&entries, a.source.filter.as_deref(), a.budget).map_err(|e| usage(e.to_string()))?;
    if report.results.is_empty() {
        return Err(usage("no corpus entry matches the filter"));
    }
    let tasks = report
        .results
        .iter()
        .map(|r| TaskRecord {
            id: r.id.clone(),
            verdict: verdict_name(r.verdict),
            counts: r.provenance == Provenance::PaperStated,
            ok: r.proven(),
            millis: r.millis,
            detail: Some(json!({
                "provenance": r.provenance,
                "method": r.method,
                "boxes": r.boxes_examined,
                "witness": r.witness,
                "error": r.error,
            })),
        })
        .collect();
    let mut stdout = report.table();
    let failures = report.failures().len();
    writeln!(
        stdout,
        "{} entries, {} proven, {} failed, {} warnings",
        report.results.len(),
        report.results.iter().filter(|r| r.proven()).count(),
        failures,
        report.warnings().len()
    )
    .unwrap();
    Ok(Outcome { stdout, inputs, tasks })
}

pub fn corpus_export(out: &Path) -> Result<Outcome, CliError> {
    let v = builtin_corpus();
    write_corpus_dir(out, &v).map_err(|e| CliError::io(out, e))?;
    let mut stdout = String::new();
    for e in &v {
        writeln!(stdout, "{}", out.join(e.file_name()).display()).unwrap();
    }
    Ok(Outcome {
        stdout,
        inputs: vec![],
        tasks: vec![],
    })
}

pub fn corpus_list(a: &CorpusSource) -> Result<Outcome, CliError> {
    check_filter(a.filter.as_deref())?;
    let (entries, inputs) = load_entries(a)?;
    let pattern = a.filter.as_deref().map(|f| glob::Pattern::new(f).expect("checked"));
    let mut stdout = String::new();
    for e in entries
        .iter()
        .filter(|e| pattern.as_ref().is_none_or(|p| p.matches(&e.id)))
    {
        let prov = match e.provenance {
            Provenance::PaperStated => "paper_stated",
            Provenance::Reconstructed => "reconstructed",
        };
        writeln!(stdout, "{:<40} {:<13} {}", e.id, prov, e.description).unwrap();
    }
    Ok(Outcome {
        stdout,
        inputs,
        tasks: vec![],
    })
}

pub fn enumerate(a: &EnumerateArgs, jobs: Option<usize>) -> Result<Outcome, CliError> {
    if a.max_vertices < a.p as usize + 3 {
        return Err(usage(format!("--max-vertices must be at least p + 3 = {}", a.p + 3)));
    }
    let limits = Limits {
        max_vertices: a.max_vertices,
        max_graphs: a.max_graphs.unwrap_or(usize::MAX),
        max_depth: a.max_depth.unwrap_or(usize::MAX),
    };
    let baseline = FaceSizeBaseline;
    let succ = match a.mode {
        ModeArg::Plane => Successors::Plane,
        ModeArg::Tame => Successors::Tame(&baseline),
    };
    let width = 4 * jobs.unwrap_or_else(rayon::current_num_threads);
    let start = Instant::now();
    let e = enumerate_parallel(a.p, succ, limits, width);
    let millis = start.elapsed().as_millis();
    let mut archive = Archive::from_graphs("g", &e.graphs).expect("enumeration yields final graphs");
    if a.reduce {
        archive = archive.reduced();
    }
    let mut stdout = String::new();
    let mode = match a.mode {
        ModeArg::Plane => "plane",
        ModeArg::Tame => "tame",
    };
    writeln!(stdout, "# p={} max_vertices={} mode={mode}", a.p, a.max_vertices).unwrap();
    for g in &archive.entries {
        writeln!(stdout, "{} {}", g.label, g.graph).unwrap();
    }
    writeln!(
        stdout,
        "# final graphs: {}  visited: {}  pruned by vertices: {}  by depth: {}  graph cap hit: {}",
        archive.len(),
        e.visited,
        e.hits.vertices,
        e.hits.depth,
        e.hits.graphs
    )
    .unwrap();
    if let Some(path) = &a.out {
        let text = match a.format {
            ArchiveFormatArg::Text => archive.to_text(),
            ArchiveFormatArg::Json => archive.to_json(),
        };
        std::fs::write(path, text).map_err(|err| CliError::io(path, err))?;
    }
    let mut t = task("enumerate", "Complete", true, millis);
    t.detail = Some(json!({ "final_graphs": archive.len(), "visited": e.visited, "limit_hit": e.hits.any() }));
    Ok(Outcome {
        stdout,
        inputs: vec![],
        tasks: vec![t],
    })
}

fn load_archive(path: &Path) -> Result<(Archive, InputHash), CliError> {
    let (text, hash) = read(path)?;
    let a = Archive::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((a, hash))
}

pub fn archive_diff(a: &ArchiveDiffArgs) -> Result<Outcome, CliError> {
    let (x, hx) = load_archive(&a.a)?;
    let (y, hy) = load_archive(&a.b)?;
    let start = Instant::now();
    let d = diff_archives(&x, &y);
    let mut t = task(
        "archive-diff",
        if d.is_equivalent() { "Equivalent" } else { "Different" },
        d.is_equivalent(),
        start.elapsed().as_millis(),
    );
    t.detail = Some(serde_json::to_value(&d).expect("serializable"));
    Ok(Outcome {
        stdout: d.report(),
        inputs: vec![hx, hy],
        tasks: vec![t],
    })
}

pub fn lp_check(a: &LpCheckArgs) -> Result<Outcome, CliError> {
    let (text, hash) = read(&a.system)?;
    let mut inputs = vec![hash];
    let file = ConstraintFile::parse(&text).map_err(|e| usage(format!("{}: {e}", a.system.display())))?;
    let s = file
        .normalize(a.bits)
        .map_err(|e| usage(format!("{}: {e}", a.system.display())))?;
    if let Some(path) = &a.emit_lp {
        std::fs::write(path, emit_lp(&s)).map_err(|e| CliError::io(path, e))?;
    }
    let start = Instant::now();
    let (source, verdict) = if let Some(path) = &a.certificate {
        let (text, hash) = read(path)?;
        inputs.push(hash);
        let v = match parse_solution_named(&text, s.rows(), &s.row_names) {
            Ok(c) => check_certificate(&s, &c).map_err(|e| usage(e.to_string()))?,
            Err(e @ LpError::Bridge(_)) => return Err(usage(format!("{}: {e}", path.display()))),
            Err(e) => CertificateVerdict::NotRefuted { reason: e.to_string() },
        };
        (format!("certificate {}", path.display()), v)
    } else {
        let solver = a
            .solver
            .clone()
            .or_else(|| std::env::var_os(SOLVER_ENV).map(PathBuf::from));
        let choice = match solver {
            Some(path) => SolverChoice::External {
                path,
                timeout: Duration::from_secs(a.timeout),
            },
            None => SolverChoice::Builtin,
        };
        let source = match &choice {
            SolverChoice::Builtin => "built-in solver".to_string(),
            SolverChoice::External { path, .. } => format!("solver {}", path.display()),
        };
        (source, refute(&s, &choice).map_err(|e| usage(e.to_string()))?)
    };
    let millis = start.elapsed().as_millis();
    let mut stdout = String::new();
    writeln!(
        stdout,
        "system     {} ({} rows, {} variables)",
        a.system.display(),
        s.rows(),
        s.cols()
    )
    .unwrap();
    writeln!(stdout, "source     {source}").unwrap();
    writeln!(stdout, "verdict    {verdict}").unwrap();
    let name = if verdict.is_refuted() { "Refuted" } else { "NotRefuted" };
    let mut t = task(&a.system.display().to_string(), name, verdict.is_refuted(), millis);
    t.detail = Some(serde_json::to_value(&verdict).expect("serializable"));
    Ok(Outcome {
        stdout,
        inputs,
        tasks: vec![t],
    })
}

pub fn constants(a: &ConstantsArgs) -> Result<Outcome, CliError> {
    if !(2..=1 << 16).contains(&a.bits) {
        return Err(usage("--bits must be between 2 and 65536"));
    }
    let names = match &a.name {
        Some(n) => vec![n
            .parse::<ConstantName>()
            .map_err(|_| usage(format!("unknown constant `{n}`")))?],
        None => ConstantName::ALL.to_vec(),
    };
    let digits = (a.bits as f64 * std::f64::consts::LOG10_2).floor() as usize + 1;
    let mut stdout = String::new();
    let mut tasks = Vec::new();
    for n in names {
        let iv = enclose_constant(n, a.bits);
        writeln!(stdout, "{:<18} {}", n.as_str(), iv.to_decimal_string(digits)).unwrap();
        writeln!(stdout, "{:<18} lo = {}", "", iv.lo()).unwrap();
        writeln!(stdout, "{:<18} hi = {}", "", iv.hi()).unwrap();
        let mut t = task(n.as_str(), "Enclosed", true, 0);
        t.detail = Some(json!({ "lo": iv.lo().to_string(), "hi": iv.hi().to_string(), "bits": a.bits }));
        tasks.push(t);
    }
    Ok(Outcome {
        stdout,
        inputs: vec![],
        tasks,
    })
}
