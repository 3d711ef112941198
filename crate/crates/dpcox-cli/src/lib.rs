//! Command-line front end: argument parsing, report assembly and rendering.
//!
//! [`run`] does all the work and returns the exit code together with the text
//! destined for stdout and stderr, so the binary is a thin wrapper and tests
//! can drive the interface in-process.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use dpcox::ade::AdeLabel;
use dpcox::catalog::{
    bundled_catalog, load_catalog, verify_case_with, verify_toric, CaseReport, Catalog, ToricReport,
};
use dpcox::coxdegrees::{isometry, Classification, Classifier, MultiReason, Verdict};
use dpcox::piclattice::DivisorClass;
use dpcox::typeenum::{build_ext_dynkin, enumerate_types, find_type, SurfaceType};

/// Exit code when every requested check passed.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification or consistency check failed.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for malformed invocations and unusable inputs.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable naming the default catalog path.
pub const CATALOG_ENV: &str = "DPCOX_CATALOG";

/// Rows of the relation-count table for degrees 9 and 8, whose surfaces are
/// the plane, the plane blown up in a point, and the two quadric-like toric
/// surfaces. They lie outside the lattice machinery, which starts at degree 7.
const FIXED_ROWS: [(u8, usize); 2] = [(9, 1), (8, 3)];

#[derive(Parser, Debug)]
#[command(
    name = "dpcox",
    version,
    about = "Cox rings of generalized del Pezzo surfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Catalog file used instead of the bundled one.
    #[arg(long, env = CATALOG_ENV, global = true)]
    catalog: Option<PathBuf>,
    /// Append wall-clock timings to the output.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the types of a degree with their diagrams of negative curves.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        degree: u8,
    },
    /// Decide toric, one relation, or at least two relations.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        degree: u8,
        /// Restrict to one type, written `ADE` or `ADE:lines`.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Run the verification battery on catalog entries.
    Verify(VerifyArgs),
    /// Recompute the summary table of relation counts.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Case id; a parameterized id without suffix selects all its variants.
    #[arg(long, conflicts_with = "all")]
    case: Option<String>,
    /// Every case and every toric entry.
    #[arg(long)]
    all: bool,
    /// Keep only the given parameter value for parameterized cases.
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..=1))]
    lambda: Option<i64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Emit the table of relation counts per degree.
    #[arg(long, required = true)]
    table2: bool,
    /// Also list every type of this degree with its verdict.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    deep_enum_degree: Option<u8>,
    /// Time budget in seconds for the deep enumeration.
    #[arg(long, default_value_t = 600)]
    time_budget: u64,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output::usage(text)
            };
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Enumerate { degree } => enumerate(*degree),
        Command::Classify { degree, ty } => {
            load(&cli).and_then(|cat| classify(&cat, *degree, ty.as_deref()))
        }
        Command::Verify(v) => load(&cli).and_then(|cat| verify(&cat, v)),
        Command::Report(r) => load(&cli).and_then(|cat| report(&cat, r)),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(msg) => return Output::usage(format!("error: {msg}\n")),
    };
    if cli.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    let stdout = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => render_table(&report),
    };
    Output {
        code: if report.ok { EXIT_OK } else { EXIT_FAILURE },
        stdout,
        stderr: String::new(),
    }
}

fn load(cli: &Cli) -> Result<Catalog, String> {
    match &cli.catalog {
        None => bundled_catalog().map_err(|e| e.to_string()),
        Some(p) => {
            let bytes =
                std::fs::read(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            load_catalog(&bytes).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

/// Everything a command produces; rendered as JSON or as a table.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<TypeRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub toric: Vec<ToricReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table2: Vec<Table2Row>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// One type, with its diagram and optionally its classification.
#[derive(Debug, Clone, Serialize)]
pub struct TypeRow {
    pub degree: u8,
    /// `ADE`, or `ADE:lines` where the ADE label alone is ambiguous.
    pub id: String,
    pub ade: String,
    pub num_lines: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<Diagram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassRow>,
}

/// Extended Dynkin diagram: vertex classes and weighted edges.
#[derive(Debug, Clone, Serialize)]
pub struct Diagram {
    /// `(class, self-intersection)`, (-2)-curves first.
    pub vertices: Vec<(String, i64)>,
    /// `(i, j, m)` with `i < j` and intersection number `m > 0`, 0-based.
    pub edges: Vec<(usize, usize, i64)>,
}

/// Verdict of the decision procedure in printable form.
#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    /// `toric`, `one_relation` or `multi_relation`.
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generator_degrees: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_degree: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub assumption_dependent: bool,
    /// Catalog case of the same type, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_case: Option<String>,
    /// Relation degree carried over to the basis of that catalog case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_relation_degree: Option<String>,
}

/// Counts of types per verdict in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub degree: u8,
    pub toric: usize,
    pub one_relation: usize,
    pub multi_relation: usize,
    /// `fixed` for degrees 9 and 8, `enumerated` otherwise.
    pub source: &'static str,
    pub assumption_dependent: bool,
}

fn type_ids(types: &[SurfaceType]) -> Vec<String> {
    let mut counts: BTreeMap<&AdeLabel, usize> = BTreeMap::new();
    for t in types {
        *counts.entry(&t.ade).or_default() += 1;
    }
    types.iter().map(|t| t.label(counts[&t.ade] > 1)).collect()
}

fn diagram(t: &SurfaceType) -> Diagram {
    let d = build_ext_dynkin(t);
    let mut edges = Vec::new();
    for i in 0..d.vertices.len() {
        for j in i + 1..d.vertices.len() {
            if d.edges[i][j] != 0 {
                edges.push((i, j, d.edges[i][j]));
            }
        }
    }
    Diagram {
        vertices: d
            .vertices
            .iter()
            .map(|(c, s)| (c.to_string(), *s))
            .collect(),
        edges,
    }
}

fn class_row(c: &Classification) -> ClassRow {
    let strings = |v: &[DivisorClass]| v.iter().map(ToString::to_string).collect();
    let (verdict, pres, reason) = match &c.verdict {
        Verdict::Toric(p) => ("toric", Some(p), None),
        Verdict::OneRelation(p) => ("one_relation", Some(p), None),
        Verdict::MultiRelation(r) => (
            "multi_relation",
            None,
            Some(match r {
                MultiReason::TooManyNegativeCurves => "too_many_negative_curves",
                MultiReason::ContractionArgument => "contraction_argument",
                MultiReason::CountingSurplus => "counting_surplus",
            }),
        ),
    };
    ClassRow {
        verdict,
        generator_degrees: pres
            .map(|p| strings(&p.generator_degrees))
            .unwrap_or_default(),
        relation_degree: pres
            .and_then(|p| p.relation_degree.as_ref())
            .map(ToString::to_string),
        reason,
        witness: c.witness.clone(),
        assumption_dependent: c.assumption_dependent,
        catalog_case: None,
        catalog_relation_degree: None,
    }
}

/// Adds the catalog case of the same type and the relation degree expressed in
/// its basis, through an isometry matching the negative curves.
fn attach_catalog(
    row: &mut TypeRow,
    t: &SurfaceType,
    c: &Classification,
    cat: &Catalog,
) -> Result<(), String> {
    let Some(cl) = row.classification.as_mut() else {
        return Ok(());
    };
    let Some(case) = cat
        .cases
        .iter()
        .find(|k| k.degree == t.degree && k.ade == t.ade && k.num_lines == t.num_lines)
    else {
        return Ok(());
    };
    cl.catalog_case = Some(case.id.clone());
    if let Some(rd) = c
        .verdict
        .presentation()
        .and_then(|p| p.relation_degree.as_ref())
    {
        let target = case
            .surface_type()
            .map_err(|e| format!("{}: {e}", case.id))?;
        let map = isometry(t, &target).map_err(|e| e.to_string())?;
        cl.catalog_relation_degree = Some(map(rd).to_string());
    }
    Ok(())
}

fn type_row(
    t: &SurfaceType,
    id: String,
    with_diagram: bool,
    cl: Option<&Classification>,
) -> TypeRow {
    TypeRow {
        degree: t.degree,
        id,
        ade: t.ade.to_string(),
        num_lines: t.num_lines,
        diagram: with_diagram.then(|| diagram(t)),
        classification: cl.map(class_row),
    }
}

fn enumerate(degree: u8) -> Result<Report, String> {
    let types = enumerate_types(degree).map_err(|e| e.to_string())?;
    let ids = type_ids(&types);
    Ok(Report {
        command: "enumerate",
        ok: true,
        types: types
            .iter()
            .zip(ids)
            .map(|(t, id)| type_row(t, id, true, None))
            .collect(),
        ..Report::default()
    })
}

/// Parses `ADE` or `ADE:lines`.
fn parse_type_label(s: &str) -> Result<(AdeLabel, Option<usize>), String> {
    let (ade, lines) = match s.rsplit_once(':') {
        Some((a, l)) => (
            a,
            Some(
                l.parse::<usize>()
                    .map_err(|_| format!("bad line count in {s:?}"))?,
            ),
        ),
        None => (s, None),
    };
    let ade = ade
        .parse::<AdeLabel>()
        .map_err(|e| format!("bad type {s:?}: {e}"))?;
    Ok((ade, lines))
}

fn classify(cat: &Catalog, degree: u8, ty: Option<&str>) -> Result<Report, String> {
    let types = enumerate_types(degree).map_err(|e| e.to_string())?;
    let ids = type_ids(&types);
    let selected: Vec<usize> = match ty {
        None => (0..types.len()).collect(),
        Some(s) => {
            let (ade, lines) = parse_type_label(s)?;
            let t = find_type(&types, &ade, lines).map_err(|e| e.to_string())?;
            vec![types
                .iter()
                .position(|u| u == &t)
                .expect("found among enumerated")]
        }
    };
    let classifier = Classifier::default();
    let results: Vec<Result<Classification, String>> = selected
        .par_iter()
        .map(|&i| classifier.classify(&types[i]).map_err(|e| e.to_string()))
        .collect();
    let mut rows = Vec::new();
    for (&i, r) in selected.iter().zip(results) {
        let c = r?;
        let mut row = type_row(&types[i], ids[i].clone(), false, Some(&c));
        attach_catalog(&mut row, &types[i], &c, cat)?;
        rows.push(row);
    }
    Ok(Report {
        command: "classify",
        ok: true,
        types: rows,
        ..Report::default()
    })
}

fn verify(cat: &Catalog, args: &VerifyArgs) -> Result<Report, String> {
    let keep_lambda = |l: Option<i64>| args.lambda.is_none() || l.is_none() || l == args.lambda;
    let cases: Vec<_> = match (&args.case, args.all) {
        (Some(id), _) => {
            let prefix = format!("{id}-l");
            let hits: Vec<_> = cat
                .cases
                .iter()
                .filter(|c| c.id == *id || (c.lambda.is_some() && c.id.starts_with(&prefix)))
                .filter(|c| keep_lambda(c.lambda))
                .collect();
            if hits.is_empty() {
                return Err(format!(
                    "no catalog case {id:?} for the requested parameter"
                ));
            }
            hits
        }
        (None, true) => cat.cases.iter().filter(|c| keep_lambda(c.lambda)).collect(),
        (None, false) => return Err("verify needs --case ID or --all".into()),
    };
    let classifier = Classifier::default();
    let reports: Vec<CaseReport> = cases
        .par_iter()
        .map(|c| verify_case_with(c, &classifier))
        .collect();
    let toric: Vec<ToricReport> = if args.all {
        cat.toric
            .par_iter()
            .map(|e| verify_toric(e, &classifier))
            .collect()
    } else {
        Vec::new()
    };
    let ok = reports.iter().all(CaseReport::passed) && toric.iter().all(|t| t.passed);
    Ok(Report {
        command: "verify",
        ok,
        cases: reports,
        toric,
        ..Report::default()
    })
}

/// Verdict counts and classifications of every type of one degree.
fn classify_degree(
    degree: u8,
    classifier: &Classifier,
) -> Result<Vec<(SurfaceType, Classification)>, String> {
    let types = enumerate_types(degree).map_err(|e| e.to_string())?;
    types
        .into_par_iter()
        .map(|t| {
            let c = classifier.classify(&t).map_err(|e| e.to_string())?;
            Ok((t, c))
        })
        .collect()
}

fn count_row(degree: u8, classified: &[(SurfaceType, Classification)]) -> Table2Row {
    let mut row = Table2Row {
        degree,
        toric: 0,
        one_relation: 0,
        multi_relation: 0,
        source: "enumerated",
        assumption_dependent: false,
    };
    for (_, c) in classified {
        match c.verdict {
            Verdict::Toric(_) => row.toric += 1,
            Verdict::OneRelation(_) => row.one_relation += 1,
            Verdict::MultiRelation(_) => row.multi_relation += 1,
        }
        row.assumption_dependent |= c.assumption_dependent;
    }
    row
}

fn report(cat: &Catalog, args: &ReportArgs) -> Result<Report, String> {
    debug_assert!(args.table2);
    let classifier = Classifier::default();
    let mut rows: Vec<Table2Row> = FIXED_ROWS
        .iter()
        .map(|&(degree, toric)| Table2Row {
            degree,
            toric,
            one_relation: 0,
            multi_relation: 0,
            source: "fixed",
            assumption_dependent: false,
        })
        .collect();
    let mut notes = Vec::new();
    let mut ok = true;
    let mut by_degree = BTreeMap::new();
    for degree in (1..=7u8).rev() {
        let classified = classify_degree(degree, &classifier)?;
        rows.push(count_row(degree, &classified));
        by_degree.insert(degree, classified);
    }
    // The catalog lists the one-relation surfaces of degrees 2 and 1; their
    // types must be exactly the enumerated one-relation types.
    for degree in [2u8, 1] {
        let enumerated: BTreeSet<(String, usize)> = by_degree[&degree]
            .iter()
            .filter(|(_, c)| matches!(c.verdict, Verdict::OneRelation(_)))
            .map(|(t, _)| (t.ade.to_string(), t.num_lines))
            .collect();
        let listed: BTreeSet<(String, usize)> = cat
            .cases
            .iter()
            .filter(|c| c.degree == degree)
            .map(|c| (c.ade.to_string(), c.num_lines))
            .collect();
        if enumerated != listed {
            ok = false;
            notes.push(format!(
                "degree {degree}: enumerated one-relation types {enumerated:?} differ from catalog {listed:?}"
            ));
        }
    }
    if rows.iter().any(|r| r.assumption_dependent) {
        notes.push(
            "degree 1 counts are assumption-dependent: they rely on Cox ring generators lying in degrees \
             of negative curves or of classes pulled back from blow-downs, which is unproven in degree 1"
                .into(),
        );
    }
    let mut types = Vec::new();
    if let Some(d) = args.deep_enum_degree {
        let (listed, deep_ok, note) = deep_enumeration(d, Duration::from_secs(args.time_budget));
        types = listed;
        ok &= deep_ok;
        notes.extend(note);
    }
    Ok(Report {
        command: "report",
        ok,
        types,
        table2: rows,
        notes,
        ..Report::default()
    })
}

/// Fresh enumeration and classification of one degree on a worker thread,
/// abandoned when it exceeds `budget`.
fn deep_enumeration(degree: u8, budget: Duration) -> (Vec<TypeRow>, bool, Option<String>) {
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let classifier = Classifier::default();
        let _ = tx.send(classify_degree(degree, &classifier));
    });
    match rx.recv_timeout(budget) {
        Ok(Ok(classified)) => {
            let types: Vec<SurfaceType> = classified.iter().map(|(t, _)| t.clone()).collect();
            let ids = type_ids(&types);
            let rows = classified
                .iter()
                .zip(ids)
                .map(|((t, c), id)| type_row(t, id, false, Some(c)))
                .collect::<Vec<_>>();
            let note = format!("deep enumeration of degree {degree}: {} types", rows.len());
            (rows, true, Some(note))
        }
        Ok(Err(e)) => (
            Vec::new(),
            false,
            Some(format!("deep enumeration of degree {degree} failed: {e}")),
        ),
        Err(_) => (
            Vec::new(),
            false,
            Some(format!(
                "deep enumeration of degree {degree} exceeded the time budget of {} s",
                budget.as_secs()
            )),
        ),
    }
}

fn render_table(r: &Report) -> String {
    let mut out = String::new();
    if !r.table2.is_empty() {
        render_table2(&mut out, &r.table2);
    }
    if !r.types.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        render_types(&mut out, &r.types);
    }
    if !r.cases.is_empty() || !r.toric.is_empty() {
        render_verify(&mut out, &r.cases, &r.toric);
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms} ms");
    }
    out
}

fn render_table2(out: &mut String, rows: &[Table2Row]) {
    let _ = writeln!(
        out,
        "{:<8}{:>7}{:>13}{:>16}",
        "degree", "toric", "1 relation", ">=2 relations"
    );
    let mut sums = (0, 0, 0);
    for row in rows {
        let mark = if row.assumption_dependent { "  *" } else { "" };
        let _ = writeln!(
            out,
            "{:<8}{:>7}{:>13}{:>16}{mark}",
            row.degree, row.toric, row.one_relation, row.multi_relation
        );
        sums.0 += row.toric;
        sums.1 += row.one_relation;
        sums.2 += row.multi_relation;
    }
    let _ = writeln!(
        out,
        "{:<8}{:>7}{:>13}{:>16}",
        "total", sums.0, sums.1, sums.2
    );
    if rows.iter().any(|r| r.assumption_dependent) {
        let _ = writeln!(out, "* assumption-dependent");
    }
}

fn render_types(out: &mut String, rows: &[TypeRow]) {
    for t in rows {
        let _ = write!(out, "d{} {:<12} lines={}", t.degree, t.id, t.num_lines);
        if let Some(c) = &t.classification {
            let _ = write!(out, "  {}", c.verdict);
            if let Some(rd) = &c.relation_degree {
                let _ = write!(out, "  relation={rd}");
            }
            if let (Some(id), Some(rd)) = (&c.catalog_case, &c.catalog_relation_degree) {
                let _ = write!(out, "  {id}:relation={rd}");
            }
            if !c.generator_degrees.is_empty() {
                let _ = write!(out, "  generators=[{}]", c.generator_degrees.join(", "));
            }
            if let Some(reason) = c.reason {
                let _ = write!(out, "  reason={reason}");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  ({w})");
            }
            if c.assumption_dependent {
                let _ = write!(out, "  [assumption-dependent]");
            }
        }
        out.push('\n');
        if let Some(d) = &t.diagram {
            let verts: Vec<String> = d
                .vertices
                .iter()
                .map(|(c, s)| format!("{c}({s})"))
                .collect();
            let edges: Vec<String> = d
                .edges
                .iter()
                .map(|(i, j, m)| {
                    if *m == 1 {
                        format!("{i}-{j}")
                    } else {
                        format!("{i}-{j}x{m}")
                    }
                })
                .collect();
            let _ = writeln!(out, "    curves: {}", verts.join(" "));
            let _ = writeln!(out, "    edges: {}", edges.join(" "));
        }
    }
}

fn render_verify(out: &mut String, cases: &[CaseReport], toric: &[ToricReport]) {
    for c in cases {
        let marks: String = c
            .checks
            .iter()
            .map(|k| if k.passed { '+' } else { '-' })
            .collect();
        let status = if c.passed() { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{:<18} {marks} {status}", c.id);
        for k in c.checks.iter().filter(|k| !k.passed) {
            let _ = writeln!(
                out,
                "    ({}) {}: {}",
                k.check,
                k.name,
                k.detail.as_deref().unwrap_or("failed")
            );
        }
    }
    for t in toric {
        let status = if t.passed { "ok" } else { "FAIL" };
        let _ = writeln!(out, "toric d{} {:<11}{status}", t.degree, t.label);
        if let Some(d) = &t.detail {
            let _ = writeln!(out, "    {d}");
        }
    }
    let passed = cases.iter().filter(|c| c.passed()).count();
    let _ = write!(out, "{passed}/{} cases passed", cases.len());
    if !toric.is_empty() {
        let tp = toric.iter().filter(|t| t.passed).count();
        let _ = write!(out, ", {tp}/{} toric entries passed", toric.len());
    }
    out.push('\n');
}
