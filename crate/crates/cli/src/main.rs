//! Command-line front end: reads a problem file, runs the Frobenius
//! pipeline, and prints a text summary or a JSON report. Optional dumps of
//! the intermediate resolution, lifting maps, and cohomology bases go to
//! stderr so stdout stays machine-readable.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use frobmat::cohomo::{twisted_basis, LaurentBasisElement};
use frobmat::freemod::{free_resolution, frobenius_resolution, lift_chain_map, FreeResolution};
use frobmat::frobenius::{dispatch, Algorithm, FrobeniusReport, ProblemSpec, Timings};
use frobmat::polyparse::{parse_problem_file, poly_to_string, ProblemFile};
use frobmat::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Auto,
    General,
    Ci,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Auto => Algorithm::Auto,
            AlgoArg::General => Algorithm::General,
            AlgoArg::Ci => Algorithm::CompleteIntersection,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DumpKind {
    Resolution,
    Lifts,
    Basis,
}

/// Frobenius action on the sheaf cohomology of a projective variety over F_p.
#[derive(Parser, Debug)]
#[command(name = "frobmat", version, disable_help_subcommand = true)]
struct CliConfig {
    /// Problem file to read.
    #[arg(long)]
    input: PathBuf,

    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Override the algorithm named in the file.
    #[arg(long, value_enum)]
    algorithm: Option<AlgoArg>,

    /// Print intermediate objects to stderr (comma-separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    dump: Vec<DumpKind>,

    /// Re-run the problem over these primes and print a table instead of a
    /// report. An empty list prints an empty table.
    #[arg(long, value_name = "p1,p2,...")]
    bench: Option<String>,

    /// Include wall-clock step timings in the report. Off by default so that
    /// identical inputs give byte-identical output.
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let config = CliConfig::parse();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Internal(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(config: &CliConfig) -> Result<(), Error> {
    let text = std::fs::read_to_string(&config.input)
        .map_err(|e| Error::Input(format!("{}: {e}", config.input.display())))?;
    let mut file = parse_problem_file(&text).map_err(|e| located(e, &text, &config.input))?;
    if let Some(a) = config.algorithm {
        file.algorithm = a.into();
    }

    if let Some(list) = &config.bench {
        return bench(config, &file, list);
    }

    let spec = file.to_spec().map_err(|e| located(e, &text, &config.input))?;
    if !config.dump.is_empty() {
        emit_dumps(config, &spec, &file.variables)?;
    }
    let report = dispatch(&spec)?;
    match config.format {
        Format::Text => print_text(config, &spec, &report, &file.variables),
        Format::Json => print_json(config, &spec, &report, &file.variables),
    }
    Ok(())
}

/// Attaches file position to expression errors, which carry only a byte
/// offset of their own.
fn located(e: Error, text: &str, path: &std::path::Path) -> Error {
    match e {
        Error::Parse { offset, message } => {
            let prefix = &text[..offset.min(text.len())];
            let line = prefix.matches('\n').count() + 1;
            let col = prefix.rfind('\n').map_or(offset + 1, |nl| offset - nl);
            Error::Input(format!("{}:{line}:{col}: {message}", path.display()))
        }
        other => other,
    }
}

fn matrix_rows(report: &FrobeniusReport) -> Vec<Vec<u32>> {
    (0..report.matrix.rows())
        .map(|i| (0..report.matrix.cols()).map(|j| report.matrix.get(i, j)).collect())
        .collect()
}

fn laurent_string(e: &LaurentBasisElement, vars: &[String], tag_slots: bool) -> String {
    let mut parts = Vec::new();
    if tag_slots {
        parts.push(format!("e{}", e.slot + 1));
    }
    for (v, name) in vars.iter().enumerate() {
        match e.exps[v] {
            0 => {}
            1 => parts.push(name.clone()),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn basis_strings(report: &FrobeniusReport, vars: &[String]) -> Vec<String> {
    let tag_slots = report
        .basis
        .iter()
        .flatten()
        .any(|(_, e)| e.slot != 0);
    report
        .basis
        .iter()
        .map(|combo| {
            let terms: Vec<String> = combo
                .iter()
                .map(|(c, e)| {
                    let m = laurent_string(e, vars, tag_slots);
                    if *c == 1 {
                        m
                    } else {
                        format!("{c}*{m}")
                    }
                })
                .collect();
            terms.join(" + ")
        })
        .collect()
}

fn char_poly_string(coeffs: &[u32]) -> String {
    let n = coeffs.len() - 1;
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = match (c, n - i) {
            (c, 0) => format!("{c}"),
            (1, 1) => "a".into(),
            (c, 1) => format!("{c}*a"),
            (1, e) => format!("a^{e}"),
            (c, e) => format!("{c}*a^{e}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_micros() as f64 / 1000.0
}

#[derive(Serialize)]
struct JsonTimings {
    step_a_ms: f64,
    step_b_ms: f64,
}

impl JsonTimings {
    fn new(t: &Timings) -> Self {
        JsonTimings { step_a_ms: ms(t.step_a), step_b_ms: ms(t.step_b) }
    }
}

#[derive(Serialize)]
struct JsonReport {
    p: u32,
    r: usize,
    q: usize,
    algorithm_used: String,
    h_dim: usize,
    matrix: Vec<Vec<u32>>,
    rank: usize,
    char_poly: Vec<u32>,
    basis: Vec<String>,
    #[serde(rename = "D")]
    d: usize,
    alpha: Option<usize>,
    timings: Option<JsonTimings>,
}

fn print_json(config: &CliConfig, spec: &ProblemSpec, report: &FrobeniusReport, vars: &[String]) {
    let out = JsonReport {
        p: spec.p(),
        r: spec.r(),
        q: spec.q(),
        algorithm_used: report.algorithm_used.to_string(),
        h_dim: report.h_dim,
        matrix: matrix_rows(report),
        rank: report.rank,
        char_poly: report.char_poly.clone(),
        basis: basis_strings(report, vars),
        d: report.d,
        alpha: report.alpha,
        timings: config.timings.then(|| JsonTimings::new(&report.timings)),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("report serialization"));
}

fn print_text(config: &CliConfig, spec: &ProblemSpec, report: &FrobeniusReport, vars: &[String]) {
    println!("p = {}, r = {}, q = {}", spec.p(), spec.r(), spec.q());
    println!("algorithm: {}", report.algorithm_used);
    println!("h^{} dimension: {}", spec.q(), report.h_dim);
    let basis = basis_strings(report, vars);
    if !basis.is_empty() {
        println!("basis:");
        for (i, b) in basis.iter().enumerate() {
            println!("  b{} = {b}", i + 1);
        }
    }
    println!("matrix (column j holds the image of basis element j):");
    for row in matrix_rows(report) {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        println!("  [{}]", cells.join(" "));
    }
    println!("rank: {}", report.rank);
    println!("char poly: {}", char_poly_string(&report.char_poly));
    println!("D: {}", report.d);
    match report.alpha {
        Some(a) => println!("alpha: {a}"),
        None => println!("alpha: -"),
    }
    if config.timings {
        println!(
            "timings: step A {:.3} ms, step B {:.3} ms",
            ms(report.timings.step_a),
            ms(report.timings.step_b)
        );
    }
}

fn emit_dumps(config: &CliConfig, spec: &ProblemSpec, vars: &[String]) -> Result<(), Error> {
    let res = free_resolution(spec.generators())?;
    if config.dump.contains(&DumpKind::Resolution) {
        dump_resolution(&res, "phi", vars);
    }
    if config.dump.contains(&DumpKind::Lifts) {
        let twisted = frobenius_resolution(&res);
        let lifts = lift_chain_map(&twisted, &res)?;
        eprintln!("lifting maps (rows act on source generators):");
        for (i, psi) in lifts.iter().enumerate() {
            eprintln!("  psi_{}: {:?} -> {:?}", i + 1, psi.source().twists(), psi.target().twists());
            for row in psi.matrix() {
                let cells: Vec<String> = row.iter().map(|p| poly_to_string(p, vars)).collect();
                eprintln!("    [{}]", cells.join(", "));
            }
        }
    }
    if config.dump.contains(&DumpKind::Basis) {
        let r = spec.r();
        let i0 = r - spec.q();
        eprintln!("twisted cohomology bases around level {i0}:");
        for i in i0.saturating_sub(1)..=(i0 + 1).min(res.length()) {
            let space = twisted_basis(res.module(i), r);
            eprintln!("  level {i} ({} elements):", space.dim());
            for e in &space.basis {
                eprintln!("    {}", laurent_string(e, vars, true));
            }
        }
    }
    Ok(())
}

fn dump_resolution(res: &FreeResolution, name: &str, vars: &[String]) {
    eprintln!("free resolution (length {}):", res.length());
    for i in 1..=res.length() {
        let m = res.map(i);
        eprintln!(
            "  {name}_{i}: {:?} -> {:?} (rows act on source generators)",
            m.source().twists(),
            m.target().twists()
        );
        for row in m.matrix() {
            let cells: Vec<String> = row.iter().map(|p| poly_to_string(p, vars)).collect();
            eprintln!("    [{}]", cells.join(", "));
        }
    }
}

#[derive(Serialize)]
struct BenchRow {
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    char_poly: Option<Vec<u32>>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    alpha: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step_a_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step_b_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn bench(config: &CliConfig, file: &ProblemFile, list: &str) -> Result<(), Error> {
    let mut primes = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let p: u64 = part
            .parse()
            .map_err(|_| Error::Input(format!("invalid bench prime `{part}`")))?;
        primes.push(p);
    }

    let mut rows = Vec::new();
    for &p in &primes {
        let row = match file.with_prime(p).and_then(|spec| dispatch(&spec)) {
            Ok(report) => BenchRow {
                p,
                rank: Some(report.rank),
                char_poly: Some(report.char_poly.clone()),
                d: Some(report.d),
                alpha: report.alpha,
                step_a_ms: Some(ms(report.timings.step_a)),
                step_b_ms: Some(ms(report.timings.step_b)),
                error: None,
            },
            Err(e) => BenchRow {
                p,
                rank: None,
                char_poly: None,
                d: None,
                alpha: None,
                step_a_ms: None,
                step_b_ms: None,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }

    match config.format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&rows).expect("table serialization"));
        }
        Format::Text => {
            println!(
                "{:<8} {:<6} {:<24} {:<5} {:<7} {:>12} {:>12}",
                "p", "rank", "char poly", "D", "alpha", "step A (ms)", "step B (ms)"
            );
            for row in &rows {
                if let Some(err) = &row.error {
                    println!("{:<8} error: {err}", row.p);
                    continue;
                }
                let alpha = row.alpha.map_or_else(|| "-".into(), |a| a.to_string());
                println!(
                    "{:<8} {:<6} {:<24} {:<5} {:<7} {:>12.3} {:>12.3}",
                    row.p,
                    row.rank.unwrap(),
                    char_poly_string(row.char_poly.as_ref().unwrap()),
                    row.d.unwrap(),
                    alpha,
                    row.step_a_ms.unwrap(),
                    row.step_b_ms.unwrap(),
                );
            }
        }
    }
    Ok(())
}
