//! The `polymap` command line: `gen`, `analyze`, `verify`, `index` and
//! `genericity`.
//!
//! Exit codes: 0 ok, 2 parse or configuration error, 3 Gröbner budget
//! exceeded, 4 a verification mismatch (failed cell, failed check, or a
//! quantity that could not be computed).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{cusp_sum_bound_check, full_census, generalized_cusp_index, CensusReport, Matrix2, TChoice};
use crate::genericity::{genericity_report, GenericityReport};
use crate::ideals::{GroebnerConfig, DEFAULT_BUDGET};
use crate::jets::{MapText, PlaneMap};
use crate::localint::RatPoint;
use crate::polyring::{FieldMode, Rat, DEFAULT_PRIME};
use crate::sampling::random_map;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "polymap", version, about = "Singularity census of polynomial plane maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a seeded random map.
    Gen(GenArgs),
    /// Full census of one map.
    Analyze(AnalyzeArgs),
    /// Compare computed and predicted counts over degrees and seeds.
    Verify(VerifyArgs),
    /// Generalized cusp index at rational points.
    Index(IndexArgs),
    /// Genericity checks for one map or a range of seeds.
    Genericity(GenericityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// `rational`, `prime` or `prime:<p>`.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    pub field: FieldMode,
    /// Maximum number of S-pair reductions per Gröbner basis.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

impl EngineArgs {
    fn config(&self) -> GroebnerConfig {
        GroebnerConfig { budget: self.budget, field: self.field }
    }
}

/// A map from `--in`, or generated from the degrees and seed.
#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Map file with lines `f = <poly>` and `g = <poly>`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Degree of f (the cap when reading a file).
    #[arg(long)]
    pub d1: Option<u32>,
    /// Degree of g (the cap when reading a file).
    #[arg(long)]
    pub d2: Option<u32>,
    /// Seeds the generated map and every randomized choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub coeff_bound: u64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub d1: u32,
    #[arg(long)]
    pub d2: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub coeff_bound: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Degree of f: `N` or an inclusive range `A..B`.
    #[arg(long, default_value = "1..3", value_parser = parse_range)]
    pub d1: DegreeRange,
    #[arg(long, default_value = "1..3", value_parser = parse_range)]
    pub d2: DegreeRange,
    /// Only cells with d2 <= d1.
    #[arg(long)]
    pub triangle: bool,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeds per degree cell.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 10)]
    pub coeff_bound: u64,
    /// Verify map files instead of generated maps (repeatable).
    #[arg(long = "in")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Point `x,y` with integer or `p/q` coordinates (repeatable).
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub point: Vec<RatPoint>,
    /// Target matrix `a,b,c,d` (row-major); two seeded draws when absent.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
    pub matrix: Option<Matrix2>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GenericityArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Audit this many consecutive seeds of generated maps.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: u32,
    pub hi: u32,
}

fn parse_range(s: &str) -> Result<DegreeRange, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad degree '{t}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo == 0 || lo > hi {
        return Err(format!("degree range '{s}' must satisfy 1 <= lo <= hi"));
    }
    Ok(DegreeRange { lo, hi })
}

fn parse_field(s: &str) -> Result<FieldMode, String> {
    match s {
        "rational" | "rationals" => Ok(FieldMode::Rationals),
        "prime" => FieldMode::prime(DEFAULT_PRIME),
        _ => match s.strip_prefix("prime:") {
            Some(p) => FieldMode::prime(p.parse().map_err(|_| format!("bad prime '{p}'"))?),
            None => Err(format!("unknown field '{s}' (expected rational, prime or prime:<p>)")),
        },
    }
}

fn parse_matrix(s: &str) -> Result<Matrix2, String> {
    let entries = s
        .split(',')
        .map(|t| t.trim().parse::<Rat>().map_err(|_| format!("bad matrix entry '{}'", t.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d]: [Rat; 4] = entries.try_into().map_err(|_| "matrix needs four entries a,b,c,d".to_string())?;
    Ok([[a, b], [c, d]])
}

/// Everything a run prints, plus its exit code.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

struct Rendered {
    code: i32,
    body: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let output = match &cli.command {
        Command::Gen(a) => a.output.clone(),
        Command::Analyze(a) => a.output.clone(),
        Command::Verify(a) => a.output.clone(),
        Command::Index(a) => a.output.clone(),
        Command::Genericity(a) => a.output.clone(),
    };
    let rendered = match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Analyze(a) => analyze(&a),
        Command::Verify(a) => verify(&a),
        Command::Index(a) => index(&a),
        Command::Genericity(a) => genericity(&a),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(o) => return o,
    };
    match output.out {
        Some(path) => match std::fs::write(&path, &rendered.body) {
            Ok(()) => Outcome { code: rendered.code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::error(EXIT_CONFIG, format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome { code: rendered.code, stdout: rendered.body, stderr: String::new() },
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn generate(d1: u32, d2: u32, bound: u64, seed: u64) -> Result<PlaneMap, Outcome> {
    random_map(d1, d2, bound, seed).map_err(|e| Outcome::error(EXIT_CONFIG, e))
}

fn read_map(path: &PathBuf, caps: Option<(u32, u32)>) -> Result<PlaneMap, Outcome> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_CONFIG, format!("cannot read {}: {e}", path.display())))?;
    PlaneMap::parse_file(&src, caps).map_err(|e| Outcome::error(EXIT_CONFIG, format!("{}:{e}", path.display())))
}

fn load_map(a: &MapArgs) -> Result<PlaneMap, Outcome> {
    match (&a.input, a.d1, a.d2) {
        (Some(path), Some(d1), Some(d2)) => read_map(path, Some((d1, d2))),
        (Some(path), None, None) => read_map(path, None),
        (Some(_), _, _) => Err(Outcome::error(EXIT_CONFIG, "give both --d1 and --d2 as caps, or neither")),
        (None, Some(d1), Some(d2)) => generate(d1, d2, a.coeff_bound, a.seed),
        (None, _, _) => Err(Outcome::error(EXIT_CONFIG, "need --in <file> or both --d1 and --d2")),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GenOutput {
    d1: u32,
    d2: u32,
    seed: u64,
    coeff_bound: u64,
    map: MapText,
}

fn gen(a: &GenArgs) -> Result<Rendered, Outcome> {
    let map = generate(a.d1, a.d2, a.coeff_bound, a.seed)?;
    let body = match a.output.format {
        Format::Text => map.to_file_string(),
        Format::Json => json(&GenOutput {
            d1: a.d1,
            d2: a.d2,
            seed: a.seed,
            coeff_bound: a.coeff_bound,
            map: map.to_text(),
        }),
    };
    Ok(Rendered { code: EXIT_OK, body })
}

fn analyze(a: &AnalyzeArgs) -> Result<Rendered, Outcome> {
    let map = load_map(&a.map)?;
    let report = full_census(&map, a.map.seed, &a.engine.config());
    let code = if report.hit_budget() {
        EXIT_BUDGET
    } else if report.computed.cusps.is_none() {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    let body = match a.output.format {
        Format::Text => render_census(&report),
        Format::Json => json(&report),
    };
    Ok(Rendered { code, body })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn render_verdicts(g: &GenericityReport, out: &mut String) {
    for (name, v) in g.verdicts() {
        writeln!(out, "  {name:<24} {v}").unwrap();
    }
    if let Some(s) = g.shear {
        writeln!(out, "  shear (x, y) -> (x, y + {s}*x)").unwrap();
    }
    for n in &g.notes {
        writeln!(out, "  note: {n}").unwrap();
    }
}

pub fn render_census(r: &CensusReport) -> String {
    let mut s = String::new();
    let f = &r.formulas;
    let c = &r.computed;
    let i = &r.infinity;
    writeln!(s, "f = {}", r.map.f).unwrap();
    writeln!(s, "g = {}", r.map.g).unwrap();
    writeln!(s, "degrees: d1 = {}, d2 = {}, D = {}, gcd = {}, seed = {}", r.d1, r.d2, f.big_d, f.gcd_deg, r.seed)
        .unwrap();
    writeln!(s, "formulas:").unwrap();
    writeln!(s, "  cusps {}, nodes {}, genus {}, punctures {}", f.cusps, f.nodes, f.genus, f.punctures).unwrap();
    writeln!(s, "  discriminant degree {}, delta at infinity {}", f.disc_degree, f.delta_infinity).unwrap();
    writeln!(s, "computed:").unwrap();
    writeln!(
        s,
        "  cusps {} = dim(J, J11) {} - dim(f_x, f_y) {}{}",
        opt(c.cusps),
        opt(c.dim_jj11),
        opt(c.dim_grad),
        if c.certified { "" } else { " (non-certified)" }
    )
    .unwrap();
    if let Some(d) = &c.diagnosis {
        writeln!(s, "  diagnosis: {d}").unwrap();
    }
    writeln!(
        s,
        "infinity: {} branches, branch delta {}, pairwise {}, total delta {}{}",
        i.branch_count,
        i.branch_delta,
        i.pairwise_intersection,
        i.total_delta,
        if i.smooth_at_infinity { " (smooth)" } else { "" }
    )
    .unwrap();
    writeln!(s, "genericity:").unwrap();
    render_verdicts(&r.genericity, &mut s);
    writeln!(s, "serre residual: {}", r.serre_residual).unwrap();
    writeln!(s, "flags: {}", r.flags.join("; ")).unwrap();
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Pass,
    Fail,
    Budget,
}

/// One verified map: formula against computation, all genericity checks, and
/// the Serre residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub d1: u32,
    pub d2: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub status: CellStatus,
    pub formula_cusps: i64,
    pub computed_cusps: Option<i64>,
    pub failing_checks: Vec<String>,
    pub serre_residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cells: usize,
    pub pass: usize,
    pub fail: usize,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cells: Vec<Cell>,
    pub summary: Summary,
}

fn cell(report: &CensusReport, source: Option<String>) -> Cell {
    let status = if report.confirms_formula() {
        CellStatus::Pass
    } else if report.hit_budget() {
        CellStatus::Budget
    } else {
        CellStatus::Fail
    };
    Cell {
        d1: report.d1,
        d2: report.d2,
        seed: report.seed,
        source,
        status,
        formula_cusps: report.formulas.cusps,
        computed_cusps: report.computed.cusps,
        failing_checks: report.genericity.failing().into_iter().map(String::from).collect(),
        serre_residual: report.serre_residual,
    }
}

fn verify(a: &VerifyArgs) -> Result<Rendered, Outcome> {
    let cfg = a.engine.config();
    if a.coeff_bound == 0 {
        return Err(Outcome::error(EXIT_CONFIG, "coefficient bound must be positive"));
    }
    let cells: Vec<Cell> = if a.inputs.is_empty() {
        let mut jobs = Vec::new();
        for d1 in a.d1.lo..=a.d1.hi {
            for d2 in a.d2.lo..=a.d2.hi {
                if a.triangle && d2 > d1 {
                    continue;
                }
                for k in 0..a.seeds {
                    jobs.push((d1, d2, a.seed.wrapping_add(k)));
                }
            }
        }
        jobs.par_iter()
            .map(|&(d1, d2, seed)| {
                let map = random_map(d1, d2, a.coeff_bound, seed).expect("validated degrees and bound");
                cell(&full_census(&map, seed, &cfg), None)
            })
            .collect()
    } else {
        let maps = a.inputs.iter().map(|p| read_map(p, None).map(|m| (p, m))).collect::<Result<Vec<_>, _>>()?;
        maps.par_iter()
            .map(|(p, m)| cell(&full_census(m, a.seed, &cfg), Some(p.display().to_string())))
            .collect()
    };
    let count = |s| cells.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        cells: cells.len(),
        pass: count(CellStatus::Pass),
        fail: count(CellStatus::Fail),
        budget: count(CellStatus::Budget),
    };
    let code = if summary.fail > 0 {
        EXIT_MISMATCH
    } else if summary.budget > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    };
    let report = VerifyReport { cells, summary };
    let body = match a.output.format {
        Format::Json => json(&report),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{:>3} {:>3} {:>20}  {:<6} {:>7} {:>8}  failing checks", "d1", "d2", "seed", "status", "formula", "computed")
                .unwrap();
            for c in &report.cells {
                let status = serde_json::to_value(c.status).unwrap();
                writeln!(
                    s,
                    "{:>3} {:>3} {:>20}  {:<6} {:>7} {:>8}  {}{}",
                    c.d1,
                    c.d2,
                    c.seed,
                    status.as_str().unwrap(),
                    c.formula_cusps,
                    opt(c.computed_cusps),
                    if c.failing_checks.is_empty() { "-".to_string() } else { c.failing_checks.join(",") },
                    c.source.as_ref().map(|p| format!("  [{p}]")).unwrap_or_default()
                )
                .unwrap();
            }
            let m = &report.summary;
            writeln!(s, "{} cells: {} pass, {} fail, {} budget", m.cells, m.pass, m.fail, m.budget).unwrap();
            s
        }
    };
    Ok(Rendered { code, body })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct IndexLine {
    point: String,
    index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    local_jj11: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    local_grad: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct IndexOutput {
    map: MapText,
    seed: u64,
    points: Vec<IndexLine>,
    sum: Option<i64>,
    bound: i64,
    bound_holds: Option<bool>,
    flags: Vec<String>,
}

fn index(a: &IndexArgs) -> Result<Rendered, Outcome> {
    let map = load_map(&a.map)?;
    let t = a.matrix.clone().map_or(TChoice::Auto, TChoice::Given);
    let points: Vec<IndexLine> = a
        .point
        .iter()
        .map(|p| match generalized_cusp_index(&map, p, &t, a.map.seed) {
            Ok(i) => IndexLine {
                point: p.to_string(),
                index: Some(i.index),
                local_jj11: Some(i.jj11),
                local_grad: Some(i.grad),
                error: None,
            },
            Err(e) => IndexLine { point: p.to_string(), index: None, local_jj11: None, local_grad: None, error: Some(e.to_string()) },
        })
        .collect();
    let failed = points.iter().any(|p| p.error.is_some());
    let sum = if failed || a.matrix.is_some() {
        points.iter().map(|p| p.index).sum::<Option<i64>>()
    } else {
        Some(cusp_sum_bound_check(&map, &a.point, a.map.seed).expect("indices computed above").sum)
    };
    let bound = crate::census::cusp_count_formula(map.d1(), map.d2());
    let out = IndexOutput {
        map: map.to_text(),
        seed: a.map.seed,
        bound_holds: sum.map(|s| s <= bound),
        sum,
        bound,
        points,
        flags: vec![crate::census::FLAG_ASSUMED_PROPER.into()],
    };
    let code = if failed || out.bound_holds == Some(false) { EXIT_MISMATCH } else { EXIT_OK };
    let body = match a.output.format {
        Format::Json => json(&out),
        Format::Text => {
            let mut s = String::new();
            for p in &out.points {
                match (&p.index, &p.error) {
                    (Some(i), _) => writeln!(
                        s,
                        "mu{} = {i}  (I(J, J11) = {}, I(f_x, f_y) = {})",
                        p.point,
                        p.local_jj11.unwrap(),
                        p.local_grad.unwrap()
                    )
                    .unwrap(),
                    (None, Some(e)) => writeln!(s, "mu{}: error: {e}", p.point).unwrap(),
                    (None, None) => unreachable!(),
                }
            }
            writeln!(
                s,
                "sum {} <= bound {}: {}",
                opt(out.sum),
                out.bound,
                out.bound_holds.map_or("n/a", |b| if b { "yes" } else { "no" })
            )
            .unwrap();
            writeln!(s, "flags: {}", out.flags.join("; ")).unwrap();
            s
        }
    };
    Ok(Rendered { code, body })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GenericityEntry {
    seed: u64,
    map: MapText,
    label: String,
    genericity: GenericityReport,
}

fn genericity(a: &GenericityArgs) -> Result<Rendered, Outcome> {
    let cfg = a.engine.config();
    let jobs: Vec<(u64, PlaneMap)> = match a.seeds {
        None => vec![(a.map.seed, load_map(&a.map)?)],
        Some(n) => {
            if a.map.input.is_some() {
                return Err(Outcome::error(EXIT_CONFIG, "--seeds audits generated maps and cannot be combined with --in"));
            }
            let (Some(d1), Some(d2)) = (a.map.d1, a.map.d2) else {
                return Err(Outcome::error(EXIT_CONFIG, "--seeds needs --d1 and --d2"));
            };
            (0..n)
                .map(|k| {
                    let seed = a.map.seed.wrapping_add(k);
                    generate(d1, d2, a.map.coeff_bound, seed).map(|m| (seed, m))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let entries: Vec<GenericityEntry> = jobs
        .par_iter()
        .map(|(seed, map)| {
            let report = genericity_report(map, *seed, &cfg);
            let label = if report.all_pass() {
                crate::genericity::EFFECTIVE_LABEL.to_string()
            } else {
                format!("not {}", crate::genericity::EFFECTIVE_LABEL)
            };
            GenericityEntry { seed: *seed, map: map.to_text(), label, genericity: report }
        })
        .collect();
    let code = if entries.iter().any(|e| e.genericity.any_budget()) {
        EXIT_BUDGET
    } else if entries.iter().any(|e| !e.genericity.all_pass()) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    let body = match (a.output.format, a.seeds) {
        (Format::Json, None) => json(&entries[0]),
        (Format::Json, Some(_)) => json(&entries),
        (Format::Text, _) => {
            let mut s = String::new();
            for e in &entries {
                writeln!(s, "seed {}: {}", e.seed, e.label).unwrap();
                writeln!(s, "  f = {}", e.map.f).unwrap();
                writeln!(s, "  g = {}", e.map.g).unwrap();
                render_verdicts(&e.genericity, &mut s);
            }
            s
        }
    };
    Ok(Rendered { code, body })
}
