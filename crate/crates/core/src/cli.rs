//! Command-line front end. `run` takes the argument list and writers so
//! that tests can drive it without spawning processes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::closed_forms::{all_predictions, Strand};
use crate::engine::{
    betti_table, polygon_hash, verify_kp1, BettiTable, EngineOptions, Kp1Verdict, RemovalMode,
};
use crate::error::{Error, Result};
use crate::format::{to_ascii, to_json};
use crate::koszul::{basis_dimension_polynomial, complex_spec, enumerate_bidegrees, ComplexKind};
use crate::linalg::PrimeModulus;
use crate::oracle::oracle_betti;
use crate::polygon::{classify, LatticePoint, LatticePolygon};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "toric-betti", version, about = "Graded Betti tables of toric surfaces from lattice polygons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the Betti table.
    Table(TableArgs),
    /// Print closed-form entries and conjectural predictions.
    Predict(PolygonArgs),
    /// Check the predicted length of the linear strand.
    #[command(name = "verify-kp1")]
    VerifyKp1(Kp1Args),
    /// Per-bidegree matrix sizes of one complex.
    Dims(DimsArgs),
    /// Compare the engine against the brute-force reference.
    #[command(name = "oracle-check")]
    OracleCheck(OracleArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct PolygonArgs {
    /// Lattice points, e.g. "0,0 1,0 0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub vertices: Option<String>,
    /// JSON file with {"vertices": [[x, y], ...]}.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Named polygon: Sigma, d*Sigma, Upsilon, Upsilon_d, d*Upsilon, Lawrence(a,b).
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 40009)]
    pub prime: u64,
    /// Comma separated primes; the table is computed for each and compared.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long, value_enum, default_value_t = RemovalArg::Auto)]
    pub removal: RemovalArg,
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub bigraded: bool,
    #[arg(long, env = "BETTI_WORKERS")]
    pub workers: Option<usize>,
    /// Per-matrix memory cap in bytes.
    #[arg(long)]
    pub memory_cap: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalArg {
    Auto,
    On,
    Off,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Ascii,
    Json,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct Kp1Args {
    /// Directory of polygon JSON files; all `*.json` files are processed.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub polygon: PolygonArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args, Debug)]
pub struct DimsArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    /// primal_b, dual_c, dual_b or primal_c.
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub l: usize,
    #[arg(long, value_enum, default_value_t = RemovalArg::Off)]
    pub removal: RemovalArg,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub polygon: PolygonArgs,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 40009])]
    pub primes: Vec<u64>,
}

/// Parses "x,y x,y ..." (semicolons also separate points).
pub fn parse_vertices(text: &str) -> Result<Vec<LatticePoint>> {
    text.split(|c: char| c.is_whitespace() || c == ';')
        .filter(|s| !s.is_empty())
        .map(|tok| {
            let (x, y) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected x,y, got {tok:?}")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate in {tok:?}")))
            };
            Ok(LatticePoint::new(num(x)?, num(y)?))
        })
        .collect()
}

fn parse_index(s: &str, what: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .ok()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Parse(format!("bad {what} in model name: {s:?}")))
}

/// Named models: `Sigma`, `d*Sigma`, `Upsilon`, `Upsilon_d`, `d*Upsilon`,
/// `Lawrence(a,b)`.
pub fn parse_model(name: &str) -> Result<LatticePolygon> {
    let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(args) = s.strip_prefix("Lawrence(").and_then(|r| r.strip_suffix(')')) {
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected Lawrence(a,b), got {name:?}")))?;
        let a = a.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad a in {name:?}")))?;
        let b = b.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad b in {name:?}")))?;
        return LatticePolygon::lawrence_prism(a, b);
    }
    if s == "Sigma" {
        return Ok(LatticePolygon::sigma(1));
    }
    if s == "Upsilon" {
        return Ok(LatticePolygon::upsilon(1));
    }
    if let Some(d) = s.strip_prefix("Upsilon_") {
        return Ok(LatticePolygon::upsilon(parse_index(d, "index")?));
    }
    if let Some(d) = s.strip_suffix("*Sigma") {
        return Ok(LatticePolygon::sigma(parse_index(d, "multiple")?));
    }
    if let Some(d) = s.strip_suffix("*Upsilon") {
        return Ok(LatticePolygon::upsilon_multiple(parse_index(d, "multiple")?));
    }
    Err(Error::Parse(format!("unknown model {name:?}")))
}

#[derive(Deserialize)]
struct PolygonFile {
    vertices: Vec<[i64; 2]>,
}

pub fn read_polygon_file(path: &Path) -> Result<LatticePolygon> {
    let text = std::fs::read_to_string(path)?;
    let f: PolygonFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let pts: Vec<LatticePoint> = f.vertices.iter().map(|v| LatticePoint::new(v[0], v[1])).collect();
    LatticePolygon::from_vertices(&pts)
}

impl PolygonArgs {
    pub fn load(&self) -> Result<LatticePolygon> {
        match (&self.vertices, &self.file, &self.model) {
            (Some(v), None, None) => LatticePolygon::from_vertices(&parse_vertices(v)?),
            (None, Some(f), None) => read_polygon_file(f),
            (None, None, Some(m)) => parse_model(m),
            _ => Err(Error::Parse(
                "give exactly one of --vertices, --file, --model".into(),
            )),
        }
    }

    fn describe(&self) -> String {
        self.model
            .clone()
            .or_else(|| self.vertices.clone())
            .or_else(|| self.file.as_ref().map(|f| f.display().to_string()))
            .unwrap_or_default()
    }
}

impl EngineArgs {
    fn options(&self, prime: u64) -> Result<EngineOptions> {
        let mut o = EngineOptions::with_prime(PrimeModulus::new(prime)?);
        o.removal = match self.removal {
            RemovalArg::Auto => RemovalMode::Auto,
            RemovalArg::On => RemovalMode::On,
            RemovalArg::Off => RemovalMode::Off,
        };
        o.symmetry = !self.no_symmetry;
        o.audit = self.audit;
        o.bigraded = self.bigraded;
        if let Some(w) = self.workers {
            o.workers = w.max(1);
        }
        if let Some(cap) = self.memory_cap {
            o.memory_cap = cap;
        }
        o.checkpoint = self.checkpoint.clone();
        Ok(o)
    }

    fn prime_list(&self) -> Vec<u64> {
        if self.primes.is_empty() {
            vec![self.prime]
        } else {
            self.primes.clone()
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceExceeded(_) => EXIT_RESOURCE,
        Error::TooLarge(_) => EXIT_CAP,
        Error::Inconsistent(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let res = match &cli.command {
        Command::Table(a) => cmd_table(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::VerifyKp1(a) => cmd_verify_kp1(a, out, err),
        Command::Dims(a) => cmd_dims(a, out),
        Command::OracleCheck(a) => cmd_oracle_check(a, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::from(e)
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let poly = a.polygon.load()?;
    let primes = a.engine.prime_list();
    let mut tables: Vec<BettiTable> = Vec::new();
    for &p in &primes {
        tables.push(betti_table(&poly, &a.engine.options(p)?)?);
    }
    let mut code = EXIT_OK;
    for t in &tables {
        match a.format {
            OutputFormat::Json => writeln!(out, "{}", to_json(&poly, t)).map_err(io)?,
            OutputFormat::Ascii => {
                let comments = vec![
                    format!("polygon {}", a.polygon.describe()),
                    format!("N = {}, prime = {}", t.n, t.prime),
                ];
                write!(out, "{}", to_ascii(t, &comments)).map_err(io)?;
            }
        }
    }
    if tables.len() > 1 {
        let agree = tables.windows(2).all(|w| w[0].b == w[1].b && w[0].c == w[1].c);
        let primes: Vec<String> = primes.iter().map(u64::to_string).collect();
        writeln!(
            out,
            "# primes {}: {}",
            primes.join(","),
            if agree { "tables agree" } else { "tables differ" }
        )
        .map_err(io)?;
        if !agree {
            code = EXIT_FAILURE;
        }
    }
    Ok(code)
}

pub fn cmd_predict(a: &PolygonArgs, out: &mut dyn Write) -> Result<i32> {
    let poly = a.load()?;
    let class = classify(&poly).tag;
    writeln!(
        out,
        "# {} : N = {}, interior = {}, boundary = {}, class {}",
        a.describe(),
        poly.n_points(),
        poly.interior_count(),
        poly.boundary_count(),
        class
    )
    .map_err(io)?;
    for e in all_predictions(&poly) {
        let name = match e.strand {
            Strand::Linear => "b",
            Strand::Quadratic => "c",
        };
        let value = match &e.value {
            Some(v) => format!("= {v}"),
            None if e.strand == Strand::Linear => "!= 0 (lower bound on strand length)".into(),
            None => "!= 0".into(),
        };
        let label = if e.source.is_conjectural() { " (conjectural)" } else { "" };
        writeln!(out, "{name}_{} {value}  [{}]{label}", e.index, e.source.tag()).map_err(io)?;
    }
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CampaignRecord {
    name: String,
    hash: String,
    line: String,
    verdict: Option<Kp1Verdict>,
}

fn kp1_line(name: &str, poly: &LatticePolygon, opts: &EngineOptions) -> (String, Option<Kp1Verdict>) {
    match verify_kp1(poly, opts) {
        Ok(r) => {
            let entries: Vec<String> = r
                .entries
                .iter()
                .map(|e| {
                    let tag = if e.value == 0 {
                        "rigorous"
                    } else {
                        "lower bound"
                    };
                    format!("b_{}={} ({tag})", e.index, e.value)
                })
                .collect();
            let verdict = match r.verdict {
                Kp1Verdict::Holds => "holds",
                Kp1Verdict::Fails => "fails",
                Kp1Verdict::ModularOnlyNonzero => "modular-only-nonzero",
            };
            (
                format!(
                    "{name}: {verdict}  N={} lw={} predicted={}  {}",
                    r.n,
                    r.lattice_width,
                    r.predicted_first_zero,
                    entries.join(" ")
                ),
                Some(r.verdict),
            )
        }
        Err(e) => (format!("{name}: error: {e}"), None),
    }
}

pub fn cmd_verify_kp1(a: &Kp1Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let opts = EngineOptions {
        checkpoint: None,
        ..a.engine.options(a.engine.prime)?
    };
    let mut jobs: Vec<(String, Result<LatticePolygon>)> = Vec::new();
    match &a.corpus {
        Some(dir) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            for f in files {
                let name = f.file_name().unwrap().to_string_lossy().into_owned();
                jobs.push((name, read_polygon_file(&f)));
            }
        }
        None => jobs.push((a.polygon.describe(), a.polygon.load())),
    }
    let mut done: BTreeMap<String, CampaignRecord> = BTreeMap::new();
    let mut ck = None;
    if let Some(path) = &a.engine.checkpoint {
        if path.exists() {
            for line in std::fs::read_to_string(path)?.lines() {
                if let Ok(r) = serde_json::from_str::<CampaignRecord>(line) {
                    done.insert(r.name.clone(), r);
                }
            }
        }
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let text = std::fs::read(path)?;
        if text.last().is_some_and(|&b| b != b'\n') {
            f.write_all(b"\n")?;
        }
        ck = Some(f);
    }
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (name, poly) in jobs {
        let hash = poly.as_ref().map(polygon_hash).unwrap_or_default();
        let rec = match done.get(&name).filter(|r| r.hash == hash) {
            Some(r) => r.clone(),
            None => {
                let (line, verdict) = match &poly {
                    Ok(p) => kp1_line(&name, p, &opts),
                    Err(e) => (format!("{name}: error: {e}"), None),
                };
                let rec = CampaignRecord { name: name.clone(), hash, line, verdict };
                if let Some(f) = ck.as_mut() {
                    let mut s = serde_json::to_string(&rec).expect("records serialize");
                    s.push('\n');
                    f.write_all(s.as_bytes())?;
                    f.flush()?;
                }
                rec
            }
        };
        if rec.verdict.is_none() {
            writeln!(err, "{}", rec.line).map_err(io)?;
        }
        writeln!(out, "{}", rec.line).map_err(io)?;
        let key = match rec.verdict {
            Some(Kp1Verdict::Holds) => "holds",
            Some(Kp1Verdict::Fails) => "fails",
            Some(Kp1Verdict::ModularOnlyNonzero) => "modular-only-nonzero",
            None => "errors",
        };
        *counts.entry(key).or_default() += 1;
    }
    let summary: Vec<String> = ["holds", "fails", "modular-only-nonzero", "errors"]
        .iter()
        .map(|k| format!("{k}={}", counts.get(k).copied().unwrap_or(0)))
        .collect();
    writeln!(out, "# summary: {}", summary.join(" ")).map_err(io)?;
    Ok(if counts.contains_key("fails") { EXIT_FAILURE } else { EXIT_OK })
}

pub fn parse_complex(name: &str, l: usize) -> Result<ComplexKind> {
    Ok(match name {
        "primal_b" => ComplexKind::PrimalB(l),
        "dual_c" => ComplexKind::DualC(l),
        "dual_b" => ComplexKind::DualB(l),
        "primal_c" => ComplexKind::PrimalC(l),
        _ => return Err(Error::Parse(format!("unknown complex {name:?}"))),
    })
}

pub fn cmd_dims(a: &DimsArgs, out: &mut dyn Write) -> Result<i32> {
    let poly = a.polygon.load()?;
    let kind = parse_complex(&a.complex, a.l)?;
    let plan = match a.removal {
        RemovalArg::Off => crate::koszul::RemovalPlan::none(),
        _ => crate::koszul::choose_removal(&poly),
    };
    let spec = complex_spec(&poly, kind, &plan)?;
    let p = spec.p;
    let mid = basis_dimension_polynomial(&spec.wedge, &spec.middle, p);
    let up = basis_dimension_polynomial(&spec.wedge, &spec.upper, p.saturating_sub(1));
    let region = enumerate_bidegrees(&spec);
    writeln!(
        out,
        "# {kind}: p = {p}, q = {}, {} bidegrees in the region",
        spec.q,
        region.len()
    )
    .map_err(io)?;
    let (mut rows_total, mut cols_total, mut peak) = (0u64, 0u64, (0u64, LatticePoint::ORIGIN));
    for ab in &region {
        let cols = mid.coeff(p, *ab);
        let rows = if p == 0 { 0 } else { up.coeff(p - 1, *ab) };
        rows_total += rows;
        cols_total += cols;
        if rows.max(cols) > peak.0 {
            peak = (rows.max(cols), *ab);
        }
        writeln!(out, "{ab} {rows} {cols}").map_err(io)?;
    }
    writeln!(out, "# total rows {rows_total}, total cols {cols_total}").map_err(io)?;
    writeln!(out, "# peak block {} at {}", peak.0, peak.1).map_err(io)?;
    Ok(EXIT_OK)
}

pub fn cmd_oracle_check(a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let poly = a.polygon.load()?;
    let mut all = true;
    for &p in &a.primes {
        let prime = PrimeModulus::new(p)?;
        let reference = oracle_betti(&poly, prime)?;
        let table = betti_table(&poly, &EngineOptions::with_prime(prime))?;
        let same = reference.b == table.b && reference.c == table.c;
        all &= same;
        writeln!(
            out,
            "p={p}: {}  b={:?} c={:?}",
            if same { "PASS" } else { "FAIL" },
            table.b,
            table.c
        )
        .map_err(io)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["toric-betti"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn models() {
        assert_eq!(parse_model("3*Sigma").unwrap(), LatticePolygon::sigma(3));
        assert_eq!(parse_model("Upsilon_2").unwrap(), LatticePolygon::upsilon(2));
        assert_eq!(parse_model("2*Upsilon").unwrap(), LatticePolygon::upsilon_multiple(2));
        assert_eq!(parse_model("Upsilon").unwrap(), LatticePolygon::upsilon(1));
        assert_eq!(parse_model("Lawrence(2,1)").unwrap().n_points(), 5);
        assert!(parse_model("Triangle").is_err());
        assert!(parse_model("0*Sigma").is_err());
    }

    #[test]
    fn table_command() {
        let (code, out, _) = run_str(&["table", "--model", "Upsilon", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["b"], serde_json::json!([0]));
        assert_eq!(v["c"], serde_json::json!([1]));
        let (code, _, err) = run_str(&["table", "--vertices", "0,0 1,1 2,2"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("dimension 1"));
        let (code, _, _) = run_str(&["table", "--model", "Sigma", "--prime", "101"]);
        assert_eq!(code, 0);
        let (code, _, _) = run_str(&["table", "--model", "Sigma", "--prime", "40008"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn oracle_cap() {
        let (code, out, _) = run_str(&["oracle-check", "--model", "2*Sigma"]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("PASS").count(), 3);
        let (code, _, _) = run_str(&["oracle-check", "--model", "4*Sigma"]);
        assert_eq!(code, EXIT_CAP);
    }
}
