//! Command-line front end. Every command reads a field spec and polynomial
//! specs as JSON and writes one canonical JSON report.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec, FieldTower};
use crate::linpoly::{LinearizedPoly, PolyJson};
use crate::lp::lp_census;
use crate::plane::{collineation_order, plane_from_spread, plane_report, AffineMode};
use crate::quasifield::{full_report, Quasifield};
use crate::spread::{andre_spread, desarguesian, gcd, hyper_regulus_pair, pseudoregulus_spread, spread_from_poly, verify_planar};
use crate::subspace::{
    equivalence_fast, normalize_poly, orbit_census, stabilizer_order, subspace_stabilizer_size, Group,
    SearchOptions,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "tplane", version, about = "Translation planes from scattered linearized polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Is U_f scattered?
    Scattered,
    /// Build Q_f (normalizing f first) and check the quasifield axioms.
    Quasifield,
    /// Build B_f, or the Desarguesian spread without --poly, and check it.
    Spread,
    /// Build the translation plane and check the affine axioms.
    Plane,
    /// Search for λ ∈ ΓL(2, q^t) with λ(U_f) = U_f'.
    Equiv,
    /// Order of the collineation group of A_f fixing the origin.
    Stab,
    /// Classify the planes A_{P_{b,s}}.
    LpCensus,
    /// Compare pseudoregulus spreads with single André replacements.
    AndreCheck,
    /// Orbits of {x^{q^s}} under ΓL(2, q^t).
    PseudoregulusClass,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scattered => "scattered",
            Command::Quasifield => "quasifield",
            Command::Spread => "spread",
            Command::Plane => "plane",
            Command::Equiv => "equiv",
            Command::Stab => "stab",
            Command::LpCensus => "lp-census",
            Command::AndreCheck => "andre-check",
            Command::PseudoregulusClass => "pseudoregulus-class",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Field spec JSON: {"p":2,"e":2,"t":5} with optional "modulus".
    #[arg(long, global = true)]
    pub field: Option<PathBuf>,
    /// Polynomial JSON: {"coeffs":["0","1",...]}; repeatable.
    #[arg(long, global = true)]
    pub poly: Vec<PathBuf>,
    #[arg(long, global = true, default_value = "GL")]
    pub group: String,
    #[arg(long, global = true)]
    pub s: Option<u32>,
    /// A field element, "g^k" or a decimal index.
    #[arg(long, global = true)]
    pub b: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, default_value = "-")]
    pub out: PathBuf,
    /// Run past the size guards.
    #[arg(long, global = true)]
    pub force: bool,
    #[arg(long, global = true, default_value = "structural")]
    pub mode: String,
}

/// Validated inputs of one run.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub tower: FieldTower,
    pub polys: Vec<LinearizedPoly>,
    pub group: Group,
    pub s: Option<u32>,
    pub b: Option<Elem>,
    pub mode: AffineMode,
    pub opts: SearchOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub results: Value,
    #[serde(skip)]
    pub timing_ms: u128,
}

impl Report {
    /// Sorted keys, two-space indent, trailing newline. Timing is excluded.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
}

pub fn parse_specs(command: Command, flags: &Flags) -> Result<RunConfig> {
    let field_path = flags
        .field
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("--field is required".into()))?;
    let spec: FieldSpec = read_json(field_path)?;
    let tower = FieldTower::new(&spec)?;
    let polys = flags
        .poly
        .iter()
        .map(|path| {
            let json: PolyJson = read_json(path)?;
            LinearizedPoly::from_json(&tower, &json)
                .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let b = flags.b.as_deref().map(|text| tower.parse_elem(text)).transpose()?;
    Ok(RunConfig {
        command,
        group: flags.group.parse()?,
        s: flags.s,
        b,
        mode: flags.mode.parse()?,
        opts: SearchOptions { force: flags.force },
        tower,
        polys,
    })
}

fn need_polys(cfg: &RunConfig, count: usize) -> Result<()> {
    if cfg.polys.len() != count {
        return Err(Error::InvalidParameter(format!(
            "{} needs exactly {count} --poly argument(s), got {}",
            cfg.command.name(),
            cfg.polys.len()
        )));
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Runs one command; the flag is true when every verification passed.
pub fn execute(cfg: &RunConfig) -> Result<(Value, bool)> {
    let tower = &cfg.tower;
    let opts = cfg.opts;
    match cfg.command {
        Command::Scattered => {
            need_polys(cfg, 1)?;
            let scattered = cfg.polys[0].is_scattered(tower)?;
            Ok((json!({ "scattered": scattered }), scattered))
        }
        Command::Quasifield => {
            need_polys(cfg, 1)?;
            let (f, normalizer) = normalize_poly(tower, &cfg.polys[0])?;
            let q = Quasifield::new(tower, &f)?;
            let report = full_report(tower, &q);
            let passed = report.loop_ok
                && report.left_distributive
                && report.solvability
                && report.kernel_order == tower.q() as usize;
            let mut value = to_value(&report);
            value["poly"] = to_value(&f.to_json(tower));
            value["normalizer"] = to_value(&normalizer.to_json(tower));
            Ok((value, passed))
        }
        Command::Spread => {
            let spread = match cfg.polys.as_slice() {
                [] => desarguesian(tower)?,
                [f] => spread_from_poly(tower, f)?,
                _ => return Err(Error::InvalidParameter("spread takes at most one --poly".into())),
            };
            let report = spread.report(tower);
            let passed = report.planar;
            Ok((to_value(&report), passed))
        }
        Command::Plane => {
            let (spread, order) = match cfg.polys.as_slice() {
                [] => (desarguesian(tower)?, None),
                [f] => (
                    spread_from_poly(tower, f)?,
                    Some(collineation_order(tower, f, Group::GL, opts)?),
                ),
                _ => return Err(Error::InvalidParameter("plane takes at most one --poly".into())),
            };
            let plane = plane_from_spread(tower, spread)?;
            let report = plane_report(&plane, cfg.mode, order)?;
            let passed = report.affine_axioms == "pass";
            let mut value = to_value(&report);
            value["mode"] = to_value(&cfg.mode);
            Ok((value, passed))
        }
        Command::Equiv => {
            need_polys(cfg, 2)?;
            let witness = equivalence_fast(tower, &cfg.polys[0], &cfg.polys[1], opts)?;
            let equivalent = witness.is_some();
            let value = json!({
                "equivalent": equivalent,
                "witness": witness.map(|w| to_value(&w.to_json(tower))),
            });
            Ok((value, equivalent))
        }
        Command::Stab => {
            need_polys(cfg, 1)?;
            let f = &cfg.polys[0];
            let order = stabilizer_order(tower, f, cfg.group, opts)?;
            let subspace = subspace_stabilizer_size(tower, f, cfg.group, opts)?;
            let value = json!({
                "group": cfg.group.to_string(),
                "order": order,
                "subspace_stabilizer": subspace,
            });
            Ok((value, true))
        }
        Command::LpCensus => {
            let report = lp_census(tower, cfg.s, opts)?;
            let passed = report.agree_solver_vs_ejj && report.lower_bound_ok;
            Ok((to_value(&report), passed))
        }
        Command::AndreCheck => andre_check(cfg),
        Command::PseudoregulusClass => pseudoregulus_class(cfg),
    }
}

/// For each `ω` with `N(ω) ≠ 0, 1` (or just `--b`): the spread of `ω·x^{q^s}`
/// equals one `q^s`-André replacement at `N(ω)`, and the hyper-regulus pair
/// covers the same vectors.
fn andre_check(cfg: &RunConfig) -> Result<(Value, bool)> {
    let tower = &cfg.tower;
    let s = cfg.s.unwrap_or(1);
    let omegas: Vec<Elem> = match cfg.b {
        Some(b) => vec![b],
        None => tower
            .nonzero()
            .filter(|&w| tower.rel_norm(w) != Elem::ONE)
            .collect(),
    };
    let mut failures = Vec::new();
    for &w in &omegas {
        let spread = pseudoregulus_spread(tower, w, s)?;
        let andre = andre_spread(tower, &[(tower.rel_norm(w), s)])?;
        let pair = hyper_regulus_pair(tower, &LinearizedPoly::monomial(tower, w, s))?;
        let ok = spread.same_components(&andre)
            && pair.cover_equal
            && verify_planar(tower, &spread).planar;
        if !ok {
            failures.push(tower.format_elem(w));
        }
    }
    let passed = failures.is_empty();
    let value = json!({
        "s": s,
        "checked": omegas.len(),
        "all_equal": passed,
        "failures": failures,
    });
    Ok((value, passed))
}

/// Census of `{x^{q^s} : 0 < s < t, gcd(s, t) = 1}`, compared with the
/// partition by `s ≡ ±s' (mod t)`.
fn pseudoregulus_class(cfg: &RunConfig) -> Result<(Value, bool)> {
    let tower = &cfg.tower;
    let t = tower.t();
    let exps: Vec<u32> = (1..t).filter(|&s| gcd(s, t) == 1).collect();
    let family: Vec<LinearizedPoly> = exps
        .iter()
        .map(|&s| LinearizedPoly::monomial(tower, Elem::ONE, s))
        .collect();
    let census = orbit_census(tower, &family, cfg.opts)?;
    let orbits: Vec<Vec<u32>> = census
        .orbits
        .iter()
        .map(|o| o.iter().map(|&i| exps[i]).collect())
        .collect();
    let mut predicted: Vec<Vec<u32>> = Vec::new();
    for &s in &exps {
        if let Some(class) = predicted.iter_mut().find(|c| c[0] == t - s) {
            class.push(s);
        } else {
            predicted.push(vec![s]);
        }
    }
    let passed = orbits == predicted;
    let value = json!({
        "exponents": exps,
        "orbits": orbits,
        "classes": orbits.len(),
        "predicted": predicted,
        "matches_prediction": passed,
    });
    Ok((value, passed))
}

/// Writes the canonical report to `path`, or to standard output for `-`.
pub fn emit_report(report: &Report, path: &Path) -> Result<()> {
    let text = report.to_canonical_json();
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::Io(format!("stdout: {e}")))
    } else {
        fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn configure_workers(workers: usize) {
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build_global();
}

/// Parses, runs and emits; returns the report (if one was produced) and the
/// exit code: 0 on success, 1 on a failed verification, 2 on usage or I/O
/// errors.
pub fn run<I, T>(argv: I) -> (i32, Option<Report>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return (code, None);
        }
    };
    configure_workers(cli.flags.workers);
    if cli.flags.force {
        eprintln!("warning: size guards disabled by --force");
    }
    let start = Instant::now();
    let outcome = parse_specs(cli.command, &cli.flags).and_then(|cfg| execute(&cfg));
    let (results, passed) = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return (2, None);
        }
    };
    let report = Report {
        command: cli.command.name().to_string(),
        version: VERSION.to_string(),
        results,
        timing_ms: start.elapsed().as_millis(),
    };
    eprintln!("{}: {} ms", report.command, report.timing_ms);
    if let Err(e) = emit_report(&report, &cli.flags.out) {
        eprintln!("error: {e}");
        return (2, Some(report));
    }
    (if passed { 0 } else { 1 }, Some(report))
}
