//! Command-line front end: catalog, predict, exact and converge.

pub mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{predict_isotropic, predict_subordinator, AsymptoticPrediction, TheoremTag};
use crate::error::{Error, Result};
use crate::inversion::{density_exact, levy_tail_exact, radial_tail_exact, subordinator_tail_exact, InversionConfig, LaplaceMethod};
use crate::processes::{build_process, catalog_entries, estimate_regvar_index, find_entry, CatalogEntry, Process, Quantity, Regime};
use crate::quadrature::QuadratureConfig;

pub use table::{ConvergenceTable, Coupling, Row, RowError, SweepSpec, SweepVariable, TableMeta};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "levy-tails", version, about = "Tail and density asymptotics of Levy processes checked against exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List processes, parameters, declared indices and oracles.
    Catalog(CatalogArgs),
    /// Evaluate one asymptotic prediction.
    Predict(PredictArgs),
    /// Evaluate one exact value.
    Exact(ExactArgs),
    /// Sweep r, compare exact and asymptotic values, write a CSV table.
    Converge(ConvergeArgs),
}

#[derive(Args, Debug)]
struct ProcessArgs {
    #[arg(long)]
    process: String,
    /// Process parameter, repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long)]
    process: Option<String>,
    #[arg(long)]
    json: bool,
    /// Also estimate indices numerically over this many decades.
    #[arg(long, value_name = "DECADES")]
    estimate: Option<u32>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value = "at-zero")]
    regime: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    r: f64,
    /// Largest epsilon for which the prediction counts as valid.
    #[arg(long, default_value_t = 1e-3)]
    threshold: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactQuantity {
    Tail,
    Density,
    #[value(name = "levy_tail", alias = "levy-tail")]
    LevyTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleChoice {
    /// Closed form when the catalog has one, numerical inversion otherwise.
    Auto,
    ClosedForm,
    Numerical,
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = OracleChoice::Auto)]
    oracle: OracleChoice,
    /// auto (Talbot, Bromwich-line fallback), gaver-stehfest or fixed-talbot.
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, default_value_t = 16)]
    gs_terms: usize,
    #[arg(long, default_value_t = 32)]
    talbot_nodes: usize,
}

impl OracleArgs {
    fn inversion(&self) -> Result<InversionConfig> {
        let cfg = InversionConfig { method: self.method.parse::<LaplaceMethod>()?, gs_terms: self.gs_terms, talbot_nodes: self.talbot_nodes };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long, value_enum)]
    quantity: ExactQuantity,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    r: f64,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value = "at-zero")]
    regime: String,
    /// start:stop:steps, log-spaced.
    #[arg(long)]
    sweep: String,
    /// t=<value>, eps=<value> or eps=<from>:<to>.
    #[arg(long)]
    couple: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Pass when |ratio - 1| at the final row is at most this.
    #[arg(long, default_value_t = 0.01)]
    threshold: f64,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    json: bool,
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for item in raw {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Config(format!("parameter {item:?} is not k=v")))?;
        let value = v.trim().parse::<f64>().map_err(|_| Error::BadParam { name: k.trim().into(), reason: format!("{v:?} is not a number") })?;
        map.insert(k.trim().to_string(), value);
    }
    Ok(map)
}

fn load(args: &ProcessArgs) -> Result<(Process, BTreeMap<String, f64>)> {
    let given = parse_params(&args.params)?;
    let process = build_process(&args.process, &given)?;
    let full = match &process {
        Process::Subordinator(s) => s.params.clone(),
        Process::Isotropic(s) => s.params.clone(),
    };
    Ok((process, full))
}

/// Prediction for any process kind.
pub fn predict(process: &Process, theorem: TheoremTag, regime: Regime, t: f64, r: f64, quad: &QuadratureConfig) -> Result<AsymptoticPrediction> {
    match process {
        Process::Subordinator(s) => predict_subordinator(s, theorem, regime, t, r),
        Process::Isotropic(s) => predict_isotropic(s, theorem, regime, t, r, quad),
    }
}

/// The exact quantity a theorem is about.
pub fn quantity_for(theorem: TheoremTag) -> ExactQuantity {
    match theorem {
        TheoremTag::T1_1 | TheoremTag::C1_2 | TheoremTag::T1_3i | TheoremTag::T1_3ii => ExactQuantity::Tail,
        TheoremTag::T1_4iDensity | TheoremTag::T1_4iiDensity | TheoremTag::T4Main2 => ExactQuantity::Density,
        TheoremTag::T1_4iKernel | TheoremTag::T1_4iiKernel | TheoremTag::P2LevyTail => ExactQuantity::LevyTail,
    }
}

/// An exact value and where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactValue {
    pub value: f64,
    pub source: &'static str,
    /// For numerical isotropic tails: whether both integration routes agree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
}

fn closed_form(process: &Process, quantity: ExactQuantity, t: f64, r: f64) -> Option<f64> {
    match (process, quantity) {
        (Process::Subordinator(s), ExactQuantity::Tail) => s.exact_tail(t, r),
        (Process::Subordinator(s), ExactQuantity::LevyTail) => s.exact_levy_tail(r),
        (Process::Subordinator(_), ExactQuantity::Density) => None,
        (Process::Isotropic(s), ExactQuantity::Tail) => s.exact_radial_tail(t, r),
        (Process::Isotropic(s), ExactQuantity::Density) => s.exact_density(t, r),
        (Process::Isotropic(s), ExactQuantity::LevyTail) => s.exact_levy_kernel(r),
    }
}

fn numerical(process: &Process, quantity: ExactQuantity, t: f64, r: f64, inv: &InversionConfig, quad: &QuadratureConfig) -> Result<ExactValue> {
    let plain = |value: f64, source: &'static str| ExactValue { value, source, routes_agree: None };
    match (process, quantity) {
        (Process::Subordinator(s), ExactQuantity::Tail) => Ok(plain(subordinator_tail_exact(s, t, r, inv)?, "laplace-inversion")),
        (Process::Subordinator(s), ExactQuantity::LevyTail) => Ok(plain(levy_tail_exact(s, r, inv)?, "laplace-inversion")),
        (Process::Isotropic(s), ExactQuantity::Tail) => {
            let tail = radial_tail_exact(s, t, r, quad)?;
            Ok(ExactValue { value: tail.value, source: "hankel-inversion", routes_agree: Some(tail.routes_agree) })
        }
        (Process::Isotropic(s), ExactQuantity::Density) => Ok(plain(density_exact(s, t, r, quad)?, "hankel-inversion")),
        (Process::Subordinator(s), ExactQuantity::Density) => Err(Error::NoOracle(format!("{} is a subordinator; its density is not computed", s.name))),
        (Process::Isotropic(s), ExactQuantity::LevyTail) => Err(Error::NoOracle(format!("{} has no numerical Levy-kernel oracle", s.name))),
    }
}

/// Exact value by the chosen oracle.
pub fn exact(
    process: &Process,
    quantity: ExactQuantity,
    t: f64,
    r: f64,
    oracle: OracleChoice,
    inv: &InversionConfig,
    quad: &QuadratureConfig,
) -> Result<ExactValue> {
    if !(t > 0.0) || !(r > 0.0) {
        return Err(Error::Config(format!("need t > 0 and r > 0, got t = {t}, r = {r}")));
    }
    let closed = || closed_form(process, quantity, t, r).map(|value| ExactValue { value, source: "closed-form", routes_agree: None });
    match oracle {
        OracleChoice::ClosedForm => closed().ok_or_else(|| Error::NoOracle(format!("{} has no closed form for this quantity", process.name()))),
        OracleChoice::Numerical => numerical(process, quantity, t, r, inv, quad),
        OracleChoice::Auto => match closed() {
            Some(v) => Ok(v),
            None => numerical(process, quantity, t, r, inv, quad),
        },
    }
}

/// Builds the full convergence table; failures are recorded per row.
#[allow(clippy::too_many_arguments)]
pub fn converge(
    process: &Process,
    params: &BTreeMap<String, f64>,
    theorem: TheoremTag,
    regime: Regime,
    sweep: &SweepSpec,
    oracle: OracleChoice,
    inv: &InversionConfig,
    quad: &QuadratureConfig,
) -> Result<ConvergenceTable> {
    sweep.validate()?;
    if theorem.is_time_free() && sweep.coupling.is_epsilon() {
        return Err(Error::Config(format!("{theorem} does not depend on t; use --couple t=<value>")));
    }
    let points = sweep.points();
    let n = points.len();
    let quantity = quantity_for(theorem);
    let results: Vec<(Row, Option<String>)> = points
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let row = || -> Result<Row> {
                let t = match (sweep.coupling, sweep.coupling.target(i, n)) {
                    (Coupling::FixedTime { t }, _) => t,
                    (_, Some(target)) => {
                        // every epsilon is linear in t
                        let unit = predict(process, theorem, regime, 1.0, r, quad)?.epsilon;
                        if !(unit > 0.0) || !unit.is_finite() {
                            return Err(Error::Precondition(format!("epsilon at t = 1 is {unit}; cannot solve for t")));
                        }
                        target / unit
                    }
                    _ => unreachable!("epsilon couplings always have a target"),
                };
                let p = predict(process, theorem, regime, t, r, quad)?;
                let e = exact(process, quantity, t, r, oracle, inv, quad)?;
                Ok(Row::new(r, t, p.epsilon, e.value, p.value))
            };
            match row() {
                Ok(row) => (row, None),
                Err(e) => (Row::failed(r, if let Coupling::FixedTime { t } = sweep.coupling { t } else { f64::NAN }), Some(e.to_string())),
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut row_errors = Vec::new();
    for (i, (row, err)) in results.into_iter().enumerate() {
        if let Some(error) = err {
            row_errors.push(RowError { row: i, error });
        }
        rows.push(row);
    }
    let oracle_name = match oracle {
        OracleChoice::Auto => "auto",
        OracleChoice::ClosedForm => "closed-form",
        OracleChoice::Numerical => "numerical",
    };
    Ok(ConvergenceTable {
        meta: TableMeta {
            process: process.name().to_string(),
            params: params.clone(),
            theorem: theorem.tag().to_string(),
            regime: regime.as_str().to_string(),
            sweep: *sweep,
            oracle: oracle_name.to_string(),
            row_errors,
        },
        rows,
    })
}

#[derive(Serialize)]
struct ParamView {
    name: &'static str,
    range: String,
    default: f64,
    integer: bool,
    description: &'static str,
}

#[derive(Serialize)]
struct IndexView {
    quantity: &'static str,
    regime: &'static str,
    index: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct EntryView {
    name: &'static str,
    kind: crate::processes::ProcessKind,
    description: &'static str,
    params: Vec<ParamView>,
    indices: Vec<IndexView>,
    oracles: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unimodal: Option<bool>,
}

fn entry_view(entry: &CatalogEntry, estimate: Option<u32>) -> Result<EntryView> {
    let process = entry.build(&BTreeMap::new())?;
    let mut indices = Vec::new();
    let mut oracles = Vec::new();
    let mut unimodal = None;
    let declared = |table: &crate::processes::RegVarTable, out: &mut Vec<IndexView>| {
        for (q, info) in table.iter() {
            out.push(IndexView { quantity: q.as_str(), regime: info.location.as_str(), index: info.index, source: "declared" });
        }
    };
    match &process {
        Process::Subordinator(s) => {
            declared(&s.regvar, &mut indices);
            if s.has_exact_tail() {
                oracles.push("closed-form tail");
            }
            if s.has_exact_levy_tail() {
                oracles.push("closed-form levy tail");
            }
            oracles.push(if s.has_complex_phi() { "laplace inversion (fixed talbot)" } else { "laplace inversion (gaver-stehfest)" });
            if let Some(decades) = estimate {
                for regime in [Regime::AtZero, Regime::AtInfinity] {
                    let phi = |l: f64| s.phi(l);
                    if let Ok(info) = estimate_regvar_index(&phi, regime, decades) {
                        indices.push(IndexView { quantity: Quantity::Phi.as_str(), regime: regime.as_str(), index: info.index, source: "estimated" });
                    }
                    let h = |l: f64| crate::asymptotics::h_of(s, l).unwrap_or(f64::NAN);
                    if let Ok(info) = estimate_regvar_index(&h, regime, decades) {
                        indices.push(IndexView { quantity: Quantity::H.as_str(), regime: regime.as_str(), index: info.index, source: "estimated" });
                    }
                }
            }
        }
        Process::Isotropic(s) => {
            declared(&s.regvar, &mut indices);
            unimodal = Some(s.unimodal);
            if s.has_exact_density() {
                oracles.push("closed-form density");
            }
            if s.has_exact_radial_tail() {
                oracles.push("closed-form radial tail");
            }
            if s.has_exact_levy_kernel() {
                oracles.push("closed-form levy kernel");
            }
            oracles.push("hankel inversion");
            if let Some(decades) = estimate {
                for regime in [Regime::AtZero, Regime::AtInfinity] {
                    let psi = |u: f64| s.psi(u);
                    if let Ok(info) = estimate_regvar_index(&psi, regime, decades) {
                        indices.push(IndexView { quantity: Quantity::Psi.as_str(), regime: regime.as_str(), index: info.index, source: "estimated" });
                    }
                    let g = |u: f64| crate::asymptotics::g_of(s, u).unwrap_or(f64::NAN);
                    if let Ok(info) = estimate_regvar_index(&g, regime, decades) {
                        indices.push(IndexView { quantity: Quantity::G.as_str(), regime: regime.as_str(), index: info.index, source: "estimated" });
                    }
                }
            }
        }
    }
    Ok(EntryView {
        name: entry.name,
        kind: entry.kind,
        description: entry.description,
        params: entry
            .params
            .iter()
            .map(|p| ParamView { name: p.name, range: p.range_text(), default: p.default, integer: p.integer, description: p.description })
            .collect(),
        indices,
        oracles,
        unimodal,
    })
}

fn cmd_catalog(args: &CatalogArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(decades) = args.estimate {
        if decades < 2 {
            return Err(Error::Config("--estimate needs at least 2 decades".into()));
        }
    }
    let entries = match &args.process {
        Some(name) => vec![find_entry(name)?],
        None => catalog_entries(),
    };
    let views = entries.iter().map(|e| entry_view(e, args.estimate)).collect::<Result<Vec<_>>>()?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&views).expect("catalog serializes")).ok();
        return Ok(EXIT_PASS);
    }
    for v in &views {
        let kind = match v.kind {
            crate::processes::ProcessKind::Subordinator => "subordinator",
            crate::processes::ProcessKind::Isotropic => "isotropic",
        };
        writeln!(out, "{} ({kind}): {}", v.name, v.description).ok();
        for p in &v.params {
            writeln!(out, "  {} in {}, default {}{}: {}", p.name, p.range, p.default, if p.integer { ", integer" } else { "" }, p.description).ok();
        }
        for i in &v.indices {
            writeln!(out, "  index of {} {}: {} ({})", i.quantity, i.regime, i.index, i.source).ok();
        }
        if let Some(u) = v.unimodal {
            writeln!(out, "  unimodal: {u}").ok();
        }
        writeln!(out, "  oracles: {}", v.oracles.join(", ")).ok();
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct PredictRecord<'a> {
    process: &'a str,
    theorem: &'static str,
    regime: &'static str,
    t: f64,
    r: f64,
    value: f64,
    leading_constant: f64,
    epsilon: f64,
    degenerate: bool,
    valid: bool,
}

fn cmd_predict(args: &PredictArgs, out: &mut dyn Write) -> Result<i32> {
    let (process, _) = load(&args.process)?;
    let theorem: TheoremTag = args.theorem.parse()?;
    let regime: Regime = args.regime.parse()?;
    let p = predict(&process, theorem, regime, args.t, args.r, &QuadratureConfig::default())?;
    let rec = PredictRecord {
        process: process.name(),
        theorem: theorem.tag(),
        regime: regime.as_str(),
        t: args.t,
        r: args.r,
        value: p.value,
        leading_constant: p.leading_constant,
        epsilon: p.epsilon,
        degenerate: p.degenerate,
        valid: p.is_valid(args.threshold),
    };
    if args.json {
        writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes")).ok();
    } else {
        writeln!(
            out,
            "{} {} {} t={} r={} value={:.6e} constant={:.6e} epsilon={:.6e} {}",
            rec.process,
            rec.theorem,
            rec.regime,
            rec.t,
            rec.r,
            rec.value,
            rec.leading_constant,
            rec.epsilon,
            if rec.degenerate {
                "degenerate"
            } else if rec.valid {
                "valid"
            } else {
                "outside-regime"
            }
        )
        .ok();
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct ExactRecord<'a> {
    process: &'a str,
    quantity: ExactQuantity,
    t: f64,
    r: f64,
    #[serde(flatten)]
    value: ExactValue,
}

fn cmd_exact(args: &ExactArgs, out: &mut dyn Write) -> Result<i32> {
    let (process, _) = load(&args.process)?;
    let inv = args.oracle.inversion()?;
    let v = exact(&process, args.quantity, args.t, args.r, args.oracle.oracle, &inv, &QuadratureConfig::default())?;
    let rec = ExactRecord { process: process.name(), quantity: args.quantity, t: args.t, r: args.r, value: v };
    if args.json {
        writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes")).ok();
    } else {
        let quantity = match args.quantity {
            ExactQuantity::Tail => "tail",
            ExactQuantity::Density => "density",
            ExactQuantity::LevyTail => "levy_tail",
        };
        let agree = match v.routes_agree {
            Some(true) => " routes-agree",
            Some(false) => " routes-disagree",
            None => "",
        };
        writeln!(out, "{} {quantity} t={} r={} value={:.10e} source={}{agree}", rec.process, rec.t, rec.r, v.value, v.source).ok();
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct ConvergeSummary<'a> {
    process: &'a str,
    theorem: &'a str,
    rows: usize,
    failed_rows: usize,
    final_ratio: f64,
    final_deviation: f64,
    threshold: f64,
    pass: bool,
}

fn cmd_converge(args: &ConvergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (process, params) = load(&args.process)?;
    let theorem: TheoremTag = args.theorem.parse()?;
    let regime: Regime = args.regime.parse()?;
    if !(args.threshold > 0.0) {
        return Err(Error::Config("--threshold must be positive".into()));
    }
    let variable = if theorem.is_radius() { SweepVariable::Radius } else { SweepVariable::R };
    let sweep = SweepSpec::parse(variable, &args.sweep, Coupling::parse(&args.couple)?)?;
    let inv = args.oracle.inversion()?;
    let table = converge(&process, &params, theorem, regime, &sweep, args.oracle.oracle, &inv, &QuadratureConfig::default())?;
    let csv = table.to_csv();
    match &args.out {
        Some(path) => std::fs::write(path, &csv).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => {
            out.write_all(csv.as_bytes()).ok();
        }
    }
    let pass = table.passes(args.threshold);
    let summary = ConvergeSummary {
        process: &table.meta.process,
        theorem: &table.meta.theorem,
        rows: table.rows.len(),
        failed_rows: table.meta.row_errors.len(),
        final_ratio: table.rows.last().map(|r| r.ratio).unwrap_or(f64::NAN),
        final_deviation: table.final_deviation(),
        threshold: args.threshold,
        pass,
    };
    for e in &table.meta.row_errors {
        writeln!(err, "row {}: {}", e.row, e.error).ok();
    }
    if args.json {
        writeln!(err, "{}", serde_json::to_string(&summary).expect("summary serializes")).ok();
    } else {
        writeln!(
            err,
            "{} {}: final ratio {:.6} (|ratio - 1| = {:.3e}, threshold {}) {}",
            summary.process,
            summary.theorem,
            summary.final_ratio,
            summary.final_deviation,
            summary.threshold,
            if pass { "PASS" } else { "FAIL" }
        )
        .ok();
    }
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(err, "{text}").ok();
            } else {
                write!(out, "{text}").ok();
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Catalog(a) => cmd_catalog(a, out),
        Command::Predict(a) => cmd_predict(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Converge(a) => cmd_converge(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            EXIT_USAGE
        }
    }
}
