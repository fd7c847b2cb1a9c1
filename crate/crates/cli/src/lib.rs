//! Experiment runner behind the `olab` binary: config parsing, dispatch to
//! the core library and CSV/JSON report rendering.
//!
//! Every subcommand computes its full report in memory before anything is
//! written, so a failing run leaves no output files behind.

use clap::{Args, Parser, Subcommand};
use olab_core::characterize::{
    check_condition, check_membership, estimate_operator_norm, AdamsSetup, ConditionKind, MembershipClass,
    OperatorKind, Schedule, Target,
};
use olab_core::family::{self, FamilyKind};
use olab_core::norms::{
    generalized_orlicz_morrey_norm, luxemburg_norm, triviality_probe, weak_orlicz_norm, NormKind, ProbeSchedule,
    SamplingPolicy,
};
use olab_core::operators::{maximal, riesz_potential, OperatorSpec};
use olab_core::report::ConditionReport;
use olab_core::sampled::sample_function;
use olab_core::young::{classify_growth, ClassRange, GrowthClass};
use olab_core::{Ball, FormulaSpec, GridSpec, GrowthFunction, GrowthSpec, OlabError, YoungFunction, YoungSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};

/// First line of every CSV report.
pub const SCHEMA_LINE: &str = "# olab-schema v1";

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit status 2.
    Parse(String),
    Core(OlabError),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Core(OlabError::Config(_)) => 2,
            CliError::Core(OlabError::Domain(_) | OlabError::Parameter(_)) => 3,
            CliError::Core(OlabError::Unrepresentable(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<OlabError> for CliError {
    fn from(e: OlabError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "olab", version, about = "Orlicz-Morrey norm, operator and boundedness-condition experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Grid spacing, overriding the config and the default grid.
    #[arg(long, global = true)]
    pub grid_h: Option<f64>,
    /// Grid half-extent L of the domain [-L, L]^n.
    #[arg(long, global = true)]
    pub grid_extent: Option<f64>,
    /// Output directory for the CSV report and JSON summary.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the random test family.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orlicz, weak Orlicz or (weak) Orlicz-Morrey norm of a sampled formula.
    Norm(NormArgs),
    /// Fractional maximal function or Riesz potential of a sampled formula.
    Operators(OperatorArgs),
    /// Truncated check of a boundedness condition or growth-function class.
    Check(CheckArgs),
    /// Empirical operator-norm ratios over a test family.
    Adams(AdamsArgs),
    /// Triviality probe of a generalized Orlicz-Morrey space.
    Probe(ProbeArgs),
    /// Growth-class constants of a Young function.
    Classify(ClassifyArgs),
}

#[derive(Args, Debug)]
pub struct NormArgs {
    /// Formula descriptor: inline JSON or a path to a JSON file.
    #[arg(long)]
    pub input: String,
    /// Young function record, inline JSON or path.
    #[arg(long)]
    pub young: String,
    /// Growth function record for the Morrey kinds, inline JSON or path.
    #[arg(long)]
    pub growth: Option<String>,
    /// orlicz, weak-orlicz, morrey or weak-morrey.
    #[arg(long, default_value = "orlicz")]
    pub kind: String,
    /// Optional experiment config supplying grid and sampling.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    /// Formula descriptor: inline JSON or a path to a JSON file.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub alpha: f64,
    /// maximal or riesz.
    #[arg(long, default_value = "maximal")]
    pub operator: String,
    #[arg(long, overrides_with = "uncentered")]
    pub centered: bool,
    #[arg(long, overrides_with = "centered")]
    pub uncentered: bool,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Condition kind, or a growth-function class (`omega`, `g-class`).
    #[arg(long)]
    pub condition: String,
    #[arg(long)]
    pub setup: PathBuf,
    /// `tmin:tmax:per-octave`.
    #[arg(long)]
    pub range: Option<String>,
    /// Comma-separated log2 scales `e` of the truncation levels.
    #[arg(long)]
    pub rmax_schedule: Option<String>,
}

#[derive(Args, Debug)]
pub struct AdamsArgs {
    #[arg(long)]
    pub setup: PathBuf,
    /// indicators, power-decay or random; defaults to the config's family.
    #[arg(long)]
    pub family: Option<String>,
    /// strong or weak.
    #[arg(long, default_value = "strong")]
    pub target: String,
    /// maximal or riesz.
    #[arg(long, default_value = "maximal")]
    pub operator: String,
    /// Members of the random family.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long)]
    pub setup: PathBuf,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Young function record, inline JSON or path.
    #[arg(long)]
    pub young: String,
    /// delta2, nabla2, delta-prime or all.
    #[arg(long, default_value = "all")]
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    #[serde(default = "default_family_count")]
    pub count: usize,
}

fn default_family_count() -> usize {
    10
}

/// One experiment, as read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Dimension used when `grid` is absent.
    #[serde(default)]
    pub dim: Option<usize>,
    pub young: YoungSpec,
    #[serde(default)]
    pub growth: Option<GrowthSpec>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub family: Option<FamilyConfig>,
    #[serde(default)]
    pub sampling: SamplingPolicy,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// An [`ExperimentConfig`] with every record validated.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub grid: GridSpec,
    pub phi: YoungFunction,
    pub varphi: Option<GrowthFunction>,
}

impl Experiment {
    pub fn resolve(config: ExperimentConfig, global: &GlobalArgs) -> CliResult<Self> {
        let grid = resolve_grid(config.grid, config.dim.unwrap_or(1), global)?;
        let phi = YoungFunction::from_spec(&config.young)?;
        let growth = match (&config.growth, config.lambda) {
            (Some(spec), _) => Some(spec.clone()),
            (None, Some(lambda)) => Some(GrowthSpec::LambdaFlavored { lambda }),
            (None, None) => None,
        };
        let varphi = growth
            .map(|spec| GrowthFunction::from_spec(&spec, Some(&phi), grid.dim))
            .transpose()?;
        let exp = Self {
            config,
            grid,
            phi,
            varphi,
        };
        if exp.config.alpha.is_some() || exp.config.beta.is_some() {
            exp.setup()?;
        }
        exp.config.sampling.sampling_for(&olab_core::SampledFunction::zeros(grid))?;
        Ok(exp)
    }

    pub fn varphi(&self) -> CliResult<&GrowthFunction> {
        self.varphi
            .as_ref()
            .ok_or_else(|| CliError::Core(OlabError::Config("config needs `growth` or `lambda`".into())))
    }

    pub fn setup(&self) -> CliResult<AdamsSetup> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Core(OlabError::Config(format!("config needs `{name}`"))))
        };
        Ok(AdamsSetup::new(
            self.phi.clone(),
            self.varphi()?.clone(),
            need(self.config.alpha, "alpha")?,
            need(self.config.beta, "beta")?,
            self.grid.dim,
            self.config.lambda,
        )?)
    }

    /// Parameters echoed into reports.
    pub fn parameters(&self) -> Value {
        json!({
            "grid": self.grid,
            "young": self.config.young,
            "growth": self.varphi.as_ref().map(|g| g.to_spec()),
            "alpha": self.config.alpha,
            "beta": self.config.beta,
            "lambda": self.config.lambda,
            "n": self.grid.dim,
        })
    }
}

fn resolve_grid(base: Option<GridSpec>, dim: usize, global: &GlobalArgs) -> CliResult<GridSpec> {
    let mut grid = match (base, dim) {
        (Some(g), _) => g,
        (None, 1) => GridSpec::default_1d(),
        (None, 2) => GridSpec::default_2d(),
        (None, d) => return Err(OlabError::Config(format!("grid dimension must be 1 or 2, got {d}")).into()),
    };
    if let Some(h) = global.grid_h {
        grid.h = h;
    }
    if let Some(l) = global.grid_extent {
        grid.half_extent = l;
    }
    grid.validate()?;
    Ok(grid)
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load_record<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    if arg.trim_start().starts_with('{') {
        parse_json(arg, what)
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("{what} `{arg}`: {e}")))?;
        parse_json(&text, what)
    }
}

pub fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("config `{}`: {e}", path.display())))?;
    parse_json(&text, "config")
}

/// Nine significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.8e}")
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("records serialize")
}

/// Finished report of one subcommand.
#[derive(Clone, Debug)]
pub struct Report {
    /// Base name of the `.csv` and `.json` files.
    pub name: String,
    pub csv: String,
    pub summary: Value,
    /// Text printed on success.
    pub stdout: String,
    /// Output directory requested by the config.
    pub config_out: Option<PathBuf>,
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    fn finish(self) -> String {
        let body = String::from_utf8(self.writer.into_inner().expect("in-memory flush")).expect("utf-8 fields");
        format!("{SCHEMA_LINE}\n{body}")
    }
}

fn ball_fields(b: Option<&Ball>, dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    for k in 0..dim {
        out.push(opt_num(b.map(|b| b.center[k])));
    }
    out.push(opt_num(b.map(|b| b.radius)));
    out
}

fn ball_header(dim: usize) -> Vec<&'static str> {
    let mut h = vec!["witness_x"];
    if dim == 2 {
        h.push("witness_y");
    }
    h.push("witness_radius");
    h
}

fn report_summary(r: &ConditionReport) -> Value {
    json!({
        "condition": r.condition,
        "verdict": r.verdict,
        "final_constant": r.final_constant(),
        "spread": r.spread(),
        "growth_factors": r.growth_factors(),
    })
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Norm(a) => run_norm(a, &cli.global),
        Command::Operators(a) => run_operators(a, &cli.global),
        Command::Check(a) => run_check(a, &cli.global),
        Command::Adams(a) => run_adams(a, &cli.global),
        Command::Probe(a) => run_probe(a, &cli.global),
        Command::Classify(a) => run_classify(a),
    }
}

fn parse_norm_kind(s: &str) -> CliResult<NormKind> {
    match s {
        "orlicz" => Ok(NormKind::Orlicz),
        "weak-orlicz" => Ok(NormKind::WeakOrlicz),
        "morrey" => Ok(NormKind::Morrey),
        "weak-morrey" => Ok(NormKind::WeakMorrey),
        other => Err(OlabError::Config(format!("unknown norm kind `{other}`")).into()),
    }
}

pub fn run_norm(a: &NormArgs, global: &GlobalArgs) -> CliResult<Report> {
    let formula: FormulaSpec = load_record(&a.input, "formula")?;
    let young: YoungSpec = load_record(&a.young, "young function")?;
    let growth: Option<GrowthSpec> = a.growth.as_deref().map(|g| load_record(g, "growth function")).transpose()?;
    let kind = parse_norm_kind(&a.kind)?;
    let (grid, sampling, config_out) = match &a.config {
        Some(path) => {
            let c = load_config(path)?;
            (resolve_grid(c.grid, c.dim.unwrap_or(a.dim), global)?, c.sampling, c.output)
        }
        None => (resolve_grid(None, a.dim, global)?, SamplingPolicy::default(), None),
    };
    let phi = YoungFunction::from_spec(&young)?;
    let f = sample_function(&grid, &formula)?;
    let ev = match kind {
        NormKind::Orlicz => luxemburg_norm(&f, &phi, None),
        NormKind::WeakOrlicz => weak_orlicz_norm(&f, &phi, None),
        NormKind::Morrey | NormKind::WeakMorrey => {
            let spec = growth
                .as_ref()
                .ok_or_else(|| OlabError::Config("Morrey norms need `--growth`".into()))?;
            let varphi = GrowthFunction::from_spec(spec, Some(&phi), grid.dim)?;
            let weak = kind == NormKind::WeakMorrey;
            generalized_orlicz_morrey_norm(&f, &phi, &varphi, weak, &sampling.sampling_for(&f)?)?
        }
    };
    let mut header = vec!["kind", "young", "growth", "value"];
    header.extend(ball_header(grid.dim));
    let mut t = Table::new(&header);
    let mut row = vec![a.kind.clone(), compact(&young), growth.as_ref().map(compact).unwrap_or_default(), num(ev.value)];
    row.extend(ball_fields(ev.witness.as_ref(), grid.dim));
    t.row(row);
    Ok(Report {
        name: "norm".into(),
        csv: t.finish(),
        summary: json!({
            "parameters": {"grid": grid, "formula": formula, "young": young, "growth": growth, "kind": a.kind},
            "value": ev.value,
            "witness": ev.witness,
            "truncation": ev.truncation,
        }),
        stdout: format!("{}\n", num(ev.value)),
        config_out,
    })
}

pub fn run_operators(a: &OperatorArgs, global: &GlobalArgs) -> CliResult<Report> {
    let formula: FormulaSpec = load_record(&a.input, "formula")?;
    let op: OperatorKind = a.operator.parse()?;
    let grid = resolve_grid(None, a.dim, global)?;
    let f = sample_function(&grid, &formula)?;
    let centered = !a.uncentered;
    let out = match op {
        OperatorKind::FractionalMaximal => maximal(&f, &OperatorSpec::new(a.alpha, centered))?,
        OperatorKind::Riesz => riesz_potential(&f, a.alpha)?,
    };
    let mut header = vec!["index", "x"];
    if grid.dim == 2 {
        header.push("y");
    }
    header.push("value");
    let mut t = Table::new(&header);
    for (k, v) in out.values().iter().enumerate() {
        let c = grid.center(k);
        let mut row = vec![k.to_string(), num(c[0])];
        if grid.dim == 2 {
            row.push(num(c[1]));
        }
        row.push(num(*v));
        t.row(row);
    }
    Ok(Report {
        name: "operators".into(),
        csv: t.finish(),
        summary: json!({
            "parameters": {"grid": grid, "formula": formula, "operator": a.operator, "alpha": a.alpha, "centered": centered},
            "max_value": out.max_value(),
        }),
        stdout: String::new(),
        config_out: None,
    })
}

/// `tmin:tmax:per-octave`.
pub fn parse_range(s: &str) -> CliResult<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Parse(format!("range `{s}` is not tmin:tmax:per-octave"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    let per = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi, per))
}

/// Comma-separated integer log2 scales.
pub fn parse_levels(s: &str) -> CliResult<Vec<i32>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("schedule entry `{p}` is not an integer log2 scale")))
        })
        .collect()
}

enum CheckTarget {
    Condition(ConditionKind),
    Membership(MembershipClass),
}

fn parse_check_target(s: &str) -> CliResult<CheckTarget> {
    match s {
        "omega" => Ok(CheckTarget::Membership(MembershipClass::Omega)),
        "g-class" | "g" => Ok(CheckTarget::Membership(MembershipClass::G)),
        other => Ok(CheckTarget::Condition(other.parse()?)),
    }
}

pub fn run_check(a: &CheckArgs, global: &GlobalArgs) -> CliResult<Report> {
    let target = parse_check_target(&a.condition)?;
    let mut config = load_config(&a.setup)?;
    if let Some(r) = &a.range {
        let (lo, hi, per) = parse_range(r)?;
        config.schedule.t_min = lo;
        config.schedule.t_max = hi;
        config.schedule.per_octave = per;
    }
    if let Some(levels) = &a.rmax_schedule {
        config.schedule.levels = parse_levels(levels)?;
    }
    let exp = Experiment::resolve(config, global)?;
    let report = match target {
        CheckTarget::Condition(kind) => check_condition(kind, &exp.setup()?, &exp.config.schedule)?,
        CheckTarget::Membership(class) => {
            check_membership(exp.varphi()?, &exp.phi, exp.grid.dim, class, &exp.config.schedule)?
        }
    };
    let params = exp.parameters();
    let mut t = Table::new(&[
        "condition", "extent", "t_min", "t_max", "t_witness", "r_max", "constant", "verdict", "young", "growth", "alpha",
        "beta", "lambda", "n",
    ]);
    let young = compact(&exp.config.young);
    let growth = exp.varphi.as_ref().map(|g| compact(&g.to_spec())).unwrap_or_default();
    for s in &report.steps {
        t.row([
            report.condition.clone(),
            num(s.extent),
            num(s.t_min),
            num(s.t_max),
            num(s.witness),
            num(s.r_max),
            num(s.constant),
            report.verdict.to_string(),
            young.clone(),
            growth.clone(),
            opt_num(exp.config.alpha),
            opt_num(exp.config.beta),
            opt_num(exp.config.lambda),
            exp.grid.dim.to_string(),
        ]);
    }
    Ok(Report {
        name: format!("check-{}", report.condition),
        csv: t.finish(),
        summary: json!({
            "parameters": params,
            "schedule": exp.config.schedule,
            "report": report_summary(&report),
        }),
        stdout: format!("{} {}\n", report.condition, report.verdict),
        config_out: exp.config.output.clone(),
    })
}

pub fn run_adams(a: &AdamsArgs, global: &GlobalArgs) -> CliResult<Report> {
    let exp = Experiment::resolve(load_config(&a.setup)?, global)?;
    let setup = exp.setup()?;
    let op: OperatorKind = a.operator.parse()?;
    let target: Target = a.target.parse()?;
    let family_cfg = exp.config.family.clone();
    let kind = match (&a.family, &family_cfg) {
        (Some(s), _) => s.parse()?,
        (None, Some(f)) => f.kind,
        (None, None) => FamilyKind::Indicators,
    };
    let count = a.count.or(family_cfg.map(|f| f.count)).unwrap_or_else(default_family_count);
    let members = family::build(kind, &exp.grid, global.seed, count)?;
    let table = estimate_operator_norm(&setup, op, target, &members, &exp.config.sampling)?;
    let dim = exp.grid.dim;
    let mut header = vec!["id", "source_norm", "target_norm", "ratio"];
    header.extend(ball_header(dim));
    header.extend(["operator", "target", "alpha", "beta"]);
    let mut t = Table::new(&header);
    for r in &table.rows {
        let mut row = vec![r.id.clone(), num(r.source), num(r.target), num(r.ratio)];
        row.extend(ball_fields(r.witness.as_ref(), dim));
        row.extend([a.operator.clone(), a.target.clone(), num(setup.alpha), num(setup.beta)]);
        t.row(row);
    }
    let mut stdout = String::new();
    for (id, why) in &table.skipped {
        stdout.push_str(&format!("skipped {id}: {why}\n"));
    }
    stdout.push_str(&format!("max ratio {} spread {}\n", num(table.max_ratio()), num(table.spread())));
    Ok(Report {
        name: "adams".into(),
        csv: t.finish(),
        summary: json!({
            "parameters": exp.parameters(),
            "family": {"kind": kind, "count": members.len(), "seed": global.seed},
            "operator": a.operator,
            "target": a.target,
            "max_ratio": table.max_ratio(),
            "spread": table.spread(),
            "skipped": table.skipped,
        }),
        stdout,
        config_out: exp.config.output.clone(),
    })
}

pub fn run_probe(a: &ProbeArgs, global: &GlobalArgs) -> CliResult<Report> {
    let exp = Experiment::resolve(load_config(&a.setup)?, global)?;
    let mut schedule = ProbeSchedule::default_for(&exp.grid);
    schedule.center_stride = exp.config.sampling.center_stride;
    let probe = triviality_probe(&exp.grid, &exp.phi, exp.varphi()?, &schedule)?;
    let mut t = Table::new(&[
        "direction", "r_min", "r_max", "value", "witness_radius", "direction_verdict", "verdict", "young", "growth",
    ]);
    let young = compact(&exp.config.young);
    let growth = exp.varphi.as_ref().map(|g| compact(&g.to_spec())).unwrap_or_default();
    for (dir, rep) in [("outward", &probe.outward), ("inward", &probe.inward)] {
        for s in &rep.steps {
            t.row([
                dir.to_string(),
                num(s.t_min),
                num(s.t_max),
                num(s.constant),
                num(s.witness),
                rep.verdict.to_string(),
                probe.verdict.to_string(),
                young.clone(),
                growth.clone(),
            ]);
        }
    }
    Ok(Report {
        name: "probe".into(),
        csv: t.finish(),
        summary: json!({
            "parameters": exp.parameters(),
            "verdict": probe.verdict,
            "outward": report_summary(&probe.outward),
            "inward": report_summary(&probe.inward),
        }),
        stdout: format!("probe {}\n", probe.verdict),
        config_out: exp.config.output.clone(),
    })
}

pub fn run_classify(a: &ClassifyArgs) -> CliResult<Report> {
    let young: YoungSpec = load_record(&a.young, "young function")?;
    let phi = YoungFunction::from_spec(&young)?;
    let classes = if a.class == "all" {
        vec![GrowthClass::Delta2, GrowthClass::Nabla2, GrowthClass::DeltaPrime]
    } else {
        vec![GrowthClass::parse(&a.class)?]
    };
    let range = ClassRange::default();
    let mut t = Table::new(&["class", "extent", "t_min", "t_max", "constant", "witness", "verdict", "young"]);
    let mut summaries = Vec::new();
    let mut stdout = String::new();
    for class in classes {
        let rep = classify_growth(&phi, class, &range)?;
        for s in &rep.steps {
            t.row([
                class.name().to_string(),
                num(s.extent),
                num(s.t_min),
                num(s.t_max),
                num(s.constant),
                num(s.witness),
                rep.verdict.to_string(),
                compact(&young),
            ]);
        }
        stdout.push_str(&format!("{} {}\n", class.name(), rep.verdict));
        summaries.push(report_summary(&rep));
    }
    Ok(Report {
        name: "classify".into(),
        csv: t.finish(),
        summary: json!({"parameters": {"young": young}, "classes": summaries}),
        stdout,
        config_out: None,
    })
}

/// Writes `<name>.csv` and `<name>.json` (with the wall time) into `dir`.
pub fn write_report(report: &Report, dir: &Path, wall_time_s: f64) -> CliResult<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let csv_path = dir.join(format!("{}.csv", report.name));
    let json_path = dir.join(format!("{}.json", report.name));
    let mut summary = report.summary.clone();
    summary["wall_time_s"] = json!(wall_time_s);
    summary["csv"] = json!(csv_path.file_name().and_then(|n| n.to_str()));
    let pretty = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&csv_path, &report.csv).map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
    std::fs::write(&json_path, pretty + "\n").map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;
    Ok((csv_path, json_path))
}
