//! Command-line front end. Every subcommand resolves its flags against an
//! optional JSON config file (flags win) and writes JSON or CSV reports.
//!
//! Exit status: 0 when every checked inequality holds, 1 on a violation,
//! 2 on an invalid configuration or input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::bounds::{
    self, strong_type_constant, verify_into_itself_with, verify_strong_type_with, verify_weak_type_with,
    weak_type_constant, BoundReport,
};
use crate::compactness::{self, FamilySpec, SimonOptions};
use crate::counterexamples::{self, CaseId, CounterexampleSpec};
use crate::error::FracError;
use crate::fracderiv::{caputo_derivative, rl_derivative, SmoothGridFunction};
use crate::fracint::{rl_integral_grid, rl_integral_grid_fft, FracIntegralPlan};
use crate::funcspace::{
    chebyshev_check, distribution_function, embedding_check, mesh, weak_lp_argmax, GridFunction, Interval, LpNorm,
    VectorNorm,
};
use crate::random::{random_piecewise_linear, seed_list};
use crate::report::{fmt9, sig9};

/// Smallest accepted mesh.
pub const MIN_MESH: usize = 17;
const DEFAULT_MESH: usize = 257;
const DEFAULT_COUNT: usize = 100;
const DEFAULT_MEMBERS: usize = 20;
/// Relative slack granted to the measured non-compactness gap.
pub const GAP_SLACK: f64 = 0.02;

#[derive(Debug, Parser)]
#[command(name = "fraclab", version, about = "Riemann–Liouville fractional integrals on Bochner–Lebesgue spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Base seed for random test functions.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of mesh nodes (at least 17).
    #[arg(long, global = true)]
    pub mesh: Option<usize>,
    /// Grading exponent of the mesh toward t0.
    #[arg(long, global = true)]
    pub grading: Option<f64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long, global = true, hide = true)]
    pub constant_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyKind {
    Weak,
    Strong,
    Embedding,
    IntoItself,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeriveKind {
    Rl,
    Caputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactMode {
    Simon,
    Gap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply J^α to a grid function read from CSV.
    Integrate {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        norm: Option<String>,
        /// Use the FFT backend (uniform meshes only).
        #[arg(long)]
        fft: bool,
    },
    /// Riemann–Liouville or Caputo derivative of a CSV grid function.
    Derive {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<DeriveKind>,
        #[arg(long)]
        norm: Option<String>,
    },
    /// Strong and weak norms plus a distribution-function table.
    Norms {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        norm: Option<String>,
    },
    /// Check an inequality on seeded random functions (or one CSV input).
    Verify {
        #[arg(value_enum)]
        kind: Option<VerifyKind>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        norm: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Build a sharpness counterexample and probe its divergence.
    Counterexample {
        #[arg(long = "case")]
        case_id: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Target exponent; `inf` accepted.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
    /// Translation-modulus diagnostic or non-compactness gap.
    Compact {
        #[arg(long, value_enum)]
        mode: Option<CompactMode>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        members: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        h: Option<Vec<f64>>,
    },
    /// Tabulate weak-type and strong-type constants.
    Constants {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        p: Option<Vec<f64>>,
    },
    /// Run the command named in the config file.
    Run,
}

/// Mesh section of a config.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub size: Option<usize>,
    pub grading: Option<f64>,
}

fn de_opt_f64_inf<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }
    match Option::<NumOrStr>::deserialize(d)? {
        None => Ok(None),
        Some(NumOrStr::Num(x)) => Ok(Some(x)),
        Some(NumOrStr::Str(s)) => s
            .parse::<f64>()
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("expected a number or \"inf\", got \"{s}\""))),
    }
}

/// Every setting a subcommand may need; each is optional so that flags and
/// a config file can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    #[serde(default, deserialize_with = "de_opt_f64_inf")]
    pub q: Option<f64>,
    #[serde(default, deserialize_with = "de_opt_f64_inf")]
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub interval: Option<[f64; 2]>,
    pub mesh: Option<MeshConfig>,
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub count: Option<usize>,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub case_id: Option<String>,
    pub h_schedule: Option<Vec<f64>>,
    pub eps_schedule: Option<Vec<f64>>,
    pub verify: Option<VerifyKind>,
    pub derive: Option<DeriveKind>,
    pub mode: Option<CompactMode>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub members: Option<usize>,
    pub dim: Option<usize>,
    pub norm: Option<String>,
    pub fft: Option<bool>,
    pub levels: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    pub ps: Option<Vec<f64>>,
    pub constant_scale: Option<f64>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),*) => {
        $( if $top.$f.is_none() { $top.$f = $base.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Fills every unset field of `self` from `base`.
    pub fn overlay(mut self, base: &RunConfig) -> RunConfig {
        overlay!(
            self,
            base,
            command,
            alpha,
            p,
            q,
            eta,
            beta,
            interval,
            seed,
            seeds,
            count,
            input_path,
            output_path,
            case_id,
            h_schedule,
            eps_schedule,
            verify,
            derive,
            mode,
            n,
            m,
            members,
            dim,
            norm,
            fft,
            levels,
            alphas,
            ps,
            constant_scale
        );
        let mut mesh = self.mesh.take().unwrap_or_default();
        if let Some(b) = &base.mesh {
            mesh.size = mesh.size.or(b.size);
            mesh.grading = mesh.grading.or(b.grading);
        }
        if mesh.size.is_some() || mesh.grading.is_some() {
            self.mesh = Some(mesh);
        }
        self
    }
}

/// A failure mapped to exit status 2, with the offending field when known.
#[derive(Debug)]
pub struct ConfigError {
    pub field: Option<&'static str>,
    pub message: String,
}

impl ConfigError {
    fn field(field: &'static str, message: impl Into<String>) -> Self {
        ConfigError { field: Some(field), message: message.into() }
    }
}

impl From<FracError> for ConfigError {
    fn from(e: FracError) -> Self {
        ConfigError { field: None, message: e.to_string() }
    }
}

impl From<io::Error> for ConfigError {
    fn from(e: io::Error) -> Self {
        ConfigError { field: None, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, ConfigError>;

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub body: String,
    pub violation: Option<String>,
}

fn require<T: Clone>(v: &Option<T>, field: &'static str) -> CliResult<T> {
    v.clone().ok_or_else(|| ConfigError::field(field, "missing required value"))
}

fn interval_of(cfg: &RunConfig) -> CliResult<Interval> {
    let [a, b] = cfg.interval.unwrap_or([0.0, 1.0]);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ConfigError::field("interval", format!("need finite t0 < t1, got [{a}, {b}]")));
    }
    Ok(Interval { start: a, end: b })
}

fn mesh_of(cfg: &RunConfig) -> CliResult<Vec<f64>> {
    let iv = interval_of(cfg)?;
    let m = cfg.mesh.clone().unwrap_or_default();
    let size = m.size.unwrap_or(DEFAULT_MESH);
    if size < MIN_MESH {
        return Err(ConfigError::field("mesh.size", format!("must be >= {MIN_MESH}, got {size}")));
    }
    let g = m.grading.unwrap_or(1.0);
    if !(g >= 1.0 && g.is_finite()) {
        return Err(ConfigError::field("mesh.grading", format!("must be >= 1, got {g}")));
    }
    Ok(mesh::graded(iv.start, iv.end, size, g)?)
}

fn norm_of(cfg: &RunConfig) -> CliResult<VectorNorm> {
    match &cfg.norm {
        None => Ok(VectorNorm::Euclidean),
        Some(s) => s.parse().map_err(|e: FracError| ConfigError::field("norm", e.to_string())),
    }
}

fn seeds_of(cfg: &RunConfig, default_count: usize) -> CliResult<Vec<u64>> {
    if let Some(s) = &cfg.seeds {
        if s.is_empty() {
            return Err(ConfigError::field("seeds", "seed list is empty"));
        }
        return Ok(s.clone());
    }
    let count = cfg.count.unwrap_or(default_count);
    if count == 0 {
        return Err(ConfigError::field("count", "must be positive"));
    }
    Ok(seed_list(cfg.seed.unwrap_or(0), count))
}

fn strictly_decreasing(v: &[f64], field: &'static str) -> CliResult<()> {
    if v.iter().any(|x| !(*x > 0.0)) || v.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ConfigError::field(field, "must be positive and strictly decreasing"));
    }
    Ok(())
}

fn read_input(cfg: &RunConfig) -> CliResult<GridFunction> {
    let path = require(&cfg.input_path, "input_path")?;
    let norm = norm_of(cfg)?;
    GridFunction::read_csv_path(&path, norm)
        .map_err(|e| ConfigError::field("input_path", format!("{}: {e}", path.display())))
}

fn csv_of(g: &GridFunction) -> CliResult<String> {
    let mut buf = Vec::new();
    g.write_csv(&mut buf)?;
    Ok(String::from_utf8_lossy(&buf).into_owned())
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn check_output(cfg: &RunConfig) -> CliResult<()> {
    if let Some(p) = &cfg.output_path {
        let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(ConfigError::field("output_path", format!("directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

fn cmd_integrate(cfg: &RunConfig) -> CliResult<Outcome> {
    let alpha = require(&cfg.alpha, "alpha")?;
    let f = read_input(cfg)?;
    let image = if cfg.fft.unwrap_or(false) { rl_integral_grid_fft(&f, alpha)? } else { rl_integral_grid(&f, alpha)? };
    Ok(Outcome { body: csv_of(&image)?, violation: None })
}

fn cmd_derive(cfg: &RunConfig) -> CliResult<Outcome> {
    let alpha = require(&cfg.alpha, "alpha")?;
    let f = read_input(cfg)?;
    let d = match cfg.derive.unwrap_or(DeriveKind::Rl) {
        DeriveKind::Rl => rl_derivative(&f, alpha)?,
        DeriveKind::Caputo => caputo_derivative(&SmoothGridFunction::from_samples(f)?, alpha)?,
    };
    Ok(Outcome { body: csv_of(&d)?, violation: None })
}

#[derive(Serialize)]
struct LevelRow {
    #[serde(with = "sig9")]
    level: f64,
    #[serde(with = "sig9")]
    measure: f64,
}

#[derive(Serialize)]
struct NormsReport {
    #[serde(with = "sig9")]
    p: f64,
    #[serde(with = "sig9")]
    lp_norm: f64,
    #[serde(with = "sig9")]
    weak_quasinorm: f64,
    #[serde(with = "sig9")]
    weak_level: f64,
    #[serde(with = "sig9")]
    weak_measure: f64,
    distribution: Vec<LevelRow>,
}

fn cmd_norms(cfg: &RunConfig) -> CliResult<Outcome> {
    let p = require(&cfg.p, "p")?;
    let levels = cfg.levels.unwrap_or(16);
    if levels == 0 {
        return Err(ConfigError::field("levels", "must be positive"));
    }
    let f = read_input(cfg)?;
    let weak = weak_lp_argmax(&f, p, None)?;
    let top = f.magnitudes().into_iter().fold(0.0, f64::max);
    let distribution = (0..levels)
        .map(|i| {
            let level = top * (i + 1) as f64 / levels as f64;
            Ok(LevelRow { level, measure: distribution_function(&f, level)? })
        })
        .collect::<crate::Result<_>>()?;
    let r = NormsReport {
        p,
        lp_norm: f.lp_norm_on(p, None)?,
        weak_quasinorm: weak.value,
        weak_level: weak.level,
        weak_measure: weak.measure,
        distribution,
    };
    Ok(Outcome { body: json(&r), violation: None })
}

#[derive(Serialize)]
struct VerifyReport {
    kind: VerifyKind,
    checked: usize,
    violations: usize,
    reports: Vec<BoundReport>,
}

fn cmd_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let kind = require(&cfg.verify, "verify")?;
    let p = require(&cfg.p, "p")?;
    let scale = cfg.constant_scale.unwrap_or(1.0);
    let functions: Vec<(Option<u64>, GridFunction)> = if cfg.input_path.is_some() {
        vec![(None, read_input(cfg)?)]
    } else {
        let nodes = mesh_of(cfg)?;
        let dim = cfg.dim.unwrap_or(1);
        if dim == 0 {
            return Err(ConfigError::field("dim", "must be positive"));
        }
        let norm = norm_of(cfg)?;
        seeds_of(cfg, DEFAULT_COUNT)?
            .into_iter()
            .map(|s| Ok((Some(s), random_piecewise_linear(s, &nodes, dim, norm)?)))
            .collect::<crate::Result<_>>()?
    };
    let nodes = functions[0].1.nodes().to_vec();
    let plan = match kind {
        VerifyKind::Embedding => None,
        _ => Some(FracIntegralPlan::new(&nodes, require(&cfg.alpha, "alpha")?)?),
    };
    let q = match (kind, cfg.q) {
        (_, Some(q)) => q,
        (VerifyKind::Strong, None) => {
            let a = require(&cfg.alpha, "alpha")?;
            if p * a >= 1.0 {
                return Err(ConfigError::field("q", "required when alpha >= 1/p"));
            }
            p / (1.0 - p * a)
        }
        (VerifyKind::Embedding, None) => return Err(ConfigError::field("q", "missing required value")),
        _ => p,
    };
    if let (VerifyKind::Strong, Some(plan)) = (kind, &plan) {
        bounds::strong_bound_constant(plan.alpha(), p, q, nodes[nodes.len() - 1] - nodes[0])?;
    }
    let per_function: Vec<Vec<BoundReport>> = functions
        .par_iter()
        .map(|(seed, f)| -> crate::Result<Vec<BoundReport>> {
            let mut out = match (kind, &plan) {
                (VerifyKind::Weak, Some(pl)) => vec![verify_weak_type_with(pl, f, p)?],
                (VerifyKind::Strong, Some(pl)) => vec![verify_strong_type_with(pl, f, p, q)?],
                (VerifyKind::IntoItself, Some(pl)) => vec![verify_into_itself_with(pl, f, p)?],
                _ => {
                    let mut v = vec![chebyshev_check(f, p)?];
                    v.extend(embedding_check(f, p, q, None)?);
                    v
                }
            };
            for r in &mut out {
                if scale != 1.0 {
                    *r = r.rescaled(scale);
                }
                if let Some(s) = seed {
                    *r = r.clone().with_seed(*s);
                }
            }
            Ok(out)
        })
        .collect::<crate::Result<_>>()?;
    let reports: Vec<BoundReport> = per_function.into_iter().flatten().collect();
    let bad: Vec<&BoundReport> = reports.iter().filter(|r| !r.holds).collect();
    let violation = bad.first().map(json);
    let out = VerifyReport { kind, checked: reports.len(), violations: bad.len(), reports: reports.clone() };
    Ok(Outcome { body: json(&out), violation })
}

#[derive(Serialize)]
struct CounterexampleOutput {
    spec: CounterexampleSpec,
    #[serde(with = "sig9")]
    beta: f64,
    #[serde(with = "sig9")]
    membership_norm: f64,
    probe: counterexamples::DivergenceReport,
}

fn cmd_counterexample(cfg: &RunConfig) -> CliResult<Outcome> {
    let case: CaseId = require(&cfg.case_id, "case_id")?
        .parse()
        .map_err(|e: FracError| ConfigError::field("case_id", e.to_string()))?;
    let iv = interval_of(cfg)?;
    let mut spec =
        CounterexampleSpec::new(case, require(&cfg.p, "p")?, require(&cfg.alpha, "alpha")?, require(&cfg.eta, "eta")?)
            .with_interval(iv.start, iv.end);
    spec.beta_eta = cfg.beta;
    if let Some(e) = &cfg.eps_schedule {
        strictly_decreasing(e, "eps_schedule")?;
    }
    let f = counterexamples::make_counterexample(&spec)?;
    let probe = counterexamples::divergence_probe(&f, spec.alpha, spec.eta, cfg.eps_schedule.as_deref())?;
    let violation = (!probe.monotone).then(|| "truncated norms did not increase".to_string());
    let out = CounterexampleOutput {
        beta: spec.beta()?,
        membership_norm: counterexamples::membership_norm(&spec)?,
        spec,
        probe,
    };
    Ok(Outcome { body: json(&out), violation })
}

/// CSV rendering of a probe, written next to the JSON summary.
fn probe_csv(body: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(body).ok()?;
    let probe = v.get("probe")?;
    let col = |k: &str| -> Option<Vec<f64>> { probe.get(k)?.as_array()?.iter().map(|x| x.as_f64()).collect() };
    let (eps, n) = (col("eps")?, col("truncated_norm_power")?);
    let fitted = probe.get("fitted_slope")?.as_f64()?;
    let theory = probe.get("theoretical_exponent")?.as_f64()?;
    let mut out = String::from("eps,truncated_norm_power,log_eps,log_N,fitted_slope,theoretical_exponent\n");
    for (e, v) in eps.iter().zip(&n) {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt9(*e),
            fmt9(*v),
            fmt9(e.ln()),
            fmt9(v.ln()),
            fmt9(fitted),
            fmt9(theory)
        ));
    }
    Some(out)
}

fn cmd_compact(cfg: &RunConfig) -> CliResult<Outcome> {
    let alpha = require(&cfg.alpha, "alpha")?;
    let p = require(&cfg.p, "p")?;
    match require(&cfg.mode, "mode")? {
        CompactMode::Gap => {
            let n = require(&cfg.n, "n")?;
            let m = require(&cfg.m, "m")?;
            let r = compactness::noncompact_gap(n, m, alpha, p, interval_of(cfg)?)?;
            let violation = (r.measured < r.bound * (1.0 - GAP_SLACK)).then(|| json(&r));
            Ok(Outcome { body: json(&r), violation })
        }
        CompactMode::Simon => {
            let q = require(&cfg.q, "q")?;
            let nodes = mesh_of(cfg)?;
            let seeds = match (&cfg.seeds, cfg.members) {
                (Some(_), _) => seeds_of(cfg, DEFAULT_MEMBERS)?,
                (None, m) => seed_list(cfg.seed.unwrap_or(0), m.unwrap_or(DEFAULT_MEMBERS)),
            };
            if seeds.is_empty() {
                return Err(ConfigError::field("members", "must be positive"));
            }
            if let Some(h) = &cfg.h_schedule {
                strictly_decreasing(h, "h_schedule")?;
            }
            let fam = FamilySpec::random(&seeds, &nodes, cfg.dim.unwrap_or(1).max(1), norm_of(cfg)?, p)?;
            let r =
                compactness::simon_diagnostic_with(&fam, alpha, q, cfg.h_schedule.as_deref(), SimonOptions::default())?;
            let violation = (!r.decay_verdict).then(|| "translation modulus failed the decay check".to_string());
            Ok(Outcome { body: json(&r), violation })
        }
    }
}

fn cmd_constants(cfg: &RunConfig) -> CliResult<Outcome> {
    let alphas = cfg.alphas.clone().or(cfg.alpha.map(|a| vec![a]));
    let ps = cfg.ps.clone().or(cfg.p.map(|p| vec![p]));
    let alphas = require(&alphas, "alpha")?;
    let ps = require(&ps, "p")?;
    let mut out = String::from("alpha,p,weak_constant,strong_constant,p1,p2,theta\n");
    for &a in &alphas {
        for &p in &ps {
            let k = weak_type_constant(a, p).unwrap_or(f64::NAN);
            let (c, p1, p2, th) = match strong_type_constant(a, p, bounds::DEFAULT_SEARCH_GRID) {
                Ok((c, ch)) => (c, ch.p1, ch.p2, ch.theta),
                Err(_) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt9(a),
                fmt9(p),
                fmt9(k),
                fmt9(c),
                fmt9(p1),
                fmt9(p2),
                fmt9(th)
            ));
        }
    }
    Ok(Outcome { body: out, violation: None })
}

/// Runs the command named by `cfg.command`.
pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    check_output(cfg)?;
    if cfg.mesh.is_some() || cfg.interval.is_some() {
        mesh_of(cfg)?;
    }
    match require(&cfg.command, "command")?.as_str() {
        "integrate" => cmd_integrate(cfg),
        "derive" => cmd_derive(cfg),
        "norms" => cmd_norms(cfg),
        "verify" => cmd_verify(cfg),
        "counterexample" => cmd_counterexample(cfg),
        "compact" => cmd_compact(cfg),
        "constants" => cmd_constants(cfg),
        other => Err(ConfigError::field("command", format!("unknown command '{other}'"))),
    }
}

fn flags_config(cli: &Cli) -> RunConfig {
    let c = &cli.common;
    let mut cfg =
        RunConfig { seed: c.seed, output_path: c.out.clone(), constant_scale: c.constant_scale, ..Default::default() };
    if c.mesh.is_some() || c.grading.is_some() {
        cfg.mesh = Some(MeshConfig { size: c.mesh, grading: c.grading });
    }
    cfg.interval = match (c.t0, c.t1) {
        (None, None) => None,
        (a, b) => Some([a.unwrap_or(0.0), b.unwrap_or(1.0)]),
    };
    let name = |s: &str| Some(s.to_string());
    match &cli.command {
        Command::Integrate { alpha, input, norm, fft } => {
            cfg.command = name("integrate");
            cfg.alpha = *alpha;
            cfg.input_path = input.clone();
            cfg.norm = norm.clone();
            cfg.fft = fft.then_some(true);
        }
        Command::Derive { alpha, input, kind, norm } => {
            cfg.command = name("derive");
            cfg.alpha = *alpha;
            cfg.input_path = input.clone();
            cfg.derive = *kind;
            cfg.norm = norm.clone();
        }
        Command::Norms { input, p, levels, norm } => {
            cfg.command = name("norms");
            cfg.input_path = input.clone();
            cfg.p = *p;
            cfg.levels = *levels;
            cfg.norm = norm.clone();
        }
        Command::Verify { kind, alpha, p, q, count, dim, norm, input } => {
            cfg.command = name("verify");
            cfg.verify = *kind;
            cfg.alpha = *alpha;
            cfg.p = *p;
            cfg.q = *q;
            cfg.count = *count;
            cfg.dim = *dim;
            cfg.norm = norm.clone();
            cfg.input_path = input.clone();
        }
        Command::Counterexample { case_id, p, alpha, eta, beta, eps } => {
            cfg.command = name("counterexample");
            cfg.case_id = case_id.clone();
            cfg.p = *p;
            cfg.alpha = *alpha;
            cfg.eta = *eta;
            cfg.beta = *beta;
            cfg.eps_schedule = eps.clone();
        }
        Command::Compact { mode, alpha, p, q, n, m, members, dim, h } => {
            cfg.command = name("compact");
            cfg.mode = *mode;
            cfg.alpha = *alpha;
            cfg.p = *p;
            cfg.q = *q;
            cfg.n = *n;
            cfg.m = *m;
            cfg.members = *members;
            cfg.dim = *dim;
            cfg.h_schedule = h.clone();
        }
        Command::Constants { alpha, p } => {
            cfg.command = name("constants");
            cfg.alphas = alpha.clone();
            cfg.ps = p.clone();
        }
        Command::Run => {}
    }
    cfg
}

/// 1-based line of the first occurrence of `"field"` in a JSON text.
fn field_line(text: &str, field: &str) -> Option<usize> {
    let leaf = field.rsplit('.').next().unwrap_or(field);
    let key = format!("\"{leaf}\"");
    text.lines().position(|l| l.contains(&key)).map(|i| i + 1)
}

fn load_config(path: &Path) -> Result<(RunConfig, String), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let cfg = serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
    Ok((cfg, text))
}

/// Parses arguments, runs, writes output, and returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let flags = flags_config(&cli);
    let (file, text) = match &cli.common.config {
        Some(path) => match load_config(path) {
            Ok(v) => v,
            Err(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                return 2;
            }
        },
        None => (RunConfig::default(), String::new()),
    };
    if matches!(cli.command, Command::Run) && cli.common.config.is_none() {
        let _ = writeln!(stderr, "error: `run` needs --config");
        return 2;
    }
    let cfg = flags.overlay(&file);
    match run(&cfg) {
        Err(e) => {
            let loc = match (e.field, field_line(&text, e.field.unwrap_or(""))) {
                (Some(f), Some(line)) => format!(" (field `{f}`, line {line})"),
                (Some(f), None) => format!(" (field `{f}`)"),
                _ => String::new(),
            };
            let _ = writeln!(stderr, "error{loc}: {}", e.message);
            2
        }
        Ok(outcome) => {
            let body = match (&cfg.output_path, cfg.command.as_deref()) {
                (Some(path), Some("counterexample")) => {
                    let csv = probe_csv(&outcome.body).unwrap_or_default();
                    if let Err(e) = fs::write(path, csv) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                    let _ = stdout.write_all(outcome.body.as_bytes());
                    None
                }
                (Some(path), _) => Some((path, &outcome.body)),
                (None, _) => {
                    let _ = stdout.write_all(outcome.body.as_bytes());
                    None
                }
            };
            if let Some((path, text)) = body {
                if let Err(e) = fs::write(path, text) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            match outcome.violation {
                Some(v) => {
                    let _ = writeln!(stderr, "violation:\n{v}");
                    1
                }
                None => 0,
            }
        }
    }
}

/// Entry point of the `fraclab` binary.
pub fn main_entry() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    main_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
