use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use entk::dynamics::{evolve_with, fit_exponential, uniform_times, EvolveOptions, LindbladModel, Observable, WindowPolicy};
use entk::families::FamilyId;
use entk::io::{AnyState, StateFile};
use entk::pure::{ProjectorMix, SignPattern, DEFAULT_WEIGHT};
use entk::rng::SplitMix64;
use entk::roof::{
    algebraic_lower_bounds, build_correlation_tensor, compute_bounds, optimized_lower_bound, quasi_pure_approximation,
    spectral_t, BoundConfig, FamilyChoice, LowerBoundOptions,
};
use entk::state::{is_ppt, schmidt_decompose};

use crate::error::{CliError, CliResult};
use crate::named::{channel, load_state};
use crate::output::{csv, emit, json, json_compact, num, opt_num, Header};
use crate::{Cli, Command, Global};

/// Largest qubit count run without `--allow-large`.
const DEFAULT_MAX_QUBITS: usize = 5;
/// Hilbert-space cap with `--allow-large` (seven qubits).
const LARGE_DIM_CAP: usize = 128;

#[derive(Debug, Args, Serialize)]
pub struct SchmidtArgs {
    /// State file or name.
    pub state: String,
    /// Number of leading factors on the left of the cut.
    #[arg(long, default_value_t = 1)]
    pub split: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum TFamily {
    Spectral,
    Antisymmetric,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    pub state: String,
    /// `default`, or comma-separated sign patterns with optional weights,
    /// e.g. `--mix=--` or `--mix=++--=2,----` (default weight 4).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "default")]
    pub mix: Vec<String>,
    /// Also compute the gradient upper bound.
    #[arg(long)]
    pub upper: bool,
    #[arg(long, value_enum, default_value_t = TFamily::Spectral)]
    pub family: TFamily,
}

#[derive(Debug, Args, Serialize)]
pub struct DynamicsArgs {
    /// Initial state (file or name), qubits only.
    #[arg(long)]
    pub state: String,
    /// zero:Γ, thermal:Γ:n̄, infinite:Γ or dephasing:Γ, on every qubit.
    #[arg(long)]
    pub channel: String,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    /// Number of recorded times, 0 and tmax included.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// auto, wootters, qp, optimized or none.
    #[arg(long, default_value = "auto")]
    pub observable: String,
    /// Permit six or seven qubits (dense 4^N Liouvillian).
    #[arg(long, env = "ENTK_ALLOW_LARGE")]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum Window {
    /// From the first sample below 95 % of the initial value until the curve settles.
    Decay,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// CSV with a `t` column, as written by `dynamics`.
    pub file: PathBuf,
    #[arg(long, default_value = "value")]
    pub column: String,
    #[arg(long, value_enum, default_value_t = Window::Decay)]
    pub window: Window,
    /// Restrict the fit to t ≥ FROM (overrides --window).
    #[arg(long)]
    pub from: Option<f64>,
    /// Restrict the fit to t ≤ TO (overrides --window).
    #[arg(long)]
    pub to: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// State name.
    pub state: String,
    /// Family parameter when the name carries none.
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct PptScanArgs {
    /// hor33, hor24 or horror (alias hor3x3beta).
    pub family: String,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 51)]
    pub points: usize,
}

/// Hashed configuration: everything except the output destination.
#[derive(Serialize)]
struct Config<'a> {
    seed: u64,
    restarts: usize,
    tol: f64,
    command: &'a Command,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    let config = Config { seed: g.seed, restarts: g.restarts, tol: g.tol, command: &cli.command };
    let header = Header::new(g.seed, &config);
    let text = match &cli.command {
        Command::Schmidt(a) => schmidt(a, &header)?,
        Command::Bounds(a) => bounds(a, g, &header)?,
        Command::Dynamics(a) => dynamics(a, &header)?,
        Command::Fit(a) => fit(a, &header)?,
        Command::Gen(a) => gen(a, &header)?,
        Command::PptScan(a) => ppt_scan(a, g, &header)?,
    };
    emit(&text, g.output.as_deref())
}

fn lower_options(g: &Global) -> LowerBoundOptions {
    LowerBoundOptions { restarts: g.restarts, tol: g.tol, ..LowerBoundOptions::default() }
}

fn schmidt(a: &SchmidtArgs, header: &Header) -> CliResult<String> {
    let AnyState::Pure(psi) = load_state(&a.state, None)? else {
        return Err(CliError::Validation("Schmidt decomposition needs a pure state (\"vector\")".into()));
    };
    let left: Vec<usize> = (0..a.split).collect();
    let sd = schmidt_decompose(&psi, &left)?;
    let rows = sd.coefficients.iter().enumerate().map(|(i, &l)| vec![i.to_string(), num(l)]);
    Ok(csv(header, &["index", "lambda"], rows))
}

fn parse_mix(specs: &[String], n: usize) -> CliResult<ProjectorMix> {
    if specs.len() == 1 && specs[0] == "default" {
        return Ok(ProjectorMix::default_for(n)?);
    }
    let weights = specs
        .iter()
        .map(|s| {
            let (pattern, weight) = match s.split_once('=') {
                Some((p, w)) => (p, w.parse().map_err(|_| CliError::Parse(format!("bad weight in {s:?}")))?),
                None => (s.as_str(), DEFAULT_WEIGHT),
            };
            let pattern: SignPattern = pattern.parse().map_err(|e: entk::Error| CliError::Parse(e.to_string()))?;
            Ok((pattern, weight))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ProjectorMix::new(n, weights)?)
}

fn bounds(a: &BoundsArgs, g: &Global, header: &Header) -> CliResult<String> {
    let rho = load_state(&a.state, None)?.to_density();
    let mix = parse_mix(&a.mix, rho.factors().len())?;
    let cfg = BoundConfig {
        lower: lower_options(g),
        compute_upper: a.upper,
        family: match a.family {
            TFamily::Spectral => FamilyChoice::Spectral,
            TFamily::Antisymmetric => FamilyChoice::AntisymmetricBasis,
        },
        seed: g.seed,
        ..BoundConfig::default()
    };
    let report = compute_bounds(&rho, &mix, &cfg)?;
    Ok(json(header, &report))
}

fn dynamics(a: &DynamicsArgs, header: &Header) -> CliResult<String> {
    let rho = load_state(&a.state, None)?.to_density();
    let ch = channel(&a.channel)?;
    let observable: Observable = a.observable.parse().map_err(|e: entk::Error| CliError::Parse(e.to_string()))?;
    if !(a.tmax > 0.0) || a.points < 2 {
        return Err(CliError::Validation("need --tmax > 0 and --points ≥ 2".into()));
    }
    let n = rho.factors().len();
    let mut model = LindbladModel::new(rho.factors().clone(), ch)?;
    if n > DEFAULT_MAX_QUBITS {
        if !a.allow_large {
            return Err(CliError::Validation(format!(
                "{n} qubits exceeds the default limit of {DEFAULT_MAX_QUBITS}; pass --allow-large to run it"
            )));
        }
        log::warn!("{n} qubits: dense {0}×{0} Liouvillian, expect long run time and large memory use", 1usize << (2 * n));
        model = model.with_dim_cap(LARGE_DIM_CAP);
    }
    let times = uniform_times(a.tmax, a.points);
    let tr = evolve_with(&rho, &model, &times, &EvolveOptions { observable, ..EvolveOptions::default() })?;
    let value = tr.observable("concurrence");
    let (entropy, lmax) = (&tr.observables["entropy"], &tr.observables["lambda_max"]);
    let rows = (0..times.len()).map(|i| {
        vec![num(times[i]), opt_num(value.map(|v| v[i])), num(entropy[i]), num(lmax[i])]
    });
    Ok(csv(header, &["t", "value", "entropy", "lambda_max"], rows))
}

fn read_series(path: &PathBuf, column: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let shown = path.display();
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Parse(format!("cannot read {shown}: {e}")))?;
    let heads = rd.headers().map_err(|e| CliError::Parse(format!("{shown}: {e}")))?.clone();
    let find = |name: &str| {
        heads.iter().position(|h| h.trim() == name).ok_or_else(|| CliError::Parse(format!("{shown} has no column {name:?}")))
    };
    let (ti, vi) = (find("t")?, find(column)?);
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse(format!("{shown}: {e}")))?;
        let cell = |i: usize| -> CliResult<f64> {
            let s = rec.get(i).unwrap_or("").trim();
            s.parse().map_err(|_| CliError::Parse(format!("{shown}: record {}: cannot read {s:?} as a number", line + 1)))
        };
        t.push(cell(ti)?);
        v.push(cell(vi)?);
    }
    Ok((t, v))
}

fn fit(a: &FitArgs, header: &Header) -> CliResult<String> {
    let (t, v) = read_series(&a.file, &a.column)?;
    let policy = match (a.from, a.to, a.window) {
        (None, None, Window::Decay) => WindowPolicy::Decay,
        (None, None, Window::All) => WindowPolicy::All,
        (from, to, _) => WindowPolicy::Between(from.unwrap_or(f64::NEG_INFINITY), to.unwrap_or(f64::INFINITY)),
    };
    let f = fit_exponential(&t, &v, policy)?;
    Ok(json(header, &f))
}

fn gen(a: &GenArgs, header: &Header) -> CliResult<String> {
    let file = match crate::named::named_state(&a.state, a.a)? {
        AnyState::Pure(p) => StateFile::from_pure(&p),
        AnyState::Mixed(m) => StateFile::from_density(&m),
    };
    Ok(json_compact(header, &file))
}

struct ScanRow {
    a: f64,
    min_pt: f64,
    best_algebraic: Option<f64>,
    optimized: f64,
    quasi_pure: Option<f64>,
}

fn scan_point(id: FamilyId, a: f64, opts: &LowerBoundOptions, seed: u64) -> entk::Result<ScanRow> {
    let rho = id.build(a)?;
    let (_, min_pt) = is_ppt(&rho);
    let tensor = build_correlation_tensor(&rho, &ProjectorMix::bipartite())?;
    let family = spectral_t(&tensor)?;
    let (best_algebraic, optimized) = if family.is_empty() {
        (None, 0.0)
    } else {
        let best = algebraic_lower_bounds(&family)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
        (Some(best), optimized_lower_bound(&family, opts, seed)?.value)
    };
    Ok(ScanRow { a, min_pt, best_algebraic, optimized, quasi_pure: quasi_pure_approximation(&tensor).ok() })
}

fn ppt_scan(s: &PptScanArgs, g: &Global, header: &Header) -> CliResult<String> {
    let id: FamilyId = s.family.parse().map_err(|e: entk::Error| CliError::Parse(e.to_string()))?;
    let (lo, hi) = id.domain();
    let (from, to) = (s.from.unwrap_or(lo), s.to.unwrap_or(hi));
    if s.points < 2 || !(from <= to) {
        return Err(CliError::Validation("need --points ≥ 2 and --from ≤ --to".into()));
    }
    let opts = lower_options(g);
    let root = SplitMix64::new(g.seed);
    let step = (to - from) / (s.points - 1) as f64;
    let rows = (0..s.points)
        .into_par_iter()
        .map(|i| {
            let a = if i + 1 == s.points { to } else { from + step * i as f64 };
            scan_point(id, a, &opts, root.split(i as u64).next_u64())
        })
        .collect::<entk::Result<Vec<_>>>()?;
    let rows = rows.into_iter().map(|r| {
        vec![num(r.a), num(r.min_pt), opt_num(r.best_algebraic), num(r.optimized), opt_num(r.quasi_pure)]
    });
    Ok(csv(header, &["a", "min_pt_eigenvalue", "best_algebraic", "optimized", "quasi_pure"], rows))
}
