//! Command-line front end: `solve`, `sweep`, `validate-rules`, `table`, `phase-space`.
//!
//! Every flag may also come from a `key=value` config file given with
//! `--config`; flags on the command line win. Exit codes: 0 success, 2 bad
//! configuration, 3 solver failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::observables::{occupancy_from_density, Occupancy};
use crate::phase_space::area;
use crate::potential::{critical_points, QuarticPotential};
use crate::report::{analyze, AnalysisOptions};
use crate::rules::{
    estimate_delta_gamma, predict_effective_nodes, predict_occupancy, validate_rules, AsymmetryIndex,
    DeltaGammaConfig, DeltaGammaEstimate, RuleOptions, RuleReport,
};
use crate::spectrum::{solve, DEFAULT_DEGENERACY_TOL};
use crate::sweep::{fmt_f64, parse_range, run_sweep, to_csv, to_json, Cache, ResultRecord, SweepConfig};
use crate::wavefunction::{count_nodes, position_states, state_grid, GridFunction, DEFAULT_POINTS, DEFAULT_RHO_FLOOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dwell", version, about = "Spectra and information measures of quartic double wells")]
pub struct Cli {
    /// key=value file supplying defaults for any flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one potential and report every state
    Solve(SolveArgs),
    /// Cartesian sweep over beta and gamma with on-disk caching
    Sweep(SweepArgs),
    /// Estimate Δγ and compare the pairing and localization rules with computed spectra
    ValidateRules(RulesArgs),
    /// Regenerate one of the reference tables (1-5)
    Table(TableArgs),
    /// Turning-point lobes and action integrals per state
    PhaseSpace(PhaseArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug, Default)]
pub struct PotentialArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Constant offset; without it the global minimum is placed at zero
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    /// Raw coefficients c4,c3,c2,c1,c0 (overrides alpha/beta/gamma)
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Number of states to report
    #[arg(long)]
    pub states: Option<usize>,
    /// Oscillator basis size
    #[arg(long)]
    pub basis: Option<usize>,
    /// Grid points for wavefunction integrals
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Output file (standard output if absent)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// start:stop:step or comma list
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// start:stop:step or comma list
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Recompute every point and leave the cache untouched
    #[arg(long)]
    pub no_cache: bool,
    /// Cache directory (default: $DWELL_CACHE_DIR, else .dwell-cache)
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RulesArgs {
    /// Comma list of quartic strengths
    #[arg(long)]
    pub alpha: Option<String>,
    /// Comma list or range of barrier parameters
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub states: Option<usize>,
    /// Relative tolerance for detecting a quasi-degenerate pair
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Use this Δγ instead of estimating it
    #[arg(long)]
    pub delta_gamma: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Table number
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub number: u8,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub states: Option<usize>,
    /// Emit sampled lobe contours instead of the per-state summary
    #[arg(long)]
    pub contours: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Parsed `key=value` config file; `-` and `_` in keys are interchangeable.
#[derive(Debug, Default)]
pub struct ConfigFile(BTreeMap<String, String>);

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key=value", i + 1)))?;
            map.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `flag` if given, else the parsed config value for `key`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Config(format!("config key {key}: {e}"))),
            None => Ok(None),
        }
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

/// Maps a library error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::NonConfining(_)
        | Error::InvalidBasis(_)
        | Error::InvalidGrid(_)
        | Error::BasisTooSmall { .. } => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(a, &cfg),
        Command::Sweep(a) => cmd_sweep(a, &cfg),
        Command::ValidateRules(a) => cmd_validate_rules(a, &cfg),
        Command::Table(a) => cmd_table(a),
        Command::PhaseSpace(a) => cmd_phase_space(a, &cfg),
    }
}

fn emit(output: Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Potential from flags/config: `poly` wins, else alpha/beta/gamma with either
/// an explicit `v0` or the global minimum placed at zero.
fn potential(args: &PotentialArgs, cfg: &ConfigFile) -> Result<(QuarticPotential, [f64; 3])> {
    if let Some(poly) = cfg.pick(args.poly.clone(), "poly")? {
        let c = parse_range(&poly)?;
        if c.len() != 5 {
            return Err(Error::Config(format!("--poly needs 5 coefficients, got {}", c.len())));
        }
        let pot = QuarticPotential::new(c[0], c[1], c[2], c[3], c[4])?;
        return Ok((pot, [pot.alpha(), pot.beta(), pot.gamma()]));
    }
    let alpha = cfg.pick(args.alpha, "alpha")?.unwrap_or(1.0);
    let beta = cfg.pick(args.beta, "beta")?.ok_or_else(|| Error::Config("--beta is required".into()))?;
    let gamma = cfg.pick(args.gamma, "gamma")?.unwrap_or(0.0);
    let pot = match cfg.pick(args.v0, "v0")? {
        Some(v0) => QuarticPotential::from_params(alpha, beta, gamma, v0)?,
        None => QuarticPotential::double_well(alpha, beta, gamma)?,
    };
    Ok((pot, [alpha, beta, gamma]))
}

fn analysis(common: &CommonArgs, cfg: &ConfigFile) -> Result<(AnalysisOptions, Format)> {
    let d = AnalysisOptions::default();
    let opts = AnalysisOptions {
        n_basis: cfg.pick(common.basis, "basis")?.unwrap_or(d.n_basis),
        n_states: cfg.pick(common.states, "states")?.unwrap_or(d.n_states),
        grid_points: cfg.pick(common.points, "points")?.unwrap_or(DEFAULT_POINTS),
        rho_floor: cfg.pick(None, "rho_floor")?.unwrap_or(DEFAULT_RHO_FLOOR),
    };
    if opts.n_states == 0 || opts.n_basis < 4 {
        return Err(Error::Config("need at least one state and four basis functions".into()));
    }
    if opts.n_states > opts.n_basis / 3 {
        return Err(Error::Config(format!(
            "{} states exceed the certified third of a {}-function basis",
            opts.n_states, opts.n_basis
        )));
    }
    let format = cfg.pick(common.format, "format")?.unwrap_or(Format::Csv);
    Ok((opts, format))
}

fn render(records: &[ResultRecord], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => to_csv(records),
        Format::Json => to_json(records)?,
    })
}

fn cmd_solve(args: SolveArgs, cfg: &ConfigFile) -> Result<i32> {
    let (pot, [alpha, beta, gamma]) = potential(&args.potential, cfg)?;
    let (opts, format) = analysis(&args.common, cfg)?;
    let records: Vec<ResultRecord> = analyze(&pot, &opts)?
        .into_iter()
        .enumerate()
        .map(|(n, s)| ResultRecord { alpha, beta, gamma, n, state: Some(s), error: None })
        .collect();
    emit(cfg.pick(args.common.output, "output")?, &render(&records, format)?)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(args: SweepArgs, cfg: &ConfigFile) -> Result<i32> {
    let alpha = cfg.pick(args.alpha, "alpha")?.unwrap_or(1.0);
    let betas = parse_range(&cfg.pick(args.beta, "beta")?.ok_or_else(|| Error::Config("--beta is required".into()))?)?;
    let gammas =
        parse_range(&cfg.pick(args.gamma, "gamma")?.ok_or_else(|| Error::Config("--gamma is required".into()))?)?;
    let (analysis, format) = analysis(&args.common, cfg)?;
    let cache = if cfg.flag(args.no_cache, "no_cache")? {
        None
    } else {
        Some(match cfg.pick(args.cache_dir, "cache_dir")? {
            Some(d) => Cache::new(d)?,
            None => Cache::from_env(".dwell-cache")?,
        })
    };
    let config = SweepConfig {
        alpha,
        betas,
        gammas,
        analysis,
        workers: cfg.pick(args.workers, "workers")?.unwrap_or(0),
        cache,
    };
    let outcome = run_sweep(&config)?;
    emit(cfg.pick(args.common.output, "output")?, &render(&outcome.records, format)?)?;
    eprintln!(
        "{} points: {} cached, {} computed, {} failed",
        outcome.points(),
        outcome.cache_hits,
        outcome.computed,
        outcome.failed_points
    );
    if outcome.failed_points == outcome.points() {
        return Ok(EXIT_SOLVER);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RulesDocument {
    delta_gamma: Vec<DeltaGammaEstimate>,
    reports: Vec<RulesSummary>,
}

#[derive(Serialize)]
struct RulesSummary {
    occupancy_agreement: (usize, usize),
    pair_agreement: (usize, usize),
    below_threshold_gammas: Vec<f64>,
    report: RuleReport,
}

fn cmd_validate_rules(args: RulesArgs, cfg: &ConfigFile) -> Result<i32> {
    let alphas = parse_range(&cfg.pick(args.alpha, "alpha")?.unwrap_or_else(|| "0.5,1,2".into()))?;
    let betas = parse_range(&cfg.pick(args.beta, "beta")?.unwrap_or_else(|| "20".into()))?;
    let gammas = parse_range(&cfg.pick(args.gamma, "gamma")?.unwrap_or_else(|| "1,3,5,7".into()))?;
    let n_states = cfg.pick(args.states, "states")?.unwrap_or(6);
    let fixed = cfg.pick(args.delta_gamma, "delta_gamma")?;
    let opts = RuleOptions {
        rel_tol: cfg.pick(args.rel_tol, "rel_tol")?.unwrap_or(DEFAULT_DEGENERACY_TOL),
        ..RuleOptions::default()
    };
    if n_states < 2 || n_states > opts.n_basis / 3 {
        return Err(Error::Config(format!("--states must lie in 2..={}", opts.n_basis / 3)));
    }

    let mut doc = RulesDocument { delta_gamma: Vec::new(), reports: Vec::new() };
    for &alpha in &alphas {
        let dg = match fixed {
            Some(d) => d,
            None => {
                let est = estimate_delta_gamma(alpha, &DeltaGammaConfig::default())?;
                eprintln!("alpha {alpha}: Δγ = {:.4} ± {:.4}", est.delta_gamma, est.uncertainty);
                let d = est.delta_gamma;
                doc.delta_gamma.push(est);
                d
            }
        };
        for &beta in &betas {
            let report = validate_rules(alpha, beta, &gammas, dg, n_states, &opts)?;
            let below = report.points.iter().filter(|p| !p.above_threshold).map(|p| p.gamma).collect();
            doc.reports.push(RulesSummary {
                occupancy_agreement: report.occupancy_score(),
                pair_agreement: report.pair_score(),
                below_threshold_gammas: below,
                report,
            });
        }
    }
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    emit(cfg.pick(args.output, "output")?, &text)?;
    Ok(EXIT_OK)
}

fn cmd_phase_space(args: PhaseArgs, cfg: &ConfigFile) -> Result<i32> {
    let (pot, _) = potential(&args.potential, cfg)?;
    let n_states = cfg.pick(args.states, "states")?.unwrap_or(4);
    let spec = solve(&pot, 100, n_states)?;
    let mut out = String::new();
    if cfg.flag(args.contours, "contours")? {
        out.push_str("n,lobe,x,p\n");
        for n in 0..n_states {
            for (j, lobe) in area(&pot, spec.energy(n)).lobes.iter().enumerate() {
                for (x, p) in lobe.x.iter().zip(&lobe.p) {
                    let _ = writeln!(out, "{n},{j},{},{}", fmt_f64(*x), fmt_f64(*p));
                }
            }
        }
    } else {
        out.push_str("n,energy,lobe_count,barrier_action,allowed_action\n");
        for n in 0..n_states {
            let r = area(&pot, spec.energy(n));
            let _ = writeln!(
                out,
                "{n},{},{},{},{}",
                fmt_f64(r.energy),
                r.lobe_count,
                fmt_f64(r.barrier_action),
                fmt_f64(r.allowed_action)
            );
        }
    }
    emit(cfg.pick(args.output, "output")?, &out)?;
    Ok(EXIT_OK)
}

fn cmd_table(args: TableArgs) -> Result<i32> {
    let text = match args.number {
        1 => table_one()?,
        2 => table_two()?,
        3 => table_three()?,
        4 => table_four()?,
        _ => table_five()?,
    };
    emit(args.output, &text)?;
    Ok(EXIT_OK)
}

/// Benchmark potential with a cubic term.
pub fn benchmark_potential() -> QuarticPotential {
    QuarticPotential::new(0.01, -0.0075, -0.0025, 0.0, 0.0).expect("confining")
}

fn table_one() -> Result<String> {
    let mut out = String::from("N,E0,E1,E2,E3\n");
    for n in [25, 50, 75, 100] {
        let spec = solve(&benchmark_potential(), n, 4)?;
        let row: Vec<String> = (0..4).map(|j| fmt_f64(spec.energy(j))).collect();
        let _ = writeln!(out, "{n},{}", row.join(","));
    }
    Ok(out)
}

fn table_two() -> Result<String> {
    let betas = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
    let mut out = String::from("pair,gamma,beta=5,beta=10,beta=15,beta=20,beta=25,beta=30\n");
    for j in 1..=4usize {
        let gamma = 2.0 * j as f64;
        let mut row = vec![format!("{}-{}", j, j + 1), fmt_f64(gamma)];
        for &beta in &betas {
            let spec = solve(&QuarticPotential::double_well(1.0, beta, gamma)?, 100, j + 2)?;
            row.push(fmt_f64((spec.energy(j + 1) - spec.energy(j)).abs()));
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

fn energy_columns(sets: &[(f64, f64, f64)], n_states: usize) -> Result<String> {
    let mut out = String::from("n");
    let mut columns = Vec::new();
    for &(a, b, g) in sets {
        let _ = write!(out, ",alpha={a} beta={b} gamma={g}");
        columns.push(solve(&QuarticPotential::double_well(a, b, g)?, 100, n_states)?);
    }
    out.push('\n');
    for n in 0..n_states {
        let row: Vec<String> = columns.iter().map(|s| fmt_f64(s.energy(n))).collect();
        let _ = writeln!(out, "{n},{}", row.join(","));
    }
    Ok(out)
}

fn table_three() -> Result<String> {
    let sets: Vec<_> = [0.0, 2.0, 4.0, 6.0, 8.0].iter().map(|&g| (1.0, 30.0, g)).collect();
    energy_columns(&sets, 11)
}

fn table_four() -> Result<String> {
    energy_columns(&[(1.0, 11.0, 2.0), (1.0, 15.0, 8.0), (1.0, 12.0, 6.0), (1.0, 14.0, 10.0), (1.0, 20.0, 12.0)], 8)
}

/// Measured and predicted well and effective-node count for the lowest six
/// states at `beta = 20`, one `gamma` inside each of the first four k-intervals.
fn table_five() -> Result<String> {
    let mut out = String::from("n");
    let gammas = [1.0, 3.0, 5.0, 7.0];
    let mut cols = Vec::new();
    for &g in &gammas {
        let _ = write!(out, ",gamma={g} well,gamma={g} nodes,gamma={g} predicted well,gamma={g} predicted nodes");
        cols.push(table_five_column(g)?);
    }
    out.push('\n');
    for n in 0..6 {
        let cells: Vec<String> = cols
            .iter()
            .map(|c: &Vec<(Occupancy, usize, Occupancy, usize)>| {
                let (w, k, pw, pk) = c[n];
                format!("{w},{k},{pw},{pk}")
            })
            .collect();
        let _ = writeln!(out, "{n},{}", cells.join(","));
    }
    Ok(out)
}

fn table_five_column(gamma: f64) -> Result<Vec<(Occupancy, usize, Occupancy, usize)>> {
    let pot = QuarticPotential::double_well(1.0, 20.0, gamma)?;
    let spec = solve(&pot, 100, 6)?;
    let grid = state_grid(&spec, 5, DEFAULT_POINTS)?;
    let geometry = critical_points(&pot);
    let k = AsymmetryIndex::new(gamma, 2.0);
    let states: Vec<usize> = (0..6).collect();
    let psi = position_states(&spec, &states, &grid.coords())?;
    Ok(psi
        .into_iter()
        .enumerate()
        .map(|(n, (values, derivative))| {
            let f = GridFunction { x0: grid.x0, dx: grid.dx, values, derivative: Some(derivative) };
            let occ = occupancy_from_density(&f.density(), &grid, &geometry).classification;
            let nodes = count_nodes(&f, &pot, spec.energy(n), DEFAULT_RHO_FLOOR).effective;
            (occ, nodes, predict_occupancy(&k, n), predict_effective_nodes(&k, n))
        })
        .collect())
}
