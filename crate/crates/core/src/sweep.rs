//! Parameter sweeps with an on-disk per-point cache and deterministic CSV/JSON output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::potential::QuarticPotential;
use crate::report::{analyze, AnalysisOptions, StateReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "DWELL_CACHE_DIR";

pub const CSV_COLUMNS: [&str; 31] = [
    "alpha", "beta", "gamma", "n", "energy", "mean_x", "delta_x", "delta_p", "uncertainty_product",
    "p_well_I", "p_well_II", "occupancy", "total_nodes", "effective_nodes", "s_x", "s_p", "s_total",
    "i_x", "i_p", "i_product", "e_x", "e_p", "e_product", "os_x", "os_p", "os_total", "barrier_action",
    "allowed_action", "lobe_count", "converged_flag", "error",
];

/// One output row: a state of one parameter point, or the error that prevented it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub n: usize,
    #[serde(flatten)]
    pub state: Option<StateReport>,
    pub error: Option<String>,
}

/// Fixed 17-significant-digit formatting.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV text: a `# schema=N` line, the header, then one line per record.
pub fn to_csv(records: &[ResultRecord]) -> String {
    let mut out = format!("# schema={SCHEMA_VERSION}\n{}\n", CSV_COLUMNS.join(","));
    for r in records {
        let mut row = vec![fmt_f64(r.alpha), fmt_f64(r.beta), fmt_f64(r.gamma), r.n.to_string()];
        match &r.state {
            Some(s) => {
                row.extend([s.energy, s.mean_x, s.delta_x, s.delta_p, s.uncertainty_product, s.p_well_i, s.p_well_ii]
                    .map(fmt_f64));
                row.push(s.occupancy.label().to_string());
                row.push(s.total_nodes.to_string());
                row.push(s.effective_nodes.to_string());
                row.extend(
                    [
                        s.s_x, s.s_p, s.s_total, s.i_x, s.i_p, s.i_product, s.e_x, s.e_p, s.e_product, s.os_x,
                        s.os_p, s.os_total, s.barrier_action, s.allowed_action,
                    ]
                    .map(fmt_f64),
                );
                row.push(s.lobe_count.to_string());
                row.push(s.converged_flag.to_string());
            }
            None => row.extend(std::iter::repeat(String::new()).take(CSV_COLUMNS.len() - 5)),
        }
        row.push(csv_escape(r.error.as_deref().unwrap_or("")));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    schema: u32,
    records: &'a [ResultRecord],
}

pub fn to_json(records: &[ResultRecord]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&JsonDocument { schema: SCHEMA_VERSION, records })?;
    s.push('\n');
    Ok(s)
}

/// Records for one parameter point.
pub fn solve_point(alpha: f64, beta: f64, gamma: f64, pot: &QuarticPotential, opts: &AnalysisOptions) -> Vec<ResultRecord> {
    match analyze(pot, opts) {
        Ok(states) => states
            .into_iter()
            .enumerate()
            .map(|(n, s)| ResultRecord { alpha, beta, gamma, n, state: Some(s), error: None })
            .collect(),
        Err(e) => (0..opts.n_states)
            .map(|n| ResultRecord { alpha, beta, gamma, n, state: None, error: Some(e.to_string()) })
            .collect(),
    }
}

/// Directory of cached per-point results.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize)]
struct CacheKey<'a> {
    schema: u32,
    coefficients: [String; 5],
    options: &'a AnalysisOptions,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// `DWELL_CACHE_DIR` if set, otherwise `fallback`.
    pub fn from_env(fallback: impl Into<PathBuf>) -> Result<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::new(PathBuf::from(d)),
            _ => Self::new(fallback),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// 16 hex digits of a SHA-256 over the exact coefficient bits and the analysis options.
    pub fn key(pot: &QuarticPotential, opts: &AnalysisOptions) -> String {
        let coefficients = pot.coefficients().map(|c| format!("{:016x}", c.to_bits()));
        let key = CacheKey { schema: SCHEMA_VERSION, coefficients, options: opts };
        let digest = Sha256::digest(serde_json::to_vec(&key).expect("serializable key"));
        hex16(&digest)
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Cached records, or `None` when absent, unreadable or failing the checksum.
    pub fn load(&self, key: &str) -> Option<Vec<ResultRecord>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let (body, tail) = text.rsplit_once("\nsha256 ")?;
        let digest = Sha256::digest(body.as_bytes());
        if tail.trim_end() != hex_full(&digest) {
            return None;
        }
        serde_json::from_str(body).ok()
    }

    pub fn store(&self, key: &str, records: &[ResultRecord]) -> Result<()> {
        let body = serde_json::to_string(records)?;
        let digest = Sha256::digest(body.as_bytes());
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            write!(f, "{body}\nsha256 {}\n", hex_full(&digest))?;
        }
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }
}

fn hex_full(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn hex16(bytes: &[u8]) -> String {
    hex_full(&bytes[..8])
}

/// Cartesian sweep over `betas × gammas` at fixed `alpha`.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub alpha: f64,
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub analysis: AnalysisOptions,
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
    pub cache: Option<Cache>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub records: Vec<ResultRecord>,
    pub cache_hits: usize,
    pub computed: usize,
    pub failed_points: usize,
}

impl SweepOutcome {
    pub fn points(&self) -> usize {
        self.cache_hits + self.computed
    }
}

/// Runs every point on a bounded pool; rows come back in input order.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    if config.betas.is_empty() || config.gammas.is_empty() {
        return Err(Error::Config("sweep ranges must be non-empty".into()));
    }
    let points: Vec<(f64, f64)> =
        config.betas.iter().flat_map(|&b| config.gammas.iter().map(move |&g| (b, g))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let results: Vec<(Vec<ResultRecord>, bool)> = pool.install(|| {
        points
            .par_iter()
            .map(|&(beta, gamma)| -> Result<(Vec<ResultRecord>, bool)> {
                let pot = QuarticPotential::double_well(config.alpha, beta, gamma)?;
                let key = Cache::key(&pot, &config.analysis);
                if let Some(hit) = config.cache.as_ref().and_then(|c| c.load(&key)) {
                    return Ok((hit, true));
                }
                let records = solve_point(config.alpha, beta, gamma, &pot, &config.analysis);
                if let Some(c) = &config.cache {
                    c.store(&key, &records)?;
                }
                Ok((records, false))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let cache_hits = results.iter().filter(|r| r.1).count();
    let failed_points = results.iter().filter(|r| r.0.iter().any(|x| x.error.is_some())).count();
    Ok(SweepOutcome {
        computed: results.len() - cache_hits,
        cache_hits,
        failed_points,
        records: results.into_iter().flat_map(|r| r.0).collect(),
    })
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a comma list.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::Config(format!("bad range '{spec}': {m}"));
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(bad("empty"));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|e| bad(&e.to_string())))
            .collect::<Result<_>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(bad("step must be positive"));
        }
        if stop < start {
            return Err(bad("empty range"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // integer multiples keep grid values reproducible
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        spec.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| bad(&e.to_string()))).collect()
    }
}
