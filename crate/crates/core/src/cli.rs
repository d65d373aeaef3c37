//! Command-line front end: eigenvalue cache, run configuration and reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{prime_pi, primes_up_to};
use crate::error::{Error, Result};
use crate::hecke::{eigen_system, hecke_matrix, required_precision, EigenvalueTable};
use crate::measures::RealInterval;
use crate::qexp::{dim_cusp_forms, miller_basis};
use crate::selberg::{map_interval, selberg_pair, verify_contract, Sign};
use crate::stats::{
    default_m, empirical_s_moment, sandwich, stats_report, theoretical_s_moment,
    variance_report, vertical_distribution, FluctuationSample,
};
use crate::traceformula::trace_unnormalized;

pub const CACHE_MAGIC: &[u8; 6] = b"STCLT\x01";

/// Largest `n (dim + 1)` accepted by `trace-check`.
pub const TRACE_CHECK_LIMIT: u64 = 2_000_000;

/// Eigenvalues of one weight at one prime, in canonical form order.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheRecord {
    pub weight: u32,
    pub prime: u32,
    pub values: Vec<f64>,
    pub residual_max: f64,
}

/// Binary eigenvalue cache: the magic bytes, then records sorted by
/// `(weight, prime)`, each `weight: u32, prime: u32, count: u32`,
/// `count` values and `residual_max`, all little-endian.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenCache {
    records: BTreeMap<(u32, u32), CacheRecord>,
}

impl EigenCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads `path`, or returns an empty cache if it does not exist.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read(path) {
            Ok(bytes) => Self::from_bytes(&bytes),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < CACHE_MAGIC.len() || &bytes[..CACHE_MAGIC.len()] != CACHE_MAGIC {
            return Err(Error::Format("missing STCLT v1 header".into()));
        }
        let mut cur = Cursor {
            bytes,
            pos: CACHE_MAGIC.len(),
        };
        let mut records = BTreeMap::new();
        let mut last: Option<(u32, u32)> = None;
        while cur.pos < bytes.len() {
            let weight = cur.u32()?;
            let prime = cur.u32()?;
            let count = cur.u32()? as usize;
            let values = (0..count).map(|_| cur.f64()).collect::<Result<Vec<_>>>()?;
            let residual_max = cur.f64()?;
            if last.is_some_and(|l| l >= (weight, prime)) {
                return Err(Error::Format(format!(
                    "record ({weight}, {prime}) out of order or duplicated"
                )));
            }
            if let Some(v) = values.iter().find(|v| !(v.abs() <= 2.0 + 1e-6)) {
                return Err(Error::Format(format!(
                    "value {v} for weight {weight}, p = {prime} outside [-2, 2]"
                )));
            }
            last = Some((weight, prime));
            records.insert(
                (weight, prime),
                CacheRecord {
                    weight,
                    prime,
                    values,
                    residual_max,
                },
            );
        }
        Ok(EigenCache { records })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = CACHE_MAGIC.to_vec();
        for r in self.records.values() {
            out.extend(r.weight.to_le_bytes());
            out.extend(r.prime.to_le_bytes());
            out.extend((r.values.len() as u32).to_le_bytes());
            for v in &r.values {
                out.extend(v.to_le_bytes());
            }
            out.extend(r.residual_max.to_le_bytes());
        }
        out
    }

    /// Writes through a temporary file in the target directory and renames it into place.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        tmp.write_all(&self.to_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }

    pub fn contains(&self, weight: u32, prime: u32) -> bool {
        self.records.contains_key(&(weight, prime))
    }

    /// Adds every prime of `table` not already present.
    pub fn insert_table(&mut self, table: &EigenvalueTable) {
        for (i, &p) in table.primes.iter().enumerate() {
            let key = (table.weight, p as u32);
            if self.records.contains_key(&key) {
                continue;
            }
            self.records.insert(
                key,
                CacheRecord {
                    weight: table.weight,
                    prime: p as u32,
                    values: table.values.iter().map(|row| row[i]).collect(),
                    residual_max: table.residuals.iter().map(|row| row[i]).fold(0.0, f64::max),
                },
            );
        }
    }

    /// Table of weight `k` over all primes `<= pmax`, if every one is cached.
    /// Per-form residuals are replaced by the stored per-prime maximum.
    pub fn table(&self, k: u32, pmax: u64) -> Option<EigenvalueTable> {
        let primes = primes_up_to(pmax);
        let recs: Vec<&CacheRecord> = primes
            .iter()
            .map(|&p| self.records.get(&(k, p as u32)))
            .collect::<Option<_>>()?;
        let forms = recs.first().map_or(0, |r| r.values.len());
        if recs.iter().any(|r| r.values.len() != forms) {
            return None;
        }
        Some(EigenvalueTable {
            weight: k,
            primes,
            values: (0..forms).map(|f| recs.iter().map(|r| r.values[f]).collect()).collect(),
            residuals: (0..forms).map(|_| recs.iter().map(|r| r.residual_max).collect()).collect(),
        })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let slice = self
            .bytes
            .get(self.pos..self.pos + N)
            .ok_or_else(|| Error::Format(format!("truncated record at byte {}", self.pos)))?;
        self.pos += N;
        Ok(slice.try_into().expect("slice of length N"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

/// Parameters shared by the subcommands, from a config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub weights: Vec<u32>,
    pub x: f64,
    pub pmax: u64,
    pub intervals: Vec<RealInterval>,
    pub m: Option<usize>,
    pub moment_max: usize,
    pub prime: u64,
    pub cache: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            weights: vec![12],
            x: 10.0,
            pmax: 29,
            intervals: vec![RealInterval { a: -1.0, b: 1.0 }],
            m: None,
            moment_max: 4,
            prime: 2,
            cache: None,
            out_dir: PathBuf::from("."),
            threads: 1,
        }
    }
}

/// `12,24` or `12..60` (even weights) or `500..4000:500`.
pub fn parse_weights(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((lo, rest)) = item.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.trim().parse::<u32>().map_err(|_| bad("weights", item))?),
                None => (rest, 2),
            };
            let lo: u32 = lo.trim().parse().map_err(|_| bad("weights", item))?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad("weights", item))?;
            if step == 0 || lo > hi {
                return Err(bad("weights", item));
            }
            out.extend((lo..=hi).step_by(step as usize));
        } else {
            out.push(item.parse().map_err(|_| bad("weights", item))?);
        }
    }
    if out.is_empty() {
        return Err(bad("weights", s));
    }
    if let Some(k) = out.iter().find(|&&k| k % 2 == 1) {
        return Err(Error::invalid(format!("weight {k} is odd")));
    }
    Ok(out)
}

/// `-1:1, 0:2` as closed intervals inside `[-2, 2]`.
pub fn parse_intervals(s: &str) -> Result<Vec<RealInterval>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (a, b) = item
            .trim_matches(|c| c == '[' || c == ']')
            .split_once(':')
            .ok_or_else(|| bad("intervals", item))?;
        let a: f64 = a.trim().parse().map_err(|_| bad("intervals", item))?;
        let b: f64 = b.trim().parse().map_err(|_| bad("intervals", item))?;
        if !(-2.0 <= a && a <= b && b <= 2.0) {
            return Err(Error::invalid(format!("interval {item} is not inside [-2, 2]")));
        }
        out.push(RealInterval { a, b });
    }
    if out.is_empty() {
        return Err(bad("intervals", s));
    }
    Ok(out)
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(key, t)))
        .collect()
}

fn bad(key: &str, value: &str) -> Error {
    Error::invalid(format!("cannot parse {key} = {value:?}"))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "weights" => self.weights = parse_weights(value)?,
            "x" => self.x = value.parse().map_err(|_| bad(key, value))?,
            "pmax" => self.pmax = value.parse().map_err(|_| bad(key, value))?,
            "intervals" => self.intervals = parse_intervals(value)?,
            "m" | "M" => {
                self.m = match value {
                    "" | "default" => None,
                    v => Some(v.parse().map_err(|_| bad(key, value))?),
                }
            }
            "moment_max" => self.moment_max = value.parse().map_err(|_| bad(key, value))?,
            "prime" | "p" => self.prime = value.parse().map_err(|_| bad(key, value))?,
            "cache" => self.cache = (!value.is_empty()).then(|| PathBuf::from(value)),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "threads" => self.threads = value.parse().map_err(|_| bad(key, value))?,
            _ => return Err(Error::invalid(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x >= 2.0) {
            return Err(Error::invalid(format!("x must be >= 2, got {}", self.x)));
        }
        if self.threads == 0 {
            return Err(Error::invalid("threads must be >= 1"));
        }
        if self.moment_max == 0 {
            return Err(Error::invalid("moment_max must be >= 1"));
        }
        for i in &self.intervals {
            if !(-2.0 <= i.a && i.a <= i.b && i.b <= 2.0) {
                return Err(Error::invalid(format!("interval {i} is not inside [-2, 2]")));
            }
        }
        Ok(())
    }

    /// Degree `M` to use at `x`: the configured one or the default rule.
    pub fn degree(&self) -> Result<usize> {
        match self.m {
            Some(m) => Ok(m),
            None => default_m(self.x),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.weights,
            "x": self.x,
            "pmax": self.pmax,
            "intervals": self.intervals.iter().map(|i| [i.a, i.b]).collect::<Vec<_>>(),
            "M": self.m,
            "moment_max": self.moment_max,
            "prime": self.prime,
            "cache": self.cache.as_ref().map(|p| p.display().to_string()),
            "out_dir": self.out_dir.display().to_string(),
            "threads": self.threads,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "stfluct", version, about = "Hecke eigenvalue families and Sato–Tate fluctuation statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default, Clone)]
pub struct RunArgs {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Weights, e.g. `12,24` or `12..60` or `500..4000:500`.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Largest prime tabulated.
    #[arg(long)]
    pub pmax: Option<u64>,
    /// Intervals of [-2, 2], e.g. `-1:1,0:2`.
    #[arg(long, allow_hyphen_values = true)]
    pub intervals: Option<String>,
    /// Beurling–Selberg degree (default rule needs x >= 16).
    #[arg(long = "degree", short = 'M')]
    pub m: Option<usize>,
    #[arg(long)]
    pub moment_max: Option<usize>,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Eigenvalue cache file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::parse(&fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.weights {
            cfg.weights = parse_weights(v)?;
        }
        if let Some(v) = self.x {
            cfg.x = v;
        }
        if let Some(v) = self.pmax {
            cfg.pmax = v;
        }
        if let Some(v) = &self.intervals {
            cfg.intervals = parse_intervals(v)?;
        }
        if self.m.is_some() {
            cfg.m = self.m;
        }
        if let Some(v) = self.moment_max {
            cfg.moment_max = v;
        }
        if let Some(v) = self.prime {
            cfg.prime = v;
        }
        if self.cache.is_some() {
            cfg.cache = self.cache.clone();
        }
        if let Some(v) = &self.out_dir {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute eigenvalue tables for the configured weights into the cache.
    Compute(RunArgs),
    /// Compare trace-formula traces with Hecke-matrix traces.
    /// CSV columns: k, n, trace_formula, matrix_trace, b1, b2, b3, b4, match.
    TraceCheck {
        /// Weights, e.g. `12..60`.
        #[arg(long, default_value = "12..60")]
        k_range: String,
        /// Indices `lo..hi`.
        #[arg(long, default_value = "1..50")]
        n_range: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check the majorant/minorant contract.
    /// CSV columns: M, a, b, alpha, beta, dominance_plus, dominance_minus, integral_error, coeff_excess, pass.
    BsVerify {
        #[arg(long = "degrees", default_value = "10,100")]
        m_list: String,
        #[arg(long, default_value = "-1:1", allow_hyphen_values = true)]
        intervals: String,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// KS distances of {a_f(p)} from the Plancherel and semicircle laws.
    /// CSV columns: weight, p, sample_size, ks_plancherel, ks_semicircle.
    Vertical(RunArgs),
    /// Fluctuation samples and moment reports.
    /// Sample CSV columns: weight, a, b, form, count, s_plus, s_minus, z.
    /// Summary CSV columns: weight, a, b, x, M, sample_size, mean_count, predicted_mean,
    /// variance_ratio, ks_gaussian, degenerate, moment_1..moment_n.
    Clt(RunArgs),
    /// Trace-formula against eigenvalue moments of S±.
    /// CSV columns: weight, a, b, M, sign, n, theoretical, empirical, abs_diff.
    Moments(RunArgs),
    /// Dump the cache as CSV with columns weight, prime, form, value, residual_max.
    ExportCsv {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

/// Exit codes: 0 pass, 1 invariant failure, 2 usage error, 3 resource guard.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource(_) => 3,
        Error::InvalidArgument(_) | Error::Precondition(_) | Error::Io(_) | Error::Format(_) => 2,
        Error::Precision { .. } | Error::Degeneracy { .. } | Error::Residual { .. } | Error::Consistency(_) => 1,
    }
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Compute(args) => args.resolve().and_then(|c| cmd_compute(&c)),
        Command::TraceCheck {
            k_range,
            n_range,
            out_dir,
        } => cmd_trace_check(&k_range, &n_range, &out_dir),
        Command::BsVerify {
            m_list,
            intervals,
            grid,
            out_dir,
        } => cmd_bs_verify(&m_list, &intervals, grid, &out_dir),
        Command::Vertical(args) => args.resolve().and_then(|c| cmd_vertical(&c)),
        Command::Clt(args) => args.resolve().and_then(|c| cmd_clt(&c)),
        Command::Moments(args) => args.resolve().and_then(|c| cmd_moments(&c)),
        Command::ExportCsv { cache, output } => cmd_export_csv(&cache, &output),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, serde_json::to_string_pretty(value).expect("JSON serialization"))?;
    Ok(())
}

/// Tables for each weight, from the cache when present, computed otherwise
/// (split over `threads` workers). New tables are written back to the cache.
pub fn obtain_tables(cfg: &RunConfig, weights: &[u32], pmax: u64) -> Result<Vec<EigenvalueTable>> {
    let mut cache = match &cfg.cache {
        Some(p) => EigenCache::load(p)?,
        None => EigenCache::new(),
    };
    let mut tables: BTreeMap<u32, EigenvalueTable> = BTreeMap::new();
    let mut missing = Vec::new();
    for &k in weights {
        if dim_cusp_forms(k)? == 0 {
            tables.insert(k, EigenvalueTable::empty(k));
        } else if let Some(t) = cache.table(k, pmax) {
            tables.insert(k, t);
        } else {
            missing.push(k);
        }
    }
    let computed = compute_parallel(&missing, pmax, cfg.threads)?;
    let fresh = !computed.is_empty();
    for t in computed {
        cache.insert_table(&t);
        tables.insert(t.weight, t);
    }
    if let (Some(path), true) = (&cfg.cache, fresh) {
        cache.write_atomic(path)?;
    }
    Ok(weights.iter().map(|k| tables[k].clone()).collect())
}

fn compute_parallel(weights: &[u32], pmax: u64, threads: usize) -> Result<Vec<EigenvalueTable>> {
    if weights.is_empty() {
        return Ok(Vec::new());
    }
    let threads = threads.clamp(1, weights.len());
    let results: Vec<Result<EigenvalueTable>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || {
                    weights
                        .iter()
                        .skip(w)
                        .step_by(threads)
                        .map(|&k| {
                            eigen_system(k, pmax).map_err(|e| match e {
                                Error::Consistency(m) => Error::Consistency(format!("weight {k}: {m}")),
                                other => other,
                            })
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<bool> {
    let path = cfg
        .cache
        .as_ref()
        .ok_or_else(|| Error::invalid("compute needs a cache path"))?;
    for &k in &cfg.weights {
        if dim_cusp_forms(k)? == 0 {
            println!("weight {k}: no cusp forms, nothing to store");
        }
    }
    let tables = obtain_tables(cfg, &cfg.weights, cfg.pmax)?;
    // Make sure the file exists even when every weight was empty or cached.
    if !path.exists() {
        EigenCache::new().write_atomic(path)?;
    }
    for t in tables.iter().filter(|t| t.num_forms() > 0) {
        println!(
            "weight {}: {} forms, {} primes, max residual {:.2e}",
            t.weight,
            t.num_forms(),
            t.primes.len(),
            t.max_residual()
        );
    }
    Ok(true)
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| bad("range", s))?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad("range", s))?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad("range", s))?;
    if lo > hi {
        return Err(bad("range", s));
    }
    Ok((lo, hi))
}

pub fn cmd_trace_check(k_range: &str, n_range: &str, out_dir: &Path) -> Result<bool> {
    let weights = parse_weights(k_range)?;
    let (n_lo, n_hi) = parse_range(n_range)?;
    if n_lo == 0 {
        return Err(Error::invalid("n range must start at 1 or later"));
    }
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &k in &weights {
        let d = dim_cusp_forms(k)?;
        if n_hi.saturating_mul(d as u64 + 1) > TRACE_CHECK_LIMIT {
            return Err(Error::Resource(format!(
                "trace-check at k = {k}, n <= {n_hi} needs {} q-expansion coefficients",
                required_precision(n_hi, d)
            )));
        }
        let basis = miller_basis(k, required_precision(n_hi, d).max(d + 1))?;
        for n in n_lo..=n_hi {
            let tv = trace_unnormalized(k, n)?;
            let formula = tv.integer();
            let matrix = if d == 0 {
                rug::Integer::new()
            } else {
                hecke_matrix(k, n, &basis)?.trace()
            };
            let ok = formula == matrix;
            all_ok &= ok;
            let mut row = vec![k.to_string(), n.to_string(), formula.to_string(), matrix.to_string()];
            row.extend(tv.terms.iter().map(|t| t.to_string()));
            row.push(ok.to_string());
            rows.push(row);
        }
    }
    write_csv(
        &out_dir.join("trace_check.csv"),
        &["k", "n", "trace_formula", "matrix_trace", "b1", "b2", "b3", "b4", "match"],
        &rows,
    )?;
    write_json(
        &out_dir.join("trace_check.json"),
        &json!({
            "k_range": k_range,
            "n_range": n_range,
            "checked": rows.len(),
            "mismatches": rows.iter().filter(|r| r[8] == "false").count(),
            "pass": all_ok,
        }),
    )?;
    println!(
        "trace-check: {} pairs, {}",
        rows.len(),
        if all_ok { "all equal" } else { "MISMATCH" }
    );
    Ok(all_ok)
}

pub fn cmd_bs_verify(m_list: &str, intervals: &str, grid: usize, out_dir: &Path) -> Result<bool> {
    let ms: Vec<usize> = parse_list("degrees", m_list)?;
    let intervals = parse_intervals(intervals)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &m in &ms {
        for i in &intervals {
            let torus = map_interval(i.a, i.b)?;
            let report = verify_contract(&selberg_pair(torus, m)?, grid)?;
            let ok = report.passes(1e-12);
            all_ok &= ok;
            rows.push(vec![
                m.to_string(),
                i.a.to_string(),
                i.b.to_string(),
                torus.alpha.to_string(),
                torus.beta.to_string(),
                report.dominance_plus.to_string(),
                report.dominance_minus.to_string(),
                report.integral_error.to_string(),
                report.coeff_excess.to_string(),
                ok.to_string(),
            ]);
        }
    }
    write_csv(
        &out_dir.join("bs_verify.csv"),
        &[
            "M",
            "a",
            "b",
            "alpha",
            "beta",
            "dominance_plus",
            "dominance_minus",
            "integral_error",
            "coeff_excess",
            "pass",
        ],
        &rows,
    )?;
    write_json(
        &out_dir.join("bs_verify.json"),
        &json!({ "degrees": ms, "grid": grid, "cases": rows.len(), "pass": all_ok }),
    )?;
    println!("bs-verify: {} cases, {}", rows.len(), if all_ok { "pass" } else { "FAIL" });
    Ok(all_ok)
}

pub fn cmd_vertical(cfg: &RunConfig) -> Result<bool> {
    let p = cfg.prime;
    let tables = obtain_tables(cfg, &cfg.weights, cfg.pmax.max(p))?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut all_ok = true;
    let mut prev: Option<f64> = None;
    for t in tables.iter().filter(|t| t.num_forms() > 0) {
        let r = vertical_distribution(t, p)?;
        all_ok &= (0.0..=1.0).contains(&r.ks_plancherel);
        if let Some(q) = prev {
            all_ok &= r.ks_plancherel < q;
        }
        prev = Some(r.ks_plancherel);
        rows.push(vec![
            r.weight.to_string(),
            r.prime.to_string(),
            r.sample_size.to_string(),
            r.ks_plancherel.to_string(),
            r.ks_semicircle.to_string(),
        ]);
        reports.push(json!({
            "weight": r.weight,
            "prime": r.prime,
            "sample_size": r.sample_size,
            "ks_plancherel": r.ks_plancherel,
            "ks_semicircle": r.ks_semicircle,
        }));
    }
    write_csv(
        &cfg.out_dir.join("vertical.csv"),
        &["weight", "p", "sample_size", "ks_plancherel", "ks_semicircle"],
        &rows,
    )?;
    write_json(
        &cfg.out_dir.join("vertical.json"),
        &json!({ "config": cfg.to_json(), "reports": reports, "decreasing": all_ok }),
    )?;
    for r in &rows {
        println!("weight {:>5}  KS(mu_{}) {}  KS(mu_inf) {}", r[0], r[1], r[3], r[4]);
    }
    Ok(all_ok)
}

pub fn cmd_clt(cfg: &RunConfig) -> Result<bool> {
    let m = cfg.degree()?;
    let pmax = cfg.pmax.max(cfg.x.floor() as u64);
    let tables = obtain_tables(cfg, &cfg.weights, pmax)?;
    let mut sample_rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut reports = Vec::new();
    let mut all_ok = true;
    let pi_x = prime_pi(cfg.x) as f64;
    for t in tables.iter().filter(|t| t.num_forms() > 0) {
        for i in &cfg.intervals {
            let pair = selberg_pair(map_interval(i.a, i.b)?, m)?;
            let sample = FluctuationSample::build(t, i, &pair, cfg.x)?;
            let report = stats_report(&sample, cfg.moment_max)?;
            for f in 0..t.num_forms() {
                let s = sandwich(t, f, i, &pair, cfg.x)?;
                if s.violation() > 1e-9 {
                    all_ok = false;
                    eprintln!("sandwich violated: weight {}, {i}, form {f}: {:e}", t.weight, s.violation());
                }
            }
            if report.degenerate {
                println!("notice: {i} has semicircle mass 0 or 1; Z is identically 0");
            }
            for (f, r) in sample.per_form.iter().enumerate() {
                sample_rows.push(vec![
                    t.weight.to_string(),
                    i.a.to_string(),
                    i.b.to_string(),
                    f.to_string(),
                    r.count.to_string(),
                    r.s_plus.to_string(),
                    r.s_minus.to_string(),
                    r.z.to_string(),
                ]);
            }
            let mean_count =
                sample.per_form.iter().map(|r| r.count as f64).sum::<f64>() / sample.per_form.len() as f64;
            let ratio = if t.num_forms() >= 2 {
                variance_report(t, i, cfg.x)?.ratio()
            } else {
                None
            };
            let mut row = vec![
                t.weight.to_string(),
                i.a.to_string(),
                i.b.to_string(),
                cfg.x.to_string(),
                m.to_string(),
                report.sample_size.to_string(),
                mean_count.to_string(),
                (pi_x * sample.mu).to_string(),
                ratio.map_or_else(String::new, |r| r.to_string()),
                report.ks_gaussian.to_string(),
                report.degenerate.to_string(),
            ];
            row.extend(report.moments.iter().skip(1).map(|v| v.to_string()));
            summary_rows.push(row);
            reports.push(json!({
                "weight": t.weight,
                "interval": [i.a, i.b],
                "x": cfg.x,
                "M": m,
                "sample_size": report.sample_size,
                "moments": report.moments,
                "variance": report.variance,
                "gaussian_targets": report.gaussian_targets,
                "ks_gaussian": report.ks_gaussian,
                "mean_count": mean_count,
                "predicted_mean": pi_x * sample.mu,
                "variance_ratio": ratio,
                "degenerate": report.degenerate,
            }));
        }
    }
    write_csv(
        &cfg.out_dir.join("clt_samples.csv"),
        &["weight", "a", "b", "form", "count", "s_plus", "s_minus", "z"],
        &sample_rows,
    )?;
    let mut header: Vec<String> = [
        "weight",
        "a",
        "b",
        "x",
        "M",
        "sample_size",
        "mean_count",
        "predicted_mean",
        "variance_ratio",
        "ks_gaussian",
        "degenerate",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((1..=cfg.moment_max).map(|n| format!("moment_{n}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&cfg.out_dir.join("clt_summary.csv"), &header_refs, &summary_rows)?;
    write_json(
        &cfg.out_dir.join("clt.json"),
        &json!({ "config": cfg.to_json(), "reports": reports, "sandwich_ok": all_ok }),
    )?;
    println!("clt: {} reports, sandwich {}", reports.len(), if all_ok { "ok" } else { "VIOLATED" });
    Ok(all_ok)
}

pub fn cmd_moments(cfg: &RunConfig) -> Result<bool> {
    let m = cfg.degree()?;
    let pmax = cfg.pmax.max(cfg.x.floor() as u64);
    let tables = obtain_tables(cfg, &cfg.weights, pmax)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for t in tables.iter().filter(|t| t.num_forms() > 0) {
        for i in &cfg.intervals {
            let pair = selberg_pair(map_interval(i.a, i.b)?, m)?;
            for sign in [Sign::Plus, Sign::Minus] {
                for n in 1..=cfg.moment_max {
                    let exact = theoretical_s_moment(t.weight, &pair, cfg.x, n, sign)?.to_f64();
                    let emp = empirical_s_moment(t, &pair, cfg.x, n, sign)?;
                    let diff = (exact - emp).abs();
                    all_ok &= diff <= 1e-6;
                    rows.push(vec![
                        t.weight.to_string(),
                        i.a.to_string(),
                        i.b.to_string(),
                        m.to_string(),
                        sign.symbol().to_string(),
                        n.to_string(),
                        exact.to_string(),
                        emp.to_string(),
                        diff.to_string(),
                    ]);
                }
            }
        }
    }
    write_csv(
        &cfg.out_dir.join("moments.csv"),
        &["weight", "a", "b", "M", "sign", "n", "theoretical", "empirical", "abs_diff"],
        &rows,
    )?;
    let worst = rows.iter().map(|r| r[8].parse::<f64>().unwrap_or(f64::NAN)).fold(0.0, f64::max);
    write_json(
        &cfg.out_dir.join("moments.json"),
        &json!({ "config": cfg.to_json(), "rows": rows.len(), "max_abs_diff": worst, "pass": all_ok }),
    )?;
    println!("moments: {} comparisons, max |diff| {worst:.3e}", rows.len());
    Ok(all_ok)
}

pub fn cmd_export_csv(cache: &Path, output: &Path) -> Result<bool> {
    if !cache.exists() {
        return Err(Error::invalid(format!("cache {} does not exist", cache.display())));
    }
    let cache = EigenCache::load(cache)?;
    let mut rows = Vec::new();
    for r in cache.records() {
        for (f, v) in r.values.iter().enumerate() {
            rows.push(vec![
                r.weight.to_string(),
                r.prime.to_string(),
                f.to_string(),
                v.to_string(),
                r.residual_max.to_string(),
            ]);
        }
    }
    write_csv(output, &["weight", "prime", "form", "value", "residual_max"], &rows)?;
    println!("export-csv: {} values from {} records", rows.len(), cache.len());
    Ok(true)
}
