//! Config-driven experiment runner: parses flat TOML run configs,
//! dispatches to the engines, and writes deterministic CSV outputs plus a
//! manifest. Numeric fields print at 12 significant digits by default
//! (override with the KINKCHAIN_PRECISION environment variable), so
//! identical inputs give byte-identical data rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{build_hamiltonian, DenseState, Propagator, DEFAULT_DENSE_LIMIT};
use crate::fermion::FermionPropagator;
use crate::model::{ChargeKind, ChargeSpec, ModelParams, SpinPattern};
use crate::mps::{MpsState, DEFAULT_CHI_MAX, DEFAULT_CUTOFF, DEFAULT_DT};
use crate::twokink::{renyi2_at_cut, TwoKinkAmplitudes, TwoKinkPropagator};

pub const PRECISION_ENV: &str = "KINKCHAIN_PRECISION";
pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Exact,
    Twokink,
    Fermion,
    Mps,
    Compare,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub j0: f64,
    pub g: f64,
    pub h: f64,
    pub j3: f64,
    pub length: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InitialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimesConfig {
    pub t_max: f64,
    pub dt_sample: f64,
}

/// `cuts = "all"`, `cuts = "half"`, or an explicit list of cut positions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutsConfig {
    Named(String),
    List(Vec<usize>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChargeConfig {
    pub kind: String,
    #[serde(default)]
    pub kw_basis: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MpsConfig {
    #[serde(default = "default_chi_max")]
    pub chi_max: usize,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default = "default_dt_trotter")]
    pub dt_trotter: f64,
}

fn default_chi_max() -> usize {
    DEFAULT_CHI_MAX
}
fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF
}
fn default_dt_trotter() -> f64 {
    DEFAULT_DT
}

impl Default for MpsConfig {
    fn default() -> Self {
        Self { chi_max: DEFAULT_CHI_MAX, cutoff: DEFAULT_CUTOFF, dt_trotter: DEFAULT_DT }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CompareConfig {
    /// Max-deviation tolerance; absent means observe-only (report, never fail).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub engine: EngineKind,
    pub output_dir: PathBuf,
    pub params: ParamsConfig,
    pub initial: InitialConfig,
    pub times: TimesConfig,
    pub cuts: CutsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<ChargeConfig>,
    #[serde(default)]
    pub mps: MpsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareConfig>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display()))))?;
        Self::parse(&text)
    }

    /// Full schema and capacity validation; returns the resolved run plan.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let params = ModelParams::new(
            self.params.j0,
            self.params.g,
            self.params.h,
            self.params.j3,
            self.params.length,
        )?;
        let length = params.length;
        let pattern = match (&self.initial.pattern, self.initial.j, self.initial.n) {
            (Some(text), None, None) => {
                let p = SpinPattern::parse(text)?;
                if p.len() != length {
                    return Err(Error::Config(format!(
                        "initial pattern has {} sites, params.length is {length}",
                        p.len()
                    )));
                }
                p
            }
            (None, Some(j), Some(n)) => SpinPattern::domain_wall(length, j, n)?,
            _ => {
                return Err(Error::Config(
                    "initial must be either pattern or both j and n".into(),
                ))
            }
        };
        let times = if self.times.dt_sample <= 0.0 {
            return Err(Error::Config("times.dt_sample must be positive".into()));
        } else if self.times.t_max < 0.0 {
            Vec::new()
        } else {
            let n = (self.times.t_max / self.times.dt_sample + 1e-9).floor() as usize;
            (0..=n).map(|i| i as f64 * self.times.dt_sample).collect()
        };
        let cuts = match &self.cuts {
            CutsConfig::Named(name) if name == "all" => (1..length).collect(),
            CutsConfig::Named(name) if name == "half" => vec![length / 2],
            CutsConfig::Named(other) => {
                return Err(Error::Config(format!(
                    "cuts must be \"all\", \"half\", or a list, got {other:?}"
                )))
            }
            CutsConfig::List(list) => {
                if list.is_empty() || list.iter().any(|&c| c < 1 || c >= length) {
                    return Err(Error::Config(format!(
                        "cuts must be a non-empty list inside 1..{length}"
                    )));
                }
                list.clone()
            }
        };
        let charge = match &self.charge {
            None => None,
            Some(c) => {
                let kind = match c.kind.as_str() {
                    "site_number" => ChargeKind::SiteNumber,
                    "kw_site_number" => ChargeKind::KwSiteNumber,
                    "link_kink" => ChargeKind::LinkKink,
                    other => {
                        return Err(Error::Config(format!(
                            "charge.kind must be site_number, kw_site_number, or link_kink, got {other:?}"
                        )))
                    }
                };
                if !matches!(self.engine, EngineKind::Exact | EngineKind::Mps) {
                    return Err(Error::Config(
                        "charge columns are supported on the exact and mps engines".into(),
                    ));
                }
                let max_range = cuts
                    .iter()
                    .map(|&cut| ChargeSpec::new(kind, cut).map(|q| q.spectral_range()))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .max()
                    .unwrap_or(0) as usize;
                if let Some(k) = c.k {
                    if k <= max_range {
                        return Err(Error::Config(format!(
                            "charge.k = {k} is not above the largest charge spectral range {max_range}"
                        )));
                    }
                }
                Some(ResolvedCharge { kind, kw_basis: c.kw_basis, k: c.k })
            }
        };
        match self.engine {
            EngineKind::Exact | EngineKind::Compare => {
                if length > DEFAULT_DENSE_LIMIT {
                    return Err(Error::Capacity(format!(
                        "dense engine limited to L <= {DEFAULT_DENSE_LIMIT}, got {length}"
                    )));
                }
            }
            EngineKind::Fermion => {
                // Surfaces the regime error at validation time.
                crate::fermion::hopping_matrix(&params)?;
            }
            _ => {}
        }
        let domain = pattern.as_domain();
        if matches!(self.engine, EngineKind::Twokink | EngineKind::Fermion | EngineKind::Compare)
            && domain.is_none()
        {
            return Err(Error::Config(
                "this engine requires an interior single-domain initial state".into(),
            ));
        }
        if self.mps.dt_trotter <= 0.0 || self.mps.cutoff < 0.0 || self.mps.chi_max < 1 {
            return Err(Error::Config("invalid mps settings".into()));
        }
        Ok(ResolvedRun {
            engine: self.engine,
            params,
            pattern,
            domain,
            times,
            cuts,
            charge,
            mps: self.mps.clone(),
            compare_tol: self.compare.as_ref().and_then(|c| c.tol),
            output_dir: self.output_dir.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ResolvedCharge {
    pub kind: ChargeKind,
    pub kw_basis: bool,
    pub k: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub engine: EngineKind,
    pub params: ModelParams,
    pub pattern: SpinPattern,
    pub domain: Option<(usize, usize)>,
    pub times: Vec<f64>,
    pub cuts: Vec<usize>,
    pub charge: Option<ResolvedCharge>,
    pub mps: MpsConfig,
    pub compare_tol: Option<f64>,
    pub output_dir: PathBuf,
}

impl ResolvedCharge {
    fn spec_at(&self, cut: usize) -> Result<ChargeSpec> {
        ChargeSpec::new(self.kind, cut)
    }

    fn lambda_points(&self, cut: usize) -> Result<usize> {
        let range = self.spec_at(cut)?.spectral_range() as usize;
        Ok(self.k.unwrap_or(2 * range + 3).max(range + 1))
    }
}

/// One sampled time slice of engine output.
#[derive(Debug, Clone)]
pub struct SampleData {
    pub time: f64,
    /// (cut, S2, optional (S2_Q, dS2)).
    pub entropy: Vec<(usize, f64, Option<(f64, f64)>)>,
    /// (link, kink density).
    pub kinks: Vec<(usize, f64)>,
    /// (site, sigma_z).
    pub sigma_z: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct EngineStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_bond: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_norm: Option<f64>,
}

fn run_exact(run: &ResolvedRun) -> Result<(Vec<SampleData>, EngineStats)> {
    let prop = Propagator::new(&build_hamiltonian(&run.params)?)?;
    let psi0 = DenseState::from_pattern(&run.pattern);
    let mut samples = Vec::with_capacity(run.times.len());
    for &t in &run.times {
        let psi = prop.evolve(&psi0, t);
        let kw = run.charge.map(|c| c.kw_basis).unwrap_or(false);
        let basis_state = if kw { psi.kw_circuit() } else { psi.clone() };
        let mut entropy = Vec::with_capacity(run.cuts.len());
        for &cut in &run.cuts {
            let rho = basis_state.reduce(cut)?;
            let s2 = rho.renyi2();
            let charge_cols = match &run.charge {
                None => None,
                Some(c) => {
                    let q = c.spec_at(cut)?;
                    let s2q = rho.project_charge(&q)?.renyi2();
                    Some((s2q, s2q - s2))
                }
            };
            entropy.push((cut, s2, charge_cols));
        }
        samples.push(SampleData {
            time: t,
            entropy,
            kinks: (1..run.params.length)
                .map(|l| psi.kink_density(l).map(|d| (l, d)))
                .collect::<Result<_>>()?,
            sigma_z: (1..=run.params.length)
                .map(|s| psi.sigma_z_expectation(s).map(|v| (s, v)))
                .collect::<Result<_>>()?,
        });
    }
    Ok((samples, EngineStats::default()))
}

fn twokink_samples(
    run: &ResolvedRun,
    states: &[TwoKinkAmplitudes],
) -> Result<Vec<SampleData>> {
    run.times
        .iter()
        .zip(states)
        .map(|(&t, state)| {
            Ok(SampleData {
                time: t,
                entropy: run
                    .cuts
                    .iter()
                    .map(|&cut| renyi2_at_cut(state, cut).map(|s2| (cut, s2, None)))
                    .collect::<Result<_>>()?,
                kinks: (1..run.params.length)
                    .map(|l| state.kink_density(l).map(|d| (l, d)))
                    .collect::<Result<_>>()?,
                sigma_z: (1..=run.params.length)
                    .map(|s| state.sigma_z(s).map(|v| (s, v)))
                    .collect::<Result<_>>()?,
            })
        })
        .collect()
}

fn run_twokink(run: &ResolvedRun) -> Result<(Vec<SampleData>, EngineStats)> {
    let (j, n) = run.domain.expect("validated");
    let prop = TwoKinkPropagator::new(&run.params)?;
    let psi0 = TwoKinkAmplitudes::from_domain_wall(run.params.length, j, n)?;
    let states = prop.evolve_many(&psi0, &run.times);
    Ok((twokink_samples(run, &states)?, EngineStats::default()))
}

fn run_fermion(run: &ResolvedRun) -> Result<(Vec<SampleData>, EngineStats)> {
    let (j, n) = run.domain.expect("validated");
    let prop = FermionPropagator::new(&run.params)?;
    let states = run
        .times
        .iter()
        .map(|&t| prop.evolve_domain_wall(j, n, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((twokink_samples(run, &states)?, EngineStats::default()))
}

fn run_mps(run: &ResolvedRun) -> Result<(Vec<SampleData>, EngineStats)> {
    let mut state = MpsState::from_pattern(&run.pattern);
    state.cutoff = run.mps.cutoff;
    state.chi_max = run.mps.chi_max;
    let mut samples = Vec::with_capacity(run.times.len());
    let mut prev_t = 0.0;
    for &t in &run.times {
        let span = t - prev_t;
        if span > 1e-12 {
            let steps = (span / run.mps.dt_trotter).ceil() as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                state.tebd_step(&run.params, dt)?;
            }
        }
        prev_t = t;
        let mut entropy = Vec::with_capacity(run.cuts.len());
        match &run.charge {
            Some(c) if c.kw_basis => {
                let mut kw = state.clone();
                kw.kw_apply()?;
                for &cut in &run.cuts {
                    let s2 = kw.renyi2_at_cut(cut)?;
                    let ds2 = kw.asymmetry_s2(&c.spec_at(cut)?, c.lambda_points(cut)?)?;
                    entropy.push((cut, s2, Some((s2 + ds2, ds2))));
                }
            }
            Some(c) => {
                for &cut in &run.cuts {
                    let s2 = state.renyi2_at_cut(cut)?;
                    let ds2 = state.asymmetry_s2(&c.spec_at(cut)?, c.lambda_points(cut)?)?;
                    entropy.push((cut, s2, Some((s2 + ds2, ds2))));
                }
            }
            None => {
                for &cut in &run.cuts {
                    entropy.push((cut, state.renyi2_at_cut(cut)?, None));
                }
            }
        }
        let kinks = (1..run.params.length)
            .map(|l| state.kink_density(l).map(|d| (l, d)))
            .collect::<Result<_>>()?;
        let sigma_z = (1..=run.params.length)
            .map(|s| state.sigma_z(s).map(|v| (s, v)))
            .collect::<Result<_>>()?;
        samples.push(SampleData { time: t, entropy, kinks, sigma_z });
    }
    let stats = EngineStats {
        truncation_weight: Some(state.truncation_weight),
        max_bond: Some(state.max_bond()),
        final_norm: Some(state.norm()),
    };
    Ok((samples, stats))
}

#[derive(Debug, Clone, Serialize)]
pub struct DeviationRow {
    pub quantity: String,
    pub max_dev: f64,
    pub rms_dev: f64,
}

fn deviation(name: &str, a: &[f64], b: &[f64]) -> DeviationRow {
    let mut max_dev = 0.0f64;
    let mut sq = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = (x - y).abs();
        max_dev = max_dev.max(d);
        sq += d * d;
    }
    let rms = if a.is_empty() { 0.0 } else { (sq / a.len() as f64).sqrt() };
    DeviationRow { quantity: name.into(), max_dev, rms_dev: rms }
}

fn compare_samples(a: &[SampleData], b: &[SampleData]) -> Vec<DeviationRow> {
    let collect = |s: &[SampleData], f: &dyn Fn(&SampleData) -> Vec<f64>| -> Vec<f64> {
        s.iter().flat_map(|x| f(x)).collect()
    };
    let s2 = |s: &SampleData| s.entropy.iter().map(|&(_, v, _)| v).collect::<Vec<_>>();
    let kk = |s: &SampleData| s.kinks.iter().map(|&(_, v)| v).collect::<Vec<_>>();
    let sz = |s: &SampleData| s.sigma_z.iter().map(|&(_, v)| v).collect::<Vec<_>>();
    vec![
        deviation("s2", &collect(a, &s2), &collect(b, &s2)),
        deviation("kink_density", &collect(a, &kk), &collect(b, &kk)),
        deviation("sigma_z", &collect(a, &sz), &collect(b, &sz)),
    ]
}

#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub rows: Vec<DeviationRow>,
    pub tol: Option<f64>,
    pub passed: bool,
}

#[derive(Debug)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub samples: usize,
    pub comparison: Option<ComparisonOutcome>,
}

fn significant(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

fn precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&p| (1..=17).contains(&p))
        .unwrap_or(DEFAULT_PRECISION)
}

fn write_csv(path: &Path, hash: &str, header: &str, rows: &[String]) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "# kinkchain v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# config_sha256 = {hash}");
    let _ = writeln!(out, "{header}");
    for row in rows {
        let _ = writeln!(out, "{row}");
    }
    fs::write(path, out).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display()))))
}

#[derive(Serialize)]
struct RunManifest<'a> {
    version: &'a str,
    config_sha256: String,
    precision: usize,
    wall_clock_s: f64,
    dense_limit: usize,
    stats: &'a EngineStats,
    config: &'a RunConfig,
}

/// Execute a run end to end: dispatch, write CSVs + manifest, and (for the
/// compare engine) evaluate the deviation table against the tolerance.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let resolved = config.resolve()?;
    let digits = precision();
    let (samples, stats, comparison) = match resolved.engine {
        EngineKind::Exact => {
            let (s, st) = run_exact(&resolved)?;
            (s, st, None)
        }
        EngineKind::Twokink => {
            let (s, st) = run_twokink(&resolved)?;
            (s, st, None)
        }
        EngineKind::Fermion => {
            let (s, st) = run_fermion(&resolved)?;
            (s, st, None)
        }
        EngineKind::Mps => {
            let (s, st) = run_mps(&resolved)?;
            (s, st, None)
        }
        EngineKind::Compare => {
            let (exact, st) = run_exact(&resolved)?;
            let (twokink, _) = run_twokink(&resolved)?;
            let rows = compare_samples(&exact, &twokink);
            let tol = resolved.compare_tol;
            let passed = tol.map_or(true, |t| rows.iter().all(|r| r.max_dev < t));
            (exact, st, Some(ComparisonOutcome { rows, tol, passed }))
        }
    };

    fs::create_dir_all(&resolved.output_dir)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot create output dir: {e}"))))?;
    let echo = toml::to_string(config)
        .map_err(|e| Error::Config(format!("config echo serialization failed: {e}")))?;
    let hash = format!("{:x}", Sha256::digest(echo.as_bytes()));

    let with_charge = resolved.charge.is_some() && resolved.engine != EngineKind::Compare;
    let entropy_header =
        if with_charge { "time,cut,s2,s2_q,ds2" } else { "time,cut,s2" };
    let mut entropy_rows = Vec::new();
    let mut kink_rows = Vec::new();
    let mut obs_rows = Vec::new();
    for s in &samples {
        let t = significant(s.time, digits);
        for &(cut, s2, charge_cols) in &s.entropy {
            match charge_cols {
                Some((s2q, ds2)) => entropy_rows.push(format!(
                    "{t},{cut},{},{},{}",
                    significant(s2, digits),
                    significant(s2q, digits),
                    significant(ds2, digits)
                )),
                None => entropy_rows.push(format!("{t},{cut},{}", significant(s2, digits))),
            }
        }
        for &(link, d) in &s.kinks {
            kink_rows.push(format!("{t},{link},{}", significant(d, digits)));
        }
        for &(site, v) in &s.sigma_z {
            obs_rows.push(format!("{t},{site},{}", significant(v, digits)));
        }
    }
    let dir = &resolved.output_dir;
    write_csv(&dir.join("entropy.csv"), &hash, entropy_header, &entropy_rows)?;
    write_csv(&dir.join("kink_density.csv"), &hash, "time,link,delta", &kink_rows)?;
    write_csv(&dir.join("observables.csv"), &hash, "time,site,sigma_z", &obs_rows)?;
    if let Some(cmp) = &comparison {
        let rows: Vec<String> = cmp
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{}",
                    r.quantity,
                    significant(r.max_dev, digits),
                    significant(r.rms_dev, digits)
                )
            })
            .collect();
        write_csv(&dir.join("deviation.csv"), &hash, "quantity,max_dev,rms_dev", &rows)?;
    }

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: hash,
        precision: digits,
        wall_clock_s: started.elapsed().as_secs_f64(),
        dense_limit: DEFAULT_DENSE_LIMIT,
        stats: &stats,
        config,
    };
    let manifest_text = toml::to_string(&manifest)
        .map_err(|e| Error::Config(format!("manifest serialization failed: {e}")))?;
    fs::write(dir.join("manifest.toml"), manifest_text)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot write manifest: {e}"))))?;

    Ok(RunReport { output_dir: dir.clone(), samples: samples.len(), comparison })
}

/// A parsed output CSV: key columns (strings) and numeric value columns.
struct CsvTable {
    columns: Vec<String>,
    keys: Vec<Vec<String>>,
    values: Vec<Vec<f64>>,
    key_width: usize,
}

fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display()))))?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{} has no header", path.display())))?;
    let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
    // First two columns are the grid key (time + position).
    let key_width = 2.min(columns.len());
    let mut keys = Vec::new();
    let mut values = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::Config(format!(
                "{}: row width {} does not match header {}",
                path.display(),
                fields.len(),
                columns.len()
            )));
        }
        keys.push(fields[..key_width].iter().map(|s| s.to_string()).collect());
        values.push(
            fields[key_width..]
                .iter()
                .map(|s| {
                    s.parse::<f64>().map_err(|e| {
                        Error::Config(format!("{}: bad numeric field {s:?}: {e}", path.display()))
                    })
                })
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(CsvTable { columns, keys, values, key_width })
}

/// Compare the standard output CSVs of two run directories column by
/// column. Grids must align exactly; returns one deviation row per value
/// column per file.
pub fn compare_dirs(dir_a: &Path, dir_b: &Path) -> Result<Vec<DeviationRow>> {
    let mut rows = Vec::new();
    for name in ["entropy.csv", "kink_density.csv", "observables.csv"] {
        let (pa, pb) = (dir_a.join(name), dir_b.join(name));
        if !pa.exists() && !pb.exists() {
            continue;
        }
        let a = read_csv(&pa)?;
        let b = read_csv(&pb)?;
        if a.keys != b.keys {
            return Err(Error::Config(format!(
                "{name}: misaligned grids between {} and {}",
                dir_a.display(),
                dir_b.display()
            )));
        }
        let shared = a.columns.len().min(b.columns.len());
        for col in a.key_width..shared {
            if a.columns[col] != b.columns[col] {
                return Err(Error::Config(format!(
                    "{name}: column {} is {:?} vs {:?}",
                    col, a.columns[col], b.columns[col]
                )));
            }
            let xa: Vec<f64> = a.values.iter().map(|r| r[col - a.key_width]).collect();
            let xb: Vec<f64> = b.values.iter().map(|r| r[col - b.key_width]).collect();
            rows.push(deviation(&format!("{name}:{}", a.columns[col]), &xa, &xb));
        }
    }
    if rows.is_empty() {
        return Err(Error::Config("no comparable CSV files found".into()));
    }
    Ok(rows)
}

pub fn write_deviation_summary(path: &Path, rows: &[DeviationRow]) -> Result<()> {
    let digits = precision();
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{}",
                r.quantity,
                significant(r.max_dev, digits),
                significant(r.rms_dev, digits)
            )
        })
        .collect();
    write_csv(path, "-", "quantity,max_dev,rms_dev", &body)
}
