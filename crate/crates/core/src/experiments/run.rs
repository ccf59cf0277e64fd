use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::canonical::{canonical_json, format_float};
use super::config::{parse_power, PowerSpec};
use super::{Command, Format, Params, RunConfig, RunError, SampleSource};
use crate::dynamics::{
    kingman_doubling_average, orbit_string, wrap01, BmCocycle, CircleZoo, ExponentEstimate,
    MapSystem, PowerMap, ShiftPoint, Word, ZooMap,
};
use crate::pipeline::{
    choose_power, estimate_expansion_constants, find_repellers_planned, jittered_orbit,
    verify_abnormal, AbnormalVerdict, ExpansionFit, RepellerOptions, RepellerSearchReport,
};
use crate::sampling::halton;
use crate::shadowing::{
    close_periodic, shadow_finite, CircleMap, PseudoOrbitChain, ShadowResult, ShadowingConfig,
};
use crate::strings::{pliss_sift, RealString, SiftResult};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Periodicity tolerance for `verify-abnormal`.
const TOL_PER: f64 = 1e-9;

/// The envelope every run writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: Command,
    /// Resolved parameters, defaults included.
    pub config: Params,
    pub library_version: String,
    /// Effective map name (`name^κ` when a power is applied).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power: Option<usize>,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiftOutput {
    pub length: usize,
    pub sift: SiftResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowOutput {
    pub blocks: usize,
    pub max_gap: f64,
    pub total_length: usize,
    pub shadow: ShadowResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOutput {
    pub period: usize,
    pub abnormal: bool,
    pub verdict: AbnormalVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionOutput {
    pub fit: ExpansionFit,
    /// Periods of the repellers used as the sample, if any.
    pub periods: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KingmanOutput {
    pub levels: Vec<ExponentEstimate>,
}

/// A finished run in both output formats.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub json: String,
    pub csv: String,
    /// One human-readable line.
    pub summary: String,
}

impl RunOutput {
    /// Writes the chosen format to `path`, or to stdout when `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<(), RunError> {
        let text = match format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        };
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
                }
                std::fs::write(p, text).map_err(|e| io_error(p, e))
            }
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| RunError::Io {
                    path: "<stdout>".into(),
                    msg: e.to_string(),
                }),
        }
    }
}

fn io_error(p: &Path, e: std::io::Error) -> RunError {
    RunError::Io {
        path: p.display().to_string(),
        msg: e.to_string(),
    }
}

/// Caps the rayon pool at `SIFTSHADOW_THREADS` when that variable is set.
pub fn configure_threads() -> Result<(), RunError> {
    let Ok(v) = std::env::var("SIFTSHADOW_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| RunError::Config(format!("SIFTSHADOW_THREADS must be a positive integer, got `{v}`")))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Reads a report and checks its `result` against the command's schema.
pub fn read_report(path: &Path) -> Result<Report, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| RunError::Schema(format!("{}: {e}", path.display())))?;
    let r = report.result.clone();
    let checked = match report.command {
        Command::Sift => serde_json::from_value::<SiftOutput>(r).map(drop),
        Command::Shadow | Command::Close => serde_json::from_value::<ShadowOutput>(r).map(drop),
        Command::Repellers => serde_json::from_value::<RepellerSearchReport>(r).map(drop),
        Command::VerifyAbnormal => serde_json::from_value::<VerifyOutput>(r).map(drop),
        Command::ExpansionFit => serde_json::from_value::<ExpansionOutput>(r).map(drop),
        Command::Kingman => serde_json::from_value::<KingmanOutput>(r).map(drop),
    };
    checked.map_err(|e| RunError::Schema(format!("{}: result: {e}", path.display())))?;
    Ok(report)
}

enum System {
    Circle(PowerMap<CircleZoo>),
    Cocycle(PowerMap<BmCocycle>),
}

/// Per-step rates scale with `κ` on `f^κ`.
struct Scaled {
    kappa: usize,
}

impl Scaled {
    fn rate(&self, v: Option<f64>) -> f64 {
        v.unwrap_or(0.0) * self.kappa as f64
    }
}

/// Runs one experiment. Deterministic for a fixed configuration.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let p = &cfg.params;
    let seed = p.seed.unwrap_or(0);
    if cfg.command == Command::Sift && p.values.is_some() {
        return finish(cfg, None, None, explicit_sift(p)?);
    }
    let map = ZooMap::from_str(p.map.as_deref().unwrap_or("doubling"))?;
    let spec = parse_power(p.power.as_deref().unwrap_or("1"))?;
    let kappa = match spec {
        PowerSpec::Fixed(k) => k,
        PowerSpec::Auto => auto_power(&map, p, seed)?,
    };
    let sys = match map {
        ZooMap::Circle(m) => System::Circle(PowerMap::new(m, kappa)),
        ZooMap::Cocycle(c) => System::Cocycle(PowerMap::new(c, kappa)),
    };
    let name = match &sys {
        System::Circle(s) => s.name(),
        System::Cocycle(s) => s.name(),
    };
    let k = Scaled { kappa };
    let out = match (&sys, cfg.command) {
        (System::Circle(s), Command::Sift) => {
            let orbit = jittered_orbit(s, p.x.unwrap_or(0.0), p.horizon.unwrap_or(1), seed)?;
            orbit_sift(orbit.increments(), &k, p)?
        }
        (System::Cocycle(s), Command::Sift) => {
            let h = p.horizon.unwrap_or(1);
            let x = random_word_point(seed, h * kappa + 1)?;
            let orbit = orbit_string(s, &x, h)?;
            orbit_sift(orbit.increments(), &k, p)?
        }
        (System::Circle(s), Command::Shadow) => shadow(s, &k, p, seed)?,
        (System::Circle(s), Command::Close) => close(s, &k, p)?,
        (System::Circle(s), Command::Repellers) => {
            let report = repellers(s, &k, p)?;
            let n = report.repellers.len();
            let periods: Vec<String> = report
                .repellers
                .iter()
                .map(|r| r.shadow.period.unwrap_or(0).to_string())
                .collect();
            let mut csv = Table::new(&["period", "point", "indicator", "shadow_distance", "hausdorff"]);
            for r in &report.repellers {
                csv.row(vec![
                    r.shadow.period.unwrap_or(0).to_string(),
                    format_float(r.shadow.point),
                    format_float(r.indicator),
                    format_float(r.shadow.shadow_distance),
                    format_float(r.hausdorff),
                ]);
            }
            Produced {
                result: to_value(&report)?,
                csv: csv.finish()?,
                summary: format!("found {n} repellers, periods [{}]", periods.join(",")),
            }
        }
        (System::Circle(s), Command::VerifyAbnormal) => {
            let tau = p.tau.unwrap_or(1);
            let v = verify_abnormal(
                s,
                &wrap01(p.x.unwrap_or(0.0)),
                tau,
                k.rate(p.gamma_prime),
                k.rate(p.gamma_double_prime),
                TOL_PER,
            )?;
            verify_output(tau, v)?
        }
        (System::Cocycle(s), Command::VerifyAbnormal) => {
            let bits: Vec<u8> = p.word.as_deref().unwrap_or("0").bytes().map(|b| b - b'0').collect();
            let len = bits.len();
            let tau = p.tau.unwrap_or(len / gcd(len, kappa));
            let x = ShiftPoint::periodic(bits)?;
            let v = verify_abnormal(s, &x, tau, k.rate(p.gamma_prime), k.rate(p.gamma_double_prime), TOL_PER)?;
            verify_output(tau, v)?
        }
        (System::Circle(s), Command::ExpansionFit) => {
            let (points, periods) = match p.sample.unwrap_or_default() {
                SampleSource::Halton => ((0..p.samples.unwrap_or(1) as u64).map(|i| halton(i, 2)).collect(), vec![]),
                SampleSource::Orbit => {
                    let o = jittered_orbit(s, p.x.unwrap_or(0.0), p.horizon.unwrap_or(1), seed)?;
                    (o.points().to_vec(), vec![])
                }
                SampleSource::Repellers => {
                    let report = repellers(s, &k, p)?;
                    let pts = report.repellers.iter().flat_map(|r| r.shadow.orbit.iter().copied()).collect();
                    let periods = report.repellers.iter().map(|r| r.shadow.period.unwrap_or(0)).collect();
                    (pts, periods)
                }
            };
            if points.is_empty() {
                return Err(RunError::Solver("the repeller search found no sample points".into()));
            }
            expansion_output(estimate_expansion_constants(s, &points, p.k_max.unwrap_or(2))?, periods)?
        }
        (System::Cocycle(s), Command::ExpansionFit) => {
            let k_max = p.k_max.unwrap_or(2);
            let points = match p.sample.unwrap_or_default() {
                SampleSource::Halton => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..p.samples.unwrap_or(1))
                        .map(|_| random_word(&mut rng, k_max * kappa + 1))
                        .collect::<Result<Vec<_>, _>>()?
                }
                SampleSource::Orbit => {
                    let h = p.horizon.unwrap_or(1);
                    let x = random_word_point(seed, (h + k_max) * kappa + 1)?;
                    let mut pts = vec![x];
                    for i in 0..h {
                        let next = s.eval(&pts[i]);
                        pts.push(next);
                    }
                    pts
                }
                SampleSource::Repellers => {
                    return Err(RunError::Config("repeller samples need a circle map".into()));
                }
            };
            expansion_output(estimate_expansion_constants(s, &points, k_max)?, vec![])?
        }
        (System::Circle(s), Command::Kingman) => {
            let x = wrap01(p.x.unwrap_or(0.0));
            kingman_output(kingman_doubling_average(s, &x, p.t1.unwrap_or(1), p.levels.unwrap_or(1), p.blocks.unwrap_or(1))?)?
        }
        (System::Cocycle(s), Command::Kingman) => {
            let (t1, levels, blocks) = (p.t1.unwrap_or(1), p.levels.unwrap_or(1), p.blocks.unwrap_or(1));
            let window = blocks * t1 * (1 << (levels - 1)) * kappa;
            let x = random_word_point(seed, window + 1)?;
            kingman_output(kingman_doubling_average(s, &x, t1, levels, blocks)?)?
        }
        (System::Cocycle(_), c) => {
            return Err(RunError::Config(format!(
                "`{}` needs a circle map; bm_cocycle supports sift, verify-abnormal, expansion-fit and kingman",
                c.as_str()
            )))
        }
    };
    finish(cfg, Some(name), Some(kappa), out)
}

struct Produced {
    result: Value,
    csv: String,
    summary: String,
}

fn finish(cfg: &RunConfig, map: Option<String>, power: Option<usize>, out: Produced) -> Result<RunOutput, RunError> {
    let report = Report {
        command: cfg.command,
        config: cfg.params.clone(),
        library_version: LIBRARY_VERSION.to_string(),
        map,
        power,
        result: out.result,
    };
    let json = canonical_json(&to_value(&report)?);
    Ok(RunOutput {
        report,
        json,
        csv: out.csv,
        summary: out.summary,
    })
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, RunError> {
    serde_json::to_value(v).map_err(|e| RunError::Solver(e.to_string()))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Result<ShiftPoint, RunError> {
    let prefix: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
    Ok(ShiftPoint::new(Word::new(prefix, vec![0])?, 0))
}

/// A random driving word whose first `len` symbols are seeded coin flips.
fn random_word_point(seed: u64, len: usize) -> Result<ShiftPoint, RunError> {
    random_word(&mut ChaCha8Rng::seed_from_u64(seed), len)
}

fn auto_power(map: &ZooMap, p: &Params, seed: u64) -> Result<usize, RunError> {
    let gamma = p.gamma.unwrap_or(0.6);
    let (t1, levels, blocks) = (p.t1.unwrap_or(1), p.levels.unwrap_or(8), p.blocks.unwrap_or(16));
    let chosen = match map {
        ZooMap::Circle(m) => choose_power(m, &wrap01(p.x.unwrap_or(0.0)), gamma, t1, levels, blocks)?,
        ZooMap::Cocycle(c) => {
            let x = random_word_point(seed, blocks * t1 * (1 << (levels - 1)) + 1)?;
            choose_power(c, &x, gamma, t1, levels, blocks)?
        }
    };
    chosen.ok_or_else(|| {
        RunError::Solver(format!("no doubling level up to {levels} has an average above gamma = {gamma}"))
    })
}

/// Minimal CSV builder over the `csv` crate.
struct Table {
    w: csv::Writer<Vec<u8>>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            w: csv::Writer::from_writer(Vec::new()),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }

    fn finish(mut self) -> Result<String, RunError> {
        let err = |e: csv::Error| RunError::Solver(e.to_string());
        self.w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            self.w.write_record(r).map_err(err)?;
        }
        let bytes = self.w.into_inner().map_err(|e| RunError::Solver(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| RunError::Solver(e.to_string()))
    }
}

fn explicit_sift(p: &Params) -> Result<Produced, RunError> {
    let values = p.values.clone().unwrap_or_default();
    let s = RealString::new(values, p.h.unwrap_or(1.0))?;
    sift_output(pliss_sift(&s, p.gamma.unwrap_or(0.0), p.gamma_prime.unwrap_or(0.0))?)
}

fn orbit_sift(inc: &[f64], k: &Scaled, p: &Params) -> Result<Produced, RunError> {
    let (g, gp) = (k.rate(p.gamma), k.rate(p.gamma_prime));
    let bound = inc.iter().fold(g, |m, a| m.max(a.abs()));
    let s = RealString::new(inc.to_vec(), bound)?;
    sift_output(pliss_sift(&s, g, gp)?)
}

fn sift_output(sift: SiftResult) -> Result<Produced, RunError> {
    let mut csv = Table::new(&["index"]);
    for i in &sift.indices {
        csv.row(vec![i.to_string()]);
    }
    let shown: Vec<String> = sift.indices.iter().take(32).map(|i| i.to_string()).collect();
    let more = if sift.indices.len() > 32 { ",..." } else { "" };
    let summary = format!("indices: {}{more} ({} of {})", shown.join(","), sift.indices.len(), sift.m);
    Ok(Produced {
        result: to_value(&SiftOutput {
            length: sift.m,
            sift,
        })?,
        csv: csv.finish()?,
        summary,
    })
}

fn shadow_row(csv: &mut Table, r: &ShadowResult) {
    csv.row(vec![
        r.period.map_or(String::new(), |t| t.to_string()),
        format_float(r.point),
        format_float(r.shadow_distance),
        format_float(r.suffix_min_average),
    ]);
}

fn shadow_output(chain: &PseudoOrbitChain, r: ShadowResult) -> Result<Produced, RunError> {
    let mut csv = Table::new(&["period", "point", "shadow_distance", "suffix_min_average"]);
    shadow_row(&mut csv, &r);
    let summary = format!(
        "point {} shadows within {:.3e}{}",
        format_float(r.point),
        r.shadow_distance,
        r.period.map_or(String::new(), |t| format!(", period {t}"))
    );
    Ok(Produced {
        result: to_value(&ShadowOutput {
            blocks: chain.strings().len(),
            max_gap: chain.max_gap(),
            total_length: chain.total_length(),
            shadow: r,
        })?,
        csv: csv.finish()?,
        summary,
    })
}

fn shadow<S: CircleMap>(sys: &S, k: &Scaled, p: &Params, seed: u64) -> Result<Produced, RunError> {
    let (start, horizon) = (p.start.unwrap_or(0), p.horizon.unwrap_or(1));
    let tau = p.tau.unwrap_or(horizon).min(horizon);
    let noise = p.noise.unwrap_or(0.0);
    let orbit = jittered_orbit(sys, p.x.unwrap_or(0.0), start + horizon, seed)?;
    // a separate stream so that noise does not shift the orbit jitter
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut strings = Vec::new();
    let mut at = 0;
    while at < horizon {
        let len = tau.min(horizon - at);
        let eta = if noise > 0.0 { rng.random_range(-noise..=noise) } else { 0.0 };
        let base = wrap01(orbit.points()[start + at] + eta);
        strings.push(orbit_string(sys, &base, len)?);
        at += len;
    }
    let chain = PseudoOrbitChain::new(sys, strings, false)?;
    let cfg = ShadowingConfig::plan(sys, k.rate(p.lambda), p.epsilon.unwrap_or(0.01))?;
    let r = shadow_finite(sys, &chain, &cfg)?;
    shadow_output(&chain, r)
}

fn close<S: CircleMap>(sys: &S, k: &Scaled, p: &Params) -> Result<Produced, RunError> {
    let (start, tau) = (p.start.unwrap_or(0), p.tau.unwrap_or(1));
    let orbit = orbit_string(sys, &wrap01(p.x.unwrap_or(0.0)), start + tau)?;
    let chain = PseudoOrbitChain::cyclic_single(sys, orbit.segment(start, tau)?)?;
    let cfg = ShadowingConfig::plan(sys, k.rate(p.lambda), p.epsilon.unwrap_or(0.01))?;
    let r = close_periodic(sys, &chain, &cfg)?;
    shadow_output(&chain, r)
}

fn repellers<S: CircleMap>(sys: &S, k: &Scaled, p: &Params) -> Result<RepellerSearchReport, RunError> {
    let opts = RepellerOptions {
        max_repellers: p.max_repellers.unwrap_or(8),
        tau_min: p.tau_min.unwrap_or(3),
        seed: p.seed.unwrap_or(0),
        ..RepellerOptions::default()
    };
    Ok(find_repellers_planned(
        sys,
        p.x.unwrap_or(0.0),
        p.horizon.unwrap_or(1),
        (k.rate(p.gamma), k.rate(p.gamma_prime), k.rate(p.gamma_double_prime)),
        k.rate(p.lambda),
        p.epsilon.unwrap_or(0.05),
        &opts,
    )?)
}

fn verify_output(period: usize, v: AbnormalVerdict) -> Result<Produced, RunError> {
    let mut csv = Table::new(&["period", "mean", "min_suffix", "mean_below", "suffixes_above"]);
    csv.row(vec![
        period.to_string(),
        format_float(v.mean),
        format_float(v.min_suffix),
        v.mean_below.to_string(),
        v.suffixes_above.to_string(),
    ]);
    Ok(Produced {
        result: to_value(&VerifyOutput {
            period,
            abnormal: v.is_abnormal(),
            verdict: v,
        })?,
        csv: csv.finish()?,
        summary: format!(
            "mean_below={} suffixes_above={} (mean {}, min suffix {})",
            v.mean_below,
            v.suffixes_above,
            format_float(v.mean),
            format_float(v.min_suffix)
        ),
    })
}

fn expansion_output(fit: ExpansionFit, periods: Vec<usize>) -> Result<Produced, RunError> {
    let mut csv = Table::new(&["c", "lambda", "k_max", "samples", "expanding"]);
    csv.row(vec![
        format_float(fit.c),
        format_float(fit.lambda),
        fit.k_max.to_string(),
        fit.samples.to_string(),
        fit.is_expanding().to_string(),
    ]);
    let mut summary = format!("C={} lambda={}", format_float(fit.c), format_float(fit.lambda));
    if let Some(d) = &fit.diagnostic {
        summary.push_str(&format!(" ({d})"));
    }
    Ok(Produced {
        result: to_value(&ExpansionOutput { fit, periods })?,
        csv: csv.finish()?,
        summary,
    })
}

fn kingman_output(levels: Vec<ExponentEstimate>) -> Result<Produced, RunError> {
    let mut csv = Table::new(&["level", "horizon", "value"]);
    for (i, e) in levels.iter().enumerate() {
        csv.row(vec![i.to_string(), e.horizon.to_string(), format_float(e.value)]);
    }
    let values: Vec<String> = levels.iter().map(|e| format!("{:.6}", e.value)).collect();
    Ok(Produced {
        result: to_value(&KingmanOutput { levels })?,
        csv: csv.finish()?,
        summary: format!("level averages: {}", values.join(" ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, p: Params) -> RunConfig {
        RunConfig::new(command, p).unwrap()
    }

    #[test]
    fn explicit_sift_prints_expected_indices() {
        let out = run(&cfg(
            Command::Sift,
            Params {
                values: Some(vec![1.0, -1.0, 1.0, 1.0]),
                h: Some(1.0),
                gamma: Some(0.5),
                gamma_prime: Some(0.25),
                ..Params::default()
            },
        ))
        .unwrap();
        assert!(out.summary.starts_with("indices: 1,4 "));
        assert_eq!(out.csv, "index\n1\n4\n");
    }

    #[test]
    fn doubling_expansion_fit() {
        let out = run(&cfg(
            Command::ExpansionFit,
            Params {
                k_max: Some(20),
                ..Params::default()
            },
        ))
        .unwrap();
        let fit: ExpansionOutput = serde_json::from_value(out.report.result).unwrap();
        assert!((fit.fit.lambda - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((fit.fit.c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cocycle_rejects_circle_only_commands() {
        let e = run(&cfg(
            Command::Close,
            Params {
                map: Some("bm_cocycle(2,2)".into()),
                x: Some(0.1),
                tau: Some(3),
                ..Params::default()
            },
        ))
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn cocycle_verify_uses_word_length() {
        let out = run(&cfg(
            Command::VerifyAbnormal,
            Params {
                map: Some("bm_cocycle(2,2)".into()),
                word: Some("0".into()),
                gamma_prime: Some(0.1),
                gamma_double_prime: Some(0.8),
                ..Params::default()
            },
        ))
        .unwrap();
        let v: VerifyOutput = serde_json::from_value(out.report.result).unwrap();
        assert_eq!(v.period, 1);
        // a single 2·[[1,−1],[0,1]] has co-norm 2/φ²·… below 2
        assert!(v.verdict.mean < std::f64::consts::LN_2);
    }

    #[test]
    fn close_recovers_one_seventh() {
        let out = run(&cfg(
            Command::Close,
            Params {
                x: Some(0.1428),
                tau: Some(3),
                ..Params::default()
            },
        ))
        .unwrap();
        let s: ShadowOutput = serde_json::from_value(out.report.result).unwrap();
        assert!((s.shadow.point - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(s.shadow.period, Some(3));
    }

    #[test]
    fn noisy_shadow_runs() {
        let out = run(&cfg(
            Command::Shadow,
            Params {
                horizon: Some(60),
                tau: Some(10),
                noise: Some(1e-7),
                seed: Some(5),
                ..Params::default()
            },
        ))
        .unwrap();
        let s: ShadowOutput = serde_json::from_value(out.report.result).unwrap();
        assert_eq!(s.blocks, 6);
        assert!(s.max_gap > 0.0 && s.shadow.shadow_distance <= 0.01);
    }

    #[test]
    fn auto_power_is_one_for_doubling() {
        let out = run(&cfg(
            Command::Kingman,
            Params {
                power: Some("auto".into()),
                gamma: Some(0.5),
                ..Params::default()
            },
        ))
        .unwrap();
        assert_eq!(out.report.power, Some(1));
    }
}
