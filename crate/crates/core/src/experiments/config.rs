use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use super::{Command, Params, RunConfig, RunError, SampleSource};
use crate::dynamics::ZooMap;

/// Seed point used when none is given: `π − 3`.
pub(crate) const DEFAULT_X: f64 = std::f64::consts::PI - 3.0;

const STRING_KEYS: &[&str] = &["map", "power", "word", "sample", "format", "output"];

/// Reads a flat `key = value` configuration file.
pub fn parse_config_file(path: &Path) -> Result<(Option<Command>, Params), RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_config_str(&text)
}

/// Parses `key = value` lines. `#` starts a comment, keys may use `-` or
/// `_`, `values` and `gammas` take comma-separated lists, and a `command`
/// key is allowed. Unknown or repeated keys are rejected with their line.
pub fn parse_config_str(text: &str) -> Result<(Option<Command>, Params), RunError> {
    let mut command = None;
    let mut obj = Map::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| RunError::ConfigLine {
            line,
            key: content.to_string(),
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim().replace('-', "_").to_ascii_lowercase();
        let value = value.trim();
        let err = |msg: String| RunError::ConfigLine {
            line,
            key: key.clone(),
            msg,
        };
        if key == "command" {
            command = Some(Command::from_str(value).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let entries: Vec<(String, Value)> = if key == "gammas" {
            let g = parse_list(value).map_err(err)?;
            if g.len() != 3 {
                return Err(err("expected three comma-separated values".into()));
            }
            ["gamma", "gamma_prime", "gamma_double_prime"]
                .iter()
                .zip(g)
                .map(|(k, v)| (k.to_string(), v))
                .collect()
        } else if key == "values" {
            vec![(key.clone(), Value::Array(parse_list(value).map_err(err)?))]
        } else if STRING_KEYS.contains(&key.as_str()) {
            vec![(key.clone(), Value::String(value.to_string()))]
        } else {
            vec![(key.clone(), parse_number(value).map_err(err)?)]
        };
        for (k, v) in entries {
            let mut single = Map::new();
            single.insert(k.clone(), v.clone());
            serde_json::from_value::<Params>(Value::Object(single))
                .map_err(|e| err(e.to_string()))?;
            if obj.insert(k, v).is_some() {
                return Err(err("key given more than once".into()));
            }
        }
    }
    let params = serde_json::from_value(Value::Object(obj)).map_err(|e| RunError::Config(e.to_string()))?;
    Ok((command, params))
}

fn parse_number(s: &str) -> Result<Value, String> {
    if let Ok(u) = s.parse::<u64>() {
        return Ok(Value::from(u));
    }
    s.parse::<f64>()
        .ok()
        .and_then(|f| serde_json::Number::from_f64(f).map(Value::Number))
        .ok_or_else(|| format!("`{s}` is not a number"))
}

fn parse_list(s: &str) -> Result<Vec<Value>, String> {
    s.split(',').map(|p| parse_number_f64(p.trim())).collect()
}

fn parse_number_f64(s: &str) -> Result<Value, String> {
    s.parse::<f64>()
        .ok()
        .and_then(|f| serde_json::Number::from_f64(f).map(Value::Number))
        .ok_or_else(|| format!("`{s}` is not a number"))
}

/// `κ` from a power setting: a positive integer or `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PowerSpec {
    Fixed(usize),
    Auto,
}

pub(crate) fn parse_power(s: &str) -> Result<PowerSpec, RunError> {
    if s.trim() == "auto" {
        return Ok(PowerSpec::Auto);
    }
    match s.trim().parse::<usize>() {
        Ok(k) if (1..=64).contains(&k) => Ok(PowerSpec::Fixed(k)),
        _ => Err(RunError::Config(format!(
            "power must be `auto` or an integer in 1..=64, got `{s}`"
        ))),
    }
}

fn need<T: Copy>(v: Option<T>, name: &str, command: Command) -> Result<T, RunError> {
    v.ok_or_else(|| RunError::Config(format!("`{}` needs `{name}`", command.as_str())))
}

fn positive(v: Option<usize>, name: &str) -> Result<(), RunError> {
    match v {
        Some(0) => Err(RunError::Config(format!("`{name}` must be at least 1"))),
        _ => Ok(()),
    }
}

fn finite(v: Option<f64>, name: &str) -> Result<(), RunError> {
    match v {
        Some(x) if !x.is_finite() => Err(RunError::Config(format!("`{name}` must be finite"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Fills in the command's defaults and checks parameter validity.
    pub fn new(command: Command, params: Params) -> Result<RunConfig, RunError> {
        let mut p = params;
        for (v, name) in [
            (p.x, "x"),
            (p.h, "h"),
            (p.gamma, "gamma"),
            (p.gamma_prime, "gamma_prime"),
            (p.gamma_double_prime, "gamma_double_prime"),
            (p.lambda, "lambda"),
            (p.epsilon, "epsilon"),
            (p.noise, "noise"),
        ] {
            finite(v, name)?;
        }
        if p.values.as_ref().is_some_and(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(RunError::Config("`values` must be finite".into()));
        }
        let explicit_sift = command == Command::Sift && p.values.is_some();
        if !explicit_sift {
            let map = p.map.get_or_insert_with(|| "doubling".to_string());
            let parsed = ZooMap::from_str(map)?;
            *map = parsed.name();
            let power = p.power.get_or_insert_with(|| "1".to_string());
            parse_power(power)?;
        }
        p.seed.get_or_insert(0);
        match command {
            Command::Sift => {
                if explicit_sift {
                    need(p.h, "h", command)?;
                    need(p.gamma, "gamma", command)?;
                    need(p.gamma_prime, "gamma_prime", command)?;
                } else {
                    p.x.get_or_insert(DEFAULT_X);
                    p.horizon.get_or_insert(1000);
                    p.gamma.get_or_insert(0.6);
                    p.gamma_prime.get_or_insert(0.5);
                }
            }
            Command::Shadow => {
                p.x.get_or_insert(DEFAULT_X);
                let horizon = *p.horizon.get_or_insert(200);
                p.tau.get_or_insert(horizon);
                p.start.get_or_insert(0);
                p.noise.get_or_insert(0.0);
                p.lambda.get_or_insert(0.5);
                p.epsilon.get_or_insert(0.01);
            }
            Command::Close => {
                need(p.x, "x", command)?;
                need(p.tau, "tau", command)?;
                p.start.get_or_insert(0);
                p.lambda.get_or_insert(0.5);
                p.epsilon.get_or_insert(0.01);
            }
            Command::Repellers => fill_repeller_defaults(&mut p),
            Command::VerifyAbnormal => {
                if p.word.is_none() {
                    need(p.x, "x", command)?;
                    need(p.tau, "tau", command)?;
                }
                need(p.gamma_prime, "gamma_prime", command)?;
                need(p.gamma_double_prime, "gamma_double_prime", command)?;
            }
            Command::ExpansionFit => {
                p.k_max.get_or_insert(20);
                let sample = *p.sample.get_or_insert(SampleSource::Halton);
                match sample {
                    SampleSource::Halton => {
                        p.samples.get_or_insert(64);
                    }
                    SampleSource::Orbit => {
                        p.x.get_or_insert(DEFAULT_X);
                        p.horizon.get_or_insert(1000);
                    }
                    SampleSource::Repellers => fill_repeller_defaults(&mut p),
                }
            }
            Command::Kingman => {
                p.x.get_or_insert(DEFAULT_X);
                p.t1.get_or_insert(1);
                p.levels.get_or_insert(8);
                p.blocks.get_or_insert(16);
            }
        }
        if p.power.as_deref() == Some("auto") {
            p.gamma.get_or_insert(0.6);
            p.x.get_or_insert(DEFAULT_X);
            p.t1.get_or_insert(1);
            p.levels.get_or_insert(8);
            p.blocks.get_or_insert(16);
        }
        for (v, name) in [
            (p.horizon, "horizon"),
            (p.tau, "tau"),
            (p.t1, "t1"),
            (p.levels, "levels"),
            (p.blocks, "blocks"),
            (p.samples, "samples"),
            (p.max_repellers, "max_repellers"),
        ] {
            positive(v, name)?;
        }
        if p.levels.is_some_and(|l| l > 40) {
            return Err(RunError::Config("`levels` must be at most 40".into()));
        }
        if p.k_max.is_some_and(|k| k < 2) {
            return Err(RunError::Config("`k_max` must be at least 2".into()));
        }
        if let Some(eps) = p.epsilon {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(RunError::Config("`epsilon` must lie in (0, 0.5)".into()));
            }
        }
        if p.lambda.is_some_and(|l| l <= 0.0) {
            return Err(RunError::Config("`lambda` must be positive".into()));
        }
        if p.noise.is_some_and(|n| n < 0.0) {
            return Err(RunError::Config("`noise` must be nonnegative".into()));
        }
        if let (Some(g), Some(gp)) = (p.gamma, p.gamma_prime) {
            if !(gp > 0.0 && gp < g) {
                return Err(RunError::Config(format!(
                    "need 0 < gamma' < gamma, got gamma = {g}, gamma' = {gp}"
                )));
            }
        }
        if let (Some(gp), Some(gpp)) = (p.gamma_prime, p.gamma_double_prime) {
            let ordered = if command == Command::VerifyAbnormal {
                gp > 0.0 && gp < gpp
            } else {
                gpp > 0.0 && gpp < gp
            };
            if !ordered {
                return Err(RunError::Config(format!(
                    "gamma' = {gp} and gamma'' = {gpp} are out of order for `{}`",
                    command.as_str()
                )));
            }
        }
        if let Some(w) = &p.word {
            if w.is_empty() || !w.chars().all(|c| c == '0' || c == '1') {
                return Err(RunError::Config(format!("`word` must be a nonempty 0/1 string, got `{w}`")));
            }
        }
        Ok(RunConfig { command, params: p })
    }
}

fn fill_repeller_defaults(p: &mut Params) {
    p.x.get_or_insert(DEFAULT_X);
    p.horizon.get_or_insert(10_000);
    let g = *p.gamma.get_or_insert(0.6);
    let gp = *p.gamma_prime.get_or_insert(g * 5.0 / 6.0);
    let gpp = *p.gamma_double_prime.get_or_insert(0.8 * gp);
    let lambda = *p.lambda.get_or_insert(gp);
    let room = lambda - gpp;
    p.epsilon.get_or_insert(if room >= 0.1 - 1e-12 { 0.05 } else { (0.5 * room).max(1e-6) });
    p.tau_min.get_or_insert(3);
    p.max_repellers.get_or_insert(8);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file_with_comments() {
        let (cmd, p) = parse_config_str(
            "# repeller run\ncommand = repellers\nmap = pl_tent(3,1.5)\ngammas = 0.55, 0.5, 0.4\nhorizon = 5000\nseed = 7 # trailing\n",
        )
        .unwrap();
        assert_eq!(cmd, Some(Command::Repellers));
        assert_eq!(p.map.as_deref(), Some("pl_tent(3,1.5)"));
        assert_eq!(p.gamma_prime, Some(0.5));
        assert_eq!(p.horizon, Some(5000));
        assert_eq!(p.seed, Some(7));
    }

    #[test]
    fn unknown_key_reports_its_line() {
        let e = parse_config_str("horizon = 10\nbogus = 3\n").unwrap_err();
        assert!(matches!(e, RunError::ConfigLine { line: 2, ref key, .. } if key == "bogus"));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bad_value_reports_its_line() {
        let e = parse_config_str("\n\nhorizon = lots\n").unwrap_err();
        assert!(matches!(e, RunError::ConfigLine { line: 3, .. }));
        let e = parse_config_str("horizon = 1.5\n").unwrap_err();
        assert!(matches!(e, RunError::ConfigLine { line: 1, .. }));
    }

    #[test]
    fn repeated_key_is_rejected() {
        assert!(parse_config_str("seed = 1\nseed = 2\n").is_err());
    }

    #[test]
    fn repeller_defaults_are_consistent() {
        let c = RunConfig::new(Command::Repellers, Params::default()).unwrap();
        let p = &c.params;
        assert_eq!(p.map.as_deref(), Some("doubling"));
        assert_eq!((p.gamma, p.gamma_prime, p.gamma_double_prime), (Some(0.6), Some(0.5), Some(0.4)));
        assert!(p.lambda.unwrap() - p.epsilon.unwrap() >= p.gamma_double_prime.unwrap());
    }

    #[test]
    fn validation_rejects_bad_orders() {
        let p = Params {
            gamma: Some(0.5),
            gamma_prime: Some(0.6),
            ..Params::default()
        };
        assert!(RunConfig::new(Command::Repellers, p).is_err());
        let p = Params {
            x: Some(0.0),
            tau: Some(1),
            gamma_prime: Some(0.8),
            gamma_double_prime: Some(0.1),
            ..Params::default()
        };
        assert!(RunConfig::new(Command::VerifyAbnormal, p).is_err());
        let p = Params {
            map: Some("logistic".into()),
            ..Params::default()
        };
        assert_eq!(RunConfig::new(Command::Kingman, p).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn power_accepts_auto_and_integers() {
        assert_eq!(parse_power("auto").unwrap(), PowerSpec::Auto);
        assert_eq!(parse_power("3").unwrap(), PowerSpec::Fixed(3));
        assert!(parse_power("0").is_err());
        assert!(parse_power("two").is_err());
    }
}
