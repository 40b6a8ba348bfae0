//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fejer_well::{EvalInstant, LimitMode};

use crate::emit::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Fig1,
    Trajectories,
    Uncertainty,
    Gibbs,
    Limit,
    OracleCheck,
}

impl Command {
    fn parse(s: &str) -> CliResult<Self> {
        Command::from_str(s, false).map_err(|_| CliError::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfWidth {
    Auto,
    /// `⌊√n⌋`.
    Sqrt,
    Fixed(u32),
}

/// Time given either in classical periods (`2T`) or absolutely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    Periods(f64),
    Absolute(f64),
}

impl TimeSpec {
    pub fn resolve(self, period: f64) -> f64 {
        match self {
            TimeSpec::Periods(k) => k * period,
            TimeSpec::Absolute(t) => t,
        }
    }

    fn value(self) -> f64 {
        match self {
            TimeSpec::Periods(k) | TimeSpec::Absolute(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: u32,
    pub half_width: HalfWidth,
    pub t_max: TimeSpec,
    pub steps: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub normalize_momentum: bool,
    /// Gibbs harmonic index; `None` runs the built-in ladder.
    pub m: Option<u32>,
    pub instant: EvalInstant,
    /// n-values for `fig1` and `limit`.
    pub ns: Option<Vec<u32>>,
    pub limit_mode: LimitMode,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            n: 500,
            half_width: HalfWidth::Auto,
            t_max: TimeSpec::Periods(2.0),
            steps: 2000,
            format: Format::Csv,
            out: None,
            normalize_momentum: true,
            m: None,
            instant: EvalInstant::default(),
            ns: None,
            limit_mode: LimitMode::ScaledHbar,
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key {
            "command" => self.command = Command::parse(value)?,
            "n" => self.n = parse_int(key, value)?,
            "N" => self.half_width = parse_half_width(value)?,
            "t-max" | "t_max" => self.t_max = parse_time(value)?,
            "steps" => self.steps = parse_int::<u32>(key, value)? as usize,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return usage(format!("format must be csv or json, got `{value}`")),
                }
            }
            "out" => self.out = (value != "-").then(|| PathBuf::from(value)),
            "normalize-momentum" | "normalize_momentum" => {
                self.normalize_momentum = match value {
                    "on" => true,
                    "off" => false,
                    _ => {
                        return usage(format!(
                            "normalize-momentum must be on or off, got `{value}`"
                        ))
                    }
                }
            }
            "m" => self.m = Some(parse_int(key, value)?),
            "instant" => self.instant = parse_instant(value)?,
            "ns" => {
                self.ns = Some(
                    value
                        .split(',')
                        .map(|v| parse_int(key, v.trim()))
                        .collect::<CliResult<_>>()?,
                )
            }
            "limit-mode" | "limit_mode" => {
                self.limit_mode = match value {
                    "scaled" => LimitMode::ScaledHbar,
                    "fixed" => LimitMode::FixedHbar,
                    _ => {
                        return usage(format!("limit-mode must be scaled or fixed, got `{value}`"))
                    }
                }
            }
            _ => return usage(format!("unknown setting `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.steps < 2 {
            return usage(format!("steps must be at least 2, got {}", self.steps));
        }
        let t = self.t_max.value();
        if !(t > 0.0 && t.is_finite()) {
            return usage("t-max must be positive and finite");
        }
        if self.m == Some(0) {
            return usage("m must be at least 1");
        }
        Ok(())
    }
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.parse().map_err(|_| {
        CliError::Usage(format!(
            "{key}: expected a non-negative integer, got `{value}`"
        ))
    })
}

pub fn parse_half_width(value: &str) -> CliResult<HalfWidth> {
    match value {
        "auto" => Ok(HalfWidth::Auto),
        "sqrt" => Ok(HalfWidth::Sqrt),
        v => parse_int("N", v).map(HalfWidth::Fixed),
    }
}

pub fn parse_time(value: &str) -> CliResult<TimeSpec> {
    let bad = || {
        CliError::Usage(format!(
            "t-max: expected a time or a multiple of T, got `{value}`"
        ))
    };
    if let Some(k) = value.strip_suffix('T') {
        let k = if k.is_empty() {
            1.0
        } else {
            k.parse().map_err(|_| bad())?
        };
        Ok(TimeSpec::Periods(k))
    } else {
        value.parse().map(TimeSpec::Absolute).map_err(|_| bad())
    }
}

pub fn parse_instant(value: &str) -> CliResult<EvalInstant> {
    match value {
        "start" => Ok(EvalInstant::Start),
        "turning" => Ok(EvalInstant::Turning(1)),
        v => match v.strip_prefix("turning:").map(str::parse::<u32>) {
            Some(Ok(k)) if k >= 1 => Ok(EvalInstant::Turning(k)),
            _ => usage(format!(
                "instant must be start, turning or turning:K, got `{v}`"
            )),
        },
    }
}

/// Settings from a plain-text file: one `key = value` per line, `#` starts
/// a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        out.insert(k.trim().to_owned(), v.trim().to_owned());
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "fejer-well",
    version,
    about = "Wave packets in the infinite square well against their classical Fejér means"
)]
pub struct Args {
    /// fig1, trajectories, uncertainty, gibbs, limit or oracle-check
    pub command: Option<Command>,
    #[arg(long)]
    pub n: Option<String>,
    /// Packet half-width: integer, auto or sqrt
    #[arg(long = "N")]
    pub big_n: Option<String>,
    /// End time, absolute or as a multiple of the period (e.g. 2T)
    #[arg(long = "t-max", allow_hyphen_values = true)]
    pub t_max: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output path; standard output when absent
    #[arg(long)]
    pub out: Option<String>,
    /// key = value settings file, overridden by flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// on or off
    #[arg(long = "normalize-momentum")]
    pub normalize_momentum: Option<String>,
    /// Gibbs harmonic index
    #[arg(long)]
    pub m: Option<String>,
    /// start, turning or turning:K
    #[arg(long)]
    pub instant: Option<String>,
    /// Comma-separated n-values for fig1 and limit
    #[arg(long)]
    pub ns: Option<String>,
    /// scaled or fixed
    #[arg(long = "limit-mode")]
    pub limit_mode: Option<String>,
}

impl Args {
    fn flag_settings(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 11] = [
            ("n", &self.n),
            ("N", &self.big_n),
            ("t-max", &self.t_max),
            ("steps", &self.steps),
            ("format", &self.format),
            ("out", &self.out),
            ("normalize-momentum", &self.normalize_momentum),
            ("m", &self.m),
            ("instant", &self.instant),
            ("ns", &self.ns),
            ("limit-mode", &self.limit_mode),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    /// Merges the optional config file (given as text) with the flags.
    pub fn resolve(&self, config_text: Option<&str>) -> CliResult<RunConfig> {
        let file = config_text
            .map(parse_config_text)
            .transpose()?
            .unwrap_or_default();
        let command = match (self.command, file.get("command")) {
            (Some(c), _) => c,
            (None, Some(c)) => Command::parse(c)?,
            (None, None) => return usage("no command given"),
        };
        let mut cfg = RunConfig::new(command);
        for (k, v) in file.iter().filter(|(k, _)| k.as_str() != "command") {
            cfg.set(k, v)?;
        }
        for (k, v) in self.flag_settings() {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// [`Args::resolve`] reading `--config` from disk.
    pub fn load(&self) -> CliResult<RunConfig> {
        let text = match &self.config {
            Some(path) => Some(
                std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?,
            ),
            None => None,
        };
        self.resolve(text.as_deref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("fejer-well").chain(list.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let c = args(&["trajectories"]).resolve(None).unwrap();
        assert_eq!(c.n, 500);
        assert_eq!(c.half_width, HalfWidth::Auto);
        assert_eq!(c.t_max, TimeSpec::Periods(2.0));
        assert_eq!(c.steps, 2000);
        assert!(c.normalize_momentum);
    }

    #[test]
    fn time_forms() {
        assert_eq!(parse_time("2T").unwrap(), TimeSpec::Periods(2.0));
        assert_eq!(parse_time("T").unwrap(), TimeSpec::Periods(1.0));
        assert_eq!(parse_time("0.5T").unwrap(), TimeSpec::Periods(0.5));
        assert_eq!(parse_time("0.0025").unwrap(), TimeSpec::Absolute(0.0025));
        assert!(parse_time("xT").is_err());
    }

    #[test]
    fn flags_override_file() {
        let text = "# run\ncommand = uncertainty\nn = 100\nsteps = 50 # short\nformat=json\n";
        let c = args(&["--steps", "7"]).resolve(Some(text)).unwrap();
        assert_eq!(c.command, Command::Uncertainty);
        assert_eq!(c.n, 100);
        assert_eq!(c.steps, 7);
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(args(&["fig1", "--steps", "1"]).resolve(None).is_err());
        assert!(args(&["fig1", "--t-max", "-1"]).resolve(None).is_err());
        assert!(args(&["fig1", "--N", "many"]).resolve(None).is_err());
        assert!(args(&["fig1"]).resolve(Some("colour = red")).is_err());
        assert!(args(&["fig1"]).resolve(Some("no equals sign")).is_err());
        assert!(args(&[]).resolve(None).is_err());
        assert!(parse_instant("turning:0").is_err());
        assert_eq!(parse_instant("turning:3").unwrap(), EvalInstant::Turning(3));
    }
}
