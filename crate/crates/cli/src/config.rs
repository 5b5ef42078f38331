use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    ComplianceQuadratic,
    ComplianceTwophase,
    EnergyRelaxed,
    GeneralRelaxed,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Domain {
    Square,
    Disk,
}

/// Penalty for the `custom` experiment. The first three run the scalar
/// compliance descent, `affine-box` the relaxed energy scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PenaltyChoice {
    Quadratic,
    LinearBox,
    Threshold,
    AffineBox,
}

fn tag<T: clap::ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_owned())
        .unwrap_or_default()
}

fn from_tag<T: clap::ValueEnum>(field: &'static str, s: &str) -> Result<T, ConfigError> {
    T::from_str(s, false).map_err(|_| ConfigError::Value {
        field,
        message: format!("unknown value `{s}`"),
    })
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&tag(self))
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&tag(self))
    }
}

impl fmt::Display for PenaltyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&tag(self))
    }
}

/// A partial configuration: the contents of a config file, or the flags
/// given on the command line. Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub experiment: Option<Experiment>,
    pub domain: Option<Domain>,
    pub penalty: Option<PenaltyChoice>,
    pub n: Option<usize>,
    pub h: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub epsilon: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

impl Settings {
    pub fn overridden_by(self, top: Settings) -> Settings {
        Settings {
            experiment: top.experiment.or(self.experiment),
            domain: top.domain.or(self.domain),
            penalty: top.penalty.or(self.penalty),
            n: top.n.or(self.n),
            h: top.h.or(self.h),
            alpha: top.alpha.or(self.alpha),
            beta: top.beta.or(self.beta),
            gamma: top.gamma.or(self.gamma),
            tau: top.tau.or(self.tau),
            epsilon: top.epsilon.or(self.epsilon),
            tol: top.tol.or(self.tol),
            max_iters: top.max_iters.or(self.max_iters),
            seed: top.seed.or(self.seed),
            out_dir: top.out_dir.or(self.out_dir),
        }
    }
}

fn number<T: FromStr>(field: &'static str, s: &str) -> Result<T, ConfigError> {
    s.parse().map_err(|_| ConfigError::Value {
        field,
        message: format!("cannot parse `{s}`"),
    })
}

/// Parses `key = value` lines. Blank lines and text after `#` are ignored;
/// keys may use `-` or `_`.
pub fn parse_settings(text: &str) -> Result<Settings, ConfigError> {
    let mut s = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_owned(),
            });
        };
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "experiment" => s.experiment = Some(from_tag("experiment", value)?),
            "domain" => s.domain = Some(from_tag("domain", value)?),
            "penalty" => s.penalty = Some(from_tag("penalty", value)?),
            "n" => s.n = Some(number("n", value)?),
            "h" => s.h = Some(number("h", value)?),
            "alpha" => s.alpha = Some(number("alpha", value)?),
            "beta" => s.beta = Some(number("beta", value)?),
            "gamma" => s.gamma = Some(number("gamma", value)?),
            "tau" => s.tau = Some(number("tau", value)?),
            "epsilon" => s.epsilon = Some(number("epsilon", value)?),
            "tol" => s.tol = Some(number("tol", value)?),
            "max_iters" => s.max_iters = Some(number("max_iters", value)?),
            "seed" => s.seed = Some(number("seed", value)?),
            "out_dir" => s.out_dir = Some(PathBuf::from(value)),
            other => {
                return Err(ConfigError::UnknownKey {
                    line: i + 1,
                    key: other.to_owned(),
                })
            }
        }
    }
    Ok(s)
}

/// Mesh choice: the criss-cross square with `n` cells per side or the ring
/// disk with spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshSpec {
    Square { n: usize },
    Disk { h: f64 },
}

impl MeshSpec {
    pub fn domain(&self) -> Domain {
        match self {
            MeshSpec::Square { .. } => Domain::Square,
            MeshSpec::Disk { .. } => Domain::Disk,
        }
    }

    /// Nominal mesh size: `1/n` or `h`.
    pub fn size(&self) -> f64 {
        match *self {
            MeshSpec::Square { n } => 1.0 / n as f64,
            MeshSpec::Disk { h } => h,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub mesh: MeshSpec,
    pub penalty: PenaltyChoice,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub max_iters: usize,
    /// Accepted for reproducible command lines; every driver is deterministic.
    pub seed: u64,
    pub out_dir: PathBuf,
}

struct Defaults {
    domain: Domain,
    penalty: Option<PenaltyChoice>,
    h: f64,
    gamma: f64,
}

fn defaults(experiment: Experiment) -> Defaults {
    let (domain, penalty, h, gamma) = match experiment {
        Experiment::ComplianceQuadratic => (Domain::Disk, Some(PenaltyChoice::Quadratic), 1.0 / 64.0, 0.01141),
        Experiment::ComplianceTwophase => (Domain::Square, Some(PenaltyChoice::LinearBox), 0.02, 0.01141),
        Experiment::EnergyRelaxed => (Domain::Square, Some(PenaltyChoice::AffineBox), 0.02, 0.0142),
        Experiment::GeneralRelaxed => (Domain::Disk, None, 0.02, 0.01141),
        Experiment::Custom => (Domain::Square, Some(PenaltyChoice::LinearBox), 0.02, 0.01141),
    };
    Defaults {
        domain,
        penalty,
        h,
        gamma,
    }
}

fn check(ok: bool, field: &'static str, message: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Value {
            field,
            message: message(),
        })
    }
}

impl ExperimentConfig {
    /// Applies the defaults of the selected experiment and validates.
    pub fn resolve(s: Settings) -> Result<Self, ConfigError> {
        let experiment = s.experiment.ok_or(ConfigError::MissingExperiment)?;
        let d = defaults(experiment);
        let penalty = match (experiment, s.penalty) {
            (Experiment::Custom, Some(p)) => p,
            (_, None) => d.penalty.unwrap_or(PenaltyChoice::Threshold),
            (_, Some(_)) => {
                return Err(ConfigError::Value {
                    field: "penalty",
                    message: format!("only the custom experiment takes a penalty, not {experiment}"),
                })
            }
        };
        let mesh = match s.domain.unwrap_or(d.domain) {
            Domain::Square => MeshSpec::Square { n: s.n.unwrap_or(64) },
            Domain::Disk => MeshSpec::Disk { h: s.h.unwrap_or(d.h) },
        };
        let c = Self {
            experiment,
            mesh,
            penalty,
            alpha: s.alpha.unwrap_or(1.0),
            beta: s.beta.unwrap_or(2.0),
            gamma: s.gamma.unwrap_or(d.gamma),
            tau: s.tau.unwrap_or(0.23539),
            epsilon: s.epsilon.unwrap_or(0.0),
            tol: s.tol.unwrap_or(1e-6),
            max_iters: s.max_iters.unwrap_or(2000),
            seed: s.seed.unwrap_or(0),
            out_dir: s.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.mesh {
            MeshSpec::Square { n } => check(n >= 1, "n", || format!("{n} must be at least 1"))?,
            MeshSpec::Disk { h } => check(h > 0.0 && h <= 1.0, "h", || format!("{h} must lie in (0, 1]"))?,
        }
        let (a, b) = (self.alpha, self.beta);
        check(a > 0.0 && a.is_finite(), "alpha", || format!("{a} must be positive"))?;
        check(b > a && b.is_finite(), "beta", || {
            format!("need alpha < beta, got alpha = {a}, beta = {b}")
        })?;
        let g = self.gamma;
        check(g > 0.0 && g.is_finite(), "gamma", || format!("{g} must be positive"))?;
        let tau_used = self.experiment == Experiment::GeneralRelaxed || self.penalty == PenaltyChoice::Threshold;
        let t = self.tau;
        check(!tau_used || (t > 0.0 && t < 0.5), "tau", || {
            format!("{t} must lie in (0, 1/2)")
        })?;
        let e = self.epsilon;
        check(e.is_finite(), "epsilon", || format!("{e} must be finite"))?;
        check(self.tol > 0.0 && self.tol.is_finite(), "tol", || {
            format!("{} must be positive", self.tol)
        })?;
        check(self.max_iters >= 1, "max_iters", || "must be at least 1".to_owned())?;
        Ok(())
    }
}

/// Reads a config file's text and applies the command-line `flags` on top.
pub fn parse_config(text: &str, flags: Settings) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::resolve(parse_settings(text)?.overridden_by(flags))
}
