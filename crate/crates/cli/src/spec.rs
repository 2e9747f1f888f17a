//! Experiment specification: JSON config merged with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use quatnev::nevanlinna::{admissible_radii, divisor_for, log_spaced, FmtForm, KernelConvention, Target};
use quatnev::{Gl2H, IntegratorConfig, LeftPoly, Quaternion, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyJensen,
    Profile,
    FmtCheck,
    MpbCheck,
    Arbiter,
    AlgebraSuite,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A rational `num * den^{-*}`; `den` defaults to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub num: LeftPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<LeftPoly>,
}

impl FunctionSpec {
    pub fn poly(coeffs: Vec<Quaternion>) -> Self {
        FunctionSpec {
            num: LeftPoly::new(coeffs),
            den: None,
        }
    }

    pub fn build(&self) -> Result<Rational> {
        let den = self.den.clone().unwrap_or_else(|| LeftPoly::constant(Quaternion::ONE));
        Rational::new(self.num.clone(), den).context("invalid function")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiiSpec {
    List(Vec<f64>),
    LogSpaced { lo: f64, hi: f64, n: usize },
}

impl RadiiSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() == 3 {
            return Ok(RadiiSpec::LogSpaced {
                lo: parts[0].trim().parse()?,
                hi: parts[1].trim().parse()?,
                n: parts[2].trim().parse()?,
            });
        }
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("bad radius list {s:?}"))?;
        Ok(RadiiSpec::List(v))
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            RadiiSpec::List(v) => v.clone(),
            RadiiSpec::LogSpaced { lo, hi, n } => {
                if !(*lo > 0.0 && hi > lo && *n >= 2) {
                    bail!("log-spaced radii need 0 < lo < hi and n >= 2");
                }
                log_spaced(*lo, *hi, *n)
            }
        };
        if v.is_empty() || v.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            bail!("radii must be positive and finite");
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            bail!("radii must be strictly increasing");
        }
        Ok(v)
    }
}

/// Everything a run needs. Missing fields take per-command defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub command: Option<Command>,
    pub function: Option<FunctionSpec>,
    /// Second function for `algebra-suite`.
    pub g: Option<FunctionSpec>,
    pub a: Option<Target>,
    pub r: Option<f64>,
    pub radii: Option<RadiiSpec>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    pub kernel_convention: Option<KernelConvention>,
    pub form: Option<FmtForm>,
    pub transform: Option<Gl2H>,
    /// Slope ceiling for the `fmt-check` gate.
    pub max_slope: Option<f64>,
    /// Optional spread ceiling for the `fmt-check` gate.
    pub max_spread: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("cannot parse config {}", path.display()))
    }

    pub fn validate(&self, cmd: Command) -> Result<()> {
        if let Some(c) = self.command {
            if c != cmd {
                bail!("config is for {c:?}, but {cmd:?} was requested");
            }
        }
        self.integrator.validate()?;
        if let Some(r) = self.r {
            if !(r > 0.0 && r.is_finite()) {
                bail!("r must be positive, got {r}");
            }
        }
        if let Some(radii) = &self.radii {
            radii.values()?;
        }
        Ok(())
    }

    pub fn function(&self, cmd: Command) -> Result<Rational> {
        match &self.function {
            Some(f) => f.build(),
            None => default_function(cmd).build(),
        }
    }

    pub fn second_function(&self) -> Result<Rational> {
        match &self.g {
            Some(g) => g.build(),
            None => Ok(Rational::new(
                LeftPoly::new(vec![Quaternion::new(0.1, 0.0, 0.6, 0.3), Quaternion::ONE]),
                LeftPoly::from_real(&[0.5, 0.0, 1.0]),
            )?),
        }
    }

    pub fn target(&self, cmd: Command) -> Target {
        self.a.unwrap_or(match cmd {
            Command::AlgebraSuite => Target::Finite(Quaternion::new(0.3, -0.2, 0.4, 0.1)),
            _ => Target::Finite(Quaternion::ONE),
        })
    }

    pub fn radius(&self) -> f64 {
        self.r.unwrap_or(2.0)
    }

    pub fn kernel(&self) -> KernelConvention {
        self.kernel_convention.unwrap_or_default()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// The radius grid, nudged off every divisor sphere of `f - a` and `f`.
    pub fn grid(&self, cmd: Command, f: &Rational, a: Target) -> Result<Vec<f64>> {
        let base = match (&self.radii, cmd) {
            (Some(r), _) => r.values()?,
            (None, Command::AlgebraSuite) => vec![1.5, 3.0, 6.0, 12.0],
            (None, _) => log_spaced(2.0, 50.0, 12),
        };
        let (d, _) = divisor_for(f, a)?;
        let (p, _) = divisor_for(f, Target::Infinity)?;
        Ok(admissible_radii(&base, &[&d, &p]))
    }
}

/// `q - (0.5 + 0.7i)` for `verify-jensen`, `q^2 + 1` otherwise.
pub fn default_function(cmd: Command) -> FunctionSpec {
    match cmd {
        Command::VerifyJensen => {
            FunctionSpec::poly(vec![Quaternion::new(-0.5, -0.7, 0.0, 0.0), Quaternion::ONE])
        }
        Command::AlgebraSuite => FunctionSpec::poly(vec![
            Quaternion::new(0.4, 0.1, -0.3, 0.2),
            Quaternion::new(0.2, 0.5, 0.0, -0.1),
            Quaternion::new(1.0, 0.0, 0.3, 0.0),
        ]),
        _ => FunctionSpec::poly(vec![Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE]),
    }
}

/// Parses `inf`, `w,x,y,z`, a bare real, or a JSON array.
pub fn parse_target(s: &str) -> Result<Target> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "\"inf\"" {
        return Ok(Target::Infinity);
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let v = inner
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad target {s:?}"))?;
    match v.as_slice() {
        [w] => Ok(Target::Finite(Quaternion::real(*w))),
        [w, x, y, z] => Ok(Target::Finite(Quaternion::new(*w, *x, *y, *z))),
        _ => bail!("target needs 1 or 4 components, got {}", v.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_targets() {
        assert_eq!(parse_target("inf").unwrap(), Target::Infinity);
        assert_eq!(parse_target("2").unwrap(), Target::Finite(Quaternion::real(2.0)));
        assert_eq!(
            parse_target("[0.5, 0.7, 0, 0]").unwrap(),
            Target::Finite(Quaternion::new(0.5, 0.7, 0.0, 0.0))
        );
        assert!(parse_target("1,2").is_err());
    }

    #[test]
    fn parses_radii() {
        assert_eq!(RadiiSpec::parse("1,2,3").unwrap().values().unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(RadiiSpec::parse("2:50:12").unwrap().values().unwrap().len(), 12);
        assert!(RadiiSpec::parse("3,2").unwrap().values().is_err());
    }

    #[test]
    fn config_roundtrip() {
        let text = r#"{
            "command": "verify-jensen",
            "function": {"num": [[-0.5, -0.7, 0, 0], [1, 0, 0, 0]]},
            "a": "inf",
            "r": 2.0,
            "radii": {"lo": 2, "hi": 50, "n": 4},
            "integrator": {"samples": 5000, "seed": 3},
            "kernel_convention": "perotti_factor2"
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.command, Some(Command::VerifyJensen));
        assert_eq!(spec.a, Some(Target::Infinity));
        assert_eq!(spec.integrator.samples, 5000);
        assert_eq!(spec.integrator.reject_tol, 1e-12);
        assert_eq!(spec.kernel(), KernelConvention::PerottiFactor2);
        assert!(spec.validate(Command::VerifyJensen).is_ok());
        assert!(spec.validate(Command::Profile).is_err());
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"bogus": 1}"#).is_err());
    }
}
