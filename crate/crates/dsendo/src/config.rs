//! JSON job configuration.
//!
//! Rationals are written as strings `"p/q"` (or `"p"`), so lattice data stays
//! exact. Unknown fields are ignored, which lets the structured output of
//! `describe` be fed back in as a configuration.

use dsendo_core::packets::DiscreteParameter;
use dsendo_core::realforms::{DualTorsion, Grading};
use dsendo_core::rootdata::{rho, BasedRootDatum, Coweight, Weight, Q};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Default number of samples for `verify`.
pub const DEFAULT_SAMPLES: usize = 200;
/// Default tolerance for `verify`.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Configuration errors; all map to exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid group: {0}")]
    Group(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid form: {0}")]
    Form(String),
    #[error("invalid s: {0}")]
    S(String),
}

/// An exact rational, serialized as `"p/q"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat(pub Q);

impl std::str::FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = |why: &str| format!("invalid rational `{s}`: {why}");
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad("numerator is not an integer"))?;
        let q: i64 = q.parse().map_err(|_| bad("denominator is not an integer"))?;
        if q == 0 {
            return Err(bad("zero denominator"));
        }
        Ok(Rat(Q::new(p, q)))
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Converts rationals to exact rationals (helper for weights and coweights).
pub fn rats(v: &[Q]) -> Vec<Rat> {
    v.iter().copied().map(Rat).collect()
}

/// Explicit lattice data of a based root datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitGroup {
    #[serde(default)]
    pub label: Option<String>,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple: Vec<usize>,
}

/// A named family or explicit lattice data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Family(String),
    Explicit(ExplicitGroup),
}

/// Which form to use: the quasi-split one or the twist by a class in `X₊/2X₊`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    Named(String),
    Class { class: Vec<i64> },
}

impl Default for FormSpec {
    fn default() -> Self {
        FormSpec::Named("quasisplit".to_string())
    }
}

/// A job: group, parameter, endoscopic element and sampling settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub group: GroupSpec,
    /// Harish-Chandra parameter; defaults to `ρ` of the based positive system.
    #[serde(default)]
    pub lambda: Option<Vec<Rat>>,
    /// Coordinates of `ν_s` with `s = exp(2πiν_s)`; defaults to `s = 1`.
    #[serde(default)]
    pub s: Option<Vec<Rat>>,
    #[serde(default)]
    pub form: FormSpec,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Builds and validates the root datum.
    pub fn datum(&self) -> Result<BasedRootDatum, ConfigError> {
        let d = match &self.group {
            GroupSpec::Family(name) => BasedRootDatum::family(name).map_err(|e| ConfigError::Group(e.to_string()))?,
            GroupSpec::Explicit(g) => BasedRootDatum::new(
                g.label.clone().unwrap_or_else(|| "explicit".to_string()),
                g.rank,
                g.roots.clone(),
                g.coroots.clone(),
                g.simple.clone(),
            ),
        };
        let violations = d.validate();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
            return Err(ConfigError::Group(msgs.join("; ")));
        }
        Ok(d)
    }

    /// `λ`, defaulting to `ρ`.
    pub fn lambda(&self, datum: &BasedRootDatum) -> Result<Weight, ConfigError> {
        match &self.lambda {
            None => Ok(rho(datum, &datum.based_positive_system())),
            Some(v) if v.len() != datum.rank => Err(ConfigError::Parameter(format!(
                "lambda has {} coordinates, the group has rank {}",
                v.len(),
                datum.rank
            ))),
            Some(v) => Ok(Weight(v.iter().map(|r| r.0).collect())),
        }
    }

    /// The validated discrete-series parameter.
    pub fn parameter(&self) -> Result<DiscreteParameter, ConfigError> {
        let datum = self.datum()?;
        let lambda = self.lambda(&datum)?;
        DiscreteParameter::new(datum, lambda).map_err(|e| ConfigError::Parameter(e.to_string()))
    }

    /// The grading of the requested form.
    pub fn grading(&self, param: &DiscreteParameter) -> Result<Grading, ConfigError> {
        match &self.form {
            FormSpec::Named(n) if n == "quasisplit" => Ok(param.quasisplit.clone()),
            FormSpec::Named(n) => Err(ConfigError::Form(format!("unknown form `{n}` (use \"quasisplit\" or {{\"class\": [...]}})"))),
            FormSpec::Class { class } => {
                if class.len() != param.datum.rank {
                    return Err(ConfigError::Form(format!("class has {} coordinates, expected {}", class.len(), param.datum.rank)));
                }
                let mu = param.quasisplit.mu.add(&Coweight::from_ints(class).scale(Q::new(1, 2)));
                Grading::new(&param.datum, mu).map_err(|e| ConfigError::Form(e.to_string()))
            }
        }
    }

    /// The endoscopic element, defaulting to `s = 1`.
    pub fn s(&self, rank: usize) -> Result<DualTorsion, ConfigError> {
        match &self.s {
            None => Ok(DualTorsion::trivial(rank)),
            Some(v) => DualTorsion::new(rank, Weight(v.iter().map(|r| r.0).collect())).map_err(|e| ConfigError::S(e.to_string())),
        }
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!("3/4".parse::<Rat>().unwrap(), Rat(Q::new(3, 4)));
        assert_eq!("-2".parse::<Rat>().unwrap(), Rat(Q::from_integer(-2)));
        assert!("3/0".parse::<Rat>().unwrap_err().contains("zero denominator"));
        assert!("x".parse::<Rat>().is_err());
        assert_eq!(Rat(Q::new(6, 4)).to_string(), "3/2");
    }

    #[test]
    fn bad_rational_reports_position() {
        let err = JobConfig::from_json("{\n  \"group\": \"A1-sc\",\n  \"lambda\": [\"3/0\"]\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("zero denominator") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn named_and_explicit_groups() {
        let c = JobConfig::from_json(r#"{"group": "C2-sc", "lambda": ["2", "1"]}"#).unwrap();
        assert_eq!(c.parameter().unwrap().weyl.len(), 8);
        let c = JobConfig::from_json(r#"{"group": {"rank": 1, "roots": [[2], [-2]], "coroots": [[1], [-1]], "simple": [0]}, "lambda": ["1"]}"#).unwrap();
        assert_eq!(c.parameter().unwrap().weyl.len(), 2);
        let c = JobConfig::from_json(r#"{"group": "Z9"}"#).unwrap();
        assert!(matches!(c.datum(), Err(ConfigError::Group(_))));
    }

    #[test]
    fn forms() {
        let c = JobConfig::from_json(r#"{"group": "A1-sc", "form": {"class": [1]}}"#).unwrap();
        let p = c.parameter().unwrap();
        assert_eq!(c.grading(&p).unwrap().mu, p.quasisplit.mu.add(&Coweight(vec![Q::new(1, 2)])));
        let c = JobConfig::from_json(r#"{"group": "A1-sc", "form": "split"}"#).unwrap();
        assert!(matches!(c.grading(&p), Err(ConfigError::Form(_))));
    }
}
