//! Run configuration: a JSON document whose keys match the CLI flags.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bump::Grade;
use crate::classical::Reference;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BankChoice {
    Journe,
    Example,
    Classical(Reference),
}

impl fmt::Display for BankChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BankChoice::Journe => f.write_str("journe"),
            BankChoice::Example => f.write_str("example"),
            BankChoice::Classical(r) => write!(f, "classical:{r}"),
        }
    }
}

impl FromStr for BankChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "journe" => Ok(BankChoice::Journe),
            "example" => Ok(BankChoice::Example),
            _ => match s.strip_prefix("classical:") {
                Some(r) => Ok(BankChoice::Classical(r.parse()?)),
                None => Err(Error::Parse(format!(
                    "bank must be journe, example or classical:haar|shannon|cohen, got {s:?}"
                ))),
            },
        }
    }
}

impl Serialize for BankChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BankChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("format must be csv or json, got {s:?}"))),
        }
    }
}

fn grade_str<S: serde::Serializer>(g: &Grade, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

fn grade_de<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Grade, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        N(u32),
    }
    match Raw::deserialize(d)? {
        Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        Raw::N(n) => n.to_string().parse().map_err(serde::de::Error::custom),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub bank: BankChoice,
    pub r: u32,
    #[serde(serialize_with = "grade_str", deserialize_with = "grade_de")]
    pub grade: Grade,
    /// Points per sampled curve and per verification grid.
    pub grid: usize,
    /// Overrides every floating-point tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    /// Budget for each truncated tail.
    pub tail_tol: f64,
    /// Energy budget beyond the time-domain cutoff.
    pub energy_tol: f64,
    /// Explicit frequency cutoff for time-domain sampling.
    pub cutoff: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bank: BankChoice::Example,
            r: 1,
            grade: Grade::Infinite,
            grid: 256,
            tol: None,
            seed: 7,
            out: PathBuf::from("out"),
            format: Format::Csv,
            tail_tol: 1e-9,
            energy_tol: 1e-8,
            cutoff: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 64 {
            return Err(Error::Config(format!("grid must be at least 64, got {}", self.grid)));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        if let Some(t) = self.tol {
            positive("tol", t)?;
        }
        positive("tail_tol", self.tail_tol)?;
        positive("energy_tol", self.energy_tol)?;
        if let Some(c) = self.cutoff {
            positive("cutoff", c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let c = RunConfig { bank: BankChoice::Classical(Reference::Haar), grade: Grade::Finite(3), ..Default::default() };
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"classical:haar\""));
        assert!(s.contains("\"grade\":\"3\""));
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_and_invalid() {
        let c: RunConfig = serde_json::from_str(r#"{"bank": "journe", "grade": 2}"#).unwrap();
        assert_eq!(c.bank, BankChoice::Journe);
        assert_eq!(c.grade, Grade::Finite(2));
        assert!(serde_json::from_str::<RunConfig>(r#"{"bank": "meyer"}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"colour": 1}"#).is_err());
        assert!(RunConfig { grid: 10, ..Default::default() }.validate().is_err());
        assert!(RunConfig { tol: Some(-1.0), ..Default::default() }.validate().is_err());
    }
}
