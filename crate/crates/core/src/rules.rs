//! Types shared by the circuit and ZX rule engines.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Which side of an equation is matched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Match the left side, replace with the right.
    #[default]
    Lr,
    /// Match the right side, replace with the left.
    Rl,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Lr => Direction::Rl,
            Direction::Rl => Direction::Lr,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lr => "lr",
            Direction::Rl => "rl",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lr" => Ok(Direction::Lr),
            "rl" => Ok(Direction::Rl),
            _ => Err(Error::InvalidScript(format!("direction must be lr or rl, got {s}"))),
        }
    }
}

/// Named integer rule parameters (phases in quarter turns, arities, flags).
pub type Params = BTreeMap<String, i64>;

/// Builds a parameter map from pairs.
pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Typed access to rule parameters with defaults and range checks.
pub(crate) struct ParamReader<'a> {
    pub rule: &'a str,
    pub params: &'a Params,
}

impl<'a> ParamReader<'a> {
    pub fn new(rule: &'a str, params: &'a Params, known: &'a [&'a str]) -> Result<Self> {
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::BadParams { rule: rule.into(), msg: format!("unknown parameter {k}") });
        }
        Ok(ParamReader { rule, params })
    }

    pub fn phase(&self, name: &str) -> Phase {
        Phase::new(self.params.get(name).copied().unwrap_or(0))
    }

    pub fn int(&self, name: &str, default: i64, lo: i64, hi: i64) -> Result<usize> {
        let v = self.params.get(name).copied().unwrap_or(default);
        if v < lo || v > hi {
            return Err(Error::BadParams {
                rule: self.rule.into(),
                msg: format!("{name} = {v} is outside {lo}..={hi}"),
            });
        }
        Ok(v as usize)
    }

    pub fn flag(&self, name: &str, default: bool) -> Result<bool> {
        Ok(self.int(name, default as i64, 0, 1)? == 1)
    }
}

/// Limits on variadic rule instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest leg count of a variadic ZX rule.
    pub max_arity: usize,
    /// Largest `inputs + outputs` of a colour-change circuit instance.
    pub ccirc_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_arity: 6, ccirc_max: 5 }
    }
}
