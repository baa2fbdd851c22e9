//! Phases restricted to integer multiples of a quarter turn.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An angle `k * pi/2` with `k` taken modulo 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "i64", into = "i64")]
pub struct Phase(u8);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const HALF: Phase = Phase(1);
    pub const PI: Phase = Phase(2);

    /// Builds a phase from any integer number of quarter turns.
    pub fn new(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    /// Number of quarter turns in `0..4`.
    pub fn quarters(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = Phase> {
        (0..4).map(Phase)
    }
}

impl From<i64> for Phase {
    fn from(k: i64) -> Self {
        Phase::new(k)
    }
}

impl From<Phase> for i64 {
    fn from(p: Phase) -> i64 {
        p.0 as i64
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((4 - self.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
