use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Hurst parameter restricted to the long-memory range `(1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.5 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::domain(
                "hurst",
                format!("{value} is outside the open interval (1/2, 1)"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `H - 1/2`, the exponent that appears throughout the kernel.
    pub(crate) fn excess(self) -> f64 {
        self.0 - 0.5
    }

    pub fn max(self, other: Self) -> Self {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<HurstParam> for f64 {
    fn from(h: HurstParam) -> f64 {
        h.0
    }
}

impl fmt::Display for HurstParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
