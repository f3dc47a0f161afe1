//! Positive reals stored by their natural logarithm.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Beyond this magnitude of `ln` a plain `f64` is refused.
pub const LN_LIMIT: f64 = 700.0;

/// A nonnegative real `e^ln`, or exact zero.
///
/// Products, quotients and powers are additions in log space; sums use
/// log-sum-exp. Constants like `exp(2^{2n+11}…)` stay finite here long after
/// `f64` has given up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNumber {
    ln: f64,
    zero: bool,
}

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber { ln: f64::NEG_INFINITY, zero: true };
    pub const ONE: LogNumber = LogNumber { ln: 0.0, zero: false };

    /// Wraps `e^ln`. `ln` must be finite.
    pub fn from_ln(ln: f64) -> Result<Self> {
        if !ln.is_finite() {
            return Err(Error::Overflow { log_value: ln });
        }
        Ok(Self { ln, zero: false })
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x == 0.0 {
            Ok(Self::ZERO)
        } else if x > 0.0 && x.is_finite() {
            Ok(Self { ln: x.ln(), zero: false })
        } else {
            Err(Error::Domain(format!("{x} is not a finite nonnegative real")))
        }
    }

    /// `2^k` for any real `k`.
    pub fn pow2(k: f64) -> Self {
        Self { ln: k * std::f64::consts::LN_2, zero: false }
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(self) -> f64 {
        if self.zero { f64::NEG_INFINITY } else { self.ln }
    }

    pub fn log10(self) -> f64 {
        self.ln() / std::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.zero
    }

    /// Plain value, refused when `|ln| > 700`.
    pub fn to_f64(self) -> Result<f64> {
        if self.zero {
            return Ok(0.0);
        }
        if self.ln.abs() > LN_LIMIT {
            return Err(Error::Overflow { log_value: self.ln });
        }
        Ok(self.ln.exp())
    }

    pub fn is_representable(self) -> bool {
        self.to_f64().is_ok()
    }

    pub fn powf(self, e: f64) -> Self {
        if self.zero {
            return if e == 0.0 { Self::ONE } else { Self::ZERO };
        }
        Self { ln: self.ln * e, zero: false }
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn add(self, other: Self) -> Self {
        if self.zero {
            return other;
        }
        if other.zero {
            return self;
        }
        let (hi, lo) = if self.ln >= other.ln { (self.ln, other.ln) } else { (other.ln, self.ln) };
        Self { ln: hi + (lo - hi).exp().ln_1p(), zero: false }
    }

    pub fn scale(self, c: f64) -> Result<Self> {
        Ok(self * Self::from_f64(c)?)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other { self } else { other }
    }

    /// `ln(self) - ln(other)`; the log of the ratio without forming it.
    pub fn log_gap(self, other: Self) -> f64 {
        self.ln() - other.ln()
    }
}

impl Mul for LogNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.zero || rhs.zero {
            Self::ZERO
        } else {
            Self { ln: self.ln + rhs.ln, zero: false }
        }
    }
}

impl Div for LogNumber {
    type Output = Self;
    /// Division by zero yields `+inf` in `ln`; callers never divide by a
    /// constant that can vanish.
    fn div(self, rhs: Self) -> Self {
        if self.zero {
            Self::ZERO
        } else {
            Self { ln: self.ln - rhs.ln(), zero: false }
        }
    }
}

impl PartialOrd for LogNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.ln().partial_cmp(&other.ln())
    }
}

impl fmt::Display for LogNumber {
    /// Scientific notation when representable, `10^x` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64() {
            Ok(v) => write!(f, "{v:.6e}"),
            Err(_) => write!(f, "10^{:.6}", self.log10()),
        }
    }
}
