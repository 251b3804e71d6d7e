//! Named time-constructible step-budget families, evaluated at a length.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeBound {
    /// `c` steps regardless of length.
    Const(u64),
    /// `c * n`
    Linear(u64),
    /// `n^c`
    Poly(u32),
    /// `2^(c * n)`
    Exp(u32),
}

impl TimeBound {
    /// Saturating evaluation at length `n`; never below 1.
    pub fn eval(&self, n: usize) -> u64 {
        let n = n as u64;
        let v = match *self {
            TimeBound::Const(c) => c,
            TimeBound::Linear(c) => c.saturating_mul(n),
            TimeBound::Poly(c) => n.checked_pow(c).unwrap_or(u64::MAX),
            TimeBound::Exp(c) => {
                let e = (c as u64).saturating_mul(n);
                if e >= 64 {
                    u64::MAX
                } else {
                    1u64 << e
                }
            }
        };
        v.max(1)
    }
}

impl fmt::Display for TimeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeBound::Const(c) => write!(f, "const:{c}"),
            TimeBound::Linear(c) => write!(f, "lin:{c}"),
            TimeBound::Poly(c) => write!(f, "poly:{c}"),
            TimeBound::Exp(c) => write!(f, "exp:{c}"),
        }
    }
}

impl FromStr for TimeBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("time family {s:?}: expected lin:C, poly:C, exp:C or const:C"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        Ok(match kind {
            "const" => TimeBound::Const(arg.parse().map_err(|_| bad())?),
            "lin" => TimeBound::Linear(arg.parse().map_err(|_| bad())?),
            "poly" => TimeBound::Poly(arg.parse().map_err(|_| bad())?),
            "exp" => TimeBound::Exp(arg.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        })
    }
}

/// Significance level as a function of prefix length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Significance {
    Const(u32),
    /// `c * ceil(log2(n + 1))`
    Log(u32),
}

impl Significance {
    pub fn eval(&self, n: usize) -> u32 {
        match *self {
            Significance::Const(c) => c,
            Significance::Log(c) => {
                let l = usize::BITS - n.leading_zeros(); // ceil(log2(n+1))
                c.saturating_mul(l)
            }
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Significance::Const(c) => write!(f, "const:{c}"),
            Significance::Log(c) => write!(f, "log:{c}"),
        }
    }
}

impl FromStr for Significance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("significance family {s:?}: expected const:C or log:C"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let c = arg.parse().map_err(|_| bad())?;
        match kind {
            "const" => Ok(Significance::Const(c)),
            "log" => Ok(Significance::Log(c)),
            _ => Err(bad()),
        }
    }
}
