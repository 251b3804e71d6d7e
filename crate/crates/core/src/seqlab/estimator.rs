use std::fmt;

use super::compress::lz_cost;
use super::gen::{difference_len, union, Prefix};
use crate::enumerator::ComplexityTable;
use crate::error::{Error, Result};
use crate::measures::pair;

/// Passes used by the compressor when no budget is given.
pub const COMPRESS_FULL_PASSES: u32 = 8;

/// `ceil(2 log2(n + 2))`, the self-delimiting length overhead.
pub fn log_term(n: usize) -> u64 {
    (2.0 * ((n + 2) as f64).log2()).ceil() as u64
}

/// Stand-ins for prefix complexity, joint complexity and conditional
/// complexity of finite prefixes.
#[derive(Clone, Copy)]
pub enum Estimator<'a> {
    /// Exact horizon complexity from an enumeration table; refuses prefixes
    /// no in-horizon program prints. `steps` bounds running time.
    Exact { table: &'a ComplexityTable, steps: Option<u64> },
    /// LZ78 description length with a pass budget.
    Compress { passes: u32 },
    /// Counts the distinct entropy-pool bits a prefix depends on.
    Oracle,
}

impl fmt::Debug for Estimator<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl<'a> Estimator<'a> {
    pub fn exact(table: &'a ComplexityTable) -> Self {
        Estimator::Exact { table, steps: None }
    }

    pub fn compress() -> Self {
        Estimator::Compress { passes: COMPRESS_FULL_PASSES }
    }

    pub fn name(&self) -> String {
        match self {
            Estimator::Exact { steps: None, .. } => "exact".into(),
            Estimator::Exact { steps: Some(t), .. } => format!("exact@{t}"),
            Estimator::Compress { passes } => format!("compress:{passes}"),
            Estimator::Oracle => "oracle".into(),
        }
    }

    /// The same estimator with a resource budget (steps for `Exact`, passes
    /// for `Compress`), or unbudgeted for `None`. `Oracle` has no budget.
    pub fn at_budget(&self, budget: Option<u64>) -> Self {
        match *self {
            Estimator::Exact { table, .. } => Estimator::Exact { table, steps: budget },
            Estimator::Compress { .. } => Estimator::Compress {
                passes: budget.map_or(COMPRESS_FULL_PASSES, |b| b.clamp(1, u32::MAX as u64) as u32),
            },
            Estimator::Oracle => Estimator::Oracle,
        }
    }

    fn exact_k(table: &ComplexityTable, steps: Option<u64>, x: &crate::bits::BitString) -> Result<f64> {
        let t = steps.unwrap_or(table.t_max());
        match table.k_t(x, t) {
            Ok(k) => Ok(k as f64),
            Err(Error::NotFound(_)) => {
                Err(Error::EstimatorRefused(format!("no program within the horizon prints {x} in {t} steps")))
            }
            Err(e) => Err(e),
        }
    }

    pub fn estimate(&self, x: &Prefix) -> Result<f64> {
        Ok(match *self {
            Estimator::Exact { table, steps } => Self::exact_k(table, steps, &x.bits)?,
            Estimator::Compress { passes } => lz_cost(x.bits.as_slice(), passes) as f64,
            Estimator::Oracle => (x.deps.len() as u64 + log_term(x.len())) as f64,
        })
    }

    pub fn joint(&self, x: &Prefix, y: &Prefix) -> Result<f64> {
        Ok(match *self {
            Estimator::Exact { table, steps } => Self::exact_k(table, steps, &pair(&x.bits, &y.bits))?,
            Estimator::Compress { passes } => lz_cost(x.bits.concat(&y.bits).as_slice(), passes) as f64,
            Estimator::Oracle => (union(&x.deps, &y.deps).len() as u64 + log_term(x.len() + y.len())) as f64,
        })
    }

    /// Complexity of `x` given `y`.
    pub fn cond(&self, x: &Prefix, y: &Prefix) -> Result<f64> {
        Ok(match *self {
            Estimator::Exact { .. } | Estimator::Compress { .. } => {
                let yx = match *self {
                    Estimator::Exact { table, steps } => Self::exact_k(table, steps, &pair(&y.bits, &x.bits))?,
                    _ => self.estimate(&y.concat(x))?,
                };
                (yx - self.estimate(y)?).max(0.0)
            }
            Estimator::Oracle => (difference_len(&x.deps, &y.deps) as u64 + log_term(x.len())) as f64,
        })
    }

    /// `estimate(x) + estimate(y) - joint(x, y)`.
    pub fn mutual(&self, x: &Prefix, y: &Prefix) -> Result<f64> {
        Ok(self.estimate(x)? + self.estimate(y)? - self.joint(x, y)?)
    }
}
