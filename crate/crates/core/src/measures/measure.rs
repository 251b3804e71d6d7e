use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::dyadic::DyadicRational;
use crate::enumerator::ComplexityTable;
use crate::error::{Error, Result};

/// A probability measure on infinite sequences, evaluated on cylinders.
#[derive(Clone, Debug, PartialEq)]
pub enum CylinderMeasure {
    Uniform,
    /// Each bit is 1 with probability `p`, independently.
    Bernoulli(BigRational),
    /// Explicit cylinder weights, validated for additivity.
    Table(BTreeMap<BitString, BigRational>),
}

impl CylinderMeasure {
    pub fn bernoulli(p: BigRational) -> Result<Self> {
        if p <= BigRational::zero() || p >= BigRational::one() {
            return Err(Error::InvalidArgument(format!("Bernoulli parameter {p} outside (0, 1)")));
        }
        Ok(CylinderMeasure::Bernoulli(p))
    }

    /// Checks `mu(ε) = 1` and `mu(x) = mu(x0) + mu(x1)` wherever both
    /// children are present.
    pub fn table(entries: BTreeMap<BitString, BigRational>) -> Result<Self> {
        if entries.get(&BitString::new()) != Some(&BigRational::one()) {
            return Err(Error::InvalidArgument("cylinder table must assign 1 to the empty string".into()));
        }
        for (x, v) in &entries {
            if *v < BigRational::zero() {
                return Err(Error::InvalidArgument(format!("negative weight at {x}")));
            }
            let (mut x0, mut x1) = (x.clone(), x.clone());
            x0.push(false);
            x1.push(true);
            match (entries.get(&x0), entries.get(&x1)) {
                (Some(a), Some(b)) if a + b != *v => {
                    return Err(Error::InvalidArgument(format!("cylinder additivity fails at {x}")))
                }
                (Some(_), None) | (None, Some(_)) => {
                    return Err(Error::InvalidArgument(format!("only one child of {x} is given")))
                }
                _ => {}
            }
        }
        Ok(CylinderMeasure::Table(entries))
    }

    /// `mu(x)`; `None` outside the evaluable range of a table measure.
    pub fn eval(&self, x: &BitString) -> Option<BigRational> {
        match self {
            CylinderMeasure::Uniform => Some(BigRational::new(BigInt::one(), BigInt::one() << x.len())),
            CylinderMeasure::Bernoulli(p) => {
                let q = BigRational::one() - p;
                let ones = x.ones();
                let zeros = x.len() - ones;
                Some(pow(p, ones) * pow(&q, zeros))
            }
            CylinderMeasure::Table(m) => m.get(x).cloned(),
        }
    }
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    num_traits::pow::pow(base.clone(), e)
}

impl FromStr for CylinderMeasure {
    type Err = Error;

    /// `uniform` or `bernoulli:N/D`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(CylinderMeasure::Uniform);
        }
        if let Some(p) = s.strip_prefix("bernoulli:") {
            let p: BigRational =
                p.parse().map_err(|_| Error::InvalidArgument(format!("bad Bernoulli parameter {p:?}")))?;
            return CylinderMeasure::bernoulli(p);
        }
        Err(Error::InvalidArgument(format!("unknown measure {s:?}")))
    }
}

/// A positive weight on strings against which deficiency is measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Measure(CylinderMeasure),
    /// The horizon's a-priori probability itself.
    QModel,
    /// `m^T(z) = 2^-K^T(z)`, a semimeasure.
    TimeBoundedM(u64),
}

impl Weight {
    /// Whether the weight is a validated cylinder measure.
    pub fn measure_validated(&self) -> bool {
        matches!(self, Weight::Measure(_))
    }

    /// `Ok(None)` when the weight vanishes at `x`.
    pub fn eval(&self, table: &ComplexityTable, x: &BitString) -> Result<Option<BigRational>> {
        let v = match self {
            Weight::Measure(m) => m.eval(x),
            Weight::QModel => Some(table.q_model(x).to_rational()),
            Weight::TimeBoundedM(t) => match table.k_t(x, *t) {
                Ok(k) => Some(DyadicRational::pow2_neg(k as u32).to_rational()),
                Err(Error::NotFound(_)) => None,
                Err(e) => return Err(e),
            },
        };
        Ok(v.filter(|v| !v.is_zero()))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// `uniform`, `bernoulli:N/D`, `qmodel` or `mt:T`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "qmodel" {
            return Ok(Weight::QModel);
        }
        if let Some(t) = s.strip_prefix("mt:") {
            let t = t.parse().map_err(|_| Error::InvalidArgument(format!("bad step budget {t:?}")))?;
            return Ok(Weight::TimeBoundedM(t));
        }
        s.parse().map(Weight::Measure)
    }
}
