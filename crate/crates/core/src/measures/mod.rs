//! Finite-string measures over a complexity table: computational depth,
//! logical depth, randomness deficiency and mutual information, plus the
//! checkers that relate them.

mod checks;
mod measure;
mod report;
mod suite;

pub use checks::{
    deficiency_identity_check, mutual_info_sweep, sweep, theorem_part_i, theorem_part_ii, uniform_deficiency_mass,
    MutualInfoSweep, PartIiOptions,
};
pub use measure::{CylinderMeasure, Weight};
pub use report::{dump_csv, SlackReport, Witness};
pub use suite::{run_suite, Suite, SuiteOptions};

use crate::bits::BitString;
use crate::enumerator::{ComplexityTable, History};
use crate::error::{Error, Result};
use crate::upm::encode_gamma;

/// `K^T(x) - K(x)`, non-negative.
pub fn depth_t(table: &ComplexityTable, x: &BitString, t: u64) -> Result<i64> {
    let kt = table.k_t(x, t)?;
    let k = table.k_model(x)?;
    Ok(kt as i64 - k as i64)
}

/// Least step budget at which programs halting within it carry at least a
/// `2^-b` fraction of the output's total weight.
pub fn ldepth(table: &ComplexityTable, x: &BitString, b: u32) -> Result<u64> {
    let h = table.history(x).ok_or_else(|| Error::NotFound(x.clone()))?;
    Ok(ldepth_in(&h, b) as u64)
}

pub(crate) fn ldepth_in(h: &History, b: u32) -> u32 {
    let total = h.total();
    h.cumulative
        .iter()
        .position(|c| c.mul_pow2(b as i64) >= *total)
        .map(|i| h.steps[i])
        .expect("the full sum always reaches the total")
}

/// `floor(log2(Q(x) / w(x)))`, exact.
pub fn deficiency(table: &ComplexityTable, x: &BitString, weight: &Weight) -> Result<i64> {
    let q = table.q_model(x);
    if q.is_zero() {
        return Err(Error::NotFound(x.clone()));
    }
    let w = weight.eval(table, x)?.ok_or_else(|| Error::ZeroWeight(x.clone()))?;
    Ok(crate::dyadic::floor_log2_rational_ratio(&q.to_rational(), &w))
}

/// Output string standing for the pair `(x, y)`: `gamma(|x|+1) ++ x ++ y`.
pub fn pair(x: &BitString, y: &BitString) -> BitString {
    let mut out = encode_gamma(x.len() as u64 + 1).expect("positive");
    out.extend_from(x);
    out.extend_from(y);
    out
}

/// `K(x) + K(y) - K(x, y)`.
pub fn mutual_info(table: &ComplexityTable, x: &BitString, y: &BitString) -> Result<i64> {
    let kx = table.k_model(x)? as i64;
    let ky = table.k_model(y)? as i64;
    let kxy = table.k_model(&pair(x, y))? as i64;
    Ok(kx + ky - kxy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::enumerator::{enumerate, Horizon};

    fn small() -> ComplexityTable {
        enumerate(Horizon::new(2, 20).unwrap(), 1).unwrap()
    }

    #[test]
    fn depth_examples() {
        let t = small();
        assert_eq!(depth_t(&t, &bits(""), 20).unwrap(), 0);
        assert_eq!(depth_t(&t, &bits(""), 1).unwrap(), 0);
        assert!(matches!(depth_t(&t, &bits("0"), 1), Err(Error::NotFound(_))));
    }

    #[test]
    fn ldepth_examples() {
        let t = small();
        assert_eq!(ldepth(&t, &bits(""), 0).unwrap(), 2);
        assert_eq!(ldepth(&t, &bits(""), 1).unwrap(), 1);
        // single program (OUT, HALT) halting at step 2
        for b in 0..5 {
            assert_eq!(ldepth(&t, &bits("0"), b).unwrap(), 2);
        }
        assert!(ldepth(&t, &bits("1"), 0).is_err());
    }

    #[test]
    fn deficiency_examples() {
        let t = small();
        let uniform = Weight::Measure(CylinderMeasure::Uniform);
        assert_eq!(deficiency(&t, &bits("0"), &uniform).unwrap(), -8);
        assert_eq!(deficiency(&t, &bits(""), &uniform).unwrap(), -4);
        for x in t.outputs() {
            assert_eq!(deficiency(&t, x, &Weight::QModel).unwrap(), 0);
        }
        assert!(matches!(deficiency(&t, &bits("1"), &uniform), Err(Error::NotFound(_))));
        // m^1 has no mass at "0"
        assert!(matches!(deficiency(&t, &bits("0"), &Weight::TimeBoundedM(1)), Err(Error::ZeroWeight(_))));
    }

    #[test]
    fn pairing() {
        assert_eq!(pair(&bits(""), &bits("")), bits("1"));
        assert_eq!(pair(&bits("1"), &bits("0")), bits("01010"));
    }
}
