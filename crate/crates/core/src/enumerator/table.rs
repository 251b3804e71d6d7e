use std::collections::BTreeMap;

use serde::Serialize;

use super::{HaltRecord, Horizon, NonHaltCounts};
use crate::bits::BitString;
use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};

/// Exact halting data for every program of a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityTable {
    horizon: Horizon,
    /// Canonical program order.
    records: Vec<HaltRecord>,
    /// Record indices per output, sorted by (halt step, program length).
    per_output: BTreeMap<BitString, Vec<u32>>,
    non_halt: Vec<NonHaltCounts>,
    machine_hash: u64,
}

/// The time evolution of one output's halting programs: for each distinct
/// halting step, the shortest program seen so far and the accumulated weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History {
    pub steps: Vec<u32>,
    pub min_length: Vec<usize>,
    pub cumulative: Vec<DyadicRational>,
}

impl History {
    fn index_at(&self, t: u64) -> Option<usize> {
        let n = self.steps.partition_point(|&s| s as u64 <= t);
        n.checked_sub(1)
    }

    pub fn k_at(&self, t: u64) -> Option<usize> {
        self.index_at(t).map(|i| self.min_length[i])
    }

    pub fn q_at(&self, t: u64) -> DyadicRational {
        self.index_at(t).map(|i| self.cumulative[i].clone()).unwrap_or_else(DyadicRational::zero)
    }

    pub fn total(&self) -> &DyadicRational {
        self.cumulative.last().expect("history is never empty")
    }

    pub fn k_total(&self) -> usize {
        *self.min_length.last().expect("history is never empty")
    }

    pub fn first_step(&self) -> u32 {
        self.steps[0]
    }

    pub fn last_step(&self) -> u32 {
        *self.steps.last().expect("history is never empty")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodingSpread {
    /// `max_x (K(x) + log2 Q(x))` in bits.
    pub max: f64,
    /// `max_x (K(x) + floor(log2 Q(x)))`, exact.
    pub max_integer_part: i64,
    pub argmax: BitString,
    pub outputs: usize,
}

impl ComplexityTable {
    pub(crate) fn from_parts(
        horizon: Horizon,
        records: Vec<HaltRecord>,
        non_halt: Vec<NonHaltCounts>,
        machine_hash: u64,
    ) -> ComplexityTable {
        let mut per_output: BTreeMap<BitString, Vec<u32>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            per_output.entry(r.output.clone()).or_default().push(i as u32);
        }
        for ids in per_output.values_mut() {
            ids.sort_by_key(|&i| {
                let r = &records[i as usize];
                (r.halt_step, r.program_length, i)
            });
        }
        ComplexityTable { horizon, records, per_output, non_halt, machine_hash }
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn t_max(&self) -> u64 {
        self.horizon.t_max as u64
    }

    pub fn machine_hash(&self) -> u64 {
        self.machine_hash
    }

    /// Halting records in canonical program order.
    pub fn records(&self) -> &[HaltRecord] {
        &self.records
    }

    /// Per instruction count `k` (index `k - 1`).
    pub fn non_halt(&self) -> &[NonHaltCounts] {
        &self.non_halt
    }

    /// Distinct outputs in bit-string order.
    pub fn outputs(&self) -> impl Iterator<Item = &BitString> {
        self.per_output.keys()
    }

    pub fn output_count(&self) -> usize {
        self.per_output.len()
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.per_output.contains_key(x)
    }

    /// Halting records for `x`, sorted by (halt step, program length).
    pub fn records_for<'a>(&'a self, x: &BitString) -> impl Iterator<Item = &'a HaltRecord> + 'a {
        self.per_output.get(x).into_iter().flatten().map(move |&i| &self.records[i as usize])
    }

    pub fn history(&self, x: &BitString) -> Option<History> {
        let ids = self.per_output.get(x)?;
        let mut h = History { steps: Vec::new(), min_length: Vec::new(), cumulative: Vec::new() };
        let mut acc = DyadicRational::zero();
        let mut best = usize::MAX;
        for &i in ids {
            let r = &self.records[i as usize];
            acc += &DyadicRational::pow2_neg(r.program_length as u32);
            best = best.min(r.program_length);
            if h.steps.last() == Some(&r.halt_step) {
                *h.min_length.last_mut().unwrap() = best;
                *h.cumulative.last_mut().unwrap() = acc.clone();
            } else {
                h.steps.push(r.halt_step);
                h.min_length.push(best);
                h.cumulative.push(acc.clone());
            }
        }
        Some(h)
    }

    fn check_budget(&self, t: u64) -> Result<()> {
        if t == 0 || t > self.t_max() {
            return Err(Error::BudgetOutOfRange { requested: t, t_max: self.horizon.t_max });
        }
        Ok(())
    }

    /// Time-bounded complexity: shortest program printing `x` within `t` steps.
    pub fn k_t(&self, x: &BitString, t: u64) -> Result<usize> {
        self.check_budget(t)?;
        self.records_for(x)
            .filter(|r| r.halt_step as u64 <= t)
            .map(|r| r.program_length)
            .min()
            .ok_or_else(|| Error::NotFound(x.clone()))
    }

    /// Time-bounded a-priori probability of `x`.
    pub fn q_t(&self, x: &BitString, t: u64) -> Result<DyadicRational> {
        self.check_budget(t)?;
        Ok(self
            .records_for(x)
            .filter(|r| r.halt_step as u64 <= t)
            .map(|r| DyadicRational::pow2_neg(r.program_length as u32))
            .sum())
    }

    /// Horizon stand-in for K(x): `k_t` at the full step budget.
    pub fn k_model(&self, x: &BitString) -> Result<usize> {
        self.k_t(x, self.t_max())
    }

    /// Horizon stand-in for Q_U(x).
    pub fn q_model(&self, x: &BitString) -> DyadicRational {
        self.q_t(x, self.t_max()).expect("t_max is in range")
    }

    /// Sum of `2^-|p|` over all halting programs.
    pub fn kraft_sum(&self) -> DyadicRational {
        self.records.iter().map(|r| DyadicRational::pow2_neg(r.program_length as u32)).sum()
    }

    /// The empirical Coding Theorem constant: `max_x K(x) + log2 Q(x)`.
    pub fn coding_spread(&self) -> Option<CodingSpread> {
        let mut best: Option<(f64, i64, BitString)> = None;
        let mut best_int = i64::MIN;
        for x in self.per_output.keys() {
            let (spread, int_part) = self.spread_of(x)?;
            best_int = best_int.max(int_part);
            if best.as_ref().is_none_or(|(m, _, _)| spread > *m) {
                best = Some((spread, int_part, x.clone()));
            }
        }
        let (max, _, argmax) = best?;
        Some(CodingSpread { max, max_integer_part: best_int, argmax, outputs: self.per_output.len() })
    }

    /// `(K(x) + log2 Q(x), K(x) + floor(log2 Q(x)))` for one output.
    pub fn spread_of(&self, x: &BitString) -> Option<(f64, i64)> {
        let h = self.history(x)?;
        let k = h.k_total() as i64;
        let q = h.total();
        let floor = q.floor_log2()?;
        // q / 2^floor lies in [1, 2)
        let mantissa = q.mul_pow2(-floor).to_f64();
        let residual = mantissa.log2().clamp(0.0, 1.0);
        Some(((k + floor) as f64 + residual, k + floor))
    }
}

#[cfg(test)]
mod tests {
    use crate::bits::bits;
    use crate::enumerator::{enumerate, Horizon};
    use crate::error::Error;

    #[test]
    fn history_queries_match_direct_queries() {
        let t = enumerate(Horizon::new(4, 40).unwrap(), 3).unwrap();
        for x in t.outputs().take(200) {
            let h = t.history(x).unwrap();
            for step in 1..=40 {
                assert_eq!(h.q_at(step), t.q_t(x, step).unwrap());
                assert_eq!(h.k_at(step), t.k_t(x, step).ok());
            }
        }
    }

    #[test]
    fn budget_range_is_checked() {
        let t = enumerate(Horizon::new(1, 20).unwrap(), 1).unwrap();
        assert!(matches!(t.k_t(&bits(""), 0), Err(Error::BudgetOutOfRange { .. })));
        assert!(matches!(t.q_t(&bits(""), 21), Err(Error::BudgetOutOfRange { .. })));
        assert!(matches!(t.k_model(&bits("0")), Err(Error::NotFound(_))));
        assert!(t.q_model(&bits("0")).is_zero());
    }
}
