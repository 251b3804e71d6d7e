//! Whole-horizon verification suites.

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::checks::{deficiency_identity_check, sweep, theorem_part_i, theorem_part_ii, PartIiOptions};
use super::{SlackReport, Witness};
use crate::bits::BitString;
use crate::dyadic::DyadicRational;
use crate::enumerator::ComplexityTable;
use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kraft,
    PrefixFree,
    Coding,
    Lemma4,
    Thm3i,
    Thm3ii,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Kraft, Suite::PrefixFree, Suite::Coding, Suite::Lemma4, Suite::Thm3i, Suite::Thm3ii];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kraft => "kraft",
            Suite::PrefixFree => "prefixfree",
            Suite::Coding => "coding",
            Suite::Lemma4 => "lemma4",
            Suite::Thm3i => "thm3i",
            Suite::Thm3ii => "thm3ii",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Largest coding spread accepted by `coding`.
    pub spread_cap: f64,
    pub sigma_cap: u32,
    /// Significances `0..=b_max` are checked by `lemma4`.
    pub b_max: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { spread_cap: 16.0, sigma_cap: 24, b_max: 32 }
    }
}

pub fn run_suite(table: &ComplexityTable, suite: Suite, opts: SuiteOptions, exec: Exec) -> Result<SlackReport> {
    let spread = table
        .coding_spread()
        .ok_or_else(|| Error::InvalidArgument("enumeration table has no halting programs".into()))?;
    let ts: Vec<u64> = (1..=table.t_max()).collect();
    let mut report = match suite {
        Suite::Kraft => {
            let mut r = SlackReport::new("kraft", table.horizon());
            let sum = table.kraft_sum();
            if sum > DyadicRational::one() {
                r.violations.push(Witness { x: BitString::new(), details: json!({"kraft_sum": sum.to_string()}) });
            }
            r.metadata.insert("kraft_sum".into(), json!(sum.to_string()));
            r.metadata.insert("halted_programs".into(), json!(table.records().len()));
            r
        }
        Suite::PrefixFree => {
            let mut r = SlackReport::new("prefixfree", table.horizon());
            let mut programs: Vec<&BitString> = table.records().iter().map(|rec| &rec.program).collect();
            programs.sort();
            // In sorted order a program's extensions follow it directly.
            for w in programs.windows(2) {
                if w[0].is_prefix_of(w[1]) {
                    r.violations.push(Witness { x: w[0].clone(), details: json!({"extension": w[1]}) });
                }
            }
            r.metadata.insert("programs".into(), json!(programs.len()));
            r
        }
        Suite::Coding => {
            let mut r = SlackReport::new("coding", table.horizon());
            r.fitted_constant = spread.max;
            if spread.max.is_nan() || spread.max > opts.spread_cap {
                r.violations.push(Witness { x: spread.argmax.clone(), details: json!({"spread": spread.max}) });
            }
            r.metadata.insert("spread_cap".into(), json!(opts.spread_cap));
            r.metadata.insert("integer_part".into(), json!(spread.max_integer_part));
            r.metadata.insert("argmax".into(), json!(spread.argmax));
            r.metadata.insert("outputs".into(), json!(spread.outputs));
            r
        }
        Suite::Lemma4 => {
            let bs: Vec<u32> = (0..=opts.b_max).collect();
            sweep(table, "lemma4", exec, |x| deficiency_identity_check(table, x, &bs, &ts, spread.max))?
        }
        Suite::Thm3i => sweep(table, "thm3i", exec, |x| theorem_part_i(table, x, &ts, spread.max + 1.0))?,
        Suite::Thm3ii => sweep(table, "thm3ii", exec, |x| {
            let mut total = SlackReport::new("thm3ii", table.horizon());
            for &t in &ts {
                if table.k_t(x, t).is_ok() {
                    total.absorb(theorem_part_ii(table, x, t, PartIiOptions { sigma_cap: opts.sigma_cap })?);
                }
            }
            Ok(total)
        })?,
    };
    report.metadata.insert("coding_spread".into(), json!(spread.max));
    Ok(report)
}
