//! Super-deepness diagnostics at finite prefix lengths.
//!
//! For each prefix `x = α_n` and each significance/time pair `(s, t)` three
//! conditions are evaluated exactly on an enumeration table:
//!
//! 1. `ldepth_{s(n)}(x) > t(n)`
//! 2. `depth^{t(n)}(x) > s(n)`
//! 3. `Q(x) >= 2^{s(n)} Q^{t(n)}(x)`
//!
//! Finite `n` cannot certify super-deepness; the report only checks that the
//! three conditions relate the way the asymptotic equivalences require:
//! (1) and (3) coincide except at exact equality, (3) at significance
//! `s + c2` forces `depth >= s` with `c2` the rounded-up coding spread, and
//! `depth >= s + c1` forces (3) for a fitted `c1`.

use serde::Serialize;

use super::gen::SequenceGen;
use crate::bits::BitString;
use crate::enumerator::ComplexityTable;
use crate::error::{Error, Result};
use crate::measures::{depth_t, ldepth};
use crate::timebound::{Significance, TimeBound};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagPoint {
    pub n: usize,
    pub x: BitString,
    pub s_family: String,
    pub t_family: String,
    pub s: u32,
    pub t: u64,
    /// `t(n)` exceeded the table's step budget and was clamped.
    pub t_clamped: bool,
    pub ldepth: u64,
    /// `None` when nothing prints `x` within `t` (infinite depth).
    pub depth: Option<i64>,
    pub ldepth_exceeds_t: bool,
    pub depth_exceeds_s: bool,
    pub probability_gap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperDeepReport {
    pub generator: String,
    pub demonstrative: bool,
    pub points: Vec<DiagPoint>,
    /// Shift making `depth >= s + c1` imply condition 3 at every point.
    pub fitted_c1: i64,
    /// Shift used for `condition 3 at s + c2 => depth >= s`.
    pub c2: i64,
    pub c1_cap: i64,
    pub violations: Vec<String>,
}

impl SuperDeepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `Q(x) >= 2^s Q^t(x)`, exactly.
fn probability_gap(table: &ComplexityTable, x: &BitString, s: i64, t: u64) -> Result<bool> {
    let q = table.q_model(x);
    let qt = table.q_t(x, t)?;
    Ok(q >= qt.mul_pow2(s))
}

pub fn super_deep_diag(
    gen: &SequenceGen,
    table: &ComplexityTable,
    s_family: &[Significance],
    t_family: &[TimeBound],
    grid: &[usize],
) -> Result<SuperDeepReport> {
    let spread = table.coding_spread().ok_or_else(|| Error::InvalidArgument("empty enumeration table".into()))?;
    let c2 = spread.max.ceil() as i64;
    let c1_cap = 24;
    let mut points = Vec::new();
    let mut violations = Vec::new();
    // Largest `depth - s` seen where condition 3 fails; c1 must exceed it.
    let mut worst_gap: Option<i64> = None;

    for &n in grid {
        let x = gen.prefix(n).bits;
        if !table.contains(&x) {
            return Err(Error::EstimatorRefused(format!(
                "prefix of length {n} ({x}) is outside the enumeration horizon"
            )));
        }
        for s_fn in s_family {
            for t_fn in t_family {
                let s = s_fn.eval(n);
                let raw_t = t_fn.eval(n);
                let t = raw_t.min(table.t_max());
                let ld = ldepth(table, &x, s)?;
                let depth = match depth_t(table, &x, t) {
                    Ok(d) => Some(d),
                    Err(Error::NotFound(_)) => None,
                    Err(e) => return Err(e),
                };
                let c1_holds = ld > t;
                let c3_holds = probability_gap(table, &x, s as i64, t)?;
                let point = DiagPoint {
                    n,
                    x: x.clone(),
                    s_family: s_fn.to_string(),
                    t_family: t_fn.to_string(),
                    s,
                    t,
                    t_clamped: raw_t > t,
                    ldepth: ld,
                    depth,
                    ldepth_exceeds_t: c1_holds,
                    depth_exceeds_s: depth.is_none_or(|d| d > s as i64),
                    probability_gap: c3_holds,
                };

                if c1_holds && !c3_holds {
                    violations.push(format!("n={n} s={s} t={t}: ldepth > t but Q < 2^s Q^t"));
                }
                let exact_tie = table.q_model(&x) == table.q_t(&x, t)?.mul_pow2(s as i64);
                if c3_holds && !c1_holds && !exact_tie {
                    violations.push(format!("n={n} s={s} t={t}: Q >= 2^s Q^t but ldepth <= t"));
                }
                if let Some(d) = depth {
                    if probability_gap(table, &x, s as i64 + c2, t)? && d < s as i64 {
                        violations.push(format!("n={n} s={s} t={t}: Q >= 2^(s+{c2}) Q^t but depth {d} < s"));
                    }
                    if !c3_holds {
                        worst_gap = Some(worst_gap.map_or(d - s as i64, |w| w.max(d - s as i64)));
                    }
                }
                points.push(point);
            }
        }
    }

    let fitted_c1 = worst_gap.map_or(0, |w| (w + 1).max(0));
    if fitted_c1 > c1_cap {
        violations.push(format!("fitted c1 = {fitted_c1} exceeds cap {c1_cap}"));
    }
    Ok(SuperDeepReport { generator: gen.id(), demonstrative: true, points, fitted_c1, c2, c1_cap, violations })
}
