use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{depth_t, ldepth_in};
use crate::bits::BitString;
use crate::enumerator::{ComplexityTable, Horizon};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: BitString,
    pub details: Value,
}

/// Outcome of a checker: the constant it had to fit, and every point at
/// which the checked relation failed even with that allowance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackReport {
    pub check: String,
    pub horizon: HorizonJson,
    pub fitted_constant: f64,
    pub violations: Vec<Witness>,
    pub skipped: Vec<Value>,
    pub metadata: Map<String, Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HorizonJson {
    pub k_max: u8,
    pub t_max: u32,
}

impl From<Horizon> for HorizonJson {
    fn from(h: Horizon) -> Self {
        HorizonJson { k_max: h.k_max, t_max: h.t_max }
    }
}

impl SlackReport {
    pub fn new(check: &str, horizon: Horizon) -> Self {
        SlackReport {
            check: check.to_string(),
            horizon: horizon.into(),
            fitted_constant: 0.0,
            violations: Vec::new(),
            skipped: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another report for the same check into this one. The fitted
    /// constant becomes the maximum; numeric metadata is summed under the
    /// same key unless the key ends in `_max`, which takes the maximum.
    pub fn absorb(&mut self, other: SlackReport) {
        self.fitted_constant = self.fitted_constant.max(other.fitted_constant);
        self.violations.extend(other.violations);
        self.skipped.extend(other.skipped);
        for (k, v) in other.metadata {
            let merged = match (self.metadata.get(&k), &v) {
                (Some(Value::Number(a)), Value::Number(b)) => {
                    let (a, b) = (a.as_f64().unwrap_or(0.0), b.as_f64().unwrap_or(0.0));
                    let m = if k.ends_with("_max") { a.max(b) } else { a + b };
                    if m.fract() == 0.0 && m.abs() < 9.0e15 {
                        json!(m as i64)
                    } else {
                        json!(m)
                    }
                }
                _ => v,
            };
            self.metadata.insert(k, merged);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// CSV dump of per-output quantities:
/// `x,K,K_T<t>...,Q,depth_T<t>...,ldepth_b<b>...`.
/// Undefined entries are left empty.
pub fn dump_csv(table: &ComplexityTable, steps: &[u64], significances: &[u32]) -> String {
    let mut out = String::from("x,K");
    for t in steps {
        write!(out, ",K_T{t}").unwrap();
    }
    out.push_str(",Q");
    for t in steps {
        write!(out, ",depth_T{t}").unwrap();
    }
    for b in significances {
        write!(out, ",ldepth_b{b}").unwrap();
    }
    out.push('\n');
    for x in table.outputs() {
        let h = table.history(x).expect("listed output");
        write!(out, "{x},{}", h.k_total()).unwrap();
        for &t in steps {
            out.push(',');
            if let Some(k) = h.k_at(t) {
                write!(out, "{k}").unwrap();
            }
        }
        write!(out, ",{}", h.total()).unwrap();
        for &t in steps {
            out.push(',');
            if let Ok(d) = depth_t(table, x, t) {
                write!(out, "{d}").unwrap();
            }
        }
        for &b in significances {
            write!(out, ",{}", ldepth_in(&h, b)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::enumerate;

    #[test]
    fn csv_shape() {
        let t = enumerate(Horizon::new(2, 20).unwrap(), 1).unwrap();
        let csv = dump_csv(&t, &[1, 20], &[0, 1]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,K,K_T1,K_T20,Q,depth_T1,depth_T20,ldepth_b0,ldepth_b1");
        assert_eq!(lines[1], ",4,4,4,11/2^7,0,0,2,1");
        assert_eq!(lines[2], "0,9,,9,1/2^9,,0,2,2");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn absorb_merges_metadata() {
        let h = Horizon::new(1, 1).unwrap();
        let mut a = SlackReport::new("c", h);
        a.metadata.insert("points".into(), json!(2));
        a.metadata.insert("gap_max".into(), json!(3));
        let mut b = SlackReport::new("c", h);
        b.fitted_constant = 1.5;
        b.metadata.insert("points".into(), json!(5));
        b.metadata.insert("gap_max".into(), json!(1));
        a.absorb(b);
        assert_eq!(a.fitted_constant, 1.5);
        assert_eq!(a.metadata["points"], json!(7));
        assert_eq!(a.metadata["gap_max"], json!(3));
    }
}
