//! Deterministic infinite-sequence generators.
//!
//! Random bits come from an entropy pool: pool `s` is the bit stream whose
//! 64-bit word `j` is `splitmix64(s ^ (j * 0x9E3779B97F4A7C15))`, bits taken
//! least-significant first. Every generated bit records which pool bit (if
//! any) it copies, which is what the analytic estimator counts.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::upm::{self, decode_program, Program, RunStatus};

/// Identifies one bit of one entropy pool: `(seed << 64) | index`.
pub type PoolBit = u128;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn pool_bit(seed: u64, index: u64) -> bool {
    let word = splitmix64(seed ^ (index / 64).wrapping_mul(GOLDEN));
    (word >> (index % 64)) & 1 == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceGen {
    RandomPool(u64),
    Zeros,
    ThueMorse,
    /// `a0 b0 a1 b1 ...`
    Interleave(Box<SequenceGen>, Box<SequenceGen>),
    /// `g0 0 g1 0 ...`
    ZeroDilute(Box<SequenceGen>),
    /// Bit `i` is 1 iff the `i`-th program in canonical order halts within
    /// the step cap. A computable stand-in for the halting sequence.
    HaltingChar(u64),
    /// Output of a reference-machine program run for at most `step_cap`
    /// steps, followed by zeros.
    Custom {
        program: Program,
        step_cap: u64,
    },
}

/// The first `n` bits of a sequence together with their pool provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub bits: BitString,
    /// Sorted, distinct pool bits the prefix depends on.
    pub deps: Vec<PoolBit>,
}

impl Prefix {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn concat(&self, other: &Prefix) -> Prefix {
        Prefix { bits: self.bits.concat(&other.bits), deps: union(&self.deps, &other.deps) }
    }
}

pub(crate) fn union(a: &[PoolBit], b: &[PoolBit]) -> Vec<PoolBit> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn difference_len(a: &[PoolBit], b: &[PoolBit]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_err()).count()
}

impl SequenceGen {
    pub fn interleave(a: SequenceGen, b: SequenceGen) -> Self {
        SequenceGen::Interleave(Box::new(a), Box::new(b))
    }

    pub fn dilute(g: SequenceGen) -> Self {
        SequenceGen::ZeroDilute(Box::new(g))
    }

    pub fn custom(program: &BitString, step_cap: u64) -> Result<Self> {
        Ok(SequenceGen::Custom { program: decode_program(program)?, step_cap })
    }

    /// Canonical textual id; parses back to an equal generator.
    pub fn id(&self) -> String {
        self.to_string()
    }

    fn emit(&self, n: usize) -> Vec<(bool, Option<PoolBit>)> {
        match self {
            SequenceGen::RandomPool(seed) => {
                (0..n as u64).map(|i| (pool_bit(*seed, i), Some(((*seed as u128) << 64) | i as u128))).collect()
            }
            SequenceGen::Zeros => vec![(false, None); n],
            SequenceGen::ThueMorse => (0..n).map(|i| (i.count_ones() % 2 == 1, None)).collect(),
            SequenceGen::Interleave(a, b) => {
                let xa = a.emit(n.div_ceil(2));
                let xb = b.emit(n / 2);
                (0..n).map(|i| if i % 2 == 0 { xa[i / 2] } else { xb[i / 2] }).collect()
            }
            SequenceGen::ZeroDilute(g) => {
                let xg = g.emit(n.div_ceil(2));
                (0..n).map(|i| if i % 2 == 0 { xg[i / 2] } else { (false, None) }).collect()
            }
            SequenceGen::HaltingChar(cap) => (0..n as u64).map(|i| (halts_within(i, *cap), None)).collect(),
            SequenceGen::Custom { program, step_cap } => {
                let out = match upm::run(program, *step_cap).status {
                    RunStatus::Halted { output, .. } => output,
                    _ => BitString::new(),
                };
                (0..n).map(|i| (out.as_slice().get(i).copied().unwrap_or(false), None)).collect()
            }
        }
    }

    /// The first `n` bits.
    pub fn prefix(&self, n: usize) -> Prefix {
        let emitted = self.emit(n);
        let bits = BitString::from_bits(emitted.iter().map(|e| e.0).collect());
        let mut deps: Vec<PoolBit> = emitted.iter().filter_map(|e| e.1).collect();
        deps.sort_unstable();
        deps.dedup();
        Prefix { bits, deps }
    }
}

/// Whether the program with canonical index `i` (instruction count
/// ascending, then body bits) halts within `cap` steps.
fn halts_within(mut i: u64, cap: u64) -> bool {
    let mut k = 1usize;
    loop {
        let count = 1u64 << (3 * k);
        if i < count {
            break;
        }
        i -= count;
        k += 1;
    }
    match Program::from_index(k, i) {
        Ok(p) => upm::run(&p, cap).is_halted(),
        Err(_) => false,
    }
}

impl fmt::Display for SequenceGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceGen::RandomPool(s) => write!(f, "pool:{s}"),
            SequenceGen::Zeros => f.write_str("zeros"),
            SequenceGen::ThueMorse => f.write_str("thue-morse"),
            SequenceGen::Interleave(a, b) => write!(f, "interleave({a},{b})"),
            SequenceGen::ZeroDilute(g) => write!(f, "dilute({g})"),
            SequenceGen::HaltingChar(cap) => write!(f, "halting:{cap}"),
            SequenceGen::Custom { program, step_cap } => write!(f, "custom:{}@{step_cap}", program.bits()),
        }
    }
}

impl FromStr for SequenceGen {
    type Err = Error;

    /// Grammar: `pool:SEED | zeros | thue-morse | halting:CAP |
    /// custom:BITS[@CAP] | interleave(G,G) | dilute(G)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::InvalidArgument(format!("generator {s:?}: {why}"));
        if let Some(inner) = s.strip_prefix("interleave(").and_then(|r| r.strip_suffix(')')) {
            let split = top_level_comma(inner).ok_or_else(|| bad("expected two arguments"))?;
            return Ok(SequenceGen::interleave(inner[..split].parse()?, inner[split + 1..].parse()?));
        }
        if let Some(inner) = s.strip_prefix("dilute(").and_then(|r| r.strip_suffix(')')) {
            return Ok(SequenceGen::dilute(inner.parse()?));
        }
        match s {
            "zeros" => return Ok(SequenceGen::Zeros),
            "thue-morse" => return Ok(SequenceGen::ThueMorse),
            _ => {}
        }
        if let Some(seed) = s.strip_prefix("pool:") {
            return Ok(SequenceGen::RandomPool(seed.parse().map_err(|_| bad("bad seed"))?));
        }
        if let Some(cap) = s.strip_prefix("halting:") {
            return Ok(SequenceGen::HaltingChar(cap.parse().map_err(|_| bad("bad step cap"))?));
        }
        if let Some(rest) = s.strip_prefix("custom:") {
            let (prog, cap) = match rest.split_once('@') {
                Some((p, c)) => (p, c.parse().map_err(|_| bad("bad step cap"))?),
                None => (rest, 1 << 16),
            };
            return SequenceGen::custom(&prog.parse()?, cap);
        }
        Err(bad("unknown generator"))
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
