//! Exhaustive enumeration of every program up to a horizon.
//!
//! Programs are visited in canonical order: instruction count ascending,
//! then body bits lexicographically. Work is split into contiguous shards of
//! that order; each shard is simulated independently and the partial results
//! are concatenated in shard order, so the table never depends on the shard
//! count or the scheduling.

mod cache;
mod table;

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use table::{CodingSpread, ComplexityTable, History};

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::upm::{self, Program, RunStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Horizon {
    pub k_max: u8,
    pub t_max: u32,
}

impl Horizon {
    pub fn new(k_max: u8, t_max: u32) -> Result<Horizon> {
        if k_max == 0 {
            return Err(Error::InvalidHorizon("k_max must be at least 1".into()));
        }
        if t_max == 0 {
            return Err(Error::InvalidHorizon("t_max must be at least 1".into()));
        }
        Ok(Horizon { k_max, t_max })
    }

    /// Number of bodies with at most `k_max` instructions.
    pub fn program_count(&self) -> u128 {
        (1..=self.k_max as u32).map(|k| 1u128.checked_shl(3 * k).unwrap_or(u128::MAX)).fold(0u128, u128::saturating_add)
    }

    /// Length of the longest program in the horizon.
    pub fn max_program_length(&self) -> usize {
        upm::program_length(self.k_max as u64)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_programs: u128,
}

impl Default for Limits {
    fn default() -> Self {
        // k_max = 8
        Limits { max_programs: 1 << 25 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HaltRecord {
    pub program: BitString,
    pub program_length: usize,
    pub halt_step: u32,
    pub output: BitString,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NonHaltCounts {
    pub out_of_gas: u64,
    pub diverged_static: u64,
    pub malformed: u64,
}

impl NonHaltCounts {
    pub fn total(&self) -> u64 {
        self.out_of_gas + self.diverged_static + self.malformed
    }

    fn absorb(&mut self, other: &NonHaltCounts) {
        self.out_of_gas += other.out_of_gas;
        self.diverged_static += other.diverged_static;
        self.malformed += other.malformed;
    }
}

struct ShardResult {
    records: Vec<HaltRecord>,
    /// Indexed by `k - 1`.
    non_halt: Vec<NonHaltCounts>,
}

/// A contiguous range `[start, end)` of body indices at instruction count `k`.
#[derive(Clone, Copy, Debug)]
struct Segment {
    k: usize,
    start: u64,
    end: u64,
}

fn shard_plan(horizon: Horizon, shards: usize) -> Vec<Vec<Segment>> {
    let total: u64 = horizon.program_count() as u64;
    let per = total.div_ceil(shards as u64).max(1);
    let mut plan = vec![Vec::new(); shards];
    // Walk the canonical order once, cutting it into `shards` runs of `per`.
    let mut global = 0u64;
    for k in 1..=horizon.k_max as usize {
        let count = 1u64 << (3 * k);
        let mut local = 0u64;
        while local < count {
            let shard = (global / per) as usize;
            let room = per - global % per;
            let take = room.min(count - local);
            plan[shard.min(shards - 1)].push(Segment { k, start: local, end: local + take });
            local += take;
            global += take;
        }
    }
    plan
}

fn simulate_shard(segments: &[Segment], horizon: Horizon) -> ShardResult {
    let mut result =
        ShardResult { records: Vec::new(), non_halt: vec![NonHaltCounts::default(); horizon.k_max as usize] };
    for seg in segments {
        let counts = &mut result.non_halt[seg.k - 1];
        for index in seg.start..seg.end {
            let program = match Program::from_index(seg.k, index) {
                Ok(p) => p,
                Err(_) => {
                    counts.malformed += 1;
                    continue;
                }
            };
            let outcome = upm::run(&program, horizon.t_max as u64);
            match outcome.status {
                RunStatus::Halted { output, halt_step } => result.records.push(HaltRecord {
                    program: program.bits(),
                    program_length: outcome.program_length,
                    halt_step: halt_step as u32,
                    output,
                }),
                RunStatus::OutOfGas => counts.out_of_gas += 1,
                RunStatus::DivergedStatic => counts.diverged_static += 1,
                RunStatus::Malformed => counts.malformed += 1,
            }
        }
    }
    result
}

/// Enumerates and simulates every program of the horizon.
pub fn enumerate(horizon: Horizon, shards: usize) -> Result<ComplexityTable> {
    enumerate_with(horizon, shards, Exec::default(), Limits::default())
}

pub fn enumerate_with(horizon: Horizon, shards: usize, exec: Exec, limits: Limits) -> Result<ComplexityTable> {
    let horizon = Horizon::new(horizon.k_max, horizon.t_max)?;
    if shards == 0 {
        return Err(Error::InvalidArgument("shard count must be positive".into()));
    }
    let programs = horizon.program_count();
    if programs > limits.max_programs {
        return Err(Error::ResourceLimit { programs, limit: limits.max_programs });
    }
    let plan = shard_plan(horizon, shards);
    let partials = exec.map(plan, |segments| simulate_shard(&segments, horizon));

    let mut records = Vec::new();
    let mut non_halt = vec![NonHaltCounts::default(); horizon.k_max as usize];
    for part in partials {
        records.extend(part.records);
        for (acc, c) in non_halt.iter_mut().zip(&part.non_halt) {
            acc.absorb(c);
        }
    }
    Ok(ComplexityTable::from_parts(horizon, records, non_halt, upm::machine_hash()))
}
