//! Slow, independent reference implementation of the machine used as a test
//! oracle. Shares no code with the library: its own header parser, its own
//! bracket matcher (linear scans instead of a stack), its own reachability
//! fixpoint and a map-backed tape.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Bits = Vec<bool>;

pub fn parse(s: &str) -> Bits {
    s.chars().map(|c| c == '1').collect()
}

pub fn show(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// Every bit string of length `len`, in lexicographic order.
pub fn all_strings(len: usize) -> impl Iterator<Item = Bits> {
    (0u64..1 << len).map(move |v| (0..len).rev().map(|i| v >> i & 1 == 1).collect())
}

/// `Some(opcodes)` if `p` is exactly a length header plus `3k` body bits.
pub fn split_program(p: &[bool]) -> Option<Vec<u8>> {
    let zeros = p.iter().take_while(|b| !**b).count();
    if p.len() < 2 * zeros + 1 {
        return None;
    }
    let k = p[zeros..2 * zeros + 1].iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
    let body = &p[2 * zeros + 1..];
    if k == 0 || body.len() != 3 * k {
        return None;
    }
    Some(body.chunks(3).map(|c| c[0] as u8 * 4 + c[1] as u8 * 2 + c[2] as u8).collect())
}

const JZ: u8 = 4;
const JNZ: u8 = 5;
const HALT: u8 = 6;

fn partner(body: &[u8], i: usize) -> Option<usize> {
    if body[i] == JZ {
        let mut depth = 0i32;
        for (j, &op) in body.iter().enumerate().skip(i) {
            depth += (op == JZ) as i32 - (op == JNZ) as i32;
            if depth == 0 {
                return Some(j);
            }
        }
        None
    } else {
        let mut depth = 0i32;
        for j in (0..=i).rev() {
            depth += (body[j] == JNZ) as i32 - (body[j] == JZ) as i32;
            if depth == 0 {
                return Some(j);
            }
        }
        None
    }
}

fn successors(body: &[u8], i: usize) -> Vec<usize> {
    match body[i] {
        HALT => vec![],
        JZ | JNZ => match partner(body, i) {
            Some(p) => vec![i + 1, p + 1],
            None => vec![],
        },
        _ => vec![i + 1],
    }
}

fn reachable(body: &[u8]) -> Vec<bool> {
    let mut r = vec![false; body.len()];
    r[0] = true;
    loop {
        let mut changed = false;
        for i in 0..body.len() {
            if r[i] {
                for s in successors(body, i) {
                    if s < body.len() && !r[s] {
                        r[s] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted { output: Bits, steps: u64 },
    NoHalt,
    Malformed,
    NotAProgram,
}

/// Runs raw bits for at most `budget` steps.
pub fn run(p: &[bool], budget: u64) -> Outcome {
    let Some(body) = split_program(p) else {
        return Outcome::NotAProgram;
    };
    let r = reachable(&body);
    if (0..body.len()).any(|i| r[i] && (body[i] == JZ || body[i] == JNZ) && partner(&body, i).is_none()) {
        return Outcome::Malformed;
    }
    let mut tape: BTreeMap<i64, bool> = BTreeMap::new();
    let (mut head, mut ip, mut steps) = (0i64, 0usize, 0u64);
    let mut output = Vec::new();
    while ip < body.len() && steps < budget {
        steps += 1;
        let cell = tape.get(&head).copied().unwrap_or(false);
        let mut next = ip + 1;
        match body[ip] {
            0 => head -= 1,
            1 => head += 1,
            2 => {
                tape.insert(head, !cell);
            }
            3 => output.push(cell),
            JZ if !cell => next = partner(&body, ip).unwrap() + 1,
            JNZ if cell => next = partner(&body, ip).unwrap() + 1,
            HALT => return Outcome::Halted { output, steps },
            _ => {}
        }
        ip = next;
    }
    Outcome::NoHalt
}

/// `(program, steps, output)` for every halting program of bit length at most
/// `max_len`, found by running every bit string.
pub fn halting_set(max_len: usize, budget: u64) -> BTreeSet<(Bits, u64, Bits)> {
    let mut out = BTreeSet::new();
    for len in 1..=max_len {
        for p in all_strings(len) {
            if let Outcome::Halted { output, steps } = run(&p, budget) {
                out.insert((p, steps, output));
            }
        }
    }
    out
}

/// Exact `sum 2^-|p|` as a numerator over `2^denominator_exp`.
pub fn weight(programs: impl Iterator<Item = usize>, denominator_exp: usize) -> u128 {
    programs.map(|len| 1u128 << (denominator_exp - len)).sum()
}
