//! The reference universal prefix machine.
//!
//! A program is `gamma(k) ++ body`, where `gamma` is the Elias-gamma code of
//! the instruction count `k` and `body` is `k` three-bit opcodes. The header
//! is read in full before execution starts, so the set of well-formed
//! programs (and in particular the set of halting programs) is prefix-free.
//!
//! The machine has a two-way infinite work tape of bit cells, initially all
//! zero, a single head, and an append-only output tape.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// One three-bit instruction. The discriminant is the opcode value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Opcode {
    Left = 0b000,
    Right = 0b001,
    Flip = 0b010,
    Out = 0b011,
    Jz = 0b100,
    Jnz = 0b101,
    Halt = 0b110,
    Noop = 0b111,
}

impl Opcode {
    pub const ALL: [Opcode; 8] =
        [Opcode::Left, Opcode::Right, Opcode::Flip, Opcode::Out, Opcode::Jz, Opcode::Jnz, Opcode::Halt, Opcode::Noop];

    pub fn from_code(code: u8) -> Opcode {
        Opcode::ALL[(code & 0b111) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Left => "LEFT",
            Opcode::Right => "RIGHT",
            Opcode::Flip => "FLIP",
            Opcode::Out => "OUT",
            Opcode::Jz => "JZ",
            Opcode::Jnz => "JNZ",
            Opcode::Halt => "HALT",
            Opcode::Noop => "NOOP",
        }
    }
}

/// Canonical description of the instruction set. Its FNV-1a hash stamps caches.
pub const ISA_DESCRIPTION: &str = "aidepth reference prefix machine v1\n\
program: gamma(k) ++ k 3-bit opcodes, gamma(k) = (len(bin(k))-1 zeros) ++ bin(k)\n\
000 LEFT  head -= 1\n\
001 RIGHT head += 1\n\
010 FLIP  cell ^= 1\n\
011 OUT   append cell to output\n\
100 JZ    if cell == 0 jump to instruction after matching JNZ\n\
101 JNZ   if cell == 1 jump to instruction after matching JZ\n\
110 HALT  stop\n\
111 NOOP  no effect\n\
start at instruction 0; one step per executed instruction; only HALT halts;\n\
leaving the body is divergence; unmatched reachable brackets are malformed;\n\
no reachable HALT is static divergence\n";

/// 64-bit FNV-1a.
pub fn fnv1a64(data: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    data.iter().fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// Version stamp of the machine semantics.
pub fn machine_hash() -> u64 {
    fnv1a64(ISA_DESCRIPTION.as_bytes())
}

/// Elias-gamma code of `k >= 1`.
pub fn encode_gamma(k: u64) -> Result<BitString> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let width = 64 - k.leading_zeros() as usize;
    let mut out = BitString::zeros(width - 1);
    out.extend_from(&BitString::from_uint(k, width));
    Ok(out)
}

/// Reads a gamma code from the front of `bits`, returning the value and the
/// number of bits consumed, or `None` if the header is truncated.
pub fn decode_gamma(bits: &[bool]) -> Option<(u64, usize)> {
    let zeros = bits.iter().take_while(|b| !**b).count();
    if zeros >= 64 {
        return None;
    }
    let end = 2 * zeros + 1;
    if bits.len() < end {
        return None;
    }
    let value = bits[zeros..end].iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    Some((value, end))
}

pub fn gamma_len(k: u64) -> usize {
    2 * (64 - k.leading_zeros() as usize) - 1
}

/// Total bit length of a program with `k` instructions.
pub fn program_length(k: u64) -> usize {
    gamma_len(k) + 3 * k as usize
}

/// A well-formed program: header and body decoded, bracket structure of the
/// reachable code verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    body: Vec<Opcode>,
    /// Matching bracket for each JZ/JNZ; `u32::MAX` elsewhere and for
    /// unmatched brackets in unreachable code.
    partner: Vec<u32>,
    halt_reachable: bool,
}

const NO_PARTNER: u32 = u32::MAX;

impl Program {
    /// Validates a body. Brackets are matched innermost-first; an unmatched
    /// bracket is an error only if it can be reached from instruction 0.
    pub fn from_body(body: Vec<Opcode>) -> Result<Program> {
        if body.is_empty() {
            return Err(Error::Malformed("empty body".into()));
        }
        if body.len() >= NO_PARTNER as usize {
            return Err(Error::Malformed("body too long".into()));
        }
        let mut partner = vec![NO_PARTNER; body.len()];
        let mut open: Vec<usize> = Vec::new();
        for (i, op) in body.iter().enumerate() {
            match op {
                Opcode::Jz => open.push(i),
                Opcode::Jnz => {
                    if let Some(j) = open.pop() {
                        partner[i] = j as u32;
                        partner[j] = i as u32;
                    }
                }
                _ => {}
            }
        }

        let n = body.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        let mut halt_reachable = false;
        while let Some(i) = stack.pop() {
            if i >= n || seen[i] {
                continue;
            }
            seen[i] = true;
            match body[i] {
                Opcode::Halt => halt_reachable = true,
                Opcode::Jz | Opcode::Jnz => {
                    let p = partner[i];
                    if p == NO_PARTNER {
                        return Err(Error::Malformed(format!("unmatched {} at instruction {i}", body[i].mnemonic())));
                    }
                    stack.push(i + 1);
                    stack.push(p as usize + 1);
                }
                _ => stack.push(i + 1),
            }
        }

        Ok(Program { body, partner, halt_reachable })
    }

    /// The program whose body is the `k`-instruction opcode string with
    /// big-endian value `index` (first instruction in the top three bits).
    pub fn from_index(k: usize, index: u64) -> Result<Program> {
        let body = (0..k).map(|i| Opcode::from_code((index >> (3 * (k - 1 - i))) as u8)).collect();
        Program::from_body(body)
    }

    pub fn instr_count(&self) -> usize {
        self.body.len()
    }

    pub fn body(&self) -> &[Opcode] {
        &self.body
    }

    pub fn halt_reachable(&self) -> bool {
        self.halt_reachable
    }

    pub fn bit_len(&self) -> usize {
        program_length(self.body.len() as u64)
    }

    pub fn bits(&self) -> BitString {
        let mut out = encode_gamma(self.body.len() as u64).expect("non-empty body");
        for op in &self.body {
            out.extend_from(&BitString::from_uint(op.code() as u64, 3));
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.body.iter().map(|o| o.mnemonic()).collect();
        write!(f, "[{}]", names.join(" "))
    }
}

/// Parses `gamma(k) ++ body` with `|body| = 3k` exactly.
pub fn decode_program(bits: &BitString) -> Result<Program> {
    let raw = bits.as_slice();
    let (k, header) = decode_gamma(raw).ok_or_else(|| Error::Malformed("truncated length header".into()))?;
    let body_bits = &raw[header..];
    let expected = 3u128 * k as u128;
    if body_bits.len() as u128 != expected {
        return Err(Error::Malformed(format!("body has {} bits, header requires {expected}", body_bits.len())));
    }
    let body = body_bits
        .chunks(3)
        .map(|c| Opcode::from_code(((c[0] as u8) << 2) | ((c[1] as u8) << 1) | c[2] as u8))
        .collect();
    Program::from_body(body)
}

/// The work tape: two-way infinite, zero initialised.
#[derive(Clone, Debug, Default)]
pub struct Tape {
    right: Vec<bool>,
    left: Vec<bool>,
}

impl Tape {
    #[inline]
    pub fn read(&self, pos: i64) -> bool {
        if pos >= 0 {
            self.right.get(pos as usize).copied().unwrap_or(false)
        } else {
            self.left.get((-pos - 1) as usize).copied().unwrap_or(false)
        }
    }

    #[inline]
    pub fn flip(&mut self, pos: i64) {
        let (side, idx) =
            if pos >= 0 { (&mut self.right, pos as usize) } else { (&mut self.left, (-pos - 1) as usize) };
        if idx >= side.len() {
            side.resize(idx + 1, false);
        }
        side[idx] = !side[idx];
    }
}

#[derive(Clone, Debug, Default)]
pub struct MachineState {
    pub instruction_pointer: usize,
    pub work_tape: Tape,
    pub head_position: i64,
    pub output_bits: BitString,
    pub steps_executed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    Halted,
    FellOff,
}

impl MachineState {
    /// Executes one instruction.
    #[inline]
    pub fn step(&mut self, program: &Program) -> Step {
        let ip = self.instruction_pointer;
        let Some(&op) = program.body.get(ip) else {
            return Step::FellOff;
        };
        self.steps_executed += 1;
        let cell = self.work_tape.read(self.head_position);
        let mut next = ip + 1;
        match op {
            Opcode::Left => self.head_position -= 1,
            Opcode::Right => self.head_position += 1,
            Opcode::Flip => self.work_tape.flip(self.head_position),
            Opcode::Out => self.output_bits.push(cell),
            Opcode::Jz => {
                if !cell {
                    next = program.partner[ip] as usize + 1;
                }
            }
            Opcode::Jnz => {
                if cell {
                    next = program.partner[ip] as usize + 1;
                }
            }
            Opcode::Halt => return Step::Halted,
            Opcode::Noop => {}
        }
        self.instruction_pointer = next;
        if next >= program.body.len() {
            Step::FellOff
        } else {
            Step::Continue
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Halted { output: BitString, halt_step: u64 },
    OutOfGas,
    DivergedStatic,
    Malformed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub program_length: usize,
}

impl RunOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self.status, RunStatus::Halted { .. })
    }

    pub fn status_name(&self) -> &'static str {
        match self.status {
            RunStatus::Halted { .. } => "halted",
            RunStatus::OutOfGas => "out_of_gas",
            RunStatus::DivergedStatic => "diverged_static",
            RunStatus::Malformed => "malformed",
        }
    }
}

impl Serialize for RunOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("status", self.status_name())?;
        if let RunStatus::Halted { output, halt_step } = &self.status {
            map.serialize_entry("output", output)?;
            map.serialize_entry("steps", halt_step)?;
        }
        map.end()
    }
}

/// Simulates `program` for at most `budget` instructions.
pub fn run(program: &Program, budget: u64) -> RunOutcome {
    let program_length = program.bit_len();
    if !program.halt_reachable {
        return RunOutcome { status: RunStatus::DivergedStatic, program_length };
    }
    let mut state = MachineState::default();
    let status = loop {
        if state.steps_executed >= budget {
            break RunStatus::OutOfGas;
        }
        match state.step(program) {
            Step::Continue => {}
            Step::Halted => {
                break RunStatus::Halted {
                    output: std::mem::take(&mut state.output_bits),
                    halt_step: state.steps_executed,
                }
            }
            Step::FellOff => break RunStatus::DivergedStatic,
        }
    };
    RunOutcome { status, program_length }
}

/// Decodes and runs raw program bits; undecodable input is `Malformed`.
pub fn run_bits(bits: &BitString, budget: u64) -> RunOutcome {
    match decode_program(bits) {
        Ok(p) => run(&p, budget),
        Err(_) => RunOutcome { status: RunStatus::Malformed, program_length: bits.len() },
    }
}
