//! Binary cache format (little-endian):
//!
//! ```text
//! "AITC" | version u8 = 1 | machine hash u64 | k_max u8 | t_max u32 | halted count u64
//! per halted record, canonical order:
//!     program length in bits u16 | program bits, MSB-first, padded to bytes
//!     halt step u32 | output length in bits u32 | output bits, padded
//! per k = 1..=k_max: out-of-gas u64 | diverged-static u64 | malformed u64
//! ```

use std::io::{Read, Write};

use super::{HaltRecord, Horizon, NonHaltCounts};
use crate::bits::BitString;
use crate::enumerator::ComplexityTable;
use crate::error::{Error, Result};
use crate::upm;

pub const CACHE_MAGIC: &[u8; 4] = b"AITC";
pub const CACHE_VERSION: u8 = 0x01;

pub fn write_cache<W: Write>(table: &ComplexityTable, mut w: W) -> Result<()> {
    let h = table.horizon();
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&[CACHE_VERSION])?;
    w.write_all(&table.machine_hash().to_le_bytes())?;
    w.write_all(&[h.k_max])?;
    w.write_all(&h.t_max.to_le_bytes())?;
    w.write_all(&(table.records().len() as u64).to_le_bytes())?;
    for r in table.records() {
        let plen = u16::try_from(r.program.len())
            .map_err(|_| Error::InvalidArgument("program too long for cache format".into()))?;
        w.write_all(&plen.to_le_bytes())?;
        w.write_all(&r.program.to_packed_bytes())?;
        w.write_all(&r.halt_step.to_le_bytes())?;
        let olen = u32::try_from(r.output.len())
            .map_err(|_| Error::InvalidArgument("output too long for cache format".into()))?;
        w.write_all(&olen.to_le_bytes())?;
        w.write_all(&r.output.to_packed_bytes())?;
    }
    for c in table.non_halt() {
        w.write_all(&c.out_of_gas.to_le_bytes())?;
        w.write_all(&c.diverged_static.to_le_bytes())?;
        w.write_all(&c.malformed.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| Error::CorruptCache(format!("truncated at byte {}", self.pos)))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn bits(&mut self, len: usize) -> Result<BitString> {
        let bytes = self.take(len.div_ceil(8))?;
        Ok(BitString::from_packed_bytes(bytes, len))
    }
}

/// Loads a cache, rejecting it unless it was built by this machine version.
pub fn read_cache<R: Read>(mut r: R) -> Result<ComplexityTable> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    let mut c = Cursor { data: &data, pos: 0 };
    if c.take(4)? != CACHE_MAGIC {
        return Err(Error::CorruptCache("bad magic".into()));
    }
    let version = c.u8()?;
    if version != CACHE_VERSION {
        return Err(Error::CacheMismatch(format!("unsupported cache version {version}")));
    }
    let hash = c.u64()?;
    if hash != upm::machine_hash() {
        return Err(Error::CacheMismatch(format!(
            "cache machine hash {hash:016x} differs from current machine {:016x}",
            upm::machine_hash()
        )));
    }
    let horizon = Horizon::new(c.u8()?, c.u32()?).map_err(|e| Error::CorruptCache(e.to_string()))?;
    let count = c.u64()?;
    let max_len = horizon.max_program_length();
    let mut records = Vec::with_capacity(count.min(1 << 24) as usize);
    for _ in 0..count {
        let plen = c.u16()? as usize;
        if plen > max_len {
            return Err(Error::CorruptCache(format!("program of {plen} bits exceeds horizon")));
        }
        let program = c.bits(plen)?;
        let halt_step = c.u32()?;
        if halt_step == 0 || halt_step > horizon.t_max {
            return Err(Error::CorruptCache(format!("halt step {halt_step} outside horizon")));
        }
        let olen = c.u32()? as usize;
        let output = c.bits(olen)?;
        records.push(HaltRecord { program, program_length: plen, halt_step, output });
    }
    let mut non_halt = Vec::with_capacity(horizon.k_max as usize);
    for _ in 0..horizon.k_max {
        non_halt.push(NonHaltCounts { out_of_gas: c.u64()?, diverged_static: c.u64()?, malformed: c.u64()? });
    }
    if c.pos != data.len() {
        return Err(Error::CorruptCache(format!("{} trailing bytes", data.len() - c.pos)));
    }
    Ok(ComplexityTable::from_parts(horizon, records, non_halt, hash))
}
