//! Binary state dump: `u32 n`, `u32 p`, then `2^n` interleaved `(re, im)`
//! doubles in canonical order, all little-endian.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::ReferenceState;
use crate::error::{Error, Result};

pub fn write_dump<W: Write>(mut w: W, state: &ReferenceState, p: usize) -> Result<()> {
    w.write_all(&(state.n() as u32).to_le_bytes())?;
    w.write_all(&(p as u32).to_le_bytes())?;
    for a in state.amplitudes() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

/// Returns the state and the PE count it was written with.
pub fn read_dump<R: Read>(mut r: R) -> Result<(ReferenceState, usize)> {
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let n = u32::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let p = u32::from_le_bytes(word) as usize;
    if n >= usize::BITS as usize {
        return Err(Error::InvalidShape(format!("dump header claims {n} qubits")));
    }
    let mut buf = [0u8; 8];
    let mut amps = Vec::with_capacity(1 << n);
    for _ in 0..1usize << n {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        amps.push(Complex64::new(re, f64::from_le_bytes(buf)));
    }
    Ok((ReferenceState::from_raw(n, amps), p))
}
