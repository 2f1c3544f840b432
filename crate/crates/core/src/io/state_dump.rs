//! Raw state dumps: the 8-byte magic `LGTSTATE`, a little-endian `u32`
//! format version, a `u32` qubit count, then `2^n` amplitudes as
//! little-endian `(re, im)` `f64` pairs.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pauli::{StateVector, MAX_STATE_QUBITS};

pub const MAGIC: &[u8; 8] = b"LGTSTATE";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_state(mut w: impl Write, psi: &StateVector) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(psi.n_qubits() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * psi.dim());
    for a in psi.amplitudes() {
        buf.extend_from_slice(&a.re.to_le_bytes());
        buf.extend_from_slice(&a.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read_state(mut r: impl Read) -> Result<StateVector> {
    let mut head = [0u8; 16];
    r.read_exact(&mut head)
        .map_err(|_| Error::Format("state dump shorter than its header".into()))?;
    if &head[..8] != MAGIC {
        return Err(Error::Format("not a state dump (bad magic)".into()));
    }
    let version = u32::from_le_bytes(head[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported state dump version {version}")));
    }
    let n = u32::from_le_bytes(head[12..16].try_into().unwrap()) as usize;
    if n > MAX_STATE_QUBITS {
        return Err(Error::TooLarge {
            what: "state dump",
            n_qubits: n,
            limit: MAX_STATE_QUBITS,
        });
    }
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != 16 << n {
        return Err(Error::Format(format!(
            "state dump for {n} qubits has {} payload bytes, expected {}",
            body.len(),
            16usize << n
        )));
    }
    let amps = body
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    StateVector::from_amplitudes(n, amps)
}

pub fn save_state(path: &Path, psi: &StateVector) -> Result<()> {
    write_state(std::io::BufWriter::new(std::fs::File::create(path)?), psi)
}

pub fn load_state(path: &Path) -> Result<StateVector> {
    read_state(std::io::BufReader::new(std::fs::File::open(path)?))
}
