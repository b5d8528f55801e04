//! Field snapshots on disk.
//!
//! Binary layout, all little-endian:
//!
//! | offset | size | content                           |
//! |--------|------|-----------------------------------|
//! | 0      | 4    | magic `CFLD`                      |
//! | 4      | 4    | format version (u32, currently 1) |
//! | 8      | 8    | M′ (u64)                          |
//! | 16     | 8    | M (u64)                           |
//! | 24     | 8    | T (f64)                           |
//! | 32     | 1    | domain, 0 = time, 1 = frequency   |
//! | 33     | 7    | zero padding                      |
//! | 40     | 16M′ | re, im pairs (f64)                |

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use fibercap_core::grid::{make_grid, ComplexField, Domain};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"CFLD";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 40;

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Serializes a field to bytes.
pub fn encode(field: &ComplexField) -> Vec<u8> {
    let g = &field.grid;
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.m_total);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.m_total as u64).to_le_bytes());
    out.extend_from_slice(&(g.m_meaning as u64).to_le_bytes());
    out.extend_from_slice(&g.big_t.to_le_bytes());
    out.push(field.domain.tag());
    out.extend_from_slice(&[0u8; 7]);
    for z in &field.samples {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

/// Parses bytes produced by [`encode`].
pub fn decode(bytes: &[u8]) -> Result<ComplexField> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Snapshot("missing CFLD header"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    if u32_at(4) != VERSION {
        return Err(Error::Snapshot("unsupported version"));
    }
    let (m_total, m_meaning, big_t) = (u64_at(8) as usize, u64_at(16) as usize, f64_at(24));
    let domain = Domain::from_tag(bytes[32]).ok_or(Error::Snapshot("bad domain tag"))?;
    if m_meaning == 0 || m_total % m_meaning != 0 {
        return Err(Error::Snapshot("M′ is not a multiple of M"));
    }
    if bytes.len() != HEADER_LEN + 16 * m_total {
        return Err(Error::Snapshot("payload length does not match M′"));
    }
    if !(big_t.is_finite() && big_t > 0.0) {
        return Err(Error::Snapshot("bad window length"));
    }
    let w = 2.0 * std::f64::consts::PI * m_meaning as f64 / big_t;
    let mut grid = make_grid(w, m_meaning, m_total / m_meaning)?;
    // keep T bit-exact rather than recomputed from W
    grid.big_t = big_t;
    grid.delta_t = big_t / m_total as f64;
    grid.delta_omega = 1.0 / big_t;
    let samples = (0..m_total)
        .map(|k| {
            let i = HEADER_LEN + 16 * k;
            Complex64::new(f64_at(i), f64_at(i + 8))
        })
        .collect();
    Ok(ComplexField::new(samples, domain, grid)?)
}

/// Writes the binary snapshot.
pub fn write_binary(path: &Path, field: &ComplexField) -> Result<()> {
    std::fs::write(path, encode(field)).map_err(io(path))
}

/// Reads a binary snapshot.
pub fn read_binary(path: &Path) -> Result<ComplexField> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(io(path))?;
    decode(&bytes)
}

/// Writes `index,coordinate,re,im` rows; the coordinate is `t_j` or `ω_n`.
pub fn write_csv<W: Write>(out: &mut W, field: &ComplexField) -> std::io::Result<()> {
    let g = &field.grid;
    match field.domain {
        Domain::Time => writeln!(out, "index,t,re,im")?,
        Domain::Frequency => writeln!(out, "index,omega,re,im")?,
    }
    for (j, z) in field.samples.iter().enumerate() {
        let (idx, coord) = match field.domain {
            Domain::Time => (j as isize, j as f64 * g.delta_t),
            Domain::Frequency => (g.signed_index(j), g.omega(j)),
        };
        writeln!(out, "{idx},{coord:e},{:e},{:e}", z.re, z.im)?;
    }
    Ok(())
}

/// [`write_csv`] to a file.
pub fn write_csv_file(path: &Path, field: &ComplexField) -> Result<()> {
    let f = File::create(path).map_err(io(path))?;
    let mut w = BufWriter::new(f);
    write_csv(&mut w, field)
        .and_then(|_| w.flush())
        .map_err(io(path))
}
