//! Binary field snapshots: a 32-byte little-endian header (magic "MLS2",
//! u32 component count, u64 N, f64 L, f64 t) followed by the components as
//! flat row-major f64 arrays of N*N values each.

use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::Grid;

pub const MAGIC: &[u8; 4] = b"MLS2";
pub const HEADER_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub len: f64,
    pub t: f64,
    pub components: Vec<Vec<f64>>,
}

pub fn encode_snapshot(grid: &Grid, t: f64, components: &[Vec<f64>]) -> Result<Vec<u8>> {
    let cells = grid.cells();
    if let Some(c) = components.iter().find(|c| c.len() != cells) {
        return Err(Error::GridMismatch(format!(
            "component has {} values, grid has {cells}",
            c.len()
        )));
    }
    if components.iter().flatten().any(|x| !x.is_finite()) || !t.is_finite() {
        return Err(Error::NonFinite("snapshot".into()));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * cells * components.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(components.len() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    out.extend_from_slice(&grid.len().to_le_bytes());
    out.extend_from_slice(&t.to_le_bytes());
    for x in components.iter().flatten() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<Snapshot> {
    let bad = |m: &str| Error::Parse(format!("snapshot: {m}"));
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(bad("missing MLS2 header"));
    }
    let word = |i: usize| <[u8; 8]>::try_from(&bytes[i..i + 8]).unwrap();
    let count = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let n = u64::from_le_bytes(word(8)) as usize;
    let len = f64::from_le_bytes(word(16));
    let t = f64::from_le_bytes(word(24));
    let cells = n.checked_mul(n).ok_or_else(|| bad("grid size overflows"))?;
    if bytes.len() != HEADER_LEN + 8 * cells * count {
        return Err(bad("length does not match header"));
    }
    let values: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let components = values
        .chunks(cells.max(1))
        .take(count)
        .map(<[f64]>::to_vec)
        .collect();
    Ok(Snapshot {
        n,
        len,
        t,
        components,
    })
}

pub fn write_snapshot(path: &Path, grid: &Grid, t: f64, components: &[Vec<f64>]) -> Result<()> {
    std::fs::write(path, encode_snapshot(grid, t, components)?)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    decode_snapshot(&std::fs::read(path)?)
}
