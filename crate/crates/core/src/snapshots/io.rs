//! The PDMD1 binary snapshot format and its JSON sidecar.
//!
//! Layout (all integers and floats little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 0..4  | magic `PDMD` |
//! | 4     | version, 1 |
//! | 5     | layout tag, 0 = single, 1 = coupled |
//! | 6..8  | reserved, zero |
//! | 8..16 | rows (u64) |
//! | 16..24 | cols (u64) |
//! | 24..32 | block size n (u64) |
//! | 32..40 | t0 (f64) |
//! | 40..48 | dt_snap (f64) |
//! | 48..  | rows * cols f64 values, column-major |
//!
//! The sidecar sits next to the data file with the extension replaced by
//! `json`.

use super::{Layout, SnapshotMatrix, TimeGrid};
use crate::error::{Error, Result};
use faer::{Mat, MatRef};
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 4] = b"PDMD";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 48;

pub fn save(s: &SnapshotMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(s.data(), s.layout(), s.grid().t0, s.grid().dt_snap, path)
}

pub fn load(path: impl AsRef<Path>) -> Result<SnapshotMatrix> {
    let raw = read_matrix(path)?;
    let grid = TimeGrid::new(raw.t0, raw.dt_snap, raw.data.ncols())?;
    SnapshotMatrix::new(raw.data, grid, raw.layout)
}

/// Header and payload of a PDMD1 file without the snapshot invariants.
#[derive(Clone, Debug)]
pub struct RawMatrix {
    pub data: Mat<f64>,
    pub layout: Layout,
    pub t0: f64,
    pub dt_snap: f64,
}

/// Write any matrix in PDMD1 form.
pub fn write_matrix(
    data: MatRef<'_, f64>,
    layout: Layout,
    t0: f64,
    dt_snap: f64,
    path: impl AsRef<Path>,
) -> Result<()> {
    if layout.rows() != data.nrows() {
        return Err(Error::Dimension(format!(
            "{} rows do not match layout {layout:?}",
            data.nrows()
        )));
    }
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    let (tag, block) = match layout {
        Layout::Single(n) => (0u8, n),
        Layout::Coupled(n) => (1u8, n),
    };
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION, tag, 0, 0])?;
    w.write_all(&(data.nrows() as u64).to_le_bytes())?;
    w.write_all(&(data.ncols() as u64).to_le_bytes())?;
    w.write_all(&(block as u64).to_le_bytes())?;
    w.write_all(&t0.to_le_bytes())?;
    w.write_all(&dt_snap.to_le_bytes())?;
    for j in 0..data.ncols() {
        for &x in data.col(j).iter() {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<RawMatrix> {
    let mut bytes = Vec::new();
    File::open(path.as_ref())?.read_to_end(&mut bytes)?;
    decode(&bytes)
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

fn decode(bytes: &[u8]) -> Result<RawMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Format("bad magic, not a PDMD1 file".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", bytes[4])));
    }
    if bytes[6] != 0 || bytes[7] != 0 {
        return Err(Error::Format("reserved header bytes are not zero".into()));
    }
    let rows = usize::try_from(u64_at(bytes, 8)).map_err(|_| Error::Format("row count overflow".into()))?;
    let cols = usize::try_from(u64_at(bytes, 16)).map_err(|_| Error::Format("column count overflow".into()))?;
    let block = usize::try_from(u64_at(bytes, 24)).map_err(|_| Error::Format("block size overflow".into()))?;
    let layout = match bytes[5] {
        0 => Layout::Single(block),
        1 => Layout::Coupled(block),
        t => return Err(Error::Format(format!("unknown layout tag {t}"))),
    };
    let t0 = f64_at(bytes, 32);
    let dt_snap = f64_at(bytes, 40);
    let expected = rows
        .checked_mul(cols)
        .and_then(|v| v.checked_mul(8))
        .and_then(|v| v.checked_add(HEADER_LEN))
        .ok_or_else(|| Error::Format("matrix size overflow".into()))?;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Format(format!(
            "{} trailing bytes after the payload",
            bytes.len() - expected
        )));
    }
    let data = Mat::from_fn(rows, cols, |i, j| f64_at(bytes, HEADER_LEN + 8 * (j * rows + i)));
    Ok(RawMatrix {
        data,
        layout,
        t0,
        dt_snap,
    })
}

/// Path of the JSON sidecar belonging to `path`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Write the data file and a pretty-printed JSON sidecar next to it.
pub fn save_with_sidecar(
    s: &SnapshotMatrix,
    path: impl AsRef<Path>,
    meta: &serde_json::Value,
) -> Result<()> {
    let path = path.as_ref();
    save(s, path)?;
    let text = serde_json::to_string_pretty(meta)?;
    std::fs::write(sidecar_path(path), text + "\n")?;
    Ok(())
}

pub fn read_sidecar(path: impl AsRef<Path>) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(sidecar_path(path.as_ref()))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_with_sidecar(path: impl AsRef<Path>) -> Result<(SnapshotMatrix, serde_json::Value)> {
    let path = path.as_ref();
    Ok((load(path)?, read_sidecar(path)?))
}
