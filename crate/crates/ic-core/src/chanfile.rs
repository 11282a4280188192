//! Channel realization persistence.
//!
//! Binary container so rival schemes can be fed byte-identical inputs:
//!
//! ```text
//! magic "ICCH" | version u32 | K u32
//! per (k, l), k outer: N_k u32, M_l u32
//! per (k, l), row-major: re f64, im f64        (little endian)
//! seed u64
//! ```
//!
//! A JSON mirror of the same content is provided for debugging.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::CoreError;
use crate::linalg::CMat;

const MAGIC: &[u8; 4] = b"ICCH";
const VERSION: u32 = 1;

struct Counting<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Counting<R> {
    fn new(inner: R) -> Self {
        Counting { inner, offset: 0 }
    }

    fn fail(&self, detail: impl Into<String>) -> CoreError {
        CoreError::Format {
            offset: self.offset,
            detail: detail.into(),
        }
    }
}

impl<R: Read> Read for Counting<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.offset += n as u64;
        Ok(n)
    }
}

/// Write a channel realization to the binary container format.
pub fn save_channels(path: &Path, ch: &ChannelSet) -> Result<(), CoreError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    let users = ch.users() as u32;
    w.write_u32::<LittleEndian>(users)?;
    for row in &ch.h {
        for m in row {
            w.write_u32::<LittleEndian>(m.nrows() as u32)?;
            w.write_u32::<LittleEndian>(m.ncols() as u32)?;
        }
    }
    for row in &ch.h {
        for m in row {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    w.write_f64::<LittleEndian>(m[(r, c)].re)?;
                    w.write_f64::<LittleEndian>(m[(r, c)].im)?;
                }
            }
        }
    }
    w.write_u64::<LittleEndian>(ch.seed)?;
    w.flush()?;
    Ok(())
}

/// Read a channel realization back, reporting the byte offset of any
/// decoding failure.
pub fn load_channels(path: &Path) -> Result<ChannelSet, CoreError> {
    let mut r = Counting::new(BufReader::new(File::open(path)?));
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|e| r.fail(format!("short read on magic: {e}")))?;
    if &magic != MAGIC {
        return Err(CoreError::Format {
            offset: 0,
            detail: format!("bad magic {magic:?}, expected {MAGIC:?}"),
        });
    }
    let version = r
        .read_u32::<LittleEndian>()
        .map_err(|e| r.fail(format!("short read on version: {e}")))?;
    if version != VERSION {
        return Err(r.fail(format!("unsupported version {version}")));
    }
    let users = r
        .read_u32::<LittleEndian>()
        .map_err(|e| r.fail(format!("short read on user count: {e}")))? as usize;
    if users == 0 || users > 1 << 16 {
        return Err(r.fail(format!("implausible user count {users}")));
    }
    let mut shapes = vec![vec![(0usize, 0usize); users]; users];
    for k in 0..users {
        for l in 0..users {
            let n = r
                .read_u32::<LittleEndian>()
                .map_err(|e| r.fail(format!("short read on shape ({k},{l}): {e}")))?;
            let m = r
                .read_u32::<LittleEndian>()
                .map_err(|e| r.fail(format!("short read on shape ({k},{l}): {e}")))?;
            if n == 0 || m == 0 || n > 1 << 16 || m > 1 << 16 {
                return Err(r.fail(format!("implausible shape {n}x{m} for pair ({k},{l})")));
            }
            shapes[k][l] = (n as usize, m as usize);
        }
    }
    // Shape table must be consistent: N depends only on k, M only on l.
    for k in 0..users {
        for l in 0..users {
            if shapes[k][l].0 != shapes[k][0].0 || shapes[k][l].1 != shapes[0][l].1 {
                return Err(r.fail(format!("inconsistent shape table at pair ({k},{l})")));
            }
        }
    }
    let mut h = Vec::with_capacity(users);
    for k in 0..users {
        let mut row = Vec::with_capacity(users);
        for l in 0..users {
            let (n, m) = shapes[k][l];
            let mut mat = CMat::zeros(n, m);
            for a in 0..n {
                for b in 0..m {
                    let re = r
                        .read_f64::<LittleEndian>()
                        .map_err(|e| r.fail(format!("short read in H[{k}][{l}]: {e}")))?;
                    let im = r
                        .read_f64::<LittleEndian>()
                        .map_err(|e| r.fail(format!("short read in H[{k}][{l}]: {e}")))?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(r.fail(format!("non-finite entry in H[{k}][{l}]")));
                    }
                    mat[(a, b)] = Complex64::new(re, im);
                }
            }
            row.push(mat);
        }
        h.push(row);
    }
    let seed = r
        .read_u64::<LittleEndian>()
        .map_err(|e| r.fail(format!("short read on seed: {e}")))?;
    Ok(ChannelSet { h, seed })
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    seed: u64,
    users: usize,
    /// `matrices[k][l][row][col] = [re, im]`.
    matrices: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

/// Human-readable mirror of the binary container.
pub fn save_channels_json(path: &Path, ch: &ChannelSet) -> Result<(), CoreError> {
    let doc = ChannelJson {
        seed: ch.seed,
        users: ch.users(),
        matrices: ch
            .h
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| {
                        (0..m.nrows())
                            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &doc)
        .map_err(|e| CoreError::numerical(format!("json serialization failed: {e}")))?;
    w.flush()?;
    Ok(())
}

pub fn load_channels_json(path: &Path) -> Result<ChannelSet, CoreError> {
    let rdr = BufReader::new(File::open(path)?);
    let doc: ChannelJson = serde_json::from_reader(rdr).map_err(|e| CoreError::Format {
        offset: 0,
        detail: format!("json parse failure: {e}"),
    })?;
    let h = doc
        .matrices
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    let n = m.len();
                    let cols = m.first().map_or(0, |r| r.len());
                    CMat::from_fn(n, cols, |r, c| Complex64::new(m[r][c][0], m[r][c][1]))
                })
                .collect()
        })
        .collect();
    Ok(ChannelSet { h, seed: doc.seed })
}
