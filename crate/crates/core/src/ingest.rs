//! Raw image cubes: byte decoding and reordering into BIP.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::encoder::SampleStream;
use crate::error::IngestError;

/// Sample interleaving of a raw cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleOrder {
    /// Band fastest, then x, then y.
    #[default]
    Bip,
    /// x fastest, then band, then y.
    Bil,
    /// x fastest, then y, then band.
    Bsq,
}

impl SampleOrder {
    /// File offset (in samples) of `(x, y, z)`.
    #[inline]
    pub fn offset(self, x: usize, y: usize, z: usize, nx: usize, ny: usize, nz: usize) -> usize {
        match self {
            SampleOrder::Bip => (y * nx + x) * nz + z,
            SampleOrder::Bil => y * nz * nx + z * nx + x,
            SampleOrder::Bsq => z * nx * ny + y * nx + x,
        }
    }
}

impl FromStr for SampleOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bip" => Ok(SampleOrder::Bip),
            "bil" => Ok(SampleOrder::Bil),
            "bsq" => Ok(SampleOrder::Bsq),
            other => Err(format!("unknown sample order `{other}` (bip, bil or bsq)")),
        }
    }
}

impl fmt::Display for SampleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleOrder::Bip => "bip",
            SampleOrder::Bil => "bil",
            SampleOrder::Bsq => "bsq",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endian {
    #[default]
    Little,
    Big,
}

impl FromStr for Endian {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "little" | "le" => Ok(Endian::Little),
            "big" | "be" => Ok(Endian::Big),
            other => Err(format!("unknown endianness `{other}` (little or big)")),
        }
    }
}

impl fmt::Display for Endian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endian::Little => "little",
            Endian::Big => "big",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub order: SampleOrder,
    pub endian: Endian,
    /// 1, 2 or 4.
    pub bytes_per_sample: usize,
    pub nx: u32,
    pub ny: u32,
    pub nz: u32,
    pub d: u32,
}

impl IngestSpec {
    pub fn sample_count(&self) -> u64 {
        self.nx as u64 * self.ny as u64 * self.nz as u64
    }

    pub fn expected_bytes(&self) -> u64 {
        self.sample_count() * self.bytes_per_sample as u64
    }

    /// Narrowest supported sample width for `d` bits.
    pub fn default_bytes_for(d: u32) -> usize {
        match d {
            0..=8 => 1,
            9..=16 => 2,
            _ => 4,
        }
    }
}

/// Reads and decodes the cube at `spec.path` into a BIP stream.
pub fn ingest(spec: &IngestSpec) -> Result<SampleStream, IngestError> {
    let bytes = std::fs::read(&spec.path).map_err(|source| IngestError::Io {
        path: spec.path.clone(),
        source,
    })?;
    ingest_bytes(&bytes, spec)
}

/// Same as [`ingest`] on an in-memory file image.
pub fn ingest_bytes(bytes: &[u8], spec: &IngestSpec) -> Result<SampleStream, IngestError> {
    let width = spec.bytes_per_sample;
    if !matches!(width, 1 | 2 | 4) || spec.d as usize > 8 * width {
        return Err(IngestError::SampleWidth {
            bytes: width,
            d: spec.d,
        });
    }
    if bytes.len() as u64 != spec.expected_bytes() {
        return Err(IngestError::SizeMismatch {
            expected: spec.expected_bytes(),
            actual: bytes.len() as u64,
        });
    }
    let limit = if spec.d >= 32 {
        u32::MAX as u64
    } else {
        (1u64 << spec.d) - 1
    };
    let mut raw = Vec::with_capacity(bytes.len() / width);
    for (i, chunk) in bytes.chunks_exact(width).enumerate() {
        let mut buf = [0u8; 4];
        let value = match spec.endian {
            Endian::Little => {
                buf[..width].copy_from_slice(chunk);
                u32::from_le_bytes(buf)
            }
            Endian::Big => {
                buf[4 - width..].copy_from_slice(chunk);
                u32::from_be_bytes(buf)
            }
        };
        if value as u64 > limit {
            return Err(IngestError::OutOfRange {
                offset: (i * width) as u64,
                value: value as u64,
                d: spec.d,
            });
        }
        raw.push(value);
    }
    let samples = reorder_to_bip(&raw, spec.order, spec.nx, spec.ny, spec.nz);
    Ok(SampleStream::new(samples, spec.nx, spec.ny, spec.nz).expect("length checked above"))
}

/// Rearranges a cube stored in `order` into BIP.
///
/// # Panics
/// If `samples.len() != nx·ny·nz`.
pub fn reorder_to_bip<T: Copy>(
    samples: &[T],
    order: SampleOrder,
    nx: u32,
    ny: u32,
    nz: u32,
) -> Vec<T> {
    let (nx, ny, nz) = (nx as usize, ny as usize, nz as usize);
    assert_eq!(samples.len(), nx * ny * nz, "cube size");
    if order == SampleOrder::Bip {
        return samples.to_vec();
    }
    let mut out = Vec::with_capacity(samples.len());
    for y in 0..ny {
        for x in 0..nx {
            for z in 0..nz {
                out.push(samples[order.offset(x, y, z, nx, ny, nz)]);
            }
        }
    }
    out
}

/// Inverse of [`reorder_to_bip`].
pub fn reorder_from_bip<T: Copy + Default>(
    bip: &[T],
    order: SampleOrder,
    nx: u32,
    ny: u32,
    nz: u32,
) -> Vec<T> {
    let (nx, ny, nz) = (nx as usize, ny as usize, nz as usize);
    assert_eq!(bip.len(), nx * ny * nz, "cube size");
    let mut out = vec![T::default(); bip.len()];
    for y in 0..ny {
        for x in 0..nx {
            for z in 0..nz {
                out[order.offset(x, y, z, nx, ny, nz)] = bip[(y * nx + x) * nz + z];
            }
        }
    }
    out
}
