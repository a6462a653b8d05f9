//! The two encoder cores.
//!
//! [`encode_reference`] follows the per-sample algorithm directly with plain
//! per-band arrays. [`encode_streaming`] splits the same work into pipeline
//! stages that pass explicit messages. Both produce the same bitstream and
//! trace for every input.

mod file;
mod reference;
mod streaming;

pub use file::{encode_file, CoreChoice, FileJob, FileReport};
pub use reference::encode_reference;
pub use streaming::{
    encode_streaming, AcssStage, HiEcStage, HiLoMsg, HiLoStage, LoEcStage, StageTranscript,
    StreamingEncoder,
};

use crate::assembler::{EmissionTrace, PackedBits};
use crate::config::CoderParams;
use crate::error::EncodeError;

/// Mapped quantizer indices in BIP order (band fastest, then x, then y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleStream {
    samples: Vec<u32>,
    nx: u32,
    ny: u32,
    nz: u32,
}

impl SampleStream {
    /// # Errors
    /// `DimensionMismatch` if `samples.len() != nx·ny·nz`.
    pub fn new(samples: Vec<u32>, nx: u32, ny: u32, nz: u32) -> Result<Self, EncodeError> {
        let expected = nx as u64 * ny as u64 * nz as u64;
        if samples.len() as u64 != expected {
            return Err(EncodeError::DimensionMismatch {
                expected,
                actual: samples.len() as u64,
            });
        }
        Ok(Self {
            samples,
            nx,
            ny,
            nz,
        })
    }

    pub fn for_params(samples: Vec<u32>, params: &CoderParams) -> Result<Self, EncodeError> {
        Self::new(samples, params.nx, params.ny, params.nz)
    }

    pub fn samples(&self) -> &[u32] {
        &self.samples
    }

    pub fn dims(&self) -> (u32, u32, u32) {
        (self.nx, self.ny, self.nz)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<u32> {
        self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncodeOptions {
    /// Keep every emitted codeword in the trace, not just the counters.
    pub record_trace: bool,
}

impl EncodeOptions {
    pub fn traced() -> Self {
        Self { record_trace: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeResult {
    pub packed: PackedBits,
    pub trace: EmissionTrace,
    /// `Σ̃_z` after the last position, band order.
    pub final_accumulators: Vec<u64>,
    pub final_gamma: u32,
    /// Per-stage firing counts; only the streaming core fills this in.
    pub transcript: Option<StageTranscript>,
}

impl EncodeResult {
    pub fn escapes(&self) -> u64 {
        self.trace.counters.escapes
    }

    pub fn samples(&self) -> u64 {
        self.trace.counters.samples
    }

    pub fn total_bits(&self) -> u64 {
        self.packed.total_bits
    }

    pub fn bits_per_sample(&self) -> f64 {
        self.packed.total_bits as f64 / self.samples().max(1) as f64
    }
}

fn check_inputs(stream: &SampleStream, params: &CoderParams) -> Result<(), EncodeError> {
    params.check_codable()?;
    if stream.dims() != (params.nx, params.ny, params.nz) {
        return Err(EncodeError::DimensionMismatch {
            expected: params.sample_count(),
            actual: stream.len() as u64,
        });
    }
    let max = params.max_delta();
    if let Some((index, &value)) = stream
        .samples
        .iter()
        .enumerate()
        .find(|(_, &v)| v as u64 > max)
    {
        return Err(EncodeError::SampleRange {
            index: index as u64,
            value: value as u64,
            d: params.d,
        });
    }
    Ok(())
}
