//! Cycle accounting for the pipelined encoder.
//!
//! One cycle per sample, one more per escape residual, one per code index and
//! one per band for the tail, plus a constant pipeline fill.

use crate::codetables::TABLE_COUNT;
use crate::config::CoderParams;
use crate::encoder::EncodeResult;
use crate::error::EncodeError;

pub const DEFAULT_INIT_CYCLES: u64 = 10;
/// The tail visits every code index.
pub const TAIL_FLUSH_CYCLES: u64 = TABLE_COUNT as u64;

/// A pipelined feedback loop `y(t) = α·x(t) + y(t − k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSpec {
    /// Feed-forward pipeline registers.
    pub m: u32,
    /// Feedback delay registers.
    pub n: u32,
    /// Dependency distance in samples.
    pub k: u32,
    pub alpha: f64,
}

impl LoopSpec {
    pub fn new(m: u32, n: u32, k: u32) -> Self {
        assert!(n >= 1 && k >= 1, "loop needs n ≥ 1 and k ≥ 1");
        Self {
            m,
            n,
            k,
            alpha: 1.0,
        }
    }

    /// Whether the loop controller has to insert bubbles.
    pub fn stalls(&self) -> bool {
        self.k <= self.m
    }
}

/// Samples per cycle sustained by the loop: `n/(m+n)` when the dependency
/// distance does not exceed the feed-forward depth, otherwise one.
pub fn loop_throughput(spec: LoopSpec) -> f64 {
    if spec.stalls() {
        spec.n as f64 / (spec.m + spec.n) as f64
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateEstimate {
    pub init_cycles: u64,
    pub samples: u64,
    pub tail_cycles: u64,
    pub escape_cycles: u64,
}

impl RateEstimate {
    pub fn total_cycles(&self) -> u64 {
        self.init_cycles + self.samples + self.tail_cycles + self.escape_cycles
    }

    /// Exact rate as `(samples, cycles)`.
    pub fn ratio(&self) -> (u64, u64) {
        (self.samples, self.total_cycles())
    }

    pub fn samples_per_cycle(&self) -> f64 {
        self.samples as f64 / self.total_cycles() as f64
    }

    pub fn to_lines(&self, prefix: &str) -> Vec<(String, String)> {
        vec![
            (format!("{prefix}_cycles"), self.total_cycles().to_string()),
            (
                format!("{prefix}_samples_per_cycle"),
                format!("{:.6}", self.samples_per_cycle()),
            ),
        ]
    }
}

pub fn predict_rate(params: &CoderParams, escapes: u64, init_cycles: u64) -> RateEstimate {
    RateEstimate {
        init_cycles,
        samples: params.sample_count(),
        tail_cycles: TAIL_FLUSH_CYCLES + params.nz as u64,
        escape_cycles: escapes,
    }
}

/// Counts cycles from the streaming stage transcript and checks them
/// against [`predict_rate`] with the trace's escape count.
///
/// # Errors
/// `AuditMismatch` when the two disagree, or the result has no transcript.
pub fn audit_rate(
    result: &EncodeResult,
    params: &CoderParams,
    init_cycles: u64,
) -> Result<RateEstimate, EncodeError> {
    let predicted = predict_rate(params, result.escapes(), init_cycles);
    let Some(tr) = result.transcript else {
        return Err(EncodeError::AuditMismatch {
            audited: 0,
            predicted: predicted.total_cycles(),
        });
    };
    let audited = RateEstimate {
        init_cycles,
        samples: tr.acss_fires,
        tail_cycles: tr.tail_flush_slots + tr.tail_accumulator_slots,
        escape_cycles: tr.combiner_slots - tr.acss_fires.min(tr.combiner_slots),
    };
    debug_assert_eq!(audited.total_cycles(), init_cycles + tr.busy_cycles());
    if audited != predicted {
        return Err(EncodeError::AuditMismatch {
            audited: audited.total_cycles(),
            predicted: predicted.total_cycles(),
        });
    }
    Ok(audited)
}
