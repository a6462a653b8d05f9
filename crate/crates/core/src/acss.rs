//! Adaptive code selection statistics: per-band accumulators `Σ̃_z` and the
//! shared counter `Γ`.
//!
//! In BIP order the accumulator needed for band `z` at position `t` is the one
//! written `nz` samples earlier, so the state is a FIFO of depth `nz`. Each
//! entry also carries the counter value that was current when it was written,
//! which makes the queue the delay line for `Γ` as well.

use std::collections::VecDeque;

use crate::config::CoderParams;
use crate::error::EncodeError;

/// Statistics after one update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcssOutput {
    pub sigma: u64,
    pub gamma: u32,
    pub rescaled: bool,
    /// LSB of `Σ̃_prev + 4δ`, lost by the halving. Only meaningful when `rescaled`.
    pub rescale_bit: bool,
}

/// One step of the accumulator/counter recurrence.
///
/// Below saturation `Σ̃ += 4δ`, `Γ += 1`. When `Γ_prev = 2^γ* − 1` both are
/// halved: `Σ̃ = ⌊(Σ̃_prev + 4δ + 1)/2⌋`, `Γ = ⌊(Γ_prev + 1)/2⌋`.
#[inline]
pub fn update_statistics(
    sigma_prev: u64,
    gamma_prev: u32,
    delta: u64,
    gamma_star: u32,
) -> AcssOutput {
    let sum = sigma_prev + 4 * delta;
    if gamma_prev < (1 << gamma_star) - 1 {
        AcssOutput {
            sigma: sum,
            gamma: gamma_prev + 1,
            rescaled: false,
            rescale_bit: false,
        }
    } else {
        AcssOutput {
            sigma: (sum + 1) >> 1,
            gamma: (gamma_prev + 1) >> 1,
            rescaled: true,
            rescale_bit: sum & 1 == 1,
        }
    }
}

/// What the statistics stage produced for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcssStep {
    pub t: u64,
    pub z: u32,
    pub delta: u64,
    /// `None` for the first spatial position, which is sent uncompressed.
    pub stats: Option<AcssOutput>,
}

/// Queue-based statistics state of one encoder instance.
#[derive(Debug, Clone)]
pub struct AcssState {
    /// `(Σ̃_z, Γ)` as of the last sample of band `z`; front is the next band.
    queue: VecDeque<(u64, u32)>,
    nz: u32,
    gamma_star: u32,
    accumulator_bits: u32,
    d: u32,
    max_delta: u64,
    total: u64,
    /// Samples consumed so far.
    seen: u64,
}

impl AcssState {
    /// Fresh state: `Γ(0) = 2^γ₀`, every `Σ̃_z(0) = accumulator_init`.
    pub fn init(params: &CoderParams) -> Self {
        let sigmas = vec![params.accumulator_init; params.nz as usize];
        Self::with_state(params, &sigmas, params.initial_counter(), 0)
    }

    /// State with explicit accumulators and counter after `seen` samples
    /// (a multiple of `nz`).
    ///
    /// # Panics
    /// If `sigmas.len() != nz` or `seen` is not a position boundary.
    pub fn with_state(params: &CoderParams, sigmas: &[u64], gamma: u32, seen: u64) -> Self {
        assert_eq!(sigmas.len(), params.nz as usize, "one accumulator per band");
        assert_eq!(
            seen % params.nz as u64,
            0,
            "state must sit on a position boundary"
        );
        let mut queue = VecDeque::with_capacity(params.nz as usize);
        queue.extend(sigmas.iter().map(|&s| (s, gamma)));
        Self {
            queue,
            nz: params.nz,
            gamma_star: params.gamma_star,
            accumulator_bits: params.accumulator_bits(),
            d: params.d,
            max_delta: params.max_delta(),
            total: params.sample_count(),
            seen,
        }
    }

    /// Spatial position of the next sample.
    pub fn t(&self) -> u64 {
        self.seen / self.nz as u64
    }

    /// Band of the next sample.
    pub fn z(&self) -> u32 {
        (self.seen % self.nz as u64) as u32
    }

    pub fn finished(&self) -> bool {
        self.seen >= self.total
    }

    /// Queue occupancy; always `nz`.
    pub fn depth(&self) -> usize {
        self.queue.len()
    }

    /// Counter value the next update will read.
    pub fn gamma(&self) -> u32 {
        self.queue.front().map_or(0, |e| e.1)
    }

    /// Accumulators in band order, without consuming them.
    pub fn accumulators(&self) -> Vec<u64> {
        let mut out = vec![0; self.nz as usize];
        let z0 = self.z() as usize;
        for (i, &(s, _)) in self.queue.iter().enumerate() {
            out[(z0 + i) % self.nz as usize] = s;
        }
        out
    }

    /// Consumes the next sample in BIP order.
    pub fn step(&mut self, delta: u64) -> Result<AcssStep, EncodeError> {
        if delta > self.max_delta {
            return Err(EncodeError::SampleRange {
                index: self.seen,
                value: delta,
                d: self.d,
            });
        }
        let (t, z) = (self.t(), self.z());
        let stats = if t == 0 {
            self.seen += 1;
            None
        } else {
            Some(self.update(delta)?)
        };
        Ok(AcssStep { t, z, delta, stats })
    }

    /// Updates the next band's statistics with `delta`. Must not be called
    /// for the first spatial position.
    pub fn update(&mut self, delta: u64) -> Result<AcssOutput, EncodeError> {
        debug_assert!(self.t() > 0, "the first position bypasses the statistics");
        let (sigma_prev, gamma_prev) = self.queue.pop_front().expect("queue holds nz entries");
        let out = update_statistics(sigma_prev, gamma_prev, delta, self.gamma_star);
        if out.sigma >> self.accumulator_bits != 0 {
            return Err(EncodeError::AccumulatorOverflow {
                sigma: out.sigma,
                bits: self.accumulator_bits,
            });
        }
        self.queue.push_back((out.sigma, out.gamma));
        self.seen += 1;
        Ok(out)
    }

    /// Final `Σ̃_z` for `z = 0..nz`, emptying the queue.
    pub fn drain_final_accumulators(&mut self) -> Result<Vec<u64>, EncodeError> {
        if !self.finished() {
            return Err(EncodeError::NotFinished);
        }
        debug_assert_eq!(self.z(), 0);
        Ok(self.queue.drain(..).map(|(s, _)| s).collect())
    }
}
