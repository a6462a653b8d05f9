//! Staged encoder: statistics, coder selection, high and low coders,
//! combiner and packer, each a separate unit exchanging one message per
//! sample.

use super::{check_inputs, EncodeOptions, EncodeResult, SampleStream};
use crate::acss::{AcssState, AcssStep};
use crate::assembler::{build_tail, combine, BitSink, CombinerInput, EmissionTrace};
use crate::coder_high::{compute_k, encode_gpo2, select_hilo};
use crate::coder_low::{map_input_symbol, select_code_index, LowCoderState, LowEmission};
use crate::codetables::{CodeTableSet, TABLE_COUNT};
use crate::codeword::Codeword;
use crate::config::CoderParams;
use crate::error::EncodeError;

/// How often each stage fired during one encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StageTranscript {
    pub acss_fires: u64,
    pub hilo_fires: u64,
    pub hiec_fires: u64,
    pub loec_fires: u64,
    /// One per sample plus one per escape residual.
    pub combiner_slots: u64,
    /// The tail walks every code index, loaded or not.
    pub tail_flush_slots: u64,
    pub tail_accumulator_slots: u64,
}

impl StageTranscript {
    /// Cycles spent after pipeline fill.
    pub fn busy_cycles(&self) -> u64 {
        self.combiner_slots + self.tail_flush_slots + self.tail_accumulator_slots
    }
}

/// Statistics update, one sample per fire.
#[derive(Debug, Clone)]
pub struct AcssStage {
    state: AcssState,
}

impl AcssStage {
    pub fn new(params: &CoderParams) -> Self {
        Self {
            state: AcssState::init(params),
        }
    }

    pub fn fire(&mut self, delta: u64) -> Result<AcssStep, EncodeError> {
        self.state.step(delta)
    }

    pub fn state(&self) -> &AcssState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut AcssState {
        &mut self.state
    }
}

/// A statistics message annotated with the routing decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HiLoMsg {
    pub step: AcssStep,
    /// `None` for first-position samples, which bypass both coders.
    pub hilo: Option<bool>,
}

#[derive(Debug, Clone, Copy)]
pub struct HiLoStage {
    t0: u64,
}

impl HiLoStage {
    pub fn new(tables: &CodeTableSet) -> Self {
        Self {
            t0: tables.table(0).threshold(),
        }
    }

    pub fn fire(&self, step: AcssStep) -> HiLoMsg {
        let hilo = step.stats.map(|s| select_hilo(s.sigma, s.gamma, self.t0));
        HiLoMsg { step, hilo }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HiEcStage {
    d: u32,
    umax: u32,
}

impl HiEcStage {
    pub fn new(params: &CoderParams) -> Self {
        Self {
            d: params.d,
            umax: params.umax,
        }
    }

    /// Codes the sample if it was routed high.
    pub fn fire(&self, msg: &HiLoMsg) -> Option<Codeword> {
        let stats = msg.step.stats.filter(|_| msg.hilo == Some(true))?;
        let k = compute_k(stats.sigma, stats.gamma, self.d);
        Some(encode_gpo2(msg.step.delta, k, self.d, self.umax))
    }
}

#[derive(Debug, Clone)]
pub struct LoEcStage {
    state: LowCoderState,
    d: u32,
    umax: u32,
}

impl LoEcStage {
    pub fn new(params: &CoderParams) -> Self {
        Self {
            state: LowCoderState::new(),
            d: params.d,
            umax: params.umax,
        }
    }

    /// Codes the sample if it was routed low.
    pub fn fire(
        &mut self,
        tables: &CodeTableSet,
        msg: &HiLoMsg,
    ) -> Result<Option<LowEmission>, EncodeError> {
        let Some(stats) = msg.step.stats.filter(|_| msg.hilo == Some(false)) else {
            return Ok(None);
        };
        let (i, limit) = select_code_index(stats.sigma, stats.gamma, tables)?;
        let symbol = map_input_symbol(msg.step.delta, limit);
        Ok(Some(self.state.advance(
            tables,
            i,
            symbol,
            msg.step.delta,
            limit,
            self.d,
            self.umax,
        )))
    }

    pub fn flush(&mut self, tables: &CodeTableSet) -> Vec<Codeword> {
        self.state.flush_all(tables)
    }

    pub fn state(&self) -> &LowCoderState {
        &self.state
    }
}

/// Incremental encoder: push samples in BIP order, then [`finish`](Self::finish).
///
/// All buffers are sized at construction.
#[derive(Debug)]
pub struct StreamingEncoder<'a> {
    params: CoderParams,
    tables: &'a CodeTableSet,
    acss: AcssStage,
    hilo: HiLoStage,
    hiec: HiEcStage,
    loec: LoEcStage,
    sink: BitSink,
    trace: EmissionTrace,
    transcript: StageTranscript,
}

impl<'a> StreamingEncoder<'a> {
    pub fn new(
        params: &CoderParams,
        tables: &'a CodeTableSet,
        options: EncodeOptions,
    ) -> Result<Self, EncodeError> {
        params.check_codable()?;
        Ok(Self {
            params: *params,
            tables,
            acss: AcssStage::new(params),
            hilo: HiLoStage::new(tables),
            hiec: HiEcStage::new(params),
            loec: LoEcStage::new(params),
            sink: BitSink::with_capacity(params.sample_count() * params.d as u64 / 2),
            trace: EmissionTrace::new(options.record_trace),
            transcript: StageTranscript::default(),
        })
    }

    pub fn push(&mut self, delta: u64) -> Result<(), EncodeError> {
        let step = self.acss.fire(delta)?;
        self.transcript.acss_fires += 1;

        let msg = self.hilo.fire(step);
        if msg.hilo.is_some() {
            self.transcript.hilo_fires += 1;
        }
        let high = self.hiec.fire(&msg);
        if high.is_some() {
            self.transcript.hiec_fires += 1;
        }
        let low = self.loec.fire(self.tables, &msg)?;
        if low.is_some() {
            self.transcript.loec_fires += 1;
        }

        let input = CombinerInput {
            t: step.t,
            z: step.z,
            delta,
            first: step.stats.is_none(),
            acss: step.stats,
            hilo: msg.hilo,
            high,
            low,
        };
        let slots = combine(&mut self.sink, &mut self.trace, &input, self.params.d)?;
        self.transcript.combiner_slots += slots as u64;
        Ok(())
    }

    /// Emits the image tail and returns the finished stream.
    pub fn finish(mut self) -> Result<EncodeResult, EncodeError> {
        let final_gamma = self.acss.state().gamma();
        let accumulators = self.acss.state_mut().drain_final_accumulators()?;
        let flushes = self.loec.flush(self.tables);
        build_tail(
            &mut self.sink,
            &mut self.trace,
            &flushes,
            &accumulators,
            self.params.accumulator_bits(),
        );
        self.transcript.tail_flush_slots = TABLE_COUNT as u64;
        self.transcript.tail_accumulator_slots = accumulators.len() as u64;
        Ok(EncodeResult {
            packed: self.sink.finalize(),
            trace: self.trace,
            final_accumulators: accumulators,
            final_gamma,
            transcript: Some(self.transcript),
        })
    }
}

pub fn encode_streaming(
    stream: &SampleStream,
    params: &CoderParams,
    tables: &CodeTableSet,
    options: EncodeOptions,
) -> Result<EncodeResult, EncodeError> {
    check_inputs(stream, params)?;
    let mut encoder = StreamingEncoder::new(params, tables, options)?;
    for &delta in stream.samples() {
        encoder.push(delta as u64)?;
    }
    encoder.finish()
}
