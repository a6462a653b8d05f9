//! Direct per-sample transcription: plain arrays for the statistics, one
//! address register per table, codewords written straight to the sink.

use super::{check_inputs, EncodeOptions, EncodeResult, SampleStream};
use crate::assembler::{BitSink, EmissionTrace, Position};
use crate::coder_high::{compute_k, encode_gpo2, select_hilo};
use crate::coder_low::select_code_index;
use crate::codetables::{CodeTableRom, CodeTableSet, StepResult};
use crate::codeword::{Codeword, CodewordKind};
use crate::config::CoderParams;
use crate::error::EncodeError;

fn put(sink: &mut BitSink, trace: &mut EmissionTrace, cw: Codeword, position: Position) {
    sink.emit(cw);
    trace.record(cw, position);
}

#[allow(clippy::needless_range_loop)]
pub fn encode_reference(
    stream: &SampleStream,
    params: &CoderParams,
    tables: &CodeTableSet,
    options: EncodeOptions,
) -> Result<EncodeResult, EncodeError> {
    check_inputs(stream, params)?;
    let (nz, d, umax) = (params.nz as usize, params.d, params.umax);
    let positions = params.spatial_positions();
    let saturated = (1u32 << params.gamma_star) - 1;
    let acc_bits = params.accumulator_bits();
    let t0 = tables.table(0).threshold();

    let mut sigma = vec![params.accumulator_init; nz];
    let mut gamma = params.initial_counter();
    let mut address = vec![CodeTableRom::ROOT; tables.len()];
    let mut sink = BitSink::new();
    let mut trace = EmissionTrace::new(options.record_trace);

    for t in 0..positions {
        let rescale = t > 0 && gamma == saturated;
        for z in 0..nz {
            let delta = stream.samples()[(t as usize) * nz + z] as u64;
            let here = Position::Sample { t, z: z as u32 };
            trace.counters.samples += 1;
            if t == 0 {
                put(
                    &mut sink,
                    &mut trace,
                    Codeword::new(delta, d, CodewordKind::Uncompressed),
                    here,
                );
                trace.counters.uncompressed += 1;
                continue;
            }

            let sum = sigma[z] + 4 * delta;
            let gamma_now = if rescale {
                gamma.div_ceil(2)
            } else {
                gamma + 1
            };
            if rescale {
                put(
                    &mut sink,
                    &mut trace,
                    Codeword::new(sum & 1, 1, CodewordKind::RescaleBit),
                    here,
                );
                trace.counters.rescale_bits += 1;
                sigma[z] = sum.div_ceil(2);
            } else {
                sigma[z] = sum;
            }
            if sigma[z] >> acc_bits != 0 {
                return Err(EncodeError::AccumulatorOverflow {
                    sigma: sigma[z],
                    bits: acc_bits,
                });
            }

            if select_hilo(sigma[z], gamma_now, t0) {
                let k = compute_k(sigma[z], gamma_now, d);
                put(&mut sink, &mut trace, encode_gpo2(delta, k, d, umax), here);
                trace.counters.high += 1;
                continue;
            }

            let (i, limit) = select_code_index(sigma[z], gamma_now, tables)?;
            let escaped = delta > limit as u64;
            let symbol = if escaped { limit + 1 } else { delta as u32 };
            if escaped {
                let residual = encode_gpo2(delta - limit as u64 - 1, 0, d, umax);
                put(
                    &mut sink,
                    &mut trace,
                    residual.with_kind(CodewordKind::EscapeResidual),
                    here,
                );
                trace.counters.escapes += 1;
            }
            match tables.table(i).rom.lookup_step(address[i], symbol) {
                StepResult::Match { codeword, next } => {
                    put(&mut sink, &mut trace, codeword, here);
                    trace.counters.low_match += 1;
                    address[i] = next;
                }
                StepResult::Continue(next) => {
                    trace.counters.low_continue += 1;
                    address[i] = next;
                }
            }
        }
        if t > 0 {
            gamma = if rescale {
                gamma.div_ceil(2)
            } else {
                gamma + 1
            };
        }
    }

    // compressed image tail
    for (i, table) in tables.tables().iter().enumerate() {
        let flush = table
            .rom
            .flush_word(address[i])
            .with_kind(CodewordKind::Flush);
        put(&mut sink, &mut trace, flush, Position::Tail);
        trace.counters.flushes += 1;
    }
    for &s in &sigma {
        put(
            &mut sink,
            &mut trace,
            Codeword::new(s, acc_bits, CodewordKind::TailAccumulator),
            Position::Tail,
        );
        trace.counters.tail_accumulators += 1;
    }

    Ok(EncodeResult {
        packed: sink.finalize(),
        trace,
        final_accumulators: sigma,
        final_gamma: gamma,
        transcript: None,
    })
}
