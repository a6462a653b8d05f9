//! Codeword combiner and 64-bit packer.
//!
//! Codewords enter the stream MSB-first: the leftmost bit of a codeword is
//! written first, and every output word is filled from bit 63 down. On disk
//! the words are stored big-endian and the last word is zero-padded.

use crate::acss::AcssOutput;
use crate::coder_low::LowEmission;
use crate::codeword::{Codeword, CodewordKind};
use crate::error::EncodeError;

/// Accumulates codewords into 64-bit words.
#[derive(Debug, Clone, Default)]
pub struct BitSink {
    words: Vec<u64>,
    current: u64,
    cursor: u32,
    total_bits: u64,
}

impl BitSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: u64) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64) as usize),
            ..Self::default()
        }
    }

    pub fn total_bits(&self) -> u64 {
        self.total_bits
    }

    /// Bits already placed in the word under construction.
    pub fn cursor(&self) -> u32 {
        self.cursor
    }

    pub fn completed_words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn emit(&mut self, cw: Codeword) {
        let len = cw.len();
        debug_assert!(len >= 1);
        let free = 64 - self.cursor;
        if len < free {
            self.current |= cw.bits << (free - len);
            self.cursor += len;
        } else {
            let spill = len - free;
            // free ≥ 1, so the shift is at most 63
            self.current |= cw.bits >> spill;
            self.words.push(self.current);
            self.current = if spill == 0 {
                0
            } else {
                cw.bits << (64 - spill)
            };
            self.cursor = spill;
        }
        self.total_bits += len as u64;
    }

    /// Pads the last partial word with zeros.
    pub fn finalize(mut self) -> PackedBits {
        if self.cursor > 0 {
            self.words.push(self.current);
        }
        PackedBits {
            words: self.words,
            total_bits: self.total_bits,
        }
    }
}

/// A finished bitstream.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PackedBits {
    pub words: Vec<u64>,
    pub total_bits: u64,
}

impl PackedBits {
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.words.iter().flat_map(|w| w.to_be_bytes()).collect()
    }

    /// First word index at which two streams differ, or `None` if identical.
    pub fn first_difference(&self, other: &PackedBits) -> Option<usize> {
        let common = self.words.len().min(other.words.len());
        (0..common)
            .find(|&i| self.words[i] != other.words[i])
            .or_else(|| {
                (self.words.len() != other.words.len() || self.total_bits != other.total_bits)
                    .then_some(common)
            })
    }
}

/// Where a codeword came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Sample { t: u64, z: u32 },
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub codeword: Codeword,
    pub position: Position,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceCounters {
    pub samples: u64,
    pub high: u64,
    pub low_match: u64,
    /// Low-path samples that only extended a prefix.
    pub low_continue: u64,
    pub escapes: u64,
    pub rescale_bits: u64,
    pub uncompressed: u64,
    pub flushes: u64,
    pub tail_accumulators: u64,
    pub bits: u64,
}

impl TraceCounters {
    pub fn low(&self) -> u64 {
        self.low_match + self.low_continue
    }

    pub fn to_lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("samples", self.samples.to_string()),
            ("high_samples", self.high.to_string()),
            ("low_samples", self.low().to_string()),
            ("low_matches", self.low_match.to_string()),
            ("escapes", self.escapes.to_string()),
            ("rescale_bits", self.rescale_bits.to_string()),
            ("uncompressed_samples", self.uncompressed.to_string()),
            ("flush_codewords", self.flushes.to_string()),
            ("tail_accumulators", self.tail_accumulators.to_string()),
            ("total_bits", self.bits.to_string()),
        ]
    }
}

/// Ordered record of everything written to the bitstream.
///
/// Counters are always kept; the entry list only when requested, since it
/// costs a few words per codeword.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmissionTrace {
    pub counters: TraceCounters,
    entries: Option<Vec<TraceEntry>>,
}

impl EmissionTrace {
    pub fn new(record_entries: bool) -> Self {
        Self {
            counters: TraceCounters::default(),
            entries: record_entries.then(Vec::new),
        }
    }

    pub fn entries(&self) -> Option<&[TraceEntry]> {
        self.entries.as_deref()
    }

    /// Sum of recorded codeword lengths; equals `counters.bits`.
    pub fn entry_bits(&self) -> Option<u64> {
        self.entries
            .as_ref()
            .map(|e| e.iter().map(|en| en.codeword.len() as u64).sum())
    }

    pub(crate) fn record(&mut self, codeword: Codeword, position: Position) {
        self.counters.bits += codeword.len() as u64;
        if let Some(entries) = &mut self.entries {
            entries.push(TraceEntry { codeword, position });
        }
    }
}

fn put(sink: &mut BitSink, trace: &mut EmissionTrace, cw: Codeword, position: Position) {
    sink.emit(cw);
    trace.record(cw, position);
}

/// Everything the combiner sees for one sample.
#[derive(Debug, Clone, Copy)]
pub struct CombinerInput {
    pub t: u64,
    pub z: u32,
    pub delta: u64,
    /// Set for the first spatial position.
    pub first: bool,
    pub acss: Option<AcssOutput>,
    pub hilo: Option<bool>,
    pub high: Option<Codeword>,
    pub low: Option<LowEmission>,
}

/// Writes one sample's codewords in stream order and returns the combiner
/// slots it occupied (one, plus one for an escape residual).
///
/// Order: rescale bit, then either the `d`-bit uncompressed sample, the high
/// codeword, or the escape residual followed by the matched low codeword.
pub fn combine(
    sink: &mut BitSink,
    trace: &mut EmissionTrace,
    input: &CombinerInput,
    d: u32,
) -> Result<u32, EncodeError> {
    let position = Position::Sample {
        t: input.t,
        z: input.z,
    };
    if input.first {
        if input.acss.is_some() {
            return Err(EncodeError::ConflictingFlags(
                "first sample carries statistics",
            ));
        }
        if input.hilo.is_some() || input.high.is_some() || input.low.is_some() {
            return Err(EncodeError::ConflictingFlags(
                "first sample routed to a coder",
            ));
        }
    } else {
        if input.acss.is_none() {
            return Err(EncodeError::ConflictingFlags(
                "coded sample without statistics",
            ));
        }
        match (input.hilo, input.high.is_some(), input.low.is_some()) {
            (Some(true), true, false) | (Some(false), false, true) => {}
            _ => {
                return Err(EncodeError::ConflictingFlags(
                    "hilo flag disagrees with coder outputs",
                ))
            }
        }
    }

    trace.counters.samples += 1;
    if let Some(stats) = input.acss.filter(|s| s.rescaled) {
        let bit = Codeword::new(stats.rescale_bit as u64, 1, CodewordKind::RescaleBit);
        put(sink, trace, bit, position);
        trace.counters.rescale_bits += 1;
    }

    if input.first {
        put(
            sink,
            trace,
            Codeword::new(input.delta, d, CodewordKind::Uncompressed),
            position,
        );
        trace.counters.uncompressed += 1;
        return Ok(1);
    }
    if let Some(cw) = input.high {
        put(sink, trace, cw, position);
        trace.counters.high += 1;
        return Ok(1);
    }
    let low = input.low.expect("checked above");
    for cw in low.codewords() {
        put(sink, trace, cw, position);
    }
    if low.matched.is_some() {
        trace.counters.low_match += 1;
    } else {
        trace.counters.low_continue += 1;
    }
    if low.is_escape() {
        trace.counters.escapes += 1;
        Ok(2)
    } else {
        Ok(1)
    }
}

/// Flush codewords in table order, then each band's final accumulator as a
/// field of `accumulator_bits` bits.
pub fn build_tail(
    sink: &mut BitSink,
    trace: &mut EmissionTrace,
    flushes: &[Codeword],
    accumulators: &[u64],
    accumulator_bits: u32,
) {
    for &cw in flushes {
        put(
            sink,
            trace,
            cw.with_kind(CodewordKind::Flush),
            Position::Tail,
        );
        trace.counters.flushes += 1;
    }
    for &sigma in accumulators {
        let field = Codeword::new(sigma, accumulator_bits, CodewordKind::TailAccumulator);
        put(sink, trace, field, Position::Tail);
        trace.counters.tail_accumulators += 1;
    }
}
