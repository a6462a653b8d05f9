//! Low-entropy path: code index selection, input symbol mapping and the
//! per-table address registers.

use crate::coder_high::{encode_gpo2, THRESHOLD_SHIFT};
use crate::codetables::{CodeTableRom, CodeTableSet, StepResult, Symbol, TABLE_COUNT};
use crate::codeword::{Codeword, CodewordKind};
use crate::error::EncodeError;

/// Largest table index `i` with `Σ̃·2^14 ≤ T_i·Γ`, and its symbol limit.
///
/// Every loaded table is compared; with fewer than sixteen tables the search
/// is limited to those present.
pub fn select_code_index(
    sigma: u64,
    gamma: u32,
    tables: &CodeTableSet,
) -> Result<(usize, u32), EncodeError> {
    let lhs = (sigma as u128) << THRESHOLD_SHIFT;
    let mut selected = None;
    for (i, t) in tables.tables().iter().enumerate() {
        if lhs <= t.threshold() as u128 * gamma as u128 {
            selected = Some((i, t.limit()));
        }
    }
    selected.ok_or(EncodeError::NoCodeIndex { sigma, gamma })
}

/// `delta` itself when it is at most `limit`, otherwise the escape symbol `limit + 1`.
#[inline]
pub fn map_input_symbol(delta: u64, limit: u32) -> Symbol {
    if delta <= limit as u64 {
        delta as Symbol
    } else {
        limit + 1
    }
}

/// Codewords produced by one low-entropy sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LowEmission {
    /// GPO2 codeword of `delta − L − 1`, present only for an escape. Precedes `matched`.
    pub residual: Option<Codeword>,
    pub matched: Option<Codeword>,
}

impl LowEmission {
    pub fn is_escape(&self) -> bool {
        self.residual.is_some()
    }

    pub fn codewords(&self) -> impl Iterator<Item = Codeword> {
        self.residual.into_iter().chain(self.matched)
    }
}

/// Current ROM address of each table, i.e. its active prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowCoderState {
    ct_address: [u32; TABLE_COUNT],
}

impl Default for LowCoderState {
    fn default() -> Self {
        Self::new()
    }
}

impl LowCoderState {
    pub fn new() -> Self {
        Self {
            ct_address: [CodeTableRom::ROOT; TABLE_COUNT],
        }
    }

    pub fn address(&self, table: usize) -> u32 {
        self.ct_address[table]
    }

    pub fn addresses(&self) -> &[u32; TABLE_COUNT] {
        &self.ct_address
    }

    /// Feeds `symbol` to table `i`: one read-add-lookup-writeback of its address.
    #[allow(clippy::too_many_arguments)]
    pub fn advance(
        &mut self,
        tables: &CodeTableSet,
        i: usize,
        symbol: Symbol,
        delta: u64,
        limit: u32,
        d: u32,
        umax: u32,
    ) -> LowEmission {
        let rom = &tables.table(i).rom;
        let step = rom.lookup_step(self.ct_address[i], symbol);
        let residual = (symbol == limit + 1).then(|| {
            encode_gpo2(delta - limit as u64 - 1, 0, d, umax)
                .with_kind(CodewordKind::EscapeResidual)
        });
        match step {
            StepResult::Match { codeword, next } => {
                self.ct_address[i] = next;
                LowEmission {
                    residual,
                    matched: Some(codeword),
                }
            }
            StepResult::Continue(next) => {
                debug_assert!(residual.is_none(), "escape always completes a codeword");
                self.ct_address[i] = next;
                LowEmission::default()
            }
        }
    }

    /// Flush word of every loaded table in index order; addresses reset to the roots.
    pub fn flush_all(&mut self, tables: &CodeTableSet) -> Vec<Codeword> {
        let words = tables
            .tables()
            .iter()
            .enumerate()
            .map(|(i, t)| t.rom.flush_word(self.ct_address[i]))
            .collect();
        self.ct_address = [CodeTableRom::ROOT; TABLE_COUNT];
        words
    }
}
