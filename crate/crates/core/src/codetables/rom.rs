//! Breadth-first ROM image of a code-table trie.
//!
//! Every non-root trie node owns one cell holding its parent's flush word and
//! either its output codeword (leaf) or the base address of its own children
//! (internal node). The children of a node occupy `L + 2` consecutive cells
//! ordered by symbol, so stepping from a node is `address = base + symbol`.
//! The root's children start at address 0, which makes 0 the root "address"
//! kept in the per-table address register.

use std::collections::VecDeque;
use std::fmt::Write as _;

use super::{Symbol, Trie, TrieNode};
use crate::codeword::Codeword;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RomPayload {
    Terminal(Codeword),
    Pointer(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RomCell {
    /// Flush word of the node's parent.
    pub flush: Codeword,
    pub payload: RomPayload,
}

/// Result of feeding one symbol to a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepResult {
    /// A complete sequence: emit `codeword`, the address is back at the root.
    Match { codeword: Codeword, next: u32 },
    /// Prefix extended, nothing emitted.
    Continue(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTableRom {
    pub index: usize,
    pub limit: u32,
    cells: Vec<RomCell>,
}

impl CodeTableRom {
    /// Base address of the root's children; the reset value of the address register.
    pub const ROOT: u32 = 0;

    pub fn cells(&self) -> &[RomCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn root(&self) -> u32 {
        Self::ROOT
    }

    pub fn escape(&self) -> Symbol {
        self.limit + 1
    }

    pub fn terminal_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c.payload, RomPayload::Terminal(_)))
            .count()
    }

    /// One address update: read `base + symbol`, follow or emit.
    #[inline]
    pub fn lookup_step(&self, base: u32, symbol: Symbol) -> StepResult {
        assert!(
            symbol <= self.escape(),
            "symbol {symbol} above escape {}",
            self.escape()
        );
        let addr = (base + symbol) as usize;
        assert!(addr < self.cells.len(), "ROM address {addr} out of bounds");
        match self.cells[addr].payload {
            RomPayload::Terminal(codeword) => StepResult::Match {
                codeword,
                next: Self::ROOT,
            },
            RomPayload::Pointer(next) => StepResult::Continue(next),
        }
    }

    /// Flush word of the prefix whose children start at `base`.
    #[inline]
    pub fn flush_word(&self, base: u32) -> Codeword {
        self.cells[base as usize].flush
    }

    /// Every child-block base reachable from the root, root first.
    pub fn internal_bases(&self) -> Vec<u32> {
        let mut bases = vec![Self::ROOT];
        bases.extend(self.cells.iter().filter_map(|c| match c.payload {
            RomPayload::Pointer(p) => Some(p),
            RomPayload::Terminal(_) => None,
        }));
        bases
    }

    /// Human-readable image, one `address (flush, payload)` line per cell.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (addr, cell) in self.cells.iter().enumerate() {
            let payload = match cell.payload {
                RomPayload::Terminal(cw) => cw.to_verilog(),
                RomPayload::Pointer(p) => format!("ptr = {p}"),
            };
            let _ = writeln!(out, "{addr} ({}, {payload})", cell.flush.to_verilog());
        }
        out
    }

    /// Canonical byte image, used for checksums and determinism checks.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.cells.len() * 19);
        out.extend_from_slice(&(self.index as u32).to_be_bytes());
        out.extend_from_slice(&self.limit.to_be_bytes());
        for cell in &self.cells {
            out.push(cell.flush.len);
            out.extend_from_slice(&cell.flush.bits.to_be_bytes());
            match cell.payload {
                RomPayload::Terminal(cw) => {
                    out.push(cw.len);
                    out.extend_from_slice(&cw.bits.to_be_bytes());
                }
                RomPayload::Pointer(p) => {
                    out.push(0);
                    out.extend_from_slice(&(p as u64).to_be_bytes());
                }
            }
        }
        out
    }
}

/// Linearizes a trie breadth-first into its ROM image.
pub fn compile_rom(trie: &Trie) -> CodeTableRom {
    let alphabet = trie.alphabet() as usize;
    let internal = trie
        .nodes()
        .iter()
        .filter(|n| matches!(n, TrieNode::Internal { .. }))
        .count();
    let mut cells = Vec::with_capacity(internal * alphabet);
    // Blocks are handed out in enqueue order, which equals dequeue order.
    let mut queue = VecDeque::from([Trie::ROOT]);
    let mut next_base = alphabet as u32;
    while let Some(id) = queue.pop_front() {
        let TrieNode::Internal { flush, children } = trie.node(id) else {
            unreachable!("only internal nodes are queued")
        };
        for &child in children {
            let payload = match trie.node(child) {
                TrieNode::Terminal { codeword } => RomPayload::Terminal(*codeword),
                TrieNode::Internal { .. } => {
                    let base = next_base;
                    next_base += alphabet as u32;
                    queue.push_back(child);
                    RomPayload::Pointer(base)
                }
            };
            cells.push(RomCell {
                flush: *flush,
                payload,
            });
        }
    }
    debug_assert_eq!(cells.len(), next_base as usize);
    CodeTableRom {
        index: trie.index,
        limit: trie.limit,
        cells,
    }
}
