//! Low-entropy variable-to-variable code tables.
//!
//! A table maps sequences of input symbols `0..=L` (plus the escape symbol
//! `L + 1`) to output codewords. The sequences form a complete prefix-free
//! set, so they are naturally a trie: internal nodes are incomplete prefixes
//! and carry a flush word, leaves carry the output codeword. [`build_trie`]
//! checks all of that, [`rom::compile_rom`] linearizes the trie breadth-first
//! into an array addressed by `pointer + symbol`.

mod parse;
pub mod rom;

use std::collections::HashMap;

pub use parse::{
    load_tableset, parse_codeword, parse_tableset, write_tableset, CodeTable, CodeTableSet,
};
pub use rom::{compile_rom, CodeTableRom, RomCell, RomPayload, StepResult};

use crate::codeword::{Codeword, CodewordKind};
use crate::error::TableError;

/// An input symbol; the escape symbol of a table with limit `L` is `L + 1`.
pub type Symbol = u32;

/// Number of low-entropy codes the coder selects between.
pub const TABLE_COUNT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub symbols: Vec<Symbol>,
    pub codeword: Codeword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlushEntry {
    pub prefix: Vec<Symbol>,
    pub codeword: Codeword,
}

/// Source form of one code table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTableSpec {
    pub index: usize,
    /// Selection threshold `T_i`.
    pub threshold: u64,
    /// Symbol limit `L_i`.
    pub limit: u32,
    pub entries: Vec<TableEntry>,
    pub flushes: Vec<FlushEntry>,
}

impl CodeTableSpec {
    pub fn escape(&self) -> Symbol {
        self.limit + 1
    }

    /// Number of distinct symbols, `L + 2`.
    pub fn alphabet(&self) -> u32 {
        self.limit + 2
    }

    pub fn format_sequence(&self, symbols: &[Symbol]) -> String {
        format_sequence(symbols, self.limit)
    }

    /// Flush word for an active prefix, looked up directly in the flush list.
    pub fn flush_for(&self, prefix: &[Symbol]) -> Option<Codeword> {
        self.flushes
            .iter()
            .find(|f| f.prefix == prefix)
            .map(|f| f.codeword)
    }
}

/// Renders a symbol sequence the way table files write it.
///
/// `(null)` for the empty sequence; one character per symbol when every
/// symbol is a single digit (limit ≤ 8); comma-separated otherwise. The
/// escape symbol is written `X`.
pub fn format_sequence(symbols: &[Symbol], limit: u32) -> String {
    if symbols.is_empty() {
        return "(null)".to_string();
    }
    let one = |s: &Symbol| {
        if *s == limit + 1 {
            "X".to_string()
        } else {
            s.to_string()
        }
    };
    if limit <= 8 {
        symbols.iter().map(one).collect()
    } else {
        symbols.iter().map(one).collect::<Vec<_>>().join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrieNode {
    Internal {
        flush: Codeword,
        /// Child node ids indexed by symbol, `L + 2` of them.
        children: Vec<usize>,
    },
    Terminal {
        codeword: Codeword,
    },
}

/// Validated prefix trie of one table. Node 0 is the root (the null sequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trie {
    pub index: usize,
    pub limit: u32,
    nodes: Vec<TrieNode>,
}

impl Trie {
    pub const ROOT: usize = 0;

    pub fn node(&self, id: usize) -> &TrieNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TrieNode] {
        &self.nodes
    }

    pub fn child(&self, id: usize, symbol: Symbol) -> Option<usize> {
        match &self.nodes[id] {
            TrieNode::Internal { children, .. } => children.get(symbol as usize).copied(),
            TrieNode::Terminal { .. } => None,
        }
    }

    pub fn alphabet(&self) -> u32 {
        self.limit + 2
    }

    pub fn terminal_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TrieNode::Terminal { .. }))
            .count()
    }
}

// Construction-time node with optional links.
struct Draft {
    terminal: Option<Codeword>,
    flush: Option<Codeword>,
    children: Vec<Option<usize>>,
}

impl Draft {
    fn new(alphabet: usize) -> Self {
        Self {
            terminal: None,
            flush: None,
            children: vec![None; alphabet],
        }
    }
}

/// Builds and validates the trie of a table.
pub fn build_trie(spec: &CodeTableSpec) -> Result<Trie, TableError> {
    let table = spec.index;
    let alphabet = spec.alphabet() as usize;
    let fmt = |s: &[Symbol]| spec.format_sequence(s);
    if spec.entries.is_empty() {
        return Err(TableError::Empty { table });
    }

    let check_cw = |cw: &Codeword| {
        if cw.is_empty() {
            Err(TableError::CodewordLength { table, length: 0 })
        } else {
            Ok(())
        }
    };

    let mut drafts = vec![Draft::new(alphabet)];
    for entry in &spec.entries {
        check_cw(&entry.codeword)?;
        if entry.symbols.is_empty() {
            return Err(TableError::PrefixViolation {
                table,
                sequence: fmt(&entry.symbols),
            });
        }
        let mut node = Trie::ROOT;
        for (depth, &symbol) in entry.symbols.iter().enumerate() {
            if symbol > spec.escape() {
                return Err(TableError::SymbolOutOfRange {
                    table,
                    symbol,
                    max: spec.escape(),
                    sequence: fmt(&entry.symbols),
                });
            }
            if drafts[node].terminal.is_some() {
                // an earlier entry ends at this proper prefix
                return Err(TableError::PrefixViolation {
                    table,
                    sequence: fmt(&entry.symbols),
                });
            }
            let next = match drafts[node].children[symbol as usize] {
                Some(next) => next,
                None => {
                    drafts.push(Draft::new(alphabet));
                    let id = drafts.len() - 1;
                    drafts[node].children[symbol as usize] = Some(id);
                    id
                }
            };
            node = next;
            let last = depth + 1 == entry.symbols.len();
            if last {
                if drafts[node].terminal.is_some() {
                    return Err(TableError::Duplicate {
                        table,
                        sequence: fmt(&entry.symbols),
                    });
                }
                if drafts[node].children.iter().any(Option::is_some) {
                    return Err(TableError::PrefixViolation {
                        table,
                        sequence: fmt(&entry.symbols),
                    });
                }
                drafts[node].terminal = Some(entry.codeword.with_kind(CodewordKind::Low));
            }
        }
    }

    for flush in &spec.flushes {
        check_cw(&flush.codeword)?;
        let stray = || TableError::StrayFlush {
            table,
            prefix: fmt(&flush.prefix),
        };
        let mut node = Trie::ROOT;
        for &symbol in &flush.prefix {
            if symbol > spec.escape() {
                return Err(stray());
            }
            node = drafts[node].children[symbol as usize].ok_or_else(stray)?;
        }
        if drafts[node].terminal.is_some() {
            return Err(stray());
        }
        if drafts[node].flush.is_some() {
            return Err(TableError::DuplicateFlush {
                table,
                prefix: fmt(&flush.prefix),
            });
        }
        drafts[node].flush = Some(flush.codeword.with_kind(CodewordKind::Flush));
    }

    // Completeness, escape termination and flush coverage, walking prefixes
    // depth-first so errors name the offending prefix.
    let mut nodes: Vec<Option<TrieNode>> = (0..drafts.len()).map(|_| None).collect();
    let mut stack = vec![(Trie::ROOT, Vec::<Symbol>::new())];
    while let Some((id, prefix)) = stack.pop() {
        let draft = &drafts[id];
        if let Some(codeword) = draft.terminal {
            nodes[id] = Some(TrieNode::Terminal { codeword });
            continue;
        }
        let mut children = Vec::with_capacity(alphabet);
        for (symbol, child) in draft.children.iter().enumerate() {
            let child = child.ok_or_else(|| TableError::Incomplete {
                table,
                prefix: fmt(&prefix),
                symbol: symbol as u32,
            })?;
            children.push(child);
        }
        if drafts[children[spec.escape() as usize]].terminal.is_none() {
            return Err(TableError::EscapeNotTerminal {
                table,
                prefix: fmt(&prefix),
            });
        }
        let flush = draft.flush.ok_or_else(|| TableError::MissingFlush {
            table,
            prefix: fmt(&prefix),
        })?;
        for (symbol, &child) in children.iter().enumerate().rev() {
            let mut p = prefix.clone();
            p.push(symbol as u32);
            stack.push((child, p));
        }
        nodes[id] = Some(TrieNode::Internal { flush, children });
    }

    Ok(Trie {
        index: table,
        limit: spec.limit,
        nodes: nodes
            .into_iter()
            .map(|n| n.expect("every draft node is reachable"))
            .collect(),
    })
}

/// All complete sequences of a trie with their codewords, depth-first.
pub fn trie_entries(trie: &Trie) -> Vec<(Vec<Symbol>, Codeword)> {
    let mut out = Vec::new();
    let mut stack = vec![(Trie::ROOT, Vec::new())];
    while let Some((id, prefix)) = stack.pop() {
        match trie.node(id) {
            TrieNode::Terminal { codeword } => out.push((prefix, *codeword)),
            TrieNode::Internal { children, .. } => {
                for (s, &c) in children.iter().enumerate() {
                    let mut p = prefix.clone();
                    p.push(s as Symbol);
                    stack.push((c, p));
                }
            }
        }
    }
    out
}

/// Map from every incomplete prefix to its flush word.
pub fn trie_flushes(trie: &Trie) -> HashMap<Vec<Symbol>, Codeword> {
    let mut out = HashMap::new();
    let mut stack = vec![(Trie::ROOT, Vec::new())];
    while let Some((id, prefix)) = stack.pop() {
        if let TrieNode::Internal { flush, children } = trie.node(id) {
            for (s, &c) in children.iter().enumerate() {
                let mut p = prefix.clone();
                p.push(s as Symbol);
                stack.push((c, p));
            }
            out.insert(prefix, *flush);
        }
    }
    out
}
