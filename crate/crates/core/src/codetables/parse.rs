//! Plain-text table files.
//!
//! ```text
//! # comment
//! table 0 threshold=16384 limit=1
//! code  0   4'hA
//! code  X   5'hB
//! code  10  4'hC
//! flush -   1'h0
//! end
//! ```
//!
//! Sequences: `-` or `(null)` for the empty sequence; `X` is the escape
//! symbol `limit + 1`. With `limit <= 8` every character is one symbol;
//! otherwise symbols are comma-separated (`10,X`). A lone number with no
//! comma is a single symbol when `limit > 8`.
//!
//! Codewords: `<len>'h<hex>`, `<len>'b<bin>`, `<len>'d<dec>`, or `0b<bits>`
//! where the digit count is the length.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{
    build_trie, compile_rom, format_sequence, CodeTableRom, CodeTableSpec, FlushEntry, Symbol,
    TableEntry, Trie, TABLE_COUNT,
};
use crate::codeword::{Codeword, CodewordKind};
use crate::error::TableSetError;

/// A validated table in both forms.
#[derive(Debug, Clone)]
pub struct CodeTable {
    pub spec: CodeTableSpec,
    pub trie: Trie,
    pub rom: CodeTableRom,
}

impl CodeTable {
    pub fn new(spec: CodeTableSpec) -> Result<Self, TableSetError> {
        let trie = build_trie(&spec)?;
        let rom = compile_rom(&trie);
        Ok(Self { spec, trie, rom })
    }

    pub fn threshold(&self) -> u64 {
        self.spec.threshold
    }

    pub fn limit(&self) -> u32 {
        self.spec.limit
    }
}

/// The loaded low-entropy code family. Immutable once built.
#[derive(Debug, Clone)]
pub struct CodeTableSet {
    tables: Vec<CodeTable>,
    warnings: Vec<String>,
}

impl CodeTableSet {
    /// Builds a set from specs in index order (1 to 16 tables).
    pub fn from_specs(specs: Vec<CodeTableSpec>) -> Result<Self, TableSetError> {
        if specs.is_empty() {
            return Err(TableSetError::NoTables);
        }
        if specs.len() > TABLE_COUNT {
            return Err(TableSetError::TooMany(specs.len()));
        }
        let tables = specs
            .into_iter()
            .map(CodeTable::new)
            .collect::<Result<Vec<_>, _>>()?;
        let mut warnings = Vec::new();
        for pair in tables.windows(2) {
            if pair[1].threshold() >= pair[0].threshold() {
                warnings.push(format!(
                    "threshold of table {} ({}) is not below table {} ({}); code selection expects decreasing thresholds",
                    pair[1].spec.index,
                    pair[1].threshold(),
                    pair[0].spec.index,
                    pair[0].threshold()
                ));
            }
        }
        Ok(Self { tables, warnings })
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// True when all sixteen codes are present.
    pub fn is_full(&self) -> bool {
        self.tables.len() == TABLE_COUNT
    }

    pub fn tables(&self) -> &[CodeTable] {
        &self.tables
    }

    pub fn table(&self, i: usize) -> &CodeTable {
        &self.tables[i]
    }

    pub fn thresholds(&self) -> impl Iterator<Item = u64> + '_ {
        self.tables.iter().map(CodeTable::threshold)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// SHA-256 over thresholds and ROM images, hex encoded.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        for t in &self.tables {
            hasher.update(t.threshold().to_be_bytes());
            hasher.update(t.rom.to_bytes());
        }
        hasher
            .finalize()
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }

    /// ROM dumps of every table, with a header line per table.
    pub fn dump_roms(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            let _ = writeln!(
                out,
                "# table {} threshold={} limit={} cells={}",
                t.spec.index,
                t.threshold(),
                t.limit(),
                t.rom.len()
            );
            out.push_str(&t.rom.dump());
        }
        out
    }
}

/// Reads and validates a table file.
pub fn load_tableset(path: &Path) -> Result<CodeTableSet, TableSetError> {
    let text = std::fs::read_to_string(path).map_err(|source| TableSetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_tableset(&text)
}

struct Pending {
    line: usize,
    spec: CodeTableSpec,
}

pub fn parse_tableset(text: &str) -> Result<CodeTableSet, TableSetError> {
    let mut specs = Vec::new();
    let mut current: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| TableSetError::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        match keyword {
            "table" => {
                if let Some(open) = &current {
                    return Err(err(format!(
                        "table opened at line {} is missing `end`",
                        open.line
                    )));
                }
                let index: usize = words
                    .next()
                    .ok_or_else(|| err("`table` needs an index".into()))?
                    .parse()
                    .map_err(|_| err("table index must be an integer".into()))?;
                if index != specs.len() {
                    return Err(err(format!(
                        "expected table {}, found table {index}",
                        specs.len()
                    )));
                }
                let mut threshold = None;
                let mut limit = None;
                for word in words {
                    let (k, v) = word
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected key=value, got `{word}`")))?;
                    match k {
                        "threshold" => {
                            threshold = Some(
                                v.parse::<u64>()
                                    .map_err(|_| err(format!("bad threshold `{v}`")))?,
                            )
                        }
                        "limit" => {
                            limit = Some(
                                v.parse::<u32>()
                                    .map_err(|_| err(format!("bad limit `{v}`")))?,
                            )
                        }
                        other => return Err(err(format!("unknown table attribute `{other}`"))),
                    }
                }
                let limit = limit.ok_or_else(|| err("table needs limit=".into()))?;
                if limit >= u32::MAX / 2 {
                    return Err(err(format!("limit {limit} too large")));
                }
                current = Some(Pending {
                    line: line_no,
                    spec: CodeTableSpec {
                        index,
                        threshold: threshold.ok_or_else(|| err("table needs threshold=".into()))?,
                        limit,
                        entries: Vec::new(),
                        flushes: Vec::new(),
                    },
                });
            }
            "code" | "flush" => {
                let pending = current
                    .as_mut()
                    .ok_or_else(|| err(format!("`{keyword}` outside a table block")))?;
                let (seq, cw) = match (words.next(), words.next(), words.next()) {
                    (Some(seq), Some(cw), None) => (seq, cw),
                    _ => {
                        return Err(err(format!(
                            "`{keyword}` expects a sequence and a codeword"
                        )))
                    }
                };
                let symbols = parse_sequence(seq, pending.spec.limit).map_err(err)?;
                if keyword == "code" {
                    let codeword = parse_codeword(cw, CodewordKind::Low).map_err(err)?;
                    pending.spec.entries.push(TableEntry { symbols, codeword });
                } else {
                    let codeword = parse_codeword(cw, CodewordKind::Flush).map_err(err)?;
                    pending.spec.flushes.push(FlushEntry {
                        prefix: symbols,
                        codeword,
                    });
                }
            }
            "end" => {
                let pending = current
                    .take()
                    .ok_or_else(|| err("`end` without `table`".into()))?;
                specs.push(pending.spec);
            }
            other => return Err(err(format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(open) = current {
        return Err(TableSetError::Parse {
            line: open.line,
            message: "table block is missing `end`".into(),
        });
    }
    CodeTableSet::from_specs(specs)
}

fn parse_symbol(token: &str, limit: u32) -> Result<Symbol, String> {
    if token == "X" || token == "x" {
        return Ok(limit + 1);
    }
    token.parse().map_err(|_| format!("bad symbol `{token}`"))
}

fn parse_sequence(token: &str, limit: u32) -> Result<Vec<Symbol>, String> {
    if token == "-" || token == "(null)" {
        return Ok(Vec::new());
    }
    if token.contains(',') {
        return token.split(',').map(|t| parse_symbol(t, limit)).collect();
    }
    if limit <= 8 {
        token
            .chars()
            .map(|c| parse_symbol(c.encode_utf8(&mut [0; 4]), limit))
            .collect()
    } else {
        Ok(vec![parse_symbol(token, limit)?])
    }
}

/// Parses `<len>'h..`, `<len>'b..`, `<len>'d..` or `0b..`.
pub fn parse_codeword(token: &str, kind: CodewordKind) -> Result<Codeword, String> {
    let bad = || format!("bad codeword `{token}`");
    let (len, radix, digits) = if let Some(bits) = token.strip_prefix("0b") {
        (bits.len() as u32, 2, bits)
    } else {
        let (len, rest) = token.split_once('\'').ok_or_else(bad)?;
        let len: u32 = len.parse().map_err(|_| bad())?;
        let mut chars = rest.chars();
        let radix = match chars.next() {
            Some('h' | 'H') => 16,
            Some('b' | 'B') => 2,
            Some('d' | 'D') => 10,
            _ => return Err(bad()),
        };
        (len, radix, chars.as_str())
    };
    if !(1..=Codeword::MAX_LEN).contains(&len) {
        return Err(format!("codeword `{token}` length must be 1..=64"));
    }
    let value = u64::from_str_radix(digits, radix).map_err(|_| bad())?;
    if len < 64 && value >> len != 0 {
        return Err(format!("codeword `{token}` does not fit in {len} bits"));
    }
    Ok(Codeword::new(value, len, kind))
}

/// Writes specs in the table file format; [`parse_tableset`] reads it back.
pub fn write_tableset(specs: &[CodeTableSpec]) -> String {
    let mut out = String::new();
    for spec in specs {
        let _ = writeln!(
            out,
            "table {} threshold={} limit={}",
            spec.index, spec.threshold, spec.limit
        );
        let seq = |s: &[Symbol]| {
            if s.is_empty() {
                "-".to_string()
            } else {
                format_sequence(s, spec.limit)
            }
        };
        for e in &spec.entries {
            let _ = writeln!(
                out,
                "code {} {}'b{}",
                seq(&e.symbols),
                e.codeword.len(),
                e.codeword.to_bit_string()
            );
        }
        for f in &spec.flushes {
            let _ = writeln!(
                out,
                "flush {} {}'b{}",
                seq(&f.prefix),
                f.codeword.len(),
                f.codeword.to_bit_string()
            );
        }
        out.push_str("end\n");
    }
    out
}
