use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::config::ParamViolation;

/// Parameter and configuration-file problems.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid parameters: {}", join(.0))]
    Invalid(Vec<ParamViolation>),
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cannot read config {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Why a code table (or table file) was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table {table}: no entries, the code is incomplete")]
    Empty { table: usize },
    #[error("table {table}: symbol {symbol} outside 0..={max} in `{sequence}`")]
    SymbolOutOfRange {
        table: usize,
        symbol: u32,
        max: u32,
        sequence: String,
    },
    #[error("table {table}: duplicate input sequence `{sequence}`")]
    Duplicate { table: usize, sequence: String },
    #[error("table {table}: `{sequence}` violates the prefix-free property")]
    PrefixViolation { table: usize, sequence: String },
    #[error("table {table}: prefix `{prefix}` has no child for symbol {symbol}")]
    Incomplete {
        table: usize,
        prefix: String,
        symbol: u32,
    },
    #[error("table {table}: escape after prefix `{prefix}` does not complete a codeword")]
    EscapeNotTerminal { table: usize, prefix: String },
    #[error("table {table}: prefix `{prefix}` has no flush word")]
    MissingFlush { table: usize, prefix: String },
    #[error("table {table}: flush word for `{prefix}`, which is not an incomplete prefix")]
    StrayFlush { table: usize, prefix: String },
    #[error("table {table}: duplicate flush word for `{prefix}`")]
    DuplicateFlush { table: usize, prefix: String },
    #[error("table {table}: codeword of length {length} (must be 1..=64)")]
    CodewordLength { table: usize, length: u32 },
}

/// Table-file loading failure.
#[derive(Debug, Error)]
pub enum TableSetError {
    #[error("table file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("table file declares no tables")]
    NoTables,
    #[error("table file declares {0} tables, at most 16 are supported")]
    TooMany(usize),
    #[error("cannot read table file {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Encoding failure. Everything except the input checks signals an internal bug.
#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sample stream has {actual} samples, geometry needs {expected}")]
    DimensionMismatch { expected: u64, actual: u64 },
    #[error("sample {index} = {value} does not fit in {d} bits")]
    SampleRange { index: u64, value: u64, d: u32 },
    #[error("no code table qualifies for Σ̃={sigma}, Γ={gamma}")]
    NoCodeIndex { sigma: u64, gamma: u32 },
    #[error("combiner received conflicting flags: {0}")]
    ConflictingFlags(&'static str),
    #[error("accumulator {sigma} exceeds {bits} bits")]
    AccumulatorOverflow { sigma: u64, bits: u32 },
    #[error("final accumulators requested before the end of the image")]
    NotFinished,
    #[error(
        "cycle audit mismatch: transcript counts {audited} cycles, model predicts {predicted}"
    )]
    AuditMismatch { audited: u64, predicted: u64 },
}

/// Raw-cube ingestion failure.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("input has {actual} bytes, geometry needs {expected}")]
    SizeMismatch { expected: u64, actual: u64 },
    #[error("{bytes}-byte samples cannot hold {d}-bit values")]
    SampleWidth { bytes: usize, d: u32 },
    #[error("sample at byte offset {offset} = {value} does not fit in {d} bits")]
    OutOfRange { offset: u64, value: u64, d: u32 },
}

/// Umbrella error for the file-level API, grouped into classes with stable exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Table(#[from] TableSetError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("reference and streaming bitstreams differ (first differing word {first_diff})")]
    Equivalence { first_diff: usize },
}

impl Error {
    /// Process exit code for this error class.
    ///
    /// 2 configuration, 3 I/O and input data, 4 code tables,
    /// 5 core equivalence failure, 1 internal encoder fault.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Encode(EncodeError::Config(_))
            | Error::Encode(EncodeError::DimensionMismatch { .. }) => 2,
            Error::Ingest(_)
            | Error::Write { .. }
            | Error::Encode(EncodeError::SampleRange { .. }) => 3,
            Error::Table(_) => 4,
            Error::Equivalence { .. } => 5,
            Error::Encode(_) => 1,
        }
    }
}
