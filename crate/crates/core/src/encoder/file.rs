//! File-level encoding: raw cube in, bitstream plus `.meta` sidecar out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{encode_reference, encode_streaming, EncodeOptions, EncodeResult};
use crate::assembler::TraceCounters;
use crate::codetables::CodeTableSet;
use crate::config::CoderParams;
use crate::error::Error;
use crate::ingest::{ingest, Endian, IngestSpec, SampleOrder};
use crate::perfmodel::{audit_rate, predict_rate, RateEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoreChoice {
    Reference,
    #[default]
    Streaming,
    /// Run both and require identical output.
    Both,
}

impl FromStr for CoreChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "reference" => Ok(CoreChoice::Reference),
            "streaming" => Ok(CoreChoice::Streaming),
            "both" => Ok(CoreChoice::Both),
            other => Err(format!(
                "unknown core `{other}` (reference, streaming or both)"
            )),
        }
    }
}

impl std::fmt::Display for CoreChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoreChoice::Reference => "reference",
            CoreChoice::Streaming => "streaming",
            CoreChoice::Both => "both",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FileJob {
    pub input: PathBuf,
    pub order: SampleOrder,
    pub endian: Endian,
    /// Defaults to the narrowest width holding `d` bits.
    pub bytes_per_sample: Option<usize>,
    pub params: CoderParams,
    pub output: PathBuf,
    pub core: CoreChoice,
    pub init_cycles: u64,
    /// Extra copy of the report as key=value lines.
    pub stats: Option<PathBuf>,
}

impl FileJob {
    pub fn sidecar_path(&self) -> PathBuf {
        sidecar_path(&self.output)
    }

    fn ingest_spec(&self) -> IngestSpec {
        IngestSpec {
            path: self.input.clone(),
            order: self.order,
            endian: self.endian,
            bytes_per_sample: self
                .bytes_per_sample
                .unwrap_or_else(|| IngestSpec::default_bytes_for(self.params.d)),
            nx: self.params.nx,
            ny: self.params.ny,
            nz: self.params.nz,
            d: self.params.d,
        }
    }
}

/// `<output>.meta`
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

#[derive(Debug, Clone)]
pub struct FileReport {
    pub params: CoderParams,
    pub core: CoreChoice,
    pub tables_checksum: String,
    pub table_count: usize,
    pub compressed_bytes: u64,
    pub total_bits: u64,
    pub bits_per_sample: f64,
    pub counters: TraceCounters,
    pub predicted: RateEstimate,
    /// From the streaming transcript; absent for a reference-only run.
    pub audited: Option<RateEstimate>,
    /// Set when both cores ran; they matched, or the call would have failed.
    pub equivalence: Option<bool>,
}

impl FileReport {
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut lines: Vec<(String, String)> = self
            .params
            .to_config_lines()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        lines.push(("core".into(), self.core.to_string()));
        lines.push(("tables_sha256".into(), self.tables_checksum.clone()));
        lines.push(("tables_loaded".into(), self.table_count.to_string()));
        lines.push(("compressed_bytes".into(), self.compressed_bytes.to_string()));
        lines.push((
            "bits_per_sample".into(),
            format!("{:.6}", self.bits_per_sample),
        ));
        lines.extend(
            self.counters
                .to_lines()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v)),
        );
        lines.push(("init_cycles".into(), self.predicted.init_cycles.to_string()));
        lines.extend(self.predicted.to_lines("predicted"));
        if let Some(audited) = &self.audited {
            lines.extend(audited.to_lines("audited"));
        }
        if let Some(eq) = self.equivalence {
            lines.push((
                "equivalence".into(),
                if eq { "PASS" } else { "FAIL" }.into(),
            ));
        }
        lines
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.lines() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Ingests, encodes and writes the bitstream, its sidecar and optional stats.
///
/// Nothing is written if encoding fails or the cores disagree.
pub fn encode_file(job: &FileJob, tables: &CodeTableSet) -> Result<FileReport, Error> {
    let params = job.params.validate()?;
    let stream = ingest(&job.ingest_spec())?;
    let options = EncodeOptions::default();

    let (result, equivalence): (EncodeResult, Option<bool>) = match job.core {
        CoreChoice::Reference => (encode_reference(&stream, &params, tables, options)?, None),
        CoreChoice::Streaming => (encode_streaming(&stream, &params, tables, options)?, None),
        CoreChoice::Both => {
            let reference = encode_reference(&stream, &params, tables, options)?;
            let streaming = encode_streaming(&stream, &params, tables, options)?;
            if let Some(first_diff) = reference.packed.first_difference(&streaming.packed) {
                return Err(Error::Equivalence { first_diff });
            }
            (streaming, Some(true))
        }
    };

    let predicted = predict_rate(&params, result.escapes(), job.init_cycles);
    let audited = match result.transcript {
        Some(_) => Some(audit_rate(&result, &params, job.init_cycles)?),
        None => None,
    };

    let bytes = result.packed.to_bytes();
    let report = FileReport {
        params,
        core: job.core,
        tables_checksum: tables.checksum(),
        table_count: tables.len(),
        compressed_bytes: bytes.len() as u64,
        total_bits: result.total_bits(),
        bits_per_sample: result.bits_per_sample(),
        counters: result.trace.counters,
        predicted,
        audited,
        equivalence,
    };

    write_file(&job.output, &bytes)?;
    let text = report.to_text();
    write_file(&job.sidecar_path(), text.as_bytes())?;
    if let Some(stats) = &job.stats {
        write_file(stats, text.as_bytes())?;
    }
    Ok(report)
}
