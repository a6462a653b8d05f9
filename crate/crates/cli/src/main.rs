//! `hec`: encode raw hyperspectral cubes of mapped quantizer indices.
//!
//! Exit codes: 0 success, 1 internal encoder fault, 2 configuration or usage
//! error, 3 I/O or input data error, 4 code table error, 5 the two encoder
//! cores disagreed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hec_core::codetables::{load_tableset, CodeTableSet};
use hec_core::config::CoderParams;
use hec_core::encoder::{encode_file, CoreChoice, FileJob};
use hec_core::ingest::{Endian, SampleOrder};
use hec_core::perfmodel::DEFAULT_INIT_CYCLES;

#[derive(Parser, Debug)]
#[command(
    name = "hec",
    version,
    about = "Hybrid entropy coder for hyperspectral images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a raw cube into a bitstream and a `.meta` sidecar.
    Encode(EncodeArgs),
    /// Print the compiled ROM image of every table in a table file.
    DumpRom {
        #[arg(long)]
        tables: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Sample order of the input file: bip, bil or bsq.
    #[arg(long, default_value_t = SampleOrder::Bip)]
    order: SampleOrder,
    /// little or big.
    #[arg(long, default_value_t = Endian::Little)]
    endian: Endian,
    /// Bytes per input sample (1, 2 or 4); defaults to the narrowest that holds d bits.
    #[arg(long)]
    bytes: Option<usize>,
    /// key=value parameter file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nx: Option<u32>,
    #[arg(long)]
    ny: Option<u32>,
    #[arg(long)]
    nz: Option<u32>,
    /// Bit depth of the mapped quantizer indices.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    umax: Option<u32>,
    #[arg(long)]
    gamma0: Option<u32>,
    #[arg(long = "gamma-star")]
    gamma_star: Option<u32>,
    /// Initial value of every band's accumulator.
    #[arg(long = "accumulator-init")]
    accumulator_init: Option<u64>,
    /// Low-entropy code table file.
    #[arg(long)]
    tables: Option<PathBuf>,
    /// reference, streaming, or both (fails unless they agree).
    #[arg(long, default_value_t = CoreChoice::Streaming)]
    core: CoreChoice,
    /// Also write the report to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Pipeline fill cycles assumed by the throughput model.
    #[arg(long = "init-cycles", default_value_t = DEFAULT_INIT_CYCLES)]
    init_cycles: u64,
}

/// No table file given.
#[derive(Debug)]
struct MissingTables;

impl std::fmt::Display for MissingTables {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("no code tables given (use --tables <file>)")
    }
}

impl std::error::Error for MissingTables {}

fn tables(path: Option<&Path>) -> Result<CodeTableSet> {
    let path = path.ok_or(MissingTables)?;
    let set = load_tableset(path).map_err(hec_core::Error::from)?;
    for warning in set.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(set)
}

fn params(args: &EncodeArgs) -> Result<CoderParams> {
    let mut params = CoderParams::default();
    if let Some(path) = &args.config {
        params = CoderParams::from_config_file(path, params).map_err(hec_core::Error::from)?;
    }
    let overrides = [
        ("nx", args.nx.map(u64::from)),
        ("ny", args.ny.map(u64::from)),
        ("nz", args.nz.map(u64::from)),
        ("d", args.d.map(u64::from)),
        ("umax", args.umax.map(u64::from)),
        ("gamma0", args.gamma0.map(u64::from)),
        ("gamma_star", args.gamma_star.map(u64::from)),
        ("accumulator_init", args.accumulator_init),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            params
                .set(key, &v.to_string())
                .map_err(anyhow::Error::msg)?;
        }
    }
    Ok(params)
}

fn encode(args: EncodeArgs) -> Result<()> {
    let params = params(&args)?;
    let tables = tables(args.tables.as_deref())?;
    let job = FileJob {
        input: args.input,
        order: args.order,
        endian: args.endian,
        bytes_per_sample: args.bytes,
        params,
        output: args.output,
        core: args.core,
        init_cycles: args.init_cycles,
        stats: args.stats,
    };
    let report = match encode_file(&job, &tables) {
        Err(err @ hec_core::Error::Equivalence { .. }) => {
            println!("equivalence=FAIL");
            return Err(err.into());
        }
        other => other.with_context(|| format!("encoding {}", job.input.display()))?,
    };
    print!("{}", report.to_text());
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<MissingTables>().is_some() {
        return 4;
    }
    match err.downcast_ref::<hec_core::Error>() {
        Some(e) => e.exit_code() as u8,
        None => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode(args) => encode(args),
        Command::DumpRom { tables: path } => {
            let set = tables(path.as_deref())?;
            println!("# tables_sha256={}", set.checksum());
            print!("{}", set.dump_roms());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
