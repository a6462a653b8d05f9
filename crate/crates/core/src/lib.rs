//! Hybrid entropy coder for mapped quantizer indices of hyperspectral
//! images, with a direct reference encoder, a staged streaming encoder that
//! produces the same bitstream, and a cycle model of the pipelined hardware.

pub mod acss;
pub mod assembler;
pub mod coder_high;
pub mod coder_low;
pub mod codetables;
pub mod codeword;
pub mod config;
pub mod encoder;
pub mod error;
pub mod ingest;
pub mod perfmodel;

pub use codetables::{load_tableset, parse_tableset, CodeTableSet};
pub use config::CoderParams;
pub use encoder::{encode_reference, encode_streaming, EncodeOptions, EncodeResult, SampleStream};
pub use error::Error;
