#![allow(dead_code)]

use std::path::PathBuf;

use hec_core::codetables::{load_tableset, CodeTableSet};
use hec_core::config::CoderParams;
use hec_core::encoder::SampleStream;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn example_tables() -> CodeTableSet {
    load_tableset(&fixture("example.tbl")).unwrap()
}

pub fn synthetic_tables() -> CodeTableSet {
    load_tableset(&fixture("synthetic16.tbl")).unwrap()
}

/// The standard table set, if a transcription has been dropped into `tables/`.
pub fn standard_tables() -> Option<CodeTableSet> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables/ccsds123b2.tbl");
    path.exists().then(|| load_tableset(&path).unwrap())
}

/// Every valid point of the parameter lattice as `(d, umax, gamma0, gamma_star)`.
pub fn lattice() -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for d in [2, 4, 8, 16] {
        for umax in [8, 18, 32] {
            for gamma0 in [1, 4] {
                for gamma_star in [4, 6, 9] {
                    if gamma_star > gamma0 {
                        out.push((d, umax, gamma0, gamma_star));
                    }
                }
            }
        }
    }
    out
}

/// Samples with a per-band mean drawn from a wide range, so every coding path
/// (low with and without escapes, high short and long codewords) shows up.
pub fn random_samples<R: Rng>(rng: &mut R, params: &CoderParams) -> Vec<u32> {
    let max = params.max_delta();
    let scales: Vec<f64> = (0..params.nz)
        .map(|_| match rng.gen_range(0..6) {
            0 => 0.0,
            1 => 0.05,
            2 => 0.5,
            3 => 3.0,
            4 => 40.0,
            _ => max as f64,
        })
        .collect();
    let mut out = Vec::with_capacity(params.sample_count() as usize);
    for _ in 0..params.spatial_positions() {
        for &scale in &scales {
            let v = if rng.gen_bool(0.02) {
                rng.gen_range(0..=max)
            } else {
                (-scale * (1.0 - rng.gen::<f64>()).ln()) as u64
            };
            out.push(v.min(max) as u32);
        }
    }
    out
}

pub fn random_case<R: Rng>(rng: &mut R, max_dim: u32, max_nz: u32) -> (CoderParams, SampleStream) {
    let points = lattice();
    let (d, umax, gamma0, gamma_star) = points[rng.gen_range(0..points.len())];
    let mut params = CoderParams::new(
        rng.gen_range(1..=max_dim),
        rng.gen_range(1..=max_dim),
        rng.gen_range(1..=max_nz),
        d,
    )
    .with_coding(umax, gamma0, gamma_star);
    if rng.gen_bool(0.2) {
        params.accumulator_init = rng.gen_range(0..=params.max_accumulator_init());
    }
    let samples = random_samples(rng, &params);
    let stream = SampleStream::for_params(samples, &params).unwrap();
    (params, stream)
}

/// Zero image on the example table with `δ = 2` placed so that each one is
/// coded low and escapes: band `z` gets a 2 at positions 1, 10, 19, ...
/// Returns the stream and the number of escapes placed.
pub fn escape_stream(params: &CoderParams, bands: &[u32], count: u64) -> (SampleStream, u64) {
    assert_eq!(params.gamma0, 4);
    assert!(params.gamma_star >= 9);
    let nz = params.nz as u64;
    let mut samples = vec![0u32; params.sample_count() as usize];
    let mut placed = 0;
    for c in 0..count {
        let t = 1 + 9 * c;
        assert!(
            t < params.spatial_positions() && t < 400,
            "escape positions stay below the first rescale"
        );
        for &z in bands {
            samples[(t * nz + z as u64) as usize] = 2;
            placed += 1;
        }
    }
    (SampleStream::for_params(samples, params).unwrap(), placed)
}
