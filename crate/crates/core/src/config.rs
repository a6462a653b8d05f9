//! Run-time coder parameters and their validity ranges.
//!
//! Parameters are plain values; [`CoderParams::validate`] checks every range
//! constraint and reports all violations at once. A [`CoderParams`] can also be
//! read from a line-oriented `key=value` file (see [`CoderParams::from_config_str`]).

use std::fmt;
use std::path::Path;

use crate::error::ConfigError;

/// Largest supported image width and height.
pub const MAX_NX: u32 = 1 << 16;
/// Largest supported image height.
pub const MAX_NY: u32 = 1 << 16;
/// Largest supported band count.
pub const MAX_NZ: u32 = 1 << 14;
/// Largest supported dynamic range of a mapped quantizer index.
pub const MAX_D: u32 = 32;
/// Largest supported unary length limit.
pub const MAX_UMAX: u32 = 32;
/// Largest supported rescaling counter size.
///
/// With `MAX_D` this caps the accumulator at `2 + 32 + 11 = 45` bits, so every
/// accumulator, intermediate sum and `Σ̃·2^14` product fits in a `u64`.
pub const MAX_GAMMA_STAR: u32 = 11;

pub const MIN_NX: u32 = 2;
pub const MIN_NY: u32 = 2;
pub const MIN_NZ: u32 = 3;
/// The parameter table lists 4 as the minimum dynamic range, while the
/// dynamic-range sweep of the reference hardware starts at 2. Both are accepted.
pub const MIN_D: u32 = 2;
pub const MIN_UMAX: u32 = 8;
pub const MIN_GAMMA0: u32 = 1;

/// Hybrid coder configuration: image geometry plus the entropy coder knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoderParams {
    pub nx: u32,
    pub ny: u32,
    pub nz: u32,
    /// Bits per mapped quantizer index.
    pub d: u32,
    /// Maximum unary length of a high-entropy codeword.
    pub umax: u32,
    /// Initial count exponent, `Γ(0) = 2^gamma0`.
    pub gamma0: u32,
    /// Rescaling counter size in bits.
    pub gamma_star: u32,
    /// Initial accumulator value `Σ̃_z(0)`, shared by all bands.
    pub accumulator_init: u64,
}

/// One violated range constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamViolation {
    Nx(u32),
    Ny(u32),
    Nz(u32),
    D(u32),
    Umax(u32),
    Gamma0(u32),
    GammaStar { gamma_star: u32, min: u32 },
    AccumulatorInit { value: u64, max: u64 },
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Nx(v) => write!(f, "nx={v} outside [{MIN_NX}, {MAX_NX}]"),
            Self::Ny(v) => write!(f, "ny={v} outside [{MIN_NY}, {MAX_NY}]"),
            Self::Nz(v) => write!(f, "nz={v} outside [{MIN_NZ}, {MAX_NZ}]"),
            Self::D(v) => write!(f, "d={v} outside [{MIN_D}, {MAX_D}]"),
            Self::Umax(v) => write!(f, "umax={v} outside [{MIN_UMAX}, {MAX_UMAX}]"),
            Self::Gamma0(v) => write!(f, "gamma0={v} below minimum {MIN_GAMMA0}"),
            Self::GammaStar { gamma_star, min } => write!(
                f,
                "gamma_star={gamma_star} outside [max(4, gamma0 + 1) = {min}, {MAX_GAMMA_STAR}]"
            ),
            Self::AccumulatorInit { value, max } => {
                write!(
                    f,
                    "accumulator_init={value} above 4*(2^d-1)*2^gamma0 = {max}"
                )
            }
        }
    }
}

impl CoderParams {
    /// Parameters with the commonly used defaults `umax=18, gamma0=1, gamma_star=6`.
    pub fn new(nx: u32, ny: u32, nz: u32, d: u32) -> Self {
        Self {
            nx,
            ny,
            nz,
            d,
            umax: 18,
            gamma0: 1,
            gamma_star: 6,
            accumulator_init: 0,
        }
    }

    pub fn with_coding(mut self, umax: u32, gamma0: u32, gamma_star: u32) -> Self {
        self.umax = umax;
        self.gamma0 = gamma0;
        self.gamma_star = gamma_star;
        self
    }

    /// Checks every range constraint; on failure lists all of them.
    pub fn validate(&self) -> Result<CoderParams, ConfigError> {
        let mut violations = Vec::new();
        if !(MIN_NX..=MAX_NX).contains(&self.nx) {
            violations.push(ParamViolation::Nx(self.nx));
        }
        if !(MIN_NY..=MAX_NY).contains(&self.ny) {
            violations.push(ParamViolation::Ny(self.ny));
        }
        if !(MIN_NZ..=MAX_NZ).contains(&self.nz) {
            violations.push(ParamViolation::Nz(self.nz));
        }
        violations.extend(self.coding_violations());
        if violations.is_empty() {
            Ok(*self)
        } else {
            Err(ConfigError::Invalid(violations))
        }
    }

    /// The subset of constraints the coding arithmetic itself depends on.
    ///
    /// Encoders accept any geometry with at least one sample per band; the
    /// stricter geometry minimums belong to [`validate`](Self::validate).
    pub(crate) fn check_codable(&self) -> Result<(), ConfigError> {
        let mut violations = self.coding_violations();
        if self.nx == 0 || self.nx > MAX_NX {
            violations.push(ParamViolation::Nx(self.nx));
        }
        if self.ny == 0 || self.ny > MAX_NY {
            violations.push(ParamViolation::Ny(self.ny));
        }
        if self.nz == 0 || self.nz > MAX_NZ {
            violations.push(ParamViolation::Nz(self.nz));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(violations))
        }
    }

    fn coding_violations(&self) -> Vec<ParamViolation> {
        let mut violations = Vec::new();
        let d_ok = (MIN_D..=MAX_D).contains(&self.d);
        if !d_ok {
            violations.push(ParamViolation::D(self.d));
        }
        if !(MIN_UMAX..=MAX_UMAX).contains(&self.umax) {
            violations.push(ParamViolation::Umax(self.umax));
        }
        if self.gamma0 < MIN_GAMMA0 {
            violations.push(ParamViolation::Gamma0(self.gamma0));
        }
        let min_gs = 4.max(self.gamma0.saturating_add(1));
        if self.gamma_star < min_gs || self.gamma_star > MAX_GAMMA_STAR {
            violations.push(ParamViolation::GammaStar {
                gamma_star: self.gamma_star,
                min: min_gs,
            });
        }
        // Only meaningful once d and gamma0 are sane.
        if d_ok && self.gamma0 < MAX_GAMMA_STAR {
            let max = self.max_accumulator_init();
            if self.accumulator_init > max {
                violations.push(ParamViolation::AccumulatorInit {
                    value: self.accumulator_init,
                    max,
                });
            }
        }
        violations
    }

    /// `4·(2^d − 1)·2^gamma0`: keeps `Σ̃ ≤ 4·(2^d − 1)·Γ + 1` for the whole run,
    /// hence inside [`accumulator_bits`](Self::accumulator_bits).
    pub fn max_accumulator_init(&self) -> u64 {
        (4 * self.max_delta()) << self.gamma0
    }

    /// Width of each per-band accumulator, `2 + d + gamma_star` bits.
    pub fn accumulator_bits(&self) -> u32 {
        2 + self.d + self.gamma_star
    }

    /// Width of the shared counter, `gamma_star` bits.
    pub fn counter_bits(&self) -> u32 {
        self.gamma_star
    }

    /// Counter value that triggers a rescale, `2^gamma_star − 1`.
    pub fn counter_limit(&self) -> u32 {
        (1u32 << self.gamma_star) - 1
    }

    pub fn initial_counter(&self) -> u32 {
        1u32 << self.gamma0
    }

    /// Largest mapped quantizer index, `2^d − 1`.
    pub fn max_delta(&self) -> u64 {
        if self.d >= 64 {
            u64::MAX
        } else {
            (1u64 << self.d) - 1
        }
    }

    /// Upper bound on the GPO2 code index, `max(d − 2, 2)`.
    pub fn k_cap(&self) -> u32 {
        self.d.saturating_sub(2).max(2)
    }

    /// Spatial positions per band, `nx·ny`.
    pub fn spatial_positions(&self) -> u64 {
        self.nx as u64 * self.ny as u64
    }

    /// Total samples `nx·ny·nz`.
    pub fn sample_count(&self) -> u64 {
        self.spatial_positions() * self.nz as u64
    }

    /// Parses a `key=value` configuration text. Unknown keys are an error;
    /// missing keys fall back to `base`.
    pub fn from_config_str(text: &str, base: CoderParams) -> Result<CoderParams, ConfigError> {
        let mut params = base;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: format!("expected key=value, got `{line}`"),
            })?;
            params
                .set(key.trim(), value.trim())
                .map_err(|message| ConfigError::Syntax {
                    line: line_no,
                    message,
                })?;
        }
        Ok(params)
    }

    pub fn from_config_file(path: &Path, base: CoderParams) -> Result<CoderParams, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text, base)
    }

    /// Sets one parameter by its configuration key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("`{key}` expects an unsigned integer, got `{value}`"))
        }
        match key {
            "nx" => self.nx = num(key, value)?,
            "ny" => self.ny = num(key, value)?,
            "nz" => self.nz = num(key, value)?,
            "d" => self.d = num(key, value)?,
            "umax" => self.umax = num(key, value)?,
            "gamma0" => self.gamma0 = num(key, value)?,
            "gamma_star" => self.gamma_star = num(key, value)?,
            "accumulator_init" => self.accumulator_init = num(key, value)?,
            other => return Err(format!("unknown parameter `{other}`")),
        }
        Ok(())
    }

    /// `key=value` lines for every parameter, in a fixed order.
    pub fn to_config_lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("nx", self.nx.to_string()),
            ("ny", self.ny.to_string()),
            ("nz", self.nz.to_string()),
            ("d", self.d.to_string()),
            ("umax", self.umax.to_string()),
            ("gamma0", self.gamma0.to_string()),
            ("gamma_star", self.gamma_star.to_string()),
            ("accumulator_init", self.accumulator_init.to_string()),
        ]
    }
}

impl Default for CoderParams {
    fn default() -> Self {
        Self::new(0, 0, 0, 16)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn aviris() -> CoderParams {
        CoderParams::new(680, 512, 224, 16).with_coding(18, 1, 6)
    }

    fn violations(p: &CoderParams) -> Vec<ParamViolation> {
        match p.validate() {
            Ok(_) => Vec::new(),
            Err(ConfigError::Invalid(v)) => v,
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn aviris_defaults_are_valid() {
        assert_eq!(aviris().validate().unwrap(), aviris());
        assert_eq!(aviris().accumulator_bits(), 24);
    }

    #[test]
    fn gamma_star_below_gamma0_plus_one() {
        let p = aviris().with_coding(18, 5, 4);
        assert_eq!(
            violations(&p),
            vec![ParamViolation::GammaStar {
                gamma_star: 4,
                min: 6
            }]
        );
    }

    #[test]
    fn too_few_bands() {
        let mut p = aviris();
        p.nz = 2;
        assert_eq!(violations(&p), vec![ParamViolation::Nz(2)]);
    }

    #[test]
    fn every_violation_is_reported() {
        let p = CoderParams {
            nx: 1,
            ny: 0,
            nz: 2,
            d: 40,
            umax: 7,
            gamma0: 0,
            gamma_star: 12,
            accumulator_init: 0,
        };
        let v = violations(&p);
        assert_eq!(v.len(), 7, "{v:?}");
    }

    #[test]
    fn d_range_accepts_two() {
        let mut p = aviris();
        p.d = 2;
        assert!(p.validate().is_ok());
        assert_eq!(p.k_cap(), 2);
        p.d = 1;
        assert_eq!(violations(&p), vec![ParamViolation::D(1)]);
    }

    #[test]
    fn accumulator_init_bound() {
        let mut p = CoderParams::new(4, 4, 3, 4).with_coding(8, 1, 4);
        p.accumulator_init = p.max_accumulator_init();
        assert_eq!(p.accumulator_init, 4 * 15 * 2);
        assert!(p.validate().is_ok());
        p.accumulator_init += 1;
        assert_eq!(violations(&p).len(), 1);
    }

    #[test]
    fn config_text_round_trip() {
        let text =
            "# AVIRIS\nnx=680\nny = 512\nnz=224 # bands\nd=16\numax=18\ngamma0=1\ngamma_star=6\n";
        let p = CoderParams::from_config_str(text, CoderParams::default()).unwrap();
        assert_eq!(p, aviris());
        let back: String = p
            .to_config_lines()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect();
        assert_eq!(
            CoderParams::from_config_str(&back, CoderParams::default()).unwrap(),
            p
        );
    }

    #[test]
    fn config_text_errors_carry_line() {
        let err =
            CoderParams::from_config_str("nx=2\nbogus=1\n", CoderParams::default()).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err}");
        let err = CoderParams::from_config_str("nx\n", CoderParams::default()).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
        let err = CoderParams::from_config_str("d=-3\n", CoderParams::default()).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
    }

    proptest! {
        #[test]
        fn validate_is_idempotent(
            nx in 0u32..70_000, ny in 0u32..70_000, nz in 0u32..20_000,
            d in 0u32..40, umax in 0u32..40, gamma0 in 0u32..12, gamma_star in 0u32..14,
        ) {
            let p = CoderParams { nx, ny, nz, d, umax, gamma0, gamma_star, accumulator_init: 0 };
            match p.validate() {
                Ok(v) => {
                    prop_assert_eq!(v, p);
                    prop_assert_eq!(v.validate().unwrap(), v);
                    prop_assert!(v.accumulator_bits() <= 2 + MAX_D + MAX_GAMMA_STAR);
                    prop_assert!(v.accumulator_bits() + 14 < 64);
                    prop_assert!(v.initial_counter() < v.counter_limit());
                }
                Err(e) => prop_assert_eq!(format!("{e}"), format!("{}", p.validate().unwrap_err())),
            }
        }
    }
}
