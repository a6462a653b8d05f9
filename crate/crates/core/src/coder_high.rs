//! High-entropy path: coder selection, GPO2 code index and reverse
//! length-limited GPO2 codewords.

use crate::codeword::{Codeword, CodewordKind};

/// Scale applied to the accumulator in every threshold comparison.
pub const THRESHOLD_SHIFT: u32 = 14;

/// `true` routes the sample to the high-entropy coder: `Σ̃·2^14 ≥ T_0·Γ`.
///
/// Products are formed at full precision (`2 + d + γ* + 14` bits at most).
#[inline]
pub fn select_hilo(sigma: u64, gamma: u32, t0: u64) -> bool {
    (sigma as u128) << THRESHOLD_SHIFT >= t0 as u128 * gamma as u128
}

/// Largest `k ≤ max(d − 2, 2)` with `Γ·2^k ≤ Σ̃ + ⌊49·Γ/2^5⌋`.
///
/// `k = 0` always qualifies since `⌊49Γ/32⌋ ≥ Γ` for `Γ ≥ 1`.
#[inline]
pub fn compute_k(sigma: u64, gamma: u32, d: u32) -> u32 {
    debug_assert!(gamma >= 1);
    let cap = d.saturating_sub(2).max(2);
    let bound = sigma + ((49 * gamma as u64) >> 5);
    // Γ·2^k ≤ bound  ⇔  2^k ≤ ⌊bound/Γ⌋
    let quotient = bound / gamma as u64;
    (63 - quotient.leading_zeros()).min(cap)
}

/// Reverse length-limited GPO2 codeword of `delta` with index `k`.
///
/// With `u = ⌊delta/2^k⌋`: if `u < umax` the `k` low bits of `delta`, a one,
/// then `u` zeros; otherwise the `d`-bit `delta` followed by `umax` zeros.
///
/// # Panics
/// If `delta ≥ 2^d`, `k > max(d − 2, 2)`, or the codeword would exceed 64 bits.
pub fn encode_gpo2(delta: u64, k: u32, d: u32, umax: u32) -> Codeword {
    assert!(
        d >= 64 || delta >> d == 0,
        "delta {delta} needs more than {d} bits"
    );
    assert!(
        k <= d.saturating_sub(2).max(2),
        "code index {k} above cap for d={d}"
    );
    let unary = delta >> k;
    if unary < umax as u64 {
        let low = delta & ((1u64 << k) - 1);
        let bits = ((low << 1) | 1) << unary;
        Codeword::new(bits, k + 1 + unary as u32, CodewordKind::High)
    } else {
        Codeword::new(delta << umax, d + umax, CodewordKind::High)
    }
}
