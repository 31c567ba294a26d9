//! Deterministic per-stream seed derivation.

/// Name recorded in reports for the derivation implemented by [`derive_seed`].
pub const DERIVATION: &str = "fixed-mix-v1";

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser; a bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`.
///
/// For a fixed master the map `index -> seed` is injective: the odd
/// multiplier makes `master + (index + 1) * gamma` injective modulo 2^64 and
/// [`mix64`] is a bijection.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}
