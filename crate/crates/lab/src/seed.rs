//! Seed derivation and keyed knowledge bits.
//!
//! Everything here is a pure function of 64-bit inputs, so generated
//! streams are reproducible across platforms and independent of any
//! hasher randomization.

/// SplitMix64 finalizer. Full-period bijective mixer over `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Domain tag separating knowledge-bit draws from narration seeding.
const KNOWLEDGE_TAG: u64 = 0x6b6e_6f77_6c65_6467; // "knowledg"

/// Derive the seed for replicate `index` from a base seed.
///
/// Replicates can then run concurrently while each consumes its own
/// deterministic stream.
pub fn derive_seed(base_seed: u64, index: u64) -> u64 {
    mix64(mix64(base_seed) ^ index)
}

/// Map a `u64` to the unit interval `[0, 1)` with 53-bit resolution.
pub fn unit_uniform(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The knowledge bit at position `k` under a given base seed.
///
/// The bit is a keyed hash of `(base_seed, k)`: position `k` always yields
/// the same value within a run, without materializing the infinite bit
/// sequence. `one_probability` sets `P(bit = 1)`; `0.5` gives a fair bit.
pub fn knowledge_bit(base_seed: u64, k: u32, one_probability: f64) -> u8 {
    let z = mix64(mix64(base_seed ^ KNOWLEDGE_TAG) ^ u64::from(k));
    u8::from(unit_uniform(z) < one_probability)
}

/// Solve `H_b(theta) = bits` for `theta` in `[1/2, 1]`.
///
/// `H_b` is the binary entropy in bits; `bits = 1` gives a fair coin.
pub fn bias_for_entropy(bits: f64) -> f64 {
    assert!((0.0..=1.0).contains(&bits), "bit entropy must lie in [0, 1]");
    if bits == 1.0 {
        return 0.5;
    }
    if bits == 0.0 {
        return 1.0;
    }
    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    let (mut lo, mut hi) = (0.5, 1.0);
    // H_b is strictly decreasing on [1/2, 1]; bisect.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > bits {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knowledge_bits_are_consistent_and_seed_dependent() {
        for k in 0..1000 {
            assert_eq!(knowledge_bit(42, k, 0.5), knowledge_bit(42, k, 0.5));
        }
        let differs = (0..1000).any(|k| knowledge_bit(1, k, 0.5) != knowledge_bit(2, k, 0.5));
        assert!(differs);
    }

    #[test]
    fn fair_bits_are_roughly_balanced() {
        let ones: u32 = (0..100_000).map(|k| u32::from(knowledge_bit(7, k, 0.5))).sum();
        // 4 sigma band for Binomial(1e5, 1/2).
        assert!((ones as f64 - 50_000.0).abs() < 4.0 * (0.25f64 * 1e5).sqrt());
    }

    #[test]
    fn derived_seeds_do_not_collide_trivially() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..10_000 {
            assert!(seen.insert(derive_seed(123, i)));
        }
    }

    #[test]
    fn bias_inverts_binary_entropy() {
        for bits in [0.1, 0.3, 0.5, 0.9, 1.0] {
            let p = bias_for_entropy(bits);
            let h = if p == 1.0 { 0.0 } else { -p * p.log2() - (1.0 - p) * (1.0 - p).log2() };
            assert!((h - bits).abs() < 1e-12, "bits={bits} p={p} h={h}");
        }
    }
}
