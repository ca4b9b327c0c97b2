//! Shared inputs for the kernel benchmarks.

use bdlab_core::{CoeffSeq, Space};

/// Deterministic pseudo-random `H^2` polynomial (an LCG, so benches do not
/// depend on an RNG crate).
pub fn lcg_h2(n: usize, seed: u64) -> CoeffSeq {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let c = (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect();
    CoeffSeq::new(c, Space::H2).expect("finite coefficients")
}
