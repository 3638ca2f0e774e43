//! A laboratory for power-law statistics of token streams.
//!
//! The crate connects four classical observations about heavy-tailed data —
//! power-law type frequencies, sublinear vocabulary growth, sublinear block
//! entropy excess, and power-law decay of predictive cross entropy — as
//! executable mathematics:
//!
//! - [`law`] and [`sources`]: marginal laws over a natural-number alphabet
//!   and seeded, reproducible narration / paired-token generators.
//! - [`occupancy`]: closed-form expected type counts `V(t)`, occurrence
//!   spectra `V(t|m)`, the moment-measure representation of `V`, and tail
//!   constants extracted from a law.
//! - [`rational`]: the same occupancy quantities in exact rational
//!   arithmetic, used as a correctness oracle for the floating-point path.
//! - [`estimators`]: streaming vocabulary curves, exact block entropy by
//!   enumeration, conditional-entropy curves for paired processes, a PPM
//!   coder, and log-log power-law fitting.
//! - [`verify`]: pass/fail/not-applicable reports for the vocabulary-growth
//!   and entropy-scaling bounds with machine-extracted constants.
//! - [`scaling`]: the admissible-test-length formula, the two-branch lower
//!   bound on excess cross entropy, exponent caps, and a memorization
//!   predictor evaluated on paired-token streams.
//!
//! All generators are pure functions of `(spec, seed)`. Reductions use a
//! fixed chunked pairwise tree (see [`sum`]) so that every result is
//! byte-identical across runs and thread counts. Parallel execution is
//! enabled by the default `parallel` feature; without it the same code runs
//! sequentially and produces the same bytes.

pub mod estimators;
pub mod law;
pub mod occupancy;
pub mod ppm;
pub mod rational;
pub mod scaling;
pub mod seed;
pub mod sources;
pub mod sum;
pub mod verify;

pub use law::DiscreteLaw;
pub use sources::{ProcessSpec, SantaFeConfig};

/// Configure the global worker pool used by the `parallel` feature.
///
/// `None` keeps the default (hardware parallelism). Calling this more than
/// once is harmless: later calls are ignored by the pool builder. Without
/// the `parallel` feature this is a no-op.
pub fn configure_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// True when the crate was built with the `parallel` feature.
pub fn parallelism_enabled() -> bool {
    cfg!(feature = "parallel")
}
