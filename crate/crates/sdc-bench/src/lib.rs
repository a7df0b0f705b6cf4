//! Benchmark-only crate; see the `benches/` targets.
//!
//! Shared fixtures for the benchmarks live here so both targets draw
//! identical inputs.

use sdc_core::states::random_state;
use sdc_core::{PureState, RandomStream};

/// Deterministic Haar state for benchmarks.
pub fn fixture_state(partition: &[usize], seed: u64) -> PureState {
    let mut rng = RandomStream::new(seed, 0);
    random_state(partition, &mut rng).expect("valid benchmark partition")
}
