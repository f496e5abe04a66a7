//! Shared fixtures for the criterion benches.

use swanson_core::trotter::ChainParams;

/// Uniform open chain with unit-scale couplings.
pub fn uniform_chain(sites: usize) -> ChainParams {
    ChainParams::new(vec![1.0; sites], vec![1.0; sites - 1], vec![1.0; sites - 1])
        .expect("valid chain")
}
