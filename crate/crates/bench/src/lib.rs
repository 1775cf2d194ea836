//! Shared inputs for the criterion benchmarks.

use spinbus_core::benchgen::{generate, BenchmarkSpec, Family};
use spinbus_core::{harness, ArchitectureSpec, Placement, PlacementMode, SlicedCircuit};

/// A prepared circuit with its spectral placement.
pub struct Fixture {
    pub spec: ArchitectureSpec,
    pub sliced: SlicedCircuit,
    pub placement: Placement,
}

pub fn fixture(family: Family, n: usize, seed: u64) -> Fixture {
    let spec = ArchitectureSpec::new(n).expect("valid size");
    let c = generate(&BenchmarkSpec::new(family, n, seed)).expect("valid benchmark");
    let sliced = harness::prepare(&c, &spec);
    let placement = harness::place(&sliced, n, PlacementMode::Spectral).expect("placement");
    Fixture { spec, sliced, placement }
}
