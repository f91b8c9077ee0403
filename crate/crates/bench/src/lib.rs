//! Fixed inputs shared by the kernel benchmarks.

use swp_core::stats::{hypothesis_states, simulate_measurements};
use swp_core::{DataVector, DensityMatrix, ScenarioParams, TomographySetup};

/// Gravity-on state of the default scenario at its optimal fall time.
pub fn reference_state() -> DensityMatrix {
    hypothesis_states(&ScenarioParams::default()).expect("default scenario is valid").0
}

/// One tomography of [`reference_state`] with `shots` per observable.
pub fn tomography_data(setup: &TomographySetup, shots: u64) -> DataVector {
    simulate_measurements(&reference_state(), setup.observables(), shots, 1).expect("positive shot count")
}
