//! Two-mass spin-interferometer model: entanglement generation, witnesses,
//! hypothesis tests, tomography and the separable-explanation search.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod linalg;
pub mod loophole;
pub mod model;
pub mod optimize;
pub mod quantum;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod tomography;
pub mod witness;

pub use error::{Error, Result};
pub use loophole::{find_loophole_state, verify_loophole, LoopholeResult, OptimizationConfig};
pub use model::{pea_corrections, spin_state, PeaReport, PhysicalConstants, ScenarioParams};
pub use quantum::{negativity, CholeskyAngles, DensityMatrix, Pauli, PauliObservable};
pub use stats::{DataVector, MonteCarlo, ProbabilityVector, SignificanceLevel, SuccessRateReport};
pub use tomography::{MleConfig, TomographyBatch, TomographySetup};
pub use witness::{optimal_fall_time, w0, w1, FallTime, WitnessScan, WitnessSpec};
