//! Random states for property checks: Haar-random product states, separable
//! mixtures and random points of the Cholesky parametrisation.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{c, kron_vec2, C64};
use crate::quantum::{cholesky_to_state, CholeskyAngles, DensityMatrix};

/// Haar-random single-qubit pure state.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let mut v = [0.0f64; 4];
    for x in v.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [c(v[0] / norm, v[1] / norm), c(v[2] / norm, v[3] / norm)]
}

pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let psi = kron_vec2(&haar_qubit(rng), &haar_qubit(rng));
    DensityMatrix::pure(&psi).expect("unit vector")
}

/// Mixture of `k ∈ [1, max_terms]` random pure product states with flat
/// Dirichlet weights.
pub fn random_separable_state<R: Rng + ?Sized>(rng: &mut R, max_terms: usize) -> DensityMatrix {
    let k = rng.random_range(1..=max_terms.max(1));
    let raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let states: Vec<DensityMatrix> = (0..k).map(|_| random_product_state(rng)).collect();
    let parts: Vec<(f64, &DensityMatrix)> = raw.iter().map(|w| w / total).zip(states.iter()).collect();
    // weights are renormalised to absorb rounding
    let sum: f64 = parts.iter().map(|(w, _)| w).sum();
    let parts: Vec<(f64, &DensityMatrix)> = parts.into_iter().map(|(w, s)| (w / sum, s)).collect();
    DensityMatrix::mixture(&parts).expect("valid weights")
}

pub fn random_angles<R: Rng + ?Sized>(rng: &mut R) -> CholeskyAngles {
    let mut x = [0.0; CholeskyAngles::LEN];
    for v in x.iter_mut() {
        *v = rng.random_range(0.0..2.0 * PI);
    }
    CholeskyAngles::from_slice(&x)
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    cholesky_to_state(&random_angles(rng))
}
