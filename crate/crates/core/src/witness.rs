//! Entanglement witnesses built from bipartite Pauli terms, scans over the
//! free-fall time and the optimal-time search.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix4;
use crate::model::{phase_rates, spin_state, spin_state_unchecked, ScenarioParams};
use crate::quantum::{expectation, negativity, pauli_tensor, DensityMatrix, Pauli, PauliObservable};

/// Grid resolution for the optimal free-fall time search.
pub const FALL_TIME_GRID: usize = 2000;
const GOLDEN_TOL: f64 = 1e-7;

/// A witness `W = Σ c_k σ_k` over bipartite Pauli observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub name: String,
    pub terms: Vec<(f64, PauliObservable)>,
}

impl WitnessSpec {
    pub fn operator(&self) -> CMatrix4 {
        self.terms
            .iter()
            .fold(CMatrix4::zeros(), |acc, (coef, obs)| acc + pauli_tensor(*obs).scale(*coef))
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        self.terms.iter().map(|(coef, obs)| coef * expectation(rho, *obs)).sum()
    }

    /// The observables that must be measured, identity term excluded.
    pub fn measured_observables(&self) -> Vec<PauliObservable> {
        self.terms
            .iter()
            .filter(|(_, obs)| !(obs.left == Pauli::I && obs.right == Pauli::I))
            .map(|(_, obs)| *obs)
            .collect()
    }
}

const fn obs(left: Pauli, right: Pauli) -> PauliObservable {
    PauliObservable::new(left, right)
}

/// `W0 = I⊗I + X⊗Z + Y⊗Y`
pub fn w0() -> WitnessSpec {
    use Pauli::*;
    WitnessSpec {
        name: "W0".into(),
        terms: vec![(1.0, obs(I, I)), (1.0, obs(X, Z)), (1.0, obs(Y, Y))],
    }
}

/// `W1 = I⊗I − X⊗X − Z⊗Y − Y⊗Z`
pub fn w1() -> WitnessSpec {
    use Pauli::*;
    WitnessSpec {
        name: "W1".into(),
        terms: vec![(1.0, obs(I, I)), (-1.0, obs(X, X)), (-1.0, obs(Z, Y)), (-1.0, obs(Y, Z))],
    }
}

/// The observables measured for `W1`, in the order used for data vectors.
pub fn w1_observables() -> Vec<PauliObservable> {
    w1().measured_observables()
}

pub fn witness_expectation(p: &ScenarioParams, tau: f64, w: &WitnessSpec) -> Result<f64> {
    Ok(w.expectation(&spin_state(p, tau)?))
}

/// Closed form of `Tr(W1 ρ(τ))`:
/// `1 − e^{−γτ}(sin Δφ_LR + sin Δφ_RL) − ½e^{−2γτ}(1 + cos(Δφ_LR − Δφ_RL))`.
pub fn w1_closed_form(p: &ScenarioParams, tau: f64) -> f64 {
    let (a, b) = phase_rates(p).phases(tau);
    let e = (-p.dephasing_gamma * tau).exp();
    1.0 - e * (a.sin() + b.sin()) - 0.5 * e * e * (1.0 + (a - b).cos())
}

/// Largest dephasing rate for which `W1` detects entanglement at short times.
pub fn w1_threshold(p: &ScenarioParams) -> f64 {
    phase_rates(p).sum() / 2.0
}

/// Default scan horizon `4π / (ω_LR + ω_RL)`.
pub fn default_tau_max(p: &ScenarioParams) -> Result<f64> {
    let sum = phase_rates(p).sum();
    if !(sum > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "default horizon needs a positive total phase rate, got {sum:.3e}"
        )));
    }
    Ok(4.0 * PI / sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FallTime {
    pub tau: f64,
    pub value: f64,
    /// `false` when the expectation never goes negative on the horizon.
    pub witnessing: bool,
}

/// Free-fall time minimising the witness expectation of `p` on
/// `[0, tau_max]`: a uniform grid followed by golden-section refinement.
pub fn optimal_fall_time(p: &ScenarioParams, w: &WitnessSpec, tau_max: Option<f64>) -> Result<FallTime> {
    let tau_max = match tau_max {
        Some(t) => t,
        None => default_tau_max(p)?,
    };
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::InvalidArgument(format!("tau_max must be positive, got {tau_max}")));
    }
    let op = w.operator();
    let f = |tau: f64| crate::linalg::trace_product_re(&op, spin_state_unchecked(p, tau).matrix());

    let step = tau_max / FALL_TIME_GRID as f64;
    let (best_i, _) = (0..=FALL_TIME_GRID)
        .map(|i| (i, f(i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });

    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(FALL_TIME_GRID)) as f64 * step;
    let tau = golden_section(&f, lo, hi, GOLDEN_TOL);
    let value = f(tau);
    Ok(FallTime { tau, value, witnessing: value < 0.0 })
}

/// Golden-section minimisation on `[a, b]`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    // endpoints are candidates too, the minimum may sit on the boundary
    let mid = 0.5 * (a + b);
    [a, mid, b]
        .into_iter()
        .map(|x| (x, f(x)))
        .fold((mid, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc })
        .0
}

/// Witness or negativity values along a free-fall time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessScan {
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
    pub gamma: f64,
}

fn check_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() || taus.windows(2).any(|w| w[1] <= w[0]) || taus[0] < 0.0 {
        return Err(Error::InvalidArgument("tau grid must be non-negative and strictly increasing".into()));
    }
    Ok(())
}

pub fn scan_witness(p: &ScenarioParams, w: &WitnessSpec, taus: &[f64]) -> Result<WitnessScan> {
    check_grid(taus)?;
    let values = taus.par_iter().map(|&t| w.expectation(&spin_state_unchecked(p, t))).collect();
    Ok(WitnessScan { taus: taus.to_vec(), values, gamma: p.dephasing_gamma })
}

pub fn scan_negativity(p: &ScenarioParams, taus: &[f64]) -> Result<WitnessScan> {
    check_grid(taus)?;
    let values = taus.par_iter().map(|&t| negativity(&spin_state_unchecked(p, t))).collect();
    Ok(WitnessScan { taus: taus.to_vec(), values, gamma: p.dephasing_gamma })
}

/// `n + 1` evenly spaced points on `[0, tau_max]`.
pub fn uniform_grid(tau_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| tau_max * i as f64 / n as f64).collect()
}

/// First grid time at which the scan changes from non-negative to negative.
pub fn first_negative_crossing(scan: &WitnessScan) -> Option<f64> {
    scan.taus
        .windows(2)
        .zip(scan.values.windows(2))
        .find(|(_, v)| v[0] >= 0.0 && v[1] < 0.0)
        .map(|(t, v)| t[0] + (t[1] - t[0]) * v[0] / (v[0] - v[1]))
}
