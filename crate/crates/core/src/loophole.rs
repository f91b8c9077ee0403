//! Search for states that explain witness data at least as well as the
//! gravity-on state while being less entangled than the gravity-free state.
//!
//! The search runs over the fifteen-angle Cholesky parametrisation, so every
//! candidate is a valid density matrix, and minimises the negative
//! log-likelihood subject to `N(ρ) ≤ N(ρ_null) − margin`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, hermitian_part, hermiticity_defect, CMatrix4};
use crate::optimize::{minimize, minimize_with_inequality, BarrierSettings};
use crate::quantum::{cholesky_to_state, negativity, negativity_of_matrix, CholeskyAngles, DensityMatrix, MeasurementBasis};
use crate::rng::trial_rng;
use crate::sampling::random_angles;
use crate::stats::{measurement_bases, DataVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationConfig {
    /// BFGS iterations per barrier stage.
    pub max_iterations: usize,
    pub gradient_step: f64,
    pub constraint_margin: f64,
    pub restarts: usize,
    /// When `false` the negativity bound is ignored (plain maximum likelihood).
    pub constrained: bool,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self { max_iterations: 400, gradient_step: 1e-6, constraint_margin: 1e-4, restarts: 32, constrained: true }
    }
}

impl OptimizationConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.restarts == 0 || !(self.gradient_step > 0.0) || !(self.constraint_margin >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid optimisation config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopholeResult {
    pub state: DensityMatrix,
    pub angles: CholeskyAngles,
    pub nll: f64,
    pub negativity: f64,
    pub negativity_bound: f64,
    pub constraint_satisfied: bool,
    /// NLL of the reference (gravity-on) state on the same data.
    pub nll_reference: f64,
    pub feasible_restarts: usize,
}

/// Likelihood model of one data vector, with projectors precomputed.
struct Likelihood<'a> {
    bases: Vec<MeasurementBasis>,
    data: &'a DataVector,
}

impl<'a> Likelihood<'a> {
    fn new(data: &'a DataVector) -> Result<Self> {
        if !data.check_blocks() {
            return Err(Error::InvalidArgument("data blocks do not sum to the shot count".into()));
        }
        Ok(Self { bases: measurement_bases(&data.observables)?, data })
    }

    /// `−Σ n_i ln Tr(ρP_i)`, `+∞` when a counted outcome has zero probability.
    fn nll_matrix(&self, rho: &CMatrix4) -> f64 {
        let mut acc = 0.0;
        for (b, basis) in self.bases.iter().enumerate() {
            let probs = basis.probabilities(rho);
            for (p, &n) in probs.iter().zip(self.data.block(b)) {
                if n == 0 {
                    continue;
                }
                if !(*p > 0.0) {
                    return f64::INFINITY;
                }
                acc -= n as f64 * p.ln();
            }
        }
        acc
    }
}

pub fn neg_log_likelihood(angles: &CholeskyAngles, data: &DataVector) -> Result<f64> {
    Ok(Likelihood::new(data)?.nll_matrix(cholesky_to_state(angles).matrix()))
}

pub fn state_neg_log_likelihood(rho: &DensityMatrix, data: &DataVector) -> Result<f64> {
    Ok(Likelihood::new(data)?.nll_matrix(rho.matrix()))
}

fn state_of(x: &[f64]) -> CMatrix4 {
    *cholesky_to_state(&CholeskyAngles::from_slice(x)).matrix()
}

/// Multi-start constrained maximum-likelihood search; the best feasible
/// result (lowest NLL, then lowest negativity) wins.
pub fn find_loophole_state(
    data: &DataVector,
    rho_null: &DensityMatrix,
    rho_reference: &DensityMatrix,
    cfg: &OptimizationConfig,
    seed: u64,
) -> Result<LoopholeResult> {
    cfg.validate()?;
    let model = Likelihood::new(data)?;
    let bound = negativity(rho_null) - cfg.constraint_margin;
    let nll_reference = model.nll_matrix(rho_reference.matrix());
    let settings = BarrierSettings { max_iterations: cfg.max_iterations, gradient_step: cfg.gradient_step, ..Default::default() };

    let runs: Vec<(Vec<f64>, f64, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let x0 = random_angles(&mut trial_rng(seed, r as u64)).to_vec();
            let f = |x: &[f64]| model.nll_matrix(&state_of(x));
            let out = if cfg.constrained {
                let g = |x: &[f64]| negativity_of_matrix(&state_of(x)) - bound;
                minimize_with_inequality(&f, &g, &x0, &settings)
            } else {
                minimize(&f, &x0, &settings)
            };
            let neg = negativity_of_matrix(&state_of(&out.x));
            (out.x, out.f, neg)
        })
        .collect();

    let feasible: Vec<&(Vec<f64>, f64, f64)> =
        runs.iter().filter(|(_, f, n)| f.is_finite() && (!cfg.constrained || *n <= bound)).collect();
    let Some(best) = feasible
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.2.total_cmp(&b.2)))
    else {
        let best_negativity = runs.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
        return Err(Error::Infeasible { restarts: cfg.restarts, best_negativity, bound });
    };
    let angles = CholeskyAngles::from_slice(&best.0);
    Ok(LoopholeResult {
        state: cholesky_to_state(&angles),
        angles,
        nll: best.1,
        negativity: best.2,
        negativity_bound: bound,
        constraint_satisfied: best.2 <= bound,
        nll_reference,
        feasible_restarts: feasible.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopholeVerification {
    pub null_negativity: f64,
    pub result_negativity: f64,
    pub negativity_ordered: bool,
    pub nll_result: f64,
    pub nll_reference: f64,
    pub at_least_as_likely: bool,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
    pub state_valid: bool,
}

impl LoopholeVerification {
    pub fn passed(&self) -> bool {
        self.negativity_ordered && self.at_least_as_likely && self.state_valid
    }
}

/// Checks the negativity ordering, the likelihood comparison on `data` and
/// the density-matrix invariants of a search result.
pub fn verify_loophole(
    result: &LoopholeResult,
    rho_a: &DensityMatrix,
    rho_null: &DensityMatrix,
    data: &DataVector,
) -> Result<LoopholeVerification> {
    let model = Likelihood::new(data)?;
    let m = result.state.matrix();
    let null_negativity = negativity(rho_null);
    let result_negativity = negativity(&result.state);
    let nll_result = model.nll_matrix(m);
    let nll_reference = model.nll_matrix(rho_a.matrix());
    let trace = m.trace().re;
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    let defect = hermiticity_defect(m);
    Ok(LoopholeVerification {
        null_negativity,
        result_negativity,
        negativity_ordered: null_negativity > result_negativity,
        nll_result,
        nll_reference,
        at_least_as_likely: nll_result <= nll_reference,
        trace,
        min_eigenvalue,
        hermiticity_defect: defect,
        state_valid: (trace - 1.0).abs() <= 1e-10 && min_eigenvalue >= -1e-9 && defect <= 1e-12,
    })
}

/// The published loophole state for `d = 350 μm, γ = 0.3 s⁻¹, τ = 0.34 s`,
/// as printed to three significant figures (so not exactly Hermitian).
#[rustfmt::skip]
pub fn printed_loophole_matrix() -> CMatrix4 {
    CMatrix4::new(
        c(0.256, 0.0),    c(0.009, 0.012),   c(0.042, -0.174), c(0.212, 0.010),
        c(0.009, -0.012), c(0.244, 0.0),     c(0.109, -0.022), c(-0.008, 0.004),
        c(0.042, 0.174),  c(0.109, 0.023),   c(0.246, 0.0),    c(0.017, 0.161),
        c(0.212, -0.011), c(-0.008, -0.004), c(0.017, -0.161), c(0.254, 0.0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedStateCheck {
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
    pub negativity: f64,
}

impl PrintedStateCheck {
    /// Invariants at the precision of a three-significant-figure printout.
    pub fn valid_at_print_precision(&self) -> bool {
        (self.trace - 1.0).abs() <= 1e-3 && self.min_eigenvalue >= -2e-3 && self.hermiticity_defect <= 1.5e-3
    }
}

/// Trace, spectrum and negativity of the Hermitian part of the printed state.
pub fn check_printed_loophole() -> PrintedStateCheck {
    let raw = printed_loophole_matrix();
    let herm = hermitian_part(&raw);
    PrintedStateCheck {
        trace: raw.trace().re,
        min_eigenvalue: hermitian_eigenvalues(&herm)[0],
        hermiticity_defect: hermiticity_defect(&raw),
        negativity: negativity_of_matrix(&herm),
    }
}
