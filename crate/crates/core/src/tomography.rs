//! Maximum-likelihood two-qubit state tomography by the `RρR` fixed-point
//! iteration, and tomography-based distinction statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix4, CVector4};
use crate::model::ScenarioParams;
use crate::quantum::{fidelity, negativity, DensityMatrix, Pauli, PauliObservable};
use crate::rng::{derive_seed, trial_rng};
use crate::stats::{
    hypothesis_states, measurement_bases, probabilities_in_bases, sample_counts, upper_quantile, DataVector,
    DistinctionProblem, MonteCarlo, SignificanceLevel, SuccessRateReport,
};

/// The nine observables `σ_a ⊗ σ_b` with `a, b ∈ {X, Y, Z}`.
#[derive(Debug, Clone)]
pub struct TomographySetup {
    observables: Vec<PauliObservable>,
    vectors: Vec<CVector4>,
}

impl Default for TomographySetup {
    fn default() -> Self {
        Self::new()
    }
}

impl TomographySetup {
    pub fn new() -> Self {
        let labels = [Pauli::X, Pauli::Y, Pauli::Z];
        let observables: Vec<_> = labels
            .iter()
            .flat_map(|&a| labels.iter().map(move |&b| PauliObservable::new(a, b)))
            .collect();
        let bases = measurement_bases(&observables).expect("no identity factors");
        let vectors = bases.iter().flat_map(|b| b.vectors).collect();
        Self { observables, vectors }
    }

    pub fn observables(&self) -> &[PauliObservable] {
        &self.observables
    }

    pub fn projector(&self, i: usize) -> CMatrix4 {
        let v = &self.vectors[i];
        v * v.adjoint()
    }

    /// Splits a total shot budget evenly over the nine observables.
    pub fn shots_per_observable(&self, total: u64) -> Result<u64> {
        let l = self.observables.len() as u64;
        if total == 0 || total % l != 0 {
            return Err(Error::InvalidArgument(format!("tomography shots must be a positive multiple of {l}, got {total}")));
        }
        Ok(total / l)
    }

    fn probabilities(&self, rho: &CMatrix4) -> Vec<f64> {
        self.vectors.iter().map(|v| (v.adjoint() * rho * v)[(0, 0)].re).collect()
    }

    fn check_data(&self, data: &DataVector) -> Result<()> {
        if data.observables != self.observables {
            return Err(Error::InvalidArgument("data were not taken with the tomography setup".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MleConfig {
    pub iterations: usize,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self { iterations: 100 }
    }
}

/// `R̂(ρ) = (1/‖f‖₁) Σ_i f_i / Tr(ρP_i) · P_i` for non-negative weights `f`.
pub fn r_operator_from_frequencies(rho: &CMatrix4, freqs: &[f64], setup: &TomographySetup) -> Result<CMatrix4> {
    if freqs.len() != setup.vectors.len() {
        return Err(Error::InvalidArgument("frequency vector length mismatch".into()));
    }
    let total: f64 = freqs.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("no counts".into()));
    }
    let probs = setup.probabilities(rho);
    let mut r = CMatrix4::zeros();
    for (i, (&f, &p)) in freqs.iter().zip(&probs).enumerate() {
        if f == 0.0 {
            continue;
        }
        if !(p > 0.0) {
            return Err(Error::ZeroProbability {
                observable: setup.observables[i / 4].to_string(),
                outcome: i % 4,
                count: f as u64,
            });
        }
        let v = &setup.vectors[i];
        r += (v * v.adjoint()).scale(f / (p * total));
    }
    Ok(r)
}

pub fn r_operator(rho: &DensityMatrix, data: &DataVector, setup: &TomographySetup) -> Result<CMatrix4> {
    setup.check_data(data)?;
    let freqs: Vec<f64> = data.counts.iter().map(|&n| n as f64).collect();
    r_operator_from_frequencies(rho.matrix(), &freqs, setup)
}

/// `Σ_i n_i ln Tr(ρP_i)`.
pub fn log_likelihood(rho: &DensityMatrix, data: &DataVector, setup: &TomographySetup) -> Result<f64> {
    setup.check_data(data)?;
    Ok(setup
        .probabilities(rho.matrix())
        .iter()
        .zip(&data.counts)
        .filter(|(_, &n)| n > 0)
        .map(|(&p, &n)| n as f64 * p.max(0.0).ln())
        .sum())
}

/// Runs the trace-normalised `ρ ← R̂ρR̂` map from `I/4` for exactly
/// `cfg.iterations` steps.
pub fn mle_reconstruct(data: &DataVector, setup: &TomographySetup, cfg: &MleConfig) -> Result<DensityMatrix> {
    mle_iterate(data, setup, cfg, |_| {})
}

/// Like [`mle_reconstruct`] but also returns the log-likelihood of every
/// iterate, starting with `I/4`.
pub fn mle_reconstruct_traced(
    data: &DataVector,
    setup: &TomographySetup,
    cfg: &MleConfig,
) -> Result<(DensityMatrix, Vec<f64>)> {
    let mut history = Vec::with_capacity(cfg.iterations + 1);
    let rho = mle_iterate(data, setup, cfg, |rho| {
        history.push(log_likelihood(rho, data, setup).unwrap_or(f64::NEG_INFINITY))
    })?;
    Ok((rho, history))
}

fn mle_iterate<F: FnMut(&DensityMatrix)>(
    data: &DataVector,
    setup: &TomographySetup,
    cfg: &MleConfig,
    mut observe: F,
) -> Result<DensityMatrix> {
    setup.check_data(data)?;
    if cfg.iterations == 0 {
        return Err(Error::InvalidArgument("MLE needs at least one iteration".into()));
    }
    let freqs: Vec<f64> = data.counts.iter().map(|&n| n as f64).collect();
    let mut rho = CMatrix4::identity().scale(0.25);
    observe(&DensityMatrix::from_trusted(rho));
    for _ in 0..cfg.iterations {
        let r = r_operator_from_frequencies(&rho, &freqs, setup)?;
        let next = r * rho * r;
        let tr = next.trace().re;
        rho = crate::linalg::hermitian_part(&next.unscale(tr));
        observe(&DensityMatrix::from_trusted(rho));
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// Simulates `trials` tomographies of `rho` with `total_shots` measurements
/// each and returns every reconstruction.
pub fn simulate_reconstructions(
    rho: &DensityMatrix,
    total_shots: u64,
    trials: usize,
    seed: u64,
    cfg: &MleConfig,
) -> Result<Vec<DensityMatrix>> {
    let setup = TomographySetup::new();
    let n = setup.shots_per_observable(total_shots)?;
    let bases = measurement_bases(setup.observables())?;
    let probs = probabilities_in_bases(rho, &bases);
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let data = sample_counts(&probs, n, &mut trial_rng(seed, t as u64));
            mle_reconstruct(&data, &setup, cfg)
        })
        .collect()
}

pub fn reconstruction_fidelities(
    rho: &DensityMatrix,
    total_shots: u64,
    trials: usize,
    seed: u64,
    cfg: &MleConfig,
) -> Result<Vec<f64>> {
    simulate_reconstructions(rho, total_shots, trials, seed, cfg)?
        .par_iter()
        .map(|est| fidelity(est, rho))
        .collect()
}

/// Likelihood-ratio success rate with full tomography data.
pub fn tomographic_success_rate(
    p: &ScenarioParams,
    n_axis: &[u64],
    alpha: SignificanceLevel,
    mc: &MonteCarlo,
) -> Result<SuccessRateReport> {
    let (rho_a, rho_0, _) = hypothesis_states(p)?;
    let setup = TomographySetup::new();
    let problem = DistinctionProblem::new(&rho_a, &rho_0, &rho_a, setup.observables())?;
    let (rates, th) = problem.success_curve(n_axis, alpha, mc)?;
    Ok(SuccessRateReport {
        shots_axis: n_axis.iter().map(|n| 9 * n).collect(),
        rates,
        trials: mc.trials,
        lambda_min_used: th.into_iter().map(Some).collect(),
        gamma: p.dephasing_gamma,
        separation_d: p.separation_d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Null,
    Alternative,
}

impl Hypothesis {
    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::Null => "null",
            Hypothesis::Alternative => "alternative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    pub hypothesis: Hypothesis,
    pub trial: usize,
    pub negativity: f64,
    pub fidelity_to_truth: f64,
}

/// Reconstructions of both hypotheses at one shot budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyBatch {
    pub shots: u64,
    pub tau: f64,
    pub records: Vec<TomographyRecord>,
    /// Nearest-rank 99th percentile of the null negativities.
    pub null_threshold: f64,
    /// Fraction of alternative reconstructions above `null_threshold`.
    pub exceedance: f64,
}

fn reconstruct_records(
    rho: &DensityMatrix,
    hypothesis: Hypothesis,
    shots: u64,
    trials: usize,
    seed: u64,
    cfg: &MleConfig,
) -> Result<Vec<TomographyRecord>> {
    let estimates = simulate_reconstructions(rho, shots, trials, seed, cfg)?;
    estimates
        .par_iter()
        .enumerate()
        .map(|(trial, est)| {
            Ok(TomographyRecord {
                hypothesis,
                trial,
                negativity: negativity(est),
                fidelity_to_truth: fidelity(est, rho)?,
            })
        })
        .collect()
}

/// Tomographies of both hypotheses at the alternative's optimal fall time.
pub fn tomography_batch(
    p: &ScenarioParams,
    total_shots: u64,
    trials: usize,
    seed: u64,
    cfg: &MleConfig,
) -> Result<TomographyBatch> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let (rho_a, rho_0, tau) = hypothesis_states(p)?;
    let null = reconstruct_records(&rho_0, Hypothesis::Null, total_shots, trials, derive_seed(seed, "tomo_null", total_shots), cfg)?;
    let alt = reconstruct_records(
        &rho_a,
        Hypothesis::Alternative,
        total_shots,
        trials,
        derive_seed(seed, "tomo_alt", total_shots),
        cfg,
    )?;
    let mut null_negs: Vec<f64> = null.iter().map(|r| r.negativity).collect();
    let threshold = upper_quantile(&mut null_negs, 0.01);
    let above = alt.iter().filter(|r| r.negativity > threshold).count();
    let mut records = null;
    records.extend(alt);
    Ok(TomographyBatch {
        shots: total_shots,
        tau,
        records,
        null_threshold: threshold,
        exceedance: above as f64 / trials as f64,
    })
}

/// Fraction of alternative reconstructions whose negativity exceeds the
/// 99th percentile of the null reconstructions' negativities.
pub fn negativity_exceedance(p: &ScenarioParams, total_shots: u64, trials: usize, seed: u64) -> Result<f64> {
    Ok(tomography_batch(p, total_shots, trials, seed, &MleConfig::default())?.exceedance)
}
