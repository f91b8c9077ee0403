//! Likelihood-ratio state distinction on simulated Pauli measurement data.
//!
//! Data are multinomial counts over the four eigenprojectors of each measured
//! observable. The statistic is `λ = 2 Σ n_ij (ln p_a,ij − ln p_0,ij)`; the
//! rejection threshold `λ_min` is the empirical `(1−α)`-quantile of `λ` on data
//! simulated from the null state.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{coupling_tensor, ScenarioParams};
use crate::quantum::{eigenbasis, expectation, DensityMatrix, MeasurementBasis, PauliObservable};
use crate::rng::{derive_seed, trial_rng};
use crate::witness::{optimal_fall_time, w1, w1_closed_form, w1_observables, WitnessSpec};

/// Outcome probabilities of `l` observables, four per observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    pub observables: Vec<PauliObservable>,
    pub probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn block(&self, i: usize) -> &[f64] {
        &self.probs[4 * i..4 * i + 4]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Outcome counts, `shots_per_observable` per block of four.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataVector {
    pub observables: Vec<PauliObservable>,
    pub counts: Vec<u64>,
    pub shots_per_observable: u64,
}

impl DataVector {
    pub fn block(&self, i: usize) -> &[u64] {
        &self.counts[4 * i..4 * i + 4]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn check_blocks(&self) -> bool {
        self.counts.len() == 4 * self.observables.len()
            && self.counts.chunks(4).all(|b| b.iter().sum::<u64>() == self.shots_per_observable)
    }
}

/// Significance level of the test, in the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SignificanceLevel(f64);

impl SignificanceLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidArgument(format!("significance level must lie in (0, 1), got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SignificanceLevel {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignificanceLevel> for f64 {
    fn from(a: SignificanceLevel) -> f64 {
        a.0
    }
}

pub fn measurement_bases(observables: &[PauliObservable]) -> Result<Vec<MeasurementBasis>> {
    observables.iter().map(|&o| eigenbasis(o)).collect()
}

pub fn outcome_probabilities(rho: &DensityMatrix, observables: &[PauliObservable]) -> Result<ProbabilityVector> {
    let bases = measurement_bases(observables)?;
    Ok(probabilities_in_bases(rho, &bases))
}

pub(crate) fn probabilities_in_bases(rho: &DensityMatrix, bases: &[MeasurementBasis]) -> ProbabilityVector {
    let mut probs = Vec::with_capacity(4 * bases.len());
    for basis in bases {
        let mut block = basis.probabilities(rho.matrix());
        // ρ is PSD, so negatives are rounding noise
        for p in block.iter_mut() {
            *p = p.max(0.0);
        }
        let total: f64 = block.iter().sum();
        probs.extend(block.iter().map(|p| p / total));
    }
    ProbabilityVector { observables: bases.iter().map(|b| b.observable).collect(), probs }
}

/// One multinomial draw of `shots` outcomes per observable, by sequential
/// conditional binomials.
pub fn sample_counts<R: Rng + ?Sized>(probs: &ProbabilityVector, shots: u64, rng: &mut R) -> DataVector {
    let mut counts = Vec::with_capacity(probs.len());
    for block in probs.probs.chunks(4) {
        let mut remaining = shots;
        let mut mass_left = 1.0;
        for (j, &p) in block.iter().enumerate() {
            let k = if j == 3 || remaining == 0 {
                remaining
            } else if mass_left <= 0.0 {
                0
            } else {
                let q = (p / mass_left).clamp(0.0, 1.0);
                Binomial::new(remaining, q).expect("probability in [0, 1]").sample(rng)
            };
            counts.push(k);
            remaining -= k;
            mass_left -= p;
        }
    }
    DataVector { observables: probs.observables.clone(), counts, shots_per_observable: shots }
}

/// Simulates `shots` measurements of each observable on `rho`, reproducibly
/// from `seed`.
pub fn simulate_measurements(
    rho: &DensityMatrix,
    observables: &[PauliObservable],
    shots: u64,
    seed: u64,
) -> Result<DataVector> {
    if shots == 0 {
        return Err(Error::InvalidArgument("need at least one shot per observable".into()));
    }
    let probs = outcome_probabilities(rho, observables)?;
    Ok(sample_counts(&probs, shots, &mut trial_rng(seed, 0)))
}

/// Precomputed `ln p_a − ln p_0` per outcome, `±∞` where one side vanishes.
#[derive(Debug, Clone)]
pub struct LikelihoodRatio {
    observables: Vec<PauliObservable>,
    weights: Vec<f64>,
}

impl LikelihoodRatio {
    pub fn new(p_a: &ProbabilityVector, p_0: &ProbabilityVector) -> Result<Self> {
        if p_a.observables != p_0.observables || p_a.len() != p_0.len() {
            return Err(Error::InvalidArgument("probability vectors describe different observables".into()));
        }
        let weights = p_a
            .probs
            .iter()
            .zip(&p_0.probs)
            .map(|(&a, &b)| match (a > 0.0, b > 0.0) {
                (true, true) => a.ln() - b.ln(),
                (true, false) => f64::INFINITY,
                (false, true) => f64::NEG_INFINITY,
                (false, false) => f64::NAN,
            })
            .collect();
        Ok(Self { observables: p_a.observables.clone(), weights })
    }

    /// `λ = 2 Σ n_ij (ln p_a,ij − ln p_0,ij)`. Counts on an outcome that one
    /// hypothesis forbids give `±∞`; counts that both forbid are an error.
    pub fn evaluate(&self, data: &DataVector) -> Result<f64> {
        if data.counts.len() != self.weights.len() {
            return Err(Error::InvalidArgument("data length does not match probability vectors".into()));
        }
        let mut finite = 0.0;
        let (mut plus_inf, mut minus_inf) = (false, false);
        for (idx, (&n, &w)) in data.counts.iter().zip(&self.weights).enumerate() {
            if n == 0 {
                continue;
            }
            if w.is_nan() {
                return Err(self.impossible(idx));
            } else if w == f64::INFINITY {
                plus_inf = true;
            } else if w == f64::NEG_INFINITY {
                minus_inf = true;
            } else {
                finite += n as f64 * w;
            }
        }
        match (plus_inf, minus_inf) {
            (true, true) => Err(self.impossible(0)),
            (true, false) => Ok(f64::INFINITY),
            (false, true) => Ok(f64::NEG_INFINITY),
            (false, false) => Ok(2.0 * finite),
        }
    }

    fn impossible(&self, idx: usize) -> Error {
        Error::ImpossibleData { observable: self.observables[idx / 4].to_string(), outcome: idx % 4 }
    }
}

pub fn log_likelihood_ratio(n: &DataVector, p_a: &ProbabilityVector, p_0: &ProbabilityVector) -> Result<f64> {
    LikelihoodRatio::new(p_a, p_0)?.evaluate(n)
}

/// Nearest-rank `(1−α)`-quantile: the smallest sample `x` with at least a
/// fraction `1−α` of samples `≤ x`.
pub fn upper_quantile(values: &mut [f64], alpha: f64) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let rank = ((1.0 - alpha) * values.len() as f64).ceil() as usize;
    values[rank.clamp(1, values.len()) - 1]
}

fn lambda_samples(
    ratio: &LikelihoodRatio,
    source: &ProbabilityVector,
    shots: u64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let data = sample_counts(source, shots, &mut trial_rng(seed, t as u64));
            ratio.evaluate(&data)
        })
        .collect()
}

/// Rejection threshold: `(1−α)`-quantile of `λ` over `trials` data vectors
/// drawn from `p_0`.
pub fn lambda_min(
    p_a: &ProbabilityVector,
    p_0: &ProbabilityVector,
    shots: u64,
    alpha: SignificanceLevel,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!("lambda_min needs at least 100 trials, got {trials}")));
    }
    let ratio = LikelihoodRatio::new(p_a, p_0)?;
    let mut samples = lambda_samples(&ratio, p_0, shots, trials, seed)?;
    Ok(upper_quantile(&mut samples, alpha.value()))
}

/// Monte Carlo budget and seed for one success-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    /// Trials per success-rate point.
    pub trials: usize,
    /// Null-hypothesis trials used to estimate `λ_min`.
    pub lambda_trials: usize,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self { trials: 1_000, lambda_trials: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRateReport {
    /// Total bipartite Pauli measurements `l·N`.
    pub shots_axis: Vec<u64>,
    pub rates: Vec<f64>,
    pub trials: usize,
    /// `None` where no threshold is involved.
    pub lambda_min_used: Vec<Option<f64>>,
    pub gamma: f64,
    pub separation_d: f64,
}

fn check_axis(n_axis: &[u64]) -> Result<()> {
    if n_axis.is_empty() || n_axis.contains(&0) {
        return Err(Error::InvalidArgument("shot axis must be non-empty with positive entries".into()));
    }
    Ok(())
}

/// A pair of hypotheses and the state that actually generates the data.
#[derive(Debug, Clone)]
pub struct DistinctionProblem {
    pub alternative: ProbabilityVector,
    pub null: ProbabilityVector,
    /// Source of the "observed" data; normally the alternative.
    pub truth: ProbabilityVector,
}

impl DistinctionProblem {
    pub fn new(
        rho_a: &DensityMatrix,
        rho_0: &DensityMatrix,
        truth: &DensityMatrix,
        observables: &[PauliObservable],
    ) -> Result<Self> {
        let bases = measurement_bases(observables)?;
        Ok(Self {
            alternative: probabilities_in_bases(rho_a, &bases),
            null: probabilities_in_bases(rho_0, &bases),
            truth: probabilities_in_bases(truth, &bases),
        })
    }

    /// For each per-observable shot count `N`: estimate `λ_min(N)` on null
    /// data, then the fraction of truth-data trials with `λ ≥ λ_min(N)`.
    pub fn success_curve(
        &self,
        n_axis: &[u64],
        alpha: SignificanceLevel,
        mc: &MonteCarlo,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        check_axis(n_axis)?;
        if mc.lambda_trials < 100 || mc.trials == 0 {
            return Err(Error::InvalidArgument("Monte Carlo budget too small".into()));
        }
        let ratio = LikelihoodRatio::new(&self.alternative, &self.null)?;
        let mut rates = Vec::with_capacity(n_axis.len());
        let mut thresholds = Vec::with_capacity(n_axis.len());
        for &n in n_axis {
            let mut null_l =
                lambda_samples(&ratio, &self.null, n, mc.lambda_trials, derive_seed(mc.seed, "lambda0", n))?;
            let threshold = upper_quantile(&mut null_l, alpha.value());
            let alt_l = lambda_samples(&ratio, &self.truth, n, mc.trials, derive_seed(mc.seed, "lambda_a", n))?;
            let hits = alt_l.iter().filter(|&&l| l >= threshold).count();
            rates.push(hits as f64 / mc.trials as f64);
            thresholds.push(threshold);
        }
        Ok((rates, thresholds))
    }
}

/// Null and alternative states at the alternative's optimal `W1` fall time.
pub fn hypothesis_states(p: &ScenarioParams) -> Result<(DensityMatrix, DensityMatrix, f64)> {
    p.validate()?;
    let alt = p.clone().with_gravity(true);
    let tau = optimal_fall_time(&alt, &w1(), None)?.tau;
    let rho_a = crate::model::spin_state(&alt, tau)?;
    let rho_0 = crate::model::spin_state(&alt.null_hypothesis(), tau)?;
    Ok((rho_a, rho_0, tau))
}

fn report(p: &ScenarioParams, l: usize, n_axis: &[u64], rates: Vec<f64>, lambdas: Vec<Option<f64>>, trials: usize) -> SuccessRateReport {
    SuccessRateReport {
        shots_axis: n_axis.iter().map(|n| n * l as u64).collect(),
        rates,
        trials,
        lambda_min_used: lambdas,
        gamma: p.dephasing_gamma,
        separation_d: p.separation_d,
    }
}

/// Success rate of rejecting the gravity-free null on data from the
/// gravity-on state, measuring `observables` `N` times each.
pub fn distinction_success_rate(
    p: &ScenarioParams,
    observables: &[PauliObservable],
    n_axis: &[u64],
    alpha: SignificanceLevel,
    mc: &MonteCarlo,
) -> Result<SuccessRateReport> {
    let (rho_a, rho_0, _) = hypothesis_states(p)?;
    let problem = DistinctionProblem::new(&rho_a, &rho_0, &rho_a, observables)?;
    let (rates, th) = problem.success_curve(n_axis, alpha, mc)?;
    Ok(report(p, observables.len(), n_axis, rates, th.into_iter().map(Some).collect(), mc.trials))
}

/// False-positive control: the same test with data generated by the null
/// state. The rate estimates the significance level.
pub fn null_control_rate(
    p: &ScenarioParams,
    observables: &[PauliObservable],
    n_axis: &[u64],
    alpha: SignificanceLevel,
    mc: &MonteCarlo,
) -> Result<SuccessRateReport> {
    let (rho_a, rho_0, _) = hypothesis_states(p)?;
    let problem = DistinctionProblem::new(&rho_a, &rho_0, &rho_0, observables)?;
    let (rates, th) = problem.success_curve(n_axis, alpha, mc)?;
    Ok(report(p, observables.len(), n_axis, rates, th.into_iter().map(Some).collect(), mc.trials))
}

/// Plug-in witness estimate from counts: `c_I + Σ_k c_k ⟨σ_k⟩̂`, each mean
/// taken over the ±1 outcomes of its observable.
pub fn empirical_witness(w: &WitnessSpec, data: &DataVector) -> Result<f64> {
    let mut value = 0.0;
    for (coef, obs) in &w.terms {
        if obs.has_identity() {
            if obs.left == obs.right {
                value += coef;
                continue;
            }
            return Err(Error::DegenerateObservable(obs.to_string()));
        }
        let idx = data
            .observables
            .iter()
            .position(|o| o == obs)
            .ok_or_else(|| Error::InvalidArgument(format!("data has no {obs} block")))?;
        let basis = eigenbasis(*obs)?;
        let block = data.block(idx);
        let signed: f64 = block.iter().zip(&basis.eigenvalues).map(|(&n, &e)| n as f64 * e).sum();
        value += coef * signed / data.shots_per_observable as f64;
    }
    Ok(value)
}

/// Probability that the empirical `W1` average is negative on data from the
/// gravity-on state at its optimal fall time.
pub fn witness_negative_probability(
    p: &ScenarioParams,
    n_axis: &[u64],
    trials: usize,
    seed: u64,
) -> Result<SuccessRateReport> {
    check_axis(n_axis)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let (rho_a, _, _) = hypothesis_states(p)?;
    let w = w1();
    let observables = w.measured_observables();
    let probs = outcome_probabilities(&rho_a, &observables)?;
    let mut rates = Vec::with_capacity(n_axis.len());
    for &n in n_axis {
        let run_seed = derive_seed(seed, "witneg", n);
        let negatives: Vec<bool> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let data = sample_counts(&probs, n, &mut trial_rng(run_seed, t as u64));
                empirical_witness(&w, &data).map(|v| v < 0.0)
            })
            .collect::<Result<_>>()?;
        rates.push(negatives.iter().filter(|&&b| b).count() as f64 / trials as f64);
    }
    Ok(report(p, observables.len(), n_axis, rates, vec![None; n_axis.len()], trials))
}

/// Default search interval for [`match_alpha`], in units of the nominal
/// coupling.
pub const MATCH_BRACKET: (f64, f64) = (1.0, 16.0);
const MATCH_SCAN_POINTS: usize = 600;

/// Casimir-Polder scale `s` for which the gravity-free state with coupling
/// `s·α` has the same `W1` expectation at `tau` as the gravity-on state with
/// nominal `α`. Returns the smallest such `s` in the bracket.
pub fn match_alpha(p: &ScenarioParams, tau: f64) -> Result<f64> {
    match_alpha_in(p, tau, MATCH_BRACKET)
}

pub fn match_alpha_in(p: &ScenarioParams, tau: f64, (lo, hi): (f64, f64)) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    if !(hi > lo && lo >= 0.0) {
        return Err(Error::InvalidArgument(format!("bad bracket [{lo}, {hi}]")));
    }
    let alt = p.clone().with_gravity(true);
    let target = w1_closed_form(&alt, tau);
    let null = alt.null_hypothesis();
    let f = |s: f64| w1_closed_form(&null.clone().with_cp_scale(p.cp_scale * s), tau) - target;

    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    // coarse scan for the first sign change, then bisection
    let mut a = lo;
    let mut fa = f_lo;
    for i in 1..=MATCH_SCAN_POINTS {
        let b = lo + (hi - lo) * i as f64 / MATCH_SCAN_POINTS as f64;
        let fb = f(b);
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() != fb.signum() {
            return Ok(bisect(&f, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoRootInBracket { lo, hi, f_lo, f_hi: f(hi) })
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-13 * b.abs().max(1e-300) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Largest difference of the individual `W1` Pauli expectations between two
/// states.
pub fn max_pauli_discrepancy(rho_a: &DensityMatrix, rho_0: &DensityMatrix) -> f64 {
    w1_observables()
        .into_iter()
        .map(|o| (expectation(rho_a, o) - expectation(rho_0, o)).abs())
        .fold(0.0, f64::max)
}

/// The α-matched null, its scale and the fall time used.
pub struct MatchedNull {
    pub tau: f64,
    pub cp_scale: f64,
    pub rho_a: DensityMatrix,
    pub rho_0: DensityMatrix,
}

pub fn matched_null(p: &ScenarioParams) -> Result<MatchedNull> {
    p.validate()?;
    let alt = p.clone().with_gravity(true);
    let tau = optimal_fall_time(&alt, &w1(), None)?.tau;
    let scale = match_alpha(&alt, tau)?;
    let null = alt.null_hypothesis().with_cp_scale(p.cp_scale * scale);
    Ok(MatchedNull {
        tau,
        cp_scale: scale,
        rho_a: crate::model::spin_state(&alt, tau)?,
        rho_0: crate::model::spin_state(&null, tau)?,
    })
}

/// Distinction success rate against the null whose Casimir-Polder coupling
/// is rescaled to reproduce the alternative's `W1` expectation.
pub fn differential_success_rate(
    p: &ScenarioParams,
    n_axis: &[u64],
    alpha: SignificanceLevel,
    mc: &MonteCarlo,
) -> Result<SuccessRateReport> {
    let matched = matched_null(p)?;
    let observables = w1_observables();
    let problem = DistinctionProblem::new(&matched.rho_a, &matched.rho_0, &matched.rho_a, &observables)?;
    let (rates, th) = problem.success_curve(n_axis, alpha, mc)?;
    Ok(report(p, observables.len(), n_axis, rates, th.into_iter().map(Some).collect(), mc.trials))
}

/// Smallest normalised singular value of the pair `[Q⁽ᵃ⁾, Q⁽ᵇ⁾]` over the
/// distinct branch-pair components; zero iff the tensors are proportional.
pub fn coupling_independence(p: &ScenarioParams, a: u32, b: u32) -> Result<f64> {
    let unit = |order: u32| -> Result<[f64; 3]> {
        let v = coupling_tensor(p, order)?.distinct_components();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(v.map(|x| x / n))
    };
    let (u, v) = (unit(a)?, unit(b)?);
    let cos: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    // Gram matrix [[1, c], [c, 1]] has eigenvalues 1 ± |c|
    Ok((1.0 - cos.abs()).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector4};
    use crate::quantum::Pauli;

    fn zz() -> Vec<PauliObservable> {
        vec![PauliObservable::new(Pauli::Z, Pauli::Z)]
    }

    #[test]
    fn probabilities_basic() {
        let mixed = DensityMatrix::maximally_mixed();
        let pv = outcome_probabilities(&mixed, &w1_observables()).unwrap();
        assert!(pv.probs.iter().all(|&p| (p - 0.25).abs() < 1e-15));

        let mut v = CVector4::zeros();
        v[0] = c(1.0, 0.0);
        let ground = DensityMatrix::pure(&v).unwrap();
        let pv = outcome_probabilities(&ground, &zz()).unwrap();
        assert_eq!(pv.block(0), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn sampling_blocks_and_determinism() {
        let rho = crate::model::spin_state(&ScenarioParams::close_separation().with_gamma(0.3), 0.34).unwrap();
        let obs = w1_observables();
        let a = simulate_measurements(&rho, &obs, 250, 11).unwrap();
        let b = simulate_measurements(&rho, &obs, 250, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.check_blocks());
        assert!(simulate_measurements(&rho, &obs, 0, 1).is_err());
    }

    #[test]
    fn large_sample_frequencies() {
        let data = simulate_measurements(&DensityMatrix::maximally_mixed(), &zz(), 100_000, 5).unwrap();
        // 0.01 is > 7 binomial standard deviations at N = 1e5
        for &n in data.block(0) {
            assert!((n as f64 / 1e5 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn llr_identical_is_zero() {
        let rho = DensityMatrix::maximally_mixed();
        let p = outcome_probabilities(&rho, &w1_observables()).unwrap();
        let data = simulate_measurements(&rho, &w1_observables(), 40, 3).unwrap();
        assert_eq!(log_likelihood_ratio(&data, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn llr_infinite_evidence() {
        let pa = ProbabilityVector { observables: zz(), probs: vec![0.5, 0.5, 0.0, 0.0] };
        let p0 = ProbabilityVector { observables: zz(), probs: vec![0.0, 0.5, 0.5, 0.0] };
        let data = |counts: Vec<u64>| DataVector { observables: zz(), counts, shots_per_observable: 1 };
        assert_eq!(log_likelihood_ratio(&data(vec![1, 0, 0, 0]), &pa, &p0).unwrap(), f64::INFINITY);
        assert_eq!(log_likelihood_ratio(&data(vec![0, 0, 1, 0]), &pa, &p0).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(
            log_likelihood_ratio(&data(vec![0, 0, 0, 1]), &pa, &p0),
            Err(Error::ImpossibleData { .. })
        ));
        assert!(log_likelihood_ratio(&data(vec![0, 1, 0, 0]), &pa, &p0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn quantile_edges() {
        let mut v = vec![3.0, 1.0, 2.0, 5.0, 4.0];
        assert_eq!(upper_quantile(&mut v.clone(), 0.999_999), 1.0);
        assert_eq!(upper_quantile(&mut v, 0.2), 4.0);
        assert!(SignificanceLevel::new(0.0).is_err());
        assert!(SignificanceLevel::new(1.0).is_err());
    }

    #[test]
    fn match_alpha_without_gravity_difference() {
        // with G = 0 the two hypotheses coincide at the nominal coupling
        let mut p = ScenarioParams::close_separation().with_gamma(0.3);
        p.constants.g = 0.0;
        let s = match_alpha(&p, 0.34).unwrap();
        assert!((s - 1.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn match_alpha_errors_without_root() {
        let p = ScenarioParams::close_separation().with_gamma(0.3);
        assert!(matches!(match_alpha_in(&p, 0.34, (1.2, 1.3)), Err(Error::NoRootInBracket { .. })));
        assert!(match_alpha(&p, 0.0).is_err());
    }

    #[test]
    fn q_tensors_not_proportional() {
        let p = ScenarioParams::default();
        for (a, b) in [(1, 3), (1, 7), (3, 7)] {
            assert!(coupling_independence(&p, a, b).unwrap() > 1e-12);
        }
        assert!(coupling_independence(&p, 1, 1).unwrap() < 1e-7);
    }
}
