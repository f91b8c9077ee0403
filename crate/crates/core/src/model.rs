//! Two-interferometer spin model: branch geometry, gravitational and
//! Casimir-Polder couplings, phase rates, the dephased spin state and
//! first-order corrections to the point-particle treatment.
//!
//! Sign convention: the `LR` branch pair is the closest approach `d − 2δ` and
//! carries the large positive phase; `RL` sits at `d + 2δ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix4, CVector4};
use crate::quantum::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// m³·kg⁻¹·s⁻²
    pub g: f64,
    /// J·s
    pub hbar: f64,
    /// m·s⁻¹
    pub c: f64,
}

impl PhysicalConstants {
    pub const SI: Self = Self { g: 6.674e-11, hbar: 1.0546e-34, c: 2.998e8 };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// Physical inputs of one scenario, SI units throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub mass: f64,
    pub separation_d: f64,
    pub half_split_delta: f64,
    pub trap_omega: f64,
    pub mean_occupation_nbar: f64,
    pub dephasing_gamma: f64,
    #[serde(rename = "sphere_radius_R")]
    pub sphere_radius_r: f64,
    pub permittivity_eps: f64,
    pub gravity_on: bool,
    pub cp_scale: f64,
    #[serde(skip)]
    pub constants: PhysicalConstants,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            mass: 1e-14,
            separation_d: 450e-6,
            half_split_delta: 125e-6,
            trap_omega: 1e3,
            mean_occupation_nbar: 1e6,
            dephasing_gamma: 0.0,
            // A 1e-14 kg diamond sphere has R ≈ 1 μm; this value reproduces the
            // 0.016 rad/s Casimir-Polder rate at d = 450 μm.
            sphere_radius_r: 1e-6,
            permittivity_eps: 5.7,
            gravity_on: true,
            cp_scale: 1.0,
            constants: PhysicalConstants::SI,
        }
    }
}

impl ScenarioParams {
    /// Default geometry at `d = 350 μm`.
    pub fn close_separation() -> Self {
        Self { separation_d: 350e-6, ..Self::default() }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.dephasing_gamma = gamma;
        self
    }

    pub fn with_gravity(mut self, on: bool) -> Self {
        self.gravity_on = on;
        self
    }

    pub fn with_cp_scale(mut self, scale: f64) -> Self {
        self.cp_scale = scale;
        self
    }

    /// The null-hypothesis counterpart (no gravitational coupling).
    pub fn null_hypothesis(&self) -> Self {
        self.clone().with_gravity(false)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mass", self.mass),
            ("separation_d", self.separation_d),
            ("half_split_delta", self.half_split_delta),
            ("trap_omega", self.trap_omega),
            ("mean_occupation_nbar", self.mean_occupation_nbar),
            ("dephasing_gamma", self.dephasing_gamma),
            ("sphere_radius_R", self.sphere_radius_r),
            ("permittivity_eps", self.permittivity_eps),
            ("cp_scale", self.cp_scale),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} is not finite ({v})")));
        }
        for (name, v) in [
            ("mass", self.mass),
            ("separation_d", self.separation_d),
            ("trap_omega", self.trap_omega),
            ("sphere_radius_R", self.sphere_radius_r),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("half_split_delta", self.half_split_delta),
            ("mean_occupation_nbar", self.mean_occupation_nbar),
            ("dephasing_gamma", self.dephasing_gamma),
            ("cp_scale", self.cp_scale),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.permittivity_eps < 1.0 {
            return Err(Error::InvalidParams(format!(
                "permittivity_eps must be >= 1, got {}",
                self.permittivity_eps
            )));
        }
        if self.separation_d - 2.0 * self.half_split_delta <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "branches overlap: d - 2δ = {:.3e} m",
                self.separation_d - 2.0 * self.half_split_delta
            )));
        }
        let k = &self.constants;
        if !(k.g > 0.0 && k.hbar > 0.0 && k.c > 0.0) {
            return Err(Error::InvalidParams("physical constants must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    L,
    R,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::L, Branch::R];

    fn index(self) -> usize {
        match self {
            Branch::L => 0,
            Branch::R => 1,
        }
    }
}

/// Ordered pair of branches, first particle then second.
pub type BranchPair = (Branch, Branch);

const LR: BranchPair = (Branch::L, Branch::R);
const RL: BranchPair = (Branch::R, Branch::L);
const LL: BranchPair = (Branch::L, Branch::L);

fn pair_index((a, b): BranchPair) -> usize {
    2 * a.index() + b.index()
}

/// Separation `d_μν` for each branch pair, in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSeparations {
    values: [f64; 4],
}

impl BranchSeparations {
    pub fn get(&self, pair: BranchPair) -> f64 {
        self.values[pair_index(pair)]
    }

    pub fn closest(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn distinct(&self) -> [f64; 3] {
        [self.get(LR), self.get(LL), self.get(RL)]
    }
}

pub fn branch_separations(p: &ScenarioParams) -> BranchSeparations {
    let (d, delta) = (p.separation_d, p.half_split_delta);
    let mut values = [d; 4];
    values[pair_index(LR)] = d - 2.0 * delta;
    values[pair_index(RL)] = d + 2.0 * delta;
    BranchSeparations { values }
}

/// `Q⁽ⁿ⁾_αβμν = 1/d_αβⁿ − 1/d_μνⁿ`, in m⁻ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTensor {
    pub order: u32,
    values: [[f64; 4]; 4],
}

impl CouplingTensor {
    pub fn get(&self, ab: BranchPair, mn: BranchPair) -> f64 {
        self.values[pair_index(ab)][pair_index(mn)]
    }

    /// The `LR,RL` component, which has the largest magnitude.
    pub fn fastest(&self) -> f64 {
        self.get(LR, RL)
    }

    /// Components over the three distinct separations:
    /// `[Q(LR,LL), Q(RL,LL), Q(LR,RL)]`.
    pub fn distinct_components(&self) -> [f64; 3] {
        [self.get(LR, LL), self.get(RL, LL), self.get(LR, RL)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BranchPair, BranchPair, f64)> + '_ {
        let pairs = [(Branch::L, Branch::L), LR, RL, (Branch::R, Branch::R)];
        pairs
            .into_iter()
            .flat_map(move |ab| pairs.into_iter().map(move |mn| (ab, mn, self.get(ab, mn))))
    }
}

pub fn coupling_tensor(p: &ScenarioParams, order: u32) -> Result<CouplingTensor> {
    if order == 0 {
        return Err(Error::InvalidArgument("coupling tensor order must be >= 1".into()));
    }
    let seps = branch_separations(p);
    let inv = |x: f64| x.powi(-(order as i32));
    let mut values = [[0.0; 4]; 4];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = inv(seps.values[i]) - inv(seps.values[j]);
        }
    }
    Ok(CouplingTensor { order, values })
}

fn q_fastest(p: &ScenarioParams, order: u32) -> f64 {
    let seps = branch_separations(p);
    seps.get(LR).powi(-(order as i32)) - seps.get(RL).powi(-(order as i32))
}

/// Casimir-Polder coupling `α(R, ε)·cp_scale` in J·m⁷.
pub fn cp_coupling(p: &ScenarioParams) -> f64 {
    let eps = p.permittivity_eps;
    let clausius = ((eps - 1.0) / (eps + 2.0)).powi(2);
    let k = &p.constants;
    clausius * 23.0 * k.hbar * k.c * p.sphere_radius_r.powi(6) / (4.0 * PI) * p.cp_scale
}

/// Signed angular rates with `Δφ_μν = ω_μν·τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRates {
    pub omega_lr: f64,
    pub omega_rl: f64,
}

impl PhaseRates {
    pub fn sum(&self) -> f64 {
        self.omega_lr + self.omega_rl
    }

    pub fn phases(&self, tau: f64) -> (f64, f64) {
        (self.omega_lr * tau, self.omega_rl * tau)
    }
}

pub fn phase_rates(p: &ScenarioParams) -> PhaseRates {
    let k = &p.constants;
    let seps = branch_separations(p);
    let gm2 = if p.gravity_on { k.g * p.mass * p.mass } else { 0.0 };
    let alpha = cp_coupling(p);
    let d = p.separation_d;
    let rate = |dmn: f64| (gm2 * (1.0 / dmn - 1.0 / d) + alpha * (dmn.powi(-7) - d.powi(-7))) / k.hbar;
    PhaseRates { omega_lr: rate(seps.get(LR)), omega_rl: rate(seps.get(RL)) }
}

/// Gravitational angular rate of the fastest element, `G m² |Q⁽¹⁾| / ħ`
/// (rad/s), independent of `gravity_on`.
pub fn gravity_frequency(p: &ScenarioParams) -> f64 {
    let k = &p.constants;
    k.g * p.mass * p.mass * q_fastest(p, 1).abs() / k.hbar
}

/// Casimir-Polder angular rate of the fastest element, `α |Q⁽⁷⁾| / ħ` (rad/s).
pub fn cp_frequency(p: &ScenarioParams) -> f64 {
    cp_coupling(p) * q_fastest(p, 7).abs() / p.constants.hbar
}

/// Free-fall time for the fastest element's interaction phase to reach one
/// radian, using whichever couplings `p` enables.
pub fn characteristic_time(p: &ScenarioParams) -> f64 {
    let r = phase_rates(p);
    1.0 / (r.omega_lr - r.omega_rl).abs()
}

/// Spin state after free fall of duration `tau`: the pure point-particle
/// state with per-qubit dephasing at rate `γ`.
///
/// Basis order is `|L₁L₂⟩, |L₁R₂⟩, |R₁L₂⟩, |R₁R₂⟩`. Mass 1 sits left of
/// mass 2, so `|L₁R₂⟩` is the far pair (`d + 2δ`) and `|R₁L₂⟩` the close
/// pair whose rate is `omega_lr`.
pub fn spin_state(p: &ScenarioParams, tau: f64) -> Result<DensityMatrix> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("free-fall time must be >= 0, got {tau}")));
    }
    Ok(spin_state_unchecked(p, tau))
}

pub(crate) fn spin_state_unchecked(p: &ScenarioParams, tau: f64) -> DensityMatrix {
    let (phi_lr, phi_rl) = phase_rates(p).phases(tau);
    let psi = CVector4::new(
        c(0.5, 0.0),
        c(0.0, phi_rl).exp() * 0.5,
        c(0.0, phi_lr).exp() * 0.5,
        c(0.5, 0.0),
    );
    let damp = (-p.dephasing_gamma * tau).exp();
    let m = CMatrix4::from_fn(|i, j| {
        let flips = ((i >> 1) != (j >> 1)) as i32 + ((i & 1) != (j & 1)) as i32;
        psi[i] * psi[j].conj() * damp.powi(flips)
    });
    DensityMatrix::from_trusted(m)
}

/// Size of the corrections to the point-particle treatment for the fastest
/// branch pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeaReport {
    pub tau: f64,
    pub theta_magnitude: f64,
    /// Extra phase `G² m³ τ³ |Q⁽⁴⁾| / 6ħ`, rad.
    pub phase_correction: f64,
    pub decoherence_factor_zero_t: f64,
    pub decoherence_factor_thermal: f64,
    /// `ln` of the zero-temperature factor, `−|θ|²`.
    pub zero_t_exponent: f64,
    /// `ln` of the thermal factor, `−(n̄/2 + 1)|θ|²`.
    pub thermal_exponent: f64,
    pub kappa: f64,
}

pub fn pea_corrections(p: &ScenarioParams, tau: f64) -> Result<PeaReport> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("free-fall time must be >= 0, got {tau}")));
    }
    let k = &p.constants;
    let (m, w) = (p.mass, p.trap_omega);
    let q2 = q_fastest(p, 2);
    let q4 = q_fastest(p, 4);
    // θ = (G m Q⁽²⁾ τ / √2)·[τ/2·√(mω/ħ) − i·√(m/(ħω))]
    let prefactor = k.g * m * q2 * tau / 2f64.sqrt();
    let theta_re = prefactor * tau / 2.0 * (m * w / k.hbar).sqrt();
    let theta_im = -prefactor * (m / (k.hbar * w)).sqrt();
    let theta_sq = theta_re * theta_re + theta_im * theta_im;
    let zero_t_exponent = -theta_sq;
    let thermal_exponent = -(p.mean_occupation_nbar / 2.0 + 1.0) * theta_sq;
    Ok(PeaReport {
        tau,
        theta_magnitude: theta_sq.sqrt(),
        phase_correction: k.g * k.g * m.powi(3) * tau.powi(3) * q4.abs() / (6.0 * k.hbar),
        decoherence_factor_zero_t: zero_t_exponent.exp(),
        decoherence_factor_thermal: thermal_exponent.exp(),
        zero_t_exponent,
        thermal_exponent,
        kappa: p.half_split_delta * (m * w / (2.0 * k.hbar)).sqrt(),
    })
}
