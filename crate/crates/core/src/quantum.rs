//! Two-qubit states, bipartite Pauli observables and entanglement quantities.
//!
//! Basis ordering is `index = 2·(first qubit) + (second qubit)`, so `|00⟩,
//! |01⟩, |10⟩, |11⟩` map to indices 0..4. The partial transpose acts on the
//! second factor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen, hermitian_eigenvalues, hermitian_part, hermiticity_defect, kron2,
    kron_vec2, sqrt_psd, CMatrix2, CMatrix4, CVector4, C64, PSD_SLACK,
};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix2 {
        let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        match self {
            Pauli::I => CMatrix2::new(l, o, o, l),
            Pauli::X => CMatrix2::new(o, l, l, o),
            Pauli::Y => CMatrix2::new(o, -i, i, o),
            Pauli::Z => CMatrix2::new(l, o, o, -l),
        }
    }

    /// Eigenvectors for eigenvalues +1 then −1. `None` for the identity.
    fn eigenvectors(self) -> Option<[[C64; 2]; 2]> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Pauli::I => None,
            Pauli::X => Some([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
            Pauli::Y => Some([[c(h, 0.0), c(0.0, h)], [c(h, 0.0), c(0.0, -h)]]),
            Pauli::Z => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A bipartite Pauli observable `left ⊗ right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliObservable {
    pub left: Pauli,
    pub right: Pauli,
}

impl PauliObservable {
    pub const fn new(left: Pauli, right: Pauli) -> Self {
        Self { left, right }
    }

    pub fn has_identity(&self) -> bool {
        self.left == Pauli::I || self.right == Pauli::I
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.left.symbol(), self.right.symbol())
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |ch: char| match ch.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidArgument(format!("unknown Pauli label {other:?}"))),
        };
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 2 {
            return Err(Error::InvalidArgument(format!("expected two Pauli labels, got {s:?}")));
        }
        Ok(Self::new(parse(chars[0])?, parse(chars[1])?))
    }
}

pub fn pauli_tensor(obs: PauliObservable) -> CMatrix4 {
    kron2(&obs.left.matrix(), &obs.right.matrix())
}

/// Eigenbasis of a bipartite Pauli observable without identity factors.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    pub observable: PauliObservable,
    pub vectors: [CVector4; 4],
    pub projectors: [CMatrix4; 4],
    pub eigenvalues: [f64; 4],
}

impl MeasurementBasis {
    /// `⟨e_j|ρ|e_j⟩` for each outcome `j`.
    pub fn probabilities(&self, rho: &CMatrix4) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (p, v) in out.iter_mut().zip(&self.vectors) {
            *p = (v.adjoint() * rho * v)[(0, 0)].re;
        }
        out
    }
}

/// Outcome `j = 2a + b` corresponds to eigenvector `a` of the left Pauli and
/// `b` of the right one, with eigenvalue `(−1)^(a+b)`.
pub fn eigenbasis(obs: PauliObservable) -> Result<MeasurementBasis> {
    let (Some(left), Some(right)) = (obs.left.eigenvectors(), obs.right.eigenvectors()) else {
        return Err(Error::DegenerateObservable(obs.to_string()));
    };
    let mut vectors = [CVector4::zeros(); 4];
    let mut projectors = [CMatrix4::zeros(); 4];
    let mut eigenvalues = [0.0; 4];
    for a in 0..2 {
        for b in 0..2 {
            let j = 2 * a + b;
            let v = kron_vec2(&left[a], &right[b]);
            projectors[j] = v * v.adjoint();
            vectors[j] = v;
            eigenvalues[j] = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    Ok(MeasurementBasis { observable: obs, vectors, projectors, eigenvalues })
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix4);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the default
    /// tolerances.
    pub fn new(m: CMatrix4) -> Result<Self> {
        Self::with_tolerances(m, HERMITIAN_TOL, TRACE_TOL, PSD_SLACK)
    }

    /// Validates at caller-supplied tolerances, then stores the Hermitian part.
    pub fn with_tolerances(m: CMatrix4, herm_tol: f64, trace_tol: f64, psd_tol: f64) -> Result<Self> {
        let defect = hermiticity_defect(&m);
        if !(defect <= herm_tol) {
            return Err(Error::InvalidState(format!("Hermiticity defect {defect:.3e}")));
        }
        let m = hermitian_part(&m);
        let tr = m.trace().re;
        if !((tr - 1.0).abs() <= trace_tol) {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(&m)[0];
        if min < -psd_tol {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix known to be a state by construction. Only the Hermitian
    /// part is kept.
    pub(crate) fn from_trusted(m: CMatrix4) -> Self {
        Self(hermitian_part(&m))
    }

    pub fn maximally_mixed() -> Self {
        Self(CMatrix4::identity().scale(0.25))
    }

    pub fn pure(psi: &CVector4) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self(v * v.adjoint()))
    }

    /// `ρ_A ⊗ ρ_B` from single-qubit density matrices.
    pub fn product(a: &CMatrix2, b: &CMatrix2) -> Result<Self> {
        Self::new(kron2(a, b))
    }

    /// Convex combination; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("mixture weights must be a probability vector".into()));
        }
        let m = parts.iter().fold(CMatrix4::zeros(), |acc, (w, r)| acc + r.0.scale(*w));
        Ok(Self::from_trusted(m))
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0)[0]
    }
}

/// `Tr(ρ·σ)`.
pub fn expectation(rho: &DensityMatrix, obs: PauliObservable) -> f64 {
    crate::linalg::trace_product_re(rho.matrix(), &pauli_tensor(obs))
}

/// Transpose on the second tensor factor: `(2a+b, 2c+d) → (2a+d, 2c+b)`.
pub fn partial_transpose(m: &CMatrix4) -> CMatrix4 {
    CMatrix4::from_fn(|r, col| {
        let (a, b) = (r / 2, r % 2);
        let (cc, d) = (col / 2, col % 2);
        m[(2 * a + d, 2 * cc + b)]
    })
}

/// Sum of the absolute values of the negative eigenvalues of `ρ^Γ`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    negativity_of_matrix(rho.matrix())
}

pub(crate) fn negativity_of_matrix(m: &CMatrix4) -> f64 {
    hermitian_eigenvalues(&partial_transpose(m))
        .iter()
        .filter(|&&v| v < 0.0)
        .map(|v| -v)
        .sum()
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    fidelity_of_matrices(rho.matrix(), sigma.matrix())
}

pub(crate) fn fidelity_of_matrices(rho: &CMatrix4, sigma: &CMatrix4) -> Result<f64> {
    let sqrt_rho = sqrt_psd(rho)
        .map_err(|min| Error::InvalidState(format!("minimum eigenvalue {min:.3e}")))?;
    if hermitian_eigenvalues(sigma)[0] < -PSD_SLACK {
        return Err(Error::InvalidState("second argument is not PSD".into()));
    }
    let inner = sqrt_rho * sigma * sqrt_rho;
    let root_trace: f64 = hermitian_eigen(&inner).values.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Per-qubit phase damping `π ↦ (1−p)π + p·ZπZ` applied to both qubits,
/// realised through its Kraus form.
pub fn dephase(rho: &DensityMatrix, p: f64) -> DensityMatrix {
    let z = Pauli::Z.matrix();
    let id = Pauli::I.matrix();
    let z1 = kron2(&z, &id);
    let z2 = kron2(&id, &z);
    let once = rho.matrix().scale(1.0 - p) + (z1 * rho.matrix() * z1).scale(p);
    let twice = once.scale(1.0 - p) + (z2 * once * z2).scale(p);
    DensityMatrix::from_trusted(twice)
}

/// Fifteen-angle parametrisation of the two-qubit state space: nine
/// hyperspherical angles for the magnitudes of the ten Cholesky entries and
/// six phases for the complex off-diagonal ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CholeskyAngles {
    pub thetas: [f64; 9],
    /// Phases of `l_5 … l_10`.
    pub phis: [f64; 6],
}

impl CholeskyAngles {
    pub const LEN: usize = 15;

    pub fn zero() -> Self {
        Self { thetas: [0.0; 9], phis: [0.0; 6] }
    }

    pub fn from_slice(x: &[f64]) -> Self {
        assert_eq!(x.len(), Self::LEN, "expected 15 angles");
        let mut thetas = [0.0; 9];
        let mut phis = [0.0; 6];
        thetas.copy_from_slice(&x[..9]);
        phis.copy_from_slice(&x[9..]);
        Self { thetas, phis }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.thetas.iter().chain(self.phis.iter()).copied().collect()
    }

    /// Cholesky entries `l_1 … l_10` (index 0 is `l_1`).
    pub fn entries(&self) -> [C64; 10] {
        let mut mags = [0.0; 10];
        let mut sin_prod = 1.0;
        for k in 0..9 {
            mags[k] = sin_prod * self.thetas[k].cos();
            sin_prod *= self.thetas[k].sin();
        }
        mags[9] = sin_prod;
        let mut l = [c(0.0, 0.0); 10];
        for k in 0..10 {
            l[k] = if k < 4 { c(mags[k], 0.0) } else { C64::from_polar(mags[k], self.phis[k - 4]) };
        }
        l
    }

    pub fn lower_triangular(&self) -> CMatrix4 {
        let l = self.entries();
        let o = c(0.0, 0.0);
        #[rustfmt::skip]
        let m = CMatrix4::new(
            l[0], o,    o,    o,
            l[4], l[1], o,    o,
            l[7], l[5], l[2], o,
            l[9], l[8], l[6], l[3],
        );
        m
    }
}

/// `ρ = L·L†`; unit trace and positivity hold by construction.
pub fn cholesky_to_state(angles: &CholeskyAngles) -> DensityMatrix {
    let l = angles.lower_triangular();
    DensityMatrix::from_trusted(l * l.adjoint())
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    re: [[f64; 4]; 4],
    im: [[f64; 4]; 4],
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out = DensityMatrixJson { re: [[0.0; 4]; 4], im: [[0.0; 4]; 4] };
        for i in 0..4 {
            for j in 0..4 {
                out.re[i][j] = self.0[(i, j)].re;
                out.im[i][j] = self.0[(i, j)].im;
            }
        }
        out.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DensityMatrixJson::deserialize(deserializer)?;
        let m = CMatrix4::from_fn(|i, j| c(raw.re[i][j], raw.im[i][j]));
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn ket(bits: usize) -> CVector4 {
        let mut v = CVector4::zeros();
        v[bits] = c(1.0, 0.0);
        v
    }

    fn bell() -> DensityMatrix {
        let psi = (ket(0) + ket(3)).unscale(2f64.sqrt());
        DensityMatrix::pure(&psi).unwrap()
    }

    const ZZ: PauliObservable = PauliObservable::new(Pauli::Z, Pauli::Z);
    const XX: PauliObservable = PauliObservable::new(Pauli::X, Pauli::X);
    const XZ: PauliObservable = PauliObservable::new(Pauli::X, Pauli::Z);

    #[test]
    fn pauli_tensor_basics() {
        let zz = pauli_tensor(ZZ);
        let v = ket(0);
        assert!((zz * v - v).norm() < 1e-15);
        assert_eq!(pauli_tensor(XX).trace(), c(0.0, 0.0));
        let ii = pauli_tensor(PauliObservable::new(Pauli::I, Pauli::I));
        assert_eq!(ii, CMatrix4::identity());
    }

    #[test]
    fn zz_eigenbasis_is_computational() {
        let basis = eigenbasis(ZZ).unwrap();
        assert_eq!(basis.eigenvalues, [1.0, -1.0, -1.0, 1.0]);
        for k in 0..4 {
            let expected = ket(k) * ket(k).adjoint();
            assert!((basis.projectors[k] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn xx_eigenbasis_products_of_plus_minus() {
        let basis = eigenbasis(XX).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c(h, 0.0), c(h, 0.0)];
        let minus = [c(h, 0.0), c(-h, 0.0)];
        let expected = [
            kron_vec2(&plus, &plus),
            kron_vec2(&plus, &minus),
            kron_vec2(&minus, &plus),
            kron_vec2(&minus, &minus),
        ];
        for k in 0..4 {
            let p = expected[k] * expected[k].adjoint();
            assert!((basis.projectors[k] - p).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenbases_complete_orthogonal_and_consistent() {
        let labels = [Pauli::X, Pauli::Y, Pauli::Z];
        for &a in &labels {
            for &b in &labels {
                let obs = PauliObservable::new(a, b);
                let basis = eigenbasis(obs).unwrap();
                let sum = basis.projectors.iter().fold(CMatrix4::zeros(), |acc, p| acc + p);
                assert!((sum - CMatrix4::identity()).norm() < 1e-12);
                for i in 0..4 {
                    let p = &basis.projectors[i];
                    assert!((p * p - p).norm() < 1e-10);
                    for j in 0..4 {
                        if i != j {
                            assert!((p * basis.projectors[j]).norm() < 1e-12);
                        }
                    }
                }
                let rebuilt = (0..4).fold(CMatrix4::zeros(), |acc, k| {
                    acc + basis.projectors[k].scale(basis.eigenvalues[k])
                });
                assert!((rebuilt - pauli_tensor(obs)).norm() < 1e-12, "{obs}");
            }
        }
    }

    #[test]
    fn identity_factor_rejected() {
        let obs = PauliObservable::new(Pauli::I, Pauli::Z);
        assert!(matches!(eigenbasis(obs), Err(Error::DegenerateObservable(_))));
    }

    #[test]
    fn expectation_values() {
        assert!(expectation(&DensityMatrix::maximally_mixed(), XZ).abs() < 1e-15);
        let zero = DensityMatrix::pure(&ket(0)).unwrap();
        assert!((expectation(&zero, ZZ) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_and_products() {
        let pt = partial_transpose(bell().matrix());
        let ev = hermitian_eigenvalues(&pt);
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!((negativity(&bell()) - 0.5).abs() < 1e-12);

        let a = CMatrix2::new(c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0));
        let b = CMatrix2::new(c(0.4, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(0.6, 0.0));
        let prod = DensityMatrix::product(&a, &b).unwrap();
        let expected = kron2(&a, &b.transpose());
        assert!((partial_transpose(prod.matrix()) - expected).norm() < 1e-15);
        assert!(negativity(&prod) < 1e-12);
        assert_eq!(partial_transpose(&partial_transpose(prod.matrix())), *prod.matrix());
    }

    #[test]
    fn fidelity_cases() {
        let r = bell();
        assert!((fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-9);
        let a = DensityMatrix::pure(&ket(0)).unwrap();
        let b = DensityMatrix::pure(&ket(3)).unwrap();
        assert!(fidelity(&a, &b).unwrap() < 1e-12);

        // commuting diagonal states reduce to the classical Bhattacharyya overlap
        let p = [0.5, 0.5, 0.0, 0.0];
        let q = [0.25; 4];
        let diag = |v: [f64; 4]| {
            DensityMatrix::new(CMatrix4::from_diagonal(&CVector4::new(
                c(v[0], 0.0),
                c(v[1], 0.0),
                c(v[2], 0.0),
                c(v[3], 0.0),
            )))
            .unwrap()
        };
        let bc: f64 = p.iter().zip(&q).map(|(x, y): (&f64, &f64)| (x * y).sqrt()).sum();
        let f = fidelity(&diag(p), &diag(q)).unwrap();
        assert!((f - bc * bc).abs() < 1e-12, "{f} vs {}", bc * bc);
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_non_psd() {
        let bad = CMatrix4::from_diagonal(&CVector4::new(c(1.2, 0.0), c(-0.2, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert!(fidelity_of_matrices(&bad, &CMatrix4::identity().scale(0.25)).is_err());
    }

    #[test]
    fn cholesky_zero_angles_is_ground_state() {
        let rho = cholesky_to_state(&CholeskyAngles::zero());
        let expected = ket(0) * ket(0).adjoint();
        assert!((rho.matrix() - expected).norm() < 1e-15);
    }

    #[test]
    fn cholesky_maximally_mixed() {
        // l1 = cos θ1 = 1/2, l2 = sin θ1 cos θ2 = 1/2, l3 = ... = 1/2, l4 = 1/2
        let mut angles = CholeskyAngles::zero();
        angles.thetas[0] = FRAC_PI_3;
        angles.thetas[1] = (1.0 / 3f64.sqrt()).acos();
        angles.thetas[2] = FRAC_PI_4;
        angles.thetas[3] = 0.0;
        let rho = cholesky_to_state(&angles);
        assert!((rho.matrix() - DensityMatrix::maximally_mixed().matrix()).norm() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let rho = bell();
        let text = serde_json::to_string(&rho).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["re"].as_array().unwrap().len(), 4);
        assert_eq!(value["im"][0].as_array().unwrap().len(), 4);
        assert!((value["re"][0][3].as_f64().unwrap() - 0.5).abs() < 1e-15);
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn observable_parsing() {
        assert_eq!("xz".parse::<PauliObservable>().unwrap(), XZ);
        assert!("XQ".parse::<PauliObservable>().is_err());
        assert_eq!(XZ.to_string(), "XZ");
    }

    #[test]
    fn invalid_states_rejected() {
        let mut m = CMatrix4::identity().scale(0.25);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::new(CMatrix4::identity()).is_err());
        let neg = CMatrix4::from_diagonal(&CVector4::new(c(1.1, 0.0), c(-0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert!(DensityMatrix::new(neg).is_err());
    }
}
