//! 4×4 complex matrix helpers shared by every module.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix4 = Matrix4<C64>;
pub type CVector4 = Vector4<C64>;
pub type CMatrix2 = Matrix2<C64>;

/// Eigenvalues below this are treated as zero when taking square roots.
pub const PSD_SLACK: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix4,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// Largest residual `‖Hv − λv‖` over the four eigenpairs.
    pub fn max_residual(&self, h: &CMatrix4) -> f64 {
        (0..4)
            .map(|k| {
                let v = self.vectors.column(k);
                (h * v - v * c(self.values[k], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Hermitian eigen-solver. The input is symmetrised first so that rounding
/// noise in the lower triangle cannot bias the result.
pub fn hermitian_eigen(h: &CMatrix4) -> HermitianEigen {
    let sym = hermitian_part(h);
    let eig = sym.symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = [0.0; 4];
    let mut vectors = CMatrix4::zeros();
    for (slot, &k) in order.iter().enumerate() {
        values[slot] = eig.eigenvalues[k];
        vectors.set_column(slot, &eig.eigenvectors.column(k));
    }
    HermitianEigen { values, vectors }
}

pub fn hermitian_eigenvalues(h: &CMatrix4) -> [f64; 4] {
    hermitian_eigen(h).values
}

/// `(H + H†) / 2`
pub fn hermitian_part(h: &CMatrix4) -> CMatrix4 {
    (h + h.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(h: &CMatrix4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Square root of a positive semidefinite Hermitian matrix. Negative
/// eigenvalues no lower than `-PSD_SLACK` are clamped to zero; anything more
/// negative is returned as `Err(min_eigenvalue)`.
pub fn sqrt_psd(h: &CMatrix4) -> Result<CMatrix4, f64> {
    let eig = hermitian_eigen(h);
    if eig.min() < -PSD_SLACK {
        return Err(eig.min());
    }
    let mut out = CMatrix4::zeros();
    for k in 0..4 {
        let s = eig.values[k].max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let v = eig.vectors.column(k);
        out += (v * v.adjoint()).scale(s);
    }
    Ok(out)
}

/// Kronecker product of two single-qubit operators, with index `2·a + b`.
pub fn kron2(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

pub fn kron_vec2(a: &[C64; 2], b: &[C64; 2]) -> CVector4 {
    CVector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
}

pub fn trace(h: &CMatrix4) -> C64 {
    h.trace()
}

/// Real part of `Tr(A·B)` without forming the product.
pub fn trace_product_re(a: &CMatrix4, b: &CMatrix4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(seed: u64) -> CMatrix4 {
        // small LCG; this only needs variety, not quality
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = CMatrix4::from_fn(|_, _| c(next(), next()));
        hermitian_part(&m)
    }

    #[test]
    fn eigen_residuals_within_tolerance() {
        for seed in 0..500 {
            let h = random_hermitian(seed);
            let eig = hermitian_eigen(&h);
            assert!(eig.max_residual(&h) <= 1e-10, "seed {seed}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let h = CMatrix4::identity();
        let eig = hermitian_eigen(&h);
        assert!(eig.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!(eig.max_residual(&h) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        for seed in 0..50 {
            let a = random_hermitian(seed);
            let psd = a * a;
            let s = sqrt_psd(&psd).unwrap();
            assert!((s * s - psd).norm() < 1e-9);
        }
    }

    #[test]
    fn sqrt_rejects_negative() {
        let h = CMatrix4::from_diagonal(&CVector4::new(c(1.0, 0.0), c(-0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert!(sqrt_psd(&h).is_err());
        let tiny = CMatrix4::from_diagonal(&CVector4::new(c(1.0, 0.0), c(-1e-12, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert!(sqrt_psd(&tiny).is_ok());
    }
}
