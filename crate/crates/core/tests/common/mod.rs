//! Independent reference implementations used as test oracles.

#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use swp_core::linalg::CMatrix4;
use swp_core::stats::{DataVector, ProbabilityVector};
use swp_core::DensityMatrix;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Spectrum of a 4×4 Hermitian matrix through its 8×8 real embedding
/// `[[A, −B], [B, A]]`; every eigenvalue appears twice there.
pub fn hermitian_spectrum_oracle(h: &CMatrix4) -> Vec<f64> {
    let mut m = vec![vec![0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = h[(i, j)];
            m[i][j] = z.re;
            m[i + 4][j + 4] = z.re;
            m[i][j + 4] = -z.im;
            m[i + 4][j] = z.im;
        }
    }
    jacobi_eigenvalues(m).into_iter().step_by(2).collect()
}

/// `(ρ^Γ)_{(a,b),(c,d)} = ρ_{(a,d),(c,b)}` by explicit index bookkeeping.
pub fn partial_transpose_oracle(m: &CMatrix4) -> CMatrix4 {
    let mut out = *m;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    out[(2 * a + b, 2 * c + d)] = m[(2 * a + d, 2 * c + b)];
                }
            }
        }
    }
    out
}

pub fn negativity_oracle(rho: &DensityMatrix) -> f64 {
    hermitian_spectrum_oracle(&partial_transpose_oracle(rho.matrix()))
        .into_iter()
        .filter(|&x| x < 0.0)
        .map(f64::abs)
        .sum()
}

/// `λ = −2 ln(L_0 / L_a)` from the explicit product of per-outcome ratios.
pub fn lambda_by_product(data: &DataVector, p_a: &ProbabilityVector, p_0: &ProbabilityVector) -> f64 {
    let mut quotient = 1.0f64;
    for ((&n, &a), &b) in data.counts.iter().zip(&p_a.probs).zip(&p_0.probs) {
        for _ in 0..n {
            quotient *= b / a;
        }
    }
    -2.0 * quotient.ln()
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
