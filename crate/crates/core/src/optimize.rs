//! Smooth minimisation with one inequality constraint `g(x) ≤ 0`.
//!
//! Log-barrier method: a feasibility phase drives `g` below zero, then BFGS
//! minimises `f(x) − μ ln(−g(x))` for a decreasing sequence of `μ`. Gradients
//! of `f` and `g` are central finite differences; every accepted iterate is
//! strictly feasible.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSettings {
    /// BFGS iterations per barrier stage.
    pub max_iterations: usize,
    pub gradient_step: f64,
    pub mu_start: f64,
    pub mu_end: f64,
    pub mu_factor: f64,
    /// Feasibility phase stops once `g ≤ −feasibility_buffer`.
    pub feasibility_buffer: f64,
}

impl Default for BarrierSettings {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            gradient_step: 1e-6,
            mu_start: 1.0,
            mu_end: 1e-8,
            mu_factor: 0.1,
            feasibility_buffer: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub g: f64,
    pub feasible: bool,
    pub evaluations: usize,
    /// Barrier objective after each accepted step, per stage.
    pub stage_traces: Vec<Vec<f64>>,
}

struct Counter<'a> {
    f: &'a dyn Fn(&[f64]) -> f64,
    g: &'a dyn Fn(&[f64]) -> f64,
    evaluations: usize,
}

impl Counter<'_> {
    fn f(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    fn g(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        (self.g)(x)
    }
}

fn central_gradient(func: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> DVector<f64> {
    let mut probe = x.to_vec();
    DVector::from_iterator(
        x.len(),
        (0..x.len()).map(|i| {
            probe[i] = x[i] + h;
            let up = func(&probe);
            probe[i] = x[i] - h;
            let down = func(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        }),
    )
}

/// Plain BFGS with Armijo backtracking. `value` may return `+∞` to reject a
/// point; `grad` is only called at accepted points. Returns the final point
/// and the objective after each accepted step.
fn bfgs(
    mut x: DVector<f64>,
    value: &mut dyn FnMut(&DVector<f64>) -> f64,
    grad: &mut dyn FnMut(&DVector<f64>) -> DVector<f64>,
    max_iterations: usize,
    stop: &dyn Fn(f64) -> bool,
) -> (DVector<f64>, Vec<f64>) {
    let n = x.len();
    let mut fx = value(&x);
    let mut trace = vec![fx];
    if !fx.is_finite() {
        return (x, trace);
    }
    let mut gx = grad(&x);
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut first = true;
    for _ in 0..max_iterations {
        if stop(fx) || gx.amax() <= 1e-10 * fx.abs().max(1.0) {
            break;
        }
        let mut dir = -(&h_inv * &gx);
        let mut slope = gx.dot(&dir);
        if !(slope < 0.0) {
            h_inv = DMatrix::identity(n, n);
            dir = -gx.clone();
            slope = gx.dot(&dir);
        }
        if first {
            // keep the first trial step around 0.1 in the largest coordinate
            let scale = (0.1 / dir.amax()).min(1.0);
            dir *= scale;
            slope *= scale;
            first = false;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &x + &dir * step;
            let ft = value(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else { break };
        let g_new = grad(&x_new);
        let s = &x_new - &x;
        let y = &g_new - &gx;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            h_inv += (&s * s.transpose()) * (rho * (1.0 + rho * yhy)) - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        let progress = fx - f_new;
        x = x_new;
        gx = g_new;
        fx = f_new;
        trace.push(fx);
        if progress <= 1e-15 * fx.abs().max(1.0) {
            break;
        }
    }
    (x, trace)
}

/// Minimises `f` subject to `g ≤ 0` from `x0`.
pub fn minimize_with_inequality(
    f: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    settings: &BarrierSettings,
) -> Outcome {
    let h = settings.gradient_step;
    let mut counter = Counter { f, g, evaluations: 0 };
    let mut x = DVector::from_column_slice(x0);
    let mut stage_traces = Vec::new();

    // feasibility phase
    if counter.g(x.as_slice()) > -settings.feasibility_buffer {
        let buffer = settings.feasibility_buffer;
        let cell = std::cell::RefCell::new(&mut counter);
        let (x1, trace) = bfgs(
            x,
            &mut |v| cell.borrow_mut().g(v.as_slice()),
            &mut |v| central_gradient(&mut |p| cell.borrow_mut().g(p), v.as_slice(), h),
            settings.max_iterations,
            &|gv| gv <= -buffer,
        );
        x = x1;
        stage_traces.push(trace);
    }
    let g0 = counter.g(x.as_slice());
    if !(g0 < 0.0) {
        let f0 = counter.f(x.as_slice());
        return Outcome { x: x.as_slice().to_vec(), f: f0, g: g0, feasible: false, evaluations: counter.evaluations, stage_traces };
    }

    let mut mu = settings.mu_start;
    while mu >= settings.mu_end * (1.0 - 1e-12) {
        let cell = std::cell::RefCell::new(&mut counter);
        let barrier = |c: &mut Counter, v: &[f64]| {
            let gv = c.g(v);
            if !(gv < 0.0) {
                return f64::INFINITY;
            }
            let fv = c.f(v);
            fv - mu * (-gv).ln()
        };
        let (x1, trace) = bfgs(
            x.clone(),
            &mut |v| barrier(&mut cell.borrow_mut(), v.as_slice()),
            &mut |v| {
                let mut c = cell.borrow_mut();
                let gv = c.g(v.as_slice());
                let df = central_gradient(&mut |p| c.f(p), v.as_slice(), h);
                let dg = central_gradient(&mut |p| c.g(p), v.as_slice(), h);
                df - dg * (mu / gv)
            },
            settings.max_iterations,
            &|_| false,
        );
        x = x1;
        stage_traces.push(trace);
        mu *= settings.mu_factor;
    }

    let gx = counter.g(x.as_slice());
    let fx = counter.f(x.as_slice());
    Outcome { x: x.as_slice().to_vec(), f: fx, g: gx, feasible: gx <= 0.0, evaluations: counter.evaluations, stage_traces }
}

/// Unconstrained BFGS with finite-difference gradients.
pub fn minimize(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], settings: &BarrierSettings) -> Outcome {
    let h = settings.gradient_step;
    let (x, trace) = bfgs(
        DVector::from_column_slice(x0),
        &mut |v| f(v.as_slice()),
        &mut |v| central_gradient(&mut |p| f(p), v.as_slice(), h),
        settings.max_iterations * 4,
        &|_| false,
    );
    let fx = f(x.as_slice());
    Outcome { x: x.as_slice().to_vec(), f: fx, g: f64::NEG_INFINITY, feasible: true, evaluations: 0, stage_traces: vec![trace] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_with_active_constraint() {
        // min (x-2)² + (y-1)²  s.t.  x + y ≤ 1  →  (1, 0)
        let f = |v: &[f64]| (v[0] - 2.0).powi(2) + (v[1] - 1.0).powi(2);
        let g = |v: &[f64]| v[0] + v[1] - 1.0;
        let out = minimize_with_inequality(&f, &g, &[3.0, 3.0], &BarrierSettings::default());
        assert!(out.feasible);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && out.x[1].abs() < 1e-5, "{:?}", out.x);
        for trace in &out.stage_traces[1..] {
            assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn inactive_constraint_gives_free_minimum() {
        let f = |v: &[f64]| (v[0] - 0.3).powi(2) + 10.0 * (v[1] + 0.2).powi(2);
        let g = |v: &[f64]| v[0] * v[0] + v[1] * v[1] - 4.0;
        let out = minimize_with_inequality(&f, &g, &[1.0, 1.0], &BarrierSettings::default());
        assert!((out.x[0] - 0.3).abs() < 1e-6 && (out.x[1] + 0.2).abs() < 1e-6, "{:?}", out.x);
    }

    #[test]
    fn rosenbrock_unconstrained() {
        let f = |v: &[f64]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2);
        let out = minimize(&f, &[-1.2, 1.0], &BarrierSettings::default());
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
    }

    #[test]
    fn infeasible_reported() {
        let f = |v: &[f64]| v[0] * v[0];
        let g = |v: &[f64]| 1.0 + v[0] * v[0];
        let out = minimize_with_inequality(&f, &g, &[0.5], &BarrierSettings::default());
        assert!(!out.feasible);
    }
}
