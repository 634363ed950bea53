//! Nelder–Mead downhill simplex for small unconstrained problems.
//!
//! Bounds are handled by the caller through coordinate transforms, so the
//! minimiser itself works on all of `R^n`. After the simplex collapses it is
//! rebuilt around the best vertex and the search repeats until a restart brings
//! no further improvement.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    /// Initial edge length along each coordinate.
    pub initial_step: f64,
    /// Stop when the spread of objective values across vertices is below
    /// `f_tol + f_rel_tol * |f_best|` ...
    pub f_tol: f64,
    pub f_rel_tol: f64,
    /// ... and every vertex lies within this distance (max-norm) of the best one.
    pub x_tol: f64,
    pub max_evaluations: usize,
    pub max_restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.3,
            f_tol: 1e-24,
            f_rel_tol: 1e-12,
            x_tol: 1e-9,
            max_evaluations: 20_000,
            max_restarts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub descent: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimises `f` from `x0`. Non-finite objective values are treated as `+inf`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| -> f64 {
        *evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    if n == 0 {
        let value = eval(x0, &mut evaluations);
        return SimplexOutcome { x: vec![], value, iterations: 0, evaluations, converged: true, descent: vec![value] };
    }

    let mut best_x = x0.to_vec();
    let mut best_f = eval(x0, &mut evaluations);
    let mut iterations = 0usize;
    let mut descent = Vec::new();
    let mut converged = false;

    for restart in 0..=opts.max_restarts {
        let start_f = best_f;
        let mut verts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        verts.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += opts.initial_step;
            let fx = eval(&x, &mut evaluations);
            verts.push((x, fx));
        }

        converged = false;
        while evaluations < opts.max_evaluations {
            verts.sort_by(|a, b| a.1.total_cmp(&b.1));
            iterations += 1;
            descent.push(verts[0].1);

            let f_spread = verts[n].1 - verts[0].1;
            let x_spread = verts[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&verts[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            let f_ok = f_spread <= opts.f_tol + opts.f_rel_tol * verts[0].1.abs();
            // a simplex shrunk to rounding level cannot make further progress
            let collapsed = x_spread <= 4.0 * f64::EPSILON * verts[0].0.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            if (f_ok && x_spread <= opts.x_tol) || collapsed {
                converged = true;
                break;
            }

            let centroid: Vec<f64> =
                (0..n).map(|j| verts[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
            let along =
                |t: f64| -> Vec<f64> { centroid.iter().zip(&verts[n].0).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(REFLECT);
            let fr = eval(&xr, &mut evaluations);
            if fr < verts[0].1 {
                let xe = along(EXPAND);
                let fe = eval(&xe, &mut evaluations);
                verts[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < verts[n - 1].1 {
                verts[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < verts[n].1 {
                    let xc = along(CONTRACT);
                    let fc = eval(&xc, &mut evaluations);
                    (xc, fc)
                } else {
                    let xc = along(-CONTRACT);
                    let fc = eval(&xc, &mut evaluations);
                    (xc, fc)
                };
                if fc < verts[n].1.min(fr) {
                    verts[n] = (xc, fc);
                } else {
                    let best = verts[0].0.clone();
                    for v in verts.iter_mut().skip(1) {
                        let x: Vec<f64> = best.iter().zip(&v.0).map(|(b, x)| b + SHRINK * (x - b)).collect();
                        let fx = eval(&x, &mut evaluations);
                        *v = (x, fx);
                    }
                }
            }
        }

        verts.sort_by(|a, b| a.1.total_cmp(&b.1));
        if verts[0].1 <= best_f {
            best_x = verts[0].0.clone();
            best_f = verts[0].1;
        }
        if !converged || evaluations >= opts.max_evaluations {
            break;
        }
        let improvement = start_f - best_f;
        if restart > 0 && improvement <= opts.f_tol.max(1e-14 * best_f.abs()) {
            break;
        }
    }

    SimplexOutcome { x: best_x, value: best_f, iterations, evaluations, converged, descent }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(rosen, &[-1.2, 1.0], &SimplexOptions { initial_step: 0.5, ..Default::default() });
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6, "{:?}", out.x);
    }

    #[test]
    fn quadratic_reaches_tiny_objective() {
        let target = [0.3, -2.0, 5.0, 1.5];
        let f = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let out = minimize(f, &[0.0; 4], &SimplexOptions::default());
        assert!(out.value < 1e-18, "{}", out.value);
    }

    #[test]
    fn descent_log_is_monotone() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 0.5).powi(4) + x[2].abs();
        let out = minimize(f, &[3.0, 3.0, 3.0], &SimplexOptions::default());
        assert!(out.descent.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.descent.len(), out.iterations);
    }

    #[test]
    fn evaluation_budget_is_respected() {
        let f =
            |x: &[f64]| (0..3).map(|i| 100.0 * (x[i + 1] - x[i] * x[i]).powi(2) + (1.0 - x[i]).powi(2)).sum::<f64>();
        let out = minimize(f, &[-1.0; 4], &SimplexOptions { max_evaluations: 50, ..Default::default() });
        assert!(out.evaluations <= 50 + 4);
        assert!(!out.converged);
    }

    #[test]
    fn non_finite_values_are_avoided() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.2).powi(2) };
        let out = minimize(f, &[1.0], &SimplexOptions::default());
        assert!((out.x[0] - 0.2).abs() < 1e-8);
    }
}
