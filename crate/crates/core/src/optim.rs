//! Multi-start Nelder-Mead minimization in transformed coordinates.
//!
//! Each coordinate carries a [`Transform`] that maps an unconstrained internal
//! variable onto its feasible range, so the simplex search itself is
//! unconstrained. Restarts perturb a physically motivated start point; restart
//! `k` draws from its own seeded stream, which makes the result independent of
//! how many restarts follow it and of the order in which they run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    /// `x = exp(u)`, for radii.
    Positive,
    /// `x = tanh(u)`, for direction cosines.
    Cosine,
    /// `x = u`.
    Free,
}

impl Transform {
    pub fn to_physical(self, u: f64) -> f64 {
        match self {
            Transform::Positive => u.exp(),
            Transform::Cosine => u.tanh(),
            Transform::Free => u,
        }
    }

    pub fn to_internal(self, x: f64) -> f64 {
        match self {
            Transform::Positive => x.ln(),
            Transform::Cosine => x.clamp(-1.0 + 1e-12, 1.0 - 1e-12).atanh(),
            Transform::Free => x,
        }
    }
}

type Objective<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;

/// A minimization problem over physical coordinates.
pub struct OptimProblem<'a> {
    transforms: Vec<Transform>,
    start: Vec<f64>,
    jitter: f64,
    objective: Box<Objective<'a>>,
}

impl<'a> OptimProblem<'a> {
    /// `objective` receives physical coordinates and should return `+inf`
    /// (or any non-finite value) outside the feasible region.
    pub fn new(
        transforms: Vec<Transform>,
        start: Vec<f64>,
        objective: impl Fn(&[f64]) -> f64 + Sync + 'a,
    ) -> Self {
        assert_eq!(transforms.len(), start.len(), "one transform per coordinate");
        Self {
            transforms,
            start,
            jitter: 0.3,
            objective: Box::new(objective),
        }
    }

    /// Relative size of the random perturbation applied to the start point on
    /// restarts after the first.
    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter = jitter;
        self
    }

    pub fn dimension(&self) -> usize {
        self.transforms.len()
    }

    pub fn to_physical(&self, u: &[f64]) -> Vec<f64> {
        self.transforms.iter().zip(u).map(|(t, &u)| t.to_physical(u)).collect()
    }

    fn to_internal(&self, x: &[f64]) -> Vec<f64> {
        self.transforms.iter().zip(x).map(|(t, &x)| t.to_internal(x)).collect()
    }

    /// Objective in internal coordinates; non-finite values map to `+inf`.
    pub fn eval_internal(&self, u: &[f64]) -> f64 {
        let v = (self.objective)(&self.to_physical(u));
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }

    fn restart_point(&self, seed: u64, k: usize) -> Vec<f64> {
        if k == 0 {
            return self.to_internal(&self.start);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let x: Vec<f64> = self
            .start
            .iter()
            .map(|&x| {
                let rel: f64 = rng.gen_range(-self.jitter..=self.jitter);
                let abs: f64 = rng.gen_range(-1.0..=1.0) * 0.05 * self.jitter;
                x * (1.0 + rel) + abs
            })
            .collect();
        self.to_internal(&x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimSettings {
    pub seed: u64,
    pub restarts: usize,
    /// Simplex diameter (max-norm, internal coordinates) at which a search stops.
    pub tol: f64,
    /// Bound on the central-difference gradient norm for a converged report.
    pub grad_tol: f64,
    /// Function evaluations allowed per simplex run.
    pub max_evals: usize,
}

impl Default for OptimSettings {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 16,
            tol: 1e-10,
            grad_tol: 1e-6,
            max_evals: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimReport {
    /// Argmin in physical coordinates.
    pub best_point: Vec<f64>,
    /// Argmin in internal (transformed) coordinates.
    pub best_internal: Vec<f64>,
    pub best_value: f64,
    pub restarts_used: usize,
    pub converged: bool,
    /// Central-difference gradient norm at the argmin, internal coordinates.
    pub gradient_norm_fd: f64,
    pub evaluations: usize,
}

pub fn minimize(problem: &OptimProblem<'_>, seed: u64, restarts: usize, tol: f64) -> Result<OptimReport> {
    minimize_with(
        problem,
        &OptimSettings {
            seed,
            restarts,
            tol,
            ..OptimSettings::default()
        },
    )
}

pub fn minimize_with(problem: &OptimProblem<'_>, settings: &OptimSettings) -> Result<OptimReport> {
    if settings.restarts == 0 {
        return Err(Error::domain("restarts", "need at least one restart"));
    }
    if !(settings.tol > 0.0) {
        return Err(Error::domain("tol", format!("tolerance must be positive, got {}", settings.tol)));
    }

    let runs: Vec<Option<Run>> = (0..settings.restarts)
        .into_par_iter()
        .map(|k| {
            let u0 = problem.restart_point(settings.seed, k);
            if !problem.eval_internal(&u0).is_finite() {
                return None;
            }
            Some(polish(problem, u0, settings))
        })
        .collect();

    let evaluations = runs.iter().flatten().map(|r| r.evals).sum();
    // strict comparison keeps the lowest restart index on ties
    let best = runs
        .into_iter()
        .flatten()
        .reduce(|best, r| if r.value < best.value { r } else { best })
        .ok_or_else(|| {
            Error::NonConvergence("objective is not finite at any restart start point".into())
        })?;

    let gradient_norm_fd = fd_gradient_norm(problem, &best.point);
    Ok(OptimReport {
        best_point: problem.to_physical(&best.point),
        best_internal: best.point,
        best_value: best.value,
        restarts_used: settings.restarts,
        converged: best.converged && gradient_norm_fd <= settings.grad_tol,
        gradient_norm_fd,
        evaluations,
    })
}

/// Euclidean norm of the central-difference gradient in internal coordinates.
pub fn fd_gradient_norm(problem: &OptimProblem<'_>, u: &[f64]) -> f64 {
    let mut x = u.to_vec();
    let mut norm2 = 0.0;
    for i in 0..u.len() {
        let h = 1e-6 * u[i].abs().max(1.0);
        x[i] = u[i] + h;
        let fp = problem.eval_internal(&x);
        x[i] = u[i] - h;
        let fm = problem.eval_internal(&x);
        x[i] = u[i];
        let g = (fp - fm) / (2.0 * h);
        norm2 += g * g;
    }
    norm2.sqrt()
}

struct Run {
    point: Vec<f64>,
    value: f64,
    converged: bool,
    evals: usize,
}

const MAX_POLISH: usize = 8;

/// Nelder-Mead from `u0`, then re-seeded simplices around the incumbent until
/// a fresh simplex no longer improves it.
fn polish(problem: &OptimProblem<'_>, u0: Vec<f64>, settings: &OptimSettings) -> Run {
    let mut run = nelder_mead(problem, u0, 0.1, settings);
    for _ in 0..MAX_POLISH {
        let next = nelder_mead(problem, run.point.clone(), 0.01, settings);
        let evals = run.evals + next.evals;
        let improved = next.value < run.value - 1e-15 * run.value.abs().max(1.0);
        if next.value <= run.value {
            run = Run { evals, ..next };
        } else {
            run.evals = evals;
        }
        if !improved {
            break;
        }
    }
    run
}

fn nelder_mead(problem: &OptimProblem<'_>, u0: Vec<f64>, step: f64, settings: &OptimSettings) -> Run {
    let n = u0.len();
    let nf = n as f64;
    // adaptive coefficients (Gao & Han) in higher dimension
    let (alpha, beta, gamma, delta) = if n > 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let evals = std::cell::Cell::new(0usize);
    let f = |u: &[f64]| {
        evals.set(evals.get() + 1);
        problem.eval_internal(u)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = f(&u0);
    simplex.push((u0.clone(), f0));
    for i in 0..n {
        let mut v = u0.clone();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        if diameter < settings.tol {
            converged = true;
            break;
        }
        if evals.get() >= settings.max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(alpha * beta);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(alpha * gamma);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-gamma);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + delta * (x - b)).collect();
                    let fv = f(&v);
                    *vertex = (v, fv);
                }
            }
        }
    }

    let (point, value) = simplex.swap_remove(0);
    Run {
        point,
        value,
        converged,
        evals: evals.get(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> OptimProblem<'static> {
        OptimProblem::new(vec![Transform::Free, Transform::Free], vec![0.0, 0.0], |x| {
            (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2)
        })
    }

    #[test]
    fn quadratic_minimum() {
        let r = minimize(&quadratic(), 7, 4, 1e-10).unwrap();
        assert!(r.converged);
        assert!((r.best_point[0] - 1.0).abs() < 1e-9);
        assert!((r.best_point[1] + 2.0).abs() < 1e-9);
        assert!(r.best_value < 1e-18);
    }

    #[test]
    fn large_d_hydrogen() {
        let p = OptimProblem::new(vec![Transform::Positive], vec![2.0], |x| {
            0.5 / (x[0] * x[0]) - 1.0 / x[0]
        });
        let r = minimize(&p, 0, 3, 1e-10).unwrap();
        assert!(r.converged);
        // the argmin of a quadratic well is resolved to about sqrt(eps)
        assert!((r.best_point[0] - 1.0).abs() < 1e-7);
        assert!((r.best_value + 0.5).abs() < 1e-15);
        assert!(r.gradient_norm_fd <= 1e-6);
    }

    #[test]
    fn rosenbrock_in_transformed_coordinates() {
        let p = OptimProblem::new(vec![Transform::Free, Transform::Positive], vec![-1.2, 1.0], |x| {
            100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)
        });
        let r = minimize(&p, 3, 4, 1e-10).unwrap();
        assert!(r.converged);
        assert!((r.best_point[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn deterministic_under_seed() {
        let p = OptimProblem::new(vec![Transform::Positive, Transform::Cosine, Transform::Free], vec![1.5, -0.1, 0.3], |x| {
            (x[0] - 1.2).powi(2) + (x[1] - 0.4).powi(2) + x[0] * x[2] * x[2]
        });
        let a = minimize(&p, 11, 6, 1e-10).unwrap();
        let b = minimize(&p, 11, 6, 1e-10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
    }

    #[test]
    fn more_restarts_never_worse() {
        // multimodal: sum of cosines in a bowl
        let p = OptimProblem::new(vec![Transform::Free; 2], vec![2.0, -2.0], |x| {
            0.05 * (x[0] * x[0] + x[1] * x[1]) - (3.0 * x[0]).cos() - (3.0 * x[1]).cos()
        })
        .with_jitter(1.0);
        let mut prev = f64::INFINITY;
        for restarts in 1..=8 {
            let r = minimize(&p, 5, restarts, 1e-10).unwrap();
            assert!(r.best_value <= prev);
            prev = r.best_value;
        }
    }

    #[test]
    fn infeasible_everywhere_is_an_error() {
        let p = OptimProblem::new(vec![Transform::Free], vec![0.0], |_| f64::NAN);
        assert!(matches!(minimize(&p, 0, 3, 1e-8), Err(Error::NonConvergence(_))));
    }

    #[test]
    fn bad_settings() {
        assert!(minimize(&quadratic(), 0, 0, 1e-8).is_err());
        assert!(minimize(&quadratic(), 0, 1, 0.0).is_err());
    }

    #[test]
    fn transforms_round_trip() {
        for (t, x) in [(Transform::Positive, 3.5), (Transform::Cosine, -0.3), (Transform::Free, -7.0)] {
            assert!((t.to_physical(t.to_internal(x)) - x).abs() < 1e-14);
        }
    }
}
