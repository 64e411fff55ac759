use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

use super::problem::{Mat4, OptimizationProblem, Vec4};
use super::subspace::Mat8;

pub const KAPPA8: f64 = std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI / 24.0;

/// `log det Q(p)` with gradient `tr(Q^{-1} B_a)` and Hessian `-tr(Q^{-1} B_a Q^{-1} B_b)`.
pub fn log_det_derivatives(problem: &OptimizationProblem, p: &Vec4) -> Option<(f64, Vec4, Mat4)> {
    let s = &problem.subspace;
    let q = s.embed_f64(&[p[0], p[1], p[2], p[3]]);
    let chol = q.cholesky()?;
    let value = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    let inv = chol.inverse();
    let b: [Mat8; 4] = std::array::from_fn(|a| {
        let mut e = [0.0; 4];
        e[a] = 1.0;
        s.embed_f64(&e)
    });
    let ib: [Mat8; 4] = std::array::from_fn(|a| inv * b[a]);
    let grad = Vec4::from_fn(|a, _| ib[a].trace());
    let hess = Mat4::from_fn(|a, c| -(ib[a] * ib[c]).trace());
    Some((value, grad, hess))
}

/// `phi_t(p) = -t log det Q(p) - sum log(r.p) - sum log(1 - r^2_L(p))`.
pub fn barrier_derivatives(problem: &OptimizationProblem, p: &Vec4, t: f64) -> Option<(f64, Vec4, Mat4)> {
    let (ld, g_ld, h_ld) = log_det_derivatives(problem, p)?;
    let mut value = -t * ld;
    let mut grad = -g_ld * t;
    let mut hess = -h_ld * t;
    for r in &problem.restricted {
        let row = r.row_f64();
        let row = row / row.norm();
        let s = row.dot(p);
        if s <= 0.0 {
            return None;
        }
        value -= s.ln();
        grad -= row / s;
        hess += row * row.transpose() / (s * s);
    }
    for c in &problem.radius_constraints {
        let (f, gf, hf) = c.radius_sq_derivatives(p)?;
        let slack = 1.0 - f;
        if slack <= 0.0 {
            return None;
        }
        value -= slack.ln();
        grad += gf / slack;
        hess += hf / slack + gf * gf.transpose() / (slack * slack);
    }
    Some((value, grad, hess))
}

#[derive(Clone, Debug, Serialize)]
pub struct FloatOptimum {
    pub p: [f64; 4],
    pub log_det: f64,
    pub det: f64,
    pub mu: f64,
    pub theta: f64,
    /// Indices into `problem.restricted` of regulators vanishing at `p`.
    pub active_regulators: Vec<usize>,
    /// Indices into `problem.radius_constraints` with `r^2 = mu`.
    pub active_radius: Vec<usize>,
    pub outer_iterations: usize,
    pub newton_steps: usize,
    pub kkt_residual: f64,
}

#[derive(Clone, Debug)]
pub struct BarrierOptions {
    pub t0: f64,
    pub growth: f64,
    pub gap_tol: f64,
    pub rel_objective_tol: f64,
    pub max_newton: usize,
    pub active_tol: f64,
    pub polish: bool,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            t0: 1.0,
            growth: 8.0,
            gap_tol: 1e-11,
            rel_objective_tol: 1e-12,
            max_newton: 200,
            active_tol: 1e-6,
            polish: true,
        }
    }
}

pub fn theta_of(problem: &OptimizationProblem, p: &Vec4) -> Option<(f64, f64, f64)> {
    let q = problem.subspace.embed_f64(&[p[0], p[1], p[2], p[3]]);
    let det = q.determinant();
    let mu = problem.max_radius_sq(p)?;
    Some((det, mu, mu.powi(4) * KAPPA8 / det.sqrt()))
}

fn non_convergence(iterations: usize, message: &str, p: &Vec4) -> Error {
    Error::NonConvergence {
        iterations,
        message: message.to_string(),
        iterate: p.iter().copied().collect(),
    }
}

/// Centering by damped Newton on `phi_t`.
fn center(problem: &OptimizationProblem, p: &mut Vec4, t: f64, opts: &BarrierOptions, steps: &mut usize) -> Result<()> {
    for _ in 0..opts.max_newton {
        let (v, g, h) = barrier_derivatives(problem, p, t).ok_or_else(|| non_convergence(*steps, "left the domain", p))?;
        let dx = match h.cholesky() {
            Some(c) => -c.solve(&g),
            None => -g,
        };
        let decrement = -g.dot(&dx);
        if decrement / 2.0 < 1e-14 * t.max(1.0) {
            return Ok(());
        }
        let mut s = 1.0;
        loop {
            let trial = *p + dx * s;
            if let Some((tv, _, _)) = barrier_derivatives(problem, &trial, t) {
                if tv <= v - 0.25 * s * decrement {
                    *p = trial;
                    break;
                }
            }
            s *= 0.5;
            if s < 1e-16 {
                return Ok(());
            }
        }
        *steps += 1;
    }
    Ok(())
}

/// Maximizes `log det Q(p)` over the secondary cone intersected with the
/// circumradius constraints `r^2_L(Q) <= 1`, starting from a strictly
/// feasible point.
pub fn optimize_from(problem: &OptimizationProblem, start: Vec4, opts: &BarrierOptions) -> Result<FloatOptimum> {
    let mut p = start;
    if barrier_derivatives(problem, &p, 1.0).is_none() {
        return Err(non_convergence(0, "start point is not strictly feasible", &p));
    }
    let m = (problem.restricted.len() + problem.radius_constraints.len()) as f64;
    let mut t = opts.t0;
    let mut steps = 0;
    let mut outer = 0;
    let mut last = f64::NAN;
    loop {
        center(problem, &mut p, t, opts, &mut steps)?;
        outer += 1;
        let (ld, _, _) = log_det_derivatives(problem, &p).ok_or_else(|| non_convergence(steps, "lost definiteness", &p))?;
        let rel = ((ld - last) / ld.abs().max(1.0)).abs();
        if m / t < opts.gap_tol || rel < opts.rel_objective_tol {
            break;
        }
        if outer > 200 {
            return Err(non_convergence(steps, "barrier parameter did not converge", &p));
        }
        last = ld;
        t *= opts.growth;
    }
    let mut active_regulators: Vec<usize> = problem
        .restricted
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            let row = r.row_f64();
            row.dot(&p) / row.norm() < opts.active_tol
        })
        .map(|(i, _)| i)
        .collect();
    let mut active_radius: Vec<usize> = problem
        .radius_constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.radius_sq(&p).is_some_and(|f| 1.0 - f < opts.active_tol))
        .map(|(i, _)| i)
        .collect();
    let mut kkt_residual = f64::NAN;
    if opts.polish {
        let (lambda0, nu0) = barrier_multipliers(problem, &p, t, &active_regulators, &active_radius);
        if let Some((q, res)) = kkt_polish(problem, p, &active_regulators, &active_radius, lambda0, nu0) {
            p = q;
            kkt_residual = res;
        }
        active_regulators.retain(|&i| {
            let row = problem.restricted[i].row_f64();
            (row.dot(&p) / row.norm()).abs() < 1e-9
        });
        active_radius.retain(|&i| problem.radius_constraints[i].radius_sq(&p).is_some_and(|f| (1.0 - f).abs() < 1e-9));
    }
    let (ld, _, _) = log_det_derivatives(problem, &p).ok_or_else(|| non_convergence(steps, "lost definiteness", &p))?;
    let (det, mu, theta) = theta_of(problem, &p).ok_or_else(|| non_convergence(steps, "degenerate simplex", &p))?;
    Ok(FloatOptimum {
        p: [p[0], p[1], p[2], p[3]],
        log_det: ld,
        det,
        mu,
        theta,
        active_regulators,
        active_radius,
        outer_iterations: outer,
        newton_steps: steps,
        kkt_residual,
    })
}

fn barrier_multipliers(problem: &OptimizationProblem, p: &Vec4, t: f64, regs: &[usize], radii: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let lambda = regs
        .iter()
        .map(|&i| {
            let row = problem.restricted[i].row_f64();
            // multiplier of the unnormalised row
            1.0 / (t * row.dot(p))
        })
        .collect();
    let nu = radii
        .iter()
        .map(|&i| 1.0 / (t * (1.0 - problem.radius_constraints[i].radius_sq(p).unwrap_or(0.0))))
        .collect();
    (lambda, nu)
}

/// Newton iteration on the KKT system of the active constraints:
/// `grad log det + sum lambda_r r - sum nu_s grad f_s = 0`, `r.p = 0`,
/// `f_s(p) = 1`. Least-squares steps tolerate dependent constraints.
fn kkt_polish(
    problem: &OptimizationProblem,
    start: Vec4,
    regs: &[usize],
    radii: &[usize],
    lambda0: Vec<f64>,
    nu0: Vec<f64>,
) -> Option<(Vec4, f64)> {
    let (kr, kc) = (regs.len(), radii.len());
    let n = 4 + kr + kc;
    let mut x = DVector::<f64>::zeros(n);
    for a in 0..4 {
        x[a] = start[a];
    }
    for (i, l) in lambda0.iter().enumerate() {
        x[4 + i] = *l;
    }
    for (i, v) in nu0.iter().enumerate() {
        x[4 + kr + i] = *v;
    }
    let rows: Vec<Vec4> = regs.iter().map(|&i| problem.restricted[i].row_f64()).collect();
    let residual = |x: &DVector<f64>| -> Option<(DVector<f64>, DMatrix<f64>)> {
        let p = Vec4::new(x[0], x[1], x[2], x[3]);
        let (_, g, h) = log_det_derivatives(problem, &p)?;
        let mut f = DVector::zeros(n);
        let mut j = DMatrix::zeros(n, n);
        let mut stat = g;
        let mut hs = h;
        for (k, r) in rows.iter().enumerate() {
            stat += r * x[4 + k];
            f[4 + k] = r.dot(&p);
            for a in 0..4 {
                j[(a, 4 + k)] = r[a];
                j[(4 + k, a)] = r[a];
            }
        }
        for (k, &ci) in radii.iter().enumerate() {
            let (fv, gf, hf) = problem.radius_constraints[ci].radius_sq_derivatives(&p)?;
            let nu = x[4 + kr + k];
            stat -= gf * nu;
            hs -= hf * nu;
            f[4 + kr + k] = fv - 1.0;
            for a in 0..4 {
                j[(a, 4 + kr + k)] = -gf[a];
                j[(4 + kr + k, a)] = gf[a];
            }
        }
        for a in 0..4 {
            f[a] = stat[a];
            for b in 0..4 {
                j[(a, b)] = hs[(a, b)];
            }
        }
        Some((f, j))
    };
    let mut best = residual(&x)?.0.norm();
    for _ in 0..50 {
        let (f, j) = residual(&x)?;
        let norm = f.norm();
        if norm < 1e-15 {
            break;
        }
        let dx = j.svd(true, true).solve(&(-&f), 1e-13).ok()?;
        let mut s = 1.0;
        let mut improved = false;
        while s > 1e-6 {
            let trial = &x + &dx * s;
            if let Some((ft, _)) = residual(&trial) {
                if ft.norm() < norm {
                    x = trial;
                    improved = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
        best = residual(&x)?.0.norm();
    }
    // multipliers must keep their sign
    if (0..kr + kc).any(|k| x[4 + k] < -1e-8) {
        return None;
    }
    Some((Vec4::new(x[0], x[1], x[2], x[3]), best))
}

/// Strictly feasible start: the exact interior witness scaled so that every
/// squared circumradius is at most `1/2`.
pub fn default_start(problem: &OptimizationProblem) -> Result<Vec4> {
    let w = super::certify::interior_point(problem)?;
    let p = super::problem::to_vec4(&w.p);
    let mu = problem
        .max_radius_sq(&p)
        .ok_or_else(|| non_convergence(0, "witness has a degenerate simplex", &p))?;
    Ok(p * (0.5 / mu))
}

pub fn optimize(problem: &OptimizationProblem) -> Result<FloatOptimum> {
    optimize_from(problem, default_start(problem)?, &BarrierOptions::default())
}
