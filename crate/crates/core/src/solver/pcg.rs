use std::fmt::Write as _;

use crate::bijectivity::count_folded;
use crate::energy::{evaluate, ratio_statistics, stretch_energy, AreaMeasure};
use crate::error::Result;
use crate::mesh::TriMesh;
use crate::param::{FreeLayout, ParamMap};
use crate::scalar::{dot, Real};
use crate::slicer::BoundarySegments;

use super::{build_preconditioner, fixed_point_init, quadratic_step, SolverConfig};

/// One row of the optimization trajectory. Iteration 0 is the initial map.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub iter: usize,
    pub stretch_energy: T,
    pub authalic_energy: T,
    pub image_area: T,
    pub weighted_variance: T,
    pub unweighted_variance: T,
    pub r_area_mean: T,
    pub r_area_sd: T,
    pub variance_bound: T,
    pub folds: usize,
    /// Accepted step length; zero on iteration 0.
    pub alpha: T,
    pub armijo: bool,
    pub curvature: bool,
    /// The line search ran out of re-interpolations and accepted a halved step.
    pub flagged: bool,
    /// The direction was reset to the preconditioned steepest descent.
    pub restarted: bool,
    /// `sqrt(g^T M^-1 g)` at this iterate.
    pub grad_norm: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    EnergyDeficit,
    GradientNorm,
    MaxIterations,
    /// The energy became non-finite; the last finite iterate is returned.
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub map: ParamMap<T>,
    /// Starting map of the minimization.
    pub initial: ParamMap<T>,
    /// Harmonic map from the first fixed-point solve, when it ran.
    pub harmonic: Option<ParamMap<T>>,
    pub fpm_residuals: Vec<T>,
    pub trajectory: Vec<IterationRecord<T>>,
    pub stop: StopReason,
    pub preconditioner_regularized: bool,
    /// Faces whose cotangent weights were clamped at the final iterate.
    pub clamped_faces: Vec<usize>,
}

impl<T: Real> SolveResult<T> {
    pub fn iterations(&self) -> usize {
        self.trajectory.last().map_or(0, |r| r.iter)
    }

    pub fn flagged_steps(&self) -> usize {
        self.trajectory.iter().filter(|r| r.flagged).count()
    }
}

/// Fixed-point initialization and PCG minimization of `E_S` on a sliced mesh.
pub fn pcg_minimize<T: Real>(
    mesh: &TriMesh<T>,
    segments: &BoundarySegments,
    rho: &AreaMeasure<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveResult<T>> {
    cfg.validate()?;
    rho.validate(mesh.n_faces())?;
    let layout = FreeLayout::new(mesh.n_vertices(), segments)?;
    let init = fixed_point_init(mesh, &layout, rho, cfg)?;
    let mut out = pcg_minimize_from(mesh, &layout, rho, &init.map, cfg)?;
    out.harmonic = Some(init.harmonic);
    out.fpm_residuals = init.residuals;
    Ok(out)
}

fn record<T: Real>(
    mesh: &TriMesh<T>,
    map: &ParamMap<T>,
    rho: &AreaMeasure<T>,
    iter: usize,
    grad_norm: T,
) -> Result<IterationRecord<T>> {
    let stats = ratio_statistics(mesh, map)?;
    Ok(IterationRecord {
        iter,
        stretch_energy: stretch_energy(mesh, map, rho),
        authalic_energy: stats.authalic_energy,
        image_area: stats.image_area,
        weighted_variance: stats.weighted_variance,
        unweighted_variance: stats.unweighted_variance,
        r_area_mean: stats.r_area_mean,
        r_area_sd: stats.r_area_sd,
        variance_bound: stats.variance_bound,
        folds: count_folded(mesh, map).count,
        alpha: T::zero(),
        armijo: true,
        curvature: true,
        flagged: false,
        restarted: false,
        grad_norm,
    })
}

/// PCG minimization from a given feasible start.
pub fn pcg_minimize_from<T: Real>(
    mesh: &TriMesh<T>,
    layout: &FreeLayout<T>,
    rho: &AreaMeasure<T>,
    start: &ParamMap<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveResult<T>> {
    cfg.validate()?;
    layout.check(start, T::lit(1e-9))?;
    let precond = build_preconditioner(mesh, start, layout, rho)?;
    let phi = |x: &[T]| stretch_energy(mesh, &layout.scatter(x), rho);

    let mut x = layout.gather(start);
    let ev = evaluate(mesh, layout, rho, &x);
    let mut energy = ev.energy;
    let mut g = ev.gradient;
    let mut clamped = ev.clamped;
    let mut h = precond.apply(&g);
    let mut hg = dot(&h, &g);
    let mut trajectory = vec![record(mesh, start, rho, 0, hg.max(T::zero()).sqrt())?];
    let finish = |x: &[T], trajectory, stop, clamped| SolveResult {
        map: layout.scatter(x),
        initial: start.clone(),
        harmonic: None,
        fpm_residuals: Vec::new(),
        trajectory,
        stop,
        preconditioner_regularized: precond.regularized,
        clamped_faces: clamped,
    };
    if hg.max(T::zero()).sqrt() < cfg.grad_tol {
        return Ok(finish(&x, trajectory, StopReason::GradientNorm, clamped));
    }

    let mut p: Vec<T> = h.iter().map(|&v| -v).collect();
    let mut alpha_prev = cfg.alpha0;
    let two = T::lit(2.0);
    for iter in 1..=cfg.max_iters {
        let mut dphi0 = dot(&g, &p);
        let mut restarted = false;
        if !(dphi0 < T::zero()) {
            p = h.iter().map(|&v| -v).collect();
            dphi0 = -hg;
            restarted = true;
        }
        let trial = |a: T| -> Vec<T> { x.iter().zip(&p).map(|(&xi, &pi)| xi + a * pi).collect() };

        let mut probe = alpha_prev;
        let mut probe_phi = phi(&trial(probe));
        let mut accepted = None;
        let mut last = probe;
        for _ in 0..=cfg.reinterp_max {
            let guess = quadratic_step(energy, dphi0, probe, probe_phi);
            let xa = trial(guess.alpha);
            let pa = phi(&xa);
            last = guess.alpha;
            if pa.is_finite() && pa <= energy + cfg.c1 * guess.alpha * dphi0 {
                accepted = Some((guess.alpha, xa, pa));
                break;
            }
            probe = guess.alpha;
            probe_phi = if pa.is_finite() { pa } else { T::infinity() };
        }
        let (alpha, x_new, e_new, armijo, flagged) = match accepted {
            Some((a, xa, pa)) => (a, xa, pa, true, false),
            None => {
                let a = last / two;
                let xa = trial(a);
                let pa = phi(&xa);
                let ok = pa <= energy + cfg.c1 * a * dphi0;
                (a, xa, pa, ok, true)
            }
        };
        if !e_new.is_finite() {
            return Ok(finish(&x, trajectory, StopReason::NonFinite, clamped));
        }

        let ev = evaluate(mesh, layout, rho, &x_new);
        let g_new = ev.gradient;
        let h_new = precond.apply(&g_new);
        let hg_new = dot(&h_new, &g_new);
        let curvature = dot(&g_new, &p).abs() <= cfg.c2 * dphi0.abs();
        let beta = if cfg.conjugate && hg > T::zero() { hg_new / hg } else { T::zero() };
        p = h_new.iter().zip(&p).map(|(&hn, &pk)| -hn + beta * pk).collect();

        let deficit = energy - e_new;
        x = x_new;
        energy = e_new;
        g = g_new;
        h = h_new;
        hg = hg_new;
        clamped = ev.clamped;
        alpha_prev = alpha;

        let grad_norm = hg.max(T::zero()).sqrt();
        let mut rec = record(mesh, &layout.scatter(&x), rho, iter, grad_norm)?;
        rec.alpha = alpha;
        rec.armijo = armijo;
        rec.curvature = curvature;
        rec.flagged = flagged;
        rec.restarted = restarted;
        trajectory.push(rec);

        if deficit >= T::zero() && deficit < cfg.energy_tol {
            return Ok(finish(&x, trajectory, StopReason::EnergyDeficit, clamped));
        }
        if grad_norm < cfg.grad_tol {
            return Ok(finish(&x, trajectory, StopReason::GradientNorm, clamped));
        }
    }
    Ok(finish(&x, trajectory, StopReason::MaxIterations, clamped))
}

/// Trajectory as CSV with a header row.
pub fn write_trajectory_csv<T: Real>(records: &[IterationRecord<T>]) -> String {
    let mut s = String::from(
        "iter,stretch_energy,authalic_energy,image_area,weighted_variance,unweighted_variance,\
         r_area_mean,r_area_sd,variance_bound,folds,alpha,armijo,curvature,flagged,restarted,grad_norm\n",
    );
    for r in records {
        let _ = writeln!(
            s,
            "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{},{:.12e},{},{},{},{},{:.12e}",
            r.iter,
            r.stretch_energy.as_f64(),
            r.authalic_energy.as_f64(),
            r.image_area.as_f64(),
            r.weighted_variance.as_f64(),
            r.unweighted_variance.as_f64(),
            r.r_area_mean.as_f64(),
            r.r_area_sd.as_f64(),
            r.variance_bound.as_f64(),
            r.folds,
            r.alpha.as_f64(),
            r.armijo as u8,
            r.curvature as u8,
            r.flagged as u8,
            r.restarted as u8,
            r.grad_norm.as_f64(),
        );
    }
    s
}
