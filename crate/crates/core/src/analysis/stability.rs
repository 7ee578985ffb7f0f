use serde::Serialize;

use super::{distance, Perturbation};
use crate::coupling::{component_overlap, field_momentum};
use crate::dynamics::{check_cfl, evolve, ReducedState, ReducedSystem, Scheme};
use crate::error::{Error, Result};
use crate::soliton::{
    build_soliton, solve_soliton_params, MomentumMap, NewtonOptions, SolitonParams, SolitonRecord,
};

/// Soliton plus perturbation, with P and M chosen so that the particle
/// velocities stay (v, ω). Then d(state, soliton) equals the perturbation's
/// norm.
pub fn perturbed_state(
    sys: &ReducedSystem,
    soliton: &SolitonRecord,
    pert: &Perturbation,
) -> ReducedState {
    let mut s = ReducedState::from_soliton(soliton);
    s.a.axpy(1.0, &pert.da);
    s.pi.axpy(1.0, &pert.dpi);
    let particle = sys.particle();
    let pv = particle.kinetic_momentum(soliton.params.v);
    let fm = field_momentum(&s.pi, &s.a);
    let ov = component_overlap(&s.a, sys.density().field());
    s.p = [pv[0] - fm[0] + ov[0], pv[1] - fm[1] + ov[1]];
    s.m_ang = particle.inertia * soliton.params.omega - s.a.inner(&sys.density().spin_current());
    s
}

#[derive(Clone, Copy, Debug)]
pub struct StabilityConfig {
    pub params: SolitonParams,
    pub delta: f64,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub stride: usize,
    pub scheme: Scheme,
    /// Width of the perturbation's spectral envelope exp(-|k|^2 sigma_p^2).
    pub sigma_p: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub params: SolitonParams,
    pub delta: f64,
    pub seed: u64,
    pub initial_distance: f64,
    /// Soliton whose momenta equal those of the perturbed state.
    pub matched: SolitonParams,
    pub newton_iterations: usize,
    pub times: Vec<f64>,
    pub dist_original: Vec<f64>,
    pub dist_matched: Vec<f64>,
    pub sup_original: f64,
    pub sup_matched: f64,
    /// sup_matched / delta, zero when delta = 0.
    pub constant: f64,
}

/// Perturbs a soliton by a seeded solenoidal field of size delta, evolves
/// the comoving system up to the horizon, and records the distance to the
/// original soliton and to the soliton with matching (P, M).
pub fn stability_experiment(sys: &ReducedSystem, cfg: &StabilityConfig) -> Result<StabilityReport> {
    let grid = sys.grid();
    if !(cfg.delta >= 0.0 && cfg.delta.is_finite()) {
        return Err(Error::config("stability.delta", "must be nonnegative"));
    }
    if !(cfg.horizon > 0.0 && cfg.horizon <= grid.len() / 2.0) {
        return Err(Error::config(
            "integrator.T",
            format!(
                "horizon {} must lie in (0, L/2 = {}]",
                cfg.horizon,
                grid.len() / 2.0
            ),
        ));
    }
    check_cfl(grid, cfg.dt)?;
    let particle = sys.particle();
    let soliton = build_soliton(cfg.params, sys.density(), particle)?;
    let pert = if cfg.delta > 0.0 {
        Perturbation::generate(grid, cfg.seed, cfg.delta, cfg.sigma_p)
    } else {
        Perturbation::zero(grid)
    };
    let s0 = perturbed_state(sys, &soliton, &pert);
    let target = ReducedState::from_soliton(&soliton);

    let map = MomentumMap::lattice(sys.density(), particle);
    let newton = solve_soliton_params(s0.p, s0.m_ang, &map, NewtonOptions::default())?;
    let matched_rec = build_soliton(newton.params, sys.density(), particle)?;
    let matched = ReducedState::from_soliton(&matched_rec);

    let steps = (cfg.horizon / cfg.dt).round() as usize;
    let mut times = Vec::new();
    let mut d0 = Vec::new();
    let mut d1 = Vec::new();
    let mut failure = None;
    evolve(
        sys,
        &s0,
        cfg.dt,
        steps,
        cfg.scheme,
        cfg.stride,
        |_, s| match (distance(sys, s, &target), distance(sys, s, &matched)) {
            (Ok(a), Ok(b)) => {
                times.push(s.t);
                d0.push(a);
                d1.push(b);
            }
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, &x| m.max(x));
    let (sup_original, sup_matched) = (sup(&d0), sup(&d1));
    if !(sup_original.is_finite() && sup_matched.is_finite()) {
        return Err(Error::NonFinite("stability distance series".into()));
    }
    Ok(StabilityReport {
        params: cfg.params,
        delta: cfg.delta,
        seed: cfg.seed,
        initial_distance: d0[0],
        matched: newton.params,
        newton_iterations: newton.iterations,
        times,
        dist_original: d0,
        dist_matched: d1,
        sup_original,
        sup_matched,
        constant: if cfg.delta > 0.0 {
            sup_matched / cfg.delta
        } else {
            0.0
        },
    })
}
