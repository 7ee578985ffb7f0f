use nalgebra::{Matrix3, Vector3};

use super::{MomentumMap, SolitonParams};
use crate::error::{Error, Result};
use crate::quadrature::FourierMeasure;

#[derive(Clone, Copy, Debug)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Stop when |F| <= tol * (1 + |P| + |M|).
    pub tol: f64,
    /// Iterates are kept inside |v| <= speed_cap.
    pub speed_cap: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 50,
            tol: 1e-9,
            speed_cap: 1.0 - 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub params: SolitonParams,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

/// Finds (v, ω) with momenta (P, M) by Newton iteration on the given map.
///
/// The starting point divides the momenta by the rest mass and inertia
/// including their field parts, which is exact to first order. Steps are
/// halved until the new velocity stays inside the speed cap.
pub fn solve_soliton_params<Q: FourierMeasure>(
    target_p: [f64; 2],
    target_m: f64,
    map: &MomentumMap<'_, Q>,
    opts: NewtonOptions,
) -> Result<NewtonReport> {
    if !(target_p[0].is_finite() && target_p[1].is_finite() && target_m.is_finite()) {
        return Err(Error::Domain("target momenta must be finite".into()));
    }
    let particle = map.particle();
    let (mu, iota) = map.field_mass();
    let mut v = [
        target_p[0] / (particle.mass + mu),
        target_p[1] / (particle.mass + mu),
    ];
    let speed = v[0].hypot(v[1]);
    if speed > 0.9 {
        v = [0.9 * v[0] / speed, 0.9 * v[1] / speed];
    }
    let mut omega = target_m / (particle.inertia + iota);
    let scale = 1.0 + target_p[0].hypot(target_p[1]) + target_m.abs();
    let mut residuals = Vec::new();

    for it in 0..=opts.max_iter {
        let params = SolitonParams { v, omega };
        let (p, m) = map.momenta(params);
        let f = Vector3::new(p[0] - target_p[0], p[1] - target_p[1], m - target_m);
        let norm = f.norm();
        residuals.push(norm);
        if !norm.is_finite() {
            break;
        }
        if norm <= opts.tol * scale {
            return Ok(NewtonReport {
                params,
                iterations: it,
                residuals,
            });
        }
        if it == opts.max_iter {
            break;
        }
        let jac = map.jacobian(params).total;
        let jm = Matrix3::from_fn(|r, c| jac[r][c]);
        let Some(step) = jm.lu().solve(&(-f)) else {
            break;
        };
        let mut t = 1.0;
        loop {
            let nv = [v[0] + t * step[0], v[1] + t * step[1]];
            if nv[0].hypot(nv[1]) <= opts.speed_cap {
                v = nv;
                omega += t * step[2];
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                return Err(Error::NewtonFailure {
                    iterations: it + 1,
                    trace: residuals,
                });
            }
        }
    }
    Err(Error::NewtonFailure {
        iterations: residuals.len().saturating_sub(1),
        trace: residuals,
    })
}
