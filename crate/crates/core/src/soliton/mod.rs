//! Travelling, spinning solitons and the momentum map (v, ω) -> (P, M).

mod map;
mod newton;

pub use map::{MomentumJacobian, MomentumMap};
pub use newton::{solve_soliton_params, NewtonOptions, NewtonReport};

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::{component_overlap, field_momentum};
use crate::error::{Error, Result};
use crate::particle::Particle;
use crate::spectral::{ChargeDensity, SpectralVectorField};

/// Velocity and angular velocity of a soliton, |v| < 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolitonParams {
    pub v: [f64; 2],
    pub omega: f64,
}

impl SolitonParams {
    pub fn new(v: [f64; 2], omega: f64) -> Result<Self> {
        if !(v[0].is_finite() && v[1].is_finite() && omega.is_finite()) {
            return Err(Error::Domain("soliton parameters must be finite".into()));
        }
        if v[0].hypot(v[1]) >= 1.0 {
            return Err(Error::Domain(format!(
                "v outside Σ: |v| = {} >= 1",
                v[0].hypot(v[1])
            )));
        }
        Ok(SolitonParams { v, omega })
    }

    pub fn speed(&self) -> f64 {
        self.v[0].hypot(self.v[1])
    }
}

/// A soliton on the grid together with its conserved momenta.
#[derive(Clone, Debug)]
pub struct SolitonRecord {
    pub params: SolitonParams,
    pub a: SpectralVectorField,
    pub pi: SpectralVectorField,
    pub p: [f64; 2],
    pub m_ang: f64,
    pub particle: Particle,
}

/// Builds the soliton fields from the closed-form density transform:
///
/// A^(k) = [P(k) v rho^(k) - iω J∇rho^(k)] / (|k|^2 - (v.k)^2),  Π = -(v.∇)A,
///
/// where P(k) is the transverse projector and J(a, b) = (b, -a). The spin
/// term's sign belongs to the transform convention f^(k) = ∫ f e^{-ik.x} dx.
pub fn build_soliton(
    params: SolitonParams,
    rho: &ChargeDensity,
    particle: Particle,
) -> Result<SolitonRecord> {
    let params = SolitonParams::new(params.v, params.omega)?;
    let g = rho.grid();
    let n = g.n();
    let [v1, v2] = params.v;
    let w = params.omega;
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [vec![zero; g.cells()], vec![zero; g.cells()]];
    for i in 0..n {
        for j in 0..n {
            if g.is_excluded(i, j) {
                continue;
            }
            let (k1, k2) = (g.k(i), g.k(j));
            let kk = k1 * k1 + k2 * k2;
            let vk = v1 * k1 + v2 * k2;
            let d = kk - vk * vk;
            let r = rho.hat_radial(kk.sqrt());
            let gr = rho.hat_gradient(k1, k2);
            let pv = [v1 - k1 * vk / kk, v2 - k2 * vk / kk];
            // -iω J∇rho^ with J∇rho^ = (∂2 rho^, -∂1 rho^).
            let idx = i * n + j;
            a[0][idx] = Complex64::new(pv[0] * r, -w * gr[1]) / d;
            a[1][idx] = Complex64::new(pv[1] * r, w * gr[0]) / d;
        }
    }
    // Both numerator terms are orthogonal to k.
    let a = SpectralVectorField::new(g, a, true);
    let pi = a.directional(params.v).scaled(-1.0);
    let (p, m_ang) = soliton_momenta(&a, &pi, params, rho, particle);
    Ok(SolitonRecord {
        params,
        a,
        pi,
        p,
        m_ang,
        particle,
    })
}

/// P = p_v - <Π, ∇_* A> + <A, rho>,  M = Iω - <A, Jy rho>, where p_v is the
/// kinetic momentum of velocity v.
pub fn soliton_momenta(
    a: &SpectralVectorField,
    pi: &SpectralVectorField,
    params: SolitonParams,
    rho: &ChargeDensity,
    particle: Particle,
) -> ([f64; 2], f64) {
    let pv = particle.kinetic_momentum(params.v);
    let fm = field_momentum(pi, a);
    let ov = component_overlap(a, rho.field());
    let spin = a.inner(&rho.spin_current());
    (
        [pv[0] - fm[0] + ov[0], pv[1] - fm[1] + ov[1]],
        particle.inertia * params.omega - spin,
    )
}
