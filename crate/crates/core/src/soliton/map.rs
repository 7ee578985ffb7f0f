use crate::particle::Particle;
use crate::quadrature::{FourierMeasure, LatticeSum, PolarQuadrature};
use crate::spectral::ChargeDensity;

use super::SolitonParams;

/// The momentum map (v, ω) -> (P, M) written as Fourier integrals of the
/// closed-form density transform, evaluated with a chosen measure.
///
/// With D = |k|^2 - (v.k)^2 and |P(k)v|^2 = |v|^2 - (v.k)^2/|k|^2,
///
/// P_j = p_v,j + ∫ [ v_j rho^^2/D - (v.k) k_j rho^^2/(|k|^2 D)
///                  + |P(k)v|^2 (v.k) k_j rho^^2/D^2 + ω^2 (v.k) k_j |∇rho^|^2/D^2 ],
/// M   = ω (I + ∫ |∇rho^|^2/D),
///
/// all with measure dk/(2π)^2.
pub struct MomentumMap<'a, Q> {
    rho: &'a ChargeDensity,
    particle: Particle,
    measure: Q,
}

/// Derivatives of (P1, P2, M) with respect to (v1, v2, ω).
///
/// `total[r][c]` is ∂(P1, P2, M)_r / ∂(v1, v2, ω)_c. The linear-momentum
/// block splits as kinetic + plus + minus, where `plus` collects the
/// ω-independent field terms and `minus` the terms proportional to ω^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumJacobian {
    pub total: [[f64; 3]; 3],
    pub kinetic: [[f64; 2]; 2],
    pub plus: [[f64; 2]; 2],
    pub minus: [[f64; 2]; 2],
}

impl MomentumJacobian {
    pub fn det(&self) -> f64 {
        let m = &self.total;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

impl<'a> MomentumMap<'a, LatticeSum> {
    /// Sums over the modes of the density's own grid. These values agree
    /// with the inner products of grid solitons.
    pub fn lattice(rho: &'a ChargeDensity, particle: Particle) -> Self {
        MomentumMap {
            rho,
            particle,
            measure: LatticeSum::new(rho.grid()),
        }
    }
}

impl<'a> MomentumMap<'a, PolarQuadrature> {
    /// Integrates over the whole plane, cut off where |rho^| and |rho^'|
    /// fall below 1e-16 of their peaks.
    pub fn polar(rho: &'a ChargeDensity, particle: Particle) -> Self {
        let kc = rho.spectral_cutoff(1e-16);
        MomentumMap {
            rho,
            particle,
            measure: PolarQuadrature::new(kc),
        }
    }
}

impl<'a, Q: FourierMeasure> MomentumMap<'a, Q> {
    pub fn new(rho: &'a ChargeDensity, particle: Particle, measure: Q) -> Self {
        MomentumMap {
            rho,
            particle,
            measure,
        }
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    pub fn density(&self) -> &ChargeDensity {
        self.rho
    }

    pub fn measure(&self) -> &Q {
        &self.measure
    }

    pub fn momenta(&self, params: SolitonParams) -> ([f64; 2], f64) {
        let [v1, v2] = params.v;
        let w2 = params.omega * params.omega;
        let rho = self.rho;
        let f = self.measure.integrate(|k1, k2| {
            let kk = k1 * k1 + k2 * k2;
            if kk == 0.0 {
                return [0.0; 3];
            }
            let r = rho.hat_radial(kk.sqrt());
            let r2 = r * r;
            let g = rho.hat_radial_derivative(kk.sqrt()).powi(2);
            let vk = v1 * k1 + v2 * k2;
            let d = kk - vk * vk;
            let pv2 = v1 * v1 + v2 * v2 - vk * vk / kk;
            let common = -vk * r2 / (kk * d) + pv2 * vk * r2 / (d * d) + w2 * vk * g / (d * d);
            [v1 * r2 / d + common * k1, v2 * r2 / d + common * k2, g / d]
        });
        let pv = self.particle.kinetic_momentum(params.v);
        (
            [pv[0] + f[0], pv[1] + f[1]],
            params.omega * (self.particle.inertia + f[2]),
        )
    }

    pub fn jacobian(&self, params: SolitonParams) -> MomentumJacobian {
        let v = params.v;
        let w = params.omega;
        let w2 = w * w;
        let rho = self.rho;
        // Layout: plus[2x2], minus[2x2], dP/dω[2], dM/dv[2], ∫g/D.
        let f = self.measure.integrate(|k1, k2| {
            let kk = k1 * k1 + k2 * k2;
            if kk == 0.0 {
                return [0.0; 13];
            }
            let kap = kk.sqrt();
            let r2 = rho.hat_radial(kap).powi(2);
            let g = rho.hat_radial_derivative(kap).powi(2);
            let k = [k1, k2];
            let vk = v[0] * k1 + v[1] * k2;
            let d = kk - vk * vk;
            let (d2, d3) = (d * d, d * d * d);
            let pv2 = v[0] * v[0] + v[1] * v[1] - vk * vk / kk;
            let mut out = [0.0; 13];
            for j in 0..2 {
                for l in 0..2 {
                    let kjl = k[j] * k[l];
                    let delta = if j == l { 1.0 } else { 0.0 };
                    out[2 * j + l] = delta * r2 / d + 2.0 * v[j] * vk * k[l] * r2 / d2
                        - kjl * r2 / (kk * d)
                        - 2.0 * vk * vk * kjl * r2 / (kk * d2)
                        + pv2 * kjl * r2 / d2
                        + 2.0 * (v[l] - vk * k[l] / kk) * vk * k[j] * r2 / d2
                        + 4.0 * pv2 * vk * vk * kjl * r2 / d3;
                    out[4 + 2 * j + l] = w2 * (kjl * g / d2 + 4.0 * vk * vk * kjl * g / d3);
                }
                out[8 + j] = 2.0 * w * vk * k[j] * g / d2;
                out[10 + j] = 2.0 * w * vk * k[j] * g / d2;
            }
            out[12] = g / d;
            out
        });
        let kinetic = self.particle.kinetic_jacobian(v);
        let plus = [[f[0], f[1]], [f[2], f[3]]];
        let minus = [[f[4], f[5]], [f[6], f[7]]];
        let mut total = [[0.0; 3]; 3];
        for j in 0..2 {
            for l in 0..2 {
                total[j][l] = kinetic[j][l] + plus[j][l] + minus[j][l];
            }
            total[j][2] = f[8 + j];
            total[2][j] = f[10 + j];
        }
        total[2][2] = self.particle.inertia + f[12];
        MomentumJacobian {
            total,
            kinetic,
            plus,
            minus,
        }
    }

    /// Field contributions to the mass and the moment of inertia at rest:
    /// μ_f = ∫ k2^2 rho^^2/|k|^4 and ι_f = ∫ |∇rho^|^2/|k|^2.
    pub fn field_mass(&self) -> (f64, f64) {
        let rho = self.rho;
        let f = self.measure.integrate(|k1, k2| {
            let kk = k1 * k1 + k2 * k2;
            if kk == 0.0 {
                return [0.0; 2];
            }
            let kap = kk.sqrt();
            [
                k2 * k2 * rho.hat_radial(kap).powi(2) / (kk * kk),
                rho.hat_radial_derivative(kap).powi(2) / kk,
            ]
        });
        (f[0], f[1])
    }
}
