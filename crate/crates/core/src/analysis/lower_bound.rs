use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Perturbation;
use crate::coupling::{component_overlap, field_momentum};
use crate::dynamics::{ReducedState, ReducedSystem};
use crate::particle::{Kinematics, Particle};
use crate::soliton::SolitonRecord;

/// Outcome of one lower-bound evaluation around a soliton.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LowerBoundSample {
    /// H(S + δ) - H(S) at the soliton's P and M, from the term-by-term
    /// expansion.
    pub delta_h: f64,
    /// The same difference taken between two Hamiltonian evaluations.
    pub delta_h_direct: f64,
    /// ((1 - |v|)/2)(|δA|_{Ḣ1}^2 + |δΠ|^2).
    pub bound: f64,
    /// Roundoff allowance is 1e-10 times this.
    pub scale: f64,
    pub pass: bool,
    /// δH minus the field quadratic form and <δΠ, (v.∇)δA>.
    pub remainder: f64,
    /// The same remainder from the momentum increments δp and δM.
    pub remainder_from_momenta: f64,
    /// |δH - (Q + cross + K + δM^2/2I)| / |δH|.
    pub identity_rel_error: f64,
}

/// Compares H(S + δ) - H(S) with the lower bound, and checks the
/// rearrangement δH = Q(δ) + <δΠ,(v.∇)δA> + K(δp) + δM^2/2I, where Q is
/// the field quadratic form and K the kinetic remainder.
pub fn lower_bound_check(
    sys: &ReducedSystem,
    soliton: &SolitonRecord,
    pert: &Perturbation,
) -> LowerBoundSample {
    let s = ReducedState::from_soliton(soliton);
    let (a, pi) = (&pert.da, &pert.dpi);
    let mut sp = s.clone();
    sp.a.axpy(1.0, a);
    sp.pi.axpy(1.0, pi);
    let h0 = sys.hamiltonian(&s);
    let h1 = sys.hamiltonian(&sp);
    let delta_h = sys.hamiltonian_increment(&s, a, pi);

    let v = soliton.params.v;
    let speed = v[0].hypot(v[1]);
    let ha = a.h1dot();
    let quad = 0.5 * (pi.inner(pi) + ha * ha);
    let bound = 0.5 * (1.0 - speed) * (ha * ha + pi.inner(pi));
    let scale = 1.0 + h0.abs() + h1.abs();
    let pass = delta_h >= bound - 1e-10 * scale && h1 - h0 >= bound - 1e-10 * scale;

    let cross = pi.inner(&a.directional(v));
    let remainder = delta_h - quad - cross;

    // Momentum increments.
    let c0 = sys.couplings(&s);
    let f1 = field_momentum(pi, &soliton.a);
    let f2 = field_momentum(&soliton.pi, a);
    let f3 = field_momentum(pi, a);
    let ov = component_overlap(a, sys.density().field());
    let dp = [f1[0] + f2[0] + f3[0] - ov[0], f1[1] + f2[1] + f3[1] - ov[1]];
    let dm = a.inner(&sys.density().spin_current());
    let particle = sys.particle();
    let remainder_from_momenta =
        kinetic_remainder(particle, c0.kinetic, dp) + dm * dm / (2.0 * particle.inertia);
    let rhs = quad + cross + remainder_from_momenta;
    LowerBoundSample {
        delta_h,
        delta_h_direct: h1 - h0,
        bound,
        scale,
        pass,
        remainder,
        remainder_from_momenta,
        identity_rel_error: (delta_h - rhs).abs() / delta_h.abs().max(f64::MIN_POSITIVE),
    }
}

/// T(p + δp) - T(p) - v.δp with v = ∇T(p), in a form free of cancellation.
pub fn kinetic_remainder(particle: Particle, p: [f64; 2], dp: [f64; 2]) -> f64 {
    let dp2 = dp[0] * dp[0] + dp[1] * dp[1];
    match particle.kinematics {
        Kinematics::Nonrelativistic => dp2 / (2.0 * particle.mass),
        Kinematics::Relativistic => {
            // (E1 E0 - p1.p - m^2) / E0 with the numerator rewritten as a
            // ratio of positive terms.
            let m2 = particle.mass * particle.mass;
            let p1 = [p[0] + dp[0], p[1] + dp[1]];
            let e0 = particle.kinetic_energy(p);
            let e1 = particle.kinetic_energy(p1);
            let cross = p1[0] * p[1] - p1[1] * p[0];
            (m2 * dp2 + cross * cross) / (e0 * (e1 * e0 + p1[0] * p[0] + p1[1] * p[1] + m2))
        }
    }
}

/// Summary of sampled values of the relativistic kinetic remainder.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvexitySummary {
    pub samples: usize,
    pub violations: usize,
    pub min_value: f64,
    /// Largest disagreement between the direct difference and the
    /// cancellation-free closed form, in units of the roundoff allowance.
    pub max_form_mismatch: f64,
}

/// Samples sqrt(m^2 + (p + δp)^2) - sqrt(m^2 + p^2) - v.δp with
/// v = p / sqrt(m^2 + p^2) and counts negative values beyond roundoff.
///
/// Momenta are drawn with uniform directions and log-uniform magnitudes in
/// [1e-3 m, 1e2 m].
pub fn relativistic_convexity(mass: f64, samples: usize, seed: u64) -> ConvexitySummary {
    let particle = Particle::relativistic(mass, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mag = mass * 10f64.powf(rng.random_range(-3.0..2.0));
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        [mag * th.cos(), mag * th.sin()]
    };
    let (mut violations, mut min_value, mut mismatch) = (0, f64::INFINITY, 0.0f64);
    for _ in 0..samples {
        let p = draw(&mut rng);
        let dp = draw(&mut rng);
        let v = particle.velocity(p);
        let e0 = particle.kinetic_energy(p);
        let e1 = particle.kinetic_energy([p[0] + dp[0], p[1] + dp[1]]);
        let direct = e1 - e0 - (v[0] * dp[0] + v[1] * dp[1]);
        let closed = kinetic_remainder(particle, p, dp);
        let tol = 8.0 * f64::EPSILON * (e0 + e1 + (v[0] * dp[0] + v[1] * dp[1]).abs());
        if direct < -tol {
            violations += 1;
        }
        min_value = min_value.min(direct);
        mismatch = mismatch.max((direct - closed).abs() / tol);
    }
    ConvexitySummary {
        samples,
        violations,
        min_value,
        max_form_mismatch: mismatch,
    }
}
