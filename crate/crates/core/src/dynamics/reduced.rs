use num_complex::Complex64;

use super::integrate::Flow;
use crate::coupling::{component_overlap, field_momentum};
use crate::error::{Error, Result};
use crate::particle::Particle;
use crate::soliton::SolitonRecord;
use crate::spectral::{ChargeDensity, Grid, SpectralVectorField};

/// State of the comoving system: fields recentred at the particle, the
/// conserved momenta P and M as parameters, and the particle position and
/// angle carried along for reconstruction of the lab frame.
#[derive(Clone, Debug)]
pub struct ReducedState {
    pub a: SpectralVectorField,
    pub pi: SpectralVectorField,
    pub p: [f64; 2],
    pub m_ang: f64,
    pub q: [f64; 2],
    pub phi: f64,
    pub t: f64,
}

impl ReducedState {
    pub fn from_soliton(s: &SolitonRecord) -> Self {
        ReducedState {
            a: s.a.clone(),
            pi: s.pi.clone(),
            p: s.p,
            m_ang: s.m_ang,
            q: [0.0, 0.0],
            phi: 0.0,
            t: 0.0,
        }
    }

    pub fn vacuum(grid: &Grid, p: [f64; 2], m_ang: f64) -> Self {
        ReducedState {
            a: SpectralVectorField::zeros(grid),
            pi: SpectralVectorField::zeros(grid),
            p,
            m_ang,
            q: [0.0, 0.0],
            phi: 0.0,
            t: 0.0,
        }
    }

    /// The time-reversal map (A, Π, P, M) -> (-A, Π, -P, -M).
    pub fn time_reversed(&self) -> Self {
        ReducedState {
            a: self.a.scaled(-1.0),
            pi: self.pi.clone(),
            p: [-self.p[0], -self.p[1]],
            m_ang: -self.m_ang,
            ..self.clone()
        }
    }
}

/// Time derivative of a [`ReducedState`].
#[derive(Clone, Debug)]
pub struct ReducedRate {
    pub da: SpectralVectorField,
    pub dpi: SpectralVectorField,
    pub dq: [f64; 2],
    pub dphi: f64,
}

/// Field-particle inner products of a reduced state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedCouplings {
    /// <Π, ∇_* A>.
    pub field_momentum: [f64; 2],
    /// <A, rho>.
    pub charge: [f64; 2],
    /// <A, Jy rho>.
    pub spin: f64,
    /// Kinetic momentum P + <Π, ∇_* A> - <A, rho>.
    pub kinetic: [f64; 2],
    /// Kinetic angular momentum M + <A, Jy rho>.
    pub spin_momentum: f64,
    pub qdot: [f64; 2],
    pub phidot: f64,
}

/// The comoving Hamiltonian system for a fixed density and particle.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    rho: ChargeDensity,
    particle: Particle,
    spin: SpectralVectorField,
    /// P[e_c rho] for c = 1, 2 and P[Jy rho].
    sources: [SpectralVectorField; 2],
    spin_source: SpectralVectorField,
}

impl ReducedSystem {
    pub fn new(rho: &ChargeDensity, particle: Particle) -> Self {
        let g = rho.grid();
        let zero = vec![Complex64::new(0.0, 0.0); g.cells()];
        let r = rho.field().hat().to_vec();
        let s1 = SpectralVectorField::from_hat(g, [r.clone(), zero.clone()]).project_solenoidal();
        let s2 = SpectralVectorField::from_hat(g, [zero, r]).project_solenoidal();
        let spin = rho.spin_current();
        let spin_source = spin.project_solenoidal();
        ReducedSystem {
            rho: rho.clone(),
            particle,
            spin,
            sources: [s1, s2],
            spin_source,
        }
    }

    pub fn density(&self) -> &ChargeDensity {
        &self.rho
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    pub fn grid(&self) -> &Grid {
        self.rho.grid()
    }

    pub fn couplings(&self, s: &ReducedState) -> ReducedCouplings {
        let fm = field_momentum(&s.pi, &s.a);
        let charge = component_overlap(&s.a, self.rho.field());
        let spin = s.a.inner(&self.spin);
        let kinetic = [s.p[0] + fm[0] - charge[0], s.p[1] + fm[1] - charge[1]];
        let spin_momentum = s.m_ang + spin;
        ReducedCouplings {
            field_momentum: fm,
            charge,
            spin,
            kinetic,
            spin_momentum,
            qdot: self.particle.velocity(kinetic),
            phidot: spin_momentum / self.particle.inertia,
        }
    }

    pub fn particle_velocities(&self, s: &ReducedState) -> ([f64; 2], f64) {
        let c = self.couplings(s);
        (c.qdot, c.phidot)
    }

    /// H = ½(|Π|^2 + |∇A|^2) + T(kinetic momentum) + (M + <A, Jy rho>)^2 / 2I.
    pub fn hamiltonian(&self, s: &ReducedState) -> f64 {
        let c = self.couplings(s);
        let h1 = s.a.h1dot();
        0.5 * (s.pi.inner(&s.pi) + h1 * h1)
            + self.particle.kinetic_energy(c.kinetic)
            + c.spin_momentum * c.spin_momentum / (2.0 * self.particle.inertia)
    }

    /// H(s + δ) - H(s) at fixed P and M, with δ = (da, dpi), expanded term
    /// by term so that small increments keep their relative accuracy.
    pub fn hamiltonian_increment(
        &self,
        s: &ReducedState,
        da: &SpectralVectorField,
        dpi: &SpectralVectorField,
    ) -> f64 {
        let c = self.couplings(s);
        let hd = da.h1dot();
        let field =
            s.pi.inner(dpi) + 0.5 * dpi.inner(dpi) - s.a.laplacian().inner(da) + 0.5 * hd * hd;
        let f1 = field_momentum(dpi, &s.a);
        let f2 = field_momentum(&s.pi, da);
        let f3 = field_momentum(dpi, da);
        let ov = component_overlap(da, self.rho.field());
        let dp = [f1[0] + f2[0] + f3[0] - ov[0], f1[1] + f2[1] + f3[1] - ov[1]];
        let ds = da.inner(&self.spin);
        field
            + self.particle.kinetic_energy_increment(c.kinetic, dp)
            + ds * (2.0 * c.spin_momentum + ds) / (2.0 * self.particle.inertia)
    }

    /// Right side of the reduced equations:
    /// dA = Π + (q'.∇)A,  dΠ = ΔA + (q'.∇)Π + P[q' rho - φ' Jy rho].
    pub fn rhs(&self, s: &ReducedState) -> ReducedRate {
        let c = self.couplings(s);
        let mut r = self.coupling_part(s, &c);
        r.da.axpy(1.0, &s.pi);
        r.dpi.axpy(1.0, &s.a.laplacian());
        r.da.set_solenoidal(s.a.is_solenoidal() && s.pi.is_solenoidal());
        r.dpi
            .set_solenoidal(s.a.is_solenoidal() && s.pi.is_solenoidal());
        r
    }

    /// The part of [`ReducedSystem::rhs`] other than the free wave operator.
    fn coupling_part(&self, s: &ReducedState, c: &ReducedCouplings) -> ReducedRate {
        let mut da = s.a.directional(c.qdot);
        let mut dpi = s.pi.directional(c.qdot);
        dpi.axpy(c.qdot[0], &self.sources[0]);
        dpi.axpy(c.qdot[1], &self.sources[1]);
        dpi.axpy(-c.phidot, &self.spin_source);
        da.set_solenoidal(s.a.is_solenoidal());
        dpi.set_solenoidal(s.pi.is_solenoidal());
        ReducedRate {
            da,
            dpi,
            dq: c.qdot,
            dphi: c.phidot,
        }
    }

    /// Variational derivatives (D_A H, D_Π H) restricted to solenoidal
    /// directions.
    pub fn variational_derivatives(
        &self,
        s: &ReducedState,
    ) -> (SpectralVectorField, SpectralVectorField) {
        let r = self.rhs(s);
        (r.dpi.scaled(-1.0), r.da)
    }

    /// Applies the rate to a state: s + h r, advancing time by h.
    pub fn displaced(&self, s: &ReducedState, r: &ReducedRate, h: f64) -> ReducedState {
        let mut a = s.a.clone();
        a.axpy(h, &r.da);
        let mut pi = s.pi.clone();
        pi.axpy(h, &r.dpi);
        ReducedState {
            a,
            pi,
            p: s.p,
            m_ang: s.m_ang,
            q: [s.q[0] + h * r.dq[0], s.q[1] + h * r.dq[1]],
            phi: s.phi + h * r.dphi,
            t: s.t + h,
        }
    }

    pub fn check_same_grid(&self, s: &ReducedState) -> Result<()> {
        if s.a.grid() != self.grid() || s.pi.grid() != self.grid() {
            return Err(Error::GridMismatch(
                "state and system use different grids".into(),
            ));
        }
        Ok(())
    }
}

impl Flow for ReducedSystem {
    type State = ReducedState;
    type Rate = ReducedRate;

    fn rate(&self, s: &ReducedState) -> ReducedRate {
        self.rhs(s)
    }

    fn coupling_rate(&self, s: &ReducedState) -> ReducedRate {
        let c = self.couplings(s);
        self.coupling_part(s, &c)
    }

    fn displaced(&self, s: &ReducedState, r: &ReducedRate, h: f64) -> ReducedState {
        ReducedSystem::displaced(self, s, r, h)
    }

    fn combine(&self, rates: [&ReducedRate; 4], w: [f64; 4]) -> ReducedRate {
        let mut da = rates[0].da.scaled(w[0]);
        let mut dpi = rates[0].dpi.scaled(w[0]);
        let mut dq = [w[0] * rates[0].dq[0], w[0] * rates[0].dq[1]];
        let mut dphi = w[0] * rates[0].dphi;
        for (r, &wi) in rates.iter().zip(&w).skip(1) {
            da.axpy(wi, &r.da);
            dpi.axpy(wi, &r.dpi);
            dq[0] += wi * r.dq[0];
            dq[1] += wi * r.dq[1];
            dphi += wi * r.dphi;
        }
        ReducedRate { da, dpi, dq, dphi }
    }

    fn free_flow(&self, s: &ReducedState, h: f64) -> ReducedState {
        let (a, pi) = super::integrate::wave_propagate(&s.a, &s.pi, h);
        ReducedState { a, pi, ..s.clone() }
    }
}
