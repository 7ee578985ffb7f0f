use num_complex::Complex64;

use super::integrate::{wave_propagate, Flow};
use crate::coupling::{component_overlap, field_momentum};
use crate::particle::Particle;
use crate::spectral::{coulomb_of, ChargeDensity, Grid, ScalarField, SpectralVectorField};

/// Lab-frame state (A, Π, q, p, φ, M) with Π = dA/dt, p the canonical
/// linear momentum and M the canonical angular momentum.
#[derive(Clone, Debug)]
pub struct LabState {
    pub a: SpectralVectorField,
    pub pi: SpectralVectorField,
    pub q: [f64; 2],
    pub p: [f64; 2],
    pub phi: f64,
    pub m_ang: f64,
    pub t: f64,
}

#[derive(Clone, Debug)]
pub struct LabRate {
    pub da: SpectralVectorField,
    pub dpi: SpectralVectorField,
    pub dq: [f64; 2],
    pub dp: [f64; 2],
    pub dphi: f64,
    pub dm: f64,
}

/// Densities at the particle position and the inner products built from
/// them.
#[derive(Clone, Debug)]
pub struct LabCouplings {
    /// rho(x - q).
    pub rho_q: ScalarField,
    /// (x - q)_c rho(x - q) for c = 0, 1.
    pub moment_q: [ScalarField; 2],
    /// J(x - q) rho(x - q).
    pub spin_q: SpectralVectorField,
    /// <A, rho_q>.
    pub charge: [f64; 2],
    /// <A, J(x - q) rho_q>.
    pub spin: f64,
    /// Kinetic momentum p - <A, rho_q>.
    pub kinetic: [f64; 2],
    /// I φ' = M + <A, J(x - q) rho_q>.
    pub spin_momentum: f64,
    pub qdot: [f64; 2],
    pub phidot: f64,
}

/// The lab-frame Maxwell-Lorentz system in Coulomb gauge.
#[derive(Clone, Debug)]
pub struct LabSystem {
    rho: ChargeDensity,
    particle: Particle,
    phi0: ScalarField,
}

impl LabSystem {
    pub fn new(rho: &ChargeDensity, particle: Particle) -> Self {
        LabSystem {
            rho: rho.clone(),
            particle,
            phi0: coulomb_of(rho.field()),
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

    pub fn couplings(&self, s: &LabState) -> LabCouplings {
        let rho_q = self.rho.shifted(s.q);
        let moment_q = [
            self.rho.moment(0).shifted(s.q),
            self.rho.moment(1).shifted(s.q),
        ];
        let spin_q = self.rho.spin_current().shifted(s.q);
        let charge = component_overlap(&s.a, &rho_q);
        let spin = s.a.inner(&spin_q);
        let kinetic = [s.p[0] - charge[0], s.p[1] - charge[1]];
        let spin_momentum = s.m_ang + spin;
        LabCouplings {
            qdot: self.particle.velocity(kinetic),
            phidot: spin_momentum / self.particle.inertia,
            rho_q,
            moment_q,
            spin_q,
            charge,
            spin,
            kinetic,
            spin_momentum,
        }
    }

    /// Energy ½(|Π|^2 + |∇A|^2) + kinetic energy + I φ'^2 / 2.
    pub fn energy(&self, s: &LabState) -> f64 {
        let c = self.couplings(s);
        let h1 = s.a.h1dot();
        0.5 * (s.pi.inner(&s.pi) + h1 * h1)
            + self.particle.kinetic_energy(c.kinetic)
            + c.spin_momentum * c.spin_momentum / (2.0 * self.particle.inertia)
    }

    /// Total linear momentum -<Π, ∇_* A> + p_kin + <rho_q, A>.
    pub fn linear_momentum(&self, s: &LabState) -> [f64; 2] {
        let c = self.couplings(s);
        let fm = field_momentum(&s.pi, &s.a);
        [
            -fm[0] + c.kinetic[0] + c.charge[0],
            -fm[1] + c.kinetic[1] + c.charge[1],
        ]
    }

    /// Total angular momentum I φ' - <J(x - q).A, rho_q>.
    pub fn angular_momentum(&self, s: &LabState) -> f64 {
        let c = self.couplings(s);
        c.spin_momentum - c.spin
    }

    /// Right side built from the field equation and the Newton and torque
    /// equations in potential form.
    pub fn rhs(&self, s: &LabState) -> LabRate {
        let c = self.couplings(s);
        let mut r = self.coupling_part(s, &c);
        r.da.axpy(1.0, &s.pi);
        r.dpi.axpy(1.0, &s.a.laplacian());
        r
    }

    fn coupling_part(&self, s: &LabState, c: &LabCouplings) -> LabRate {
        let (dpk, torque) = self.newton_torque(s, c);
        let qd = c.qdot;
        let adv_rho = advect(&c.rho_q, qd);
        let adv_spin = c.spin_q.directional(qd);
        let pr = component_overlap(&s.pi, &c.rho_q);
        let ar = component_overlap(&s.a, &adv_rho);
        let dp = [dpk[0] + pr[0] + ar[0], dpk[1] + pr[1] + ar[1]];
        // d/dt <A, spin_q> = <Π, spin_q> - <A, (q'.∇) spin_q>.
        let dm = torque - s.pi.inner(&c.spin_q) + s.a.inner(&adv_spin);

        let mut src =
            SpectralVectorField::from_components(c.rho_q.scaled(qd[0]), c.rho_q.scaled(qd[1]))
                .expect("same grid");
        src.axpy(-c.phidot, &c.spin_q);
        let dpi = src.project_solenoidal();
        let da = SpectralVectorField::zeros(self.grid());
        LabRate {
            da,
            dpi,
            dq: qd,
            dp,
            dphi: c.phidot,
            dm,
        }
    }

    /// Rates of the kinetic momentum and of I φ' from the Newton and torque
    /// equations:
    ///
    /// dp_kin/dt = <-Π + [J q' + φ'(x - q)] B, rho_q>,
    /// I φ''     = <(x - q).[-J Π - q' B], rho_q>,
    ///
    /// with B = ∇.(JA) and J(a, b) = (b, -a).
    pub fn newton_torque(&self, s: &LabState, c: &LabCouplings) -> ([f64; 2], f64) {
        let b = s.a.curl();
        let qd = c.qdot;
        let pr = component_overlap(&s.pi, &c.rho_q);
        let br = b.inner(&c.rho_q);
        let by = [b.inner(&c.moment_q[0]), b.inner(&c.moment_q[1])];
        let jq = [qd[1], -qd[0]];
        let dpk = [
            -pr[0] + jq[0] * br + c.phidot * by[0],
            -pr[1] + jq[1] * br + c.phidot * by[1],
        ];
        let torque = s.pi.inner(&c.spin_q) - (qd[0] * by[0] + qd[1] * by[1]);
        (dpk, torque)
    }

    /// Rates of (p, M) from the canonical equations p' = -D_q H, M' = 0.
    pub fn canonical_momentum_rates(&self, s: &LabState) -> ([f64; 2], f64) {
        let c = self.couplings(s);
        let mut dp = [0.0; 2];
        for (axis, d) in dp.iter_mut().enumerate() {
            let da = s.a.partial(axis);
            let ov = component_overlap(&da, &c.rho_q);
            *d = c.qdot[0] * ov[0] + c.qdot[1] * ov[1] - c.phidot * da.inner(&c.spin_q);
        }
        (dp, 0.0)
    }

    /// Rates of (p_kin, I φ') implied by the canonical equations.
    pub fn canonical_kinetic_rates(&self, s: &LabState) -> ([f64; 2], f64) {
        let c = self.couplings(s);
        let (dp, _) = self.canonical_momentum_rates(s);
        let adv_rho = advect(&c.rho_q, c.qdot);
        let pr = component_overlap(&s.pi, &c.rho_q);
        let ar = component_overlap(&s.a, &adv_rho);
        let adv_spin = c.spin_q.directional(c.qdot);
        let dpk = [dp[0] - pr[0] - ar[0], dp[1] - pr[1] - ar[1]];
        let dspin = s.pi.inner(&c.spin_q) - s.a.inner(&adv_spin);
        (dpk, dspin)
    }

    /// Electric and magnetic fields: E = -Π - ∇Φ0(x - q), B = ∇.(JA).
    pub fn fields(&self, s: &LabState) -> (SpectralVectorField, ScalarField) {
        let mut e = self.phi0.shifted(s.q).gradient();
        e.axpy(1.0, &s.pi);
        let e = e.scaled(-1.0);
        (e, s.a.curl())
    }

    pub fn displaced(&self, s: &LabState, r: &LabRate, h: f64) -> LabState {
        let mut a = s.a.clone();
        a.axpy(h, &r.da);
        let mut pi = s.pi.clone();
        pi.axpy(h, &r.dpi);
        LabState {
            a,
            pi,
            q: [s.q[0] + h * r.dq[0], s.q[1] + h * r.dq[1]],
            p: [s.p[0] + h * r.dp[0], s.p[1] + h * r.dp[1]],
            phi: s.phi + h * r.dphi,
            m_ang: s.m_ang + h * r.dm,
            t: s.t + h,
        }
    }
}

/// -(u.∇) f, the time derivative of f(x - q) when q' = u.
fn advect(f: &ScalarField, u: [f64; 2]) -> ScalarField {
    let g = f.grid();
    let n = g.n();
    let mut hat = f.hat().to_vec();
    for i in 0..n {
        for j in 0..n {
            hat[i * n + j] *= Complex64::new(0.0, -(u[0] * g.kd(i) + u[1] * g.kd(j)));
        }
    }
    ScalarField::from_hat(g, hat)
}

impl Flow for LabSystem {
    type State = LabState;
    type Rate = LabRate;

    fn rate(&self, s: &LabState) -> LabRate {
        self.rhs(s)
    }

    fn coupling_rate(&self, s: &LabState) -> LabRate {
        let c = self.couplings(s);
        self.coupling_part(s, &c)
    }

    fn displaced(&self, s: &LabState, r: &LabRate, h: f64) -> LabState {
        LabSystem::displaced(self, s, r, h)
    }

    fn combine(&self, rates: [&LabRate; 4], w: [f64; 4]) -> LabRate {
        let mut out = LabRate {
            da: rates[0].da.scaled(w[0]),
            dpi: rates[0].dpi.scaled(w[0]),
            dq: rates[0].dq.map(|x| x * w[0]),
            dp: rates[0].dp.map(|x| x * w[0]),
            dphi: rates[0].dphi * w[0],
            dm: rates[0].dm * w[0],
        };
        for (r, &wi) in rates.iter().zip(&w).skip(1) {
            out.da.axpy(wi, &r.da);
            out.dpi.axpy(wi, &r.dpi);
            for c in 0..2 {
                out.dq[c] += wi * r.dq[c];
                out.dp[c] += wi * r.dp[c];
            }
            out.dphi += wi * r.dphi;
            out.dm += wi * r.dm;
        }
        out
    }

    fn free_flow(&self, s: &LabState, h: f64) -> LabState {
        let (a, pi) = wave_propagate(&s.a, &s.pi, h);
        LabState { a, pi, ..s.clone() }
    }
}
