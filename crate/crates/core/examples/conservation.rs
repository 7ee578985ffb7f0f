//! Evolves a perturbed soliton in the comoving frame and in the lab frame
//! and reports how well the conserved quantities hold.
//!
//!     cargo run --release --example conservation

use mlsim::analysis::{perturbed_state, relative_drift, ConservationMonitor, Perturbation};
use mlsim::dynamics::{evolve, to_lab, LabSystem, ReducedSystem, Scheme};
use mlsim::soliton::{build_soliton, SolitonParams};
use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

fn main() -> mlsim::Result<()> {
    let grid = Grid::new(32.0, 128)?;
    let rho = ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &grid)?;
    let particle = Particle::nonrelativistic(1.0, 1.0);
    let sys = ReducedSystem::new(&rho, particle);
    let lab = LabSystem::new(&rho, particle);

    let rec = build_soliton(SolitonParams::new([0.3, 0.0], 1.0)?, &rho, particle)?;
    let s0 = perturbed_state(&sys, &rec, &Perturbation::generate(&grid, 7, 1e-2, 1.0));
    let dt = 0.1 * grid.dx();
    let steps = (10.0 / dt).round() as usize;

    for scheme in [Scheme::Rk4, Scheme::SplitStep] {
        let mut h = Vec::new();
        let last = evolve(&sys, &s0, dt, steps, scheme, 1, |_, s| {
            h.push(sys.hamiltonian(s))
        });
        let (qd, _) = sys.particle_velocities(&last);
        println!(
            "{scheme:?}: H drift {:.2e}, q(T) = [{:.4}, {:.4}], dq/dt(T) = [{:.4}, {:.4}]",
            relative_drift(&h).unwrap(),
            last.q[0],
            last.q[1],
            qd[0],
            qd[1]
        );
    }

    let mut mon = ConservationMonitor::default();
    evolve(&lab, &to_lab(&s0), dt, steps, Scheme::Rk4, 1, |_, s| {
        mon.record_lab(
            s.t,
            lab.energy(s),
            lab.linear_momentum(s),
            lab.angular_momentum(s),
        )
    });
    println!("lab frame: {:?}", mon.drift());
    Ok(())
}
