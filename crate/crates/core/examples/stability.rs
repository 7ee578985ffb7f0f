//! Orbital stability of the spinning resting soliton: the distance to the
//! soliton manifold stays proportional to the initial perturbation.
//!
//!     cargo run --release --example stability

use mlsim::analysis::{stability_experiment, StabilityConfig};
use mlsim::dynamics::{ReducedSystem, Scheme};
use mlsim::soliton::SolitonParams;
use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

fn main() -> mlsim::Result<()> {
    let grid = Grid::new(32.0, 128)?;
    let rho = ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &grid)?;
    let sys = ReducedSystem::new(&rho, Particle::nonrelativistic(1.0, 1.0));

    for delta in [1e-2, 1e-3, 1e-4] {
        let report = stability_experiment(
            &sys,
            &StabilityConfig {
                params: SolitonParams::new([0.0, 0.0], 1.0)?,
                delta,
                horizon: 10.0,
                dt: 0.1 * grid.dx(),
                seed: 1,
                stride: 10,
                scheme: Scheme::Rk4,
                sigma_p: 1.0,
            },
        )?;
        println!(
            "delta {delta:.0e}: sup d(original) {:.3e}, sup d(matched) {:.3e}, C = {:.3}, matched (v, omega) = ({:?}, {:.6})",
            report.sup_original, report.sup_matched, report.constant, report.matched.v, report.matched.omega
        );
    }
    Ok(())
}
