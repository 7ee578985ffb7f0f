//! Samples the energy lower bound around a moving spinning soliton for
//! perturbations of growing size.
//!
//!     cargo run --release --example lower_bound

use mlsim::analysis::{lower_bound_check, Perturbation};
use mlsim::dynamics::ReducedSystem;
use mlsim::soliton::{build_soliton, SolitonParams};
use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

fn main() -> mlsim::Result<()> {
    let grid = Grid::new(32.0, 128)?;
    let rho = ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &grid)?;
    for particle in [
        Particle::nonrelativistic(1.0, 1.0),
        Particle::relativistic(1.0, 1.0),
    ] {
        let sys = ReducedSystem::new(&rho, particle);
        let rec = build_soliton(SolitonParams::new([0.5, 0.0], 1.0)?, &rho, particle)?;
        println!("{particle:?}");
        for (seed, amp) in [1e-3, 1e-2, 1e-1, 1.0].into_iter().enumerate() {
            let s = lower_bound_check(
                &sys,
                &rec,
                &Perturbation::generate(&grid, seed as u64, amp, 1.0),
            );
            println!(
                "  |delta| = {amp:.0e}: dH = {:.6e}, bound = {:.6e}, ratio {:.3}, identity error {:.1e}",
                s.delta_h,
                s.bound,
                s.delta_h / s.bound,
                s.identity_rel_error
            );
        }
    }
    Ok(())
}
