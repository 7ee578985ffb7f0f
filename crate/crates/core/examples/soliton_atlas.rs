//! Momenta and Jacobian determinant of the soliton family along v = (v, 0).
//!
//!     cargo run --release --example soliton_atlas

use mlsim::analysis::jacobian_entries;
use mlsim::soliton::{build_soliton, MomentumMap, SolitonParams};
use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

fn main() -> mlsim::Result<()> {
    let grid = Grid::new(32.0, 128)?;
    let rho = ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &grid)?;
    let particle = Particle::nonrelativistic(1.0, 1.0);
    let polar = MomentumMap::polar(&rho, particle);

    println!(
        "{:>5} {:>5} {:>12} {:>12} {:>12} {:>12}",
        "v", "omega", "P1", "M", "det J", "|A|_H1"
    );
    for omega in [0.0, 1.0, 5.0] {
        for i in 0..10 {
            let v = i as f64 / 10.0;
            let rec = build_soliton(SolitonParams::new([v, 0.0], omega)?, &rho, particle)?;
            let jac = jacobian_entries(v, omega, &polar)?;
            println!(
                "{v:>5.1} {omega:>5.1} {:>12.6} {:>12.6} {:>12.5e} {:>12.6}",
                rec.p[0],
                rec.m_ang,
                jac.det,
                rec.a.h1dot()
            );
        }
    }
    Ok(())
}
