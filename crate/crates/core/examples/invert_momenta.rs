//! Finds the soliton with prescribed momenta (P, M) by Newton iteration.
//!
//!     cargo run --release --example invert_momenta -- 0.8 0.0 3.0

use mlsim::soliton::{build_soliton, solve_soliton_params, MomentumMap, NewtonOptions};
use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

fn main() -> mlsim::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let (p, m) = match args[..] {
        [p1, p2, m] => ([p1, p2], m),
        [] => ([0.8, 0.0], 3.0),
        _ => panic!("usage: invert_momenta [P1 P2 M]"),
    };
    let grid = Grid::new(32.0, 128)?;
    let rho = ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &grid)?;
    let particle = Particle::relativistic(1.0, 1.0);

    let report = solve_soliton_params(
        p,
        m,
        &MomentumMap::lattice(&rho, particle),
        NewtonOptions::default(),
    )?;
    for (i, r) in report.residuals.iter().enumerate() {
        println!("iteration {i}: residual {r:.3e}");
    }
    let rec = build_soliton(report.params, &rho, particle)?;
    println!(
        "v = {:?}, omega = {:.9}",
        report.params.v, report.params.omega
    );
    println!("field momenta: P = {:?}, M = {:.9}", rec.p, rec.m_ang);
    Ok(())
}
