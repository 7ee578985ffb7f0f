#![allow(dead_code)]

use mlsim::{ChargeDensity, DensityShape, Grid, Particle};

pub fn desk_grid() -> Grid {
    Grid::new(32.0, 128).unwrap()
}

pub fn small_grid() -> Grid {
    Grid::new(16.0, 64).unwrap()
}

pub fn gaussian(grid: &Grid) -> ChargeDensity {
    ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, grid).unwrap()
}

pub fn unit_particle() -> Particle {
    Particle::nonrelativistic(1.0, 1.0)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
