//! Periodic-grid field arithmetic.
//!
//! Fourier integrals carry the measure dk/(2π)^2, so on an L-periodic grid
//! the inner product <f,g> = ∫ f g dx becomes (1/L^2) Re Σ f^(k) conj(g^(k)).

mod density;
mod field;
mod grid;

pub use density::{bessel_j, scaled_bessel, ChargeDensity, DensityShape, BUMP_POWER, BUMP_RADIUS};
pub use field::{ScalarField, SpectralVectorField};
pub use grid::Grid;

pub(crate) use density::coulomb_of;
pub(crate) use field::dot;

/// L2 and homogeneous H1 norms of a scalar field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    pub l2: f64,
    pub h1dot: f64,
}

pub fn norms(f: &ScalarField) -> Norms {
    Norms {
        l2: f.l2(),
        h1dot: f.h1dot(),
    }
}

pub fn project_solenoidal(a: &SpectralVectorField) -> SpectralVectorField {
    a.project_solenoidal()
}

pub fn coulomb_potential(rho: &ChargeDensity) -> crate::Result<ScalarField> {
    rho.coulomb_potential()
}

pub fn shift_density(rho: &ChargeDensity, q: [f64; 2]) -> ScalarField {
    rho.shifted(q)
}
