//! Pseudospectral simulation of a spinning extended charge coupled to the
//! two-dimensional Maxwell field.
//!
//! The crate builds the travelling, spinning solitons of the coupled system
//! in closed form, evolves both the lab-frame canonical system and the
//! reduced comoving system, and checks the conservation laws, the energy
//! lower bound around a soliton, the momentum-map Jacobian and orbital
//! stability numerically.
//!
//! Units have c = 1. Fields live on an L-periodic square grid and are held
//! by their Fourier coefficients; see [`spectral`] for the conventions.

pub mod analysis;
pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod particle;
pub mod quadrature;
pub mod soliton;
pub mod spectral;

pub use error::{Error, Result};
pub use particle::{Kinematics, Particle};
pub use spectral::{ChargeDensity, DensityShape, Grid, ScalarField, SpectralVectorField};
