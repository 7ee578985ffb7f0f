//! Time evolution of the lab-frame and comoving systems.

mod integrate;
mod lab;
mod reduced;
mod transform;

pub use integrate::{check_cfl, evolve, step, wave_propagate, Flow, Scheme, CFL};
pub use lab::{LabCouplings, LabRate, LabState, LabSystem};
pub use reduced::{ReducedCouplings, ReducedRate, ReducedState, ReducedSystem};
pub use transform::{comoving_transform, lab_soliton, to_lab};

use crate::spectral::{ScalarField, SpectralVectorField};

/// E and B of a lab state.
pub fn reconstruct_eb(sys: &LabSystem, s: &LabState) -> (SpectralVectorField, ScalarField) {
    sys.fields(s)
}
