//! Checks of the conservation laws, the energy lower bound, the momentum
//! map Jacobian and orbital stability.

mod conservation;
mod distance;
mod gradcheck;
mod jacobian;
mod lower_bound;
mod perturbation;
mod stability;

pub use conservation::{relative_drift, ConservationMonitor, DriftReport};
pub use distance::{distance, field_distance};
pub use gradcheck::{gradient_check, GradientSample};
pub use jacobian::{
    jacobian_entries, jacobian_vs_finite_difference, jacobian_vs_soliton_momenta, FdComparison,
    JacobianTable, SimplifiedForms,
};
pub use lower_bound::{
    kinetic_remainder, lower_bound_check, relativistic_convexity, ConvexitySummary,
    LowerBoundSample,
};
pub use perturbation::Perturbation;
pub use stability::{perturbed_state, stability_experiment, StabilityConfig, StabilityReport};
