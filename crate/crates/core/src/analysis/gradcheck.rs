use serde::Serialize;

use super::Perturbation;
use crate::dynamics::{ReducedState, ReducedSystem};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GradientSample {
    pub seed: u64,
    /// <D_A H, δA> + <D_Π H, δΠ>.
    pub analytic: f64,
    /// Five-point central difference at the step with the smallest error.
    pub fd: f64,
    pub step: f64,
    pub rel_error: f64,
}

/// Compares the variational derivatives of the reduced Hamiltonian with
/// central differences along seeded random solenoidal directions. For each
/// direction the best of `steps` is reported.
pub fn gradient_check(
    sys: &ReducedSystem,
    state: &ReducedState,
    seeds: impl IntoIterator<Item = u64>,
    sigma_p: f64,
    steps: &[f64],
) -> Vec<GradientSample> {
    let (da_h, dpi_h) = sys.variational_derivatives(state);
    let grid = sys.grid();
    seeds
        .into_iter()
        .map(|seed| {
            let dir = Perturbation::generate(grid, seed, 1.0, sigma_p);
            let analytic = da_h.inner(&dir.da) + dpi_h.inner(&dir.dpi);
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for &h in steps {
                // H(s + t d) - H(s), free of the cancellation between two
                // full Hamiltonian values.
                let at = |t: f64| {
                    sys.hamiltonian_increment(state, &dir.da.scaled(t), &dir.dpi.scaled(t))
                };
                let fd = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
                let err = (fd - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE);
                if err < best.0 {
                    best = (err, fd, h);
                }
            }
            GradientSample {
                seed,
                analytic,
                fd: best.1,
                step: best.2,
                rel_error: best.0,
            }
        })
        .collect()
}
