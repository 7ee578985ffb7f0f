use crate::dynamics::{ReducedState, ReducedSystem};
use crate::error::{Error, Result};
use crate::spectral::SpectralVectorField;

/// Distance between two comoving states:
///
/// |A1 - A2|_{Ḣ1} + |Π1 - Π2|_{L2} + |q'1 - q'2| + |φ'1 - φ'2|,
///
/// where each state's velocities come from its own P and M.
pub fn distance(sys: &ReducedSystem, s1: &ReducedState, s2: &ReducedState) -> Result<f64> {
    if s1.a.grid() != s2.a.grid() || s1.a.grid() != sys.grid() {
        return Err(Error::GridMismatch(
            "distance between states on different grids".into(),
        ));
    }
    let (q1, w1) = sys.particle_velocities(s1);
    let (q2, w2) = sys.particle_velocities(s2);
    Ok(field_distance(&s1.a, &s1.pi, &s2.a, &s2.pi)
        + (q1[0] - q2[0]).hypot(q1[1] - q2[1])
        + (w1 - w2).abs())
}

/// |A1 - A2|_{Ḣ1} + |Π1 - Π2|_{L2}.
pub fn field_distance(
    a1: &SpectralVectorField,
    pi1: &SpectralVectorField,
    a2: &SpectralVectorField,
    pi2: &SpectralVectorField,
) -> f64 {
    let mut da = a1.clone();
    da.axpy(-1.0, a2);
    let mut dp = pi1.clone();
    dp.axpy(-1.0, pi2);
    da.h1dot() + dp.l2()
}
