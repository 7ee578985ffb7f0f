//! Inner products that couple the field to the particle.

use num_complex::Complex64;

use crate::spectral::{ScalarField, SpectralVectorField};

/// <Π, ∇_* A>: the vector with components Σ_i <Π_i, ∂_j A_i>.
pub fn field_momentum(pi: &SpectralVectorField, a: &SpectralVectorField) -> [f64; 2] {
    let g = a.grid();
    let n = g.n();
    let (p, h) = (pi.hats(), a.hats());
    let mut out = [0.0; 2];
    for i in 0..n {
        for j in 0..n {
            let idx = i * n + j;
            let s = cross(p[0][idx], h[0][idx]) + cross(p[1][idx], h[1][idx]);
            out[0] += g.kd(i) * s;
            out[1] += g.kd(j) * s;
        }
    }
    let w = g.parseval_weight();
    [w * out[0], w * out[1]]
}

/// Re[x conj(i y)] = Im[x conj(y)].
#[inline]
fn cross(x: Complex64, y: Complex64) -> f64 {
    x.im * y.re - x.re * y.im
}

/// <A_j, f> for j = 1, 2.
pub fn component_overlap(a: &SpectralVectorField, f: &ScalarField) -> [f64; 2] {
    let w = a.grid().parseval_weight();
    [
        w * crate::spectral::dot(a.hat(0), f.hat()),
        w * crate::spectral::dot(a.hat(1), f.hat()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn field_momentum_matches_direct_derivative() {
        let g = Grid::new(8.0, 32).unwrap();
        let a1 = ScalarField::from_fn(&g, |x, y| (-(x * x + 2.0 * y * y) / 2.0).exp() * (1.0 + x));
        let a2 = ScalarField::from_fn(&g, |x, y| (-(x * x + y * y)).exp() * y);
        let p1 = ScalarField::from_fn(&g, |x, y| (-(x - 0.5).powi(2) - y * y).exp());
        let p2 = ScalarField::from_fn(&g, |x, y| (-(x * x) - (y - 0.3).powi(2)).exp() * x);
        let a = SpectralVectorField::from_components(a1, a2).unwrap();
        let pi = SpectralVectorField::from_components(p1, p2).unwrap();
        let fm = field_momentum(&pi, &a);
        for axis in 0..2 {
            let da = a.partial(axis);
            let direct = pi.inner(&da);
            assert!(
                (fm[axis] - direct).abs() < 1e-13,
                "{} vs {}",
                fm[axis],
                direct
            );
        }
    }
}
