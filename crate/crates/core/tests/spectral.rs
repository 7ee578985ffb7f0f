mod common;

use common::*;
use mlsim::spectral::{coulomb_potential, norms, project_solenoidal, shift_density};
use mlsim::{ChargeDensity, DensityShape, Grid, ScalarField, SpectralVectorField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth random field: a few random Fourier modes plus a Gaussian bump.
fn random_scalar(g: &Grid, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            let k1 = rng.random_range(-4i32..=4) as f64;
            let k2 = rng.random_range(-4i32..=4) as f64;
            (
                k1,
                k2,
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..6.3),
            )
        })
        .collect();
    let c = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
    let w = 2.0 * std::f64::consts::PI / g.len();
    ScalarField::from_fn(g, |x, y| {
        let wave: f64 = modes
            .iter()
            .map(|&(k1, k2, a, p)| a * (w * (k1 * x + k2 * y) + p).cos())
            .sum();
        wave + (-((x - c[0]).powi(2) + (y - c[1]).powi(2))).exp()
    })
}

fn random_vector(g: &Grid, seed: u64) -> SpectralVectorField {
    SpectralVectorField::from_components(random_scalar(g, seed), random_scalar(g, seed ^ 0xABCD))
        .unwrap()
}

fn grid() -> Grid {
    Grid::new(16.0, 32).unwrap()
}

fn real_inner(f: &ScalarField, g: &ScalarField) -> f64 {
    let dx = f.grid().dx();
    f.values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * dx
        * dx
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parseval_matches_real_space(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = grid();
        let (f, h) = (random_scalar(&g, s1), random_scalar(&g, s2));
        let (a, b) = (f.inner(&h), real_inner(&f, &h));
        prop_assert!((a - b).abs() <= 1e-11 * (1.0 + f.l2() * h.l2()));
        prop_assert!((f.l2() - f.l2_spectral()).abs() <= 1e-11 * (1.0 + f.l2()));
    }

    #[test]
    fn projector_is_idempotent(seed in any::<u64>()) {
        let g = grid();
        let p = random_vector(&g, seed).project_solenoidal();
        let pp = p.project_solenoidal();
        let mut d = pp.clone();
        d.axpy(-1.0, &p);
        prop_assert!(d.l2() <= 1e-14 * (1.0 + p.l2()));
        prop_assert!(p.check_solenoidal());
    }

    #[test]
    fn projector_is_self_adjoint(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = grid();
        let (a, b) = (random_vector(&g, s1), random_vector(&g, s2));
        let lhs = project_solenoidal(&a).inner(&b);
        let rhs = a.inner(&project_solenoidal(&b));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + a.l2() * b.l2()));
    }

    #[test]
    fn projector_is_a_contraction(seed in any::<u64>()) {
        let g = grid();
        let a = random_vector(&g, seed);
        let p = a.project_solenoidal();
        prop_assert!(p.l2() <= a.l2() * (1.0 + 1e-14));
        prop_assert!(p.divergence().l2() <= 1e-12 * (1.0 + a.l2()));
    }

    #[test]
    fn shifts_compose_and_preserve_norms(seed in any::<u64>(), q in prop::array::uniform4(-5.0f64..5.0)) {
        let g = grid();
        let f = random_scalar(&g, seed);
        let two = f.shifted([q[0], q[1]]).shifted([q[2], q[3]]);
        let one = f.shifted([q[0] + q[2], q[1] + q[3]]);
        let mut d = two.clone();
        d.axpy(-1.0, &one);
        prop_assert!(d.l2() <= 1e-12 * (1.0 + f.l2()));
        // The real-space norm is not invariant: a fractional shift rotates
        // the unpaired Nyquist coefficient. The coefficient moduli are.
        prop_assert!((two.l2_spectral() - f.l2_spectral()).abs() <= 1e-12 * (1.0 + f.l2()));
    }

    #[test]
    fn gradient_is_skew_adjoint(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = grid();
        let (f, h) = (random_scalar(&g, s1), random_scalar(&g, s2));
        let (gf, gh) = (f.gradient(), h.gradient());
        for c in 0..2 {
            let lhs = gf.component(c).inner(&h);
            let rhs = -f.inner(&gh.component(c));
            prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + f.h1dot() * h.l2()));
        }
        let h1 = f.h1dot();
        prop_assert!((h1 * h1 + f.laplacian().inner(&f)).abs() <= 1e-11 * (1.0 + h1 * h1));
    }
}

#[test]
fn integer_shift_is_a_roll() {
    let g = grid();
    let f = random_scalar(&g, 3);
    let n = g.n();
    let s = f.shifted([2.0 * g.dx(), -3.0 * g.dx()]).values();
    let v = f.values();
    for i in 0..n {
        for j in 0..n {
            let src = ((i + n - 2) % n) * n + (j + 3) % n;
            assert!((s[i * n + j] - v[src]).abs() < 1e-12);
        }
    }
}

#[test]
fn spectral_derivative_of_a_plane_wave_is_exact() {
    let g = grid();
    let w = 2.0 * std::f64::consts::PI / g.len() * 3.0;
    let f = ScalarField::from_fn(&g, |x, y| (w * x).sin() * (2.0 * w * y).cos());
    let df = f.gradient().component(0);
    let exact = ScalarField::from_fn(&g, |x, y| w * (w * x).cos() * (2.0 * w * y).cos());
    let mut d = df.clone();
    d.axpy(-1.0, &exact);
    assert!(d.l2() < 1e-12);
    let n = norms(&f);
    assert!((n.h1dot * n.h1dot - 5.0 * w * w * n.l2 * n.l2).abs() < 1e-10);
}

#[test]
fn density_is_neutral_and_coulomb_inverts_laplacian() {
    let g = desk_grid();
    for shape in [
        DensityShape::LaplacianGaussian,
        DensityShape::PolynomialBump,
    ] {
        let rho = ChargeDensity::new(shape, 1.0, 1.5, &g).unwrap();
        let total: f64 = rho.field().values().iter().sum::<f64>() * g.dx() * g.dx();
        assert!(total.abs() < 1e-12, "{shape}: {total:e}");
        let phi = coulomb_potential(&rho).unwrap();
        let mut r = phi.laplacian().scaled(-1.0);
        r.axpy(-1.0, rho.field());
        // The bump's algebraic spectral tail reaches the Nyquist lines, where
        // the Nyquist-zeroed symbol cannot invert the Laplacian.
        let tol = match shape {
            DensityShape::LaplacianGaussian => 1e-10,
            DensityShape::PolynomialBump => 1e-6,
        };
        assert!(r.l2() < tol * rho.field().l2(), "{shape}: {:e}", r.l2());
        // Shifting by a lattice vector of the box is the identity.
        let mut d = shift_density(&rho, [g.len(), -g.len()]);
        d.axpy(-1.0, rho.field());
        assert!(d.l2() < 1e-12);
    }
}

#[test]
fn spin_current_is_solenoidal_for_radial_densities() {
    let g = desk_grid();
    let rho = gaussian(&g);
    let s = rho.spin_current();
    assert!(s.divergence().l2() < 1e-10 * s.l2());
}

#[test]
fn grid_rejects_bad_sizes() {
    assert!(Grid::new(16.0, 100).is_err());
    assert!(Grid::new(16.0, 8).is_err());
    assert!(Grid::new(-1.0, 32).is_err());
}

#[test]
fn density_preconditions() {
    let g = desk_grid();
    assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 0.5, 1.0, &g).is_err());
    assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 5.0, 1.0, &g).is_err());
    assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, f64::NAN, &g).is_err());
}
