use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{Grid, ScalarField, SpectralVectorField};

/// A seeded smooth solenoidal perturbation (δA, δΠ) with
/// |δA|_{Ḣ1} = |δΠ|_{L2} = amplitude / 2.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub da: SpectralVectorField,
    pub dpi: SpectralVectorField,
    pub amplitude: f64,
    pub seed: u64,
}

impl Perturbation {
    /// White noise in real space, filtered by exp(-|k|^2 sigma_p^2) and
    /// projected onto solenoidal fields.
    pub fn generate(grid: &Grid, seed: u64, amplitude: f64, sigma_p: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut next = || smooth_noise(grid, &mut rng, sigma_p);
        let a = SpectralVectorField::from_components(next(), next())
            .expect("same grid")
            .project_solenoidal();
        let p = SpectralVectorField::from_components(next(), next())
            .expect("same grid")
            .project_solenoidal();
        let (na, np) = (a.h1dot(), p.l2());
        let da = if na > 0.0 {
            a.scaled(0.5 * amplitude / na)
        } else {
            a
        };
        let dpi = if np > 0.0 {
            p.scaled(0.5 * amplitude / np)
        } else {
            p
        };
        Perturbation {
            da,
            dpi,
            amplitude,
            seed,
        }
    }

    pub fn zero(grid: &Grid) -> Self {
        Perturbation {
            da: SpectralVectorField::zeros(grid),
            dpi: SpectralVectorField::zeros(grid),
            amplitude: 0.0,
            seed: 0,
        }
    }

    /// |δA|_{Ḣ1} + |δΠ|_{L2}.
    pub fn norm(&self) -> f64 {
        self.da.h1dot() + self.dpi.l2()
    }

    /// |δA|_{Ḣ1}^2 + |δΠ|_{L2}^2.
    pub fn norm_sq(&self) -> f64 {
        self.da.h1dot().powi(2) + self.dpi.l2().powi(2)
    }
}

fn smooth_noise(grid: &Grid, rng: &mut ChaCha8Rng, sigma_p: f64) -> ScalarField {
    let vals: Vec<f64> = (0..grid.cells())
        .map(|_| StandardNormal.sample(rng))
        .collect();
    let mut f = ScalarField::from_values(grid, &vals);
    let n = grid.n();
    let s2 = sigma_p * sigma_p;
    let hat = f.hat_mut();
    for i in 0..n {
        for j in 0..n {
            let kk = grid.k(i).powi(2) + grid.k(j).powi(2);
            hat[i * n + j] *= (-kk * s2).exp();
        }
    }
    f
}
