use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{ScalarField, SpectralVectorField};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Exponent and support radius (in units of sigma) of the polynomial bump.
pub const BUMP_POWER: i32 = 10;
pub const BUMP_RADIUS: f64 = 4.0;

/// Radial profile family. Both are Laplacians of a radial bump g, which
/// makes the total charge vanish identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityShape {
    /// g = a exp(-r^2 / 2 sigma^2).
    LaplacianGaussian,
    /// g = a (1 - r^2/R^2)^n on r < R, R = 4 sigma, n = 10. Compact support.
    PolynomialBump,
}

impl fmt::Display for DensityShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityShape::LaplacianGaussian => "laplacian-gaussian",
            DensityShape::PolynomialBump => "polynomial-bump",
        })
    }
}

impl FromStr for DensityShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplacian-gaussian" => Ok(DensityShape::LaplacianGaussian),
            "polynomial-bump" => Ok(DensityShape::PolynomialBump),
            _ => Err(Error::config("rho.shape", format!("unknown shape {s:?}"))),
        }
    }
}

/// Neutral radial charge density rho = Δg sampled on a grid, with its
/// Fourier transform known in closed form.
#[derive(Clone, Debug)]
pub struct ChargeDensity {
    shape: DensityShape,
    sigma: f64,
    amplitude: f64,
    grid: Grid,
    rho: ScalarField,
    moment: [ScalarField; 2],
}

impl ChargeDensity {
    /// Builds the density. Requires 4 dx <= sigma <= L/8.
    pub fn new(shape: DensityShape, sigma: f64, amplitude: f64, grid: &Grid) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 4.0 * grid.dx()) {
            return Err(Error::config(
                "rho.sigma",
                format!(
                    "sigma = {sigma} is not resolved (needs sigma >= 4 dx = {})",
                    4.0 * grid.dx()
                ),
            ));
        }
        if sigma > grid.len() / 8.0 {
            return Err(Error::config(
                "rho.sigma",
                format!(
                    "sigma = {sigma} overflows the box (needs sigma <= L/8 = {})",
                    grid.len() / 8.0
                ),
            ));
        }
        if !amplitude.is_finite() {
            return Err(Error::config("rho.amplitude", "must be finite"));
        }
        let mut d = ChargeDensity {
            shape,
            sigma,
            amplitude,
            grid: grid.clone(),
            rho: ScalarField::zeros(grid),
            moment: [ScalarField::zeros(grid), ScalarField::zeros(grid)],
        };
        let n = grid.n();
        let mut hat = vec![Complex64::new(0.0, 0.0); grid.cells()];
        for i in 0..n {
            for j in 0..n {
                let kappa = grid.k(i).hypot(grid.k(j));
                hat[i * n + j] = Complex64::new(d.hat_radial(kappa), 0.0);
            }
        }
        d.rho = ScalarField::from_hat(grid, hat);
        // y_c rho(y), sampled in real space at wrapped coordinates.
        let vals = d.rho.values();
        let mut y1 = vec![0.0; grid.cells()];
        let mut y2 = vec![0.0; grid.cells()];
        for i in 0..n {
            for j in 0..n {
                y1[i * n + j] = grid.coord(i) * vals[i * n + j];
                y2[i * n + j] = grid.coord(j) * vals[i * n + j];
            }
        }
        d.moment = [
            ScalarField::from_values(grid, &y1),
            ScalarField::from_values(grid, &y2),
        ];
        Ok(d)
    }

    pub fn shape(&self) -> DensityShape {
        self.shape
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Grid representation of rho, coefficients taken from the closed form.
    pub fn field(&self) -> &ScalarField {
        &self.rho
    }

    /// Grid samples of y_c rho(y) for c = 0, 1.
    pub fn moment(&self, c: usize) -> &ScalarField {
        &self.moment[c]
    }

    /// Jy rho = (y2 rho, -y1 rho) as an unprojected vector field.
    pub fn spin_current(&self) -> SpectralVectorField {
        let m2 = self.moment[1].hat().to_vec();
        let m1: Vec<Complex64> = self.moment[0].hat().iter().map(|c| -c).collect();
        SpectralVectorField::new(&self.grid, [m2, m1], false)
    }

    /// Support radius of the bump, or infinity for the Gaussian family.
    pub fn support_radius(&self) -> f64 {
        match self.shape {
            DensityShape::LaplacianGaussian => f64::INFINITY,
            DensityShape::PolynomialBump => BUMP_RADIUS * self.sigma,
        }
    }

    /// rho as a function of r = |x|.
    pub fn radial(&self, r: f64) -> f64 {
        let (a, s) = (self.amplitude, self.sigma);
        match self.shape {
            DensityShape::LaplacianGaussian => {
                let s2 = s * s;
                a * (-r * r / (2.0 * s2)).exp() * (r * r / (s2 * s2) - 2.0 / s2)
            }
            DensityShape::PolynomialBump => {
                let rr = BUMP_RADIUS * s;
                let t = r * r / (rr * rr);
                if t >= 1.0 {
                    return 0.0;
                }
                let n = BUMP_POWER;
                let nf = n as f64;
                let u = 1.0 - t;
                a * (4.0 * nf * (nf - 1.0) * u.powi(n - 2) * r * r / rr.powi(4)
                    - 4.0 * nf * u.powi(n - 1) / (rr * rr))
            }
        }
    }

    /// rho^ as a function of kappa = |k|.
    pub fn hat_radial(&self, kappa: f64) -> f64 {
        let (a, s) = (self.amplitude, self.sigma);
        match self.shape {
            DensityShape::LaplacianGaussian => {
                let s2 = s * s;
                -2.0 * PI * a * s2 * kappa * kappa * (-s2 * kappa * kappa / 2.0).exp()
            }
            DensityShape::PolynomialBump => {
                let rr = BUMP_RADIUS * s;
                -kappa
                    * kappa
                    * a
                    * bump_hat_factor(rr)
                    * scaled_bessel(BUMP_POWER as u32 + 1, kappa * rr)
            }
        }
    }

    /// d rho^ / d kappa.
    pub fn hat_radial_derivative(&self, kappa: f64) -> f64 {
        let (a, s) = (self.amplitude, self.sigma);
        match self.shape {
            DensityShape::LaplacianGaussian => {
                let s2 = s * s;
                -2.0 * PI
                    * a
                    * s2
                    * kappa
                    * (2.0 - s2 * kappa * kappa)
                    * (-s2 * kappa * kappa / 2.0).exp()
            }
            DensityShape::PolynomialBump => {
                let rr = BUMP_RADIUS * s;
                let nu = BUMP_POWER as u32 + 1;
                let x = kappa * rr;
                // g^ = c x^{-nu} J_nu(x), so d g^/d kappa = -c R x^{-nu} J_{nu+1}(x) x.
                let c = a * bump_hat_factor(rr);
                let g = c * scaled_bessel(nu, x);
                let dg = -c * rr * x * scaled_bessel(nu + 1, x);
                -(2.0 * kappa * g + kappa * kappa * dg)
            }
        }
    }

    /// Gradient of rho^ at wavevector k. Vanishes at k = 0.
    pub fn hat_gradient(&self, k1: f64, k2: f64) -> [f64; 2] {
        let kappa = k1.hypot(k2);
        if kappa == 0.0 {
            return [0.0, 0.0];
        }
        let d = self.hat_radial_derivative(kappa) / kappa;
        [d * k1, d * k2]
    }

    /// Radius beyond which |rho^| and |rho^'| stay below `rel` times their
    /// peak values.
    pub fn spectral_cutoff(&self, rel: f64) -> f64 {
        let step = 0.01 / self.sigma;
        let cap = match self.shape {
            DensityShape::LaplacianGaussian => 40.0 / self.sigma,
            DensityShape::PolynomialBump => 64.0 / self.sigma,
        };
        let env = |k: f64| {
            self.hat_radial(k)
                .abs()
                .max(self.hat_radial_derivative(k).abs())
        };
        let mut peak = 0.0f64;
        let mut last = 0.0;
        let mut k = 0.0;
        while k <= cap {
            let e = env(k);
            peak = peak.max(e);
            if e >= rel * peak {
                last = k;
            }
            k += step;
        }
        if peak == 0.0 {
            return 0.0;
        }
        (last + step).min(cap)
    }

    /// Coulomb potential Phi0 with Phi0^ = rho^/|k|^2 and no zero mode.
    pub fn coulomb_potential(&self) -> Result<ScalarField> {
        let tol = 1e-14 * self.rho.max_abs_hat().max(f64::MIN_POSITIVE);
        if self.rho.hat()[0].norm() > tol {
            return Err(Error::Domain("charge density is not neutral".into()));
        }
        Ok(coulomb_of(&self.rho))
    }

    /// rho(x - q).
    pub fn shifted(&self, q: [f64; 2]) -> ScalarField {
        self.rho.shifted(q)
    }
}

/// Solves -ΔPhi = f spectrally with the zero mode pinned to zero.
pub(crate) fn coulomb_of(f: &ScalarField) -> ScalarField {
    let g = f.grid();
    let n = g.n();
    let mut hat = f.hat().to_vec();
    for i in 0..n {
        for j in 0..n {
            let kk = g.kd(i).powi(2) + g.kd(j).powi(2);
            let idx = i * n + j;
            hat[idx] = if kk == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                hat[idx] / kk
            };
        }
    }
    ScalarField::from_hat(g, hat)
}

/// 2π R^2 2^n n!, the prefactor of the bump transform.
fn bump_hat_factor(rr: f64) -> f64 {
    let n = BUMP_POWER;
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    2.0 * PI * rr * rr * 2f64.powi(n) * fact
}

/// x^{-nu} J_nu(x), finite at x = 0.
pub fn scaled_bessel(nu: u32, x: f64) -> f64 {
    let x = x.abs();
    if x <= 4.0 {
        // Series: sum (-1)^k (x/2)^{2k} / (2^nu k! (k+nu)!).
        let nf: f64 = (1..=nu).map(|i| i as f64).product();
        let mut term = 1.0 / (2f64.powi(nu as i32) * nf);
        let mut sum = term;
        let q = x * x / 4.0;
        for k in 1..60 {
            term *= -q / (k as f64 * (k + nu) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        bessel_j(nu, x) / x.powi(nu as i32)
    }
}

/// Bessel function of the first kind J_nu(x) for integer nu, x >= 0.
///
/// Uses the series for small arguments and Miller's backward recurrence,
/// normalised by J_0 + 2 sum J_{2k} = 1, otherwise.
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(nu, -x);
        return if nu % 2 == 1 { -v } else { v };
    }
    if x <= 4.0 {
        return scaled_bessel(nu, x) * x.powi(nu as i32);
    }
    let nu = nu as usize;
    let start =
        2 * ((nu.max(x as usize) + 30 + (40.0 * (nu.max(x as usize) as f64)).sqrt() as usize) / 2);
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut sum = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / x * j - jp;
        jp = j;
        j = jm;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            sum *= 1e-250;
        }
        // j now holds J_{k-1} up to scale.
        if (k - 1) % 2 == 0 && k > 1 {
            sum += 2.0 * j;
        }
        if k - 1 == nu {
            result = j;
        }
    }
    sum += j;
    result / sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jn_integral(n: u32, x: f64) -> f64 {
        // J_n(x) = (1/π) ∫_0^π cos(nτ - x sin τ) dτ, periodic trapezoid on [0, 2π].
        let m = 4096;
        let h = 2.0 * PI / m as f64;
        (0..m)
            .map(|i| {
                let t = i as f64 * h;
                (n as f64 * t - x * t.sin()).cos()
            })
            .sum::<f64>()
            * h
            / (2.0 * PI)
    }

    #[test]
    fn bessel_against_integral_representation() {
        for &n in &[0u32, 1, 5, 11, 12] {
            for &x in &[0.3, 1.0, 3.9, 4.1, 10.0, 37.5, 120.0] {
                let a = bessel_j(n, x);
                let b = jn_integral(n, x);
                assert!((a - b).abs() < 1e-13, "J_{n}({x}): {a} vs {b}");
            }
        }
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
    }

    #[test]
    fn density_preconditions() {
        let g = Grid::new(32.0, 128).unwrap();
        assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 0.5, 1.0, &g).is_err());
        assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 4.5, 1.0, &g).is_err());
        assert!(ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &g).is_ok());
    }

    #[test]
    fn zero_amplitude() {
        let g = Grid::new(32.0, 64).unwrap();
        let d = ChargeDensity::new(DensityShape::LaplacianGaussian, 2.0, 0.0, &g).unwrap();
        assert_eq!(d.field().max_abs_hat(), 0.0);
        assert!(d.field().values().iter().all(|&v| v == 0.0));
    }

    fn check_radial_transform(d: &ChargeDensity) {
        // Numerical Hankel transform: rho^(κ) = 2π ∫ rho(r) J0(κ r) r dr.
        let rmax = if d.support_radius().is_finite() {
            d.support_radius()
        } else {
            12.0 * d.sigma()
        };
        let m = 4000;
        let h = rmax / m as f64;
        for &kappa in &[0.0, 0.3, 1.0, 2.5, 5.0] {
            let mut s = 0.0;
            for i in 0..=m {
                let r = i as f64 * h;
                let w = if i == 0 || i == m {
                    1.0 / 3.0
                } else if i % 2 == 1 {
                    4.0 / 3.0
                } else {
                    2.0 / 3.0
                };
                s += w * d.radial(r) * bessel_j(0, kappa * r) * r;
            }
            let num = 2.0 * PI * s * h;
            let exact = d.hat_radial(kappa);
            assert!(
                (num - exact).abs() < 1e-8,
                "kappa={kappa}: {num} vs {exact}"
            );
            let e = 1e-5;
            let fd = (d.hat_radial(kappa + e) - d.hat_radial((kappa - e).abs())) / (2.0 * e);
            if kappa > 0.0 {
                assert!((fd - d.hat_radial_derivative(kappa)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn closed_form_transforms() {
        let g = Grid::new(32.0, 128).unwrap();
        check_radial_transform(
            &ChargeDensity::new(DensityShape::LaplacianGaussian, 1.0, 1.0, &g).unwrap(),
        );
        check_radial_transform(
            &ChargeDensity::new(DensityShape::PolynomialBump, 1.0, 1.0, &g).unwrap(),
        );
    }

    #[test]
    fn neutrality_and_gradient_at_origin() {
        let g = Grid::new(32.0, 128).unwrap();
        for shape in [
            DensityShape::LaplacianGaussian,
            DensityShape::PolynomialBump,
        ] {
            let d = ChargeDensity::new(shape, 1.0, 1.0, &g).unwrap();
            assert_eq!(d.hat_radial(0.0), 0.0);
            assert_eq!(d.field().hat()[0].norm(), 0.0);
            assert_eq!(d.hat_gradient(0.0, 0.0), [0.0, 0.0]);
            assert!(d.hat_radial_derivative(0.0).abs() <= 1e-12);
            // Neutral and radial, so the gradient vanishes linearly.
            let (g1, g2) = (d.hat_gradient(1e-6, 0.0), d.hat_gradient(2e-6, 0.0));
            assert!(
                (g2[0] - 2.0 * g1[0]).abs() <= 1e-9 * g1[0].abs(),
                "{shape}: {g1:?} {g2:?}"
            );
            if shape == DensityShape::LaplacianGaussian {
                assert!(
                    (g1[0] + 4.0 * PI * 1e-6).abs() <= 1e-10 * 4.0 * PI * 1e-6,
                    "{g1:?}"
                );
            }
        }
    }

    #[test]
    fn shape_parsing() {
        assert_eq!(
            "polynomial-bump".parse::<DensityShape>().unwrap(),
            DensityShape::PolynomialBump
        );
        assert!("box".parse::<DensityShape>().is_err());
        assert_eq!(
            DensityShape::LaplacianGaussian.to_string(),
            "laplacian-gaussian"
        );
    }
}
