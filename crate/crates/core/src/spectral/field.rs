use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Real scalar field on a [`Grid`], held by its Fourier coefficients.
///
/// Real-space samples are produced on demand by [`ScalarField::values`].
/// Coefficients of real data are conjugate symmetric; every operation here
/// preserves that.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Grid,
    hat: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        ScalarField {
            grid: grid.clone(),
            hat: vec![ZERO; grid.cells()],
        }
    }

    pub fn from_values(grid: &Grid, values: &[f64]) -> Self {
        assert_eq!(
            values.len(),
            grid.cells(),
            "sample count does not match grid"
        );
        let mut hat: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.forward(&mut hat);
        ScalarField {
            grid: grid.clone(),
            hat,
        }
    }

    /// Samples `f(x1, x2)` at the wrapped grid coordinates.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.cells());
        for i in 0..n {
            for j in 0..n {
                values.push(f(grid.coord(i), grid.coord(j)));
            }
        }
        Self::from_values(grid, &values)
    }

    pub fn from_hat(grid: &Grid, hat: Vec<Complex64>) -> Self {
        assert_eq!(
            hat.len(),
            grid.cells(),
            "coefficient count does not match grid"
        );
        ScalarField {
            grid: grid.clone(),
            hat,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn hat(&self) -> &[Complex64] {
        &self.hat
    }

    pub fn hat_mut(&mut self) -> &mut [Complex64] {
        &mut self.hat
    }

    pub fn into_hat(self) -> Vec<Complex64> {
        self.hat
    }

    /// Real-space samples, row-major.
    pub fn values(&self) -> Vec<f64> {
        let mut buf = self.hat.clone();
        self.grid.inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// L2 inner product, evaluated through Parseval.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        self.grid.parseval_weight() * dot(&self.hat, &other.hat)
    }

    /// L2 norm from real-space samples, (sum |f|^2 dx^2)^{1/2}.
    pub fn l2(&self) -> f64 {
        let dx2 = self.grid.dx() * self.grid.dx();
        (self.values().iter().map(|v| v * v).sum::<f64>() * dx2).sqrt()
    }

    /// L2 norm from Fourier coefficients.
    pub fn l2_spectral(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    pub fn h1dot(&self) -> f64 {
        h1dot_sq(&self.grid, &self.hat).sqrt()
    }

    pub fn gradient(&self) -> SpectralVectorField {
        let g = &self.grid;
        let n = g.n();
        let mut h0 = vec![ZERO; g.cells()];
        let mut h1 = vec![ZERO; g.cells()];
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                h0[idx] = I * g.kd(i) * self.hat[idx];
                h1[idx] = I * g.kd(j) * self.hat[idx];
            }
        }
        SpectralVectorField::new(g, [h0, h1], false)
    }

    pub fn laplacian(&self) -> ScalarField {
        let g = &self.grid;
        let n = g.n();
        let mut hat = self.hat.clone();
        for i in 0..n {
            for j in 0..n {
                hat[i * n + j] *= -(g.kd(i).powi(2) + g.kd(j).powi(2));
            }
        }
        ScalarField {
            grid: g.clone(),
            hat,
        }
    }

    /// Band-limited translation: returns f(x - q).
    pub fn shifted(&self, q: [f64; 2]) -> ScalarField {
        let mut hat = self.hat.clone();
        apply_shift(&self.grid, &mut hat, q);
        ScalarField {
            grid: self.grid.clone(),
            hat,
        }
    }

    pub fn scaled(&self, alpha: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            hat: self.hat.iter().map(|c| c * alpha).collect(),
        }
    }

    /// self += alpha * other.
    pub fn axpy(&mut self, alpha: f64, other: &ScalarField) {
        axpy(&mut self.hat, alpha, &other.hat);
    }

    pub fn max_abs_hat(&self) -> f64 {
        self.hat.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// Two-component real vector field held in Fourier space.
///
/// The `solenoidal` flag records that the field was produced by the
/// projector or by operations that keep its range (sums of solenoidal
/// fields, constant-coefficient derivatives, translations).
#[derive(Clone, Debug)]
pub struct SpectralVectorField {
    grid: Grid,
    hat: [Vec<Complex64>; 2],
    solenoidal: bool,
}

impl SpectralVectorField {
    pub(crate) fn new(grid: &Grid, hat: [Vec<Complex64>; 2], solenoidal: bool) -> Self {
        debug_assert!(hat[0].len() == grid.cells() && hat[1].len() == grid.cells());
        SpectralVectorField {
            grid: grid.clone(),
            hat,
            solenoidal,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::new(
            grid,
            [vec![ZERO; grid.cells()], vec![ZERO; grid.cells()]],
            true,
        )
    }

    pub fn from_components(a1: ScalarField, a2: ScalarField) -> Result<Self> {
        if a1.grid != a2.grid {
            return Err(Error::GridMismatch(
                "vector components live on different grids".into(),
            ));
        }
        let grid = a1.grid.clone();
        Ok(Self::new(&grid, [a1.hat, a2.hat], false))
    }

    /// Builds a field from Fourier coefficients. The result is flagged
    /// solenoidal only if it passes [`Self::check_solenoidal`].
    pub fn from_hat(grid: &Grid, hat: [Vec<Complex64>; 2]) -> Self {
        let mut f = Self::new(grid, hat, false);
        f.solenoidal = f.check_solenoidal();
        f
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn hat(&self, c: usize) -> &[Complex64] {
        &self.hat[c]
    }

    pub fn hats(&self) -> &[Vec<Complex64>; 2] {
        &self.hat
    }

    pub(crate) fn hats_mut(&mut self) -> &mut [Vec<Complex64>; 2] {
        &mut self.hat
    }

    pub fn component(&self, c: usize) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            hat: self.hat[c].clone(),
        }
    }

    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    pub(crate) fn set_solenoidal(&mut self, flag: bool) {
        self.solenoidal = flag;
    }

    /// Leray projection a^ - k (k.a^)/|k|^2, with the zero mode and the
    /// Nyquist lines removed.
    pub fn project_solenoidal(&self) -> SpectralVectorField {
        let mut out = self.clone();
        project_in_place(&self.grid, &mut out.hat);
        out.solenoidal = true;
        out
    }

    pub fn divergence(&self) -> ScalarField {
        let g = &self.grid;
        let n = g.n();
        let mut hat = vec![ZERO; g.cells()];
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                hat[idx] = I * (g.kd(i) * self.hat[0][idx] + g.kd(j) * self.hat[1][idx]);
            }
        }
        ScalarField {
            grid: g.clone(),
            hat,
        }
    }

    /// max_k |k.a^(k)| / max_k |a^(k)|, zero for the zero field.
    pub fn divergence_ratio(&self) -> f64 {
        let g = &self.grid;
        let n = g.n();
        let (mut div, mut amp) = (0.0f64, 0.0f64);
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let a = [self.hat[0][idx], self.hat[1][idx]];
                div = div.max((g.k(i) * a[0] + g.k(j) * a[1]).norm());
                amp = amp.max(a[0].norm().max(a[1].norm()));
            }
        }
        if amp == 0.0 {
            0.0
        } else {
            div / amp
        }
    }

    /// Checks the solenoidal invariant: divergence ratio at most 1e-10 and
    /// no content in the zero mode.
    pub fn check_solenoidal(&self) -> bool {
        let amp = self.max_abs_hat();
        self.divergence_ratio() <= 1e-10
            && self.hat[0][0].norm() <= 1e-14 * amp
            && self.hat[1][0].norm() <= 1e-14 * amp
    }

    pub fn inner(&self, other: &SpectralVectorField) -> f64 {
        self.grid.parseval_weight()
            * (dot(&self.hat[0], &other.hat[0]) + dot(&self.hat[1], &other.hat[1]))
    }

    /// L2 norm through Parseval.
    pub fn l2(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    pub fn h1dot(&self) -> f64 {
        (h1dot_sq(&self.grid, &self.hat[0]) + h1dot_sq(&self.grid, &self.hat[1])).sqrt()
    }

    pub fn max_abs_hat(&self) -> f64 {
        self.hat.iter().flatten().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// (u.∇) a for a constant vector u.
    pub fn directional(&self, u: [f64; 2]) -> SpectralVectorField {
        let g = &self.grid;
        let n = g.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let s = I * (u[0] * g.kd(i) + u[1] * g.kd(j));
                out.hat[0][idx] *= s;
                out.hat[1][idx] *= s;
            }
        }
        out
    }

    /// Partial derivative along axis `axis` of both components.
    pub fn partial(&self, axis: usize) -> SpectralVectorField {
        let mut u = [0.0; 2];
        u[axis] = 1.0;
        self.directional(u)
    }

    pub fn laplacian(&self) -> SpectralVectorField {
        let g = &self.grid;
        let n = g.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let s = -(g.kd(i).powi(2) + g.kd(j).powi(2));
                out.hat[0][idx] *= s;
                out.hat[1][idx] *= s;
            }
        }
        out
    }

    /// Scalar curl ∂1 a2 - ∂2 a1, which equals ∇.(J a) with J a = (a2, -a1).
    pub fn curl(&self) -> ScalarField {
        let g = &self.grid;
        let n = g.n();
        let mut hat = vec![ZERO; g.cells()];
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                hat[idx] = I * (g.kd(i) * self.hat[1][idx] - g.kd(j) * self.hat[0][idx]);
            }
        }
        ScalarField {
            grid: g.clone(),
            hat,
        }
    }

    /// Band-limited translation: returns a(x - q).
    pub fn shifted(&self, q: [f64; 2]) -> SpectralVectorField {
        let mut out = self.clone();
        for h in out.hat.iter_mut() {
            apply_shift(&self.grid, h, q);
        }
        out
    }

    pub fn scaled(&self, alpha: f64) -> SpectralVectorField {
        let mut out = self.clone();
        for h in out.hat.iter_mut() {
            h.iter_mut().for_each(|c| *c *= alpha);
        }
        out
    }

    /// self += alpha * other.
    pub fn axpy(&mut self, alpha: f64, other: &SpectralVectorField) {
        debug_assert!(self.grid == other.grid);
        axpy(&mut self.hat[0], alpha, &other.hat[0]);
        axpy(&mut self.hat[1], alpha, &other.hat[1]);
        self.solenoidal = self.solenoidal && other.solenoidal;
    }

    /// Real-space samples of both components.
    pub fn values(&self) -> [Vec<f64>; 2] {
        [self.component(0).values(), self.component(1).values()]
    }
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

pub(crate) fn axpy(y: &mut [Complex64], alpha: f64, x: &[Complex64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a += b * alpha);
}

fn h1dot_sq(g: &Grid, hat: &[Complex64]) -> f64 {
    let n = g.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (g.kd(i).powi(2) + g.kd(j).powi(2)) * hat[i * n + j].norm_sqr();
        }
    }
    g.parseval_weight() * s
}

fn apply_shift(g: &Grid, hat: &mut [Complex64], q: [f64; 2]) {
    if q == [0.0, 0.0] {
        return;
    }
    let n = g.n();
    let e1: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, -g.k(i) * q[0]))
        .collect();
    let e2: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -g.k(j) * q[1]))
        .collect();
    for i in 0..n {
        for j in 0..n {
            hat[i * n + j] *= e1[i] * e2[j];
        }
    }
}

pub(crate) fn project_in_place(g: &Grid, hat: &mut [Vec<Complex64>; 2]) {
    let n = g.n();
    for i in 0..n {
        for j in 0..n {
            let idx = i * n + j;
            if g.is_excluded(i, j) {
                hat[0][idx] = ZERO;
                hat[1][idx] = ZERO;
                continue;
            }
            let (k1, k2) = (g.k(i), g.k(j));
            let kk = k1 * k1 + k2 * k2;
            let s = (k1 * hat[0][idx] + k2 * hat[1][idx]) / kk;
            hat[0][idx] -= s * k1;
            hat[1][idx] -= s * k2;
        }
    }
}
