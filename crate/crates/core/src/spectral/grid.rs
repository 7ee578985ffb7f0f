use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on the box [-L/2, L/2)^2.
///
/// Sample `j` along an axis sits at the wrapped coordinate `j*dx` for
/// `j < N/2` and `(j-N)*dx` otherwise, so the origin is index 0 and the
/// discrete transform needs no phase correction. Storage is row-major with
/// the first index running along x1.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    len: f64,
    n: usize,
    dx: f64,
    coords: Vec<f64>,
    k: Vec<f64>,
    kd: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("L", &self.len())
            .field("N", &self.n())
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.len() == other.len())
    }
}

impl Grid {
    pub fn new(len: f64, n: usize) -> Result<Self> {
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::config(
                "grid.L",
                format!("must be positive and finite, got {len}"),
            ));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::config(
                "grid.N",
                format!("must be a power of two and at least 16, got {n}"),
            ));
        }
        let dx = len / n as f64;
        let half = n / 2;
        let signed = |j: usize| {
            if j < half {
                j as f64
            } else {
                j as f64 - n as f64
            }
        };
        let coords = (0..n).map(|j| signed(j) * dx).collect();
        let k: Vec<f64> = (0..n).map(|j| 2.0 * PI * signed(j) / len).collect();
        // Derivative symbols drop the unpaired Nyquist mode so that spectral
        // derivatives of real fields stay real.
        let kd = (0..n).map(|j| if j == half { 0.0 } else { k[j] }).collect();

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Grid {
            inner: Arc::new(GridInner {
                len,
                n,
                dx,
                coords,
                k,
                kd,
                fwd,
                inv,
            }),
        })
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.inner.len
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    /// Total number of grid points, N^2.
    #[inline]
    pub fn cells(&self) -> usize {
        self.inner.n * self.inner.n
    }

    /// Wrapped coordinate of sample `j` along either axis.
    #[inline]
    pub fn coord(&self, j: usize) -> f64 {
        self.inner.coords[j]
    }

    /// Wavenumber of mode `j` along either axis, in [-π/dx, π/dx).
    #[inline]
    pub fn k(&self, j: usize) -> f64 {
        self.inner.k[j]
    }

    /// Derivative symbol of mode `j`: equal to `k(j)` except at Nyquist.
    #[inline]
    pub fn kd(&self, j: usize) -> f64 {
        self.inner.kd[j]
    }

    #[inline]
    pub fn is_nyquist(&self, j: usize) -> bool {
        j == self.inner.n / 2
    }

    /// True for modes the solenoidal projector removes: k = 0 and the
    /// Nyquist row and column.
    #[inline]
    pub fn is_excluded(&self, i: usize, j: usize) -> bool {
        (i == 0 && j == 0) || self.is_nyquist(i) || self.is_nyquist(j)
    }

    /// Fourier weight for Parseval sums: <f,g> = weight * Re sum f^ conj(g^).
    #[inline]
    pub fn parseval_weight(&self) -> f64 {
        1.0 / (self.inner.len * self.inner.len)
    }

    /// Largest wavenumber magnitude resolved along an axis, π/dx.
    pub fn k_nyquist(&self) -> f64 {
        PI / self.inner.dx
    }

    /// Index of the mode conjugate to `j` along an axis.
    #[inline]
    pub fn conj_index(&self, j: usize) -> usize {
        (self.inner.n - j) % self.inner.n
    }

    /// In-place forward transform with continuum normalisation,
    /// f^(k) = dx^2 * sum f(x) e^{-ik.x}.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.fwd);
        let s = self.inner.dx * self.inner.dx;
        data.iter_mut().for_each(|c| *c *= s);
    }

    /// In-place inverse of [`Grid::forward`].
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inner.inv);
        let s = 1.0 / (self.inner.len * self.inner.len);
        data.iter_mut().for_each(|c| *c *= s);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.inner.n;
        assert_eq!(data.len(), n * n, "buffer does not match grid");
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(32.0, 8).is_err());
        assert!(Grid::new(32.0, 100).is_err());
        assert!(Grid::new(-1.0, 64).is_err());
        assert!(Grid::new(32.0, 64).is_ok());
    }

    #[test]
    fn wavenumbers_and_coords() {
        let g = Grid::new(32.0, 16).unwrap();
        assert_eq!(g.dx(), 2.0);
        assert_eq!(g.coord(0), 0.0);
        assert_eq!(g.coord(8), -16.0);
        assert_eq!(g.coord(15), -2.0);
        assert!((g.k(1) - 2.0 * PI / 32.0).abs() < 1e-15);
        assert!((g.k(8) + PI / 2.0).abs() < 1e-15);
        assert_eq!(g.kd(8), 0.0);
        assert_eq!(g.conj_index(0), 0);
        assert_eq!(g.conj_index(3), 13);
        assert_eq!(g.conj_index(8), 8);
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let g = Grid::new(10.0, 16).unwrap();
        let orig: Vec<Complex64> = (0..g.cells())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), 0.0))
            .collect();
        let mut d = orig.clone();
        g.forward(&mut d);
        g.inverse(&mut d);
        for (a, b) in orig.iter().zip(&d) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn single_mode_transform() {
        // e^{i k1 x1} with k1 = 2π/L lands in mode (1, 0) with weight L^2.
        let g = Grid::new(8.0, 16).unwrap();
        let n = g.n();
        let mut d = vec![Complex64::new(0.0, 0.0); g.cells()];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = Complex64::from_polar(1.0, g.k(1) * g.coord(i));
            }
        }
        g.forward(&mut d);
        assert!((d[n] - Complex64::new(64.0, 0.0)).norm() < 1e-12);
        let rest: f64 = d
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != n)
            .map(|(_, c)| c.norm())
            .sum();
        assert!(rest < 1e-10);
    }
}
