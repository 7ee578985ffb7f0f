//! Two ways of evaluating ∫ f(k) dk/(2π)^2 over the wavevector plane.
//!
//! [`LatticeSum`] sums over the modes of a periodic grid, which is exactly
//! what the Parseval inner products of grid fields produce. [`PolarQuadrature`]
//! integrates over the whole plane with composite Gauss-Legendre in |k| and
//! the trapezoid rule in angle, refining until the result settles.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::spectral::Grid;

pub trait FourierMeasure: Sync {
    /// ∫ f(k1, k2) dk/(2π)^2 for a vector-valued integrand.
    fn integrate<const K: usize, F>(&self, f: F) -> [f64; K]
    where
        F: Fn(f64, f64) -> [f64; K] + Sync;
}

/// Sum over the modes of a grid with weight 1/L^2, skipping k = 0 and the
/// Nyquist lines (the modes the solenoidal projector discards).
#[derive(Clone, Debug)]
pub struct LatticeSum {
    grid: Grid,
}

impl LatticeSum {
    pub fn new(grid: &Grid) -> Self {
        LatticeSum { grid: grid.clone() }
    }
}

impl FourierMeasure for LatticeSum {
    fn integrate<const K: usize, F>(&self, f: F) -> [f64; K]
    where
        F: Fn(f64, f64) -> [f64; K] + Sync,
    {
        let g = &self.grid;
        let n = g.n();
        let rows: Vec<[f64; K]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = [0.0; K];
                for j in 0..n {
                    if g.is_excluded(i, j) {
                        continue;
                    }
                    let v = f(g.k(i), g.k(j));
                    for c in 0..K {
                        acc[c] += v[c];
                    }
                }
                acc
            })
            .collect();
        let w = g.parseval_weight();
        let mut out = [0.0; K];
        for r in rows {
            for c in 0..K {
                out[c] += r[c];
            }
        }
        out.map(|x| x * w)
    }
}

/// Adaptive polar quadrature over the disc |k| <= kappa_max.
#[derive(Clone, Debug)]
pub struct PolarQuadrature {
    pub kappa_max: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_levels: usize,
}

impl PolarQuadrature {
    pub fn new(kappa_max: f64) -> Self {
        PolarQuadrature {
            kappa_max,
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_levels: 6,
        }
    }

    fn level<const K: usize, F>(&self, f: &F, panels: usize, n_theta: usize) -> [f64; K]
    where
        F: Fn(f64, f64) -> [f64; K] + Sync,
    {
        let (nodes, weights) = gauss_legendre_16();
        let h = self.kappa_max / panels as f64;
        let dtheta = 2.0 * PI / n_theta as f64;
        let trig: Vec<(f64, f64)> = (0..n_theta)
            .map(|t| ((t as f64 + 0.5) * dtheta).sin_cos())
            .map(|(s, c)| (c, s))
            .collect();
        let parts: Vec<[f64; K]> = (0..panels)
            .into_par_iter()
            .map(|p| {
                let a = p as f64 * h;
                let mut acc = [0.0; K];
                for (x, w) in nodes.iter().zip(weights) {
                    let kappa = a + 0.5 * h * (x + 1.0);
                    let wr = 0.5 * h * w * kappa * dtheta;
                    for &(c, s) in &trig {
                        let v = f(kappa * c, kappa * s);
                        for i in 0..K {
                            acc[i] += wr * v[i];
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = [0.0; K];
        for r in parts {
            for i in 0..K {
                out[i] += r[i];
            }
        }
        out.map(|x| x / (4.0 * PI * PI))
    }
}

impl FourierMeasure for PolarQuadrature {
    fn integrate<const K: usize, F>(&self, f: F) -> [f64; K]
    where
        F: Fn(f64, f64) -> [f64; K] + Sync,
    {
        let (mut panels, mut n_theta) = (8, 64);
        let mut prev = self.level(&f, panels, n_theta);
        for _ in 0..self.max_levels {
            panels *= 2;
            n_theta *= 2;
            let cur = self.level(&f, panels, n_theta);
            let done = cur
                .iter()
                .zip(&prev)
                .all(|(c, p)| (c - p).abs() <= self.abs_tol.max(self.rel_tol * c.abs()));
            prev = cur;
            if done {
                break;
            }
        }
        prev
    }
}

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static RULE: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 16;
        let mut x = [0.0; 16];
        let mut w = [0.0; 16];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                let (p, dp) = legendre(n, z);
                let dz = p / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, z);
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}
