use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralVectorField};

/// Largest dt/dx accepted by [`check_cfl`].
pub const CFL: f64 = 0.5;

/// A first-order system that can be stepped in time.
pub trait Flow {
    type State: Clone;
    type Rate;

    /// Full right-hand side.
    fn rate(&self, s: &Self::State) -> Self::Rate;
    /// Right-hand side without the free wave operator (A, Π) -> (Π, ΔA).
    fn coupling_rate(&self, s: &Self::State) -> Self::Rate;
    /// s + h r, with time advanced by h.
    fn displaced(&self, s: &Self::State, r: &Self::Rate, h: f64) -> Self::State;
    /// Σ w_i r_i.
    fn combine(&self, rates: [&Self::Rate; 4], w: [f64; 4]) -> Self::Rate;
    /// Exact free wave evolution of the fields over time h. Time is not advanced.
    fn free_flow(&self, s: &Self::State, h: f64) -> Self::State;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical fourth-order Runge-Kutta on the full right side.
    #[default]
    Rk4,
    /// Strang splitting: exact half-steps of the free wave equation around
    /// an RK4 step of the coupling terms.
    SplitStep,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Rk4 => "rk4",
            Scheme::SplitStep => "split-step",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Scheme::Rk4),
            "split-step" => Ok(Scheme::SplitStep),
            _ => Err(Error::config(
                "integrator.scheme",
                format!("unknown scheme {s:?}"),
            )),
        }
    }
}

/// Rejects time steps above CFL * dx.
pub fn check_cfl(grid: &Grid, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::config(
            "integrator.dt",
            format!("must be positive, got {dt}"),
        ));
    }
    if dt > CFL * grid.dx() {
        return Err(Error::config(
            "integrator.dt",
            format!(
                "dt = {dt} exceeds the CFL bound {CFL} * dx = {}",
                CFL * grid.dx()
            ),
        ));
    }
    Ok(())
}

fn rk4_with<F: Flow>(
    flow: &F,
    s: &F::State,
    h: f64,
    rate: impl Fn(&F::State) -> F::Rate,
) -> F::State {
    let k1 = rate(s);
    let k2 = rate(&flow.displaced(s, &k1, 0.5 * h));
    let k3 = rate(&flow.displaced(s, &k2, 0.5 * h));
    let k4 = rate(&flow.displaced(s, &k3, h));
    let k = flow.combine(
        [&k1, &k2, &k3, &k4],
        [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
    );
    flow.displaced(s, &k, h)
}

/// One time step of size h.
pub fn step<F: Flow>(flow: &F, s: &F::State, h: f64, scheme: Scheme) -> F::State {
    match scheme {
        Scheme::Rk4 => rk4_with(flow, s, h, |x| flow.rate(x)),
        Scheme::SplitStep => {
            let half = flow.free_flow(s, 0.5 * h);
            let mid = rk4_with(flow, &half, h, |x| flow.coupling_rate(x));
            flow.free_flow(&mid, 0.5 * h)
        }
    }
}

/// Takes `steps` steps, calling `observe(step_index, state)` on the initial
/// state and after every `stride`-th step.
pub fn evolve<F: Flow>(
    flow: &F,
    s0: &F::State,
    h: f64,
    steps: usize,
    scheme: Scheme,
    stride: usize,
    mut observe: impl FnMut(usize, &F::State),
) -> F::State {
    let stride = stride.max(1);
    let mut s = s0.clone();
    observe(0, &s);
    for n in 1..=steps {
        s = step(flow, &s, h, scheme);
        if n % stride == 0 || n == steps {
            observe(n, &s);
        }
    }
    s
}

/// Exact solution of A' = Π, Π' = ΔA over time h, mode by mode.
pub fn wave_propagate(
    a: &SpectralVectorField,
    pi: &SpectralVectorField,
    h: f64,
) -> (SpectralVectorField, SpectralVectorField) {
    let g = a.grid().clone();
    let n = g.n();
    let mut na = a.clone();
    let mut npi = pi.clone();
    {
        let ha = na.hats_mut();
        let hp = npi.hats_mut();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                let kap = g.kd(i).hypot(g.kd(j));
                let (c, s_over_k, ks) = if kap == 0.0 {
                    (1.0, h, 0.0)
                } else {
                    let (s, c) = (kap * h).sin_cos();
                    (c, s / kap, kap * s)
                };
                for comp in 0..2 {
                    let (x, y) = (ha[comp][idx], hp[comp][idx]);
                    ha[comp][idx] = x * c + y * s_over_k;
                    hp[comp][idx] = -x * ks + y * c;
                }
            }
        }
    }
    let sol = a.is_solenoidal() && pi.is_solenoidal();
    na.set_solenoidal(sol);
    npi.set_solenoidal(sol);
    (na, npi)
}
