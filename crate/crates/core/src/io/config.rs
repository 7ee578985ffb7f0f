use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Scheme, CFL};
use crate::error::{Error, Result};
use crate::particle::{Kinematics, Particle};
use crate::soliton::SolitonParams;
use crate::spectral::{ChargeDensity, DensityShape, Grid};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub len: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { len: 32.0, n: 128 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RhoConfig {
    pub shape: DensityShape,
    pub sigma: f64,
    pub amplitude: f64,
}

impl Default for RhoConfig {
    fn default() -> Self {
        RhoConfig {
            shape: DensityShape::LaplacianGaussian,
            sigma: 1.0,
            amplitude: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ParticleConfig {
    pub kind: Kinematics,
    pub m: f64,
    #[serde(rename = "I")]
    pub inertia: f64,
}

impl Default for ParticleConfig {
    fn default() -> Self {
        ParticleConfig {
            kind: Kinematics::Nonrelativistic,
            m: 1.0,
            inertia: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonConfig {
    pub v: [f64; 2],
    pub omega: f64,
}

impl Default for SolitonConfig {
    fn default() -> Self {
        SolitonConfig {
            v: [0.0, 0.0],
            omega: 0.0,
        }
    }
}

/// Target momenta; the soliton is then found by Newton inversion.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MomentaConfig {
    #[serde(rename = "P")]
    pub p: [f64; 2],
    #[serde(rename = "M")]
    pub m: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Defaults to 0.1 dx.
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            scheme: Scheme::Rk4,
            dt: None,
            horizon: 10.0,
            stride: 10,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbationConfig {
    /// Perturbation sizes. `simulate` uses the first, `stability` all.
    pub delta: Vec<f64>,
    pub sigma_p: f64,
    /// Lower-bound samples per soliton, spread over `amplitudes`.
    pub samples: usize,
    pub amplitudes: Vec<f64>,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            delta: vec![1e-2, 1e-3, 1e-4],
            sigma_p: 1.0,
            samples: 1000,
            amplitudes: vec![1e-3, 1e-2, 1e-1, 1.0],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Adaptive polar quadrature of the continuum integrals.
    #[default]
    Polar,
    /// Sums over the simulation's wavenumber grid.
    Lattice,
}

/// Parameter sweep over v = (v, 0) and ω.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub v: Vec<f64>,
    pub omega: Vec<f64>,
    pub backend: Backend,
    /// Finite-difference step for the Jacobian comparison.
    pub h: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            v: (0..10).map(|i| i as f64 / 10.0).collect(),
            omega: vec![0.0, 1.0, 5.0],
            backend: Backend::Polar,
            h: 1e-4,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GradcheckConfig {
    pub directions: usize,
    pub steps: Vec<f64>,
    /// Size of the perturbation added to the soliton before checking.
    pub offset: f64,
    pub convexity_samples: usize,
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        GradcheckConfig {
            directions: 20,
            steps: vec![1e-2, 1e-3, 1e-4],
            offset: 0.1,
            convexity_samples: 10_000,
        }
    }
}

/// Complete experiment description. Every section is optional in the file.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    pub seed: u64,
    pub grid: GridConfig,
    pub rho: RhoConfig,
    pub particle: ParticleConfig,
    pub soliton: SolitonConfig,
    pub momenta: Option<MomentaConfig>,
    pub integrator: IntegratorConfig,
    pub perturbation: PerturbationConfig,
    pub sweep: SweepConfig,
    pub gradcheck: GradcheckConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let path = e.span().map(|s| locate(text, s.start)).unwrap_or_default();
            Error::config(path, e.message())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Canonical TOML text of the resolved configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every precondition without heavy computation. All violations
    /// are reported together.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let mut bad = |path: &str, msg: String| errs.push(Error::config(path, msg));
        let g = &self.grid;
        if !(g.len.is_finite() && g.len > 0.0) {
            bad("grid.L", format!("must be positive, got {}", g.len));
        }
        if g.n < 16 || !g.n.is_power_of_two() {
            bad(
                "grid.N",
                format!("must be a power of two >= 16, got {}", g.n),
            );
        }
        let dx = g.len / g.n.max(1) as f64;
        let r = &self.rho;
        if !(r.sigma >= 4.0 * dx) {
            bad(
                "rho.sigma",
                format!(
                    "sigma = {} is under-resolved: need sigma >= 4 dx = {}",
                    r.sigma,
                    4.0 * dx
                ),
            );
        }
        if !(r.sigma <= g.len / 8.0) {
            bad(
                "rho.sigma",
                format!("sigma = {} exceeds L/8 = {}", r.sigma, g.len / 8.0),
            );
        }
        if !r.amplitude.is_finite() {
            bad("rho.amplitude", "must be finite".into());
        }
        let p = &self.particle;
        if !(p.m.is_finite() && p.m > 0.0) {
            bad("particle.m", format!("must be positive, got {}", p.m));
        }
        if !(p.inertia.is_finite() && p.inertia > 0.0) {
            bad("particle.I", format!("must be positive, got {}", p.inertia));
        }
        let s = &self.soliton;
        let speed = s.v[0].hypot(s.v[1]);
        if !(speed < 1.0) {
            bad(
                "soliton.v",
                format!("v outside Σ: |v| = {speed} must be < 1"),
            );
        }
        if !s.omega.is_finite() {
            bad("soliton.omega", "must be finite".into());
        }
        if let Some(m) = &self.momenta {
            if !(m.p.iter().all(|x| x.is_finite()) && m.m.is_finite()) {
                bad("momenta", "P and M must be finite".into());
            }
        }
        let it = &self.integrator;
        let dt = it.dt.unwrap_or(0.1 * dx);
        if !(dt > 0.0 && dt <= CFL * dx) {
            bad(
                "integrator.dt",
                format!(
                    "dt = {dt} violates the CFL bound dt <= {CFL} dx = {}",
                    CFL * dx
                ),
            );
        }
        if !(it.horizon > 0.0 && it.horizon <= g.len / 2.0) {
            bad(
                "integrator.T",
                format!("T = {} must lie in (0, L/2 = {}]", it.horizon, g.len / 2.0),
            );
        }
        if it.stride == 0 {
            bad("integrator.stride", "must be at least 1".into());
        }
        let pt = &self.perturbation;
        if pt.delta.is_empty() || pt.delta.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            bad(
                "perturbation.delta",
                "must be a nonempty list of nonnegative sizes".into(),
            );
        }
        if !(pt.sigma_p.is_finite() && pt.sigma_p > 0.0) {
            bad("perturbation.sigma_p", "must be positive".into());
        }
        if pt.amplitudes.is_empty() || pt.amplitudes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            bad(
                "perturbation.amplitudes",
                "must be a nonempty list of positive amplitudes".into(),
            );
        }
        let sw = &self.sweep;
        if sw.v.is_empty() || sw.v.iter().any(|v| !(0.0..1.0).contains(v)) {
            bad(
                "sweep.v",
                "v outside Σ: sweep speeds must lie in [0, 1)".into(),
            );
        }
        if sw.omega.is_empty() || sw.omega.iter().any(|w| !w.is_finite()) {
            bad(
                "sweep.omega",
                "must be a nonempty list of finite values".into(),
            );
        }
        if !(sw.h > 0.0 && sw.h < 1e-1) {
            bad(
                "sweep.h",
                format!("finite-difference step must lie in (0, 0.1), got {}", sw.h),
            );
        }
        if let Some(&vmax) = sw.v.iter().max_by(|a, b| a.total_cmp(b)) {
            if vmax + sw.h >= 1.0 {
                bad("sweep.h", "v + h leaves Σ".into());
            }
        }
        let gc = &self.gradcheck;
        if gc.steps.is_empty() || gc.steps.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            bad(
                "gradcheck.steps",
                "must be a nonempty list of positive steps".into(),
            );
        }
        if !(gc.offset.is_finite() && gc.offset >= 0.0) {
            bad("gradcheck.offset", "must be nonnegative".into());
        }
        match errs.len() {
            0 => Ok(()),
            1 => Err(errs.pop().unwrap()),
            _ => Err(Error::ConfigList(errs)),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.len, self.grid.n)
    }

    pub fn density(&self, grid: &Grid) -> Result<ChargeDensity> {
        ChargeDensity::new(self.rho.shape, self.rho.sigma, self.rho.amplitude, grid)
    }

    pub fn particle(&self) -> Result<Particle> {
        Particle::new(self.particle.kind, self.particle.m, self.particle.inertia)
    }

    pub fn soliton_params(&self) -> Result<SolitonParams> {
        SolitonParams::new(self.soliton.v, self.soliton.omega)
    }

    pub fn dt(&self) -> f64 {
        self.integrator
            .dt
            .unwrap_or(0.1 * self.grid.len / self.grid.n as f64)
    }

    pub fn steps(&self) -> usize {
        (self.integrator.horizon / self.dt()).round() as usize
    }
}

/// Dotted key path of the table entry enclosing a byte offset, found by
/// scanning the TOML text for the last section header and key before it.
fn locate(text: &str, offset: usize) -> String {
    let mut section = String::new();
    let mut key = String::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        if pos > offset {
            break;
        }
        let t = line.trim();
        if t.starts_with('[') {
            section = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = t.split_once('=') {
            key = k.trim().to_string();
        }
        pos += line.len();
    }
    match (section.is_empty(), key.is_empty()) {
        (true, _) => key,
        (false, true) => section,
        (false, false) => format!("{section}.{key}"),
    }
}
