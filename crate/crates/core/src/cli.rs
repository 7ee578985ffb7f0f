//! The `mlsim` command line: one subcommand per experiment, each writing
//! CSV/JSON outputs, a report and a manifest into the output directory.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{
    gradient_check, jacobian_entries, jacobian_vs_finite_difference, lower_bound_check,
    perturbed_state, relative_drift, relativistic_convexity, stability_experiment,
    ConservationMonitor, JacobianTable, Perturbation, StabilityConfig,
};
use crate::dynamics::{
    comoving_transform, evolve, to_lab, LabState, LabSystem, ReducedState, ReducedSystem,
};
use crate::error::{Error, Result};
use crate::io::{
    unix_now, write_csv, write_snapshot, AtlasRow, Backend, Check, ExperimentConfig, GradientRow,
    JacobianRow, LowerBoundRow, Report, RunManifest, StabilityRow, TrajectoryRow,
};
use crate::quadrature::FourierMeasure;
use crate::soliton::{
    build_soliton, solve_soliton_params, MomentumMap, NewtonOptions, SolitonParams, SolitonRecord,
};
use crate::spectral::{ScalarField, SpectralVectorField};

#[derive(Debug, Parser)]
#[command(
    name = "mlsim",
    version,
    about = "Pseudospectral Maxwell-Lorentz solver for a spinning extended charge"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configuration's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Build one soliton and check that it is stationary.
    Soliton,
    /// Evolve a perturbed soliton in the comoving frame.
    Simulate,
    /// Evolve a perturbed soliton in the lab frame.
    SimulateLab,
    /// Orbital stability experiment over the configured perturbation sizes.
    Stability,
    /// Sample the energy lower bound around a soliton.
    Lowerbound,
    /// Momentum-map Jacobian over a (v, ω) sweep.
    Jacobian,
    /// Variational derivatives against finite differences.
    Gradcheck,
    /// Soliton momenta and norms over a (v, ω) sweep.
    Atlas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Soliton => "soliton",
            Command::Simulate => "simulate",
            Command::SimulateLab => "simulate-lab",
            Command::Stability => "stability",
            Command::Lowerbound => "lowerbound",
            Command::Jacobian => "jacobian",
            Command::Gradcheck => "gradcheck",
            Command::Atlas => "atlas",
        }
    }
}

/// Report plus the data files an experiment wrote.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Parses arguments, runs the experiment and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let mut cfg = match &cli.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_CONFIG;
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    match execute(cli.command, &cfg, &cli.out) {
        Ok(outcome) => {
            if !cli.quiet {
                summarize(&outcome.report);
            }
            if outcome.report.passed() {
                EXIT_OK
            } else {
                for c in outcome.report.failures() {
                    eprintln!(
                        "check failed: {} (value {:e}, threshold {:e})",
                        c.name, c.value, c.threshold
                    );
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e @ (Error::Config { .. } | Error::ConfigList(_))) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

/// Caps the rayon pool at MLSIM_THREADS workers when the variable is set.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("MLSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::config(
            "MLSIM_THREADS",
            format!("expected a positive integer, got {v:?}"),
        )
    })?;
    // A second initialisation in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn summarize(r: &Report) {
    println!(
        "{}: {}",
        r.experiment,
        if r.passed() {
            "all checks passed"
        } else {
            "CHECKS FAILED"
        }
    );
    for c in &r.checks {
        println!(
            "  {:<5} {:<32} {:>12.4e}  (threshold {:.1e})",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    for (k, v) in &r.constants {
        println!("  {k} = {v:.6e}");
    }
}

/// Runs a validated configuration and writes report.json and
/// manifest.json next to the experiment's data files.
pub fn execute(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let start = unix_now();
    std::fs::create_dir_all(out)?;
    let mut outcome = run(cmd, cfg, out)?;
    let report_path = out.join("report.json");
    outcome.report.write(&report_path)?;
    outcome.files.push(report_path);
    RunManifest::new(cmd.name(), cfg, start, &outcome.files)?.write(&out.join("manifest.json"))?;
    Ok(outcome)
}

/// Runs one experiment and writes its data files, without the report and
/// manifest.
pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate()?;
    match cmd {
        Command::Soliton => run_soliton(cfg, out),
        Command::Simulate => run_simulate(cfg, out),
        Command::SimulateLab => run_simulate_lab(cfg, out),
        Command::Stability => run_stability(cfg, out),
        Command::Lowerbound => run_lowerbound(cfg, out),
        Command::Jacobian => run_jacobian(cfg, out),
        Command::Gradcheck => run_gradcheck(cfg, out),
        Command::Atlas => run_atlas(cfg, out),
    }
}

/// Seed of the i-th member of a seeded family.
pub fn derived_seed(base: u64, i: u64) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

struct Setup {
    sys: ReducedSystem,
    lab: LabSystem,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    let grid = cfg.grid()?;
    let rho = cfg.density(&grid)?;
    let particle = cfg.particle()?;
    Ok(Setup {
        sys: ReducedSystem::new(&rho, particle),
        lab: LabSystem::new(&rho, particle),
    })
}

fn new_report(cmd: Command, cfg: &ExperimentConfig, seeds: Vec<u64>) -> Report {
    let params = serde_json::to_value(cfg).expect("config serializes");
    Report::new(
        cfg.experiment.as_deref().unwrap_or(cmd.name()),
        params,
        seeds,
    )
}

/// The configured soliton, found by Newton inversion when target momenta
/// are given.
fn configured_soliton(
    cfg: &ExperimentConfig,
    sys: &ReducedSystem,
    report: &mut Report,
) -> Result<SolitonRecord> {
    let params = match &cfg.momenta {
        Some(m) => {
            let map = MomentumMap::lattice(sys.density(), sys.particle());
            let r = solve_soliton_params(m.p, m.m, &map, NewtonOptions::default())?;
            report.constant("newton_iterations", r.iterations as f64);
            r.params
        }
        None => cfg.soliton_params()?,
    };
    build_soliton(params, sys.density(), sys.particle())
}

fn max_abs(f: &ScalarField) -> f64 {
    f.values().iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn field_components(a: &SpectralVectorField, pi: &SpectralVectorField) -> Vec<Vec<f64>> {
    let [a1, a2] = a.values();
    let [p1, p2] = pi.values();
    vec![a1, a2, p1, p2]
}

fn atlas_row(rec: &SolitonRecord, det: f64) -> AtlasRow {
    AtlasRow {
        v1: rec.params.v[0],
        v2: rec.params.v[1],
        omega: rec.params.omega,
        P1: rec.p[0],
        P2: rec.p[1],
        M: rec.m_ang,
        h1dot_A: rec.a.h1dot(),
        l2_Pi: rec.pi.l2(),
        jacobian_det: det,
    }
}

fn run_soliton(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, .. } = setup(cfg)?;
    let mut report = new_report(Command::Soliton, cfg, vec![]);
    let rec = configured_soliton(cfg, &sys, &mut report)?;
    let s = ReducedState::from_soliton(&rec);
    let r = sys.rhs(&s);
    let scale = rec.a.h1dot() + rec.pi.l2() + 1.0;
    let residual = r.da.h1dot() + r.dpi.l2();
    let (qd, pd) = sys.particle_velocities(&s);
    let mismatch =
        (qd[0] - rec.params.v[0]).hypot(qd[1] - rec.params.v[1]) + (pd - rec.params.omega).abs();
    report.check(Check::at_most("stationarity", residual / scale, 1e-8));
    report.check(Check::at_most("velocity_consistency", mismatch, 1e-8));
    let det = MomentumMap::lattice(sys.density(), sys.particle())
        .jacobian(rec.params)
        .det();
    report.check(Check::above("jacobian_det", det, 0.0));
    report.constant("v1", rec.params.v[0]);
    report.constant("v2", rec.params.v[1]);
    report.constant("omega", rec.params.omega);

    let csv = out.join("soliton.csv");
    write_csv(&csv, &[atlas_row(&rec, det)])?;
    let bin = out.join("soliton.bin");
    write_snapshot(&bin, sys.grid(), 0.0, &field_components(&rec.a, &rec.pi))?;
    Ok(Outcome {
        report,
        files: vec![csv, bin],
    })
}

/// The configured soliton plus a perturbation of size delta[0] that keeps
/// the particle velocities.
fn initial_state(
    cfg: &ExperimentConfig,
    sys: &ReducedSystem,
    report: &mut Report,
) -> Result<ReducedState> {
    let rec = configured_soliton(cfg, sys, report)?;
    let delta = cfg.perturbation.delta[0];
    let pert = if delta > 0.0 {
        Perturbation::generate(sys.grid(), cfg.seed, delta, cfg.perturbation.sigma_p)
    } else {
        Perturbation::zero(sys.grid())
    };
    Ok(perturbed_state(sys, &rec, &pert))
}

fn reduced_row(sys: &ReducedSystem, lab: &LabSystem, s: &ReducedState) -> TrajectoryRow {
    let (qd, pd) = sys.particle_velocities(s);
    TrajectoryRow {
        t: s.t,
        q1: s.q[0],
        q2: s.q[1],
        qdot1: qd[0],
        qdot2: qd[1],
        phi: s.phi,
        phidot: pd,
        H_reduced: sys.hamiltonian(s),
        E_lab: lab.energy(&to_lab(s)),
        P1: s.p[0],
        P2: s.p[1],
        M: s.m_ang,
        divA_max: max_abs(&s.a.divergence()),
        divPi_max: max_abs(&s.pi.divergence()),
    }
}

fn lab_row(sys: &ReducedSystem, lab: &LabSystem, s: &LabState) -> TrajectoryRow {
    let c = lab.couplings(s);
    let p = lab.linear_momentum(s);
    TrajectoryRow {
        t: s.t,
        q1: s.q[0],
        q2: s.q[1],
        qdot1: c.qdot[0],
        qdot2: c.qdot[1],
        phi: s.phi,
        phidot: c.phidot,
        H_reduced: sys.hamiltonian(&comoving_transform(lab, s)),
        E_lab: lab.energy(s),
        P1: p[0],
        P2: p[1],
        M: lab.angular_momentum(s),
        divA_max: max_abs(&s.a.divergence()),
        divPi_max: max_abs(&s.pi.divergence()),
    }
}

fn check_finite_rows(rows: &[TrajectoryRow]) -> Result<()> {
    match rows
        .iter()
        .find(|r| !(r.H_reduced.is_finite() && r.E_lab.is_finite() && r.q1.is_finite()))
    {
        Some(r) => Err(Error::NonFinite(format!("trajectory at t = {}", r.t))),
        None => Ok(()),
    }
}

fn run_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, lab } = setup(cfg)?;
    let mut report = new_report(Command::Simulate, cfg, vec![cfg.seed]);
    let s0 = initial_state(cfg, &sys, &mut report)?;
    let mut rows = Vec::new();
    let last = evolve(
        &sys,
        &s0,
        cfg.dt(),
        cfg.steps(),
        cfg.integrator.scheme,
        cfg.integrator.stride,
        |_, s| rows.push(reduced_row(&sys, &lab, s)),
    );
    check_finite_rows(&rows)?;
    let h: Vec<f64> = rows.iter().map(|r| r.H_reduced).collect();
    let drift = relative_drift(&h).unwrap_or(0.0);
    report.check(Check::at_most("hamiltonian_drift", drift, 1e-8));
    report.constant("hamiltonian", h[0]);

    let csv = out.join("trajectory.csv");
    write_csv(&csv, &rows)?;
    let bin = out.join("final.bin");
    write_snapshot(
        &bin,
        sys.grid(),
        last.t,
        &field_components(&last.a, &last.pi),
    )?;
    Ok(Outcome {
        report,
        files: vec![csv, bin],
    })
}

fn run_simulate_lab(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, lab } = setup(cfg)?;
    let mut report = new_report(Command::SimulateLab, cfg, vec![cfg.seed]);
    let l0 = to_lab(&initial_state(cfg, &sys, &mut report)?);
    let mut rows = Vec::new();
    let mut mon = ConservationMonitor::default();
    let last = evolve(
        &lab,
        &l0,
        cfg.dt(),
        cfg.steps(),
        cfg.integrator.scheme,
        cfg.integrator.stride,
        |_, s| {
            let r = lab_row(&sys, &lab, s);
            mon.record_lab(r.t, r.E_lab, [r.P1, r.P2], r.M);
            rows.push(r);
        },
    );
    check_finite_rows(&rows)?;
    let d = mon.drift();
    report.check(Check::at_most(
        "energy_drift",
        d.energy.unwrap_or(0.0),
        1e-7,
    ));
    report.check(Check::at_most(
        "momentum_drift",
        d.momentum.unwrap_or(0.0),
        1e-7,
    ));
    report.check(Check::at_most(
        "angular_momentum_drift",
        d.angular_momentum.unwrap_or(0.0),
        1e-7,
    ));
    report.constant("energy", rows[0].E_lab);

    let csv = out.join("trajectory.csv");
    write_csv(&csv, &rows)?;
    let bin = out.join("final.bin");
    write_snapshot(
        &bin,
        lab.grid(),
        last.t,
        &field_components(&last.a, &last.pi),
    )?;
    Ok(Outcome {
        report,
        files: vec![csv, bin],
    })
}

fn run_stability(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, .. } = setup(cfg)?;
    let mut report = new_report(Command::Stability, cfg, vec![cfg.seed]);
    let params = configured_soliton(cfg, &sys, &mut report)?.params;
    let mut rows = Vec::new();
    let mut sups = Vec::new();
    let mut worst_constant = 0.0f64;
    for &delta in &cfg.perturbation.delta {
        let r = stability_experiment(
            &sys,
            &StabilityConfig {
                params,
                delta,
                horizon: cfg.integrator.horizon,
                dt: cfg.dt(),
                seed: cfg.seed,
                stride: cfg.integrator.stride,
                scheme: cfg.integrator.scheme,
                sigma_p: cfg.perturbation.sigma_p,
            },
        )?;
        for ((&t, &d0), &d1) in r.times.iter().zip(&r.dist_original).zip(&r.dist_matched) {
            rows.push(StabilityRow {
                delta,
                t,
                d_original: d0,
                d_matched: d1,
            });
        }
        let tag = format!("{delta:e}");
        report.constant(&format!("sup_original[{tag}]"), r.sup_original);
        report.constant(&format!("sup_matched[{tag}]"), r.sup_matched);
        report.constant(&format!("constant[{tag}]"), r.constant);
        if delta == 0.0 {
            report.check(Check::at_most(
                "zero_perturbation_distance",
                r.sup_original,
                1e-8,
            ));
        }
        worst_constant = worst_constant.max(r.constant);
        sups.push((delta, r.sup_original));
    }
    report.check(Check::at_most(
        "matched_distance_constant",
        worst_constant,
        20.0,
    ));
    // Smaller δ must not give a larger sup distance, up to a factor 1.1.
    sups.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut ratio = 0.0f64;
    for w in sups.windows(2) {
        if w[0].1 > 0.0 {
            ratio = ratio.max(w[1].1 / w[0].1);
        }
    }
    if sups.len() > 1 {
        report.check(Check::at_most("sup_distance_monotone_ratio", ratio, 1.1));
    }
    let csv = out.join("stability.csv");
    write_csv(&csv, &rows)?;
    Ok(Outcome {
        report,
        files: vec![csv],
    })
}

fn run_lowerbound(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, .. } = setup(cfg)?;
    let pc = &cfg.perturbation;
    let seeds: Vec<u64> = (0..pc.samples as u64)
        .map(|i| derived_seed(cfg.seed, i))
        .collect();
    let mut report = new_report(Command::Lowerbound, cfg, vec![cfg.seed]);
    let rec = configured_soliton(cfg, &sys, &mut report)?;
    let rows: Vec<LowerBoundRow> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let amplitude = pc.amplitudes[i % pc.amplitudes.len()];
            let pert = Perturbation::generate(sys.grid(), seed, amplitude, pc.sigma_p);
            let s = lower_bound_check(&sys, &rec, &pert);
            LowerBoundRow {
                sample: i,
                seed,
                amplitude,
                delta_H: s.delta_h,
                bound: s.bound,
                identity_rel_error: s.identity_rel_error,
                pass: s.pass,
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| !r.pass).count();
    let identity = rows.iter().fold(0.0f64, |m, r| m.max(r.identity_rel_error));
    report.check(Check::at_most(
        "lower_bound_violations",
        violations as f64,
        0.0,
    ));
    report.check(Check::at_most("rearrangement_identity", identity, 1e-9));
    report.constant("samples", rows.len() as f64);
    let csv = out.join("lowerbound.csv");
    write_csv(&csv, &rows)?;
    Ok(Outcome {
        report,
        files: vec![csv],
    })
}

fn jacobian_row(t: &JacobianTable, fd_error: f64) -> JacobianRow {
    let m = t.partials;
    JacobianRow {
        v: t.v,
        omega: t.omega,
        dP1_dv1: m[0][0],
        dP1_dv2: m[0][1],
        dP1_domega: m[0][2],
        dP2_dv1: m[1][0],
        dP2_dv2: m[1][1],
        dP2_domega: m[1][2],
        dM_dv1: m[2][0],
        dM_dv2: m[2][1],
        dM_domega: m[2][2],
        det: t.det,
        det_reduced: t.det_reduced,
        P1_plus: t.plus[0],
        P2_plus: t.plus[1],
        P1_minus: t.minus[0],
        P2_minus: t.minus[1],
        cauchy_schwarz: t.simplified.cauchy_schwarz_holds,
        fd_max_rel_error: fd_error,
    }
}

/// Largest relative disagreement between the general Jacobian entries and
/// the simplified forms at v = (|v|, 0).
pub fn simplified_mismatch(t: &JacobianTable) -> f64 {
    let s = &t.simplified;
    let m = t.partials;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let abs = |a: f64, b: f64| (a - b).abs() / scale;
    [
        rel(s.p1_plus, t.plus[0]),
        rel(s.p2_plus, t.plus[1]),
        abs(s.p_minus[0], t.minus[0]),
        abs(s.p_minus[1], t.minus[1]),
        abs(s.p1_omega, m[0][2]),
        rel(s.minor, m[0][0] * m[2][2] - m[2][0] * m[0][2]),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn sweep_jacobian<Q: FourierMeasure + Sync>(
    cfg: &ExperimentConfig,
    map: &MomentumMap<'_, Q>,
) -> Result<Vec<(JacobianTable, f64)>> {
    let points: Vec<(f64, f64)> = cfg
        .sweep
        .v
        .iter()
        .flat_map(|&v| cfg.sweep.omega.iter().map(move |&w| (v, w)))
        .collect();
    points
        .par_iter()
        .map(|&(v, w)| {
            let t = jacobian_entries(v, w, map)?;
            let fd =
                jacobian_vs_finite_difference(SolitonParams::new([v, 0.0], w)?, map, cfg.sweep.h)?;
            Ok((t, fd.max_rel_error))
        })
        .collect()
}

fn run_jacobian(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let grid = cfg.grid()?;
    let rho = cfg.density(&grid)?;
    let particle = cfg.particle()?;
    let tables = match cfg.sweep.backend {
        Backend::Polar => sweep_jacobian(cfg, &MomentumMap::polar(&rho, particle))?,
        Backend::Lattice => sweep_jacobian(cfg, &MomentumMap::lattice(&rho, particle))?,
    };
    let mut report = new_report(Command::Jacobian, cfg, vec![]);
    let min_det = tables
        .iter()
        .fold(f64::INFINITY, |m, (t, _)| m.min(t.det.min(t.det_reduced)));
    let zeros = tables.iter().fold(0.0f64, |m, (t, _)| {
        let p = t.partials;
        m.max(p[0][1].abs())
            .max(p[1][0].abs())
            .max(p[1][2].abs())
            .max(p[2][1].abs())
    });
    let fd = tables.iter().fold(0.0f64, |m, (_, e)| m.max(*e));
    let cs = tables
        .iter()
        .filter(|(t, _)| !t.simplified.cauchy_schwarz_holds)
        .count();
    let simplified = tables
        .iter()
        .fold(0.0f64, |m, (t, _)| m.max(simplified_mismatch(t)));
    report.check(Check::above("min_determinant", min_det, 0.0));
    report.check(Check::at_most("structural_zeros", zeros, 1e-10));
    report.check(Check::at_most("finite_difference_rel_error", fd, 1e-4));
    report.check(Check::at_most("cauchy_schwarz_violations", cs as f64, 0.0));
    report.check(Check::at_most(
        "simplified_forms_mismatch",
        simplified,
        1e-8,
    ));
    let rows: Vec<JacobianRow> = tables.iter().map(|(t, e)| jacobian_row(t, *e)).collect();
    let csv = out.join("jacobian.csv");
    write_csv(&csv, &rows)?;
    Ok(Outcome {
        report,
        files: vec![csv],
    })
}

fn run_gradcheck(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, .. } = setup(cfg)?;
    let gc = &cfg.gradcheck;
    let mut report = new_report(Command::Gradcheck, cfg, vec![cfg.seed]);
    let rec = configured_soliton(cfg, &sys, &mut report)?;
    // Away from the soliton, where the derivatives do not vanish.
    let mut state = ReducedState::from_soliton(&rec);
    if gc.offset > 0.0 {
        let pert =
            Perturbation::generate(sys.grid(), cfg.seed, gc.offset, cfg.perturbation.sigma_p);
        state.a.axpy(1.0, &pert.da);
        state.pi.axpy(1.0, &pert.dpi);
    }
    let seeds: Vec<u64> = (1..=gc.directions as u64)
        .map(|i| derived_seed(cfg.seed, i))
        .collect();
    let samples = gradient_check(&sys, &state, seeds, cfg.perturbation.sigma_p, &gc.steps);
    let rows: Vec<GradientRow> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| GradientRow {
            direction: i,
            seed: s.seed,
            analytic: s.analytic,
            fd: s.fd,
            step: s.step,
            rel_error: s.rel_error,
        })
        .collect();
    let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.rel_error));
    report.check(Check::at_most("gradient_rel_error", worst, 1e-6));
    if gc.convexity_samples > 0 {
        let c = relativistic_convexity(cfg.particle.m, gc.convexity_samples, cfg.seed);
        report.check(Check::at_most(
            "relativistic_convexity_violations",
            c.violations as f64,
            0.0,
        ));
        report.constant("convexity_min_value", c.min_value);
    }
    let csv = out.join("gradcheck.csv");
    write_csv(&csv, &rows)?;
    Ok(Outcome {
        report,
        files: vec![csv],
    })
}

fn run_atlas(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let Setup { sys, .. } = setup(cfg)?;
    let map = MomentumMap::lattice(sys.density(), sys.particle());
    let points: Vec<(f64, f64)> = cfg
        .sweep
        .v
        .iter()
        .flat_map(|&v| cfg.sweep.omega.iter().map(move |&w| (v, w)))
        .collect();
    let rows: Vec<AtlasRow> = points
        .par_iter()
        .map(|&(v, w)| {
            let params = SolitonParams::new([v, 0.0], w)?;
            let rec = build_soliton(params, sys.density(), sys.particle())?;
            Ok(atlas_row(&rec, map.jacobian(params).det()))
        })
        .collect::<Result<_>>()?;
    let mut report = new_report(Command::Atlas, cfg, vec![]);
    let min_det = rows
        .iter()
        .fold(f64::INFINITY, |m, r| m.min(r.jacobian_det));
    report.check(Check::above("min_determinant", min_det, 0.0));
    // The grid momenta must agree with the lattice map used by Newton.
    let gap = points
        .iter()
        .zip(&rows)
        .map(|(&(v, w), r)| {
            let (p, m) = map.momenta(SolitonParams::new([v, 0.0], w).expect("validated"));
            let scale = 1.0 + p[0].abs() + p[1].abs() + m.abs();
            ((r.P1 - p[0]).abs() + (r.P2 - p[1]).abs() + (r.M - m).abs()) / scale
        })
        .fold(0.0f64, f64::max);
    report.check(Check::at_most("field_vs_lattice_momenta", gap, 1e-10));
    let csv = out.join("atlas.csv");
    write_csv(&csv, &rows)?;
    Ok(Outcome {
        report,
        files: vec![csv],
    })
}
