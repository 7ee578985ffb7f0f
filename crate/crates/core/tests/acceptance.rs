//! Acceptance criteria at desk scale (L = 32, N = 128, σ = 1, m = I = 1).
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

mod common;

use std::time::Instant;

use common::*;
use mlsim::analysis::{
    distance, gradient_check, jacobian_entries, jacobian_vs_finite_difference, lower_bound_check,
    perturbed_state, relative_drift, relativistic_convexity, stability_experiment,
    ConservationMonitor, Perturbation, StabilityConfig,
};
use mlsim::dynamics::{
    comoving_transform, evolve, step, to_lab, LabSystem, ReducedState, ReducedSystem, Scheme,
};
use mlsim::quadrature::FourierMeasure;
use mlsim::soliton::{build_soliton, MomentumMap, SolitonParams};
use mlsim::Particle;
use rayon::prelude::*;

const GRID_PARAMS: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.0, 1.0),
    (0.0, 5.0),
    (0.5, 0.0),
    (0.5, 1.0),
    (0.5, 5.0),
    (0.9, 0.0),
    (0.9, 1.0),
    (0.9, 5.0),
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Conservation along a perturbed trajectory in both frames.
fn criterion_1() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let sys = ReducedSystem::new(&rho, pt);
    let lab = LabSystem::new(&rho, pt);
    let rec = build_soliton(SolitonParams::new([0.3, 0.0], 1.0).unwrap(), &rho, pt).unwrap();
    let s0 = perturbed_state(&sys, &rec, &Perturbation::generate(&g, 1, 1e-2, 1.0));
    let dt = 0.1 * g.dx();
    let steps = (10.0 / dt).round() as usize;
    let mut h = Vec::new();
    evolve(&sys, &s0, dt, steps, Scheme::Rk4, 1, |_, s| {
        h.push(sys.hamiltonian(s))
    });
    let dh = relative_drift(&h).unwrap();
    let mut mon = ConservationMonitor::default();
    evolve(&lab, &to_lab(&s0), dt, steps, Scheme::Rk4, 1, |_, s| {
        mon.record_lab(
            s.t,
            lab.energy(s),
            lab.linear_momentum(s),
            lab.angular_momentum(s),
        )
    });
    let d = mon.drift();
    let (de, dp, dm) = (
        d.energy.unwrap(),
        d.momentum.unwrap(),
        d.angular_momentum.unwrap(),
    );
    outcome(
        dh <= 1e-8 && de <= 1e-7 && dp <= 1e-7 && dm <= 1e-7,
        format!(
            "H drift {dh:.2e} (<= 1e-8); lab drifts E {de:.2e}, P {dp:.2e}, M {dm:.2e} (<= 1e-7)"
        ),
    )
}

/// Solitons are stationary and stay put for 1000 steps.
fn criterion_2() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let sys = ReducedSystem::new(&rho, pt);
    let dt = 0.1 * g.dx();
    let results: Vec<(f64, f64, f64)> = GRID_PARAMS
        .par_iter()
        .map(|&(v, w)| {
            let rec = build_soliton(SolitonParams::new([v, 0.0], w).unwrap(), &rho, pt).unwrap();
            let s = ReducedState::from_soliton(&rec);
            let r = sys.rhs(&s);
            let scale = rec.a.h1dot() + rec.pi.l2() + 1.0;
            let (qd, pd) = sys.particle_velocities(&s);
            let vel = (qd[0] - v).hypot(qd[1]) + (pd - w).abs();
            let last = evolve(&sys, &s, dt, 1000, Scheme::Rk4, 1000, |_, _| {});
            let moved = distance(&sys, &last, &s).unwrap();
            ((r.da.h1dot() + r.dpi.l2()) / scale, vel, moved)
        })
        .collect();
    let res = results.iter().fold(0.0f64, |m, r| m.max(r.0));
    let vel = results.iter().fold(0.0f64, |m, r| m.max(r.1));
    let moved = results.iter().fold(0.0f64, |m, r| m.max(r.2));
    outcome(
        res <= 1e-8 && vel <= 1e-8 && moved <= 1e-6,
        format!("max residual/scale {res:.2e} (<= 1e-8), velocity mismatch {vel:.2e}, drift after 1000 steps {moved:.2e} (<= 1e-6)"),
    )
}

/// Lower bound and rearrangement identity over 1000 perturbations per
/// soliton, both particle kinds.
fn criterion_3() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let amplitudes = [1e-3, 1e-2, 1e-1, 1.0];
    let mut violations = 0usize;
    let mut identity = 0.0f64;
    let mut samples = 0usize;
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let sys = ReducedSystem::new(&rho, pt);
        for (k, &(v, w)) in GRID_PARAMS.iter().enumerate() {
            let rec = build_soliton(SolitonParams::new([v, 0.0], w).unwrap(), &rho, pt).unwrap();
            let batch: Vec<(bool, f64)> = (0..1000u64)
                .into_par_iter()
                .map(|i| {
                    let amp = amplitudes[i as usize % amplitudes.len()];
                    let pert = Perturbation::generate(&g, 1000 * k as u64 + i, amp, 1.0);
                    let s = lower_bound_check(&sys, &rec, &pert);
                    (s.pass, s.identity_rel_error)
                })
                .collect();
            samples += batch.len();
            violations += batch.iter().filter(|b| !b.0).count();
            identity = batch.iter().fold(identity, |m, b| m.max(b.1));
        }
    }
    outcome(
        violations == 0 && identity <= 1e-9,
        format!("{samples} samples, {violations} bound violations, max identity error {identity:.2e} (<= 1e-9)"),
    )
}

fn jacobian_sweep<Q: FourierMeasure + Sync>(map: &MomentumMap<'_, Q>) -> (f64, f64, f64) {
    let points: Vec<(f64, f64)> = (0..10)
        .flat_map(|i| [0.0, 1.0, 5.0].map(|w| (i as f64 / 10.0, w)))
        .collect();
    let r: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|&(v, w)| {
            let t = jacobian_entries(v, w, map).unwrap();
            let p = t.partials;
            let zeros = [p[0][1], p[1][0], p[1][2], p[2][1]]
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
            let fd =
                jacobian_vs_finite_difference(SolitonParams::new([v, 0.0], w).unwrap(), map, 1e-4)
                    .unwrap();
            (t.det.min(t.det_reduced), zeros, fd.max_rel_error)
        })
        .collect();
    (
        r.iter().fold(f64::INFINITY, |m, x| m.min(x.0)),
        r.iter().fold(0.0f64, |m, x| m.max(x.1)),
        r.iter().fold(0.0f64, |m, x| m.max(x.2)),
    )
}

/// Jacobian: finite differences, determinant sign and structural zeros.
fn criterion_4() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let (dp, zp, fp) = jacobian_sweep(&MomentumMap::polar(&rho, pt));
    let (dl, zl, fl) = jacobian_sweep(&MomentumMap::lattice(&rho, pt));
    outcome(
        dp > 0.0 && dl > 0.0 && zp <= 1e-10 && zl <= 1e-10 && fp <= 1e-4 && fl <= 1e-4,
        format!(
            "polar: min det {dp:.3e}, zeros {zp:.1e}, FD error {fp:.1e}; lattice: min det {dl:.3e}, zeros {zl:.1e}, FD error {fl:.1e}"
        ),
    )
}

/// Evolve-then-transform against transform-then-evolve.
fn criterion_5() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let sys = ReducedSystem::new(&rho, pt);
    let lab = LabSystem::new(&rho, pt);
    let rec = build_soliton(SolitonParams::new([0.3, 0.0], 1.0).unwrap(), &rho, pt).unwrap();
    let mut s0 = perturbed_state(&sys, &rec, &Perturbation::generate(&g, 2, 1e-2, 1.0));
    s0.q = [1.25, -0.5];
    let l0 = to_lab(&s0);
    let dt = 0.1 * g.dx();
    let steps = (1.0 / dt).round() as usize;
    let (mut lt, mut rt) = (l0.clone(), comoving_transform(&lab, &l0));
    for _ in 0..steps {
        lt = step(&lab, &lt, dt, Scheme::Rk4);
        rt = step(&sys, &rt, dt, Scheme::Rk4);
    }
    let d = distance(&sys, &comoving_transform(&lab, &lt), &rt).unwrap();
    outcome(d <= 1e-5, format!("distance at T = 1: {d:.2e} (<= 1e-5)"))
}

/// Orbital stability at v = 0, ω = 1.
fn criterion_6() -> Outcome {
    let g = desk_grid();
    let sys = ReducedSystem::new(&gaussian(&g), unit_particle());
    let mut sups = Vec::new();
    let mut worst = 0.0f64;
    for delta in [1e-2, 1e-3, 1e-4] {
        let r = stability_experiment(
            &sys,
            &StabilityConfig {
                params: SolitonParams::new([0.0, 0.0], 1.0).unwrap(),
                delta,
                horizon: 10.0,
                dt: 0.1 * g.dx(),
                seed: 1,
                stride: 10,
                scheme: Scheme::Rk4,
                sigma_p: 1.0,
            },
        )
        .unwrap();
        sups.push(r.sup_original);
        worst = worst.max(r.constant);
    }
    let finite = sups.iter().all(|s| s.is_finite());
    let monotone = sups.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    outcome(
        finite && monotone && worst <= 20.0,
        format!(
            "sup d to S_(v,ω): {:.3e}, {:.3e}, {:.3e}; measured constant C = {worst:.3} (<= 20)",
            sups[0], sups[1], sups[2]
        ),
    )
}

/// Variational derivatives and relativistic convexity.
fn criterion_7() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let mut worst = 0.0f64;
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let sys = ReducedSystem::new(&rho, pt);
        let rec = build_soliton(SolitonParams::new([0.5, 0.0], 1.0).unwrap(), &rho, pt).unwrap();
        let mut s = ReducedState::from_soliton(&rec);
        let p = Perturbation::generate(&g, 3, 0.1, 1.0);
        s.a.axpy(1.0, &p.da);
        s.pi.axpy(1.0, &p.dpi);
        let samples = gradient_check(&sys, &s, 100..120, 1.0, &[1e-2, 1e-3, 1e-4]);
        worst = samples.iter().fold(worst, |m, x| m.max(x.rel_error));
    }
    let c = relativistic_convexity(1.0, 10_000, 7);
    outcome(
        worst <= 1e-6 && c.violations == 0,
        format!(
            "max gradient error {worst:.2e} (<= 1e-6); convexity: {} violations in {} pairs",
            c.violations, c.samples
        ),
    )
}

/// Grid momentum map against the polar quadrature.
fn criterion_8() -> Outcome {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let (lat, pol) = (MomentumMap::lattice(&rho, pt), MomentumMap::polar(&rho, pt));
    let mut worst = (0.0f64, (0.0, 0.0));
    for &(v, w) in &GRID_PARAMS {
        let params = SolitonParams::new([v, 0.0], w).unwrap();
        let (a, am) = lat.momenta(params);
        let (b, bm) = pol.momenta(params);
        let num = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (am - bm).powi(2)).sqrt();
        let den = (b[0] * b[0] + b[1] * b[1] + bm * bm).sqrt();
        let rel = if den == 0.0 { num } else { num / den };
        if rel > worst.0 {
            worst = (rel, (v, w));
        }
    }
    outcome(
        worst.0 <= 1e-6,
        format!(
            "max relative gap {:.2e} at (v, ω) = {:?} (<= 1e-6)",
            worst.0, worst.1
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("conservation", criterion_1),
        ("soliton criticality", criterion_2),
        ("lower bound", criterion_3),
        ("jacobian", criterion_4),
        ("canonical transformation", criterion_5),
        ("orbital stability", criterion_6),
        ("gradient check", criterion_7),
        ("momentum-map oracle", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} ({name}): {} [{:.1}s] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
