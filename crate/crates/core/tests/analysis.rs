mod common;

use common::*;
use mlsim::analysis::{
    distance, gradient_check, jacobian_entries, jacobian_vs_finite_difference,
    jacobian_vs_soliton_momenta, kinetic_remainder, lower_bound_check, perturbed_state,
    relativistic_convexity, stability_experiment, Perturbation, StabilityConfig,
};
use mlsim::dynamics::{ReducedState, ReducedSystem, Scheme};
use mlsim::soliton::{build_soliton, MomentumMap, SolitonParams};
use mlsim::Particle;
use proptest::prelude::*;

fn state(sys: &ReducedSystem, seed: u64, amp: f64) -> ReducedState {
    let rec = build_soliton(
        SolitonParams::new([0.2, 0.1], 1.0).unwrap(),
        sys.density(),
        sys.particle(),
    )
    .unwrap();
    perturbed_state(
        sys,
        &rec,
        &Perturbation::generate(sys.grid(), seed, amp, 1.0),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn distance_is_a_metric(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), amp in 1e-3f64..1.0) {
        let g = small_grid();
        let sys = ReducedSystem::new(&gaussian(&g), unit_particle());
        let (a, b, c) = (state(&sys, s1, amp), state(&sys, s2, amp), state(&sys, s3, amp));
        let (ab, ba) = (distance(&sys, &a, &b).unwrap(), distance(&sys, &b, &a).unwrap());
        let (ac, cb) = (distance(&sys, &a, &c).unwrap(), distance(&sys, &c, &b).unwrap());
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-15 * (1.0 + ab));
        prop_assert!(ab <= ac + cb + 1e-14);
        prop_assert_eq!(distance(&sys, &a, &a).unwrap(), 0.0);
    }

    #[test]
    fn perturbations_have_the_requested_size(seed in any::<u64>(), amp in 1e-4f64..10.0) {
        let g = small_grid();
        let p = Perturbation::generate(&g, seed, amp, 1.0);
        prop_assert!((p.norm() - amp).abs() <= 1e-13 * amp);
        prop_assert!(p.da.check_solenoidal() && p.dpi.check_solenoidal());
        let q = Perturbation::generate(&g, seed, amp, 1.0);
        prop_assert_eq!(p.da.hats(), q.da.hats());
    }

    #[test]
    fn kinetic_remainder_is_nonnegative(p in prop::array::uniform2(-50.0f64..50.0), dp in prop::array::uniform2(-50.0f64..50.0)) {
        for pt in [Particle::nonrelativistic(1.3, 1.0), Particle::relativistic(1.3, 1.0)] {
            prop_assert!(kinetic_remainder(pt, p, dp) >= 0.0);
        }
    }
}

#[test]
fn perturbed_state_keeps_particle_velocities() {
    let g = desk_grid();
    let rho = gaussian(&g);
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let sys = ReducedSystem::new(&rho, pt);
        let rec = build_soliton(SolitonParams::new([0.3, -0.2], 2.0).unwrap(), &rho, pt).unwrap();
        let pert = Perturbation::generate(&g, 17, 0.05, 1.0);
        let s = perturbed_state(&sys, &rec, &pert);
        let (qd, pd) = sys.particle_velocities(&s);
        assert!(
            (qd[0] - 0.3).abs() < 1e-12 && (qd[1] + 0.2).abs() < 1e-12 && (pd - 2.0).abs() < 1e-12
        );
        let d = distance(&sys, &s, &ReducedState::from_soliton(&rec)).unwrap();
        assert!((d - 0.05).abs() < 1e-14, "{d}");
    }
}

#[test]
fn hamiltonian_increment_matches_direct_difference() {
    let g = desk_grid();
    let rho = gaussian(&g);
    for pt in [unit_particle(), Particle::relativistic(2.0, 0.5)] {
        let sys = ReducedSystem::new(&rho, pt);
        let s = state(&sys, 4, 0.3);
        let pert = Perturbation::generate(&g, 5, 0.7, 1.0);
        let mut t = s.clone();
        t.a.axpy(1.0, &pert.da);
        t.pi.axpy(1.0, &pert.dpi);
        let (h0, h1) = (sys.hamiltonian(&s), sys.hamiltonian(&t));
        let inc = sys.hamiltonian_increment(&s, &pert.da, &pert.dpi);
        assert!(
            (inc - (h1 - h0)).abs() < 1e-13 * (h0.abs() + h1.abs()),
            "{inc} vs {}",
            h1 - h0
        );
    }
}

#[test]
fn lower_bound_holds_for_both_particle_kinds() {
    let g = desk_grid();
    let rho = gaussian(&g);
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let sys = ReducedSystem::new(&rho, pt);
        for (v, w) in [([0.0, 0.0], 1.0), ([0.5, 0.0], 0.0), ([0.6, -0.6], 5.0)] {
            let rec = build_soliton(SolitonParams::new(v, w).unwrap(), &rho, pt).unwrap();
            for (i, amp) in [1e-3, 1e-1, 1.0].into_iter().enumerate() {
                let s = lower_bound_check(
                    &sys,
                    &rec,
                    &Perturbation::generate(&g, 31 + i as u64, amp, 1.0),
                );
                assert!(s.pass, "{v:?} {w} {amp}: {s:?}");
                assert!(s.delta_h >= s.bound, "{s:?}");
                assert!(s.identity_rel_error < 1e-9, "{s:?}");
            }
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let g = desk_grid();
    let rho = gaussian(&g);
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let sys = ReducedSystem::new(&rho, pt);
        let s = state(&sys, 6, 0.2);
        let samples = gradient_check(&sys, &s, 0..5, 1.0, &[1e-2, 1e-3, 1e-4]);
        for x in samples {
            assert!(x.rel_error < 1e-6, "{x:?}");
        }
    }
}

#[test]
fn relativistic_convexity_has_no_violations() {
    let c = relativistic_convexity(1.0, 2000, 3);
    assert_eq!(c.violations, 0);
    assert!(c.min_value >= 0.0);
    assert!(c.max_form_mismatch < 64.0, "{c:?}");
}

#[test]
fn stability_with_zero_perturbation_stays_on_the_soliton() {
    let g = small_grid();
    let sys = ReducedSystem::new(&gaussian(&g), unit_particle());
    let cfg = StabilityConfig {
        params: SolitonParams::new([0.3, 0.0], 1.0).unwrap(),
        delta: 0.0,
        horizon: 2.0,
        dt: 0.1 * g.dx(),
        seed: 1,
        stride: 5,
        scheme: Scheme::Rk4,
        sigma_p: 1.0,
    };
    let r = stability_experiment(&sys, &cfg).unwrap();
    assert!(
        r.sup_original < 1e-8 && r.sup_matched < 1e-8,
        "{} {}",
        r.sup_original,
        r.sup_matched
    );
    assert_eq!(r.constant, 0.0);
    assert_eq!(r.times.len(), r.dist_original.len());
}

#[test]
fn stability_rejects_long_horizons() {
    let g = small_grid();
    let sys = ReducedSystem::new(&gaussian(&g), unit_particle());
    let cfg = StabilityConfig {
        params: SolitonParams::new([0.0, 0.0], 1.0).unwrap(),
        delta: 1e-3,
        horizon: 9.0,
        dt: 0.1 * g.dx(),
        seed: 1,
        stride: 5,
        scheme: Scheme::Rk4,
        sigma_p: 1.0,
    };
    assert!(stability_experiment(&sys, &cfg)
        .unwrap_err()
        .to_string()
        .contains("integrator.T"));
}

#[test]
fn jacobian_structure_at_v_along_e1() {
    let g = desk_grid();
    let rho = gaussian(&g);
    for pt in [unit_particle(), Particle::relativistic(1.0, 1.0)] {
        let (lat, pol) = (MomentumMap::lattice(&rho, pt), MomentumMap::polar(&rho, pt));
        for (v, w) in [(0.0, 0.0), (0.4, 1.0), (0.9, 5.0)] {
            for t in [
                jacobian_entries(v, w, &lat).unwrap(),
                jacobian_entries(v, w, &pol).unwrap(),
            ] {
                let m = t.partials;
                for z in [m[0][1], m[1][0], m[1][2], m[2][1]] {
                    assert!(z.abs() <= 1e-10, "{v} {w}: {m:?}");
                }
                assert!(t.det > 0.0 && t.det_reduced > 0.0);
                assert!(rel_err(t.det, t.det_reduced) < 1e-10);
                assert!(t.simplified.cauchy_schwarz_holds);
                let s = t.simplified;
                assert!(
                    rel_err(s.p1_plus, t.plus[0]) < 1e-10 && rel_err(s.p2_plus, t.plus[1]) < 1e-10
                );
                assert!(rel_err(s.minor, m[0][0] * m[2][2] - m[2][0] * m[0][2]) < 1e-10);
                assert!((s.p1_omega - m[0][2]).abs() < 1e-10 * (1.0 + m[0][2].abs()));
            }
        }
    }
    assert!(jacobian_entries(-0.1, 0.0, &MomentumMap::lattice(&rho, unit_particle())).is_err());
}

#[test]
fn jacobian_matches_finite_differences_of_both_backends() {
    let g = desk_grid();
    let rho = gaussian(&g);
    let pt = unit_particle();
    let params = SolitonParams::new([0.3, 0.4], 1.0).unwrap();
    let lat = MomentumMap::lattice(&rho, pt);
    let pol = MomentumMap::polar(&rho, pt);
    let a = jacobian_vs_finite_difference(params, &lat, 1e-4).unwrap();
    let b = jacobian_vs_finite_difference(params, &pol, 1e-4).unwrap();
    let c = jacobian_vs_soliton_momenta(params, &lat, 1e-4).unwrap();
    println!(
        "fd errors: lattice {:e} polar {:e} fields {:e}",
        a.max_rel_error, b.max_rel_error, c.max_rel_error
    );
    assert!(a.max_rel_error < 1e-6 && b.max_rel_error < 1e-4 && c.max_rel_error < 1e-6);
}
