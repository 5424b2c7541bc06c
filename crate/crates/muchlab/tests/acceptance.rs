//! Acceptance suite: every release-gating criterion as one test with a
//! printed PASS line (run with `--nocapture` to see them).
//!
//! Criteria:
//! 1. peakon constants reproduced at n = 1024 within 1e-6 relative, < 1 s
//! 2. Lyapunov surface critical point from exact stats within 1e-10 (+ FD)
//! 3. identity suite: 200 seeded fields at n = 512, residuals < 1e-6, < 30 s
//! 4. inequality suite: 1000 seeded trials, zero violations
//! 5. smooth conservation: |ΔH₀| < 1e-12, rel |ΔH₁|, |ΔH₂| < 1e-8, < 10 s
//! 6. traveling peakon returns to its translate: H¹ < 5e-2 at n = 512,
//!    smaller at n = 1024, H₀ drift < 1e-12 throughout
//! 7. stability sweep over δ ∈ {1e-3, 3e-3, 1e-2}: finite sup distances,
//!    proof-chain slack ≤ 1e-6 at every snapshot, D(δ) nondecreasing, < 5 min
//! 8. RK4 self-convergence order ≥ 3.8 on smooth data

use std::f64::consts::TAU;
use std::time::Instant;

use muchlab::field::{Grid, PeriodicField};
use muchlab::functionals::{f_eval, f_grad, f_hess, FPoint, FStats};
use muchlab::lab::sweep::{run_sweep, PerturbationKind, SweepSpec, CHAIN_SLACK};
use muchlab::lab::verify::{constants_suite, identities_suite, inequalities_suite};
use muchlab::lab::{orbital_distance, DistanceMode};
use muchlab::peakon::peakon_field;
use muchlab::solver::{evolve, step, SolverConfig};

#[test]
fn criterion_1_peakon_constants() {
    let start = Instant::now();
    let checks = constants_suite(1024, 1e-6);
    let elapsed = start.elapsed();
    assert_eq!(checks.len(), 9);
    for c in &checks {
        assert!(
            c.pass,
            "criterion 1: {} measured {:.3e} exceeds 1e-6",
            c.name, c.measured
        );
    }
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 1 runtime {elapsed:?}");
    println!("criterion 1 PASS: nine peakon constants within 1e-6 rel ({elapsed:?})");
}

#[test]
fn criterion_2_lyapunov_critical_point() {
    let stats = FStats::peakon(1.0);
    let p = FPoint::new(1.0, 23.0 / 26.0).unwrap();

    let f = f_eval(&stats, p);
    assert!(f.abs() < 1e-10, "F = {f:.3e}");

    let (gm, gmin) = f_grad(&stats, p);
    assert!(gm.abs() < 1e-10, "dF/dM = {gm:.3e}");
    assert!(gmin.abs() < 1e-10, "dF/dm = {gmin:.3e}");

    let h = f_hess(p).unwrap();
    assert!((h[0][0] + 12.0 / 13.0).abs() < 1e-10);
    assert!((h[1][1] + 12.0 / 13.0).abs() < 1e-10);
    assert!(h[0][1].abs() < 1e-10);
    assert!(h[1][0].abs() < 1e-10);

    // Finite-difference cross-checks of the closed forms.
    let eval = |ma: f64, mi: f64| f_eval(&stats, FPoint::new(ma, mi).unwrap());
    let (ma, mi) = (1.0, 23.0 / 26.0);
    let d = 1e-5;
    let fd_m = (eval(ma + d, mi) - eval(ma - d, mi)) / (2.0 * d);
    let fd_min = (eval(ma, mi + d) - eval(ma, mi - d)) / (2.0 * d);
    assert!((fd_m - gm).abs() < 1e-5, "FD dF/dM {fd_m:.3e}");
    assert!((fd_min - gmin).abs() < 1e-5, "FD dF/dm {fd_min:.3e}");
    let d = 1e-4;
    let fd_mm = (eval(ma + d, mi) - 2.0 * eval(ma, mi) + eval(ma - d, mi)) / (d * d);
    let fd_ii = (eval(ma, mi + d) - 2.0 * eval(ma, mi) + eval(ma, mi - d)) / (d * d);
    let fd_mi = (eval(ma + d, mi + d) - eval(ma + d, mi - d) - eval(ma - d, mi + d)
        + eval(ma - d, mi - d))
        / (4.0 * d * d);
    assert!((fd_mm - h[0][0]).abs() < 1e-5, "FD Hessian MM {fd_mm:.6}");
    assert!((fd_ii - h[1][1]).abs() < 1e-5, "FD Hessian mm {fd_ii:.6}");
    assert!((fd_mi - h[0][1]).abs() < 1e-5, "FD Hessian Mm {fd_mi:.6}");

    println!("criterion 2 PASS: critical point (0, 0, diag(-12/13)) within 1e-10, FD within 1e-5");
}

#[test]
fn criterion_3_identity_suite() {
    let start = Instant::now();
    let checks = identities_suite(200, 7, 1e-6, 512).unwrap();
    let elapsed = start.elapsed();
    for c in &checks {
        assert!(
            c.pass,
            "criterion 3: {} worst residual {:.3e} exceeds 1e-6",
            c.name, c.measured
        );
    }
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 3 runtime {elapsed:?}"
    );
    println!(
        "criterion 3 PASS: 200-field identity residuals {:?} < 1e-6 ({elapsed:?})",
        checks.iter().map(|c| c.measured).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_4_inequality_suite() {
    let checks = inequalities_suite(1000, 7, 512).unwrap();
    for c in &checks {
        assert!(
            c.pass,
            "criterion 4: {} measured {:.3e} vs bound {:.3e}",
            c.name, c.measured, c.bound
        );
    }
    let equality = checks
        .iter()
        .find(|c| c.name == "inequalities/max-mu-peakon-equality")
        .unwrap();
    assert!(equality.measured < 1e-6);
    println!("criterion 4 PASS: 1000-trial inequality suite, zero violations");
}

#[test]
fn criterion_5_smooth_conservation() {
    let start = Instant::now();
    let grid = Grid::new(128).unwrap();
    let u0 = PeriodicField::from_fn(grid, |x| 2.0 + 0.1 * (TAU * x).sin());
    let cfg = SolverConfig {
        record_every: 100,
        ..SolverConfig::new(128, 1e-3, 1.0)
    };
    let rec = evolve(&u0, &cfg).unwrap();
    let elapsed = start.elapsed();
    assert!(rec.status.is_completed());
    let h0 = rec.h0_drift();
    let (h1, h2) = rec.relative_drift();
    assert!(h0 < 1e-12, "H0 drift {h0:.3e}");
    assert!(h1 < 1e-8, "H1 relative drift {h1:.3e}");
    assert!(h2 < 1e-8, "H2 relative drift {h2:.3e}");
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 5 runtime {elapsed:?}"
    );
    println!(
        "criterion 5 PASS: drifts H0 {h0:.2e}, H1 {h1:.2e}, H2 {h2:.2e} ({elapsed:?})"
    );
}

fn peakon_period_return(n: usize, dt: f64) -> (f64, f64, (f64, f64)) {
    let grid = Grid::new(n).unwrap();
    let u0 = peakon_field(1.0, 0.0, grid);
    let cfg = SolverConfig {
        record_every: 100,
        ..SolverConfig::filtered(n, dt, 1.0)
    };
    let rec = evolve(&u0, &cfg).unwrap();
    assert!(rec.status.is_completed());
    let (_, dist) = orbital_distance(rec.final_field(), 1.0, DistanceMode::Minimize);
    (dist, rec.h0_drift(), rec.relative_drift())
}

#[test]
fn criterion_6_traveling_peakon_period() {
    let (dist_512, h0_512, drift_512) = peakon_period_return(512, 5e-4);
    assert!(dist_512 < 5e-2, "H1 return distance at n=512: {dist_512:.3e}");
    assert!(h0_512 < 1e-12, "H0 drift {h0_512:.3e}");

    let (dist_1024, h0_1024, drift_1024) = peakon_period_return(1024, 2.5e-4);
    assert!(h0_1024 < 1e-12, "H0 drift {h0_1024:.3e}");
    assert!(
        dist_1024 < dist_512,
        "expected improvement: {dist_1024:.3e} vs {dist_512:.3e}"
    );
    println!(
        "criterion 6 PASS: return distance {dist_512:.3e} (n=512) -> {dist_1024:.3e} (n=1024); \
         filtered H1/H2 rel drift {:.2e}/{:.2e} (n=512), {:.2e}/{:.2e} (n=1024)",
        drift_512.0, drift_512.1, drift_1024.0, drift_1024.1
    );
}

#[test]
fn criterion_7_stability_sweep() {
    let start = Instant::now();
    let spec = SweepSpec {
        deltas: vec![1e-3, 3e-3, 1e-2],
        kind: PerturbationKind::SingleMode,
        seed: 7,
        solver: SolverConfig {
            record_every: 100,
            ..SolverConfig::filtered(512, 5e-4, 1.0)
        },
        c: 1.0,
        distance_mode: DistanceMode::ArgmaxPrescription,
    };
    let report = run_sweep(&spec).unwrap();
    let elapsed = start.elapsed();
    for o in &report.outcomes {
        assert!(o.sup_dist.is_finite(), "delta {}: non-finite sup", o.delta);
        assert!(
            o.chain_max_defect <= CHAIN_SLACK,
            "delta {}: chain defect {:.3e} exceeds {CHAIN_SLACK:.0e}",
            o.delta,
            o.chain_max_defect
        );
        assert_eq!(o.verdict, "ok", "delta {}: {}", o.delta, o.verdict);
    }
    assert!(report.monotone, "sup distance not nondecreasing in delta");
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "criterion 7 runtime {elapsed:?}"
    );
    println!(
        "criterion 7 PASS: sup distances {:?}, chain defects {:?} ({elapsed:?})",
        report.outcomes.iter().map(|o| o.sup_dist).collect::<Vec<_>>(),
        report
            .outcomes
            .iter()
            .map(|o| o.chain_max_defect)
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_8_temporal_convergence_order() {
    let grid = Grid::new(128).unwrap();
    let u0 = PeriodicField::from_fn(grid, |x| 2.0 + 0.1 * (TAU * x).sin());
    let run = |dt: f64| {
        let cfg = SolverConfig::new(128, dt, 0.5);
        let steps = (0.5 / dt).round() as usize;
        let mut u = u0.clone();
        for _ in 0..steps {
            u = step(&u, dt, &cfg);
        }
        u
    };
    let a = run(1e-3);
    let b = run(5e-4);
    let c = run(2.5e-4);
    let e1 = a.sub(&b).l2_sq().sqrt();
    let e2 = b.sub(&c).l2_sq().sqrt();
    let order = (e1 / e2).log2();
    assert!(order >= 3.8, "measured order {order:.3}");
    println!("criterion 8 PASS: RK4 self-convergence order {order:.3} >= 3.8");
}
