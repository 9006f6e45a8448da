use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use qsubspace::linalg::{random_orthonormal, random_spd};
use qsubspace::pipeline::{
    error_sweep, run, run_ellipsoid, run_extension, run_grassmann, sweep_csv, trend_checks,
    SWEEP_HEADER,
};
use qsubspace::{DistanceKind, EvolutionMode, InputModel, InputSource, Matrix, RunConfig};

mod common;
use common::ellipsoid_oracle;

fn analytic_pair() -> (Matrix, Matrix) {
    let m = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
    let n = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, FRAC_1_SQRT_2], &[0.0, FRAC_1_SQRT_2]]);
    (m, n)
}

fn cfg(distance: DistanceKind, m: Matrix, n: Matrix, bits: u32) -> RunConfig {
    RunConfig { bits, ..RunConfig::with_matrices(distance, m, n) }
}

fn generated(distance: DistanceKind, n: usize, k: usize, kappa: f64, seed: u64, bits: u32) -> RunConfig {
    RunConfig { bits, ..RunConfig::new(distance, InputSource::Generated { n, k, kappa, seed }) }
}

#[test]
fn grassmann_analytic_instance() {
    let (m, n) = analytic_pair();
    let r = run_grassmann(&cfg(DistanceKind::Grassmann, m, n, 4)).unwrap();
    assert!(r.exact_phase);
    assert!((r.exact_p0.unwrap() - 0.125).abs() < 1e-9);
    assert!((r.exact_estimate - FRAC_PI_4).abs() < 1e-8);
    assert!((r.classical_value - FRAC_PI_4).abs() < 1e-12);
    assert!(r.leaked_mass < 1e-12);
    assert_eq!(r.eigen.len(), 2);
}

#[test]
fn grassmann_identical_subspaces() {
    let m = random_orthonormal(5, 2, 4).unwrap();
    for model in [InputModel::Blackbox, InputModel::Memory] {
        let r = run_grassmann(&RunConfig { model, ..cfg(DistanceKind::Grassmann, m.clone(), m.clone(), 6) })
            .unwrap();
        assert!(r.classical_value < 1e-7);
        assert!(r.exact_p0.unwrap() < 1e-12, "{model}: {:?}", r.exact_p0);
        assert_eq!(r.quantum_estimate, 0.0);
        assert!(r.degenerate);
    }
}

#[test]
fn grassmann_random_seed_13() {
    let r = run_grassmann(&generated(DistanceKind::Grassmann, 8, 3, 2.0, 13, 10)).unwrap();
    assert!(r.absolute_error() <= 0.02, "{}", r.render());
    // The report formula holds exactly.
    let want = FRAC_PI_2 * 3f64.sqrt() * r.sampled_p0.unwrap().sqrt();
    assert_eq!(r.quantum_estimate, want);
}

#[test]
fn grassmann_models_agree() {
    let c = generated(DistanceKind::Grassmann, 6, 2, 2.0, 31, 9);
    let bb = run_grassmann(&c).unwrap();
    let mem = run_grassmann(&RunConfig { model: InputModel::Memory, ..c }).unwrap();
    let (e1, e2) = (bb.absolute_error(), mem.absolute_error());
    assert!((bb.quantum_estimate - mem.quantum_estimate).abs() <= 2.0 * (e1 + e2) + 1e-12);
    assert!((bb.exact_p0.unwrap() - mem.exact_p0.unwrap()).abs() < 1e-9);
    assert_ne!(bb.alpha_total, mem.alpha_total);
}

#[test]
fn ellipsoid_identical_and_analytic() {
    let m = random_spd(3, 4.0, 8).unwrap();
    let r = run_ellipsoid(&RunConfig {
        kappa: Some(4.0),
        ..cfg(DistanceKind::Ellipsoid, m.clone(), m, 8)
    })
    .unwrap();
    assert!(r.exact_p0.unwrap() < 1e-9);
    assert!(r.quantum_estimate < 1e-3);

    let e = (-1.0f64).exp();
    let r = run_ellipsoid(&cfg(
        DistanceKind::Ellipsoid,
        Matrix::identity(2),
        Matrix::diag_real(&[e, e]),
        6,
    ))
    .unwrap();
    assert!(r.exact_phase);
    assert!((r.classical_value - 2f64.sqrt()).abs() < 1e-12);
    assert!((r.exact_estimate - 2f64.sqrt()).abs() < 1e-6);
    let p = r.sampled_p0.unwrap();
    assert_eq!(r.quantum_estimate, (2.0 * p).sqrt() * r.log_scale.unwrap());
}

#[test]
fn ellipsoid_random_against_independent_oracle() {
    let c = generated(DistanceKind::Ellipsoid, 4, 4, 10.0, 5, 12);
    let (m, n) = c.load_inputs().unwrap();
    let oracle = ellipsoid_oracle(&m, &n);
    let r = run_ellipsoid(&c).unwrap();
    assert!((r.classical_value - oracle).abs() < 1e-8);
    assert!((r.quantum_estimate - oracle).abs() <= 0.05, "{}", r.render());
}

#[test]
fn ellipsoid_spectrum_outside_window_is_precondition() {
    let r = run_ellipsoid(&RunConfig {
        kappa: Some(2.0),
        ..cfg(DistanceKind::Ellipsoid, Matrix::identity(2), Matrix::diag_real(&[0.1, 1.0]), 4)
    });
    assert_eq!(r.unwrap_err().exit_code(), 3);
    let big = run_ellipsoid(&cfg(DistanceKind::Ellipsoid, Matrix::identity(2), Matrix::diag_real(&[2.0, 1.0]), 4));
    assert_eq!(big.unwrap_err().exit_code(), 3);
}

#[test]
fn extension_analytic_and_identical() {
    let (m, n) = analytic_pair();
    let want = [
        (DistanceKind::Asimov, FRAC_PI_4),
        (DistanceKind::Projection, FRAC_1_SQRT_2),
        (DistanceKind::Chordal, FRAC_1_SQRT_2),
    ];
    for (d, v) in want {
        let r = run_extension(&cfg(d, m.clone(), n.clone(), 4)).unwrap();
        assert!((r.exact_estimate - v).abs() < 1e-6, "{d}: {}", r.exact_estimate);
        let same = run_extension(&cfg(d, m.clone(), m.clone(), 4)).unwrap();
        assert!(same.exact_estimate < 1e-6, "{d}: {}", same.exact_estimate);
    }
}

#[test]
fn extension_random_seed_13() {
    for d in [DistanceKind::Asimov, DistanceKind::Projection, DistanceKind::Chordal] {
        let r = run_extension(&generated(d, 8, 3, 2.0, 13, 10)).unwrap();
        assert!(r.absolute_error() <= 0.02, "{}", r.render());
    }
}

#[test]
fn drivers_reject_other_distances() {
    let (m, n) = analytic_pair();
    assert!(run_ellipsoid(&cfg(DistanceKind::Grassmann, m.clone(), n.clone(), 4)).is_err());
    assert!(run_extension(&cfg(DistanceKind::Grassmann, m, n, 4)).is_err());
}

#[test]
fn series_evolution_matches_exact() {
    for d in [DistanceKind::Grassmann, DistanceKind::Chordal, DistanceKind::Ellipsoid] {
        let base = RunConfig { eps_h: 1e-8, ..generated(d, 4, 2, 4.0, 3, 6) };
        let exact = run(&base).unwrap();
        let series = run(&RunConfig { evolution: EvolutionMode::JacobiAnger, ..base }).unwrap();
        for (a, b) in [
            (exact.exact_p0.unwrap(), series.exact_p0.unwrap()),
            (exact.ideal_p0.unwrap(), series.ideal_p0.unwrap()),
            (exact.epsilon_p.unwrap(), series.epsilon_p.unwrap()),
            (exact.exact_estimate, series.exact_estimate),
            (exact.quantum_estimate, series.quantum_estimate),
            (exact.leaked_mass, series.leaked_mass),
        ] {
            assert!((a - b).abs() <= 1e-6, "{d}: {a} vs {b}");
        }
    }
}

// Known to fail: an eigenphase a fraction x of a bin off the grid at b bits sits 4x off at
// b + 2, and the kernel leakage grows by sin²(4πx)/(4 sin²(πx)), up to 4×. Seed 15 shows it.
#[test]
#[ignore = "refinement does not hold for eigenphases close to the coarse grid"]
fn more_bits_refine_epsilon_p() {
    for seed in [13, 14, 15] {
        let base = generated(DistanceKind::Grassmann, 6, 3, 2.0, seed, 4);
        let rows = error_sweep(&base, &[4, 5, 6, 7, 8, 9, 10], &[1000]).unwrap();
        for (a, b) in rows.iter().zip(rows.iter().skip(2)) {
            let (ea, eb) = (a.epsilon_p.unwrap(), b.epsilon_p.unwrap());
            assert!(eb <= 1.1 * ea + 1e-12, "seed {seed}: bits {} -> {}: {ea} -> {eb}", a.bits, b.bits);
        }
    }
}

#[test]
fn sweep_single_point_matches_run() {
    let c = RunConfig { shots: 5000, ..generated(DistanceKind::Grassmann, 5, 2, 2.0, 13, 7) };
    let rows = error_sweep(&c, &[7], &[5000]).unwrap();
    let r = run_grassmann(&c).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].quantum_estimate, r.quantum_estimate);
    assert_eq!(rows[0].exact_p0, r.exact_p0);
    assert_eq!(rows[0].epsilon_p, r.epsilon_p);
}

#[test]
fn sweep_phase_error_trend() {
    let c = generated(DistanceKind::Grassmann, 8, 3, 2.0, 13, 4);
    let rows = error_sweep(&c, &[4, 5, 6, 7, 8, 9, 10], &[100]).unwrap();
    let t = trend_checks(&rows);
    assert!(t.non_increasing, "{:?}", t.violations);
    let csv = sweep_csv(&rows);
    assert!(csv.starts_with(SWEEP_HEADER));
    assert_eq!(csv.lines().count(), 8);
    assert!(csv.lines().all(|l| l.split(',').count() == 14));
}

#[test]
fn sweep_sampling_error_scales_as_inverse_sqrt_shots() {
    let c = generated(DistanceKind::Grassmann, 8, 3, 2.0, 13, 12);
    let shots: Vec<u64> = vec![100, 1_000, 10_000, 100_000, 1_000_000];
    // Average over seeds so the log-log fit sees the root-mean-square error.
    let mut mse = vec![0.0; shots.len()];
    let seeds = 40;
    for s in 0..seeds {
        let rows = error_sweep(&RunConfig { seed: s, ..c.clone() }, &[12], &shots).unwrap();
        for (m, r) in mse.iter_mut().zip(&rows) {
            *m += r.sampling_error.unwrap().powi(2) / seeds as f64;
        }
    }
    let xs: Vec<f64> = shots.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = mse.iter().map(|m| 0.5 * m.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 5.0, ys.iter().sum::<f64>() / 5.0);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() < 0.1, "slope {slope}");
    // Every point within 3x of the binomial prediction.
    let p = error_sweep(&c, &[12], &[100]).unwrap()[0].exact_p0.unwrap();
    for (&s, m) in shots.iter().zip(&mse) {
        let predicted = (p * (1.0 - p) / s as f64).sqrt();
        let ratio = m.sqrt() / predicted;
        assert!((1.0 / 3.0..=3.0).contains(&ratio), "shots {s}: ratio {ratio}");
    }
}

#[test]
fn reports_are_reproducible() {
    let c = generated(DistanceKind::Chordal, 6, 2, 2.0, 9, 6);
    assert_eq!(run(&c).unwrap().render(), run(&c).unwrap().render());
    let other = run(&RunConfig { seed: 10, ..c.clone() }).unwrap();
    assert_ne!(other.render(), run(&c).unwrap().render());
}
