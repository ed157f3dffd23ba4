//! End-to-end acceptance gate. Each test covers one numbered criterion,
//! prints a single pass/fail line (visible under --nocapture), and
//! enforces both the numeric tolerance and the runtime cap.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use duality_core::correlations::{
    build_joint_state, cc_dephased_analytic, cc_objective_dephased, cc_pure_analytic,
    classical_correlations, conditional_entropy, helstrom_probability, helstrom_vectors,
    measurement_vectors, mutual_information, optimal_gamma, path_guessing_probability,
    quantum_discord, JointStateKind,
};
use duality_core::interferometer::{
    distinguishability, duality_check, fringe_visibility, fringe_visibility_scanned, BlochVector,
    DetectorModel,
};
use duality_core::qlinalg::binary_entropy;

fn report(number: usize, label: &str, passed: bool, detail: &str, elapsed: f64, cap: f64) {
    println!(
        "acceptance {} {}: {} {} ({:.2} s, cap {} s)",
        number,
        label,
        if passed { "PASS" } else { "FAIL" },
        detail,
        elapsed,
        cap
    );
    assert!(passed, "criterion {} failed: {}", number, detail);
    assert!(
        elapsed < cap,
        "criterion {} overran its {} s budget: {:.2} s",
        number,
        cap,
        elapsed
    );
}

fn sample_bloch(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        let z = rng.random_range(-1.0..1.0);
        if x * x + y * y + z * z <= 1.0 {
            return BlochVector::new(x, y, z).unwrap();
        }
    }
}

fn sample_overlap(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = rng.random_range(-1.0..1.0);
        let im = rng.random_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return Complex64::new(re, im);
        }
    }
}

#[test]
fn criterion_1_duality_saturation() {
    let start = Instant::now();
    let preparations = [
        BlochVector::new(0.0, 0.0, 1.0).unwrap(),
        BlochVector::new(0.0, 1.0, 0.0).unwrap(),
        BlochVector::new(0.0, 0.6, 0.8).unwrap(),
    ];
    let mut worst = 0.0_f64;
    for bloch in &preparations {
        for k in 0..=100 {
            let modulus = k as f64 / 100.0;
            let phase = TAU * k as f64 / 101.0;
            let overlap = Complex64::from_polar(modulus, phase);
            let detector = DetectorModel::new(overlap).unwrap();
            let v = fringe_visibility(bloch, &detector);
            let d = distinguishability(bloch, &detector);
            worst = worst.max((v * v + d * d - 1.0).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "duality saturation",
        worst <= 1e-9,
        &format!("max |V^2+D^2-1| = {:.2e} (tol 1e-9)", worst),
        elapsed,
        1.0,
    );
}

#[test]
fn criterion_2_duality_inequality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    while checked < 10_000 {
        let bloch = sample_bloch(&mut rng);
        let detector = DetectorModel::new(sample_overlap(&mut rng)).unwrap();
        let outcome = duality_check(&bloch, &detector);
        assert!(outcome.preparation.lhs <= 1.0 + 1e-9);
        if let Some(main) = outcome.main {
            worst = worst.max(main.lhs - 1.0);
            checked += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "duality inequality",
        worst <= 1e-9,
        &format!("max (lhs - 1) = {:.2e} over 10^4 configs (tol 1e-9)", worst),
        elapsed,
        5.0,
    );
}

#[test]
fn criterion_3_correlation_curves() {
    let start = Instant::now();
    let mut endpoint_defect = 0.0_f64;
    endpoint_defect = endpoint_defect.max((cc_pure_analytic(0.0).unwrap() - 1.0).abs());
    endpoint_defect = endpoint_defect.max(cc_pure_analytic(1.0).unwrap().abs());
    endpoint_defect = endpoint_defect.max((cc_dephased_analytic(0.0).unwrap() - 1.0).abs());
    endpoint_defect = endpoint_defect.max(cc_dephased_analytic(1.0).unwrap().abs());

    let mut curve_defect = 0.0_f64;
    for i in 0..=20 {
        let v = i as f64 / 20.0;
        for kind in [JointStateKind::Entangled, JointStateKind::Dephased] {
            let rho = build_joint_state(kind, v).unwrap();
            let numeric = classical_correlations(&rho).unwrap().cc;
            let analytic = match kind {
                JointStateKind::Entangled => cc_pure_analytic(v).unwrap(),
                JointStateKind::Dephased => cc_dephased_analytic(v).unwrap(),
            };
            curve_defect = curve_defect.max((numeric - analytic).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "correlation curves",
        endpoint_defect <= 1e-12 && curve_defect <= 1e-6,
        &format!(
            "endpoints {:.2e} (tol 1e-12), numeric vs analytic {:.2e} (tol 1e-6)",
            endpoint_defect, curve_defect
        ),
        elapsed,
        30.0,
    );
}

#[test]
fn criterion_4_discord_structure() {
    let start = Instant::now();
    let mut split_defect = 0.0_f64;
    let mut dephased_qd = Vec::new();
    for i in 0..=20 {
        let v = i as f64 / 20.0;

        let pure = build_joint_state(JointStateKind::Entangled, v).unwrap();
        let qd = quantum_discord(&pure).unwrap();
        let cc = classical_correlations(&pure).unwrap().cc;
        split_defect = split_defect.max((qd - cc).abs());

        let mixed = build_joint_state(JointStateKind::Dephased, v).unwrap();
        dephased_qd.push(quantum_discord(&mixed).unwrap());
    }
    let endpoint_defect = dephased_qd[0].abs().max(dephased_qd[20].abs());
    let midpoint = dephased_qd[10];
    let peak = dephased_qd
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let non_monotonic = peak > 0
        && peak < 20
        && dephased_qd[peak] > dephased_qd[0]
        && dephased_qd[peak] > dephased_qd[20];
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        "discord structure",
        split_defect <= 1e-6 && endpoint_defect <= 1e-9 && midpoint > 0.0 && non_monotonic,
        &format!(
            "|QD-CC| pure {:.2e} (tol 1e-6), QD endpoints {:.2e} (tol 1e-9), QD(0.5) = {:.4}, peak at V = {:.2}",
            split_defect,
            endpoint_defect,
            midpoint,
            peak as f64 / 20.0
        ),
        elapsed,
        30.0,
    );
}

#[test]
fn criterion_5_optimal_angle() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for k in 1..=9 {
        let v = k as f64 / 10.0;
        let rho = build_joint_state(JointStateKind::Dephased, v).unwrap();
        let numeric = classical_correlations(&rho).unwrap().gamma_star;
        let expected = optimal_gamma(v).unwrap();
        let raw = (numeric - expected).rem_euclid(FRAC_PI_2);
        worst = worst.max(raw.min(FRAC_PI_2 - raw));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "optimal measurement angle",
        worst <= 1e-4,
        &format!("max gamma distance = {:.2e} mod pi/2 (tol 1e-4)", worst),
        elapsed,
        30.0,
    );
}

#[test]
fn criterion_6_conditional_entropy_closed_form() {
    let start = Instant::now();
    // The measurement family is singular at V = 1, so the grid stops at 0.98.
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let v = 0.98 * i as f64 / 49.0;
        let rho = build_joint_state(JointStateKind::Dephased, v).unwrap();
        for j in 0..50 {
            let gamma = FRAC_PI_2 * j as f64 / 49.0;
            let pair = measurement_vectors(v, gamma, 0.0).unwrap();
            let direct = conditional_entropy(&rho, &pair).unwrap();
            let closed = 1.0 - cc_objective_dephased(v, gamma).unwrap();
            worst = worst.max((direct - closed).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "conditional entropy closed form",
        worst <= 1e-9,
        &format!(
            "max |direct - closed| = {:.2e} on 50x50 grid (tol 1e-9)",
            worst
        ),
        elapsed,
        10.0,
    );
}

#[test]
fn criterion_7_helstrom_bound() {
    let start = Instant::now();
    let mut achieve_defect = 0.0_f64;
    let mut grid_excess = f64::NEG_INFINITY;
    for v in [0.0, 0.3, 0.6, 0.9] {
        let rho = build_joint_state(JointStateKind::Dephased, v).unwrap();
        let expected = helstrom_probability(v).unwrap();
        let (m_a, m_b) = helstrom_vectors(v, 0.0).unwrap();
        let achieved = path_guessing_probability(&rho, &m_a, &m_b).unwrap();
        achieve_defect = achieve_defect.max((achieved - expected).abs());
        for gi in 0..=180 {
            let gamma = gi as f64 * FRAC_PI_2 / 180.0;
            for pi in 0..73 {
                let phi = pi as f64 * TAU / 73.0;
                let pair = measurement_vectors(v, gamma, phi).unwrap();
                let [m1, m2] = pair.vectors();
                let p = path_guessing_probability(&rho, m1, m2).unwrap();
                grid_excess = grid_excess.max(p - expected);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        "optimal path guessing",
        achieve_defect <= 1e-9 && grid_excess <= 1e-7,
        &format!(
            "achieve defect {:.2e} (tol 1e-9), grid excess {:.2e} (tol 1e-7)",
            achieve_defect, grid_excess
        ),
        elapsed,
        10.0,
    );
}

#[test]
fn criterion_8_structural_identities() {
    let start = Instant::now();
    let mut eigen_defect = 0.0_f64;
    let mut mi_defect = 0.0_f64;
    for i in 0..=20 {
        let v = i as f64 / 20.0;
        let rho = build_joint_state(JointStateKind::Dephased, v).unwrap();
        let eigen = rho.eigenvalues();
        eigen_defect = eigen_defect
            .max(eigen[0].abs())
            .max(eigen[1].abs())
            .max((eigen[2] - 0.5).abs())
            .max((eigen[3] - 0.5).abs());
        let mi = mutual_information(&rho).unwrap();
        let expected = binary_entropy((1.0 + v) / 2.0).unwrap();
        mi_defect = mi_defect.max((mi - expected).abs());
    }

    let preparations = [
        BlochVector::new(0.0, 0.0, 1.0).unwrap(),
        BlochVector::new(0.0, 1.0, 0.0).unwrap(),
        BlochVector::new(0.3, 0.5, -0.6).unwrap(),
        BlochVector::new(-0.2, 0.44, 0.5).unwrap(),
        BlochVector::new(0.6, 0.0, 0.64).unwrap(),
    ];
    let overlaps = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.35, 0.2),
        Complex64::new(0.8, 0.0),
        Complex64::new(0.6, -0.3),
        Complex64::new(1.0, 0.0),
    ];
    let mut scan_defect = 0.0_f64;
    for bloch in &preparations {
        for overlap in &overlaps {
            let detector = DetectorModel::new(*overlap).unwrap();
            let formula = fringe_visibility(bloch, &detector);
            let scanned = fringe_visibility_scanned(bloch, &detector);
            scan_defect = scan_defect.max((formula - scanned).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        "structural identities",
        eigen_defect <= 1e-10 && mi_defect <= 1e-9 && scan_defect <= 1e-6,
        &format!(
            "spectrum defect {:.2e} (tol 1e-10), mutual information {:.2e} (tol 1e-9), fringe scan {:.2e} (tol 1e-6)",
            eigen_defect, mi_defect, scan_defect
        ),
        elapsed,
        10.0,
    );
}
