//! Seeded self-check suite behind the command line `verify` subcommand.
//!
//! Each property runs a deterministic number of samples drawn from a
//! ChaCha8 stream, so a given `(tolerance, trials, seed)` triple always
//! produces byte-identical results. Curve-agreement checks (numeric
//! optimizer against closed forms, fringe scan against the visibility
//! formula) compare at the caller's tolerance; structural identities
//! keep their own fixed slacks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlations::{
    build_joint_state, cc_dephased_analytic, cc_pure_analytic, classical_correlations,
    conditional_entropy, helstrom_probability, helstrom_vectors, measurement_vectors,
    mutual_information, mutual_information_analytic, optimal_gamma, path_guessing_probability,
    JointStateKind,
};
use crate::interferometer::{
    distinguishability, duality_check, evolve_joint, fringe_visibility, fringe_visibility_scanned,
    reduced_photon_state, BlochVector, Configuration, DetectorModel,
};
use crate::qlinalg::{
    partial_trace, tensor_product, trace_norm, von_neumann_entropy, ComplexMatrix, DensityMatrix,
    Subsystem,
};

/// Outcome of a single named property.
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Everything `verify` needs to print its table and pick an exit code.
pub struct VerificationReport {
    pub tolerance: f64,
    pub trials: usize,
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed_count(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }
}

/// Tracks the worst residual seen and the inputs that produced it.
struct Worst {
    residual: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: f64::NEG_INFINITY,
            at: String::new(),
        }
    }

    fn update(&mut self, residual: f64, context: impl FnOnce() -> String) {
        if residual > self.residual {
            self.residual = residual;
            self.at = context();
        }
    }

    fn result(self, name: &'static str, gate: f64, label: &str) -> PropertyResult {
        let passed = self.residual <= gate;
        let detail = if passed {
            format!("max {} {:.3e} within {:.1e}", label, self.residual, gate)
        } else {
            format!(
                "{} {:.3e} exceeds {:.1e} at {}",
                label, self.residual, gate, self.at
            )
        };
        PropertyResult {
            name,
            passed,
            detail,
        }
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn random_bloch(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        let z = rng.random_range(-1.0..1.0);
        if x * x + y * y + z * z <= 1.0 {
            return BlochVector::new(x, y, z).expect("ball sample is a valid Bloch vector");
        }
    }
}

fn random_overlap(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = rng.random_range(-1.0..1.0);
        let im = rng.random_range(-1.0..1.0);
        if re * re + im * im <= 1.0 {
            return Complex64::new(re, im);
        }
    }
}

fn random_configuration(rng: &mut ChaCha8Rng) -> Configuration {
    let bloch = random_bloch(rng);
    let detector = DetectorModel::new(random_overlap(rng)).expect("disk sample is a valid overlap");
    let phi = rng.random_range(0.0..TAU);
    Configuration::new(bloch, detector, phi).expect("finite phase")
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(dim).expect("supported dimension");
    for r in 0..dim {
        for c in 0..dim {
            g.set(
                r,
                c,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            );
        }
    }
    let gram = &g * &g.adjoint();
    let trace = gram.trace().re;
    let scaled = gram.scaled(Complex64::new(1.0 / trace, 0.0));
    DensityMatrix::new(scaled).expect("normalized Gram matrix is a valid state")
}

/// Runs every property suite and collects the per-property verdicts.
///
/// Deterministic in `(tolerance, trials, seed)`: the report's detail
/// strings contain no timing or environment data.
pub fn run_verification(tolerance: f64, trials: usize, seed: u64) -> VerificationReport {
    let trials = trials.max(1);
    let heavy = (trials / 5).max(200);

    let mut results = Vec::with_capacity(19);

    results.push(check_partial_trace_unit_trace(heavy, seed));
    results.push(check_tensor_factor_recovery(heavy, seed));
    results.push(check_entropy_additivity(heavy, seed));
    results.push(check_eigenvalue_trace_identity(heavy, seed));
    results.push(check_trace_norm_range(heavy, seed));

    results.push(check_joint_state_validity(trials, seed));
    results.push(check_reduced_route_agreement(trials, seed));
    results.push(check_visibility_fringe_scan(tolerance, seed));
    results.push(check_distinguishability_closed_form(trials, seed));
    results.push(check_duality_bound(trials, seed));
    results.push(check_duality_saturation());

    results.push(check_projector_orthonormality(trials, seed));
    results.push(check_conditional_entropy_periodicity(
        trials.min(1000),
        seed,
    ));

    let curve = scan_correlation_curves();
    results.push(check_cc_analytic_agreement(&curve, tolerance));
    results.push(check_pure_state_equal_split(&curve, tolerance));
    results.push(check_mutual_information_identity(&curve));
    results.push(check_nonnegativity(&curve));
    results.push(check_argmax_gamma_consistency(&curve));

    results.push(check_helstrom_optimality());

    VerificationReport {
        tolerance,
        trials,
        seed,
        results,
    }
}

fn check_partial_trace_unit_trace(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 1);
    let mut worst = Worst::new();
    for i in 0..trials {
        let rho = random_density(&mut rng, 4);
        for subsystem in [Subsystem::Photon, Subsystem::Detector] {
            let marginal = partial_trace(&rho, subsystem).expect("marginal of a valid state");
            let defect = (marginal.matrix().trace().re - 1.0).abs();
            worst.update(defect, || format!("trial {} {:?}", i, subsystem));
        }
    }
    worst.result("qlinalg/partial_trace_unit_trace", 1e-12, "|trace - 1|")
}

fn check_tensor_factor_recovery(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 2);
    let mut worst = Worst::new();
    for i in 0..trials {
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let joint_matrix = tensor_product(a.matrix(), b.matrix()).expect("2x2 factors");
        let joint = DensityMatrix::new(joint_matrix).expect("product of valid states");
        let photon = partial_trace(&joint, Subsystem::Photon).expect("photon marginal");
        let detector = partial_trace(&joint, Subsystem::Detector).expect("detector marginal");
        let defect = photon
            .matrix()
            .max_abs_diff(a.matrix())
            .max(detector.matrix().max_abs_diff(b.matrix()));
        worst.update(defect, || format!("trial {}", i));
    }
    worst.result("qlinalg/tensor_factor_recovery", 1e-10, "recovery error")
}

fn check_entropy_additivity(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 3);
    let mut worst = Worst::new();
    for i in 0..trials {
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let joint_matrix = tensor_product(a.matrix(), b.matrix()).expect("2x2 factors");
        let joint = DensityMatrix::new(joint_matrix).expect("product of valid states");
        let lhs = von_neumann_entropy(&joint);
        let rhs = von_neumann_entropy(&a) + von_neumann_entropy(&b);
        worst.update((lhs - rhs).abs(), || format!("trial {}", i));
    }
    worst.result("qlinalg/entropy_additivity", 1e-9, "|S(a*b) - S(a) - S(b)|")
}

fn check_eigenvalue_trace_identity(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 4);
    let mut worst = Worst::new();
    for i in 0..trials {
        let rho = random_density(&mut rng, 4);
        let eigen = rho.eigenvalues();
        let sum: f64 = eigen.iter().sum();
        let sum_sq: f64 = eigen.iter().map(|l| l * l).sum();
        let trace_defect = (sum - 1.0).abs();
        let purity_defect = (sum_sq - rho.purity()).abs();
        worst.update(trace_defect.max(purity_defect), || format!("trial {}", i));
    }
    worst.result("qlinalg/eigenvalue_trace_identity", 1e-9, "identity defect")
}

fn check_trace_norm_range(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 5);
    let mut worst = Worst::new();
    for i in 0..trials {
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let p = rng.random_range(0.0..1.0);
        let diff = &a.matrix().scaled(Complex64::new(p, 0.0))
            - &b.matrix().scaled(Complex64::new(1.0 - p, 0.0));
        let norm = trace_norm(&diff).expect("difference of states is Hermitian");
        let excess = (norm - 1.0).max(-norm);
        worst.update(excess, || format!("trial {} p={:.4}", i, p));
    }
    worst.result("qlinalg/trace_norm_range", 1e-12, "range excess")
}

fn check_joint_state_validity(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 6);
    let mut worst = Worst::new();
    for i in 0..trials {
        let config = random_configuration(&mut rng);
        let joint = evolve_joint(&config);
        let min_eigen = joint.eigenvalues().first().copied().unwrap_or(0.0);
        let trace_defect = (joint.matrix().trace().re - 1.0).abs();
        worst.update(trace_defect.max(-min_eigen), || {
            format!(
                "trial {} bloch=({:.4},{:.4},{:.4})",
                i,
                config.bloch().s_x(),
                config.bloch().s_y(),
                config.bloch().s_z()
            )
        });
    }
    worst.result("interferometer/joint_state_validity", 1e-9, "state defect")
}

fn check_reduced_route_agreement(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 7);
    let mut worst = Worst::new();
    for i in 0..trials {
        let config = random_configuration(&mut rng);
        let traced = partial_trace(&evolve_joint(&config), Subsystem::Photon)
            .expect("photon marginal of the joint state");
        let direct = reduced_photon_state(&config);
        let defect = traced.matrix().max_abs_diff(direct.matrix());
        worst.update(defect, || format!("trial {} phi={:.4}", i, config.phi()));
    }
    worst.result(
        "interferometer/reduced_route_agreement",
        1e-10,
        "route difference",
    )
}

fn check_visibility_fringe_scan(tolerance: f64, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 8);
    let mut worst = Worst::new();
    let mut probe = |bloch: BlochVector, detector: DetectorModel, tag: String| {
        let formula = fringe_visibility(&bloch, &detector);
        let scanned = fringe_visibility_scanned(&bloch, &detector);
        worst.update((formula - scanned).abs(), || tag);
    };
    for i in 0..64 {
        let bloch = random_bloch(&mut rng);
        let detector =
            DetectorModel::new(random_overlap(&mut rng)).expect("disk sample is a valid overlap");
        probe(bloch, detector, format!("config {}", i));
    }
    let balanced = BlochVector::new(0.0, 0.0, 1.0).expect("unit z");
    for c in [0.0, 0.5, 1.0] {
        let detector = DetectorModel::new(Complex64::new(c, 0.0)).expect("real overlap");
        probe(balanced, detector, format!("|c|={:.1}", c));
    }
    worst.result(
        "interferometer/visibility_fringe_scan",
        tolerance,
        "|formula - scan|",
    )
}

fn check_distinguishability_closed_form(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 9);
    let mut worst = Worst::new();
    let balanced = BlochVector::new(0.0, 0.0, 1.0).expect("unit z");
    for i in 0..trials {
        let overlap = random_overlap(&mut rng);
        let detector = DetectorModel::new(overlap).expect("disk sample is a valid overlap");
        let d = distinguishability(&balanced, &detector);
        let expected = (1.0 - overlap.norm_sqr()).max(0.0).sqrt();
        worst.update((d - expected).abs(), || {
            format!("trial {} |c|={:.6}", i, overlap.norm())
        });
    }
    worst.result(
        "interferometer/distinguishability_closed_form",
        1e-10,
        "|D - sqrt(1-|c|^2)|",
    )
}

fn check_duality_bound(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 10);
    let mut worst = Worst::new();
    for i in 0..trials {
        let config = random_configuration(&mut rng);
        let report = duality_check(config.bloch(), config.detector());
        let mut excess = report.preparation.lhs - 1.0;
        if let Some(main) = report.main {
            excess = excess.max(main.lhs - 1.0);
        }
        worst.update(excess, || {
            format!(
                "trial {} bloch=({:.4},{:.4},{:.4}) |c|={:.4}",
                i,
                config.bloch().s_x(),
                config.bloch().s_y(),
                config.bloch().s_z(),
                config.detector().overlap().norm()
            )
        });
    }
    worst.result("interferometer/duality_bound", 1e-9, "max(lhs - 1)")
}

fn check_duality_saturation() -> PropertyResult {
    let mut worst = Worst::new();
    let balanced = BlochVector::new(0.0, 0.0, 1.0).expect("unit z");
    for i in 0..=100 {
        let c = i as f64 / 100.0;
        let detector = DetectorModel::new(Complex64::new(c, 0.0)).expect("real overlap");
        let v = fringe_visibility(&balanced, &detector);
        let d = distinguishability(&balanced, &detector);
        worst.update((v * v + d * d - 1.0).abs(), || format!("|c|={:.2}", c));
    }
    worst.result("interferometer/duality_saturation", 1e-9, "|V^2 + D^2 - 1|")
}

fn check_projector_orthonormality(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 11);
    let mut worst = Worst::new();
    let identity = ComplexMatrix::identity(2).expect("dim 2");
    for i in 0..trials {
        let v = rng.random_range(0.0..0.999);
        let gamma = rng.random_range(0.0..PI);
        let phi = rng.random_range(0.0..TAU);
        let pair = measurement_vectors(v, gamma, phi).expect("family defined below unit V");
        let [m1, m2] = pair.vectors();
        let defect = (m1.inner(m1).norm() - 1.0)
            .abs()
            .max((m2.inner(m2).norm() - 1.0).abs())
            .max(m1.inner(m2).norm());
        let completeness = (&pair.projector(0) + &pair.projector(1)).max_abs_diff(&identity);
        worst.update(defect.max(completeness), || {
            format!("trial {} V={:.4} gamma={:.4} phi={:.4}", i, v, gamma, phi)
        });
    }
    worst.result(
        "correlations/projector_orthonormality",
        1e-10,
        "basis defect",
    )
}

fn check_conditional_entropy_periodicity(trials: usize, seed: u64) -> PropertyResult {
    let mut rng = stream(seed, 12);
    let mut worst = Worst::new();
    for i in 0..trials {
        let v = rng.random_range(0.0..0.99);
        let gamma = rng.random_range(0.0..FRAC_PI_2);
        let phi = rng.random_range(0.0..TAU);
        let kind = if rng.random::<bool>() {
            JointStateKind::Entangled
        } else {
            JointStateKind::Dephased
        };
        let rho = build_joint_state(kind, v).expect("valid visibility");
        let base = measurement_vectors(v, gamma, phi).expect("family defined below unit V");
        let shifted =
            measurement_vectors(v, gamma + FRAC_PI_2, phi).expect("family defined below unit V");
        let lhs = conditional_entropy(&rho, &base).expect("conditional entropy");
        let rhs = conditional_entropy(&rho, &shifted).expect("conditional entropy");
        worst.update((lhs - rhs).abs(), || {
            format!("trial {} V={:.4} gamma={:.4}", i, v, gamma)
        });
    }
    worst.result(
        "correlations/conditional_entropy_periodicity",
        1e-10,
        "period defect",
    )
}

struct CurvePoint {
    v: f64,
    kind: JointStateKind,
    mi: f64,
    cc: f64,
    gamma_star: f64,
}

fn scan_correlation_curves() -> Vec<CurvePoint> {
    let mut curve = Vec::new();
    for i in 0..=20 {
        let v = i as f64 / 20.0;
        for kind in [JointStateKind::Entangled, JointStateKind::Dephased] {
            let rho = build_joint_state(kind, v).expect("valid visibility");
            let mi = mutual_information(&rho).expect("mutual information");
            let optimum = classical_correlations(&rho).expect("optimizer output");
            curve.push(CurvePoint {
                v,
                kind,
                mi,
                cc: optimum.cc,
                gamma_star: optimum.gamma_star,
            });
        }
    }
    curve
}

fn check_cc_analytic_agreement(curve: &[CurvePoint], tolerance: f64) -> PropertyResult {
    let mut worst = Worst::new();
    for point in curve {
        let analytic = match point.kind {
            JointStateKind::Entangled => cc_pure_analytic(point.v),
            JointStateKind::Dephased => cc_dephased_analytic(point.v),
        }
        .expect("closed form defined on [0, 1]");
        worst.update((point.cc - analytic).abs(), || {
            format!("V={:.2} {:?}", point.v, point.kind)
        });
    }
    worst.result(
        "correlations/cc_analytic_agreement",
        tolerance,
        "|numeric - analytic|",
    )
}

fn check_pure_state_equal_split(curve: &[CurvePoint], tolerance: f64) -> PropertyResult {
    let mut worst = Worst::new();
    for point in curve {
        if point.kind != JointStateKind::Entangled {
            continue;
        }
        let qd = (point.mi - point.cc).max(0.0);
        worst.update((qd - point.cc).abs(), || format!("V={:.2}", point.v));
    }
    worst.result(
        "correlations/pure_state_equal_split",
        tolerance,
        "|QD - CC|",
    )
}

fn check_mutual_information_identity(curve: &[CurvePoint]) -> PropertyResult {
    let mut worst = Worst::new();
    for point in curve {
        let analytic = mutual_information_analytic(point.kind, point.v).expect("defined on [0, 1]");
        worst.update((point.mi - analytic).abs(), || {
            format!("V={:.2} {:?}", point.v, point.kind)
        });
    }
    worst.result(
        "correlations/mutual_information_identity",
        1e-9,
        "|I - closed form|",
    )
}

fn check_nonnegativity(curve: &[CurvePoint]) -> PropertyResult {
    let mut worst = Worst::new();
    for point in curve {
        let cc_deficit = -point.cc;
        let qd_deficit = point.cc - point.mi - 1e-8;
        worst.update(cc_deficit.max(qd_deficit), || {
            format!("V={:.2} {:?}", point.v, point.kind)
        });
    }
    worst.result("correlations/nonnegativity", 0.0, "negativity")
}

fn check_argmax_gamma_consistency(curve: &[CurvePoint]) -> PropertyResult {
    let mut worst = Worst::new();
    for point in curve {
        if point.kind != JointStateKind::Dephased || point.v < 0.05 || point.v > 0.95 {
            continue;
        }
        let expected = optimal_gamma(point.v).expect("defined below unit V");
        let raw = (point.gamma_star - expected).rem_euclid(FRAC_PI_2);
        let distance = raw.min(FRAC_PI_2 - raw);
        worst.update(distance, || format!("V={:.2}", point.v));
    }
    worst.result(
        "correlations/argmax_gamma_consistency",
        1e-4,
        "gamma distance",
    )
}

fn check_helstrom_optimality() -> PropertyResult {
    let mut worst = Worst::new();
    for v in [0.0, 0.3, 0.6, 0.9] {
        let rho = build_joint_state(JointStateKind::Dephased, v).expect("valid visibility");
        let expected = helstrom_probability(v).expect("defined on [0, 1]");
        let (m_a, m_b) = helstrom_vectors(v, 0.0).expect("defined below unit V");
        let achieved = path_guessing_probability(&rho, &m_a, &m_b).expect("guessing probability");
        worst.update((achieved - expected).abs(), || {
            format!("V={:.1} achieved {:.6}", v, achieved)
        });
        let mut grid_best = 0.0_f64;
        for gi in 0..=180 {
            let gamma = gi as f64 * FRAC_PI_2 / 180.0;
            for pi in 0..73 {
                let phi = pi as f64 * TAU / 73.0;
                let pair = measurement_vectors(v, gamma, phi).expect("family defined below unit V");
                let [m1, m2] = pair.vectors();
                let p = path_guessing_probability(&rho, m1, m2).expect("guessing probability");
                grid_best = grid_best.max(p);
            }
        }
        worst.update(grid_best - expected, || {
            format!("V={:.1} grid best {:.8}", v, grid_best)
        });
    }
    worst.result(
        "correlations/helstrom_optimality",
        1e-7,
        "excess over bound",
    )
}
