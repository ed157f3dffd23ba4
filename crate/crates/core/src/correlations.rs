//! Classical and quantum correlations between the photon and the
//! which-way detector.
//!
//! Two joint-state families are built from a single visibility parameter
//! V: the entangled pure state the interferometer produces for a balanced
//! preparation, and its dephased counterpart in which the pointer states
//! are classically correlated with the paths. On top of them sit Helstrom
//! discrimination, a one-parameter family of detector measurements,
//! conditional entropy, classical correlations (numeric maximization plus
//! closed forms), quantum mutual information, and quantum discord.
//!
//! Conventions: the detector overlap is taken real, c = V >= 0, so the
//! kicked pointer state is (V, sqrt(1-V^2)); entropies are in bits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interferometer::{distinguishability, BlochVector, DetectorModel};
use crate::qlinalg::{
    binary_entropy, hermitian_eigenvalues, partial_trace, partial_trace_matrix, tensor_product,
    von_neumann_entropy, xlog2, ComplexMatrix, DensityMatrix, StateVector, Subsystem, DOMAIN_SLACK,
};

/// Measurement branches with probability below this floor contribute zero
/// conditional entropy (avoids 0/0 in the branch-state normalization).
pub const PROBABILITY_FLOOR: f64 = 1e-12;
/// Discord values in [-QD_NEGATIVE_TOL, 0) are rounded to 0; anything more
/// negative is a hard error, since discord of these states cannot be
/// negative.
pub const QD_NEGATIVE_TOL: f64 = 1e-8;
/// Coarse maximization grid: points along gamma in [0, pi/2].
pub const GAMMA_GRID_POINTS: usize = 181;
/// Coarse maximization grid: points along phi in [0, 2pi).
pub const PHI_GRID_POINTS: usize = 73;
/// Refinement stops once a full gamma+phi round improves the objective by
/// less than this.
pub const REFINE_OBJECTIVE_TOL: f64 = 1e-8;
/// Hard cap on refinement rounds.
pub const MAX_REFINE_ROUNDS: usize = 200;
/// States whose mutual information falls below this are treated as product
/// states: classical correlations and discord are exactly 0.
const PRODUCT_STATE_MI_FLOOR: f64 = 1e-9;

/// Which joint photon-detector state family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointStateKind {
    /// Pure state (|a,d> + |b,Ud>)/sqrt(2): path entangled with pointer.
    Entangled,
    /// Equal mixture of |a,d><a,d| and |b,Ud><b,Ud|: pointer correlated
    /// with the path but all path coherence lost.
    Dephased,
}

fn check_visibility(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&v) {
        return Err(Error::OutOfDomain {
            name: "V",
            value: v,
            domain: "[0, 1]",
        });
    }
    Ok(v.clamp(0.0, 1.0))
}

fn require_four_dim(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::InvalidDimension(rho.dim()));
    }
    Ok(())
}

/// Kicked pointer state (V, sqrt(1-V^2)) for a real non-negative overlap.
fn kicked_pointer(v: f64) -> (f64, f64) {
    (v, (1.0 - v * v).max(0.0).sqrt())
}

/// Builds the joint photon-detector state of the requested family.
pub fn build_joint_state(kind: JointStateKind, visibility: f64) -> Result<DensityMatrix> {
    let v = check_visibility(visibility)?;
    let (c, rest) = kicked_pointer(v);
    match kind {
        JointStateKind::Entangled => {
            let half = std::f64::consts::FRAC_1_SQRT_2;
            let psi = StateVector::new(vec![
                Complex64::new(half, 0.0),
                Complex64::ZERO,
                Complex64::new(half * c, 0.0),
                Complex64::new(half * rest, 0.0),
            ])?;
            Ok(DensityMatrix::from_pure(&psi))
        }
        JointStateKind::Dephased => {
            let path_a = StateVector::new(vec![
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ZERO,
            ])?;
            let path_b = StateVector::new(vec![
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(c, 0.0),
                Complex64::new(rest, 0.0),
            ])?;
            let m = &path_a.projector().scaled(Complex64::new(0.5, 0.0))
                + &path_b.projector().scaled(Complex64::new(0.5, 0.0));
            DensityMatrix::new(m)
        }
    }
}

/// Optimal two-outcome discrimination vectors for the two pointer states.
///
/// Returned in a numerically stable grouped form; with a = sqrt((1+m)/2)
/// and b = V/sqrt(2(1+m)) = sqrt((1-m)/2), m = sqrt(1-V^2):
/// M_A = (a, -e^{i phi} b), M_B = (-e^{-i phi} b, -a).
/// They are the +-m eigenvectors of the pointer-projector difference.
pub fn helstrom_vectors(visibility: f64, phi: f64) -> Result<(StateVector, StateVector)> {
    let v = check_visibility(visibility)?;
    if v >= 1.0 {
        return Err(Error::DegenerateVisibility(v));
    }
    if !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = (1.0 - v * v).sqrt();
    let a = ((1.0 + m) / 2.0).sqrt();
    let b = v / (2.0 * (1.0 + m)).sqrt();
    let phase = Complex64::from_polar(1.0, phi);
    let m_a = StateVector::new(vec![Complex64::new(a, 0.0), -phase * b])?;
    let m_b = StateVector::new(vec![-phase.conj() * b, Complex64::new(-a, 0.0)])?;
    Ok((m_a, m_b))
}

/// Best achievable probability of guessing the path from the detector:
/// (1 + sqrt(1-V^2))/2.
pub fn helstrom_probability(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    Ok(0.5 * (1.0 + (1.0 - v * v).sqrt()))
}

/// One detector measurement out of the (gamma, phi) family: a pair of
/// orthonormal rank-1 projectors, kept together with the parameters that
/// produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorPair {
    gamma: f64,
    phi: f64,
    vectors: [StateVector; 2],
}

impl ProjectorPair {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn vectors(&self) -> &[StateVector; 2] {
        &self.vectors
    }

    /// Projector onto measurement vector `k` (0 or 1).
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        self.vectors[k].projector()
    }
}

/// Measurement family on the detector, parametrized by (gamma, phi) for a
/// given state visibility V < 1.
///
/// Expressed over the raw pointer pair the components carry
/// 1/sqrt(1-V^2) factors that cancel; the grouped form used here, with
/// s = m sin(gamma) + V cos(gamma) and t = m cos(gamma) - V sin(gamma),
/// M_1 = (s, e^{i phi} t), M_2 = (e^{-i phi} t, -s),
/// is algebraically identical and stays stable as V -> 1.
pub fn measurement_vectors(visibility: f64, gamma: f64, phi: f64) -> Result<ProjectorPair> {
    let v = check_visibility(visibility)?;
    if v >= 1.0 {
        return Err(Error::DegenerateVisibility(v));
    }
    if !gamma.is_finite() || !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = (1.0 - v * v).sqrt();
    let s = m * gamma.sin() + v * gamma.cos();
    let t = m * gamma.cos() - v * gamma.sin();
    let phase = Complex64::from_polar(1.0, phi);
    let m1 = StateVector::new(vec![Complex64::new(s, 0.0), phase * t])
        .expect("family vectors are unit-norm by construction");
    let m2 = StateVector::new(vec![phase.conj() * t, Complex64::new(-s, 0.0)])
        .expect("family vectors are unit-norm by construction");
    Ok(ProjectorPair {
        gamma,
        phi,
        vectors: [m1, m2],
    })
}

/// Average photon entropy left after measuring the detector:
/// sum_k p_k S(rho^Q_k) with p_k = Tr[(I (x) Pi_k) rho].
///
/// Branches with p_k below [`PROBABILITY_FLOOR`] contribute zero. Branch
/// eigenvalues are taken from the unscaled sandwich block and divided by
/// p_k afterwards, so roundoff from near-vanishing branches never gets
/// amplified before the eigensolve; tiny negatives are clamped to 0.
pub fn conditional_entropy(rho: &DensityMatrix, pair: &ProjectorPair) -> Result<f64> {
    require_four_dim(rho)?;
    let i2 = ComplexMatrix::identity(2)?;
    let mut total = 0.0;
    for k in 0..2 {
        let lifted = tensor_product(&i2, &pair.projector(k))?;
        let sandwich = &(&lifted * rho.matrix()) * &lifted;
        let p = sandwich.trace().re;
        if p < PROBABILITY_FLOOR {
            continue;
        }
        let block = partial_trace_matrix(&sandwich, Subsystem::Photon);
        let branch_entropy: f64 = hermitian_eigenvalues(&block)?
            .into_iter()
            .map(|l| -xlog2((l / p).max(0.0)))
            .sum();
        total += p * branch_entropy.max(0.0);
    }
    Ok(total)
}

/// Quantum mutual information S(rho^Q) + S(rho^D) - S(rho), in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    require_four_dim(rho)?;
    let photon = partial_trace(rho, Subsystem::Photon)?;
    let detector = partial_trace(rho, Subsystem::Detector)?;
    let mi =
        von_neumann_entropy(&photon) + von_neumann_entropy(&detector) - von_neumann_entropy(rho);
    Ok(mi.max(0.0))
}

/// Result of the classical-correlation maximization: the maximum in bits
/// and the measurement parameters that attain it, gamma reduced to
/// [0, pi/2) and phi to [0, 2pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CcOptimum {
    pub cc: f64,
    pub gamma_star: f64,
    pub phi_star: f64,
}

/// Classical correlations: max over the detector measurement family of
/// S(rho^Q) - sum_k p_k S(rho^Q_k).
///
/// Coarse grid ([`GAMMA_GRID_POINTS`] x [`PHI_GRID_POINTS`], ties broken
/// toward smaller gamma then smaller phi) followed by per-coordinate
/// golden-section refinement until a full round gains less than
/// [`REFINE_OBJECTIVE_TOL`]. Product states short-circuit to zero, since
/// the measurement family degenerates exactly where correlations vanish.
pub fn classical_correlations(rho: &DensityMatrix) -> Result<CcOptimum> {
    require_four_dim(rho)?;
    let photon = partial_trace(rho, Subsystem::Photon)?;
    let detector = partial_trace(rho, Subsystem::Detector)?;
    let photon_entropy = von_neumann_entropy(&photon);
    let mi = (photon_entropy + von_neumann_entropy(&detector) - von_neumann_entropy(rho)).max(0.0);
    if mi <= PRODUCT_STATE_MI_FLOOR {
        return Ok(CcOptimum {
            cc: 0.0,
            gamma_star: FRAC_PI_4,
            phi_star: 0.0,
        });
    }

    // Anchor the family's V parameter on the detector marginal. The family
    // covers every rank-1 projective measurement for any anchor; the anchor
    // only fixes where gamma = 0 points, so reported gamma values line up
    // with the closed-form optimum for the states built here.
    let detector_top = detector
        .eigenvalues()
        .last()
        .copied()
        .expect("2x2 marginal has eigenvalues");
    let anchor = (2.0 * detector_top - 1.0).clamp(0.0, 1.0 - 1e-12);

    let objective = |gamma: f64, phi: f64| -> f64 {
        let pair =
            measurement_vectors(anchor, gamma, phi).expect("anchor visibility is capped below 1");
        let ce =
            conditional_entropy(rho, &pair).expect("conditional entropy is defined for 4x4 states");
        photon_entropy - ce
    };

    let gamma_step = FRAC_PI_2 / (GAMMA_GRID_POINTS - 1) as f64;
    let phi_step = TAU / PHI_GRID_POINTS as f64;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_gamma = 0.0;
    let mut best_phi = 0.0;
    for gi in 0..GAMMA_GRID_POINTS {
        let gamma = gi as f64 * gamma_step;
        for pi in 0..PHI_GRID_POINTS {
            let phi = pi as f64 * phi_step;
            let value = objective(gamma, phi);
            if value > best_value {
                best_value = value;
                best_gamma = gamma;
                best_phi = phi;
            }
        }
    }

    for _ in 0..MAX_REFINE_ROUNDS {
        let round_start = best_value;
        let (g, vg) = golden_max(
            |g| objective(g, best_phi),
            best_gamma - gamma_step,
            best_gamma + gamma_step,
        );
        if vg > best_value {
            best_value = vg;
            best_gamma = g;
        }
        let (p, vp) = golden_max(
            |p| objective(best_gamma, p),
            best_phi - phi_step,
            best_phi + phi_step,
        );
        if vp > best_value {
            best_value = vp;
            best_phi = p;
        }
        if best_value - round_start < REFINE_OBJECTIVE_TOL {
            break;
        }
    }

    Ok(CcOptimum {
        cc: best_value.max(0.0),
        gamma_star: best_gamma.rem_euclid(FRAC_PI_2),
        phi_star: best_phi.rem_euclid(TAU),
    })
}

/// Golden-section maximization on [lo, hi]; deterministic, returns the
/// bracket midpoint and its objective value.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-12 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Quantum discord: mutual information minus classical correlations,
/// rounded to 0 inside [`QD_NEGATIVE_TOL`] of zero.
pub fn quantum_discord(rho: &DensityMatrix) -> Result<f64> {
    let mi = mutual_information(rho)?;
    let cc = classical_correlations(rho)?.cc;
    let qd = mi - cc;
    if qd < -QD_NEGATIVE_TOL {
        debug_assert!(false, "discord {qd} below the clamp window");
        return Err(Error::NegativeDiscord(qd));
    }
    Ok(qd.max(0.0))
}

/// Probability of guessing the photon path right from one detector
/// measurement {m1, m2}: sum over outcomes of the likelier path's joint
/// probability.
pub fn path_guessing_probability(
    rho: &DensityMatrix,
    m1: &StateVector,
    m2: &StateVector,
) -> Result<f64> {
    require_four_dim(rho)?;
    if m1.dim() != 2 || m2.dim() != 2 {
        return Err(Error::InvalidDimension(m1.dim().max(m2.dim())));
    }
    let mut total = 0.0;
    for outcome in [m1, m2] {
        let proj = outcome.projector();
        // p(path, outcome) = Tr[(|path><path| (x) Pi) rho]: the detector
        // block of rho at the path's diagonal, contracted with Pi.
        let mut best_path = f64::NEG_INFINITY;
        for path in 0..2 {
            let mut p = Complex64::ZERO;
            for l in 0..2 {
                for lp in 0..2 {
                    p += proj.get(l, lp) * rho.matrix().get(2 * path + lp, 2 * path + l);
                }
            }
            best_path = best_path.max(p.re);
        }
        total += best_path;
    }
    Ok(total)
}

/// Classical correlations of the entangled family, closed form:
/// h((1+V)/2).
pub fn cc_pure_analytic(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    binary_entropy(0.5 * (1.0 + v))
}

/// Measurement angle maximizing the classical correlations of the
/// dephased family: arcsin(sqrt((1 + sqrt(1-V^2))/2)), in [pi/4, pi/2].
pub fn optimal_gamma(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    let m = (1.0 - v * v).sqrt();
    Ok(((1.0 + m) / 2.0).sqrt().clamp(-1.0, 1.0).asin())
}

/// Classical correlations of the dephased family, closed form:
/// (1+m)/2 log2(1+m) + (1-m)/2 log2(1-m), m = sqrt(1-V^2).
///
/// 1-m is computed as V^2/(1+m) to dodge cancellation at small V.
pub fn cc_dephased_analytic(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    let m = (1.0 - v * v).sqrt();
    let one_minus_m = v * v / (1.0 + m);
    Ok(0.5 * (xlog2(1.0 + m) + xlog2(one_minus_m)))
}

/// Quantum discord of the dephased family, the four-term closed form:
/// -(1+V)/2 log2((1+V)/2) - (1-V)/2 log2((1-V)/2)
/// - (1+m)/2 log2(1+m) - (1-m)/2 log2(1-m).
pub fn qd_dephased_analytic(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    let m = (1.0 - v * v).sqrt();
    let one_minus_m = v * v / (1.0 + m);
    Ok(-xlog2(0.5 * (1.0 + v))
        - xlog2(0.5 * (1.0 - v))
        - 0.5 * xlog2(1.0 + m)
        - 0.5 * xlog2(one_minus_m))
}

/// Mutual information closed forms: 2h((1+V)/2) for the entangled family,
/// h((1+V)/2) for the dephased one.
pub fn mutual_information_analytic(kind: JointStateKind, visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    let h = binary_entropy(0.5 * (1.0 + v))?;
    Ok(match kind {
        JointStateKind::Entangled => 2.0 * h,
        JointStateKind::Dephased => h,
    })
}

/// Path distinguishability for both families: D = sqrt(1-V^2).
pub fn distinguishability_analytic(visibility: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    Ok((1.0 - v * v).sqrt())
}

/// Closed form of the pre-maximization classical-correlation objective
/// for the dephased family, measured along the gamma family at phi = 0:
///
/// 1 + [cos^2 g log2 cos^2 g + sin^2 g log2 sin^2 g
///      + B log2 B + A log2 A
///      - (A + cos^2 g) log2(A + cos^2 g)
///      - (B + sin^2 g) log2(B + sin^2 g)] / 2
///
/// with A = (m sin g + V cos g)^2 and B = (m cos g - V sin g)^2.
pub fn cc_objective_dephased(visibility: f64, gamma: f64) -> Result<f64> {
    let v = check_visibility(visibility)?;
    if !gamma.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = (1.0 - v * v).sqrt();
    let (sin_g, cos_g) = gamma.sin_cos();
    let (sin2, cos2) = (sin_g * sin_g, cos_g * cos_g);
    let a = {
        let r = m * sin_g + v * cos_g;
        r * r
    };
    let b = {
        let r = m * cos_g - v * sin_g;
        r * r
    };
    Ok(1.0
        + 0.5
            * (xlog2(cos2) + xlog2(sin2) + xlog2(b) + xlog2(a) - xlog2(a + cos2) - xlog2(b + sin2)))
}

/// The full correlation picture of one joint state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationReport {
    pub visibility: f64,
    pub distinguishability: f64,
    /// Total correlations, bits.
    pub mutual_information: f64,
    /// Classically extractable share, bits.
    pub classical_correlations: f64,
    /// Quantum share I - CC, bits.
    pub quantum_discord: f64,
    pub optimal_gamma: f64,
    pub optimal_phi: f64,
}

/// Builds a state of the requested family and works out every correlation
/// quantity numerically (distinguishability through the trace norm, the
/// rest through the entropy machinery).
///
/// The report keeps QD = I - CC exact: if the optimizer lands a hair above
/// I, both CC and QD are reconciled to the clamped values.
pub fn correlation_report(kind: JointStateKind, visibility: f64) -> Result<CorrelationReport> {
    let v = check_visibility(visibility)?;
    let rho = build_joint_state(kind, v)?;
    let mi = mutual_information(&rho)?;
    let optimum = classical_correlations(&rho)?;
    let mut cc = optimum.cc;
    let raw_qd = mi - cc;
    if raw_qd < -QD_NEGATIVE_TOL {
        debug_assert!(false, "discord {raw_qd} below the clamp window");
        return Err(Error::NegativeDiscord(raw_qd));
    }
    let qd = raw_qd.max(0.0);
    if raw_qd < 0.0 {
        cc = mi;
    }
    let bloch = BlochVector::new(0.0, 0.0, 1.0).expect("unit Bloch vector is valid");
    let detector =
        DetectorModel::new(Complex64::new(v, 0.0)).expect("visibility is a valid overlap");
    Ok(CorrelationReport {
        visibility: v,
        distinguishability: distinguishability(&bloch, &detector),
        mutual_information: mi,
        classical_correlations: cc,
        quantum_discord: qd,
        optimal_gamma: optimum.gamma_star,
        optimal_phi: optimum.phi_star,
    })
}
