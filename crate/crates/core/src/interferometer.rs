//! Symmetric two-path interferometer with a which-way detector.
//!
//! A photon prepared with Bloch vector `S` enters a balanced two-path
//! interferometer; one path kicks the detector pointer from |d> to U|d>.
//! Only the overlap c = <d|U|d> of the two pointer states is observable,
//! so the detector is modeled in the two-dimensional span of {|d>, U|d>}.
//!
//! The module exposes the joint output state, the photon and detector
//! marginals, fringe visibility, path distinguishability, and the
//! trade-off bound that ties them together.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{
    tensor_product, trace_norm, ComplexMatrix, DensityMatrix, StateVector, DOMAIN_SLACK,
};

/// Number of evenly spaced phases in [0, 2pi) sampled by the operational
/// fringe scan.
pub const FRINGE_SCAN_POINTS: usize = 401;
/// Slack admitted when checking the trade-off inequalities.
pub const DUALITY_TOL: f64 = 1e-9;
/// Below this a priori visibility the main trade-off bound divides by
/// (numerically) zero and is reported as undefined.
pub const APRIORI_VISIBILITY_FLOOR: f64 = 1e-9;

/// Photon preparation: Bloch vector of the input qubit state.
///
/// `s_x` encodes the path-population imbalance, `s_z + i s_y` the input
/// coherence between the paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    s_x: f64,
    s_y: f64,
    s_z: f64,
}

impl BlochVector {
    pub fn new(s_x: f64, s_y: f64, s_z: f64) -> Result<Self> {
        if !(s_x.is_finite() && s_y.is_finite() && s_z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr = s_x * s_x + s_y * s_y + s_z * s_z;
        if norm_sqr > 1.0 + DOMAIN_SLACK {
            return Err(Error::BlochNormExceeded(norm_sqr.sqrt()));
        }
        Ok(Self { s_x, s_y, s_z })
    }

    pub fn s_x(&self) -> f64 {
        self.s_x
    }

    pub fn s_y(&self) -> f64 {
        self.s_y
    }

    pub fn s_z(&self) -> f64 {
        self.s_z
    }

    /// P = |s_x|: how well the path can be predicted before any detection.
    pub fn predictability(&self) -> f64 {
        self.s_x.abs()
    }

    /// V0 = sqrt(s_y^2 + s_z^2): fringe visibility a perfect (decoupled)
    /// interferometer would show for this preparation.
    pub fn a_priori_visibility(&self) -> f64 {
        self.s_y.hypot(self.s_z)
    }

    /// Phase alpha of s_z + i s_y; defined as 0 when the coherence vanishes.
    pub fn coherence_phase(&self) -> f64 {
        if self.s_y == 0.0 && self.s_z == 0.0 {
            0.0
        } else {
            self.s_y.atan2(self.s_z)
        }
    }
}

/// Which-way detector, reduced to the single observable that matters:
/// the overlap c = <d|U|d> between the resting and kicked pointer states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorModel {
    overlap: Complex64,
}

impl DetectorModel {
    /// Overlaps in the tolerance band just above unit modulus are rescaled
    /// onto the unit circle so that downstream pointer states stay
    /// normalized to working precision.
    pub fn new(overlap: Complex64) -> Result<Self> {
        if !overlap.re.is_finite() || !overlap.im.is_finite() {
            return Err(Error::NonFinite);
        }
        let mag = overlap.norm();
        if mag > 1.0 + DOMAIN_SLACK {
            return Err(Error::OverlapExceeded(mag));
        }
        let overlap = if mag > 1.0 { overlap / mag } else { overlap };
        Ok(Self { overlap })
    }

    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }

    /// |c|: the factor by which the detector erodes fringe visibility.
    pub fn visibility(&self) -> f64 {
        self.overlap.norm().min(1.0)
    }

    /// Phase beta of the overlap; defined as 0 when c = 0.
    pub fn overlap_phase(&self) -> f64 {
        if self.overlap == Complex64::ZERO {
            0.0
        } else {
            self.overlap.arg()
        }
    }

    /// Resting pointer state |d> = (1, 0).
    pub fn pointer_in(&self) -> StateVector {
        StateVector::basis(2, 0).expect("basis state of dimension 2 is valid")
    }

    /// Kicked pointer state U|d> = (c, sqrt(1 - |c|^2)), second amplitude
    /// real non-negative.
    pub fn pointer_out(&self) -> StateVector {
        let c = self.overlap;
        let rest = (1.0 - c.norm_sqr()).max(0.0).sqrt();
        StateVector::new(vec![c, Complex64::new(rest, 0.0)])
            .expect("pointer amplitudes are unit-norm by construction")
    }
}

/// One full interferometer setting: photon preparation, detector, and the
/// relative phase accumulated between the paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Configuration {
    bloch: BlochVector,
    detector: DetectorModel,
    phi: f64,
}

impl Configuration {
    /// The phase is folded into [0, 2pi).
    pub fn new(bloch: BlochVector, detector: DetectorModel, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        let phi = phi.rem_euclid(TAU);
        Ok(Self {
            bloch,
            detector,
            phi,
        })
    }

    pub fn bloch(&self) -> &BlochVector {
        &self.bloch
    }

    pub fn detector(&self) -> &DetectorModel {
        &self.detector
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Balanced beam splitter: |a> -> (|a>+|b>)/sqrt(2), |b> -> (|a>-|b>)/sqrt(2).
pub fn beam_splitter_map(input: &StateVector) -> StateVector {
    assert_eq!(input.dim(), 2, "beam splitter acts on a path qubit");
    let amp = input.amplitudes();
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![(amp[0] + amp[1]) * inv, (amp[0] - amp[1]) * inv])
        .expect("unitary map preserves the norm")
}

/// Photon input state (1 + s_x sigma_x + s_y sigma_y + s_z sigma_z)/2.
pub fn photon_initial_state(bloch: &BlochVector) -> DensityMatrix {
    let m = &(&ComplexMatrix::identity(2).expect("2 is a supported dimension")
        + &ComplexMatrix::sigma_x().scaled(Complex64::new(bloch.s_x(), 0.0)))
        + &(&ComplexMatrix::sigma_y().scaled(Complex64::new(bloch.s_y(), 0.0))
            + &ComplexMatrix::sigma_z().scaled(Complex64::new(bloch.s_z(), 0.0)));
    DensityMatrix::new(m.scaled(Complex64::new(0.5, 0.0)))
        .expect("a Bloch vector inside the unit ball gives a valid state")
}

/// Joint photon-detector state after the full interferometer pass.
///
/// Four terms: two population terms tied to the resting and kicked pointer
/// projectors, and two coherence terms carrying the input coherence
/// s_z + i s_y, the phase e^{i phi}, and the pointer cross terms.
pub fn evolve_joint(config: &Configuration) -> DensityMatrix {
    let b = config.bloch();
    let det = config.detector();
    let d_in = det.pointer_in();
    let d_out = det.pointer_out();

    let i2 = ComplexMatrix::identity(2).expect("2 is a supported dimension");
    let sx = ComplexMatrix::sigma_x();
    let coherence = Complex64::new(b.s_z(), b.s_y());
    let phase = Complex64::from_polar(1.0, config.phi());

    let plus_x = &i2 + &sx;
    let minus_x = &i2 - &sx;
    let sz_minus_isy = &ComplexMatrix::sigma_z() - &ComplexMatrix::sigma_y().scaled(Complex64::I);
    let sz_plus_isy = &ComplexMatrix::sigma_z() + &ComplexMatrix::sigma_y().scaled(Complex64::I);

    let t1 = tensor_product(&plus_x, &d_in.projector())
        .expect("factors are 2x2")
        .scaled(Complex64::new(0.25 * (1.0 - b.s_x()), 0.0));
    let t2 = tensor_product(&minus_x, &d_out.projector())
        .expect("factors are 2x2")
        .scaled(Complex64::new(0.25 * (1.0 + b.s_x()), 0.0));
    let t3 = tensor_product(&sz_minus_isy, &d_in.outer(&d_out))
        .expect("factors are 2x2")
        .scaled(phase.conj() * coherence.conj() * -0.25);
    let t4 = tensor_product(&sz_plus_isy, &d_out.outer(&d_in))
        .expect("factors are 2x2")
        .scaled(phase * coherence * -0.25);

    DensityMatrix::new(&(&t1 + &t2) + &(&t3 + &t4))
        .expect("the assembled output state is a valid density matrix")
}

/// Photon marginal of the interferometer output, assembled directly.
///
/// Tracing the detector leaves only the overlap c in the coherence terms:
/// with w = e^{i phi} (s_z + i s_y) c the state is
/// (1 - s_x sigma_x + Im(w) sigma_y - Re(w) sigma_z)/2. Agrees with the
/// partial trace of [`evolve_joint`] entrywise.
pub fn reduced_photon_state(config: &Configuration) -> DensityMatrix {
    let b = config.bloch();
    let w = Complex64::from_polar(1.0, config.phi())
        * Complex64::new(b.s_z(), b.s_y())
        * config.detector().overlap();
    let m = &(&ComplexMatrix::identity(2).expect("2 is a supported dimension")
        + &ComplexMatrix::sigma_x().scaled(Complex64::new(-b.s_x(), 0.0)))
        + &(&ComplexMatrix::sigma_y().scaled(Complex64::new(w.im, 0.0))
            + &ComplexMatrix::sigma_z().scaled(Complex64::new(-w.re, 0.0)));
    DensityMatrix::new(m.scaled(Complex64::new(0.5, 0.0)))
        .expect("the traced-out photon state is a valid density matrix")
}

/// Probability of the photon leaving through output port a:
/// 1/2 - 1/2 V0 |c| cos(alpha + beta + phi).
pub fn output_probability(config: &Configuration) -> f64 {
    let b = config.bloch();
    let det = config.detector();
    let total = b.coherence_phase() + det.overlap_phase() + config.phi();
    let p = 0.5 - 0.5 * b.a_priori_visibility() * det.visibility() * total.cos();
    p.clamp(0.0, 1.0)
}

/// Fringe visibility V = V0 |c| of the output port probabilities.
pub fn fringe_visibility(bloch: &BlochVector, detector: &DetectorModel) -> f64 {
    bloch.a_priori_visibility() * detector.visibility()
}

/// Operational fringe visibility: scan the output probability over
/// [`FRINGE_SCAN_POINTS`] phases, read P_max and P_min off the grid with a
/// three-point parabolic vertex refinement, and return
/// (P_max - P_min)/(P_max + P_min).
///
/// The probabilities come from the reduced-state matrix elements, not the
/// closed-form fringe law, so this is an independent route to V.
pub fn fringe_visibility_scanned(bloch: &BlochVector, detector: &DetectorModel) -> f64 {
    let n = FRINGE_SCAN_POINTS;
    let samples: Vec<f64> = (0..n)
        .map(|k| {
            let phi = k as f64 * TAU / n as f64;
            let config =
                Configuration::new(*bloch, *detector, phi).expect("grid phases are finite");
            reduced_photon_state(&config).matrix().get(0, 0).re
        })
        .collect();

    let (mut k_max, mut k_min) = (0usize, 0usize);
    for (k, &y) in samples.iter().enumerate() {
        if y > samples[k_max] {
            k_max = k;
        }
        if y < samples[k_min] {
            k_min = k;
        }
    }
    let neighborhood = |k: usize| (samples[(k + n - 1) % n], samples[k], samples[(k + 1) % n]);
    let (ym, y0, yp) = neighborhood(k_max);
    let p_max = refine_extremum(ym, y0, yp, true);
    let (ym, y0, yp) = neighborhood(k_min);
    let p_min = refine_extremum(ym, y0, yp, false);

    let sum = p_max + p_min;
    if sum <= 0.0 {
        return 0.0;
    }
    ((p_max - p_min) / sum).clamp(0.0, 1.0)
}

/// Vertex value of the parabola through three equally spaced samples.
/// Falls back to the central sample when the curvature has the wrong sign
/// or vanishes (flat fringe).
fn refine_extremum(y_minus: f64, y_center: f64, y_plus: f64, want_max: bool) -> f64 {
    let curvature = y_plus - 2.0 * y_center + y_minus;
    let usable = if want_max {
        curvature < 0.0
    } else {
        curvature > 0.0
    };
    if !usable {
        return y_center;
    }
    let slope = y_plus - y_minus;
    y_center - slope * slope / (8.0 * curvature)
}

/// Detector marginal after the pass: (1-s_x)/2 |d><d| + (1+s_x)/2 U|d><d|U.
pub fn detector_final_state(bloch: &BlochVector, detector: &DetectorModel) -> DensityMatrix {
    let p_in = detector.pointer_in().projector();
    let p_out = detector.pointer_out().projector();
    let m = &p_in.scaled(Complex64::new(0.5 * (1.0 - bloch.s_x()), 0.0))
        + &p_out.scaled(Complex64::new(0.5 * (1.0 + bloch.s_x()), 0.0));
    DensityMatrix::new(m).expect("a convex mixture of pointer projectors is a valid state")
}

/// Detector marginal for an arbitrary (possibly mixed) initial pointer
/// state and an explicit unitary kick U.
pub fn detector_final_state_mixed(
    bloch: &BlochVector,
    pointer_in: &DensityMatrix,
    kick: &ComplexMatrix,
) -> Result<DensityMatrix> {
    if pointer_in.dim() != 2 || kick.dim() != 2 {
        return Err(Error::InvalidDimension(pointer_in.dim().max(kick.dim())));
    }
    let kicked = &(kick * pointer_in.matrix()) * &kick.adjoint();
    let m = &pointer_in
        .matrix()
        .scaled(Complex64::new(0.5 * (1.0 - bloch.s_x()), 0.0))
        + &kicked.scaled(Complex64::new(0.5 * (1.0 + bloch.s_x()), 0.0));
    // A non-unitary kick produces a non-state and is rejected here.
    DensityMatrix::new(m)
}

/// Path distinguishability D: trace norm of the difference between the
/// weighted pointer states tied to the two paths.
pub fn distinguishability(bloch: &BlochVector, detector: &DetectorModel) -> f64 {
    let p_in = detector.pointer_in().projector();
    let p_out = detector.pointer_out().projector();
    let diff = &p_in.scaled(Complex64::new(0.5 * (1.0 - bloch.s_x()), 0.0))
        - &p_out.scaled(Complex64::new(0.5 * (1.0 + bloch.s_x()), 0.0));
    trace_norm(&diff).expect("difference of weighted pointer projectors is Hermitian")
}

/// [`distinguishability`] for an arbitrary initial pointer state and an
/// explicit unitary kick.
pub fn distinguishability_mixed(
    bloch: &BlochVector,
    pointer_in: &DensityMatrix,
    kick: &ComplexMatrix,
) -> Result<f64> {
    if pointer_in.dim() != 2 || kick.dim() != 2 {
        return Err(Error::InvalidDimension(pointer_in.dim().max(kick.dim())));
    }
    let kicked = &(kick * pointer_in.matrix()) * &kick.adjoint();
    let diff = &pointer_in
        .matrix()
        .scaled(Complex64::new(0.5 * (1.0 - bloch.s_x()), 0.0))
        - &kicked.scaled(Complex64::new(0.5 * (1.0 + bloch.s_x()), 0.0));
    trace_norm(&diff)
}

/// One evaluated inequality: its left-hand side and whether it stays at or
/// below 1 within [`DUALITY_TOL`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub holds: bool,
}

/// The two trade-off relations for one preparation and detector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityReport {
    /// D^2 + (1-P^2)/V0^2 * V^2 <= 1; undefined when V0 is numerically zero.
    pub main: Option<BoundCheck>,
    /// P^2 + V0^2 <= 1, a constraint on the preparation alone.
    pub preparation: BoundCheck,
}

/// Evaluates both trade-off relations.
pub fn duality_check(bloch: &BlochVector, detector: &DetectorModel) -> DualityReport {
    let p = bloch.predictability();
    let v0 = bloch.a_priori_visibility();
    let prep_lhs = p * p + v0 * v0;
    let preparation = BoundCheck {
        lhs: prep_lhs,
        holds: prep_lhs <= 1.0 + DUALITY_TOL,
    };
    let main = (v0 > APRIORI_VISIBILITY_FLOOR).then(|| {
        let v = fringe_visibility(bloch, detector);
        let d = distinguishability(bloch, detector);
        let lhs = d * d + (1.0 - p * p) / (v0 * v0) * (v * v);
        BoundCheck {
            lhs,
            holds: lhs <= 1.0 + DUALITY_TOL,
        }
    });
    DualityReport { main, preparation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{partial_trace, Subsystem};

    const EPS: f64 = 1e-12;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simple_bloch() -> BlochVector {
        BlochVector::new(0.0, 0.0, 1.0).unwrap()
    }

    fn detector(re: f64, im: f64) -> DetectorModel {
        DetectorModel::new(c64(re, im)).unwrap()
    }

    #[test]
    fn beam_splitter_examples() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(2, 1).unwrap();
        let half = std::f64::consts::FRAC_1_SQRT_2;

        let out_a = beam_splitter_map(&a);
        assert!((out_a.amplitudes()[0] - c64(half, 0.0)).norm() < EPS);
        assert!((out_a.amplitudes()[1] - c64(half, 0.0)).norm() < EPS);

        let out_b = beam_splitter_map(&b);
        assert!((out_b.amplitudes()[0] - c64(half, 0.0)).norm() < EPS);
        assert!((out_b.amplitudes()[1] - c64(-half, 0.0)).norm() < EPS);

        // The map is an involution.
        let back = beam_splitter_map(&out_a);
        assert!((back.amplitudes()[0] - Complex64::ONE).norm() < EPS);
        assert!(back.amplitudes()[1].norm() < EPS);
    }

    #[test]
    fn bloch_vector_validation() {
        assert!(BlochVector::new(0.8, 0.0, 0.7).is_err());
        assert!(BlochVector::new(f64::NAN, 0.0, 0.0).is_err());
        let b = BlochVector::new(0.6, 0.0, 0.8).unwrap();
        assert!((b.predictability() - 0.6).abs() < EPS);
        assert!((b.a_priori_visibility() - 0.8).abs() < EPS);
    }

    #[test]
    fn detector_model_validation() {
        assert!(DetectorModel::new(c64(1.1, 0.0)).is_err());
        assert!(DetectorModel::new(c64(f64::NAN, 0.0)).is_err());
        let d = detector(0.6, 0.0);
        assert!((d.visibility() - 0.6).abs() < EPS);
        let out = d.pointer_out();
        assert!((out.amplitudes()[1] - c64(0.8, 0.0)).norm() < EPS);
    }

    #[test]
    fn photon_initial_state_examples() {
        let up = photon_initial_state(&simple_bloch());
        let expect = StateVector::basis(2, 0).unwrap().projector();
        assert!(up.matrix().max_abs_diff(&expect) < EPS);

        let mixed = photon_initial_state(&BlochVector::new(0.0, 0.0, 0.0).unwrap());
        assert!((mixed.matrix().get(0, 0).re - 0.5).abs() < EPS);
        assert!(mixed.matrix().get(0, 1).norm() < EPS);

        // Unit-norm coherent preparation stays pure.
        let theta: f64 = std::f64::consts::FRAC_PI_3;
        let pure = photon_initial_state(&BlochVector::new(0.0, -theta.sin(), theta.cos()).unwrap());
        let ev = pure.eigenvalues();
        assert!(ev[0].abs() < EPS);
        assert!((ev[1] - 1.0).abs() < EPS);
    }

    #[test]
    fn joint_state_decoupled_detector_is_pure_product() {
        let config = Configuration::new(simple_bloch(), detector(1.0, 0.0), 0.0).unwrap();
        let joint = evolve_joint(&config);
        assert!((joint.purity() - 1.0).abs() < 1e-10);
        assert!((fringe_visibility(config.bloch(), config.detector()) - 1.0).abs() < EPS);
    }

    #[test]
    fn joint_state_orthogonal_pointers_erase_fringes() {
        let config = Configuration::new(simple_bloch(), detector(0.0, 0.0), 0.0).unwrap();
        let reduced = reduced_photon_state(&config);
        let half_identity = ComplexMatrix::identity(2).unwrap().scaled(c64(0.5, 0.0));
        assert!(reduced.matrix().max_abs_diff(&half_identity) < EPS);
    }

    #[test]
    fn joint_state_pure_path_has_no_coherence_terms() {
        let bloch = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        let det = detector(0.6, 0.0);
        let config = Configuration::new(bloch, det, 0.7).unwrap();
        let joint = evolve_joint(&config);

        let minus_x = &ComplexMatrix::identity(2).unwrap() - &ComplexMatrix::sigma_x();
        let expect = tensor_product(&minus_x, &det.pointer_out().projector())
            .unwrap()
            .scaled(c64(0.5, 0.0));
        assert!(joint.matrix().max_abs_diff(&expect) < EPS);
    }

    #[test]
    fn reduced_state_routes_agree() {
        let bloch = BlochVector::new(0.3, -0.4, 0.5).unwrap();
        let det = detector(0.5, 0.3);
        let config = Configuration::new(bloch, det, 1.1).unwrap();
        let via_trace = partial_trace(&evolve_joint(&config), Subsystem::Photon).unwrap();
        let direct = reduced_photon_state(&config);
        assert!(via_trace.matrix().max_abs_diff(direct.matrix()) < 1e-10);
    }

    #[test]
    fn output_probability_examples() {
        let config = Configuration::new(simple_bloch(), detector(0.6, 0.0), 0.0).unwrap();
        assert!((output_probability(&config) - 0.2).abs() < EPS);

        for phi in [0.0, 0.4, 2.0, 5.5] {
            let config = Configuration::new(simple_bloch(), detector(0.0, 0.0), phi).unwrap();
            assert!((output_probability(&config) - 0.5).abs() < EPS);
        }

        let config =
            Configuration::new(simple_bloch(), detector(1.0, 0.0), std::f64::consts::PI).unwrap();
        assert!((output_probability(&config) - 1.0).abs() < EPS);
    }

    #[test]
    fn output_probability_matches_reduced_state_element() {
        let bloch = BlochVector::new(0.2, 0.5, -0.3).unwrap();
        let det = detector(-0.4, 0.45);
        for phi in [0.0, 0.9, 2.3, 4.4] {
            let config = Configuration::new(bloch, det, phi).unwrap();
            let from_state = reduced_photon_state(&config).matrix().get(0, 0).re;
            assert!((output_probability(&config) - from_state).abs() < 1e-12);
        }
    }

    #[test]
    fn fringe_visibility_examples() {
        assert!((fringe_visibility(&simple_bloch(), &detector(0.6, 0.0)) - 0.6).abs() < EPS);
        assert!(fringe_visibility(&simple_bloch(), &detector(0.0, 0.0)).abs() < EPS);
        let no_coherence = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        assert!(fringe_visibility(&no_coherence, &detector(0.9, 0.1)).abs() < EPS);
    }

    #[test]
    fn scanned_visibility_matches_formula() {
        let cases = [
            (simple_bloch(), detector(0.6, 0.0)),
            (simple_bloch(), detector(0.0, 0.0)),
            (
                BlochVector::new(0.2, 0.5, -0.3).unwrap(),
                detector(-0.35, 0.45),
            ),
            (
                BlochVector::new(0.0, 0.6, 0.35).unwrap(),
                detector(0.1, -0.93),
            ),
            (simple_bloch(), detector(0.999, 0.0)),
        ];
        for (bloch, det) in cases {
            let formula = fringe_visibility(&bloch, &det);
            let scanned = fringe_visibility_scanned(&bloch, &det);
            assert!(
                (formula - scanned).abs() < 1e-6,
                "formula {formula} vs scan {scanned}"
            );
        }
    }

    #[test]
    fn detector_final_state_examples() {
        let balanced = detector_final_state(&simple_bloch(), &detector(0.0, 0.0));
        let half_identity = ComplexMatrix::identity(2).unwrap().scaled(c64(0.5, 0.0));
        assert!(balanced.matrix().max_abs_diff(&half_identity) < EPS);

        let path_b = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        let det = detector(0.6, 0.0);
        let kicked_only = detector_final_state(&path_b, &det);
        assert!(
            kicked_only
                .matrix()
                .max_abs_diff(&det.pointer_out().projector())
                < EPS
        );

        let ev = detector_final_state(&simple_bloch(), &det).eigenvalues();
        assert!((ev[0] - 0.2).abs() < EPS);
        assert!((ev[1] - 0.8).abs() < EPS);
    }

    #[test]
    fn distinguishability_examples() {
        let b = simple_bloch();
        assert!((distinguishability(&b, &detector(0.6, 0.0)) - 0.8).abs() < 1e-10);
        assert!(distinguishability(&b, &detector(1.0, 0.0)).abs() < 1e-10);
        assert!((distinguishability(&b, &detector(0.0, 0.0)) - 1.0).abs() < 1e-10);
        // Closed form for balanced paths and a pure detector.
        for mag in [0.1f64, 0.35, 0.77, 0.95] {
            let expect = (1.0 - mag * mag).sqrt();
            assert!((distinguishability(&b, &detector(mag, 0.0)) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn mixed_detector_entry_points_match_pure_case() {
        let bloch = BlochVector::new(0.3, 0.2, 0.6).unwrap();
        let det = detector(0.5, 0.3);
        let c = det.overlap();
        let rest = (1.0 - c.norm_sqr()).sqrt();
        // Unitary kick with first column (c, rest).
        let kick = ComplexMatrix::from_data(2, vec![c, c64(-rest, 0.0), c64(rest, 0.0), c.conj()])
            .unwrap();
        let pointer = DensityMatrix::from_pure(&det.pointer_in());

        let mixed = detector_final_state_mixed(&bloch, &pointer, &kick).unwrap();
        let pure = detector_final_state(&bloch, &det);
        assert!(mixed.matrix().max_abs_diff(pure.matrix()) < EPS);

        let d_mixed = distinguishability_mixed(&bloch, &pointer, &kick).unwrap();
        assert!((d_mixed - distinguishability(&bloch, &det)).abs() < 1e-10);
    }

    #[test]
    fn non_unitary_kick_is_rejected() {
        let bloch = simple_bloch();
        let pointer = DensityMatrix::from_pure(&StateVector::basis(2, 0).unwrap());
        let stretch = ComplexMatrix::identity(2).unwrap().scaled(c64(1.5, 0.0));
        assert!(detector_final_state_mixed(&bloch, &pointer, &stretch).is_err());
    }

    #[test]
    fn duality_saturates_for_balanced_pure_preparations() {
        for (re, im) in [(0.0, 0.0), (0.3, 0.0), (0.5, 0.5), (0.0, -0.8), (1.0, 0.0)] {
            let report = duality_check(&simple_bloch(), &detector(re, im));
            let main = report.main.expect("V0 = 1 defines the main bound");
            assert!((main.lhs - 1.0).abs() < DUALITY_TOL, "lhs {}", main.lhs);
            assert!(main.holds);
            assert!(report.preparation.holds);
        }
    }

    #[test]
    fn duality_undefined_without_a_priori_visibility() {
        let bloch = BlochVector::new(0.5, 0.0, 0.0).unwrap();
        let report = duality_check(&bloch, &detector(0.6, 0.0));
        assert!(report.main.is_none());
        assert!(report.preparation.holds);
    }

    #[test]
    fn phase_is_normalized() {
        let config = Configuration::new(simple_bloch(), detector(0.5, 0.0), 7.0).unwrap();
        assert!((config.phi() - (7.0 - TAU)).abs() < EPS);
        assert!(Configuration::new(simple_bloch(), detector(0.5, 0.0), f64::NAN).is_err());
    }
}
