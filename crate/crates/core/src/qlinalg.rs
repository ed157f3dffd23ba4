//! Dense complex linear algebra sized for the photon-detector model.
//!
//! Everything lives in dimension 2 (one qubit) or 4 (photon plus detector
//! pointer). Matrices are row-major over `Complex64`. Composite indices are
//! photon-major: basis element `2*p + d` pairs photon level `p` with
//! detector level `d`.
//!
//! Eigenvalues of Hermitian matrices are computed in-house: a closed-form
//! quadratic at dimension 2 and cyclic Jacobi rotations at dimension 4.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max |A - A†| entry accepted by the validating [`DensityMatrix`] constructor.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Looser Hermiticity gate for eigenvalue and trace-norm entry points, whose
/// inputs come out of longer floating-point pipelines.
pub const EIGEN_HERMITICITY_TOL: f64 = 1e-10;
/// Max |Tr rho - 1| accepted by the [`DensityMatrix`] constructor.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in [`EIGENVALUE_FLOOR`, 0) are treated as exact zeros;
/// anything more negative fails density-matrix validation.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Max norm deviation accepted by the [`StateVector`] constructor.
pub const NORM_TOL: f64 = 1e-12;
/// Slack admitted on closed-interval domain checks of scalar inputs.
pub const DOMAIN_SLACK: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 60;
const JACOBI_CONVERGENCE: f64 = 1e-14;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

/// Dense square complex matrix of dimension 2 or 4.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        Ok(m)
    }

    /// Builds from row-major data; the length must be dim squared.
    pub fn from_data(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(data.len(), dim * dim));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Pauli x in the computational basis.
    pub fn sigma_x() -> Self {
        let o = Complex64::ONE;
        let z = Complex64::ZERO;
        Self {
            dim: 2,
            data: vec![z, o, o, z],
        }
    }

    /// Pauli y in the computational basis.
    pub fn sigma_y() -> Self {
        let i = Complex64::I;
        let z = Complex64::ZERO;
        Self {
            dim: 2,
            data: vec![z, -i, i, z],
        }
    }

    /// Pauli z in the computational basis.
    pub fn sigma_z() -> Self {
        let o = Complex64::ONE;
        let z = Complex64::ZERO;
        Self {
            dim: 2,
            data: vec![o, z, z, -o],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: vec![Complex64::ZERO; n * n],
        };
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Entrywise scaling by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Max entry of |A - A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max entrywise |A - B|, handy in tests and validation reporting.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Hermitian part (A + A†)/2, used to strip representational noise
    /// before eigenvalue iteration.
    fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                let h = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
                out.set(r, c, h);
            }
        }
        out
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: vec![Complex64::ZERO; n * n],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

/// Pure state of dimension 2 or 4, unit norm enforced at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    data: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized(deviation));
        }
        Ok(Self { data: amplitudes })
    }

    /// Computational basis state |index> of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut data = vec![Complex64::ZERO; dim];
        data[index] = Complex64::ONE;
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    /// Inner product <self|other>, conjugate-linear in self.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product |self><other|.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let n = self.dim();
        let mut m = ComplexMatrix {
            dim: n,
            data: vec![Complex64::ZERO; n * n],
        };
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.data[r] * other.data[c].conj());
            }
        }
        m
    }

    /// Projector |self><self|.
    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }

    /// Photon-major Kronecker product of two qubit states.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim() != 2 || other.dim() != 2 {
            return Err(Error::InvalidDimension(self.dim().max(other.dim())));
        }
        let mut data = Vec::with_capacity(4);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        // Product of unit vectors stays unit up to roundoff.
        Ok(Self { data })
    }
}

/// Which factor of the photon-detector pair survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Photon,
    Detector,
}

/// Validated density matrix: Hermitian, unit trace, positive semidefinite
/// within [`EIGENVALUE_FLOOR`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                defect,
                tol: HERMITICITY_TOL,
            });
        }
        let trace_dev = (mat.trace() - Complex64::ONE).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::TraceNotOne(trace_dev));
        }
        let eigenvalues = eigenvalues_of_hermitian_part(&mat);
        if let Some(&lo) = eigenvalues.first() {
            if lo < EIGENVALUE_FLOOR {
                return Err(Error::NotPositive(lo));
            }
        }
        Ok(Self { mat })
    }

    /// Projector onto a pure state, renormalized so the trace is exactly 1.
    pub fn from_pure(state: &StateVector) -> Self {
        let mut mat = state.projector();
        let trace = mat.trace().re;
        mat = mat.scaled(Complex64::new(1.0 / trace, 0.0));
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_of_hermitian_part(&self.mat)
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

/// Photon-major Kronecker product of two qubit operators.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::InvalidDimension(a.dim().max(b.dim())));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for pr in 0..2 {
        for pc in 0..2 {
            let f = a.get(pr, pc);
            for dr in 0..2 {
                for dc in 0..2 {
                    out.set(2 * pr + dr, 2 * pc + dc, f * b.get(dr, dc));
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace over one factor of a photon-detector state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::InvalidDimension(rho.dim()));
    }
    DensityMatrix::new(partial_trace_matrix(rho.matrix(), keep))
}

/// Partial trace on a raw 4x4 matrix; shared by the validated entry point
/// and the measurement internals that normalize afterwards.
pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    debug_assert_eq!(m.dim(), 4);
    let mut out = ComplexMatrix::zeros(2).expect("2 is a supported dimension");
    for r in 0..2 {
        for c in 0..2 {
            let sum = match keep {
                Subsystem::Photon => m.get(2 * r, 2 * c) + m.get(2 * r + 1, 2 * c + 1),
                Subsystem::Detector => m.get(r, c) + m.get(2 + r, 2 + c),
            };
            out.set(r, c, sum);
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Dimension 2 uses the closed-form quadratic; dimension 4 runs cyclic
/// Jacobi rotations until the off-diagonal mass is at roundoff level.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > EIGEN_HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            defect,
            tol: EIGEN_HERMITICITY_TOL,
        });
    }
    match m.dim() {
        2 => Ok(eigenvalues2(&m.hermitian_part())),
        4 => jacobi_eigenvalues(&m.hermitian_part()),
        other => Err(Error::InvalidDimension(other)),
    }
}

fn eigenvalues_of_hermitian_part(m: &ComplexMatrix) -> Vec<f64> {
    let h = m.hermitian_part();
    match h.dim() {
        2 => eigenvalues2(&h),
        _ => jacobi_eigenvalues(&h).expect("cyclic Jacobi converges for 4x4 Hermitian input"),
    }
}

fn eigenvalues2(h: &ComplexMatrix) -> Vec<f64> {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1).norm();
    let mid = 0.5 * (a + d);
    let disc = (0.5 * (a - d)).hypot(b);
    vec![mid - disc, mid + disc]
}

fn jacobi_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut a = h.clone();
    let scale = a.frobenius_norm().max(1.0);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a.get(p, q).norm_sqr();
                }
            }
            s.sqrt()
        };
        if off <= JACOBI_CONVERGENCE * scale {
            let mut eigenvalues: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
            eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
            return Ok(eigenvalues);
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= f64::EPSILON * scale {
                    continue;
                }
                // Zero a_pq: absorb its phase into the rotation, then the
                // block reduces to a real symmetric 2x2 problem.
                let theta = 0.5 * (2.0 * r).atan2(a.get(p, p).re - a.get(q, q).re);
                let phase = Complex64::from_polar(1.0, apq.arg());
                let (c, s) = (theta.cos(), theta.sin());
                let mut j = ComplexMatrix::identity(n)?;
                j.set(p, p, Complex64::new(c, 0.0));
                j.set(p, q, -phase * s);
                j.set(q, p, phase.conj() * s);
                j.set(q, q, Complex64::new(c, 0.0));
                a = &(&j.adjoint() * &a) * &j;
            }
        }
    }
    Err(Error::NoConvergence)
}

/// x log2(x) with the 0 log 0 = 0 convention.
pub(crate) fn xlog2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits. Eigenvalues in [`EIGENVALUE_FLOOR`, 0)
/// count as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .map(|l| -xlog2(l.max(0.0)))
        .sum();
    s.max(0.0)
}

/// Trace norm (sum of |eigenvalue|) of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.into_iter().map(f64::abs).sum())
}

/// Binary Shannon entropy h(p) in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&p) {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    let p = p.clamp(0.0, 1.0);
    Ok(-xlog2(p) - xlog2(1.0 - p))
}
