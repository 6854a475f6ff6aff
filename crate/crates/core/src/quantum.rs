//! Minimal finite-dimensional quantum mechanics.
//!
//! Pure states, density operators, POVM effects and PVMs on a small Hilbert
//! space (N <= 8), together with the Born rule and the qubit Bloch-vector
//! correspondence. The computational basis convention is fixed: `|0>` maps to
//! the Bloch vector `+z`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on state normalization and density-operator checks.
pub const STATE_TOL: f64 = 1e-12;
/// Tolerance on projector algebra (idempotence, orthogonality, completeness).
pub const PVM_TOL: f64 = 1e-10;
/// Tolerance for ray comparison: `|<a|b>| = 1` within this.
pub const RAY_TOL: f64 = 1e-10;
/// Probabilities within this distance outside `[0, 1]` are clamped.
pub const CLAMP_TOL: f64 = 1e-9;

const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    // Symmetrize first so tiny anti-Hermitian noise does not leak in.
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// A normalized vector in C^N, N >= 2. Equality is equality of rays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Build from amplitudes that must already have unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidState(format!(
                "dimension {} < 2",
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm2} != 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Build from arbitrary nonzero amplitudes, rescaling to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 1e-300 {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index>` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(dim >= 2 && index < dim, "basis index out of range");
        let mut amplitudes = vec![C0; dim];
        amplitudes[index] = C1;
        Self { amplitudes }
    }

    /// The real qubit state `cos(angle)|0> + sin(angle)|1>`.
    pub fn qubit_angle(angle: f64) -> Self {
        Self {
            amplitudes: vec![
                Complex64::new(angle.cos(), 0.0),
                Complex64::new(angle.sin(), 0.0),
            ],
        }
    }

    /// Haar-random pure state via normalized complex Gaussians.
    pub fn random(dim: usize, rng: &mut Rng) -> Self {
        loop {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng::standard_normal(rng), rng::standard_normal(rng)))
                .collect();
            if let Ok(s) = Self::normalized(amps) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        if self.dim() != other.dim() {
            return 0.0;
        }
        self.inner(other).norm_sqr()
    }

    /// Ray equality: `|<a|b>| = 1` within [`RAY_TOL`].
    pub fn same_ray(&self, other: &PureState) -> bool {
        self.dim() == other.dim() && (1.0 - self.inner(other).norm()).abs() <= RAY_TOL
    }

    pub fn column(&self) -> nalgebra::DVector<Complex64> {
        nalgebra::DVector::from_column_slice(&self.amplitudes)
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> CMatrix {
        let v = self.column();
        &v * v.adjoint()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
        }
    }

    /// `<psi|M|psi>` (real part).
    pub fn expectation(&self, m: &CMatrix) -> f64 {
        let v = self.column();
        (v.adjoint() * m * &v)[(0, 0)].re
    }

    /// Orthogonal qubit state: `(-b*, a*)`.
    pub fn qubit_perp(&self) -> Result<PureState> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        Ok(PureState {
            amplitudes: vec![-b.conj(), a.conj()],
        })
    }

    pub fn apply(&self, u: &CMatrix) -> Result<PureState> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        let v = u * self.column();
        PureState::normalized(v.iter().copied().collect())
    }
}

/// Unit Bloch vector of a qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(components: [f64; 3]) -> Result<Self> {
        let n = norm3(&components);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("Bloch vector norm {n} != 1")));
        }
        Ok(Self(components))
    }

    /// Rescale a nonzero vector to unit length.
    pub fn normalized(components: [f64; 3]) -> Result<Self> {
        let n = norm3(&components);
        if !n.is_finite() || n <= 1e-300 {
            return Err(Error::InvalidState("zero Bloch vector".into()));
        }
        Ok(Self(components.map(|c| c / n)))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &[f64; 3]) -> f64 {
        dot3(&self.0, other)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.map(|c| -c))
    }

    /// Angle to another unit vector, in `[0, pi]`.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        self.dot(&other.0).clamp(-1.0, 1.0).acos()
    }

    pub fn random(rng: &mut Rng) -> Self {
        Self(rng::uniform_sphere(rng))
    }
}

pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Bloch vector of a qubit state: `|psi><psi| = 1/2 (1 + v.sigma)`.
pub fn bloch_from_state(psi: &PureState) -> Result<BlochVector> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    let (a, b) = (psi.amplitudes[0], psi.amplitudes[1]);
    let ab = a.conj() * b;
    BlochVector::normalized([2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()])
}

/// Inverse of [`bloch_from_state`], unique up to global phase.
pub fn state_from_bloch(v: &BlochVector) -> PureState {
    let [x, y, z] = v.0;
    let theta = z.clamp(-1.0, 1.0).acos();
    let phi = y.atan2(x);
    PureState {
        amplitudes: vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ],
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::InvalidOperator("density operator must be square, N >= 2".into()));
        }
        if hermitian_defect(&matrix) > STATE_TOL {
            return Err(Error::InvalidOperator("density operator not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidOperator(format!("trace {tr} != 1")));
        }
        if eigenvalues(&matrix).iter().any(|&e| e < -STATE_TOL) {
            return Err(Error::InvalidOperator("negative eigenvalue".into()));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Maximum entrywise distance to another operator.
    pub fn distance(&self, other: &DensityOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }
}

/// A POVM effect: Hermitian with spectrum in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct PovmEffect {
    matrix: CMatrix,
}

impl PovmEffect {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidOperator("effect must be square".into()));
        }
        if hermitian_defect(&matrix) > STATE_TOL {
            return Err(Error::InvalidOperator("effect not Hermitian".into()));
        }
        let ev = eigenvalues(&matrix);
        if ev.iter().any(|&e| !(-STATE_TOL..=1.0 + STATE_TOL).contains(&e)) {
            return Err(Error::InvalidOperator(format!(
                "effect eigenvalues {ev:?} outside [0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn projector(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `1 - E`.
    pub fn complement(&self) -> Self {
        Self {
            matrix: CMatrix::identity(self.dim(), self.dim()) - &self.matrix,
        }
    }

    /// `sum_i w_i |psi_i><psi_i|`.
    pub fn from_decomposition(terms: &[(f64, PureState)]) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidOperator("empty decomposition".into()))?;
        let mut m = CMatrix::zeros(dim, dim);
        for (w, s) in terms {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if *w < 0.0 {
                return Err(Error::InvalidOperator("negative weight".into()));
            }
            m += s.projector().scale(*w);
        }
        Self::new(m)
    }

    pub fn distance(&self, other: &PovmEffect) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }
}

/// An ordered projector-valued measure.
#[derive(Debug, Clone)]
pub struct Pvm {
    projectors: Vec<PovmEffect>,
}

impl Pvm {
    pub fn new(projectors: Vec<PovmEffect>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(PovmEffect::dim)
            .ok_or_else(|| Error::InvalidOperator("empty PVM".into()))?;
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            let m = p.matrix();
            if max_abs(&(m * m - m)) > PVM_TOL {
                return Err(Error::InvalidOperator(format!("projector {i} not idempotent")));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if max_abs(&(m * q.matrix())) > PVM_TOL {
                    return Err(Error::InvalidOperator(format!(
                        "projectors {i} and {j} not orthogonal"
                    )));
                }
            }
            sum += m;
        }
        if max_abs(&(sum - CMatrix::identity(dim, dim))) > PVM_TOL {
            return Err(Error::InvalidOperator("projectors do not sum to identity".into()));
        }
        Ok(Self { projectors })
    }

    /// Rank-one PVM from an orthonormal basis.
    pub fn from_basis(basis: &[PureState]) -> Result<Self> {
        Self::new(basis.iter().map(PovmEffect::projector).collect())
    }

    /// Two-outcome PVM `{|psi><psi|, 1 - |psi><psi|}`.
    pub fn binary(psi: &PureState) -> Self {
        let p = PovmEffect::projector(psi);
        let q = p.complement();
        Self {
            projectors: vec![p, q],
        }
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            projectors: (0..dim)
                .map(|i| PovmEffect::projector(&PureState::basis(dim, i)))
                .collect(),
        }
    }

    pub fn projectors(&self) -> &[PovmEffect] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// The unit vector spanned by a rank-one projector, if it is rank one.
    pub fn rank_one_vector(&self, k: usize) -> Option<PureState> {
        let m = self.projectors.get(k)?.matrix();
        let rank = m.trace().re;
        if (rank - 1.0).abs() > 1e-8 {
            return None;
        }
        // Column j of |b><b| is b * conj(b_j); pick the largest diagonal.
        let (j, d) = (0..m.nrows())
            .map(|j| (j, m[(j, j)].re))
            .fold((0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
        let scale = d.sqrt();
        PureState::normalized(m.column(j).iter().map(|z| z / scale).collect()).ok()
    }
}

/// Born rule: `tr(E rho)`, clamped to `[0, 1]` when within [`CLAMP_TOL`].
pub fn born_probability(rho: &DensityOperator, effect: &PovmEffect) -> Result<f64> {
    if rho.dim() != effect.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: effect.dim(),
        });
    }
    let p = (effect.matrix() * rho.matrix()).trace().re;
    clamp_probability(p)
}

pub fn clamp_probability(p: f64) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Convex combination `sum_i p_i rho_i`.
pub fn convex_combine(terms: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidOperator("empty convex combination".into()))?;
    let dim = first.1.dim();
    let total: f64 = terms.iter().map(|(w, _)| *w).sum();
    if terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > STATE_TOL {
        return Err(Error::WeightSum(total));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (w, rho) in terms {
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rho.dim(),
            });
        }
        m += rho.matrix().scale(*w);
    }
    DensityOperator::new(m)
}

/// Haar-random unitary: QR of a complex Gaussian matrix with phase fix.
pub fn random_unitary(dim: usize, rng: &mut Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng::standard_normal(rng), rng::standard_normal(rng))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C1
        }
    }));
    q * phases
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && max_abs(&(u.adjoint() * u - CMatrix::identity(u.nrows(), u.nrows()))) <= tol
}
