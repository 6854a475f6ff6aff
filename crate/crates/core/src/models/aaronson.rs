//! Aaronson-style models: Λ = Ω × PH with Ω a preferred orthonormal basis
//! (here the computational basis). A measurement in basis B is handled by
//! the unitary U taking B to Ω followed by a stochastic jump on Ω.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::ontology::{EpistemicState, IndicatorFunction, OnticPoint, OnticSpace};
use crate::quantum::{is_unitary, CMatrix, PureState, Pvm, PVM_TOL};

use super::{require_dim, OntologicalModel};

const STOCHASTIC_TOL: f64 = 1e-12;
const CONSTRAINT_TOL: f64 = 1e-10;

/// Column-stochastic matrix `S_ji`: probability of jumping from `ω_i` to `ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidOperator("stochastic matrix must be square".into()));
        }
        if let Some(v) = entries.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::ProbabilityOutOfRange(*v));
        }
        for col in entries.column_iter() {
            let s = col.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::WeightSum(s));
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `S_ji`.
    pub fn entry(&self, j: usize, i: usize) -> f64 {
        self.entries[(j, i)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Largest violation of `Σ_i S_ji |<ω_i|ψ>|² = |<ω_j|U|ψ>|²` over `j`.
    pub fn constraint_residual(&self, u: &CMatrix, psi: &PureState) -> f64 {
        let before: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        let after = u * psi.column();
        (0..self.dim())
            .map(|j| {
                let lhs: f64 = (0..self.dim()).map(|i| self.entry(j, i) * before[i]).sum();
                (lhs - after[j].norm_sqr()).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn check_constraint(&self, u: &CMatrix, psi: &PureState) -> Result<()> {
        let r = self.constraint_residual(u, psi);
        if r > CONSTRAINT_TOL {
            return Err(Error::InvalidOperator(format!("marginal constraint violated by {r:e}")));
        }
        Ok(())
    }
}

/// Source of the matrices S(U, ψ).
pub trait StochasticMatrixProvider: Send + Sync + fmt::Debug {
    fn matrix(&self, u: &CMatrix, psi: &PureState) -> Result<StochasticMatrix>;
}

/// S_ji = |<ω_j|U|ψ>|², independent of the starting label i.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductTheory;

impl StochasticMatrixProvider for ProductTheory {
    fn matrix(&self, u: &CMatrix, psi: &PureState) -> Result<StochasticMatrix> {
        aaronson_product_matrix(u, psi)
    }
}

pub fn aaronson_product_matrix(u: &CMatrix, psi: &PureState) -> Result<StochasticMatrix> {
    let n = psi.dim();
    if u.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.nrows(),
        });
    }
    if !is_unitary(u, PVM_TOL) {
        return Err(Error::InvalidOperator("matrix is not unitary".into()));
    }
    let after = u * psi.column();
    let probs: Vec<f64> = after.iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    StochasticMatrix::new(DMatrix::from_fn(n, n, |j, _| probs[j] / total))
}

/// U = Σ_j |ω_j><b_j| for Ω the computational basis.
pub fn basis_change(basis: &[PureState]) -> CMatrix {
    let n = basis.len();
    CMatrix::from_fn(n, n, |j, c| basis[j].amplitudes()[c].conj())
}

fn labels(dim: usize) -> OnticSpace {
    OnticSpace::DiscreteLabels((0..dim).map(|i| format!("omega_{i}")).collect())
}

fn space(dim: usize) -> OnticSpace {
    OnticSpace::Product(vec![labels(dim), OnticSpace::RayLabels(dim)])
}

/// μ = Σ_i |<ω_i|ψ>|² δ(ω - ω_i) δ(φ - ψ).
pub fn aaronson_epistemic(psi: &PureState) -> Result<EpistemicState> {
    let dim = psi.dim();
    let weights: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    EpistemicState::mixture(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| {
                Ok((
                    w / total,
                    EpistemicState::point_mass(
                        space(dim),
                        OnticPoint::Tuple(vec![OnticPoint::Label(i), OnticPoint::Ray(psi.clone())]),
                    )?,
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// ξ(j|ω_i, φ) = S(U, φ)_ji with U taking the measured basis to Ω.
pub fn aaronson_indicator(
    basis: &[PureState],
    provider: Arc<dyn StochasticMatrixProvider>,
) -> Result<IndicatorFunction> {
    let groups: Vec<usize> = (0..basis.len()).collect();
    grouped_indicator(basis, groups, basis.len(), provider)
}

/// Outcome `k` collects the fine-basis outcomes `j` with `groups[j] == k`.
fn grouped_indicator(
    basis: &[PureState],
    groups: Vec<usize>,
    outcomes: usize,
    provider: Arc<dyn StochasticMatrixProvider>,
) -> Result<IndicatorFunction> {
    let dim = basis.len();
    for b in basis {
        require_dim(dim, b.dim())?;
    }
    let u = basis_change(basis);
    if !is_unitary(&u, PVM_TOL) {
        return Err(Error::InvalidOperator("measurement basis is not orthonormal".into()));
    }
    Ok(IndicatorFunction::new(space(dim), outcomes, false, move |k, p| {
        let (Some(i), Some(phi)) = (
            p.component(0).and_then(OnticPoint::label),
            p.component(1).and_then(OnticPoint::ray),
        ) else {
            return f64::NAN;
        };
        provider.matrix(&u, phi).map_or(f64::NAN, |s| {
            (0..dim).filter(|j| groups[*j] == k).map(|j| s.entry(j, i)).sum()
        })
    }))
}

/// An orthonormal basis refining the PVM, with the outcome of each vector.
fn refine(pvm: &Pvm) -> Result<(Vec<PureState>, Vec<usize>)> {
    let mut basis = Vec::new();
    let mut groups = Vec::new();
    for (k, p) in pvm.projectors().iter().enumerate() {
        let eig = p.matrix().clone().symmetric_eigen();
        for (c, lambda) in eig.eigenvalues.iter().enumerate() {
            if *lambda > 0.5 {
                basis.push(PureState::normalized(eig.eigenvectors.column(c).iter().copied().collect())?);
                groups.push(k);
            }
        }
    }
    if basis.len() != pvm.dim() {
        return Err(Error::InvalidOperator("projector ranks do not add up".into()));
    }
    Ok((basis, groups))
}

#[derive(Debug, Clone)]
pub struct AaronsonModel {
    dim: usize,
    provider: Arc<dyn StochasticMatrixProvider>,
}

impl AaronsonModel {
    pub fn new(dim: usize, provider: Arc<dyn StochasticMatrixProvider>) -> Self {
        Self { dim, provider }
    }

    pub fn product_theory(dim: usize) -> Self {
        Self::new(dim, Arc::new(ProductTheory))
    }
}

impl OntologicalModel for AaronsonModel {
    fn name(&self) -> &'static str {
        "aaronson"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn space(&self) -> OnticSpace {
        space(self.dim)
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_dim(self.dim, psi.dim())?;
        aaronson_epistemic(psi)
    }

    /// Higher-rank projectors are refined to an orthonormal basis and the
    /// refined outcomes summed.
    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        require_dim(self.dim, pvm.dim())?;
        let (basis, groups) = refine(pvm)?;
        grouped_indicator(&basis, groups, pvm.len(), self.provider.clone())
    }
}
