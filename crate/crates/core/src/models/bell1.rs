//! Bell's first model: Λ = PH × [0, 1]. The interval coordinate selects an
//! outcome by landing in a cell of a partition built from Born weights.

use crate::error::Result;
use crate::ontology::{
    heaviside, EpistemicState, IndicatorFunction, OnticPoint, OnticSpace, UniformInterval,
};
use crate::quantum::{CMatrix, PureState, Pvm};

use super::{require_dim, OntologicalModel};

/// Cumulative boundaries `x_1 .. x_{n-1}` for the ordered PVM at `lambda`:
/// `x_i = Σ_{j<=i} <λ|P_j|λ>`.
pub fn partition_boundaries(projectors: &[CMatrix], lambda: &PureState) -> Vec<f64> {
    let mut acc = 0.0;
    projectors[..projectors.len().saturating_sub(1)]
        .iter()
        .map(|p| {
            acc += lambda.expectation(p).clamp(0.0, 1.0);
            acc.min(1.0)
        })
        .collect()
}

/// μ = δ(λ′ - λ_ψ) × Uniform[0, 1].
pub fn bell1_epistemic(psi: &PureState) -> EpistemicState {
    EpistemicState::Product(vec![
        EpistemicState::PointMass {
            space: OnticSpace::RayLabels(psi.dim()),
            atom: OnticPoint::Ray(psi.clone()),
        },
        EpistemicState::density(UniformInterval),
    ])
}

/// ξ(i|λ′, λ″) = Θ(λ″ - x_{i-1}) - Θ(λ″ - x_i), with the last cell closed
/// at 1 so the cells cover all of `[0, 1]`.
pub fn bell1_indicator(pvm: &Pvm) -> IndicatorFunction {
    let projectors: Vec<CMatrix> = pvm.projectors().iter().map(|p| p.matrix().clone()).collect();
    let n = projectors.len();
    let space = OnticSpace::Product(vec![OnticSpace::RayLabels(pvm.dim()), OnticSpace::UnitInterval]);
    let cells = projectors.clone();
    IndicatorFunction::new(space, n, true, move |k, p| {
        let (Some(lambda), Some(t)) = (
            p.component(0).and_then(OnticPoint::ray),
            p.component(1).and_then(OnticPoint::interval),
        ) else {
            return f64::NAN;
        };
        let x = partition_boundaries(&cells, lambda);
        let lower = if k == 0 { 1.0 } else { heaviside(t - x[k - 1]) };
        let upper = if k + 1 == n { 0.0 } else { heaviside(t - x[k]) };
        lower - upper
    })
    .with_breakpoints(move |_, p| match p.component(0).and_then(OnticPoint::ray) {
        Some(lambda) => partition_boundaries(&projectors, lambda),
        None => Vec::new(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Bell1Model {
    dim: usize,
}

impl Bell1Model {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl OntologicalModel for Bell1Model {
    fn name(&self) -> &'static str {
        "bell1"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn space(&self) -> OnticSpace {
        OnticSpace::Product(vec![OnticSpace::RayLabels(self.dim), OnticSpace::UnitInterval])
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_dim(self.dim, psi.dim())?;
        Ok(bell1_epistemic(psi))
    }

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        require_dim(self.dim, pvm.dim())?;
        Ok(bell1_indicator(pvm))
    }
}
