//! Beltrametti-Bugajski model: the ontic state is the quantum state itself.

use crate::error::Result;
use crate::ontology::{
    EpistemicState, IndicatorFunction, Measurement, MeasurementSetting, OnticPoint, OnticSpace,
};
use crate::quantum::{dot3, BlochVector, CMatrix, PureState, Pvm};

use super::{require_dim, OntologicalModel};

/// μ(λ|ψ) = δ(λ - λ_ψ) on the ray space.
pub fn bb_epistemic(psi: &PureState) -> EpistemicState {
    EpistemicState::PointMass {
        space: OnticSpace::RayLabels(psi.dim()),
        atom: OnticPoint::Ray(psi.clone()),
    }
}

/// ξ(k|λ) = tr(|λ><λ| E_k).
pub fn bb_indicator(setting: &MeasurementSetting) -> Result<IndicatorFunction> {
    let effects: Vec<CMatrix> = setting
        .effects()?
        .into_iter()
        .map(|e| e.matrix().clone())
        .collect();
    let dim = setting.dim();
    let n = effects.len();
    Ok(IndicatorFunction::new(
        OnticSpace::RayLabels(dim),
        n,
        n == 1,
        move |k, p| match p.ray() {
            Some(lambda) => lambda.expectation(&effects[k]).clamp(0.0, 1.0),
            None => f64::NAN,
        },
    ))
}

/// Qubit projective form on the Bloch sphere: ξ(±φ|λ) = ½(1 ± φ·λ).
pub fn bb_bloch_indicator(phi: &BlochVector) -> IndicatorFunction {
    let phi = phi.components();
    IndicatorFunction::new(OnticSpace::UnitSphere, 2, false, move |k, p| {
        let c = p.sphere().map_or(f64::NAN, |l| dot3(&phi, l));
        let pass = (0.5 * (1.0 + c)).clamp(0.0, 1.0);
        if k == 0 {
            pass
        } else {
            1.0 - pass
        }
    })
}

#[derive(Debug, Clone, Copy)]
pub struct BbModel {
    dim: usize,
}

impl BbModel {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl OntologicalModel for BbModel {
    fn name(&self) -> &'static str {
        "bb"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn space(&self) -> OnticSpace {
        OnticSpace::RayLabels(self.dim)
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_dim(self.dim, psi.dim())?;
        Ok(bb_epistemic(psi))
    }

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        require_dim(self.dim, pvm.dim())?;
        bb_indicator(&MeasurementSetting::projective(pvm.clone()))
    }

    /// Effects are evaluated directly, whatever decomposition realizes them.
    fn indicator(&self, setting: &MeasurementSetting) -> Result<IndicatorFunction> {
        require_dim(self.dim, setting.dim())?;
        match &setting.measurement {
            Measurement::Projective(pvm) => self.indicator_pvm(pvm),
            Measurement::EffectDecomposition(_) => bb_indicator(setting),
        }
    }
}
