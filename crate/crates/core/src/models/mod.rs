//! Concrete system-level ontological models.
//!
//! Each model binds an ontic space to constructors that turn preparation and
//! measurement settings into epistemic states and indicator functions.

mod aaronson;
mod bb;
mod bell1;
mod bell2;
mod ks;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ontology::{
    EpistemicState, IndicatorFunction, Measurement, MeasurementSetting, OnticPoint, OnticSpace,
    Preparation, PreparationSetting,
};
use crate::quantum::{bloch_from_state, cross3, norm3, BlochVector, PureState, Pvm};
use crate::rng::Rng;

pub use aaronson::{
    aaronson_epistemic, aaronson_indicator, aaronson_product_matrix, basis_change, AaronsonModel,
    ProductTheory, StochasticMatrix, StochasticMatrixProvider,
};
pub use bb::{bb_bloch_indicator, bb_epistemic, bb_indicator, BbModel};
pub use bell1::{bell1_epistemic, bell1_indicator, partition_boundaries, Bell1Model};
pub use bell2::{bell2_epistemic, bell2_indicator, rotated_direction, Bell2Model, HemisphereDensity};
pub use ks::{ks_epistemic, ks_indicator, KsDensity, KsModel};

/// An ontological model: Λ plus the maps S_P ↦ μ and S_M ↦ ξ.
pub trait OntologicalModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Hilbert-space dimension of the modelled system.
    fn dim(&self) -> usize;

    fn space(&self) -> OnticSpace;

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState>;

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction>;

    /// Ensembles are represented by the mixture of their members' states.
    fn epistemic(&self, setting: &PreparationSetting) -> Result<EpistemicState> {
        match &setting.preparation {
            Preparation::Pure(psi) => self.epistemic_pure(psi),
            Preparation::Ensemble(terms) => EpistemicState::mixture(
                terms
                    .iter()
                    .map(|(w, psi)| Ok((*w, self.epistemic_pure(psi)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    /// Effect decompositions are realized by the randomized protocol of
    /// [`protocol_indicator`].
    fn indicator(&self, setting: &MeasurementSetting) -> Result<IndicatorFunction> {
        match &setting.measurement {
            Measurement::Projective(pvm) => self.indicator_pvm(pvm),
            Measurement::EffectDecomposition(terms) => protocol_indicator(self, terms),
        }
    }

    /// A draw from the normalized reference measure on Λ.
    fn sample_ambient(&self, rng: &mut Rng) -> OnticPoint {
        self.space().sample_uniform(rng)
    }
}

/// ξ(E|λ) for `E = Σ p_i |ψ_i><ψ_i|` realized by choosing `i` with
/// probability `p_i` and running `{|ψ_i><ψ_i|, 1 - |ψ_i><ψ_i|}`:
/// `ξ(0|λ) = Σ p_i ξ(ψ_i|λ)`, `ξ(1|λ) = 1 - ξ(0|λ)`.
pub fn protocol_indicator<M: OntologicalModel + ?Sized>(
    model: &M,
    terms: &[(f64, PureState)],
) -> Result<IndicatorFunction> {
    let parts: Vec<(f64, IndicatorFunction)> = terms
        .iter()
        .map(|(w, psi)| Ok((*w, model.indicator_pvm(&Pvm::binary(psi))?)))
        .collect::<Result<_>>()?;
    let deterministic = parts.len() == 1 && parts[0].1.is_deterministic();
    Ok(IndicatorFunction::new(model.space(), 2, deterministic, move |k, p| {
        let pass: f64 = parts.iter().map(|(w, xi)| w * xi.value(0, p)).sum();
        if k == 0 {
            pass
        } else {
            1.0 - pass
        }
    }))
}

/// The six shipped qubit models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Bb,
    Ks,
    Bell1,
    Bell2,
    Aerts,
    Aaronson,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Bb,
        ModelKind::Ks,
        ModelKind::Bell1,
        ModelKind::Bell2,
        ModelKind::Aerts,
        ModelKind::Aaronson,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Bb => "bb",
            ModelKind::Ks => "ks",
            ModelKind::Bell1 => "bell1",
            ModelKind::Bell2 => "bell2",
            ModelKind::Aerts => "aerts",
            ModelKind::Aaronson => "aaronson",
        }
    }

    /// Qubit instance of the model. Aerts is represented at system level by
    /// its coarse-grained indicator.
    pub fn qubit(&self) -> Arc<dyn OntologicalModel> {
        match self {
            ModelKind::Bb => Arc::new(BbModel::new(2)),
            ModelKind::Ks => Arc::new(KsModel),
            ModelKind::Bell1 => Arc::new(Bell1Model::new(2)),
            ModelKind::Bell2 => Arc::new(Bell2Model),
            ModelKind::Aerts => Arc::new(crate::device::AertsModel),
            ModelKind::Aaronson => Arc::new(AaronsonModel::product_theory(2)),
        }
    }

    /// Whether a ξ from this model is evaluated against μ without sampling.
    pub fn is_exact(&self) -> bool {
        !matches!(self, ModelKind::Ks | ModelKind::Bell2)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown model '{s}'")))
    }
}

pub(crate) fn require_qubit(found: usize) -> Result<()> {
    if found != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found });
    }
    Ok(())
}

pub(crate) fn require_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Bloch direction of outcome 0 of a qubit PVM, or `None` for the trivial
/// one-outcome PVM.
pub(crate) fn qubit_direction(pvm: &Pvm) -> Result<Option<BlochVector>> {
    require_qubit(pvm.dim())?;
    match pvm.len() {
        1 => Ok(None),
        2 => {
            let v = pvm.rank_one_vector(0).ok_or_else(|| {
                Error::InvalidOperator("qubit PVM outcome is not rank one".into())
            })?;
            Ok(Some(bloch_from_state(&v)?))
        }
        n => Err(Error::InvalidOperator(format!("qubit PVM with {n} outcomes"))),
    }
}

/// Map a vector given in a frame whose third axis is `n` back to the standard
/// frame.
pub(crate) fn from_pole_frame(n: &[f64; 3], local: [f64; 3]) -> [f64; 3] {
    let helper = if n[0].abs() < 0.6 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e1 = cross3(n, &helper);
    let l = norm3(&e1);
    let e1 = e1.map(|c| c / l);
    let e2 = cross3(n, &e1);
    [0, 1, 2].map(|i| local[0] * e1[i] + local[1] * e2[i] + local[2] * n[i])
}
