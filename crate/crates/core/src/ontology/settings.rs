//! Preparation and measurement settings, including their contexts.

use crate::error::{Error, Result};
use crate::quantum::{convex_combine, DensityOperator, PovmEffect, PureState, Pvm, STATE_TOL};

/// How a preparation device realizes its state.
#[derive(Debug, Clone)]
pub enum Preparation {
    Pure(PureState),
    /// A convex decomposition `ρ = Σ p_i |ψ_i><ψ_i|`.
    Ensemble(Vec<(f64, PureState)>),
}

/// S_P: the operational state plus a context tag. Two settings with the same
/// density operator but different tags are operationally equivalent but may
/// be represented by different epistemic states.
#[derive(Debug, Clone)]
pub struct PreparationSetting {
    pub preparation: Preparation,
    pub context: String,
}

impl PreparationSetting {
    pub fn pure(psi: PureState) -> Self {
        Self {
            preparation: Preparation::Pure(psi),
            context: String::new(),
        }
    }

    pub fn ensemble(terms: Vec<(f64, PureState)>, context: impl Into<String>) -> Result<Self> {
        check_weights(&terms)?;
        Ok(Self {
            preparation: Preparation::Ensemble(terms),
            context: context.into(),
        })
    }

    pub fn density(&self) -> Result<DensityOperator> {
        match &self.preparation {
            Preparation::Pure(psi) => Ok(psi.density()),
            Preparation::Ensemble(terms) => convex_combine(
                &terms
                    .iter()
                    .map(|(w, s)| (*w, s.density()))
                    .collect::<Vec<_>>(),
            ),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.preparation {
            Preparation::Pure(psi) => psi.dim(),
            Preparation::Ensemble(terms) => terms[0].1.dim(),
        }
    }
}

/// How a measurement device realizes its POVM.
#[derive(Debug, Clone)]
pub enum Measurement {
    Projective(Pvm),
    /// Two-outcome POVM `{E, 1 - E}` with `E = Σ p_i |ψ_i><ψ_i|`, realized by
    /// choosing `i` with probability `p_i`, performing `{P_i, 1 - P_i}` and
    /// reporting `E` on the `P_i` outcome.
    EffectDecomposition(Vec<(f64, PureState)>),
}

/// S_M: the operational measurement plus a context tag.
#[derive(Debug, Clone)]
pub struct MeasurementSetting {
    pub measurement: Measurement,
    pub context: String,
}

impl MeasurementSetting {
    pub fn projective(pvm: Pvm) -> Self {
        Self {
            measurement: Measurement::Projective(pvm),
            context: String::new(),
        }
    }

    /// The test `{|φ><φ|, 1 - |φ><φ|}`; outcome 0 is "passes φ".
    pub fn test_for(phi: &PureState) -> Self {
        Self::projective(Pvm::binary(phi))
    }

    pub fn decomposition(terms: Vec<(f64, PureState)>, context: impl Into<String>) -> Result<Self> {
        check_weights(&terms)?;
        Ok(Self {
            measurement: Measurement::EffectDecomposition(terms),
            context: context.into(),
        })
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    pub fn effects(&self) -> Result<Vec<PovmEffect>> {
        match &self.measurement {
            Measurement::Projective(pvm) => Ok(pvm.projectors().to_vec()),
            Measurement::EffectDecomposition(terms) => {
                let e = PovmEffect::from_decomposition(terms)?;
                let c = e.complement();
                Ok(vec![e, c])
            }
        }
    }

    pub fn outcome_count(&self) -> usize {
        match &self.measurement {
            Measurement::Projective(pvm) => pvm.len(),
            Measurement::EffectDecomposition(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.measurement {
            Measurement::Projective(pvm) => pvm.dim(),
            Measurement::EffectDecomposition(terms) => terms[0].1.dim(),
        }
    }
}

fn check_weights(terms: &[(f64, PureState)]) -> Result<()> {
    let dim = terms
        .first()
        .map(|(_, s)| s.dim())
        .ok_or_else(|| Error::InvalidState("empty decomposition".into()))?;
    if let Some((_, s)) = terms.iter().find(|(_, s)| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s.dim(),
        });
    }
    let total: f64 = terms.iter().map(|(w, _)| *w).sum();
    if terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > STATE_TOL {
        return Err(Error::WeightSum(total));
    }
    Ok(())
}
