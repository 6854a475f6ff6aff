//! Preparation and measurement contextuality on the canonical qubit pair:
//! ρ = E₁ = cos²(π/8)|0><0| + sin²(π/8)|1><1| = ½|π/8><π/8| + ½|-π/8><-π/8|.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::OntologicalModel;
use crate::ontology::{MeasurementSetting, PreparationSetting};
use crate::quantum::PureState;
use crate::rng::Rng;

use super::support::confidence_radius;

const OPERATIONAL_TOL: f64 = 1e-12;

fn basis_terms() -> Vec<(f64, PureState)> {
    let c2 = (PI / 8.0).cos().powi(2);
    vec![(c2, PureState::basis(2, 0)), (1.0 - c2, PureState::basis(2, 1))]
}

fn pi8_terms() -> Vec<(f64, PureState)> {
    vec![
        (0.5, PureState::qubit_angle(PI / 8.0)),
        (0.5, PureState::qubit_angle(-PI / 8.0)),
    ]
}

/// Two settings realizing the same operational object.
#[derive(Debug, Clone)]
pub struct ContextPair<T> {
    pub first: T,
    pub second: T,
}

impl ContextPair<PreparationSetting> {
    pub fn preparations(first: PreparationSetting, second: PreparationSetting) -> Result<Self> {
        let d = first.density()?.distance(&second.density()?);
        if d > OPERATIONAL_TOL {
            return Err(Error::Precondition(format!("density operators differ by {d:e}")));
        }
        Ok(Self { first, second })
    }
}

impl ContextPair<MeasurementSetting> {
    pub fn measurements(first: MeasurementSetting, second: MeasurementSetting) -> Result<Self> {
        let (a, b) = (first.effects()?, second.effects()?);
        let d = if a.len() == b.len() {
            a.iter().zip(&b).map(|(x, y)| x.distance(y)).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        if d > OPERATIONAL_TOL {
            return Err(Error::Precondition(format!("effects differ by {d:e}")));
        }
        Ok(Self { first, second })
    }
}

/// The basis and ±π/8 decompositions of ρ.
pub fn canonical_preparations() -> (PreparationSetting, PreparationSetting) {
    (
        PreparationSetting::ensemble(basis_terms(), "basis").expect("valid weights"),
        PreparationSetting::ensemble(pi8_terms(), "pi8").expect("valid weights"),
    )
}

/// The basis and ±π/8 realizations of the effect E₁.
pub fn canonical_measurements() -> (MeasurementSetting, MeasurementSetting) {
    (
        MeasurementSetting::decomposition(basis_terms(), "basis").expect("valid weights"),
        MeasurementSetting::decomposition(pi8_terms(), "pi8").expect("valid weights"),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreparationContextReport {
    /// Ambient fraction covered by each support.
    pub covered: [f64; 2],
    /// Share of samples from one state falling outside the other's support.
    pub outside_other: [f64; 2],
    pub contextual: bool,
    pub samples: usize,
    pub confidence_radius: f64,
}

/// Contextual iff the supports differ: covered fractions more than three
/// confidence radii apart, or a sample of one state outside the other's
/// support.
pub fn preparation_contextuality(
    model: &dyn OntologicalModel,
    pair: &ContextPair<PreparationSetting>,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<PreparationContextReport> {
    let n = n.max(1);
    let r = confidence_radius(n);
    let mus = [model.epistemic(&pair.first)?, model.epistemic(&pair.second)?];
    let mut covered = [0usize; 2];
    for _ in 0..n {
        let p = model.sample_ambient(rng);
        for (c, mu) in covered.iter_mut().zip(&mus) {
            *c += mu.in_support(&p, eps) as usize;
        }
    }
    let mut outside = [0usize; 2];
    for _ in 0..n {
        outside[0] += !mus[1].in_support(&mus[0].sample(rng).0, eps) as usize;
        outside[1] += !mus[0].in_support(&mus[1].sample(rng).0, eps) as usize;
    }
    let covered = covered.map(|c| c as f64 / n as f64);
    let same_context = pair.first.context == pair.second.context;
    let contextual = !same_context
        && ((covered[0] - covered[1]).abs() > 3.0 * r || outside.iter().any(|c| *c > 0));
    Ok(PreparationContextReport {
        covered,
        outside_other: outside.map(|c| c as f64 / n as f64),
        contextual,
        samples: n,
        confidence_radius: r,
    })
}

pub fn demo_preparation_contextuality(
    model: &dyn OntologicalModel,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<PreparationContextReport> {
    let (a, b) = canonical_preparations();
    preparation_contextuality(model, &ContextPair::preparations(a, b)?, n, eps, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementContextReport {
    /// Ambient fraction covered by Supp(ξ(E₁|·)) under each realization.
    pub covered: [f64; 2],
    pub max_difference: f64,
    pub contextual: bool,
    pub samples: usize,
    pub confidence_radius: f64,
}

/// Contextual iff the two indicators for outcome 0 differ by more than 1e-10
/// at some sampled point. Identical context tags are non-contextual.
pub fn measurement_contextuality(
    model: &dyn OntologicalModel,
    pair: &ContextPair<MeasurementSetting>,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<MeasurementContextReport> {
    let n = n.max(1);
    let xis = [model.indicator(&pair.first)?, model.indicator(&pair.second)?];
    let mut covered = [0usize; 2];
    let mut max_difference: f64 = 0.0;
    for _ in 0..n {
        let p = model.sample_ambient(rng);
        let v = [xis[0].value(0, &p), xis[1].value(0, &p)];
        for (c, x) in covered.iter_mut().zip(v) {
            *c += (x > eps) as usize;
        }
        max_difference = max_difference.max((v[0] - v[1]).abs());
    }
    let same_context = pair.first.context == pair.second.context;
    Ok(MeasurementContextReport {
        covered: covered.map(|c| c as f64 / n as f64),
        max_difference,
        contextual: !same_context && max_difference > crate::ontology::INDICATOR_TOL,
        samples: n,
        confidence_radius: confidence_radius(n),
    })
}

pub fn demo_measurement_contextuality(
    model: &dyn OntologicalModel,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<MeasurementContextReport> {
    let (a, b) = canonical_measurements();
    measurement_contextuality(model, &ContextPair::measurements(a, b)?, n, eps, rng)
}
