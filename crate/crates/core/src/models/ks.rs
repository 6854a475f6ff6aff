//! Kochen-Specker qubit model on the Bloch sphere.

use std::f64::consts::PI;

use crate::error::Result;
use crate::ontology::{heaviside, Density, EpistemicState, IndicatorFunction, OnticPoint, OnticSpace};
use crate::quantum::{bloch_from_state, dot3, BlochVector, PureState, Pvm};
use crate::rng::{self, Rng};

use super::{from_pole_frame, qubit_direction, require_qubit, OntologicalModel};

/// μ(λ|ψ) = (1/π) Θ(ψ·λ) ψ·λ, sampled exactly (cosine-weighted hemisphere).
#[derive(Debug, Clone, Copy)]
pub struct KsDensity {
    pub center: [f64; 3],
}

impl Density for KsDensity {
    fn space(&self) -> OnticSpace {
        OnticSpace::UnitSphere
    }

    fn value(&self, p: &OnticPoint) -> f64 {
        match p.sphere() {
            Some(l) => {
                let c = dot3(&self.center, l);
                heaviside(c) * c / PI
            }
            None => 0.0,
        }
    }

    fn sample(&self, rng: &mut Rng) -> OnticPoint {
        let u = rng::unit_interval(rng);
        let phi = 2.0 * PI * rng::unit_interval(rng);
        let z = u.sqrt();
        let r = (1.0 - u).sqrt();
        OnticPoint::Sphere(from_pole_frame(&self.center, [r * phi.cos(), r * phi.sin(), z]))
    }
}

pub fn ks_epistemic(psi: &PureState) -> Result<EpistemicState> {
    let center = bloch_from_state(psi)?.components();
    Ok(EpistemicState::density(KsDensity { center }))
}

/// ξ(φ|λ) = Θ(φ·λ); the complementary outcome gets the rest.
pub fn ks_indicator(phi: &PureState) -> Result<IndicatorFunction> {
    Ok(hemisphere_indicator(bloch_from_state(phi)?))
}

fn hemisphere_indicator(phi: BlochVector) -> IndicatorFunction {
    let phi = phi.components();
    IndicatorFunction::new(OnticSpace::UnitSphere, 2, true, move |k, p| {
        let pass = p.sphere().map_or(f64::NAN, |l| heaviside(dot3(&phi, l)));
        if k == 0 {
            pass
        } else {
            1.0 - pass
        }
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KsModel;

impl OntologicalModel for KsModel {
    fn name(&self) -> &'static str {
        "ks"
    }

    fn dim(&self) -> usize {
        2
    }

    fn space(&self) -> OnticSpace {
        OnticSpace::UnitSphere
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_qubit(psi.dim())?;
        ks_epistemic(psi)
    }

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        Ok(match qubit_direction(pvm)? {
            Some(phi) => hemisphere_indicator(phi),
            None => IndicatorFunction::trivial(OnticSpace::UnitSphere),
        })
    }
}
