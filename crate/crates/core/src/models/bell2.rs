//! Bell's second model: a pair of unit vectors (λ′, λ″). λ″ is the quantum
//! state's Bloch vector, λ′ is uniform on the hemisphere around it, and the
//! outcome is read off λ′ against a direction a′ tilted from λ″ towards the
//! measured axis.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::ontology::{heaviside, Density, EpistemicState, IndicatorFunction, OnticPoint, OnticSpace};
use crate::quantum::{dot3, norm3, BlochVector, PureState, Pvm};
use crate::rng::{self, Rng};

use super::{from_pole_frame, qubit_direction, require_qubit, OntologicalModel};

/// (1/2π) Θ(λ·c): uniform on the closed hemisphere centred at `c`.
#[derive(Debug, Clone, Copy)]
pub struct HemisphereDensity {
    pub center: [f64; 3],
}

impl Density for HemisphereDensity {
    fn space(&self) -> OnticSpace {
        OnticSpace::UnitSphere
    }

    fn value(&self, p: &OnticPoint) -> f64 {
        p.sphere()
            .map_or(0.0, |l| heaviside(dot3(&self.center, l)) / (2.0 * PI))
    }

    fn sample(&self, rng: &mut Rng) -> OnticPoint {
        let z = rng::unit_interval(rng);
        let phi = 2.0 * PI * rng::unit_interval(rng);
        let r = (1.0 - z * z).max(0.0).sqrt();
        OnticPoint::Sphere(from_pole_frame(&self.center, [r * phi.cos(), r * phi.sin(), z]))
    }
}

/// μ(λ′, λ″|p) = (1/2π) Θ(λ′·λ″) δ(λ″ - p).
pub fn bell2_epistemic(p: &BlochVector) -> EpistemicState {
    let c = p.components();
    EpistemicState::Product(vec![
        EpistemicState::density(HemisphereDensity { center: c }),
        EpistemicState::PointMass {
            space: OnticSpace::UnitSphere,
            atom: OnticPoint::Sphere(c),
        },
    ])
}

/// a′: in the plane of `state` and `a`, on the `a` side, at angle
/// (π/2)(1 - state·a) from `state`. When `state` is parallel or antiparallel
/// to `a` the angle is 0 or π and the result is `a`.
pub fn rotated_direction(state: &[f64; 3], a: &[f64; 3]) -> [f64; 3] {
    let c = dot3(state, a).clamp(-1.0, 1.0);
    let perp = [0, 1, 2].map(|i| a[i] - c * state[i]);
    let n = norm3(&perp);
    if n < 1e-12 {
        return *a;
    }
    let theta = FRAC_PI_2 * (1.0 - c);
    let (s, co) = theta.sin_cos();
    [0, 1, 2].map(|i| co * state[i] + s * perp[i] / n)
}

/// ξ(+a|λ′, λ″) = Θ(λ′·a′(λ″, a)).
pub fn bell2_indicator(a: &BlochVector) -> IndicatorFunction {
    let a = a.components();
    let space = OnticSpace::Product(vec![OnticSpace::UnitSphere, OnticSpace::UnitSphere]);
    IndicatorFunction::new(space, 2, true, move |k, p| {
        let (Some(l1), Some(l2)) = (
            p.component(0).and_then(OnticPoint::sphere),
            p.component(1).and_then(OnticPoint::sphere),
        ) else {
            return f64::NAN;
        };
        let pass = heaviside(dot3(l1, &rotated_direction(l2, &a)));
        if k == 0 {
            pass
        } else {
            1.0 - pass
        }
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Bell2Model;

impl OntologicalModel for Bell2Model {
    fn name(&self) -> &'static str {
        "bell2"
    }

    fn dim(&self) -> usize {
        2
    }

    fn space(&self) -> OnticSpace {
        OnticSpace::Product(vec![OnticSpace::UnitSphere, OnticSpace::UnitSphere])
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_qubit(psi.dim())?;
        Ok(bell2_epistemic(&crate::quantum::bloch_from_state(psi)?))
    }

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        Ok(match qubit_direction(pvm)? {
            Some(a) => bell2_indicator(&a),
            None => IndicatorFunction::trivial(self.space()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{predict, verify_normalization, Integrator};

    fn angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        dot3(a, b).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn tilt_angle_and_plane() {
        let mut rng = crate::rng::seeded(12);
        for _ in 0..200 {
            let s = rng::uniform_sphere(&mut rng);
            let a = rng::uniform_sphere(&mut rng);
            let ap = rotated_direction(&s, &a);
            assert!((norm3(&ap) - 1.0).abs() < 1e-12);
            let expected = FRAC_PI_2 * (1.0 - dot3(&s, &a));
            assert!((angle(&s, &ap) - expected).abs() < 1e-9);
            // a′ lies in span(s, a).
            let n = crate::quantum::cross3(&s, &a);
            assert!(dot3(&n, &ap).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_directions() {
        let z = [0.0, 0.0, 1.0];
        assert_eq!(rotated_direction(&z, &z), z);
        assert_eq!(rotated_direction(&[0.0, 0.0, -1.0], &z), z);
    }

    #[test]
    fn aligned_orthogonal_antialigned() {
        let p = BlochVector::new([0.0, 0.0, 1.0]).unwrap();
        let mu = bell2_epistemic(&p);
        let integ = Integrator::monte_carlo(200_000, 3);
        let cases = [([0.0, 0.0, 1.0], 1.0), ([1.0, 0.0, 0.0], 0.5), ([0.0, 0.0, -1.0], 0.0)];
        for (a, want) in cases {
            let xi = bell2_indicator(&BlochVector::new(a).unwrap());
            let e = predict(&mu, &xi, 0, &integ).unwrap();
            assert!((e.value - want).abs() <= (4.0 * e.standard_error).max(1e-12), "{a:?}: {e:?}");
        }
    }

    #[test]
    fn hemisphere_density_normalized() {
        let mu = bell2_epistemic(&BlochVector::new([0.6, 0.0, 0.8]).unwrap());
        assert!(verify_normalization(&mu, &Integrator::monte_carlo(100_000, 1)).unwrap().pass);
    }
}
