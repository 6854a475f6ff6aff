//! Epistemic states μ(λ|S_P): distributions over an ontic space.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantum::STATE_TOL;
use crate::rng::{self, Rng};

use super::space::{OnticPoint, OnticSpace};

/// A probability density with respect to the reference measure of its space.
///
/// `sample` draws from a proposal whose density is `sampler_value`; for a
/// well-formed density the two coincide and importance weights are 1.
pub trait Density: Send + Sync + fmt::Debug {
    fn space(&self) -> OnticSpace;
    fn value(&self, p: &OnticPoint) -> f64;
    fn sample(&self, rng: &mut Rng) -> OnticPoint;

    fn sampler_value(&self, p: &OnticPoint) -> f64 {
        self.value(p)
    }

    /// True for the uniform density on `[0, 1]`, which the product rule can
    /// integrate exactly against step-shaped indicators.
    fn is_uniform_interval(&self) -> bool {
        false
    }
}

/// Uniform density on the unit interval.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformInterval;

impl Density for UniformInterval {
    fn space(&self) -> OnticSpace {
        OnticSpace::UnitInterval
    }

    fn value(&self, p: &OnticPoint) -> f64 {
        match p.interval() {
            Some(x) if (0.0..=1.0).contains(&x) => 1.0,
            _ => 0.0,
        }
    }

    fn sample(&self, rng: &mut Rng) -> OnticPoint {
        OnticPoint::Interval(rng::unit_interval(rng))
    }

    fn is_uniform_interval(&self) -> bool {
        true
    }
}

/// A density multiplied by a constant. Sampling is delegated to the inner
/// density, so integrals pick up the factor through the importance weight.
/// Mostly useful for building deliberately unnormalized fixtures.
#[derive(Debug, Clone)]
pub struct ScaledDensity {
    pub inner: Arc<dyn Density>,
    pub factor: f64,
}

impl Density for ScaledDensity {
    fn space(&self) -> OnticSpace {
        self.inner.space()
    }

    fn value(&self, p: &OnticPoint) -> f64 {
        self.factor * self.inner.value(p)
    }

    fn sample(&self, rng: &mut Rng) -> OnticPoint {
        self.inner.sample(rng)
    }

    fn sampler_value(&self, p: &OnticPoint) -> f64 {
        self.inner.value(p)
    }
}

/// An epistemic state. Point masses stay symbolic and are never smoothed.
#[derive(Clone)]
pub enum EpistemicState {
    PointMass { space: OnticSpace, atom: OnticPoint },
    Density(Arc<dyn Density>),
    Mixture { space: OnticSpace, terms: Vec<(f64, EpistemicState)> },
    /// Independent factors; points are `OnticPoint::Tuple`.
    Product(Vec<EpistemicState>),
}

impl fmt::Debug for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpistemicState::PointMass { atom, .. } => write!(f, "PointMass({atom:?})"),
            EpistemicState::Density(d) => write!(f, "Density({d:?})"),
            EpistemicState::Mixture { terms, .. } => f.debug_list().entries(terms).finish(),
            EpistemicState::Product(fs) => f.debug_tuple("Product").field(fs).finish(),
        }
    }
}

impl EpistemicState {
    pub fn point_mass(space: OnticSpace, atom: OnticPoint) -> Result<Self> {
        if !space.contains(&atom) {
            return Err(Error::SpaceMismatch(format!("atom {atom:?} not in {space:?}")));
        }
        Ok(EpistemicState::PointMass { space, atom })
    }

    pub fn density(d: impl Density + 'static) -> Self {
        EpistemicState::Density(Arc::new(d))
    }

    pub fn mixture(terms: Vec<(f64, EpistemicState)>) -> Result<Self> {
        let space = terms
            .first()
            .map(|(_, s)| s.space())
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let total: f64 = terms.iter().map(|(w, _)| *w).sum();
        if terms.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > STATE_TOL {
            return Err(Error::WeightSum(total));
        }
        if let Some((_, bad)) = terms.iter().find(|(_, s)| s.space() != space) {
            return Err(Error::SpaceMismatch(format!(
                "mixture component over {:?}, expected {space:?}",
                bad.space()
            )));
        }
        Ok(EpistemicState::Mixture { space, terms })
    }

    pub fn product(factors: Vec<EpistemicState>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidState("empty product".into()));
        }
        Ok(EpistemicState::Product(factors))
    }

    pub fn space(&self) -> OnticSpace {
        match self {
            EpistemicState::PointMass { space, .. } => space.clone(),
            EpistemicState::Density(d) => d.space(),
            EpistemicState::Mixture { space, .. } => space.clone(),
            EpistemicState::Product(f) => OnticSpace::Product(f.iter().map(|s| s.space()).collect()),
        }
    }

    /// Draw a point together with its importance weight (1 for normalized
    /// well-formed states).
    pub fn sample(&self, rng: &mut Rng) -> (OnticPoint, f64) {
        match self {
            EpistemicState::PointMass { atom, .. } => (atom.clone(), 1.0),
            EpistemicState::Density(d) => {
                let p = d.sample(rng);
                let q = d.sampler_value(&p);
                let w = if q > 0.0 { d.value(&p) / q } else { 0.0 };
                (p, w)
            }
            EpistemicState::Mixture { terms, .. } => {
                let u = rng::unit_interval(rng);
                let mut acc = 0.0;
                let mut chosen = &terms[terms.len() - 1].1;
                for (w, s) in terms {
                    acc += w;
                    if u < acc {
                        chosen = s;
                        break;
                    }
                }
                chosen.sample(rng)
            }
            EpistemicState::Product(fs) => {
                let mut weight = 1.0;
                let pts = fs
                    .iter()
                    .map(|f| {
                        let (p, w) = f.sample(rng);
                        weight *= w;
                        p
                    })
                    .collect();
                (OnticPoint::Tuple(pts), weight)
            }
        }
    }

    /// True if the state gives positive mass to a set of reference measure
    /// zero (a point-mass factor somewhere in every branch).
    pub fn is_singular(&self) -> bool {
        match self {
            EpistemicState::PointMass { .. } => true,
            EpistemicState::Density(_) => false,
            EpistemicState::Mixture { terms, .. } => terms.iter().all(|(_, s)| s.is_singular()),
            EpistemicState::Product(fs) => fs.iter().any(EpistemicState::is_singular),
        }
    }

    /// The finite atom list of a purely discrete state, with weights.
    pub fn atoms(&self) -> Option<Vec<(f64, OnticPoint)>> {
        match self {
            EpistemicState::PointMass { atom, .. } => Some(vec![(1.0, atom.clone())]),
            EpistemicState::Density(_) => None,
            EpistemicState::Mixture { terms, .. } => {
                let mut out = Vec::new();
                for (w, s) in terms {
                    for (v, p) in s.atoms()? {
                        out.push((w * v, p));
                    }
                }
                Some(out)
            }
            EpistemicState::Product(fs) => {
                let mut out = vec![(1.0, Vec::new())];
                for f in fs {
                    let atoms = f.atoms()?;
                    out = out
                        .into_iter()
                        .flat_map(|(w, pts)| {
                            atoms.iter().map(move |(v, p)| {
                                let mut pts = pts.clone();
                                pts.push(p.clone());
                                (w * v, pts)
                            })
                        })
                        .collect();
                }
                Some(out.into_iter().map(|(w, p)| (w, OnticPoint::Tuple(p))).collect())
            }
        }
    }

    /// Support membership: density above `eps`, or equality with an atom
    /// whose weight exceeds `eps`.
    pub fn in_support(&self, p: &OnticPoint, eps: f64) -> bool {
        match self {
            EpistemicState::PointMass { atom, .. } => atom.same_atom(p),
            EpistemicState::Density(d) => d.value(p) > eps,
            EpistemicState::Mixture { terms, .. } => terms
                .iter()
                .any(|(w, s)| *w > eps && s.in_support(p, eps)),
            EpistemicState::Product(fs) => match p {
                OnticPoint::Tuple(c) if c.len() == fs.len() => {
                    fs.iter().zip(c).all(|(f, q)| f.in_support(q, eps))
                }
                _ => false,
            },
        }
    }

    /// Pointwise density value for non-singular states.
    pub fn density_value(&self, p: &OnticPoint) -> Option<f64> {
        match self {
            EpistemicState::PointMass { .. } => None,
            EpistemicState::Density(d) => Some(d.value(p)),
            EpistemicState::Mixture { terms, .. } => terms
                .iter()
                .map(|(w, s)| s.density_value(p).map(|v| w * v))
                .sum(),
            EpistemicState::Product(fs) => match p {
                OnticPoint::Tuple(c) if c.len() == fs.len() => {
                    fs.iter().zip(c).map(|(f, q)| f.density_value(q)).product()
                }
                _ => None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label_space() -> OnticSpace {
        OnticSpace::DiscreteLabels(vec!["a".into(), "b".into(), "c".into()])
    }

    #[test]
    fn mixture_weights_validated() {
        let a = EpistemicState::point_mass(label_space(), OnticPoint::Label(0)).unwrap();
        let b = EpistemicState::point_mass(label_space(), OnticPoint::Label(1)).unwrap();
        assert!(EpistemicState::mixture(vec![(0.5, a.clone()), (0.6, b.clone())]).is_err());
        let m = EpistemicState::mixture(vec![(0.25, a), (0.75, b)]).unwrap();
        assert!(m.in_support(&OnticPoint::Label(1), 1e-9));
        assert!(!m.in_support(&OnticPoint::Label(2), 1e-9));
        assert!(m.is_singular());
        assert_eq!(m.atoms().unwrap().len(), 2);
    }

    #[test]
    fn point_mass_must_lie_in_space() {
        assert!(EpistemicState::point_mass(OnticSpace::UnitInterval, OnticPoint::Interval(1.5)).is_err());
    }

    #[test]
    fn product_of_atom_and_interval() {
        let s = EpistemicState::product(vec![
            EpistemicState::point_mass(label_space(), OnticPoint::Label(2)).unwrap(),
            EpistemicState::density(UniformInterval),
        ])
        .unwrap();
        assert!(s.is_singular());
        assert!(s.atoms().is_none());
        let mut rng = crate::rng::seeded(9);
        let (p, w) = s.sample(&mut rng);
        assert_eq!(w, 1.0);
        assert!(s.in_support(&p, 1e-9));
        assert!(!s.in_support(
            &OnticPoint::Tuple(vec![OnticPoint::Label(0), OnticPoint::Interval(0.5)]),
            1e-9
        ));
    }

    #[test]
    fn scaled_density_carries_factor_in_weight() {
        let d = ScaledDensity {
            inner: Arc::new(UniformInterval),
            factor: 2.0,
        };
        let s = EpistemicState::density(d);
        let (_, w) = s.sample(&mut crate::rng::seeded(1));
        assert_eq!(w, 2.0);
    }
}
