//! Ontic state spaces and points.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quantum::{dot3, norm3, PureState};
use crate::rng::{self, Rng};

/// Tolerance on sphere-point coordinates and atom equality.
pub const POINT_TOL: f64 = 1e-10;

/// Descriptor of an ontic state space Λ.
#[derive(Debug, Clone, PartialEq)]
pub enum OnticSpace {
    /// Unit sphere in R^3, reference measure = area (4π).
    UnitSphere,
    /// `[0, 1]` with Lebesgue measure.
    UnitInterval,
    /// Rays of C^N with the normalized Haar measure.
    RayLabels(usize),
    /// Finite label set with counting measure.
    DiscreteLabels(Vec<String>),
    Product(Vec<OnticSpace>),
}

impl OnticSpace {
    pub fn product(factors: Vec<OnticSpace>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::SpaceMismatch("empty product space".into()));
        }
        Ok(OnticSpace::Product(factors))
    }

    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::SpaceMismatch("empty label set".into()));
        }
        Ok(OnticSpace::DiscreteLabels(labels))
    }

    /// Total reference measure of the space.
    pub fn measure(&self) -> f64 {
        match self {
            OnticSpace::UnitSphere => 4.0 * PI,
            OnticSpace::UnitInterval => 1.0,
            OnticSpace::RayLabels(_) => 1.0,
            OnticSpace::DiscreteLabels(l) => l.len() as f64,
            OnticSpace::Product(f) => f.iter().map(OnticSpace::measure).product(),
        }
    }

    /// Draw from the normalized reference measure.
    pub fn sample_uniform(&self, rng: &mut Rng) -> OnticPoint {
        match self {
            OnticSpace::UnitSphere => OnticPoint::Sphere(rng::uniform_sphere(rng)),
            OnticSpace::UnitInterval => OnticPoint::Interval(rng::unit_interval(rng)),
            OnticSpace::RayLabels(n) => OnticPoint::Ray(PureState::random(*n, rng)),
            OnticSpace::DiscreteLabels(l) => OnticPoint::Label(rng::index(rng, l.len())),
            OnticSpace::Product(f) => {
                OnticPoint::Tuple(f.iter().map(|s| s.sample_uniform(rng)).collect())
            }
        }
    }

    pub fn contains(&self, p: &OnticPoint) -> bool {
        match (self, p) {
            (OnticSpace::UnitSphere, OnticPoint::Sphere(v)) => (norm3(v) - 1.0).abs() <= 1e-12,
            (OnticSpace::UnitInterval, OnticPoint::Interval(x)) => (0.0..=1.0).contains(x),
            (OnticSpace::RayLabels(n), OnticPoint::Ray(s)) => s.dim() == *n,
            (OnticSpace::DiscreteLabels(l), OnticPoint::Label(i)) => *i < l.len(),
            (OnticSpace::Product(f), OnticPoint::Tuple(c)) => {
                f.len() == c.len() && f.iter().zip(c).all(|(s, p)| s.contains(p))
            }
            _ => false,
        }
    }
}

/// A point λ of an ontic space.
#[derive(Debug, Clone)]
pub enum OnticPoint {
    Sphere([f64; 3]),
    Interval(f64),
    Ray(PureState),
    Label(usize),
    Tuple(Vec<OnticPoint>),
}

impl OnticPoint {
    pub fn sphere(&self) -> Option<&[f64; 3]> {
        match self {
            OnticPoint::Sphere(v) => Some(v),
            _ => None,
        }
    }

    pub fn interval(&self) -> Option<f64> {
        match self {
            OnticPoint::Interval(x) => Some(*x),
            _ => None,
        }
    }

    pub fn ray(&self) -> Option<&PureState> {
        match self {
            OnticPoint::Ray(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(&self) -> Option<usize> {
        match self {
            OnticPoint::Label(i) => Some(*i),
            _ => None,
        }
    }

    pub fn component(&self, i: usize) -> Option<&OnticPoint> {
        match self {
            OnticPoint::Tuple(c) => c.get(i),
            _ => None,
        }
    }

    /// Equality of points as atoms: rays compared up to phase, sphere and
    /// interval coordinates within [`POINT_TOL`].
    pub fn same_atom(&self, other: &OnticPoint) -> bool {
        match (self, other) {
            (OnticPoint::Sphere(a), OnticPoint::Sphere(b)) => {
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                dot3(&d, &d).sqrt() <= POINT_TOL
            }
            (OnticPoint::Interval(a), OnticPoint::Interval(b)) => (a - b).abs() <= POINT_TOL,
            (OnticPoint::Ray(a), OnticPoint::Ray(b)) => a.same_ray(b),
            (OnticPoint::Label(a), OnticPoint::Label(b)) => a == b,
            (OnticPoint::Tuple(a), OnticPoint::Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_atom(y))
            }
            _ => false,
        }
    }

    pub(crate) fn placeholder() -> Self {
        OnticPoint::Interval(f64::NAN)
    }

    pub(crate) fn has_placeholder(&self) -> bool {
        match self {
            OnticPoint::Interval(x) => x.is_nan(),
            OnticPoint::Tuple(c) => c.iter().any(OnticPoint::has_placeholder),
            _ => false,
        }
    }

    pub(crate) fn fill_placeholder(&self, t: f64) -> OnticPoint {
        match self {
            OnticPoint::Interval(x) if x.is_nan() => OnticPoint::Interval(t),
            OnticPoint::Tuple(c) => OnticPoint::Tuple(c.iter().map(|p| p.fill_placeholder(t)).collect()),
            p => p.clone(),
        }
    }
}
