//! Supports Supp(μ) and Supp(ξ(k|·)) as predicates with samplers.

use crate::error::{Error, Result};
use crate::rng::Rng;

use super::epistemic::EpistemicState;
use super::indicator::IndicatorFunction;
use super::space::OnticPoint;

/// Default threshold on evaluator values.
pub const SUPPORT_EPS: f64 = 1e-9;

/// Rejection-sampling budget for indicator supports.
pub const MAX_REJECTIONS: usize = 1_000_000;

/// The object whose support is taken.
#[derive(Debug, Clone)]
pub enum Supported {
    Epistemic(EpistemicState),
    Indicator(IndicatorFunction, usize),
}

/// A support set: membership predicate plus a sampler of member points.
///
/// Epistemic supports are sampled from the state itself; indicator supports
/// by rejection from the uniform measure of the indicator's space.
#[derive(Debug, Clone)]
pub struct Support {
    target: Supported,
    eps: f64,
}

pub fn support_sampler(target: Supported, eps: f64) -> Support {
    Support { target, eps }
}

impl Support {
    pub fn contains(&self, p: &OnticPoint) -> bool {
        match &self.target {
            Supported::Epistemic(mu) => mu.in_support(p, self.eps),
            Supported::Indicator(xi, k) => xi.in_support(*k, p, self.eps),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Result<OnticPoint> {
        for _ in 0..MAX_REJECTIONS {
            let p = match &self.target {
                Supported::Epistemic(mu) => mu.sample(rng).0,
                Supported::Indicator(xi, _) => xi.space().sample_uniform(rng),
            };
            if self.contains(&p) {
                return Ok(p);
            }
        }
        Err(Error::SupportSampling(MAX_REJECTIONS))
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}
