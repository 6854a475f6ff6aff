//! Indicator functions ξ(k|λ, S_M).

use std::fmt;
use std::sync::Arc;

use super::space::{OnticPoint, OnticSpace};

pub type Evaluator = Arc<dyn Fn(usize, &OnticPoint) -> f64 + Send + Sync>;
pub type Breakpoints = Arc<dyn Fn(usize, &OnticPoint) -> Vec<f64> + Send + Sync>;

/// Tolerance for Σ_k ξ(k|λ) = 1 and for {0, 1}-valuedness.
pub const INDICATOR_TOL: f64 = 1e-10;

/// Response probabilities ξ(k|λ) for each outcome of one measurement.
///
/// An indicator can optionally report, for a point whose unit-interval
/// coordinate is left unspecified, the positions in that coordinate where it
/// may jump. The product integration rule uses these to integrate
/// step-shaped indicators exactly.
#[derive(Clone)]
pub struct IndicatorFunction {
    space: OnticSpace,
    outcomes: usize,
    deterministic: bool,
    eval: Evaluator,
    breakpoints: Option<Breakpoints>,
}

impl fmt::Debug for IndicatorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndicatorFunction")
            .field("space", &self.space)
            .field("outcomes", &self.outcomes)
            .field("deterministic", &self.deterministic)
            .finish_non_exhaustive()
    }
}

impl IndicatorFunction {
    pub fn new(
        space: OnticSpace,
        outcomes: usize,
        deterministic: bool,
        eval: impl Fn(usize, &OnticPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            space,
            outcomes,
            deterministic,
            eval: Arc::new(eval),
            breakpoints: None,
        }
    }

    pub fn with_breakpoints(
        mut self,
        b: impl Fn(usize, &OnticPoint) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.breakpoints = Some(Arc::new(b));
        self
    }

    /// ξ ≡ 1 for a single-outcome (trivial) measurement.
    pub fn trivial(space: OnticSpace) -> Self {
        Self::new(space, 1, true, |_, _| 1.0)
    }

    pub fn value(&self, k: usize, p: &OnticPoint) -> f64 {
        (self.eval)(k, p)
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    /// The declared determinism flag.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn breakpoints(&self) -> Option<&Breakpoints> {
        self.breakpoints.as_ref()
    }

    pub fn in_support(&self, k: usize, p: &OnticPoint, eps: f64) -> bool {
        self.value(k, p) > eps
    }

    /// Σ_k ξ(k|λ) at one point.
    pub fn total(&self, p: &OnticPoint) -> f64 {
        (0..self.outcomes).map(|k| self.value(k, p)).sum()
    }
}

/// Heaviside step with Θ(0) = 1.
pub fn heaviside(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}
