//! The ontological-model contract: ontic spaces, epistemic states, indicator
//! functions and the integral that ties them to quantum statistics.

mod epistemic;
mod indicator;
mod integrate;
mod settings;
mod space;
mod support;

pub use epistemic::{Density, EpistemicState, ScaledDensity, UniformInterval};
pub use indicator::{heaviside, Breakpoints, Evaluator, IndicatorFunction, INDICATOR_TOL};
pub use integrate::{
    classify_outcome_determinism, integrate, predict, verify_normalization, Determinism, Estimate,
    Integrand, Integrator, IntervalBreaks, Method, NormalizationCheck, UniformOver,
    DEFAULT_SAMPLES,
};
pub use settings::{Measurement, MeasurementSetting, Preparation, PreparationSetting};
pub use space::{OnticPoint, OnticSpace, POINT_TOL};
pub use support::{support_sampler, Support, Supported, MAX_REJECTIONS, SUPPORT_EPS};
