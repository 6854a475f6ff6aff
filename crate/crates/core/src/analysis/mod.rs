//! Cross-model verification: support lemmas, deficiency, contextuality and
//! the measurement-disturbance argument.

mod context;
mod lemmas;
mod support;

use serde::Serialize;

pub use context::{
    canonical_measurements, canonical_preparations, demo_measurement_contextuality,
    demo_preparation_contextuality, measurement_contextuality, preparation_contextuality,
    ContextPair, MeasurementContextReport, PreparationContextReport,
};
pub use lemmas::{
    check_convexity_measurement, check_convexity_preparation, check_orthogonal_disjoint,
    check_pvm_cover, check_pvm_disjoint, check_support_subset, lemma_suite, LemmaReport,
};
pub use support::{
    check_update_rule_violation, classify_model_determinism, compare_supports, confidence_radius,
    detect_deficiency, SupportReport, SupportRelation,
};

/// Outcome of a sampled check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    /// Points or effects examined.
    pub checked: usize,
    /// Largest discrepancy seen, in the units of the check.
    pub max_deviation: f64,
    pub detail: String,
}
