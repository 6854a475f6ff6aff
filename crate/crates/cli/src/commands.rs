//! The three subcommands, each producing an ordered list of records.

use std::f64::consts::PI;
use std::path::Path;

use ontic_core::analysis::{
    check_update_rule_violation, classify_model_determinism, demo_measurement_contextuality,
    demo_preparation_contextuality, detect_deficiency, lemma_suite,
};
use ontic_core::coloring::{
    build_graph, contextual_witness, enumerate_colorings, enumerate_triads, search_coloring, Color,
    RaySet, SearchOutcome,
};
use ontic_core::device::{classify_device_determinism, lift_indicator, Aerts};
use ontic_core::models::{ModelKind, OntologicalModel};
use ontic_core::ontology::{predict, Determinism, Integrator, OnticPoint};
use ontic_core::quantum::{born_probability, BlochVector, PovmEffect, PureState, Pvm};
use ontic_core::rng::{self, Rng};
use serde::Serialize;

use crate::report::{ReportRecord, Verdict};
use crate::{CliError, RunConfig};

const BORN_ANCHOR: &str =
    "integrating the indicator function against the epistemic state yields the Born probability";
const DEFICIENCY_ANCHOR: &str = "a model is deficient when some ontic states pass the test for a state \
     without being reachable by preparing that state";
const PREP_ANCHOR: &str =
    "operationally equivalent preparations may be represented by different epistemic states";
const MEAS_ANCHOR: &str =
    "operationally equivalent measurements may be represented by different indicator functions";
const UPDATE_ANCHOR: &str = "in a deficient model a passed test cannot be explained by conditioning \
     the epistemic state on the indicator alone";
const DETERMINISM_ANCHOR: &str = "outcomes may be fixed by the device setting, only by the device's \
     ontic state, or by neither";
const COLOR_ANCHOR: &str = "a value assignment needs exactly one green vertex per triad and never two \
     green vertices on an edge";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Lemmas,
    Deficiency,
    PrepContextuality,
    MeasContextuality,
    UpdateRule,
    DeterminismClass,
}

fn lemma_anchor(lemma: &str) -> &'static str {
    match lemma {
        "normalization" => "every epistemic state integrates to one over the ontic space",
        "support-inclusion" => "states prepared as psi always pass the test for psi",
        "orthogonal-disjoint" => "epistemic states of orthogonal states have disjoint supports",
        "pvm-cover" => "the indicator supports of a projective measurement cover the ontic space",
        "pvm-disjoint" => "outcome-deterministic indicators of one measurement have disjoint supports",
        "preparation-convexity" => "an ensemble is represented by the mixture of its members' states",
        "measurement-convexity" => "a mixed test is represented by the mixture of its members' indicators",
        _ => "",
    }
}

fn models(cfg: &RunConfig, explicit: Option<ModelKind>) -> Vec<ModelKind> {
    match explicit.or(cfg.model) {
        Some(m) => vec![m],
        None => ModelKind::ALL.to_vec(),
    }
}

fn model_stream(cfg: &RunConfig, kind: ModelKind) -> u64 {
    let index = ModelKind::ALL.iter().position(|k| *k == kind).unwrap_or(0);
    rng::derive(cfg.seed, index as u64)
}

fn fmt_state(psi: &PureState) -> String {
    let parts: Vec<String> = psi
        .amplitudes()
        .iter()
        .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
        .collect();
    format!("[{}]", parts.join(" "))
}

fn fmt_point(p: &OnticPoint) -> String {
    match p {
        OnticPoint::Sphere(v) => format!("({:.6}, {:.6}, {:.6})", v[0], v[1], v[2]),
        OnticPoint::Interval(x) => format!("{x:.6}"),
        OnticPoint::Ray(s) => fmt_state(s),
        OnticPoint::Label(i) => format!("#{i}"),
        OnticPoint::Tuple(c) => {
            let parts: Vec<String> = c.iter().map(fmt_point).collect();
            format!("({})", parts.join(", "))
        }
    }
}

/// Born reproduction on `pairs` random (state, binary projective test)
/// pairs. Tolerance is `max(3·SE, 1e-3)`, or 1e-9 when the integral is exact.
pub fn verify(cfg: &RunConfig, model: Option<ModelKind>, pairs: usize) -> Result<Vec<ReportRecord>, CliError> {
    let mut out = Vec::new();
    for kind in models(cfg, model) {
        let m = kind.qubit();
        let stream = model_stream(cfg, kind);
        let mut rng = rng::seeded(stream);
        for i in 0..pairs {
            let psi = PureState::random(2, &mut rng);
            let phi = PureState::random(2, &mut rng);
            let mu = m.epistemic_pure(&psi)?;
            let xi = m.indicator_pvm(&Pvm::binary(&phi))?;
            let integ = Integrator::product_rule(cfg.samples, rng::derive(stream, i as u64));
            let e = predict(&mu, &xi, 0, &integ)?;
            let quantum = born_probability(&psi.density(), &PovmEffect::projector(&phi))?;
            let tol = if e.standard_error == 0.0 {
                1e-9
            } else {
                (3.0 * e.standard_error).max(1e-3)
            };
            let dev = (e.value - quantum).abs();
            out.push(
                ReportRecord::new("born-reproduction", kind.as_str(), Verdict::from_pass(dev <= tol), BORN_ANCHOR)
                    .input("pair", i)
                    .input("psi", fmt_state(&psi))
                    .input("phi", fmt_state(&phi))
                    .input("samples", cfg.samples)
                    .estimate(e.value, e.standard_error)
                    .detail(format!("quantum {quantum:.9} deviation {dev:.3e} tolerance {tol:.1e}")),
            );
        }
    }
    Ok(out)
}

pub fn analyze(
    cfg: &RunConfig,
    check: Check,
    support_samples: usize,
) -> Result<Vec<ReportRecord>, CliError> {
    let mut out = Vec::new();
    for kind in models(cfg, None) {
        let m = kind.qubit();
        let stream = model_stream(cfg, kind);
        let mut rng = rng::seeded(rng::derive(stream, 1 << 32));
        let integ = Integrator::product_rule(cfg.samples, rng::derive(stream, 1 << 33));
        let name = kind.as_str();
        let n = support_samples;
        let eps = cfg.epsilon;
        match check {
            Check::Lemmas => {
                for r in lemma_suite(m.as_ref(), n, eps, &integ, &mut rng)? {
                    let base = ReportRecord::new(r.lemma, name, Verdict::from_pass(r.pass()), lemma_anchor(r.lemma))
                        .input("samples", n)
                        .input("epsilon", eps);
                    out.push(match r.result {
                        Some(c) => base
                            .input("checked", c.checked)
                            .detail(format!("{}; max deviation {:.3e}", c.detail, c.max_deviation)),
                        None => base.detail("not applicable: indicator is not outcome deterministic"),
                    });
                }
            }
            Check::Deficiency => {
                let psi = PureState::random(2, &mut rng);
                let r = detect_deficiency(m.as_ref(), &psi, n, eps, &mut rng)?;
                let verdict = if r.is_deficient() {
                    Verdict::Deficient
                } else {
                    Verdict::NotDeficient
                };
                out.push(
                    ReportRecord::new("deficiency", name, verdict, DEFICIENCY_ANCHOR)
                        .input("psi", fmt_state(&psi))
                        .input("samples", n)
                        .input("epsilon", eps)
                        .estimate(r.difference_fraction, r.confidence_radius)
                        .detail(format!(
                            "relation {}; state support {:.4}, test support {:.4}, difference {:.4}",
                            serde_json::to_value(r.relation)?.as_str().unwrap_or_default(),
                            r.mu_fraction,
                            r.xi_fraction,
                            r.difference_fraction
                        )),
                );
            }
            Check::PrepContextuality => {
                let r = demo_preparation_contextuality(m.as_ref(), n, eps, &mut rng)?;
                let verdict = if r.contextual {
                    Verdict::Contextual
                } else {
                    Verdict::NonContextual
                };
                out.push(
                    ReportRecord::new("prep-contextuality", name, verdict, PREP_ANCHOR)
                        .input("contexts", "basis,pi8")
                        .input("samples", n)
                        .input("epsilon", eps)
                        .estimate(r.covered[0] - r.covered[1], r.confidence_radius)
                        .detail(format!(
                            "covered {:.4} vs {:.4}; outside other {:.4} vs {:.4}",
                            r.covered[0], r.covered[1], r.outside_other[0], r.outside_other[1]
                        )),
                );
            }
            Check::MeasContextuality => {
                let r = demo_measurement_contextuality(m.as_ref(), n, eps, &mut rng)?;
                let verdict = if r.contextual {
                    Verdict::Contextual
                } else {
                    Verdict::NonContextual
                };
                out.push(
                    ReportRecord::new("meas-contextuality", name, verdict, MEAS_ANCHOR)
                        .input("contexts", "basis,pi8")
                        .input("samples", n)
                        .input("epsilon", eps)
                        .estimate(r.covered[0] - r.covered[1], r.confidence_radius)
                        .detail(format!(
                            "covered {:.4} vs {:.4}; max indicator difference {:.3e}",
                            r.covered[0], r.covered[1], r.max_difference
                        )),
                );
            }
            Check::UpdateRule => {
                let psi = PureState::basis(2, 0);
                let phi = PureState::qubit_angle(PI / 8.0);
                let w = check_update_rule_violation(m.as_ref(), &psi, &phi, n, eps, &mut rng)?;
                let (verdict, detail) = match &w {
                    Some(p) => (Verdict::Deficient, format!("witness {}", fmt_point(p))),
                    None => (Verdict::NotDeficient, format!("no witness in {n} samples")),
                };
                out.push(
                    ReportRecord::new("update-rule", name, verdict, UPDATE_ANCHOR)
                        .input("psi", fmt_state(&psi))
                        .input("phi", fmt_state(&phi))
                        .input("samples", n)
                        .input("epsilon", eps)
                        .detail(detail),
                );
            }
            Check::DeterminismClass => {
                let system = match classify_model_determinism(m.as_ref(), n, &mut rng)? {
                    Determinism::Deterministic => "deterministic",
                    Determinism::Indeterministic { .. } => "indeterministic",
                };
                let class = device_class(m.as_ref(), kind, n, &mut rng)?;
                out.push(
                    ReportRecord::new("determinism-class", name, Verdict::Pass, DETERMINISM_ANCHOR)
                        .input("outcome-determinism", system)
                        .input("samples", n)
                        .detail(class),
                );
            }
        }
    }
    Ok(out)
}

/// Aerts is classified through its own device ontology; every other model
/// through a one-point device space.
fn device_class(
    m: &dyn OntologicalModel,
    kind: ModelKind,
    n: usize,
    rng: &mut Rng,
) -> Result<&'static str, CliError> {
    let n = n.max(2);
    let class = if kind == ModelKind::Aerts {
        let a = BlochVector::random(rng);
        let sphere = |r: &mut Rng| OnticPoint::Sphere(rng::uniform_sphere(r));
        classify_device_determinism(&Aerts.indicator(), &Aerts.device(&a), &sphere, n, rng)?
    } else {
        let phi = PureState::random(m.dim(), rng);
        let (joint, device) = lift_indicator(&m.indicator_pvm(&Pvm::binary(&phi))?);
        classify_device_determinism(&joint, &device, &|r| m.sample_ambient(r), n, rng)?
    };
    Ok(class.name())
}

#[derive(Serialize)]
struct ColoringFile<'a> {
    labels: &'a [String],
    colors: Vec<Color>,
}

pub struct ColorOptions<'a> {
    pub path: &'a Path,
    pub tolerance: f64,
    pub enumerate: bool,
    pub limit: Option<usize>,
    pub coloring_out: Option<&'a Path>,
}

pub fn ks_color(opts: &ColorOptions) -> Result<Vec<ReportRecord>, CliError> {
    let rays = RaySet::load(opts.path)?;
    let g = build_graph(&rays, opts.tolerance)?;
    let triads = enumerate_triads(&g);
    let witness = contextual_witness(&g, &triads);
    let base = |check: &str, verdict| {
        ReportRecord::new(check, "ks-coloring", verdict, COLOR_ANCHOR)
            .input("path", opts.path.display())
            .input("rays", rays.len())
            .input("edges", g.edges().len())
            .input("triads", triads.len())
            .input("tolerance", opts.tolerance)
    };
    let mut out = Vec::new();
    match search_coloring(&g, &triads) {
        SearchOutcome::Satisfiable { coloring, nodes } => {
            let greens = coloring.greens();
            if let Some(path) = opts.coloring_out {
                let file = ColoringFile {
                    labels: rays.labels(),
                    colors: coloring.0.iter().map(|c| c.unwrap_or(Color::Red)).collect(),
                };
                let mut text = serde_json::to_string_pretty(&file)?;
                text.push('\n');
                std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            out.push(base("ks-color", Verdict::Sat).detail(format!(
                "green vertices {greens:?}; {nodes} search nodes; {} vertices in several triads",
                witness.len()
            )));
        }
        SearchOutcome::Unsatisfiable { nodes } => {
            out.push(base("ks-color", Verdict::Unsat).detail(format!(
                "no valid coloring after exhausting {nodes} search nodes; {} vertices in several triads",
                witness.len()
            )));
        }
    }
    if opts.enumerate {
        let count = enumerate_colorings(&g, &triads, opts.limit).len();
        let verdict = if count > 0 { Verdict::Sat } else { Verdict::Unsat };
        let mut r = base("ks-color-enumerate", verdict)
            .estimate(count as f64, 0.0)
            .detail(format!("{count} valid colorings"));
        if let Some(l) = opts.limit {
            r = r.input("limit", l);
        }
        out.push(r);
    }
    Ok(out)
}
