//! Generic support and convexity properties every ontological model obeys.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::OntologicalModel;
use crate::ontology::{
    predict, verify_normalization, EpistemicState, IndicatorFunction, Integrator, MeasurementSetting,
    OnticPoint, PreparationSetting, INDICATOR_TOL,
};
use crate::quantum::{PureState, Pvm};
use crate::rng::Rng;

use super::context::{canonical_measurements, canonical_preparations};
use super::CheckResult;

fn result(failures: usize, checked: usize, max_deviation: f64, what: &str) -> CheckResult {
    CheckResult {
        pass: failures == 0,
        checked,
        max_deviation,
        detail: format!("{failures} of {checked} {what}"),
    }
}

/// Every point drawn from μ(·|ψ) lies in Supp(ξ(k|·)).
pub fn check_support_subset(
    mu: &EpistemicState,
    xi: &IndicatorFunction,
    k: usize,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<CheckResult> {
    if &mu.space() != xi.space() {
        return Err(Error::SpaceMismatch("state and indicator over different spaces".into()));
    }
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let v = xi.value(k, &mu.sample(rng).0);
        if v <= eps {
            failures += 1;
            worst = worst.max(1.0 - v);
        }
    }
    Ok(result(failures, n, worst, "state samples outside the indicator support"))
}

/// No point drawn from either state lies in both supports.
pub fn check_orthogonal_disjoint(
    mu1: &EpistemicState,
    mu2: &EpistemicState,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> CheckResult {
    let mut failures = 0;
    for _ in 0..n {
        let (a, _) = mu1.sample(rng);
        let (b, _) = mu2.sample(rng);
        failures += mu2.in_support(&a, eps) as usize + mu1.in_support(&b, eps) as usize;
    }
    result(failures, 2 * n, failures as f64, "samples in both supports")
}

/// At every sampled λ the outcomes' values sum to 1 and some outcome has λ
/// in its support.
pub fn check_pvm_cover(
    parts: &[(&IndicatorFunction, usize)],
    ambient: &dyn Fn(&mut Rng) -> OnticPoint,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> CheckResult {
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let p = ambient(rng);
        let total: f64 = parts.iter().map(|(xi, k)| xi.value(*k, &p)).sum();
        let covered = parts.iter().any(|(xi, k)| xi.in_support(*k, &p, eps));
        let short = 1.0 - total;
        worst = worst.max(short);
        if short > INDICATOR_TOL || !covered {
            failures += 1;
        }
    }
    result(failures, n, worst, "points not covered")
}

/// No sampled λ lies in two supports. Only meaningful for deterministic ξ.
pub fn check_pvm_disjoint(
    parts: &[(&IndicatorFunction, usize)],
    ambient: &dyn Fn(&mut Rng) -> OnticPoint,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<CheckResult> {
    if parts.iter().any(|(xi, _)| !xi.is_deterministic()) {
        return Err(Error::Precondition("indicators must be outcome deterministic".into()));
    }
    let mut failures = 0;
    for _ in 0..n {
        let p = ambient(rng);
        let hits = parts.iter().filter(|(xi, k)| xi.in_support(*k, &p, eps)).count();
        failures += (hits > 1) as usize;
    }
    Ok(result(failures, n, failures as f64, "points in two supports"))
}

/// μ(·|ρ, S_P) for an ensemble setting agrees with Σ p_i μ(·|ψ_i) for the
/// `reference` weights, judged through predictions for `n_effects` random
/// two-outcome tests. Both sides use the same sample streams, and agreement
/// means a difference within 3 combined standard errors.
pub fn check_convexity_preparation(
    model: &dyn OntologicalModel,
    setting: &PreparationSetting,
    reference: &[(f64, PureState)],
    integ: &Integrator,
    n_effects: usize,
    rng: &mut Rng,
) -> Result<CheckResult> {
    let mu = model.epistemic(setting)?;
    let parts = reference
        .iter()
        .map(|(w, psi)| Ok((*w, model.epistemic_pure(psi)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n_effects {
        let phi = PureState::random(model.dim(), rng);
        let xi = model.indicator_pvm(&Pvm::binary(&phi))?;
        let whole = predict(&mu, &xi, 0, integ)?;
        let (mut value, mut var) = (0.0, 0.0);
        for (i, (w, m)) in parts.iter().enumerate() {
            let e = predict(m, &xi, 0, &integ.reseeded(i as u64))?;
            value += w * e.value;
            var += (w * e.standard_error).powi(2);
        }
        let diff = (whole.value - value).abs();
        let tol = 3.0 * (whole.standard_error.powi(2) + var).sqrt() + 1e-12;
        worst = worst.max(diff);
        failures += (diff > tol) as usize;
    }
    Ok(result(failures, n_effects, worst, "effects with differing predictions"))
}

/// ξ(E|λ) for the decomposition `E = Σ p_i |ψ_i><ψ_i|` equals
/// Σ p_i ξ(ψ_i|λ) pointwise within 1e-10.
pub fn check_convexity_measurement(
    model: &dyn OntologicalModel,
    terms: &[(f64, PureState)],
    n: usize,
    rng: &mut Rng,
) -> Result<CheckResult> {
    let setting = MeasurementSetting::decomposition(terms.to_vec(), "lemma")?;
    let xi = model.indicator(&setting)?;
    let parts = terms
        .iter()
        .map(|(w, psi)| Ok((*w, model.indicator_pvm(&Pvm::binary(psi))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let p = model.sample_ambient(rng);
        let mix: f64 = parts.iter().map(|(w, x)| w * x.value(0, &p)).sum();
        let d = (xi.value(0, &p) - mix).abs();
        worst = worst.max(d);
        failures += (d > INDICATOR_TOL) as usize;
    }
    Ok(result(failures, n, worst, "points with non-convex indicator"))
}

/// One row of the lemma suite. `result` is `None` where the lemma does not
/// apply (disjointness of supports for indeterministic indicators).
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    pub result: Option<CheckResult>,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.result.as_ref().is_none_or(|r| r.pass)
    }
}

/// Normalization plus the six support and convexity lemmas for one model,
/// on random states and tests drawn from `rng`.
pub fn lemma_suite(
    model: &dyn OntologicalModel,
    n: usize,
    eps: f64,
    integ: &Integrator,
    rng: &mut Rng,
) -> Result<Vec<LemmaReport>> {
    let dim = model.dim();
    let psi = PureState::random(dim, rng);
    let psi_perp = orthogonal_to(&psi, rng);
    let phi = PureState::random(dim, rng);
    let mu = model.epistemic_pure(&psi)?;
    let mut out = Vec::new();

    let norm = verify_normalization(&mu, integ)?;
    out.push(LemmaReport {
        lemma: "normalization",
        result: Some(CheckResult {
            pass: norm.pass,
            checked: 1,
            max_deviation: (norm.value - 1.0).abs(),
            detail: format!("total mass {:.6} ± {:.1e}", norm.value, norm.standard_error),
        }),
    });

    let test = model.indicator_pvm(&Pvm::binary(&psi))?;
    out.push(LemmaReport {
        lemma: "support-inclusion",
        result: Some(check_support_subset(&mu, &test, 0, n, eps, rng)?),
    });

    let mu_perp = model.epistemic_pure(&psi_perp)?;
    out.push(LemmaReport {
        lemma: "orthogonal-disjoint",
        result: Some(check_orthogonal_disjoint(&mu, &mu_perp, n, eps, rng)),
    });

    let xi = model.indicator_pvm(&Pvm::binary(&phi))?;
    let parts = [(&xi, 0), (&xi, 1)];
    let ambient = |r: &mut Rng| model.sample_ambient(r);
    out.push(LemmaReport {
        lemma: "pvm-cover",
        result: Some(check_pvm_cover(&parts, &ambient, n, eps, rng)),
    });
    out.push(LemmaReport {
        lemma: "pvm-disjoint",
        result: if xi.is_deterministic() {
            Some(check_pvm_disjoint(&parts, &ambient, n, eps, rng)?)
        } else {
            None
        },
    });

    let (basis, _) = canonical_preparations();
    let terms = match &basis.preparation {
        crate::ontology::Preparation::Ensemble(t) => t.clone(),
        crate::ontology::Preparation::Pure(p) => vec![(1.0, p.clone())],
    };
    let lifted: Vec<(f64, PureState)> = terms.iter().map(|(w, s)| (*w, embed(s, dim))).collect();
    let setting = PreparationSetting::ensemble(lifted.clone(), basis.context.clone())?;
    out.push(LemmaReport {
        lemma: "preparation-convexity",
        result: Some(check_convexity_preparation(model, &setting, &lifted, integ, 20, rng)?),
    });

    let mut worst = CheckResult {
        pass: true,
        checked: 0,
        max_deviation: 0.0,
        detail: String::new(),
    };
    let (m1, m2) = canonical_measurements();
    for m in [m1, m2] {
        if let crate::ontology::Measurement::EffectDecomposition(t) = &m.measurement {
            let t: Vec<(f64, PureState)> = t.iter().map(|(w, s)| (*w, embed(s, dim))).collect();
            let r = check_convexity_measurement(model, &t, n, rng)?;
            worst.pass &= r.pass;
            worst.checked += r.checked;
            worst.max_deviation = worst.max_deviation.max(r.max_deviation);
            worst.detail = r.detail;
        }
    }
    out.push(LemmaReport {
        lemma: "measurement-convexity",
        result: Some(worst),
    });
    Ok(out)
}

/// A qubit state embedded in the first two levels of a `dim`-level system.
fn embed(psi: &PureState, dim: usize) -> PureState {
    if psi.dim() == dim {
        return psi.clone();
    }
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
    amps[..psi.dim()].copy_from_slice(psi.amplitudes());
    PureState::new(amps).expect("embedding preserves norm")
}

/// A random state orthogonal to `psi` (Gram-Schmidt on a random vector).
fn orthogonal_to(psi: &PureState, rng: &mut Rng) -> PureState {
    loop {
        let r = PureState::random(psi.dim(), rng);
        let c = psi.inner(&r);
        let v: Vec<_> = r
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| a - c * b)
            .collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Bell1Model, KsModel, ModelKind};
    use crate::rng;
    use crate::ontology::{IndicatorFunction, OnticSpace, ScaledDensity};
    use std::sync::Arc;

    #[test]
    fn suite_passes_for_every_model() {
        let mut rng = rng::seeded(10);
        let integ = Integrator::product_rule(20_000, 1);
        for m in ModelKind::ALL {
            let reports = lemma_suite(m.qubit().as_ref(), 2000, 1e-9, &integ, &mut rng).unwrap();
            for r in &reports {
                assert!(r.pass(), "{m} {}: {:?}", r.lemma, r.result);
            }
            let applies = reports.iter().find(|r| r.lemma == "pvm-disjoint").unwrap().result.is_some();
            assert_eq!(applies, matches!(m, ModelKind::Ks | ModelKind::Bell1 | ModelKind::Bell2));
        }
    }

    #[test]
    fn suite_runs_in_three_dimensions() {
        let mut rng = rng::seeded(11);
        let integ = Integrator::default();
        for model in [
            Arc::new(Bell1Model::new(3)) as Arc<dyn OntologicalModel>,
            Arc::new(crate::models::BbModel::new(3)),
            Arc::new(crate::models::AaronsonModel::product_theory(3)),
        ] {
            for r in lemma_suite(model.as_ref(), 500, 1e-9, &integ, &mut rng).unwrap() {
                assert!(r.pass(), "{} {}", model.name(), r.lemma);
            }
        }
    }

    #[test]
    fn broken_fixtures_fail() {
        let mut rng = rng::seeded(12);
        let psi = PureState::basis(2, 0);
        let mu = KsModel.epistemic_pure(&psi).unwrap();
        assert!(!check_orthogonal_disjoint(&mu, &mu, 1000, 1e-9, &mut rng).pass);

        let xi = KsModel.indicator_pvm(&Pvm::binary(&psi)).unwrap();
        let ambient = |r: &mut Rng| OnticSpace::UnitSphere.sample_uniform(r);
        assert!(!check_pvm_disjoint(&[(&xi, 0), (&xi, 0)], &ambient, 1000, 1e-9, &mut rng)
            .unwrap()
            .pass);
        assert!(!check_pvm_cover(&[(&xi, 0)], &ambient, 1000, 1e-9, &mut rng).pass);

        let unnormalized = EpistemicState::density(ScaledDensity {
            inner: match mu {
                EpistemicState::Density(d) => d,
                _ => unreachable!(),
            },
            factor: 2.0,
        });
        let check = verify_normalization(&unnormalized, &Integrator::monte_carlo(100_000, 2)).unwrap();
        assert!(!check.pass);
        assert!((check.value - 2.0).abs() < 0.02);

        let one = PureState::basis(2, 1);
        let setting = PreparationSetting::ensemble(vec![(0.5, psi.clone()), (0.5, one.clone())], "half").unwrap();
        let r = check_convexity_preparation(
            &KsModel,
            &setting,
            &[(0.75, psi), (0.25, one)],
            &Integrator::monte_carlo(10_000, 3),
            20,
            &mut rng,
        )
        .unwrap();
        assert!(!r.pass, "{r:?}");
    }

    #[test]
    fn single_term_decompositions_pass() {
        let mut rng = rng::seeded(13);
        let psi = PureState::qubit_angle(0.2);
        let setting = PreparationSetting::ensemble(vec![(1.0, psi.clone())], "one").unwrap();
        let r = check_convexity_preparation(
            &KsModel,
            &setting,
            &[(1.0, psi.clone())],
            &Integrator::monte_carlo(10_000, 3),
            5,
            &mut rng,
        )
        .unwrap();
        assert!(r.pass);
        assert!(check_convexity_measurement(&KsModel, &[(1.0, psi)], 1000, &mut rng).unwrap().pass);
    }

    #[test]
    fn cover_of_trivial_indicator() {
        let mut rng = rng::seeded(14);
        let xi = IndicatorFunction::trivial(OnticSpace::UnitInterval);
        let ambient = |r: &mut Rng| OnticSpace::UnitInterval.sample_uniform(r);
        assert!(check_pvm_cover(&[(&xi, 0)], &ambient, 100, 1e-9, &mut rng).pass);
    }
}
