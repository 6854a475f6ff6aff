use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::OntologicalModel;
use crate::ontology::{
    classify_outcome_determinism, Determinism, EpistemicState, IndicatorFunction, OnticPoint,
};
use crate::quantum::{PureState, Pvm};
use crate::rng::Rng;

/// Half-width of a binomial proportion estimate at `n` samples, worst case.
pub fn confidence_radius(n: usize) -> f64 {
    0.5 / (n.max(1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportRelation {
    Equal,
    StrictSubset,
    Disjoint,
    Overlapping,
}

/// Supp(μ) against Supp(ξ(k|·)). Fractions are of the normalized ambient
/// measure; `mu_inside_xi` is the share of μ-samples lying in Supp(ξ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub relation: SupportRelation,
    pub mu_fraction: f64,
    pub xi_fraction: f64,
    /// Ambient fraction of D = Supp(ξ) ∖ Supp(μ).
    pub difference_fraction: f64,
    pub mu_inside_xi: f64,
    pub samples: usize,
    pub confidence_radius: f64,
}

impl SupportReport {
    pub fn is_deficient(&self) -> bool {
        self.relation == SupportRelation::StrictSubset
    }
}

pub fn compare_supports(
    mu: &EpistemicState,
    xi: &IndicatorFunction,
    k: usize,
    ambient: &dyn Fn(&mut Rng) -> OnticPoint,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<SupportReport> {
    if &mu.space() != xi.space() {
        return Err(Error::SpaceMismatch("support comparison across spaces".into()));
    }
    let n = n.max(1);
    let r = confidence_radius(n);
    let inside = (0..n)
        .filter(|_| xi.in_support(k, &mu.sample(rng).0, eps))
        .count();
    let (mut in_mu, mut in_xi, mut in_both, mut only_xi) = (0usize, 0usize, 0usize, 0usize);
    for _ in 0..n {
        let p = ambient(rng);
        let a = mu.in_support(&p, eps);
        let b = xi.in_support(k, &p, eps);
        in_mu += a as usize;
        in_xi += b as usize;
        in_both += (a && b) as usize;
        only_xi += (b && !a) as usize;
    }
    let frac = |c: usize| c as f64 / n as f64;
    let d = frac(only_xi);
    let relation = if inside == n {
        if d > 3.0 * r {
            SupportRelation::StrictSubset
        } else {
            SupportRelation::Equal
        }
    } else if inside == 0 && frac(in_both) <= 3.0 * r {
        SupportRelation::Disjoint
    } else {
        SupportRelation::Overlapping
    };
    Ok(SupportReport {
        relation,
        mu_fraction: frac(in_mu),
        xi_fraction: frac(in_xi),
        difference_fraction: d,
        mu_inside_xi: frac(inside),
        samples: n,
        confidence_radius: r,
    })
}

/// Supp(μ(·|ψ)) against Supp(ξ(ψ|·)) for the test `{|ψ><ψ|, 1 - |ψ><ψ|}`.
pub fn detect_deficiency(
    model: &dyn OntologicalModel,
    psi: &PureState,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<SupportReport> {
    let mu = model.epistemic_pure(psi)?;
    let xi = model.indicator_pvm(&Pvm::binary(psi))?;
    compare_supports(&mu, &xi, 0, &|r| model.sample_ambient(r), n, eps, rng)
}

/// Search Supp(μ(·|φ)) ∩ D(ψ): a state preparable as φ that passes the
/// ψ-test yet lies outside every state preparable as ψ.
pub fn check_update_rule_violation(
    model: &dyn OntologicalModel,
    psi: &PureState,
    phi: &PureState,
    n: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<Option<OnticPoint>> {
    let overlap = psi.overlap(phi);
    if !(1e-9..=1.0 - 1e-9).contains(&overlap) {
        return Err(Error::Precondition(
            "states must be neither equal nor orthogonal".into(),
        ));
    }
    let mu_psi = model.epistemic_pure(psi)?;
    let mu_phi = model.epistemic_pure(phi)?;
    let filter = model.indicator_pvm(&Pvm::binary(psi))?;
    for _ in 0..n {
        let (p, _) = mu_phi.sample(rng);
        if filter.in_support(0, &p, eps) && !mu_psi.in_support(&p, eps) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Outcome determinism of the model's ξ for one random two-outcome test,
/// probed at `n` ambient points.
pub fn classify_model_determinism(
    model: &dyn OntologicalModel,
    n: usize,
    rng: &mut Rng,
) -> Result<Determinism> {
    let phi = PureState::random(model.dim(), rng);
    let xi = model.indicator_pvm(&Pvm::binary(&phi))?;
    Ok(classify_outcome_determinism(&xi, &|r| model.sample_ambient(r), n, rng))
}
