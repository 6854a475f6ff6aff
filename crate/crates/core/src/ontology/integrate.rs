//! Integration of indicator functions against epistemic states.
//!
//! Atoms and finite mixtures of atoms are always summed exactly. Densities
//! are integrated by Monte Carlo, importance-weighted by the state's own
//! sampler. Monte Carlo runs are split into fixed-size chunks whose seeds are
//! derived from the integrator seed and the chunk index, and chunk sums are
//! reduced in index order, so estimates are bit-identical for a given seed
//! regardless of how many worker threads execute the chunks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

use super::epistemic::EpistemicState;
use super::indicator::{IndicatorFunction, INDICATOR_TOL};
use super::space::{OnticPoint, OnticSpace};

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Atoms exact, everything continuous sampled.
    MonteCarlo { samples: usize, seed: u64 },
    /// Like Monte Carlo, but uniform-interval factors are integrated exactly
    /// when the integrand reports its breakpoints.
    ProductRule { samples: usize, seed: u64 },
    /// Exact evaluation only; fails on structures that would need sampling.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integrator {
    pub method: Method,
    /// Target standard error (informational).
    pub tolerance: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::product_rule(DEFAULT_SAMPLES, 0)
    }
}

impl Integrator {
    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self {
            method: Method::MonteCarlo {
                samples: samples.max(1),
                seed,
            },
            tolerance: 0.5 / (samples.max(1) as f64).sqrt(),
        }
    }

    pub fn product_rule(samples: usize, seed: u64) -> Self {
        Self {
            method: Method::ProductRule {
                samples: samples.max(1),
                seed,
            },
            tolerance: 0.5 / (samples.max(1) as f64).sqrt(),
        }
    }

    pub fn exact() -> Self {
        Self {
            method: Method::Exact,
            tolerance: 0.0,
        }
    }

    /// Same method with a different seed stream.
    pub fn reseeded(&self, stream: u64) -> Self {
        let method = match self.method {
            Method::MonteCarlo { samples, seed } => Method::MonteCarlo {
                samples,
                seed: rng::derive(seed, stream),
            },
            Method::ProductRule { samples, seed } => Method::ProductRule {
                samples,
                seed: rng::derive(seed, stream),
            },
            Method::Exact => Method::Exact,
        };
        Self { method, ..*self }
    }

    fn sampling(&self) -> Option<(usize, u64)> {
        match self.method {
            Method::MonteCarlo { samples, seed } | Method::ProductRule { samples, seed } => {
                Some((samples, seed))
            }
            Method::Exact => None,
        }
    }

    fn exact_intervals(&self) -> bool {
        !matches!(self.method, Method::MonteCarlo { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            standard_error: 0.0,
        }
    }
}

pub type Integrand<'a> = &'a (dyn Fn(&OnticPoint) -> f64 + Sync);
pub type IntervalBreaks<'a> = &'a (dyn Fn(&OnticPoint) -> Vec<f64> + Sync);

/// Expand a state into weighted atoms. With `allow_interval`, a single
/// uniform-interval factor is kept as a placeholder coordinate.
fn expand(mu: &EpistemicState, allow_interval: bool) -> Option<Vec<(f64, OnticPoint)>> {
    let expanded = match mu {
        EpistemicState::PointMass { atom, .. } => vec![(1.0, atom.clone())],
        EpistemicState::Density(d) => {
            if allow_interval && d.is_uniform_interval() {
                vec![(1.0, OnticPoint::placeholder())]
            } else {
                return None;
            }
        }
        EpistemicState::Mixture { terms, .. } => {
            let mut out = Vec::new();
            for (w, s) in terms {
                out.extend(expand(s, allow_interval)?.into_iter().map(|(v, p)| (w * v, p)));
            }
            out
        }
        EpistemicState::Product(fs) => {
            let mut out = vec![(1.0, Vec::<OnticPoint>::new())];
            for f in fs {
                let atoms = expand(f, allow_interval)?;
                let mut next = Vec::with_capacity(out.len() * atoms.len());
                for (w, pts) in &out {
                    for (v, p) in &atoms {
                        let mut pts = pts.clone();
                        pts.push(p.clone());
                        next.push((w * v, pts));
                    }
                }
                out = next;
            }
            out.into_iter().map(|(w, p)| (w, OnticPoint::Tuple(p))).collect()
        }
    };
    // At most one placeholder coordinate per atom.
    let ok = expanded.iter().all(|(_, p)| count_placeholders(p) <= 1);
    ok.then_some(expanded)
}

fn count_placeholders(p: &OnticPoint) -> usize {
    match p {
        OnticPoint::Interval(x) if x.is_nan() => 1,
        OnticPoint::Tuple(c) => c.iter().map(count_placeholders).sum(),
        _ => 0,
    }
}

fn integrate_step(f: Integrand, template: &OnticPoint, breaks: IntervalBreaks) -> f64 {
    let mut cuts: Vec<f64> = breaks(template)
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| x.clamp(0.0, 1.0))
        .collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[1] - w[0]) * f(&template.fill_placeholder(0.5 * (w[0] + w[1]))))
        .sum()
}

/// ∫ f(λ) μ(λ) dλ.
pub fn integrate(
    mu: &EpistemicState,
    f: Integrand,
    breaks: Option<IntervalBreaks>,
    integ: &Integrator,
) -> Result<Estimate> {
    let allow_interval = breaks.is_some() && integ.exact_intervals();
    if let Some(atoms) = expand(mu, allow_interval) {
        let mut total = 0.0;
        for (w, p) in &atoms {
            let v = match breaks {
                Some(b) if p.has_placeholder() => integrate_step(f, p, b),
                _ => f(p),
            };
            if !v.is_finite() {
                return Err(Error::Integration(format!("non-finite integrand at {p:?}")));
            }
            total += w * v;
        }
        return Ok(Estimate::exact(total));
    }

    if let EpistemicState::Mixture { terms, .. } = mu {
        let mut value = 0.0;
        let mut var = 0.0;
        for (i, (w, s)) in terms.iter().enumerate() {
            let e = integrate(s, f, breaks, &integ.reseeded(i as u64))?;
            value += w * e.value;
            var += (w * e.standard_error).powi(2);
        }
        return Ok(Estimate {
            value,
            standard_error: var.sqrt(),
        });
    }

    let (samples, seed) = integ.sampling().ok_or_else(|| {
        Error::Integration("exact integration requested for a continuous distribution".into())
    })?;
    monte_carlo(mu, f, samples, seed)
}

fn monte_carlo(mu: &EpistemicState, f: Integrand, samples: usize, seed: u64) -> Result<Estimate> {
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64, bool)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(samples - c * CHUNK);
            let mut rng: Rng = rng::seeded(rng::derive(seed, c as u64));
            let (mut s, mut s2, mut finite) = (0.0, 0.0, true);
            for _ in 0..n {
                let (p, w) = mu.sample(&mut rng);
                let v = f(&p) * w;
                finite &= v.is_finite();
                s += v;
                s2 += v * v;
            }
            (s, s2, finite)
        })
        .collect();
    let (mut s, mut s2) = (0.0, 0.0);
    for (a, b, finite) in partial {
        if !finite {
            return Err(Error::Integration("non-finite integrand".into()));
        }
        s += a;
        s2 += b;
    }
    let n = samples as f64;
    let mean = s / n;
    let var = if samples > 1 {
        ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate {
        value: mean,
        standard_error: (var / n).sqrt(),
    })
}

/// Statistical prediction ∫ ξ(k|λ) μ(λ) dλ.
pub fn predict(
    mu: &EpistemicState,
    xi: &IndicatorFunction,
    k: usize,
    integ: &Integrator,
) -> Result<Estimate> {
    if &mu.space() != xi.space() {
        return Err(Error::SpaceMismatch(format!(
            "epistemic state over {:?}, indicator over {:?}",
            mu.space(),
            xi.space()
        )));
    }
    if k >= xi.outcomes() {
        return Err(Error::OutcomeOutOfRange {
            index: k,
            count: xi.outcomes(),
        });
    }
    let f = |p: &OnticPoint| xi.value(k, p);
    match xi.breakpoints() {
        Some(b) => {
            let breaks = |p: &OnticPoint| b(k, p);
            integrate(mu, &f, Some(&breaks), integ)
        }
        None => integrate(mu, &f, None, integ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationCheck {
    pub pass: bool,
    pub value: f64,
    pub standard_error: f64,
}

/// ∫ μ dλ against the reference measure; passes when within
/// `max(3·SE, 1e-3)` of 1.
pub fn verify_normalization(mu: &EpistemicState, integ: &Integrator) -> Result<NormalizationCheck> {
    let e = total_mass(mu, integ)?;
    let tol = (3.0 * e.standard_error).max(1e-3);
    Ok(NormalizationCheck {
        pass: (e.value - 1.0).abs() <= tol,
        value: e.value,
        standard_error: e.standard_error,
    })
}

fn total_mass(mu: &EpistemicState, integ: &Integrator) -> Result<Estimate> {
    match mu {
        EpistemicState::PointMass { .. } => Ok(Estimate::exact(1.0)),
        EpistemicState::Mixture { terms, .. } => {
            let mut value = 0.0;
            let mut var = 0.0;
            for (i, (w, s)) in terms.iter().enumerate() {
                let e = total_mass(s, &integ.reseeded(i as u64))?;
                value += w * e.value;
                var += (w * e.standard_error).powi(2);
            }
            Ok(Estimate {
                value,
                standard_error: var.sqrt(),
            })
        }
        EpistemicState::Product(fs) => {
            let mut value = 1.0;
            let mut rel_var = 0.0;
            for (i, f) in fs.iter().enumerate() {
                let e = total_mass(f, &integ.reseeded(i as u64))?;
                value *= e.value;
                if e.value != 0.0 {
                    rel_var += (e.standard_error / e.value).powi(2);
                }
            }
            Ok(Estimate {
                value,
                standard_error: value.abs() * rel_var.sqrt(),
            })
        }
        EpistemicState::Density(d) => {
            let space = d.space();
            if d.is_uniform_interval() {
                return Ok(Estimate::exact(1.0));
            }
            let (samples, seed) = integ.sampling().ok_or_else(|| {
                Error::Integration("exact normalization requested for a density".into())
            })?;
            let measure = space.measure();
            let uniform = UniformOver(space);
            let f = |p: &OnticPoint| measure * d.value(p);
            let probe = EpistemicState::density(uniform);
            monte_carlo(&probe, &f, samples, seed)
        }
    }
}

/// The normalized reference measure of a space, as a density.
#[derive(Debug, Clone)]
pub struct UniformOver(pub OnticSpace);

impl super::epistemic::Density for UniformOver {
    fn space(&self) -> OnticSpace {
        self.0.clone()
    }

    fn value(&self, p: &OnticPoint) -> f64 {
        if self.0.contains(p) {
            1.0 / self.0.measure()
        } else {
            0.0
        }
    }

    fn sample(&self, rng: &mut Rng) -> OnticPoint {
        self.0.sample_uniform(rng)
    }

    fn is_uniform_interval(&self) -> bool {
        self.0 == OnticSpace::UnitInterval
    }
}

#[derive(Debug, Clone)]
pub enum Determinism {
    Deterministic,
    Indeterministic {
        witness: OnticPoint,
        outcome: usize,
        value: f64,
    },
}

impl Determinism {
    pub fn is_deterministic(&self) -> bool {
        matches!(self, Determinism::Deterministic)
    }
}

/// Deterministic iff every sampled ξ(k|λ) is within 1e-10 of 0 or 1.
pub fn classify_outcome_determinism(
    xi: &IndicatorFunction,
    sampler: &dyn Fn(&mut Rng) -> OnticPoint,
    n: usize,
    rng: &mut Rng,
) -> Determinism {
    for _ in 0..n.max(1) {
        let p = sampler(rng);
        for k in 0..xi.outcomes() {
            let v = xi.value(k, &p);
            if v.abs() > INDICATOR_TOL && (v - 1.0).abs() > INDICATOR_TOL {
                return Determinism::Indeterministic {
                    witness: p,
                    outcome: k,
                    value: v,
                };
            }
        }
    }
    Determinism::Deterministic
}

#[cfg(test)]
mod tests {
    use super::super::epistemic::{ScaledDensity, UniformInterval};
    use super::*;
    use std::sync::Arc;

    fn step_indicator(cut: f64) -> IndicatorFunction {
        IndicatorFunction::new(OnticSpace::UnitInterval, 2, true, move |k, p| {
            let below = (p.interval().unwrap() < cut) as u8 as f64;
            if k == 0 {
                below
            } else {
                1.0 - below
            }
        })
    }

    #[test]
    fn trivial_measurement_predicts_one() {
        let mu = EpistemicState::density(UniformOver(OnticSpace::UnitSphere));
        let xi = IndicatorFunction::trivial(OnticSpace::UnitSphere);
        let e = predict(&mu, &xi, 0, &Integrator::monte_carlo(1000, 1)).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn step_integrated_exactly_with_breakpoints() {
        let mu = EpistemicState::density(UniformInterval);
        let xi = step_indicator(0.3).with_breakpoints(|_, _| vec![0.3]);
        let e = predict(&mu, &xi, 0, &Integrator::product_rule(10, 0)).unwrap();
        assert!((e.value - 0.3).abs() < 1e-15);
        assert_eq!(e.standard_error, 0.0);
        // Monte Carlo ignores the hint.
        let mc = predict(&mu, &xi, 0, &Integrator::monte_carlo(100_000, 3)).unwrap();
        assert!(mc.standard_error > 0.0);
        assert!((mc.value - 0.3).abs() < 4.0 * mc.standard_error);
    }

    #[test]
    fn exact_integrator_rejects_densities() {
        let mu = EpistemicState::density(UniformOver(OnticSpace::UnitSphere));
        let xi = IndicatorFunction::trivial(OnticSpace::UnitSphere);
        let f = |p: &OnticPoint| xi.value(0, p);
        assert!(integrate(&mu, &f, None, &Integrator::exact()).is_err());
    }

    #[test]
    fn predict_checks_space_and_outcome() {
        let mu = EpistemicState::density(UniformInterval);
        let xi = IndicatorFunction::trivial(OnticSpace::UnitSphere);
        assert!(matches!(
            predict(&mu, &xi, 0, &Integrator::default()),
            Err(Error::SpaceMismatch(_))
        ));
        let xi = step_indicator(0.5);
        assert!(matches!(
            predict(&mu, &xi, 2, &Integrator::default()),
            Err(Error::OutcomeOutOfRange { .. })
        ));
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let mu = EpistemicState::density(UniformInterval);
        let xi = IndicatorFunction::new(OnticSpace::UnitInterval, 1, false, |_, _| f64::NAN);
        assert!(matches!(
            predict(&mu, &xi, 0, &Integrator::monte_carlo(100, 0)),
            Err(Error::Integration(_))
        ));
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let mu = EpistemicState::density(UniformOver(OnticSpace::UnitSphere));
        let xi = IndicatorFunction::new(OnticSpace::UnitSphere, 1, true, |_, p| {
            (p.sphere().unwrap()[2] > 0.2) as u8 as f64
        });
        let a = predict(&mu, &xi, 0, &Integrator::monte_carlo(100_003, 42)).unwrap();
        let b = predict(&mu, &xi, 0, &Integrator::monte_carlo(100_003, 42)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        let c = predict(&mu, &xi, 0, &Integrator::monte_carlo(100_003, 43)).unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
        // Uniform sphere: P(z > 0.2) = 0.4.
        assert!((a.value - 0.4).abs() < 4.0 * a.standard_error);
    }

    #[test]
    fn parallel_result_matches_single_thread() {
        let mu = EpistemicState::density(UniformOver(OnticSpace::UnitSphere));
        let f = |p: &OnticPoint| p.sphere().unwrap()[0].abs();
        let multi = integrate(&mu, &f, None, &Integrator::monte_carlo(200_000, 5)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool
            .install(|| integrate(&mu, &f, None, &Integrator::monte_carlo(200_000, 5)))
            .unwrap();
        assert_eq!(multi.value.to_bits(), single.value.to_bits());
    }

    #[test]
    fn normalization_detects_scaled_density() {
        let good = EpistemicState::density(UniformOver(OnticSpace::UnitSphere));
        let check = verify_normalization(&good, &Integrator::monte_carlo(10_000, 1)).unwrap();
        assert!(check.pass);
        let bad = EpistemicState::density(ScaledDensity {
            inner: Arc::new(UniformOver(OnticSpace::UnitSphere)),
            factor: 2.0,
        });
        let check = verify_normalization(&bad, &Integrator::monte_carlo(10_000, 1)).unwrap();
        assert!(!check.pass);
        assert!((check.value - 2.0).abs() < 1e-9);
        let atom = EpistemicState::point_mass(OnticSpace::UnitInterval, OnticPoint::Interval(0.1)).unwrap();
        assert_eq!(verify_normalization(&atom, &Integrator::exact()).unwrap().value, 1.0);
    }

    #[test]
    fn determinism_classification() {
        let mut rng = crate::rng::seeded(0);
        let sampler = |r: &mut Rng| OnticSpace::UnitInterval.sample_uniform(r);
        assert!(
            classify_outcome_determinism(&step_indicator(0.5), &sampler, 1000, &mut rng).is_deterministic()
        );
        let soft = IndicatorFunction::new(OnticSpace::UnitInterval, 2, false, |k, p| {
            let x = p.interval().unwrap();
            if k == 0 {
                x
            } else {
                1.0 - x
            }
        });
        assert!(matches!(
            classify_outcome_determinism(&soft, &sampler, 1000, &mut rng),
            Determinism::Indeterministic { .. }
        ));
    }
}
