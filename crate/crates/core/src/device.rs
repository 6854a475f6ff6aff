//! Measurement-device ontology: device ontic states γ_M, joint indicators
//! ξ(k|λ, γ_M), coarse-graining over γ_M, and the macro/micro-determinism
//! classification. The Aerts model is the worked instance.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::models::{qubit_direction, require_qubit, OntologicalModel};
use crate::ontology::{
    heaviside, integrate, EpistemicState, IndicatorFunction, Integrator, OnticPoint, OnticSpace,
    UniformInterval, INDICATOR_TOL,
};
use crate::quantum::{bloch_from_state, dot3, BlochVector, PureState, Pvm};
use crate::rng::Rng;

/// Ontic space of a preparation device. Carried for symmetry only.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationDeviceSpace(pub OnticSpace);

/// S̃_M: the device ontic states compatible with one macroscopic setting.
#[derive(Clone)]
pub struct SettingSubset {
    label: String,
    member: Arc<dyn Fn(&OnticPoint) -> bool + Send + Sync>,
}

impl fmt::Debug for SettingSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SettingSubset").field(&self.label).finish()
    }
}

impl SettingSubset {
    pub fn new(
        label: impl Into<String>,
        member: impl Fn(&OnticPoint) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            member: Arc::new(member),
        }
    }

    pub fn contains(&self, gamma: &OnticPoint) -> bool {
        (self.member)(gamma)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// μ(γ_M|S_M) together with the subset S̃_M it is supported on.
#[derive(Debug, Clone)]
pub struct DeviceEpistemicState {
    pub state: EpistemicState,
    pub setting: SettingSubset,
}

impl DeviceEpistemicState {
    pub fn space(&self) -> OnticSpace {
        self.state.space()
    }
}

type JointEval = Arc<dyn Fn(usize, &OnticPoint, &OnticPoint) -> f64 + Send + Sync>;
type JointBreaks = Arc<dyn Fn(usize, &OnticPoint, &OnticPoint) -> Vec<f64> + Send + Sync>;

/// ξ(k|λ, γ_M). Optional breakpoints locate jumps in a unit-interval
/// coordinate of γ_M, for exact integration.
#[derive(Clone)]
pub struct JointIndicator {
    system: OnticSpace,
    device: OnticSpace,
    outcomes: usize,
    eval: JointEval,
    breakpoints: Option<JointBreaks>,
}

impl fmt::Debug for JointIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointIndicator")
            .field("system", &self.system)
            .field("device", &self.device)
            .field("outcomes", &self.outcomes)
            .finish_non_exhaustive()
    }
}

impl JointIndicator {
    pub fn new(
        system: OnticSpace,
        device: OnticSpace,
        outcomes: usize,
        eval: impl Fn(usize, &OnticPoint, &OnticPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            system,
            device,
            outcomes,
            eval: Arc::new(eval),
            breakpoints: None,
        }
    }

    pub fn with_breakpoints(
        mut self,
        b: impl Fn(usize, &OnticPoint, &OnticPoint) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.breakpoints = Some(Arc::new(b));
        self
    }

    pub fn value(&self, k: usize, lambda: &OnticPoint, gamma: &OnticPoint) -> f64 {
        (self.eval)(k, lambda, gamma)
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn system_space(&self) -> &OnticSpace {
        &self.system
    }

    pub fn device_space(&self) -> &OnticSpace {
        &self.device
    }
}

fn split(p: &OnticPoint) -> Option<(&OnticPoint, &OnticPoint)> {
    Some((p.component(0)?, p.component(1)?))
}

fn check_spaces(
    mu_s: &EpistemicState,
    mu_m: &DeviceEpistemicState,
    xi: &JointIndicator,
    k: usize,
) -> Result<()> {
    if &mu_s.space() != xi.system_space() || &mu_m.space() != xi.device_space() {
        return Err(Error::SpaceMismatch(format!(
            "states over ({:?}, {:?}), joint indicator over ({:?}, {:?})",
            mu_s.space(),
            mu_m.space(),
            xi.system_space(),
            xi.device_space()
        )));
    }
    if k >= xi.outcomes() {
        return Err(Error::OutcomeOutOfRange {
            index: k,
            count: xi.outcomes(),
        });
    }
    Ok(())
}

/// ∫∫ μ(γ_M|S_M) μ(λ|S_P) ξ(k|λ, γ_M).
pub fn joint_predict(
    mu_s: &EpistemicState,
    mu_m: &DeviceEpistemicState,
    xi: &JointIndicator,
    k: usize,
    integ: &Integrator,
) -> Result<crate::ontology::Estimate> {
    check_spaces(mu_s, mu_m, xi, k)?;
    let joint = EpistemicState::Product(vec![mu_s.clone(), mu_m.state.clone()]);
    let f = |p: &OnticPoint| split(p).map_or(f64::NAN, |(l, g)| xi.value(k, l, g));
    match &xi.breakpoints {
        Some(b) => {
            let breaks = |p: &OnticPoint| split(p).map_or_else(Vec::new, |(l, g)| b(k, l, g));
            integrate(&joint, &f, Some(&breaks), integ)
        }
        None => integrate(&joint, &f, None, integ),
    }
}

/// ξ̃(k|λ) = ∫_{S̃_M} ξ(k|λ, γ_M) μ(γ_M|S_M) dγ_M, as a system indicator.
/// Integration failures evaluate to NaN.
pub fn coarse_grain(
    xi: &JointIndicator,
    mu_m: &DeviceEpistemicState,
    integ: &Integrator,
) -> IndicatorFunction {
    let xi = xi.clone();
    let mu = mu_m.clone();
    let integ = *integ;
    let space = xi.system.clone();
    IndicatorFunction::new(space, xi.outcomes, false, move |k, lambda| {
        let f = |g: &OnticPoint| {
            if mu.setting.contains(g) {
                xi.value(k, lambda, g)
            } else {
                0.0
            }
        };
        let est = match &xi.breakpoints {
            Some(b) => {
                let breaks = |g: &OnticPoint| b(k, lambda, g);
                integrate(&mu.state, &f, Some(&breaks), &integ)
            }
            None => integrate(&mu.state, &f, None, &integ),
        };
        est.map_or(f64::NAN, |e| e.value)
    })
}

#[derive(Debug, Clone)]
pub enum DeviceDeterminism {
    Macrodeterministic,
    Microdeterministic {
        lambda: OnticPoint,
        gamma: OnticPoint,
        gamma_bar: OnticPoint,
        outcome: usize,
    },
    Indeterministic {
        lambda: OnticPoint,
        gamma: OnticPoint,
        outcome: usize,
        value: f64,
    },
}

impl DeviceDeterminism {
    pub fn name(&self) -> &'static str {
        match self {
            DeviceDeterminism::Macrodeterministic => "macrodeterministic",
            DeviceDeterminism::Microdeterministic { .. } => "microdeterministic",
            DeviceDeterminism::Indeterministic { .. } => "indeterministic",
        }
    }
}

/// Draw `n` triples (λ, γ, γ̄) with γ, γ̄ from μ_M restricted to S̃_M.
/// Any fractional ξ makes the model indeterministic; otherwise two device
/// states in S̃_M disagreeing at one λ make it microdeterministic.
pub fn classify_device_determinism(
    xi: &JointIndicator,
    mu_m: &DeviceEpistemicState,
    lambda_sampler: &dyn Fn(&mut Rng) -> OnticPoint,
    n: usize,
    rng: &mut Rng,
) -> Result<DeviceDeterminism> {
    if n < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let draw_gamma = |rng: &mut Rng| -> Result<OnticPoint> {
        for _ in 0..10_000 {
            let (g, _) = mu_m.state.sample(rng);
            if mu_m.setting.contains(&g) {
                return Ok(g);
            }
        }
        Err(Error::SupportSampling(10_000))
    };
    let mut triples = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lambda_sampler(rng);
        let g = draw_gamma(rng)?;
        let gb = draw_gamma(rng)?;
        triples.push((l, g, gb));
    }
    let fractional = |v: f64| v.abs() > INDICATOR_TOL && (v - 1.0).abs() > INDICATOR_TOL;
    for (l, g, gb) in &triples {
        for k in 0..xi.outcomes() {
            for gamma in [g, gb] {
                let v = xi.value(k, l, gamma);
                if fractional(v) {
                    return Ok(DeviceDeterminism::Indeterministic {
                        lambda: l.clone(),
                        gamma: gamma.clone(),
                        outcome: k,
                        value: v,
                    });
                }
            }
        }
    }
    for (l, g, gb) in triples {
        for k in 0..xi.outcomes() {
            if (xi.value(k, &l, &g) - xi.value(k, &l, &gb)).abs() > INDICATOR_TOL {
                return Ok(DeviceDeterminism::Microdeterministic {
                    lambda: l,
                    gamma: g,
                    gamma_bar: gb,
                    outcome: k,
                });
            }
        }
    }
    Ok(DeviceDeterminism::Macrodeterministic)
}

/// Embed a system indicator in a device ontology with a one-point Γ_M.
pub fn lift_indicator(xi: &IndicatorFunction) -> (JointIndicator, DeviceEpistemicState) {
    let device = OnticSpace::DiscreteLabels(vec!["trivial".into()]);
    let inner = xi.clone();
    let joint = JointIndicator::new(xi.space().clone(), device.clone(), xi.outcomes(), move |k, l, _| {
        inner.value(k, l)
    });
    let state = DeviceEpistemicState {
        state: EpistemicState::PointMass {
            space: device,
            atom: OnticPoint::Label(0),
        },
        setting: SettingSubset::new("trivial", |g| g.label() == Some(0)),
    };
    (joint, state)
}

/// Device ontic space of the Aerts model: orientation × charge split s.
pub fn aerts_device_space() -> OnticSpace {
    OnticSpace::Product(vec![OnticSpace::UnitSphere, OnticSpace::UnitInterval])
}

/// The Aerts model's three ingredients.
#[derive(Debug, Clone, Copy, Default)]
pub struct Aerts;

pub fn aerts_model() -> Aerts {
    Aerts
}

impl Aerts {
    /// μ(λ|ψ) = δ(λ - ψ).
    pub fn epistemic(&self, psi: &BlochVector) -> EpistemicState {
        EpistemicState::PointMass {
            space: OnticSpace::UnitSphere,
            atom: OnticPoint::Sphere(psi.components()),
        }
    }

    /// μ(γ_M|a) = δ(orientation - a) × Uniform(s); S̃_M = {orientation = a}.
    pub fn device(&self, a: &BlochVector) -> DeviceEpistemicState {
        let c = a.components();
        let target = OnticPoint::Sphere(c);
        DeviceEpistemicState {
            state: EpistemicState::Product(vec![
                EpistemicState::PointMass {
                    space: OnticSpace::UnitSphere,
                    atom: OnticPoint::Sphere(c),
                },
                EpistemicState::density(UniformInterval),
            ]),
            setting: SettingSubset::new(format!("orientation {c:?}"), move |g| {
                g.component(0).is_some_and(|o| o.same_atom(&target))
            }),
        }
    }

    /// ξ(+|λ, (γ, s)) = Θ(s + ½(λ·γ - 1)); the threshold in s is
    /// sin²(θ/2) = (1 - λ·γ)/2.
    pub fn indicator(&self) -> JointIndicator {
        JointIndicator::new(OnticSpace::UnitSphere, aerts_device_space(), 2, |k, l, g| {
            let (Some(l), Some(o), Some(s)) = (
                l.sphere(),
                g.component(0).and_then(OnticPoint::sphere),
                g.component(1).and_then(OnticPoint::interval),
            ) else {
                return f64::NAN;
            };
            let up = heaviside(s + 0.5 * (dot3(l, o) - 1.0));
            if k == 0 {
                up
            } else {
                1.0 - up
            }
        })
        .with_breakpoints(|_, l, g| {
            match (l.sphere(), g.component(0).and_then(OnticPoint::sphere)) {
                (Some(l), Some(o)) => vec![0.5 * (1.0 - dot3(l, o))],
                _ => Vec::new(),
            }
        })
    }
}

/// The Aerts model seen at system level: Λ is the Bloch sphere, μ a point
/// mass, and ξ the device-averaged indicator.
#[derive(Debug, Clone, Copy, Default)]
pub struct AertsModel;

impl OntologicalModel for AertsModel {
    fn name(&self) -> &'static str {
        "aerts"
    }

    fn dim(&self) -> usize {
        2
    }

    fn space(&self) -> OnticSpace {
        OnticSpace::UnitSphere
    }

    fn epistemic_pure(&self, psi: &PureState) -> Result<EpistemicState> {
        require_qubit(psi.dim())?;
        Ok(Aerts.epistemic(&bloch_from_state(psi)?))
    }

    fn indicator_pvm(&self, pvm: &Pvm) -> Result<IndicatorFunction> {
        Ok(match qubit_direction(pvm)? {
            Some(a) => coarse_grain(&Aerts.indicator(), &Aerts.device(&a), &Integrator::exact()),
            None => IndicatorFunction::trivial(OnticSpace::UnitSphere),
        })
    }
}
