//! Exact trapping / non-trapping classification and the gauge-existence tests.

pub mod gauge;
pub mod snf;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::TopologyError;
use crate::model::{is_integral, ManifoldSpec, PotentialSpec, Rational};

pub use gauge::{surface_gauge_options, three_manifold_gauge, CohomologyPresentation, GaugeOptions, ThreeManifoldGauge};
pub use snf::{smith_normal_form, SmithForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trapping {
    Trapping,
    NonTrapping,
}

/// Stable reason codes attached to each component verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReasonCode {
    #[serde(rename = "phi0-nonconstant")]
    Phi0NonConstant,
    #[serde(rename = "theta0-nonclosed")]
    Theta0NonClosed,
    #[serde(rename = "flux-nonintegral")]
    FluxNonIntegral,
    #[serde(rename = "integral")]
    Integral,
}

impl ReasonCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReasonCode::Phi0NonConstant => "phi0-nonconstant",
            ReasonCode::Theta0NonClosed => "theta0-nonclosed",
            ReasonCode::FluxNonIntegral => "flux-nonintegral",
            ReasonCode::Integral => "integral",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub label: String,
    pub verdict: Trapping,
    pub reason: ReasonCode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub components: Vec<ComponentVerdict>,
    /// Every component is trapping.
    pub trapping: bool,
    /// Every component is non-trapping.
    pub maximal_non_trapping: bool,
}

impl Verdict {
    fn from_components(components: Vec<ComponentVerdict>) -> Self {
        let trapping = components.iter().all(|c| c.verdict == Trapping::Trapping);
        let maximal_non_trapping = components.iter().all(|c| c.verdict == Trapping::NonTrapping);
        Self { components, trapping, maximal_non_trapping }
    }
}

/// Trapping iff `φ₀` is non-constant, `θ₀` is not closed, or the flux is not integral.
pub fn classify_potential(spec: &ManifoldSpec, potential: &PotentialSpec) -> Verdict {
    let components = spec
        .ends
        .iter()
        .zip(&potential.ends)
        .map(|(end, pot)| {
            let reason = if !pot.phi0.is_constant() {
                ReasonCode::Phi0NonConstant
            } else if !pot.closed {
                ReasonCode::Theta0NonClosed
            } else if !pot.flux.iter().all(is_integral) {
                ReasonCode::FluxNonIntegral
            } else {
                ReasonCode::Integral
            };
            let verdict = if reason == ReasonCode::Integral { Trapping::NonTrapping } else { Trapping::Trapping };
            ComponentVerdict { label: end.label.clone(), verdict, reason }
        })
        .collect();
    Verdict::from_components(components)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldComponent {
    pub label: String,
    /// `[B]_β / 2π` in the integer basis of the boundary image.
    pub class: Vec<Rational>,
}

/// A relative class of a field vanishing near the listed components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldClass {
    pub components: Vec<FieldComponent>,
    /// Whether `H¹(X) = 0` was declared; the verdict is gauge-dependent otherwise.
    pub h1_vanishes: bool,
}

impl FieldClass {
    pub fn single(label: &str, class: Rational) -> Self {
        Self { components: vec![FieldComponent { label: label.into(), class: vec![class] }], h1_vanishes: true }
    }

    pub fn from_values(values: &[Rational]) -> Self {
        Self {
            components: values
                .iter()
                .enumerate()
                .map(|(i, &q)| FieldComponent { label: format!("b{i}"), class: vec![q] })
                .collect(),
            h1_vanishes: true,
        }
    }

    pub fn vanishes_on(&self) -> Vec<&str> {
        self.components.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn scaled(&self, g: Rational) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| FieldComponent { label: c.label.clone(), class: c.class.iter().map(|q| q * g).collect() })
                .collect(),
            h1_vanishes: self.h1_vanishes,
        }
    }
}

/// Trapping iff every listed component carries a non-integral class. An empty
/// list is vacuously trapping.
pub fn classify_field(field: &FieldClass) -> Result<Trapping, TopologyError> {
    if !field.h1_vanishes {
        return Err(TopologyError::GaugeDependent);
    }
    let all_nonintegral = field.components.iter().all(|c| !c.class.iter().all(is_integral));
    Ok(if all_nonintegral { Trapping::Trapping } else { Trapping::NonTrapping })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    AllReals,
    /// `generator · ℤ` with a positive rational generator.
    Cyclic(Rational),
}

impl Subgroup {
    pub fn contains(&self, g: &Rational) -> bool {
        match self {
            Subgroup::AllReals => true,
            Subgroup::Cyclic(gen) => (g / gen).is_integer(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    pub label: String,
    pub group: Subgroup,
}

/// The set of couplings `g` for which `gB` is non-trapping. For more than one
/// component this is a union of cyclic groups, not itself a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGroup {
    pub members: Vec<ComponentGroup>,
}

impl CouplingGroup {
    pub fn contains(&self, g: &Rational) -> bool {
        self.members.iter().any(|m| m.group.contains(g))
    }

    pub fn is_cyclic(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_all_reals(&self) -> bool {
        self.members.iter().any(|m| m.group == Subgroup::AllReals)
    }
}

/// `{g : g·q ∈ ℤ^k}` for a class vector `q`.
pub fn component_group(class: &[Rational]) -> Subgroup {
    // intersection of (v_i/u_i)ℤ is lcm(v_i)/gcd(u_i) ℤ
    let nz: Vec<&Rational> = class.iter().filter(|q| !q.is_zero()).collect();
    if nz.is_empty() {
        return Subgroup::AllReals;
    }
    let num = nz.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let den = nz.iter().fold(0i64, |acc, q| acc.gcd(&q.numer().abs()));
    Subgroup::Cyclic(Rational::new(num, den))
}

pub fn coupling_group(field: &FieldClass) -> CouplingGroup {
    CouplingGroup {
        members: field
            .components
            .iter()
            .map(|c| ComponentGroup { label: c.label.clone(), group: component_group(&c.class) })
            .collect(),
    }
}
