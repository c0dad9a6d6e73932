//! Geometric data model for conformally cusp ends and the boundary data of
//! magnetic vector potentials.
//!
//! Everything topological is stored as exact rationals. Lengths and Gram
//! matrices may carry a power of π so that the usual `2π` circle is exact.

use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::ModelError;

pub type Rational = Ratio<i64>;

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integral(q: &Rational) -> bool {
    q.is_integer()
}

/// A real number `coeff · π^pi_power` with exact rational coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiScalar {
    pub coeff: Rational,
    pub pi_power: u32,
}

impl PiScalar {
    pub fn rational(coeff: Rational) -> Self {
        Self { coeff, pi_power: 0 }
    }

    pub fn integer(v: i64) -> Self {
        Self::rational(Rational::from_integer(v))
    }

    pub fn new(coeff: Rational, pi_power: u32) -> Self {
        if coeff.is_zero() {
            Self::rational(coeff)
        } else {
            Self { coeff, pi_power }
        }
    }

    /// The circle of length `2π`.
    pub fn two_pi() -> Self {
        Self::new(Rational::from_integer(2), 1)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * PI.powi(self.pi_power as i32)
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.pi_power == 0).then_some(self.coeff)
    }

    pub fn mul(&self, other: &PiScalar) -> PiScalar {
        PiScalar::new(self.coeff * other.coeff, self.pi_power + other.pi_power)
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi = match self.pi_power {
            0 => return write!(f, "{}", self.coeff),
            1 => "pi".to_string(),
            k => format!("pi^{k}"),
        };
        if self.coeff.is_one() {
            write!(f, "{pi}")
        } else {
            write!(f, "{} {pi}", self.coeff)
        }
    }
}

/// Gram matrix `scale · entries` of the lattice generators of a flat torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub scale: PiScalar,
    pub entries: Vec<Vec<Rational>>,
}

impl GramMatrix {
    pub fn new(scale: PiScalar, entries: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        let g = Self { scale, entries };
        g.validate()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn validate(&self) -> Result<(), ModelError> {
        let d = self.dim();
        if d == 0 || self.entries.iter().any(|row| row.len() != d) {
            return Err(ModelError::Invalid("gram matrix must be square and non-empty".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if self.entries[i][j] != self.entries[j][i] {
                    return Err(ModelError::Invalid("gram matrix is not symmetric".into()));
                }
            }
        }
        if !self.scale.is_positive() {
            return Err(ModelError::Invalid("gram scale must be positive".into()));
        }
        for k in 1..=d {
            if !leading_minor(&self.entries, k).is_positive() {
                return Err(ModelError::NotPositiveDefinite { minor: k });
            }
        }
        Ok(())
    }

    /// Exact inverse of the rational part; the full inverse is this divided by `scale`.
    pub fn inverse_entries(&self) -> Vec<Vec<Rational>> {
        invert_rational(&self.entries).expect("validated gram matrix is invertible")
    }

    pub fn det_entries(&self) -> Rational {
        leading_minor(&self.entries, self.dim())
    }

    /// Riemannian volume of the torus, `sqrt(det(scale·entries))`.
    pub fn volume(&self) -> f64 {
        let d = self.dim() as i32;
        (rational_to_f64(&self.det_entries()) * self.scale.to_f64().powi(d)).sqrt()
    }
}

/// Determinant of the leading `k × k` block, by fraction-exact elimination.
pub fn leading_minor(m: &[Vec<Rational>], k: usize) -> Rational {
    let mut a: Vec<Vec<Rational>> = m.iter().take(k).map(|r| r[..k].to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..k {
            let f = a[r][col] / p;
            if f.is_zero() {
                continue;
            }
            for c in col..k {
                let t = a[col][c];
                a[r][c] -= f * t;
            }
        }
    }
    det
}

pub fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let d = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col];
        for c in 0..2 * d {
            a[col][c] /= p;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * d {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Circle { length: PiScalar },
    FlatTorus { gram: GramMatrix },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub label: String,
    pub kind: BoundaryKind,
}

impl BoundaryComponent {
    pub fn circle(label: impl Into<String>, length: PiScalar) -> Self {
        Self { label: label.into(), kind: BoundaryKind::Circle { length } }
    }

    pub fn torus(label: impl Into<String>, gram: GramMatrix) -> Self {
        Self { label: label.into(), kind: BoundaryKind::FlatTorus { gram } }
    }

    /// Dimension of the cross-section, which is also its first Betti number.
    pub fn dim(&self) -> usize {
        match &self.kind {
            BoundaryKind::Circle { .. } => 1,
            BoundaryKind::FlatTorus { gram } => gram.dim(),
        }
    }

    pub fn betti1(&self) -> usize {
        self.dim()
    }

    /// The circle is treated as the one-dimensional torus with Gram `length²`.
    pub fn gram(&self) -> GramMatrix {
        match &self.kind {
            BoundaryKind::Circle { length } => GramMatrix {
                scale: length.mul(length),
                entries: vec![vec![Rational::one()]],
            },
            BoundaryKind::FlatTorus { gram } => gram.clone(),
        }
    }

    pub fn volume(&self) -> f64 {
        match &self.kind {
            BoundaryKind::Circle { length } => length.to_f64(),
            BoundaryKind::FlatTorus { gram } => gram.volume(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub n: usize,
    pub p: Rational,
    pub x0: Rational,
    pub core_volume: PiScalar,
    /// Replaces the derived inverse-square coefficient of the radial model for `p < 1`.
    pub c0_override: Option<Rational>,
    pub ends: Vec<BoundaryComponent>,
}

impl ManifoldSpec {
    pub fn new(n: usize, p: Rational, x0: Rational, ends: Vec<BoundaryComponent>) -> Result<Self, ModelError> {
        let spec = Self { n, p, x0, core_volume: PiScalar::integer(0), c0_override: None, ends };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::Invalid(format!("dimension n = {} must be at least 2", self.n)));
        }
        if !self.p.is_positive() {
            return Err(ModelError::Invalid("exponent p must be positive".into()));
        }
        if !self.x0.is_positive() {
            return Err(ModelError::Invalid("truncation x0 must be positive".into()));
        }
        if self.core_volume.coeff.is_negative() {
            return Err(ModelError::Invalid("core_volume must be non-negative".into()));
        }
        if self.ends.is_empty() {
            return Err(ModelError::Invalid("at least one end is required".into()));
        }
        for end in &self.ends {
            if end.dim() != self.n - 1 {
                return Err(ModelError::DimensionMismatch {
                    label: end.label.clone(),
                    expected: self.n - 1,
                    found: end.dim(),
                });
            }
            if let BoundaryKind::Circle { length } = &end.kind {
                if !length.is_positive() {
                    return Err(ModelError::Invalid(format!("end {}: circle length must be positive", end.label)));
                }
            }
        }
        Ok(())
    }

    pub fn p_f64(&self) -> f64 {
        rational_to_f64(&self.p)
    }

    pub fn x0_f64(&self) -> f64 {
        rational_to_f64(&self.x0)
    }

    /// `p > 1`: the end is a metric horn and the metric is incomplete.
    pub fn is_incomplete(&self) -> bool {
        self.p > Rational::one()
    }

    pub fn component(&self, label: &str) -> Option<usize> {
        self.ends.iter().position(|e| e.label == label)
    }

    /// Left endpoint of the radial half-line, `L(x0)`.
    pub fn r0(&self) -> f64 {
        radial_coordinate(self, self.x0_f64())
    }

    pub fn boundary_volume(&self) -> f64 {
        self.ends.iter().map(BoundaryComponent::volume).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Volume {
    Finite(f64),
    Infinite,
}

impl Volume {
    pub fn finite(self) -> Option<f64> {
        match self {
            Volume::Finite(v) => Some(v),
            Volume::Infinite => None,
        }
    }
}

/// Volume of `(0, x0] × M_α` for the metric `x^{2p}(dx²/x⁴ + h₀)`, whose density is
/// `x^{np-2} dx · vol_{h₀}`.
pub fn end_volume(spec: &ManifoldSpec, component: usize) -> Volume {
    let exponent = Rational::from_integer(spec.n as i64) * spec.p - Rational::one();
    if !exponent.is_positive() {
        return Volume::Infinite;
    }
    let e = rational_to_f64(&exponent);
    Volume::Finite(spec.ends[component].volume() * spec.x0_f64().powf(e) / e)
}

/// Total volume of the ends plus the user-supplied core volume.
pub fn total_volume(spec: &ManifoldSpec) -> Volume {
    let mut sum = spec.core_volume.to_f64();
    for i in 0..spec.ends.len() {
        match end_volume(spec, i) {
            Volume::Finite(v) => sum += v,
            Volume::Infinite => return Volume::Infinite,
        }
    }
    Volume::Finite(sum)
}

/// Geodesic distance coordinate `L(x)`: `-ln x` for `p = 1`, `x^{p-1}/(1-p)` otherwise.
pub fn radial_coordinate(spec: &ManifoldSpec, x: f64) -> f64 {
    radial_coordinate_p(spec.p, x)
}

pub fn radial_coordinate_p(p: Rational, x: f64) -> f64 {
    if p.is_one() {
        -x.ln()
    } else {
        let pf = rational_to_f64(&p);
        x.powf(pf - 1.0) / (1.0 - pf)
    }
}

/// Inverse of [`radial_coordinate`], closed form.
pub fn boundary_coordinate(spec: &ManifoldSpec, r: f64) -> f64 {
    if spec.p.is_one() {
        (-r).exp()
    } else {
        let pf = spec.p_f64();
        ((1.0 - pf) * r).powf(1.0 / (pf - 1.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phi0 {
    Constant(Rational),
    /// Exact samples of `φ₀` on the cross-section; constancy is decided on them.
    Sampled(Vec<Rational>),
}

impl Phi0 {
    pub fn is_constant(&self) -> bool {
        match self {
            Phi0::Constant(_) => true,
            Phi0::Sampled(s) => s.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndPotential {
    pub phi0: Phi0,
    /// Holonomy class `[θ₀]/2π` in the integer basis of `H¹(M_α; ℤ)`.
    pub flux: Vec<Rational>,
    pub closed: bool,
}

impl EndPotential {
    pub fn closed_flux(flux: Vec<Rational>) -> Self {
        Self { phi0: Phi0::Constant(Rational::zero()), flux, closed: true }
    }

    pub fn is_normalized(&self) -> bool {
        self.closed && self.phi0.is_constant()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSpec {
    pub ends: Vec<EndPotential>,
}

impl PotentialSpec {
    pub fn validate(&self, spec: &ManifoldSpec) -> Result<(), ModelError> {
        if self.ends.len() != spec.ends.len() {
            return Err(ModelError::Invalid(format!(
                "potential has {} ends, manifold has {}",
                self.ends.len(),
                spec.ends.len()
            )));
        }
        for (pot, end) in self.ends.iter().zip(&spec.ends) {
            if pot.flux.len() != end.betti1() {
                return Err(ModelError::FluxLength {
                    label: end.label.clone(),
                    expected: end.betti1(),
                    found: pot.flux.len(),
                });
            }
        }
        Ok(())
    }

    /// Same potential with every flux multiplied by `g`.
    pub fn scaled(&self, g: Rational) -> Self {
        Self {
            ends: self
                .ends
                .iter()
                .map(|e| EndPotential { flux: e.flux.iter().map(|a| a * g).collect(), ..e.clone() })
                .collect(),
        }
    }
}

/// Least common multiple of denominators, as used for cyclic generators.
pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> i64 {
    qs.into_iter().fold(1i64, |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn surface(p: Rational, x0: Rational) -> ManifoldSpec {
        ManifoldSpec::new(2, p, x0, vec![BoundaryComponent::circle("a", PiScalar::two_pi())]).unwrap()
    }

    #[test]
    fn gram_rejects_indefinite() {
        let err = GramMatrix::new(PiScalar::integer(1), vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(1, 1)]]);
        assert!(matches!(err, Err(ModelError::NotPositiveDefinite { minor: 2 })));
    }

    #[test]
    fn circle_only_on_surfaces() {
        let err = ManifoldSpec::new(3, r(1, 1), r(1, 10), vec![BoundaryComponent::circle("a", PiScalar::two_pi())]);
        assert!(matches!(err, Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn end_volume_cusp_surface() {
        let spec = surface(r(1, 1), r(1, 10));
        // ∫₀^{1/10} dx · 2π, midpoint quadrature
        let m = 10_000;
        let quad: f64 = (0..m).map(|_| 0.1 / m as f64).sum::<f64>() * 2.0 * PI;
        let v = end_volume(&spec, 0).finite().unwrap();
        assert!((v - quad).abs() < 1e-12);
        assert!((v - 2.0 * PI / 10.0).abs() < 1e-14);
    }

    #[test]
    fn end_volume_diverges_for_small_p() {
        assert_eq!(end_volume(&surface(r(1, 2), r(1, 10)), 0), Volume::Infinite);
    }

    #[test]
    fn end_volume_torus() {
        let gram = GramMatrix::new(PiScalar::new(r(4, 1), 2), vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]]).unwrap();
        let spec = ManifoldSpec::new(3, r(1, 1), r(1, 10), vec![BoundaryComponent::torus("t", gram)]).unwrap();
        // ∫₀^{1/10} x dx · 4π², midpoint rule is exact for linear integrands
        let m = 1000;
        let h = 0.1 / m as f64;
        let quad: f64 = (0..m).map(|i| (i as f64 + 0.5) * h * h).sum::<f64>() * 4.0 * PI * PI;
        let v = end_volume(&spec, 0).finite().unwrap();
        assert!((v - quad).abs() < 1e-12);
        assert!((v - 4.0 * PI * PI / 200.0).abs() < 1e-12);
    }

    #[test]
    fn radial_coordinate_values() {
        let cusp = surface(r(1, 1), r(1, 1));
        assert!((radial_coordinate(&cusp, (-3.0f64).exp()) - 3.0).abs() < 1e-14);
        assert_eq!(radial_coordinate(&cusp, 1.0), 0.0);
        let half = surface(r(1, 2), r(1, 1));
        let val = radial_coordinate(&half, 0.25);
        assert!((val - 4.0).abs() < 1e-14);
        // bisection inverse of the closed form
        let (mut lo, mut hi) = (1e-6, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if radial_coordinate(&half, mid) > 4.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((lo - 0.25).abs() < 1e-12);
    }

    #[test]
    fn boundary_coordinate_inverts() {
        for p in [r(1, 1), r(1, 2), r(1, 3), r(3, 4)] {
            let spec = surface(p, r(1, 1));
            for &x in &[1e-4, 0.01, 0.3, 0.9] {
                let back = boundary_coordinate(&spec, radial_coordinate(&spec, x));
                assert!((back - x).abs() < 1e-12 * x.max(1e-3), "p={p} x={x} back={back}");
            }
        }
    }

    #[test]
    fn pi_scalar_display() {
        assert_eq!(PiScalar::two_pi().to_string(), "2 pi");
        assert_eq!(PiScalar::new(r(1, 1), 2).to_string(), "pi^2");
        assert_eq!(PiScalar::rational(r(-3, 2)).to_string(), "-3/2");
    }
}
