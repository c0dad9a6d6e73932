//! Spectrum of the boundary magnetic Laplacian on circle and flat-torus ends.

use std::f64::consts::PI;

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{ModelError, SpectralError};
use crate::model::{rational_to_f64, BoundaryComponent, GramMatrix, ManifoldSpec, PotentialSpec, Rational};

type Wide = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeEntry {
    pub mu: f64,
    pub multiplicity: usize,
    /// Dual-lattice indices `k` sharing this eigenvalue, lexicographic.
    pub lattice_indices: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub label: String,
    #[serde(skip)]
    pub flux: Vec<Rational>,
    pub mu_max: f64,
    pub entries: Vec<ModeEntry>,
}

impl ModeSpectrum {
    /// `(μ, multiplicity)` pairs.
    pub fn pairs(&self) -> Vec<(f64, usize)> {
        self.entries.iter().map(|e| (e.mu, e.multiplicity)).collect()
    }

    pub fn count_below_or_equal(&self, mu: f64) -> usize {
        self.entries.iter().take_while(|e| e.mu <= mu).map(|e| e.multiplicity).sum()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// `μ = factor · q(k)` with `q(k) = (k+a)ᵀ E⁻¹ (k+a)` exact and `factor = 4π² / scale`.
struct Quadratic {
    inv: Vec<Vec<Wide>>,
    inv_f: Vec<Vec<f64>>,
    shift: Vec<Wide>,
    shift_f: Vec<f64>,
    factor: f64,
    gram_diag: Vec<f64>,
}

impl Quadratic {
    fn new(gram: &GramMatrix, a: &[Rational]) -> Self {
        let inv = gram.inverse_entries();
        let scale = gram.scale.to_f64();
        Self {
            inv_f: inv.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect(),
            inv: inv.iter().map(|r| r.iter().map(widen).collect()).collect(),
            shift: a.iter().map(widen).collect(),
            shift_f: a.iter().map(rational_to_f64).collect(),
            factor: 4.0 * PI * PI / scale,
            gram_diag: (0..gram.dim()).map(|i| rational_to_f64(&gram.entries[i][i]) * scale).collect(),
        }
    }

    fn dim(&self) -> usize {
        self.shift.len()
    }

    fn exact(&self, k: &[i64]) -> Wide {
        let v: Vec<Wide> = k.iter().zip(&self.shift).map(|(&ki, ai)| Wide::from_integer(ki as i128) + ai).collect();
        let mut s = Wide::zero();
        for i in 0..v.len() {
            for j in 0..v.len() {
                s += v[i] * self.inv[i][j] * v[j];
            }
        }
        s
    }

    fn mu(&self, k: &[i64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            let vi = k[i] as f64 + self.shift_f[i];
            for j in 0..d {
                s += vi * self.inv_f[i][j] * (k[j] as f64 + self.shift_f[j]);
            }
        }
        self.factor * s
    }

    /// Integer box containing every `k` with `μ(k) ≤ mu_max`.
    fn bounding_box(&self, mu_max: f64) -> Vec<(i64, i64)> {
        (0..self.dim())
            .map(|i| {
                let half = (mu_max * self.gram_diag[i] / (4.0 * PI * PI)).sqrt() * (1.0 + 1e-12) + 1e-12;
                let a = self.shift_f[i];
                ((-half - a).ceil() as i64, (half - a).floor() as i64)
            })
            .collect()
    }

    /// Visits every lattice point in the box, in lexicographic order.
    fn for_each(&self, mu_max: f64, mut f: impl FnMut(&[i64], f64)) {
        let bounds = self.bounding_box(mu_max);
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return;
        }
        let mut k: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        let limit = mu_max * (1.0 + 1e-12);
        loop {
            let mu = self.mu(&k);
            if mu <= limit {
                f(&k, mu);
            }
            let mut i = k.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if k[i] < bounds[i].1 {
                    k[i] += 1;
                    break;
                }
                k[i] = bounds[i].0;
            }
        }
    }
}

fn widen(q: &Rational) -> Wide {
    Wide::new(*q.numer() as i128, *q.denom() as i128)
}

fn check_flux(component: &BoundaryComponent, a: &[Rational]) -> Result<(), SpectralError> {
    if a.len() != component.betti1() {
        return Err(ModelError::FluxLength { label: component.label.clone(), expected: component.betti1(), found: a.len() }
            .into());
    }
    Ok(())
}

/// Every transverse eigenvalue `μ ≤ mu_max`, with multiplicities grouped exactly.
pub fn mode_spectrum(component: &BoundaryComponent, a: &[Rational], mu_max: f64) -> Result<ModeSpectrum, SpectralError> {
    check_flux(component, a)?;
    if !(mu_max >= 0.0) {
        return Err(SpectralError::Precondition("mu_max must be non-negative".into()));
    }
    let quad = Quadratic::new(&component.gram(), a);
    let mut points: Vec<(Wide, Vec<i64>)> = Vec::new();
    quad.for_each(mu_max, |k, _| points.push((quad.exact(k), k.to_vec())));
    points.sort();
    let mut entries: Vec<ModeEntry> = Vec::new();
    let mut last: Option<Wide> = None;
    for (q, k) in points {
        if last == Some(q) {
            let e = entries.last_mut().expect("group exists");
            e.multiplicity += 1;
            e.lattice_indices.push(k);
        } else {
            let mu = quad.factor * (*q.numer() as f64 / *q.denom() as f64);
            entries.push(ModeEntry { mu, multiplicity: 1, lattice_indices: vec![k] });
            last = Some(q);
        }
    }
    Ok(ModeSpectrum { label: component.label.clone(), flux: a.to_vec(), mu_max, entries })
}

/// Mode spectrum of one end of a normalized potential; refuses non-normalized data.
pub fn end_modes(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    component: usize,
    mu_max: f64,
) -> Result<ModeSpectrum, SpectralError> {
    let end = &spec.ends[component];
    let pot = &potential.ends[component];
    if !pot.is_normalized() {
        return Err(SpectralError::NotNormalized { label: end.label.clone() });
    }
    mode_spectrum(end, &pot.flux, mu_max)
}

/// Number of components carrying a zero transverse mode.
pub fn kernel_dimension(spec: &ManifoldSpec, potential: &PotentialSpec) -> usize {
    spec.ends
        .iter()
        .zip(&potential.ends)
        .filter(|(_, pot)| pot.is_normalized() && pot.flux.iter().all(|q| q.is_integer()))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaValue {
    pub value: f64,
    /// Rigorous half-width of the tail enclosure.
    pub error_bound: f64,
    pub radius: f64,
    pub terms: usize,
}

/// Compensated summation.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

struct ZetaGeometry {
    quad: Quadratic,
    d: usize,
    rho: f64,
    /// `S_{d-1} / covolume` of the shifted lattice of frequency vectors.
    density: f64,
}

impl ZetaGeometry {
    fn new(component: &BoundaryComponent, a: &[Rational]) -> Self {
        let gram = component.gram();
        let quad = Quadratic::new(&gram, a);
        let d = gram.dim();
        let scale = gram.scale.to_f64();
        let trace_inv: f64 = (0..d).map(|i| quad.inv_f[i][i]).sum::<f64>() / scale;
        let rho = PI * trace_inv.sqrt();
        let covol = (2.0 * PI).powi(d as i32) / gram.volume();
        let sphere = 2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0);
        Self { quad, d, rho, density: sphere / covol }
    }

    /// Lower and upper bounds for `Σ_{|v|>R} |v|^{-2s}`.
    fn tail(&self, s: f64, radius: f64) -> (f64, f64) {
        let d = self.d as f64;
        let rho = self.rho;
        let lo = ((radius + rho) / (radius + 2.0 * rho)).powf(d - 1.0) * (radius + 2.0 * rho).powf(d - 2.0 * s)
            / (2.0 * s - d);
        let base = radius - 2.0 * rho;
        let mut hi = 0.0;
        let mut binom = 1.0;
        for j in 0..self.d {
            let jf = j as f64;
            hi += binom * rho.powi(j as i32) * base.powf(d - jf - 2.0 * s) / (2.0 * s - d + jf);
            binom = binom * (d - 1.0 - jf) / (jf + 1.0);
        }
        (self.density * lo, self.density * hi)
    }

    fn partial(&self, s: f64, radius: f64) -> (f64, usize) {
        let mut acc = Neumaier::default();
        let mut terms = 0;
        self.quad.for_each(radius * radius, |_, mu| {
            if mu > 0.0 && mu <= radius * radius {
                acc.add(mu.powf(-s));
                terms += 1;
            }
        });
        (acc.value(), terms)
    }
}

fn zeta_precondition(component: &BoundaryComponent, a: &[Rational], s: f64) -> Result<(), SpectralError> {
    check_flux(component, a)?;
    let abscissa = component.dim() as f64 / 2.0;
    if !(s > abscissa) {
        return Err(SpectralError::Divergent { s, abscissa });
    }
    Ok(())
}

/// `Σ_{μ ≤ R²} μ^{-s}` over non-zero modes; non-decreasing in `R`.
pub fn zeta_partial_sum(component: &BoundaryComponent, a: &[Rational], s: f64, radius: f64) -> Result<f64, SpectralError> {
    zeta_precondition(component, a, s)?;
    Ok(ZetaGeometry::new(component, a).partial(s, radius).0)
}

/// `Σ_{μ_k > 0} μ_k^{-s}` over the full shifted dual lattice, to absolute accuracy `tol`.
/// The zero mode is always excluded.
pub fn spectral_zeta(component: &BoundaryComponent, a: &[Rational], s: f64, tol: f64) -> Result<ZetaValue, SpectralError> {
    zeta_precondition(component, a, s)?;
    if !(tol > 0.0) {
        return Err(SpectralError::Precondition("tol must be positive".into()));
    }
    let geo = ZetaGeometry::new(component, a);
    let mut radius = 4.0 * geo.rho;
    loop {
        let (lo, hi) = geo.tail(s, radius);
        if 0.5 * (hi - lo) < tol {
            let (partial, terms) = geo.partial(s, radius);
            return Ok(ZetaValue { value: partial + 0.5 * (lo + hi), error_bound: 0.5 * (hi - lo), radius, terms });
        }
        radius *= 1.5;
        if radius.powi(geo.d as i32) > 5e8 {
            return Err(SpectralError::NoConvergence(format!(
                "zeta tail at s = {s} needs more than 5e8 lattice points for tol = {tol:e}"
            )));
        }
    }
}

/// `#{μ_k ≤ μ}` by counting, for the Weyl law on the cross-section.
pub fn transverse_count(component: &BoundaryComponent, a: &[Rational], mu: f64) -> Result<usize, SpectralError> {
    check_flux(component, a)?;
    let quad = Quadratic::new(&component.gram(), a);
    let mut n = 0usize;
    quad.for_each(mu, |_, _| n += 1);
    Ok(n)
}

/// Leading Weyl coefficient on the cross-section: `Vol(M)·ω_d/(2π)^d`.
pub fn transverse_weyl_constant(component: &BoundaryComponent) -> f64 {
    let d = component.dim() as f64;
    let ball = PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0);
    component.volume() * ball / (2.0 * PI).powf(d)
}
