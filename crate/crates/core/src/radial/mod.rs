//! Half-line radial operators `-∂²_r + V_p(r) + Q_p(r)·μ` and their discretization.

pub mod counting;
pub mod resolvent;
pub mod sturm;
pub mod xmodel;

use num_traits::One;
use serde::Serialize;

use crate::error::SpectralError;
use crate::model::{rational_to_f64, ManifoldSpec, Rational};

pub use counting::{counting_function, counting_samples, CountingOptions};
pub use resolvent::weighted_resolvent_norm;
pub use sturm::{eigenvalues_below, sturm_count};

/// Uniform grid on `[r0, r0 + cells·h]`; the unknowns sit at the `cells − 1` interior nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub r0: f64,
    pub h: f64,
    pub cells: usize,
}

impl Grid {
    pub fn new(r0: f64, h: f64, cells: usize) -> Result<Self, SpectralError> {
        if !(h > 0.0) || !h.is_finite() || !r0.is_finite() {
            return Err(SpectralError::Grid(format!("spacing h = {h} must be positive and finite")));
        }
        if cells < 8 {
            return Err(SpectralError::Grid(format!("{cells} cells; at least 8 are required")));
        }
        Ok(Self { r0, h, cells })
    }

    /// Smallest grid with spacing `h` covering `[r0, r_max]`.
    pub fn covering(r0: f64, r_max: f64, h: f64) -> Result<Self, SpectralError> {
        if !(r_max > r0) {
            return Err(SpectralError::Grid(format!("r_max = {r_max} must exceed r0 = {r0}")));
        }
        let cells = ((r_max - r0) / h - 1e-9).ceil().max(1.0) as usize;
        Self::new(r0, h, cells)
    }

    pub fn r_max(&self) -> f64 {
        self.r0 + self.cells as f64 * self.h
    }

    pub fn length(&self) -> f64 {
        self.cells as f64 * self.h
    }

    pub fn nodes(&self) -> usize {
        self.cells - 1
    }

    /// Interior node `i` (0-based), at `r0 + (i+1)h`.
    pub fn node(&self, i: usize) -> f64 {
        self.r0 + (i + 1) as f64 * self.h
    }
}

/// Defaults: `h = min(0.02, 0.5/√λ)`, and `r_max` past the classical turning point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct GridPolicy {
    pub h: Option<f64>,
    pub r_max: Option<f64>,
}

impl GridPolicy {
    pub fn fixed(h: f64, r_max: f64) -> Self {
        Self { h: Some(h), r_max: Some(r_max) }
    }

    pub fn spacing(&self, lambda_max: f64) -> f64 {
        self.h.unwrap_or_else(|| 0.02f64.min(0.5 / lambda_max.max(1.0).sqrt()))
    }

    pub fn right_end(&self, spec: &ManifoldSpec, lambda_max: f64) -> f64 {
        if let Some(r) = self.r_max {
            return r;
        }
        let r0 = spec.r0();
        let lam = lambda_max.max(1.0);
        if spec.p.is_one() {
            r0 + 40f64.max(4.0 * lam.ln())
        } else {
            let p = spec.p_f64();
            r0 + 40f64.max(8.0 * lam.powf((1.0 - p) / (2.0 * p)) / (1.0 - p))
        }
    }

    pub fn grid(&self, spec: &ManifoldSpec, lambda_max: f64) -> Result<Grid, SpectralError> {
        Grid::covering(spec.r0(), self.right_end(spec, lambda_max), self.spacing(lambda_max))
    }
}

/// `V_p` and `Q_p` of the diagonalized end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialPotential {
    pub p: f64,
    pub cusp: bool,
    /// `((n−1)/2)²` for `p = 1`, the `r^{-2}` coefficient otherwise.
    pub coefficient: f64,
}

/// `α(α+1)` with `α = (n−1)p / (2(1−p))`: the inverse-square term produced by the
/// change of variables for `p < 1`.
pub fn derived_inverse_square(n: usize, p: Rational) -> Rational {
    let alpha = Rational::from_integer(n as i64 - 1) * p / (Rational::from_integer(2) * (Rational::one() - p));
    alpha * (alpha + Rational::one())
}

/// `κ(p)`: `((n−1)/2)²` for `p = 1`, `0` for `p < 1`.
pub fn threshold(spec: &ManifoldSpec) -> f64 {
    if spec.p.is_one() {
        let a = (spec.n as f64 - 1.0) / 2.0;
        a * a
    } else {
        0.0
    }
}

impl RadialPotential {
    pub fn new(spec: &ManifoldSpec) -> Result<Self, SpectralError> {
        if spec.is_incomplete() {
            return Err(SpectralError::Precondition("p > 1 is modeled in the x coordinate".into()));
        }
        let p = spec.p_f64();
        if spec.p.is_one() {
            let a = (spec.n as f64 - 1.0) / 2.0;
            Ok(Self { p, cusp: true, coefficient: a * a })
        } else {
            let c = spec.c0_override.unwrap_or_else(|| derived_inverse_square(spec.n, spec.p));
            Ok(Self { p, cusp: false, coefficient: rational_to_f64(&c) })
        }
    }

    pub fn v(&self, r: f64) -> f64 {
        if self.cusp {
            self.coefficient
        } else {
            self.coefficient / (r * r)
        }
    }

    pub fn q(&self, r: f64) -> f64 {
        if self.cusp {
            (2.0 * r).exp()
        } else {
            ((1.0 - self.p) * r).powf(2.0 * self.p / (1.0 - self.p))
        }
    }

    /// Solution of `Q_p(r) = t`.
    pub fn q_inverse(&self, t: f64) -> f64 {
        if self.cusp {
            0.5 * t.ln()
        } else {
            t.powf((1.0 - self.p) / (2.0 * self.p)) / (1.0 - self.p)
        }
    }

    /// Lower bound of `V_p` on `[r0, r_max]`.
    pub fn v_min(&self, r0: f64, r_max: f64) -> f64 {
        self.v(r0).min(self.v(r_max))
    }
}

/// Explicit radial profile functions used by the perturbation toggles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Zero,
    /// `amplitude · max(r, 1)^{-exponent}`
    PowerLaw { amplitude: f64, exponent: f64 },
    /// `amplitude · exp(-((r − center)/width)²)`
    Gaussian { amplitude: f64, center: f64, width: f64 },
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::PowerLaw { amplitude, exponent } => amplitude * r.max(1.0).powf(-exponent),
            Profile::Gaussian { amplitude, center, width } => amplitude * (-((r - center) / width).powi(2)).exp(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Perturbation {
    #[default]
    None,
    /// Potential `W` added pointwise; `L^{1+ε}|W|` must stay bounded.
    ShortRange { profile: Profile, epsilon: f64 },
    /// Radial conformal change of the metric by `1 + ρ`.
    RadialConformal { profile: Profile },
}

/// Symmetric tridiagonal matrix of a radial operator on a grid, Dirichlet at both ends.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub grid: Grid,
    pub mode_mu: f64,
    pub n: usize,
    pub p: f64,
    pub warnings: Vec<String>,
}

impl RadialOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `y = A x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.offdiag[i] * x[i + 1];
            }
            y[i] = s;
        }
    }
}

/// Matrix entries of one mode, node by node, so long grids need not be stored.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stencil<'a> {
    pub pot: RadialPotential,
    pub grid: Grid,
    pub mu: f64,
    pub pert: &'a Perturbation,
}

impl Stencil<'_> {
    pub fn potential(&self, r: f64) -> f64 {
        let mut v = self.pot.v(r) + self.pot.q(r) * self.mu;
        if let Perturbation::ShortRange { profile, .. } = self.pert {
            v += profile.eval(r);
        }
        v
    }

    /// `(1 + ρ)^{-1}` for the conformal toggle, `1` otherwise.
    pub fn scale(&self, r: f64) -> f64 {
        match self.pert {
            Perturbation::RadialConformal { profile } => 1.0 / (1.0 + profile.eval(r)),
            _ => 1.0,
        }
    }

    /// `(a_i, b_{i-1}²)`
    pub fn entry(&self, i: usize) -> (f64, f64) {
        let h = self.grid.h;
        let lap = 1.0 / (h * h);
        let r = self.grid.node(i);
        let s = self.scale(r);
        let a = (2.0 * lap + self.potential(r)) * s;
        let b2 = if i == 0 { 0.0 } else { lap * lap * s * self.scale(r - h) };
        (a, b2)
    }
}

pub fn assemble(
    spec: &ManifoldSpec,
    mode_mu: f64,
    grid: Grid,
    pert: &Perturbation,
) -> Result<RadialOperator, SpectralError> {
    let pot = RadialPotential::new(spec)?;
    if !(mode_mu >= 0.0) || !mode_mu.is_finite() {
        return Err(SpectralError::Precondition(format!("mode eigenvalue {mode_mu} must be finite and non-negative")));
    }
    let stencil = Stencil { pot, grid, mu: mode_mu, pert };
    let n = grid.nodes();
    let mut warnings = Vec::new();
    if let Perturbation::RadialConformal { profile } = pert {
        if (0..n).any(|i| !(1.0 + profile.eval(grid.node(i)) > 0.0)) {
            return Err(SpectralError::Precondition("conformal factor 1 + ρ must stay positive".into()));
        }
    }
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let (a, b2) = stencil.entry(i);
        diag.push(a);
        if i > 0 {
            offdiag.push(-b2.sqrt());
        }
    }
    if let Perturbation::ShortRange { profile, epsilon } = pert {
        // weighted profile must not grow in the tail
        let weighted = |r: f64| r.max(1.0).powf(1.0 + epsilon) * profile.eval(r).abs();
        let tail = weighted(grid.r_max());
        let mid = weighted(grid.r0 + 0.5 * grid.length());
        if tail > 2.0 * mid + 1e-12 {
            warnings.push(format!("short-range check failed: L^(1+{epsilon})|W| grows toward r_max"));
        }
    }
    let max_potential = (0..n).map(|i| stencil.potential(grid.node(i)).abs()).fold(0.0, f64::max);
    if grid.h * grid.h * max_potential > 1.0 {
        warnings.push(format!("grid may be too coarse: h²·max|V| = {:.3e}", grid.h * grid.h * max_potential));
    }
    if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
        return Err(SpectralError::Grid("operator entries overflow; shorten r_max".into()));
    }
    Ok(RadialOperator { diag, offdiag, grid, mode_mu, n: spec.n, p: pot.p, warnings })
}
