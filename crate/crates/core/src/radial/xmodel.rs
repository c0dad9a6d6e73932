//! Radial operators in the boundary coordinate `x`, straight from the quadratic form
//! `∫ x^{(n−2)p+2} |φ'|² dx` on `L²(x^{np−2} dx)`. Used for metric horns (`p > 1`),
//! where the `r` coordinate has finite range, and as an independent check of the
//! `r`-coordinate model.

use serde::Serialize;

use super::sturm::lowest_eigenvalues;
use crate::error::SpectralError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XModel {
    pub n: usize,
    pub p: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub cells: usize,
    /// Dirichlet at `x_lo`; otherwise the natural condition (used at `x_lo = 0`).
    pub dirichlet_lo: bool,
    pub mu: f64,
}

impl XModel {
    /// Horn end `(0, eps]` with Dirichlet at `eps`.
    pub fn horn(n: usize, p: f64, eps: f64, cells: usize) -> Self {
        Self { n, p, x_lo: 0.0, x_hi: eps, cells, dirichlet_lo: false, mu: 0.0 }
    }

    fn stiffness(&self, x: f64) -> f64 {
        x.powf((self.n as f64 - 2.0) * self.p + 2.0)
    }

    fn mass(&self, x: f64) -> f64 {
        x.powf(self.n as f64 * self.p - 2.0)
    }

    /// Symmetric tridiagonal form `M^{-1/2} K M^{-1/2}` on cell centres.
    pub fn matrix(&self) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
        if !(self.x_hi > self.x_lo) || self.x_lo < 0.0 || self.cells < 8 {
            return Err(SpectralError::Grid("x-model needs 0 ≤ x_lo < x_hi and at least 8 cells".into()));
        }
        let n = self.cells;
        let h = (self.x_hi - self.x_lo) / n as f64;
        let face = |i: usize| self.x_lo + i as f64 * h;
        let centre = |i: usize| self.x_lo + (i as f64 + 0.5) * h;
        let m: Vec<f64> = (0..n).map(|i| self.mass(centre(i))).collect();
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 {
                if self.dirichlet_lo {
                    2.0 * self.stiffness(face(0))
                } else {
                    0.0
                }
            } else {
                self.stiffness(face(i))
            };
            let right = if i + 1 == n { 2.0 * self.stiffness(face(n)) } else { self.stiffness(face(i + 1)) };
            let x = centre(i);
            let transverse = self.mu * x.powf(self.n as f64 * self.p - 2.0 - 2.0 * self.p);
            diag.push(((left + right) / (h * h) + transverse) / m[i]);
        }
        let off: Vec<f64> = (0..n - 1).map(|i| -self.stiffness(face(i + 1)) / (h * h) / (m[i] * m[i + 1]).sqrt()).collect();
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(SpectralError::Grid("x-model entries overflow".into()));
        }
        Ok((diag, off))
    }

    pub fn lowest(&self, k: usize, tol: f64) -> Result<Vec<f64>, SpectralError> {
        let (d, o) = self.matrix()?;
        Ok(lowest_eigenvalues(&d, &o, k, tol))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HornRun {
    pub eps: Vec<f64>,
    pub ground_states: Vec<f64>,
    /// Slope of `log λ₀` against `log ε`.
    pub fitted_exponent: f64,
    /// `2 − 2p`
    pub predicted_exponent: f64,
}

/// Ground state of the horn model as `ε` halves, on a fixed spacing `h`.
pub fn horn_ground_states(n: usize, p: f64, eps0: f64, halvings: usize, h: f64) -> Result<HornRun, SpectralError> {
    if !(p > 1.0) {
        return Err(SpectralError::Precondition("horn model requires p > 1".into()));
    }
    let mut eps = Vec::new();
    let mut ground = Vec::new();
    for k in 0..=halvings {
        let e = eps0 / 2f64.powi(k as i32);
        let cells = (e / h).round() as usize;
        let model = XModel::horn(n, p, e, cells);
        let (d, o) = model.matrix()?;
        let scale = d.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        ground.push(lowest_eigenvalues(&d, &o, 1, 1e-13 * scale)[0]);
        eps.push(e);
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = ground.iter().map(|g| g.ln()).collect();
    Ok(HornRun { fitted_exponent: slope(&xs, &ys), predicted_exponent: 2.0 - 2.0 * p, eps, ground_states: ground })
}

/// Least-squares slope.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
