//! Bottom of the essential spectrum from truncated zero-mode spectra.

use serde::Serialize;

use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec};
use crate::radial::sturm::lowest_eigenvalues;
use crate::radial::{assemble, threshold, Grid, Perturbation};
use crate::topology::classify_potential;
use crate::transverse::kernel_dimension;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    /// Extrapolated infimum of the essential spectrum; absent when the spectrum is discrete.
    pub kappa_hat: Option<f64>,
    /// `κ(p)` from the closed form, for comparison.
    pub kappa: f64,
    pub discrete: bool,
    pub schedule: Vec<f64>,
    /// Lowest eigenvalue at each truncation length.
    pub ground_states: Vec<f64>,
    /// Coefficient `c` of `λ₁(Λ) = κ + c/Λ²`.
    pub slope: Option<f64>,
    /// Largest relative change of the ground state across the schedule (discrete case).
    pub spread: Option<f64>,
}

pub const DEFAULT_SPACING: f64 = 0.01;

fn ground_state(spec: &ManifoldSpec, mu: f64, length: f64, h: f64) -> Result<f64, SpectralError> {
    let r0 = spec.r0();
    let op = assemble(spec, mu, Grid::covering(r0, r0 + length, h)?, &Perturbation::None)?;
    Ok(lowest_eigenvalues(&op.diag, &op.offdiag, 1, 1e-12)[0])
}

/// Least squares for `y = κ + c x` with `x = 1/Λ²`.
fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let c = sxy / sxx;
    (my - c * mx, c)
}

pub fn threshold_estimate(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    schedule: &[f64],
    h: f64,
) -> Result<ThresholdEstimate, SpectralError> {
    if schedule.len() < 3 {
        return Err(SpectralError::Precondition("threshold estimate needs at least 3 truncation lengths".into()));
    }
    if schedule.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return Err(SpectralError::Precondition("truncation lengths must be positive".into()));
    }
    potential.validate(spec)?;
    let kappa = threshold(spec);
    let verdict = classify_potential(spec, potential);
    if !verdict.trapping && kernel_dimension(spec, potential) > 0 {
        let ground: Vec<f64> = schedule.iter().map(|&l| ground_state(spec, 0.0, l, h)).collect::<Result<_, _>>()?;
        let xs: Vec<f64> = schedule.iter().map(|l| l.powi(-2)).collect();
        let (k, c) = line_fit(&xs, &ground);
        return Ok(ThresholdEstimate {
            kappa_hat: Some(k),
            kappa,
            discrete: false,
            schedule: schedule.to_vec(),
            ground_states: ground,
            slope: Some(c),
            spread: None,
        });
    }
    if !verdict.trapping {
        return Err(SpectralError::Precondition("non-trapping potential without a normalized zero mode".into()));
    }
    let mu_min = super::lowest_mode(spec, potential)?;
    let ground: Vec<f64> = schedule.iter().map(|&l| ground_state(spec, mu_min, l, h)).collect::<Result<_, _>>()?;
    let lo = ground.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ground.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ThresholdEstimate {
        kappa_hat: None,
        kappa,
        discrete: true,
        schedule: schedule.to_vec(),
        ground_states: ground,
        slope: None,
        spread: Some((hi - lo) / lo.abs().max(f64::MIN_POSITIVE)),
    })
}
