//! Hölder continuity of the weighted resolvent `F(z) = W_s (H − z)^{-1} W_s`
//! toward the real axis, tracked across truncation lengths.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec};
use crate::radial::resolvent::weighted_resolvent_difference;
use crate::radial::sturm::tridiagonal_eigenvalues_below;
use crate::radial::xmodel::slope;
use crate::radial::{assemble, weighted_resolvent_norm, Grid, Perturbation, RadialOperator};
use crate::transverse::kernel_dimension;

use super::lowest_mode;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderOptions {
    /// Truncation lengths `Λ = r_max − r0`.
    pub lengths: Vec<f64>,
    pub h: f64,
    /// Allowed relative spread of the fitted constant across lengths.
    pub stability: f64,
}

impl Default for HolderOptions {
    fn default() -> Self {
        Self { lengths: vec![40.0, 80.0, 160.0], h: 0.05, stability: 0.25 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderRun {
    pub length: f64,
    /// Common imaginary part of the samples.
    pub eta: f64,
    pub exponent: f64,
    /// Fitted constant, `‖ΔF‖ ≈ C |Δz|^exponent`.
    pub constant: f64,
    /// `(|z₁ − z₂|, ‖F(z₁) − F(z₂)‖)` for every sample pair.
    pub pairs: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderReport {
    pub s_weight: f64,
    pub window: (f64, f64),
    /// `Im z` of every sample: the largest resolution floor over the truncations.
    pub eta: f64,
    /// Resolution floor of each truncation.
    pub floors: Vec<f64>,
    /// Smallest fitted exponent over the truncations.
    pub exponent: f64,
    pub target_exponent: f64,
    /// Fitted constant at the longest truncation.
    pub constant: f64,
    /// `max C / min C − 1` across truncations at fixed samples.
    pub constant_spread: f64,
    /// Levels of the probed operator that do not move with the truncation and lie within `η` of a sample.
    pub bound_states: Vec<f64>,
    pub stable: bool,
    /// Whether the zero mode (continuum) or the lowest trapped mode was probed.
    pub continuum: bool,
    pub runs: Vec<HolderRun>,
    /// The same fits with `Im z` lowered to each truncation's own floor.
    pub floor_runs: Vec<HolderRun>,
    pub floor_constant_spread: f64,
}

fn radial(spec: &ManifoldSpec, mu: f64, length: f64, h: f64) -> Result<RadialOperator, SpectralError> {
    let r0 = spec.r0();
    assemble(spec, mu, Grid::covering(r0, r0 + length, h)?, &Perturbation::None)
}

fn window_levels(op: &RadialOperator, lo: f64, hi: f64) -> Vec<f64> {
    tridiagonal_eigenvalues_below(&op.diag, &op.offdiag, hi, 1e-12).into_iter().filter(|&l| l >= lo).collect()
}

/// `10 ×` the mean zero-mode level spacing in the window at truncation `length`.
pub fn resolution_floor(spec: &ManifoldSpec, window: (f64, f64), length: f64, h: f64) -> Result<f64, SpectralError> {
    let levels = window_levels(&radial(spec, 0.0, length, h)?, window.0, window.1);
    if levels.len() < 2 {
        return Err(SpectralError::Precondition(format!("fewer than two zero-mode levels in the window at length {length}")));
    }
    Ok(10.0 * (levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64)
}

fn check_weight(s_weight: f64) -> Result<(), SpectralError> {
    if !(s_weight > 0.5 && s_weight < 1.5) {
        return Err(SpectralError::Precondition(format!("s_weight = {s_weight} outside (1/2, 3/2)")));
    }
    Ok(())
}

fn fit_run(op: &RadialOperator, length: f64, eta: f64, samples: &[f64], s_weight: f64) -> Result<HolderRun, SpectralError> {
    let mut index = Vec::new();
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            index.push((i, j));
        }
    }
    let pairs = index
        .par_iter()
        .map(|&(i, j)| {
            let z1 = Complex64::new(samples[i], eta);
            let z2 = Complex64::new(samples[j], eta);
            Ok(((z1 - z2).norm(), weighted_resolvent_difference(op, z1, z2, s_weight)?))
        })
        .collect::<Result<Vec<_>, SpectralError>>()?;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let exponent = slope(&xs, &ys);
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    Ok(HolderRun { length, eta, exponent, constant: (my - exponent * mx).exp(), pairs })
}

fn spread(runs: &[HolderRun]) -> f64 {
    let cmin = runs.iter().map(|r| r.constant).fold(f64::INFINITY, f64::min);
    let cmax = runs.iter().map(|r| r.constant).fold(0.0, f64::max);
    cmax / cmin - 1.0
}

/// Samples `z = E + iη` with `η` the largest resolution floor of the truncations, so
/// that no truncation resolves individual levels; the fit is repeated per truncation
/// and the constant compared. Samples with a truncation-independent level within `η`
/// sit next to an eigenvalue and are reported unstable.
pub fn holder_probe(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    s_weight: f64,
    window: (f64, f64),
    z_samples: &[f64],
    opts: &HolderOptions,
) -> Result<HolderReport, SpectralError> {
    check_weight(s_weight)?;
    if z_samples.len() < 4 {
        return Err(SpectralError::Precondition("the Hölder probe needs at least 4 samples".into()));
    }
    if z_samples.iter().any(|e| *e < window.0 || *e > window.1) {
        return Err(SpectralError::Precondition("samples must lie in the window".into()));
    }
    if opts.lengths.len() < 2 {
        return Err(SpectralError::Precondition("stability needs at least two truncation lengths".into()));
    }
    potential.validate(spec)?;
    let continuum = kernel_dimension(spec, potential) > 0;
    let mu = if continuum { 0.0 } else { lowest_mode(spec, potential)? };
    let floors = opts.lengths.iter().map(|&l| resolution_floor(spec, window, l, opts.h)).collect::<Result<Vec<_>, _>>()?;
    let eta = floors.iter().copied().fold(0.0, f64::max);
    let ops = opts.lengths.iter().map(|&l| radial(spec, mu, l, opts.h)).collect::<Result<Vec<_>, _>>()?;
    let mut runs = Vec::new();
    let mut floor_runs = Vec::new();
    for ((op, &length), &floor) in ops.iter().zip(&opts.lengths).zip(&floors) {
        runs.push(fit_run(op, length, eta, z_samples, s_weight)?);
        floor_runs.push(fit_run(op, length, floor, z_samples, s_weight)?);
    }

    // continuum levels move when the box is stretched to a coprime number of cells
    let (lo, hi) = (window.0 - eta, window.1 + eta);
    let base = ops[0].grid;
    let mut cells = (1.1 * base.cells as f64).round() as usize;
    while cells.gcd(&base.cells) != 1 {
        cells += 1;
    }
    let stretched = assemble(spec, mu, Grid { cells, ..base }, &Perturbation::None)?;
    let reference = window_levels(&stretched, lo, hi);
    let longest = window_levels(&ops[ops.len() - 1], lo, hi);
    let persists = |e: f64, ls: &[f64]| ls.iter().any(|&f| (f - e).abs() <= 1e-8 * (1.0 + e.abs()));
    let bound_states: Vec<f64> = window_levels(&ops[0], lo, hi)
        .into_iter()
        .filter(|&e| persists(e, &reference) && persists(e, &longest))
        .filter(|&e| z_samples.iter().any(|z| (z - e).abs() <= eta))
        .collect();

    let constant_spread = spread(&runs);
    Ok(HolderReport {
        s_weight,
        window,
        eta,
        floors,
        exponent: runs.iter().map(|r| r.exponent).fold(f64::INFINITY, f64::min),
        target_exponent: s_weight - 0.5,
        constant: runs[runs.len() - 1].constant,
        constant_spread,
        stable: constant_spread <= opts.stability && bound_states.is_empty(),
        bound_states,
        continuum,
        floor_constant_spread: spread(&floor_runs),
        runs,
        floor_runs,
    })
}

/// `‖W (H − E − iη) W‖` with `η` at the resolution floor of each truncation.
pub fn resolvent_growth(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    s_weight: f64,
    energy: f64,
    window: (f64, f64),
    opts: &HolderOptions,
) -> Result<Vec<(f64, f64)>, SpectralError> {
    check_weight(s_weight)?;
    potential.validate(spec)?;
    let mu = if kernel_dimension(spec, potential) > 0 { 0.0 } else { lowest_mode(spec, potential)? };
    opts.lengths
        .iter()
        .map(|&length| {
            let eta = resolution_floor(spec, window, length, opts.h)?;
            let op = radial(spec, mu, length, opts.h)?;
            Ok((eta, weighted_resolvent_norm(&op, Complex64::new(energy, eta), s_weight)?))
        })
        .collect()
}
