//! Mode-summed eigenvalue counting on the full end.

use rayon::prelude::*;
use serde::Serialize;

use super::sturm::count_streaming;
use super::{Grid, GridPolicy, Perturbation, RadialPotential, Stencil};
use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec};
use crate::transverse::end_modes;

/// Extra length kept beyond twice the classical turning distance of each mode.
pub const TURNING_MARGIN: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountingOptions {
    pub policy: GridPolicy,
    /// Accept zero modes; their counts then grow with `r_max`.
    pub continuum: bool,
    pub perturbation: Perturbation,
    /// Shorten the grid of each mode to its classically allowed region plus margin.
    pub truncate_modes: bool,
}

impl Default for CountingOptions {
    fn default() -> Self {
        Self { policy: GridPolicy::default(), continuum: false, perturbation: Perturbation::None, truncate_modes: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountResult {
    pub lambdas: Vec<f64>,
    pub counts: Vec<usize>,
    pub grid: Grid,
    /// Transverse modes (with multiplicity) that entered the sum.
    pub modes: usize,
}

/// `(μ, multiplicity)` of every mode that can contribute below `lambda_max`.
pub fn contributing_modes(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    lambda_max: f64,
    grid: &Grid,
    continuum: bool,
) -> Result<Vec<(f64, usize)>, SpectralError> {
    potential.validate(spec)?;
    let pot = RadialPotential::new(spec)?;
    let v_min = pot.v_min(grid.r0, grid.r_max());
    let q0 = pot.q(grid.r0);
    let mu_max = (lambda_max - v_min) / q0;
    let mut modes = Vec::new();
    for i in 0..spec.ends.len() {
        let end = &potential.ends[i];
        if !end.is_normalized() {
            return Err(SpectralError::NotNormalized { label: spec.ends[i].label.clone() });
        }
        if !continuum && end.flux.iter().all(|q| q.is_integer()) {
            return Err(SpectralError::NonTrapping);
        }
        if mu_max < 0.0 {
            continue;
        }
        let spectrum = end_modes(spec, potential, i, mu_max)?;
        modes.extend(spectrum.entries.iter().filter(|e| e.mu * q0 + v_min < lambda_max).map(|e| (e.mu, e.multiplicity)));
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(modes)
}

/// Grid for one mode, shortened to its classically allowed region plus margin when `truncate` is set.
pub fn mode_grid(pot: &RadialPotential, grid: &Grid, mu: f64, lambda_max: f64, v_min: f64, truncate: bool) -> Grid {
    if !truncate || mu <= 0.0 {
        return *grid;
    }
    let turn = pot.q_inverse((lambda_max - v_min) / mu).max(grid.r0);
    let want = 2.0 * (turn - grid.r0) + TURNING_MARGIN;
    let cells = ((want / grid.h).ceil() as usize).clamp(8, grid.cells);
    Grid { cells, ..*grid }
}

/// `N(λ)` at each sample, summed over transverse modes with multiplicity.
pub fn counting_samples(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    lambdas: &[f64],
    opts: &CountingOptions,
) -> Result<CountResult, SpectralError> {
    if lambdas.is_empty() || lambdas.iter().any(|l| !l.is_finite()) {
        return Err(SpectralError::Precondition("λ samples must be finite and non-empty".into()));
    }
    let lambda_max = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grid = opts.policy.grid(spec, lambda_max)?;
    let pot = RadialPotential::new(spec)?;
    let modes = contributing_modes(spec, potential, lambda_max, &grid, opts.continuum)?;
    let v_min = pot.v_min(grid.r0, grid.r_max());
    let off_sq = 1.0 / grid.h.powi(4);
    let per_mode: Vec<Vec<usize>> = modes
        .par_iter()
        .map(|&(mu, mult)| {
            let g = mode_grid(&pot, &grid, mu, lambda_max, v_min, opts.truncate_modes);
            let stencil = Stencil { pot, grid: g, mu, pert: &opts.perturbation };
            count_streaming(g.nodes(), |i| stencil.entry(i), off_sq, lambdas).into_iter().map(|c| c * mult).collect()
        })
        .collect();
    let mut counts = vec![0usize; lambdas.len()];
    for row in &per_mode {
        for (c, v) in counts.iter_mut().zip(row) {
            *c += v;
        }
    }
    Ok(CountResult { lambdas: lambdas.to_vec(), counts, grid, modes: modes.iter().map(|m| m.1).sum() })
}

pub fn counting_function(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    lambda: f64,
    opts: &CountingOptions,
) -> Result<usize, SpectralError> {
    Ok(counting_samples(spec, potential, &[lambda], opts)?.counts[0])
}
