//! Trapping as a function of the coupling constant `g` in `Δ_{gB}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec, Rational};
use crate::radial::counting::contributing_modes;
use crate::radial::sturm::{lowest_eigenvalues, tridiagonal_eigenvalues_below};
use crate::radial::{assemble, threshold, Grid, Perturbation};
use crate::topology::{classify_potential, component_group, Subgroup};
use crate::transverse::kernel_dimension;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingOptions {
    /// Centre of the spacing window, above `κ(p)`.
    pub lambda_star: f64,
    pub half_width: f64,
    /// Truncation length `Λ`; the statistic compares `Λ` with `2Λ`.
    pub length: f64,
    pub h: f64,
}

impl CouplingOptions {
    pub fn for_spec(spec: &ManifoldSpec) -> Self {
        Self { lambda_star: threshold(spec) + 2.0, half_width: 1.0, length: 40.0, h: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingRow {
    pub g: String,
    pub flux: Vec<String>,
    pub trapping: bool,
    pub zero_mode: bool,
    pub ground_state: f64,
    /// Mean level spacing in the window at `Λ` and `2Λ`; absent when fewer than two levels fall inside.
    pub spacing: Option<f64>,
    pub spacing_doubled: Option<f64>,
    /// `spacing / spacing_doubled`: near 2 for a continuum, near 1 for discrete levels.
    pub spacing_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingScan {
    /// Positive generator of the non-trapping couplings; absent when every `g` is non-trapping.
    pub generator: Option<String>,
    pub rows: Vec<CouplingRow>,
}

fn mean_spacing(levels: &[f64]) -> Option<f64> {
    (levels.len() >= 2).then(|| (levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64)
}

fn window_levels(spec: &ManifoldSpec, pot: &PotentialSpec, opts: &CouplingOptions, length: f64) -> Result<Vec<f64>, SpectralError> {
    let r0 = spec.r0();
    let grid = Grid::covering(r0, r0 + length, opts.h)?;
    let (lo, hi) = (opts.lambda_star - opts.half_width, opts.lambda_star + opts.half_width);
    let mut levels = Vec::new();
    for (mu, mult) in contributing_modes(spec, pot, hi, &grid, true)? {
        let op = assemble(spec, mu, grid, &Perturbation::None)?;
        for l in tridiagonal_eigenvalues_below(&op.diag, &op.offdiag, hi, 1e-10) {
            if l >= lo {
                levels.extend(std::iter::repeat(l).take(mult));
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

fn row(spec: &ManifoldSpec, base: &PotentialSpec, g: Rational, opts: &CouplingOptions) -> Result<CouplingRow, SpectralError> {
    let pot = base.scaled(g);
    let verdict = classify_potential(spec, &pot);
    let r0 = spec.r0();
    let grid = Grid::covering(r0, r0 + opts.length, opts.h)?;
    let lowest = super::lowest_mode(spec, &pot)?;
    let op = assemble(spec, lowest, grid, &Perturbation::None)?;
    let ground_state = lowest_eigenvalues(&op.diag, &op.offdiag, 1, 1e-12)[0];
    let spacing = mean_spacing(&window_levels(spec, &pot, opts, opts.length)?);
    let spacing_doubled = mean_spacing(&window_levels(spec, &pot, opts, 2.0 * opts.length)?);
    Ok(CouplingRow {
        g: g.to_string(),
        flux: pot.ends.iter().flat_map(|e| e.flux.iter().map(|q| q.to_string())).collect(),
        trapping: verdict.trapping,
        zero_mode: kernel_dimension(spec, &pot) > 0,
        ground_state,
        spacing,
        spacing_doubled,
        spacing_ratio: spacing.zip(spacing_doubled).map(|(a, b)| a / b),
    })
}

pub fn coupling_scan(
    spec: &ManifoldSpec,
    base_flux: &[Rational],
    g_grid: &[Rational],
    opts: &CouplingOptions,
) -> Result<CouplingScan, SpectralError> {
    if spec.ends.len() != 1 {
        return Err(SpectralError::Precondition("coupling scans need a connected boundary".into()));
    }
    let base = PotentialSpec { ends: vec![crate::model::EndPotential::closed_flux(base_flux.to_vec())] };
    base.validate(spec)?;
    let generator = match component_group(base_flux) {
        Subgroup::AllReals => None,
        Subgroup::Cyclic(q) => Some(q.to_string()),
    };
    let rows = g_grid.par_iter().map(|&g| row(spec, &base, g, opts)).collect::<Result<Vec<_>, _>>()?;
    Ok(CouplingScan { generator, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundaryComponent, PiScalar};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn surface() -> ManifoldSpec {
        ManifoldSpec::new(2, r(1, 1), r(1, 10), vec![BoundaryComponent::circle("c", PiScalar::two_pi())]).unwrap()
    }

    #[test]
    fn half_flux_scan() {
        let spec = surface();
        let g: Vec<Rational> = (0..4).map(|k| r(k, 1)).collect();
        let scan = coupling_scan(&spec, &[r(1, 2)], &g, &CouplingOptions::for_spec(&spec)).unwrap();
        assert_eq!(scan.generator.as_deref(), Some("2"));
        let trapping: Vec<bool> = scan.rows.iter().map(|r| r.trapping).collect();
        assert_eq!(trapping, [false, true, false, true]);
        for row in &scan.rows {
            assert_eq!(row.zero_mode, !row.trapping);
            if row.trapping {
                assert!(row.spacing.is_none());
                assert!(row.ground_state > 20.0);
            } else {
                let ratio = row.spacing_ratio.unwrap();
                assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
                assert!((row.ground_state - 0.25).abs() < 0.01);
            }
        }
    }

    #[test]
    fn zero_base_is_never_trapping() {
        let spec = surface();
        let g = [r(0, 1), r(1, 3), r(5, 2)];
        let scan = coupling_scan(&spec, &[r(0, 1)], &g, &CouplingOptions::for_spec(&spec)).unwrap();
        assert!(scan.generator.is_none());
        assert!(scan.rows.iter().all(|r| !r.trapping));
    }

    #[test]
    fn third_flux_generator() {
        let spec = surface();
        let scan = coupling_scan(&spec, &[r(1, 3)], &[r(3, 1)], &CouplingOptions::for_spec(&spec)).unwrap();
        assert_eq!(scan.generator.as_deref(), Some("3"));
        assert!(!scan.rows[0].trapping);
    }
}
