//! Numerical Mourre probe for the zero mode: the conjugate operator
//! `S_R = χ̃ (Φ_R(D) ξ + ξ Φ_R(D)) χ̃` with `D = −i∂_r`, the commutator
//! `K = i[H, S_R]`, and its compression to a spectral window of `H`.
//!
//! `S_R = i·A` with `A` real antisymmetric, so `K = A H − H A` is real symmetric.
//! The commutator is taken with the operator continued one node past `r_max` and
//! then compressed to the box, so that states supported in the box see the
//! half-line commutator rather than the reflecting wall.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec};
use crate::radial::{assemble, Grid, Perturbation, RadialOperator};
use crate::transverse::kernel_dimension;

/// `6t⁵ − 15t⁴ + 10t³` clamped to `[0, 1]`.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

/// `χ̃`: vanishes below `r0 + 1`, equals 1 above `r0 + 2`.
pub fn cutoff(r: f64, r0: f64) -> f64 {
    smoothstep(r - (r0 + 1.0))
}

/// `ξ`: vanishes below `r0 + 2`, equals `r` above `r0 + 3`.
pub fn xi(r: f64, r0: f64) -> f64 {
    r * smoothstep(r - (r0 + 2.0))
}

/// `b`: 1 on `[−1, 1]`, 0 outside `[−2, 2]`.
pub fn bump(x: f64) -> f64 {
    1.0 - smoothstep(x.abs() - 1.0)
}

/// `Φ_R(x) = R Φ(x/R) = x b(x/R)`; `None` is `R = ∞`.
pub fn phi_r(x: f64, big_r: Option<f64>) -> f64 {
    match big_r {
        Some(r) => x * bump(x / r),
        None => x,
    }
}

/// Start of the region where `ξ = r` and `χ̃ = 1`.
pub fn far_start(r0: f64) -> f64 {
    r0 + 3.0
}

pub const LOCALIZATION_MARGIN: f64 = 2.0;

/// Kernel `c_l`, `l = 0..len`, of the real antisymmetric `B` with `Φ_R(D) = iB`,
/// from a zero-padded DFT so the box does not wrap onto itself.
fn fourier_kernel(len: usize, h: f64, big_r: f64) -> Vec<f64> {
    let m = 4 * len;
    let dk = 2.0 * std::f64::consts::PI / (m as f64 * h);
    let jmax = ((2.0 * big_r / dk).ceil() as usize).min(m / 2);
    let symbols: Vec<(f64, f64)> = (1..jmax).map(|j| (j as f64 * dk, phi_r(j as f64 * dk, Some(big_r)))).collect();
    (0..len)
        .map(|l| {
            let lh = l as f64 * h;
            2.0 / m as f64 * symbols.iter().map(|(k, f)| f * (k * lh).sin()).sum::<f64>()
        })
        .collect()
}

/// The real antisymmetric `A` with `S_R = iA` on the interior nodes of `grid`.
pub fn conjugate_matrix(grid: &Grid, big_r: Option<f64>) -> DMatrix<f64> {
    let n = grid.nodes();
    let r0 = grid.r0;
    let chi: Vec<f64> = (0..n).map(|i| cutoff(grid.node(i), r0)).collect();
    let x: Vec<f64> = (0..n).map(|i| xi(grid.node(i), r0)).collect();
    let mut a = DMatrix::zeros(n, n);
    match big_r {
        None => {
            // B = −∂ by central differences
            let c = 1.0 / (2.0 * grid.h);
            for m in 0..n - 1 {
                let v = -c * chi[m] * chi[m + 1] * (x[m] + x[m + 1]);
                a[(m, m + 1)] = v;
                a[(m + 1, m)] = -v;
            }
        }
        Some(r) => {
            let kernel = fourier_kernel(n, grid.h, r);
            for m in 0..n {
                for k in (m + 1)..n {
                    let v = -kernel[k - m] * chi[m] * chi[k] * (x[m] + x[k]);
                    a[(m, k)] = v;
                    a[(k, m)] = -v;
                }
            }
        }
    }
    a
}

/// `K = AH − HA` for tridiagonal `H`, with the relative asymmetry of the raw product.
pub fn commutator_matrix(diag: &[f64], off: &[f64], a: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let n = diag.len();
    let mut k = DMatrix::zeros(n, n);
    for m in 0..n {
        for j in 0..n {
            let mut ah = a[(m, j)] * diag[j];
            if j > 0 {
                ah += a[(m, j - 1)] * off[j - 1];
            }
            if j + 1 < n {
                ah += a[(m, j + 1)] * off[j];
            }
            let mut ha = diag[m] * a[(m, j)];
            if m > 0 {
                ha += off[m - 1] * a[(m - 1, j)];
            }
            if m + 1 < n {
                ha += off[m] * a[(m + 1, j)];
            }
            k[(m, j)] = ah - ha;
        }
    }
    let scale = k.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut defect = 0.0f64;
    for m in 0..n {
        for j in (m + 1)..n {
            defect = defect.max((k[(m, j)] - k[(j, m)]).abs());
            let v = 0.5 * (k[(m, j)] + k[(j, m)]);
            k[(m, j)] = v;
            k[(j, m)] = v;
        }
    }
    (k, if scale > 0.0 { defect / scale } else { 0.0 })
}

fn zero_mode(spec: &ManifoldSpec, potential: &PotentialSpec, grid: Grid) -> Result<RadialOperator, SpectralError> {
    potential.validate(spec)?;
    if kernel_dimension(spec, potential) == 0 {
        return Err(SpectralError::Precondition("the Mourre probe needs a non-trapping zero mode".into()));
    }
    assemble(spec, 0.0, grid, &Perturbation::None)
}

/// `⟨φ, i[H, S_∞] φ⟩` without forming matrices, for `φ` on the interior nodes of `grid`.
pub fn commutator_form_unbounded(spec: &ManifoldSpec, potential: &PotentialSpec, grid: Grid, phi: &[f64]) -> Result<f64, SpectralError> {
    let op = zero_mode(spec, potential, grid)?;
    let n = op.dim();
    if phi.len() != n {
        return Err(SpectralError::Precondition(format!("test state has {} entries, grid has {n}", phi.len())));
    }
    let r0 = grid.r0;
    let c = 1.0 / (2.0 * grid.h);
    let w: Vec<f64> = (0..n.saturating_sub(1))
        .map(|m| -c * cutoff(grid.node(m), r0) * cutoff(grid.node(m + 1), r0) * (xi(grid.node(m), r0) + xi(grid.node(m + 1), r0)))
        .collect();
    let apply_a = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|m| {
                let mut s = 0.0;
                if m + 1 < n {
                    s += w[m] * x[m + 1];
                }
                if m > 0 {
                    s -= w[m - 1] * x[m - 1];
                }
                s
            })
            .collect()
    };
    let mut hphi = vec![0.0; n];
    op.apply(phi, &mut hphi);
    let ahphi = apply_a(&hphi);
    let aphi = apply_a(phi);
    let mut haphi = vec![0.0; n];
    op.apply(&aphi, &mut haphi);
    Ok(phi.iter().zip(ahphi.iter().zip(&haphi)).map(|(p, (x, y))| p * (x - y)).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MourreProbeReport {
    /// `None` for `R = ∞`.
    pub r: Option<f64>,
    pub window: (f64, f64),
    pub window_dimension: usize,
    pub min_projected_eigenvalue: f64,
    /// Lowest eigenvalue of `E_J K E_J` among directions mostly outside `r ≤ r* + margin`.
    pub far_floor: f64,
    /// Share of negative-direction mass inside `r ≤ r* + margin`; 1 when there are no negative directions.
    pub localization_fraction: f64,
    pub negative_directions: usize,
    pub epsilon_r: f64,
    /// `max|K − Kᵀ| / max|K|` before symmetrization.
    pub symmetry_defect: f64,
    pub warnings: Vec<String>,
}

pub fn mourre_probe(
    spec: &ManifoldSpec,
    potential: &PotentialSpec,
    big_r: Option<f64>,
    window: (f64, f64),
    grid: Grid,
) -> Result<MourreProbeReport, SpectralError> {
    if let Some(r) = big_r {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(SpectralError::Precondition(format!("R = {r} must be at least 1")));
        }
    }
    let kappa = crate::radial::threshold(spec);
    let (lo, hi) = window;
    if !(lo > kappa && hi > lo) {
        return Err(SpectralError::Precondition(format!("window [{lo}, {hi}] must lie above κ = {kappa}")));
    }
    let op = zero_mode(spec, potential, grid)?;
    let n = op.dim();
    let mut warnings = op.warnings.clone();

    let mut dense = DMatrix::zeros(n, n);
    for i in 0..n {
        dense[(i, i)] = op.diag[i];
        if i + 1 < n {
            dense[(i, i + 1)] = op.offdiag[i];
            dense[(i + 1, i)] = op.offdiag[i];
        }
    }
    let eig = dense.symmetric_eigen();
    let mut inside: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] >= lo && eig.eigenvalues[i] <= hi).collect();
    inside.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if inside.is_empty() {
        return Err(SpectralError::Precondition("no eigenvalues of the truncated operator in the window".into()));
    }
    let levels: Vec<f64> = inside.iter().map(|&i| eig.eigenvalues[i]).collect();
    if levels.len() >= 2 {
        let spacing = (levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64;
        let near_edge = eig.eigenvalues.iter().any(|&l| (l - lo).abs() < 0.1 * spacing || (l - hi).abs() < 0.1 * spacing);
        if near_edge {
            warnings.push("window edge cuts through an eigenvalue cluster".into());
        }
    }

    // commutator of the operator continued one node past the wall, compressed to the box
    let ext_grid = Grid { cells: grid.cells + 1, ..grid };
    let ext = assemble(spec, 0.0, ext_grid, &Perturbation::None)?;
    let a = conjugate_matrix(&ext_grid, big_r);
    let (k_ext, symmetry_defect) = commutator_matrix(&ext.diag, &ext.offdiag, &a);
    let k = k_ext.view((0, 0), (n, n)).into_owned();

    let psi = DMatrix::from_columns(&inside.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<DVector<f64>>>());
    let projected = psi.transpose() * &k * &psi;
    let proj_eig = projected.symmetric_eigen();
    let directions = &psi * &proj_eig.eigenvectors;
    let boundary = far_start(grid.r0) + LOCALIZATION_MARGIN;
    let near_nodes: Vec<usize> = (0..n).filter(|&i| grid.node(i) <= boundary).collect();
    let near_mass = |c: usize| near_nodes.iter().map(|&i| directions[(i, c)].powi(2)).sum::<f64>();

    let m = inside.len();
    let min_projected_eigenvalue = proj_eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mut far_floor = f64::INFINITY;
    let (mut neg_count, mut neg_near) = (0usize, 0.0);
    for c in 0..m {
        let value = proj_eig.eigenvalues[c];
        let mass = near_mass(c);
        if mass <= 0.5 {
            far_floor = far_floor.min(value);
        }
        if value < 0.0 {
            neg_count += 1;
            neg_near += mass;
        }
    }
    if !far_floor.is_finite() {
        warnings.push("every window direction is concentrated near the cusp boundary".into());
        far_floor = min_projected_eigenvalue;
    }
    let localization_fraction = if neg_count == 0 { 1.0 } else { (neg_near / neg_count as f64).clamp(0.0, 1.0) };
    Ok(MourreProbeReport {
        r: big_r,
        window,
        window_dimension: m,
        min_projected_eigenvalue,
        far_floor,
        localization_fraction,
        negative_directions: neg_count,
        epsilon_r: 4.0 * lo - far_floor,
        symmetry_defect,
        warnings,
    })
}
