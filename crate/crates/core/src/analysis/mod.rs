//! Weyl constants and fits, threshold estimates, coupling scans, and the
//! Mourre and Hölder probes.

pub mod coupling;
pub mod holder;
pub mod mourre;
pub mod threshold;
pub mod weyl;

use crate::error::SpectralError;
use crate::model::{ManifoldSpec, PotentialSpec};
use crate::transverse::end_modes;

pub use coupling::{coupling_scan, CouplingOptions, CouplingScan};
pub use holder::{holder_probe, HolderOptions, HolderReport};
pub use mourre::{mourre_probe, MourreProbeReport};
pub use threshold::{threshold_estimate, ThresholdEstimate};
pub use weyl::{weyl_constants, weyl_fit, WeylFit, WeylPrediction};

/// Smallest transverse eigenvalue over all ends.
pub fn lowest_mode(spec: &ManifoldSpec, potential: &PotentialSpec) -> Result<f64, SpectralError> {
    let mut best = f64::INFINITY;
    for i in 0..spec.ends.len() {
        let mut cap = 1.0;
        loop {
            if let Some(e) = end_modes(spec, potential, i, cap)?.entries.first() {
                best = best.min(e.mu);
                break;
            }
            cap *= 4.0;
        }
    }
    Ok(best)
}
