//! Weyl constants for the three growth regimes and least-squares fits of counting data.

use std::f64::consts::PI;

use num_traits::One;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::SpectralError;
use crate::model::{end_volume, rational_to_f64, ManifoldSpec, PotentialSpec, Rational, Volume};
use crate::topology::classify_potential;
use crate::transverse::spectral_zeta;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p > 1/n`: `C₁ λ^{n/2}`
    Above,
    /// `p = 1/n`: `C₂ λ^{n/2} log λ`
    Critical,
    /// `p < 1/n`: `C₃ λ^{1/(2p)}`
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Law {
    Power { exponent: f64 },
    PowerLog { exponent: f64 },
}

impl Law {
    pub fn eval(&self, lambda: f64) -> f64 {
        match *self {
            Law::Power { exponent } => lambda.powf(exponent),
            Law::PowerLog { exponent } => lambda.powf(exponent) * lambda.ln(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylPrediction {
    pub regime: Regime,
    pub constant: f64,
    pub law: Law,
    pub total_volume: Option<f64>,
    pub boundary_volume: f64,
    pub zeta: Option<f64>,
    /// Exponent `s` of the lattice sum `Σ μ^{-s}` entering `C₃`.
    pub zeta_exponent: Option<f64>,
}

/// Surface area of the unit sphere `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

pub fn regime(n: usize, p: Rational) -> Regime {
    let np = Rational::from_integer(n as i64) * p;
    if np > Rational::one() {
        Regime::Above
    } else if np == Rational::one() {
        Regime::Critical
    } else {
        Regime::Below
    }
}

/// `Γ((1−p)/(2p)) / (2√π Γ(1/(2p)))`, the phase-space factor of `C₃`.
pub fn below_prefactor(p: f64) -> f64 {
    gamma((1.0 - p) / (2.0 * p)) / (2.0 * PI.sqrt() * gamma(1.0 / (2.0 * p)))
}

pub fn weyl_constants(spec: &ManifoldSpec, potential: &PotentialSpec, zeta_tol: f64) -> Result<WeylPrediction, SpectralError> {
    potential.validate(spec)?;
    if !classify_potential(spec, potential).trapping {
        return Err(SpectralError::NotTrapping);
    }
    let n = spec.n;
    let nf = n as f64;
    let p = spec.p_f64();
    let two_pi_n = (2.0 * PI).powi(n as i32);
    let boundary_volume = spec.boundary_volume();
    match regime(n, spec.p) {
        Regime::Above => {
            let mut total = spec.core_volume.to_f64();
            for i in 0..spec.ends.len() {
                match end_volume(spec, i) {
                    Volume::Finite(v) => total += v,
                    Volume::Infinite => {
                        return Err(SpectralError::Precondition("end volume diverges".into()));
                    }
                }
            }
            Ok(WeylPrediction {
                regime: Regime::Above,
                constant: total * sphere_area(n) / (nf * two_pi_n),
                law: Law::Power { exponent: nf / 2.0 },
                total_volume: Some(total),
                boundary_volume,
                zeta: None,
                zeta_exponent: None,
            })
        }
        Regime::Critical => Ok(WeylPrediction {
            regime: Regime::Critical,
            constant: boundary_volume * sphere_area(n) / (2.0 * two_pi_n),
            law: Law::PowerLog { exponent: nf / 2.0 },
            total_volume: None,
            boundary_volume,
            zeta: None,
            zeta_exponent: None,
        }),
        Regime::Below => {
            // the radial WKB integral pairs μ^{-(1-p)/(2p)} with λ^{1/(2p)}
            let s = (1.0 / p - 1.0) / 2.0;
            let mut zeta = 0.0;
            for (end, pot) in spec.ends.iter().zip(&potential.ends) {
                zeta += spectral_zeta(end, &pot.flux, s, zeta_tol)?.value;
            }
            Ok(WeylPrediction {
                regime: Regime::Below,
                constant: below_prefactor(p) * zeta,
                law: Law::Power { exponent: 1.0 / (2.0 * p) },
                total_volume: None,
                boundary_volume,
                zeta: Some(zeta),
                zeta_exponent: Some(s),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylFit {
    pub fitted_constant: f64,
    pub predicted_constant: f64,
    pub relative_error: f64,
    /// `N / (C_pred · f(λ))` at every sample.
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    /// Change of the fitted ratio across the sampled range, from a regression on `ln λ`.
    pub trend: f64,
    pub warnings: Vec<String>,
}

/// Relative drift of `N / (C f)` over the sample range that triggers a model-mismatch warning.
pub const TREND_LIMIT: f64 = 0.2;

pub fn weyl_fit(samples: &[(f64, f64)], prediction: &WeylPrediction) -> Result<WeylFit, SpectralError> {
    if samples.len() < 5 {
        return Err(SpectralError::Precondition("a Weyl fit needs at least 5 samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || !(samples[0].0 > 0.0) {
        return Err(SpectralError::Precondition("λ samples must be positive and strictly ascending".into()));
    }
    let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
    if hi < 10.0 * lo {
        return Err(SpectralError::Precondition("λ samples must span at least one decade".into()));
    }
    if samples.iter().all(|s| s.1 == samples[0].1) {
        return Err(SpectralError::Precondition("degenerate samples: all counts equal".into()));
    }
    let law = prediction.law;
    let mid = 0.5 * (lo + hi);
    let top: Vec<&(f64, f64)> = samples.iter().filter(|s| s.0 >= mid).collect();
    let num: f64 = top.iter().map(|(l, n)| n * law.eval(*l)).sum();
    let den: f64 = top.iter().map(|(l, _)| law.eval(*l).powi(2)).sum();
    let fitted = num / den;
    let predicted = prediction.constant;
    let ratios: Vec<f64> = samples.iter().map(|(l, n)| n / (predicted * law.eval(*l))).collect();
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;

    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let fitted_ratios: Vec<f64> = samples.iter().map(|(l, n)| n / (fitted * law.eval(*l))).collect();
    let slope = crate::radial::xmodel::slope(&xs, &fitted_ratios);
    let trend = slope * (hi / lo).ln();
    let mut warnings = Vec::new();
    if trend.abs() > TREND_LIMIT {
        warnings.push(format!(
            "model mismatch: N/(C f) drifts by {trend:+.3} across the sampled range; the counts may follow a different law"
        ));
    }
    Ok(WeylFit {
        fitted_constant: fitted,
        predicted_constant: predicted,
        relative_error: (fitted - predicted).abs() / predicted,
        ratios,
        mean_ratio,
        trend,
        warnings,
    })
}

/// `(1-p)/(2p)` as an exact rational, for reports.
pub fn zeta_exponent_exact(p: Rational) -> Rational {
    (Rational::one() / p - Rational::one()) / Rational::from_integer(2)
}

pub fn predicted_count(prediction: &WeylPrediction, lambda: f64) -> f64 {
    prediction.constant * prediction.law.eval(lambda)
}

pub fn p_value(spec: &ManifoldSpec) -> f64 {
    rational_to_f64(&spec.p)
}
