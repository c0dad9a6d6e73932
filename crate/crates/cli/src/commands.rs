//! One function per subcommand: configuration in, report body and table out.

use rayon::prelude::*;
use serde_json::{json, Value};

use cusp_spectra::analysis::threshold::DEFAULT_SPACING;
use cusp_spectra::analysis::weyl::predicted_count;
use cusp_spectra::analysis::{
    coupling_scan, holder_probe, mourre_probe, threshold_estimate, weyl_constants, weyl_fit, CouplingOptions, HolderOptions,
};
use cusp_spectra::config::Config;
use cusp_spectra::radial::counting::{contributing_modes, mode_grid};
use cusp_spectra::radial::{assemble, counting_samples, eigenvalues_below, CountingOptions, Grid, GridPolicy, Perturbation, RadialPotential};
use cusp_spectra::topology::{
    classify_field, classify_potential, coupling_group, surface_gauge_options, three_manifold_gauge, Subgroup,
};
use cusp_spectra::transverse::{kernel_dimension, mode_spectrum, spectral_zeta};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Modes,
    Spectrum,
    Weyl,
    Threshold,
    ScanCoupling,
    Mourre,
    Holder,
    Zeta,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Classify,
        Command::Modes,
        Command::Spectrum,
        Command::Weyl,
        Command::Threshold,
        Command::ScanCoupling,
        Command::Mourre,
        Command::Holder,
        Command::Zeta,
    ];

    pub fn from_name(name: &str) -> Option<Command> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Modes => "modes",
            Command::Spectrum => "spectrum",
            Command::Weyl => "weyl",
            Command::Threshold => "threshold",
            Command::ScanCoupling => "scan-coupling",
            Command::Mourre => "mourre",
            Command::Holder => "holder",
            Command::Zeta => "zeta",
        }
    }
}

/// Report body plus the rows of its CSV rendering.
pub struct Output {
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub warnings: Vec<String>,
}

fn subgroup(g: &Subgroup) -> String {
    match g {
        Subgroup::AllReals => "R".into(),
        Subgroup::Cyclic(q) => format!("{q}Z"),
    }
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k < 2 {
        return vec![hi];
    }
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn policy(cfg: &Config) -> GridPolicy {
    GridPolicy { h: cfg.numerics.h, r_max: cfg.numerics.r_max }
}

fn window(cfg: &Config) -> Result<(f64, f64), CliError> {
    cfg.numerics.window.ok_or_else(|| CliError::Config("numerics.window: missing".into()))
}

pub fn execute(command: Command, cfg: &Config) -> Result<Output, CliError> {
    match command {
        Command::Classify => classify(cfg),
        Command::Modes => modes(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Weyl => weyl(cfg),
        Command::Threshold => threshold(cfg),
        Command::ScanCoupling => scan(cfg),
        Command::Mourre => mourre(cfg),
        Command::Holder => holder(cfg),
        Command::Zeta => zeta(cfg),
    }
}

fn classify(cfg: &Config) -> Result<Output, CliError> {
    let verdict = classify_potential(&cfg.spec, &cfg.potential);
    let mut result = json!({
        "verdict": verdict,
        "kernel_dimension": kernel_dimension(&cfg.spec, &cfg.potential),
    });
    let mut warnings = Vec::new();
    if let Some(s) = &cfg.surface {
        result["surface"] = serde_json::to_value(surface_gauge_options(s.cusps, s.orientable, s.b_class)?).unwrap();
    }
    if let Some(c) = &cfg.cohomology {
        let g = three_manifold_gauge(&c.presentation, &c.b)?;
        result["three_manifold"] = json!({
            "non_trapping_exists": g.non_trapping_exists,
            "q": g.q,
            "generators": g.generators.iter().map(subgroup).collect::<Vec<_>>(),
        });
    }
    if let Some(f) = &cfg.field {
        match classify_field(f) {
            Ok(t) => {
                result["field"] = json!({
                    "verdict": t,
                    "coupling_group": coupling_group(f).members.iter().map(|m| json!({"label": m.label, "group": subgroup(&m.group)})).collect::<Vec<_>>(),
                })
            }
            Err(e) => warnings.push(format!("field: {e}")),
        }
    }
    let rows = verdict
        .components
        .iter()
        .map(|c| vec![json!(c.label), serde_json::to_value(c.verdict).unwrap(), json!(c.reason.as_str())])
        .collect();
    Ok(Output { result, header: vec!["label", "verdict", "reason"], rows, warnings })
}

fn modes(cfg: &Config) -> Result<Output, CliError> {
    let mut spectra = Vec::new();
    let mut rows = Vec::new();
    for (end, pot) in cfg.spec.ends.iter().zip(&cfg.potential.ends) {
        let s = mode_spectrum(end, &pot.flux, cfg.numerics.mu_max)?;
        for e in &s.entries {
            rows.push(vec![json!(s.label), json!(e.mu), json!(e.multiplicity)]);
        }
        spectra.push(json!({
            "label": s.label,
            "flux": s.flux.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "modes": s.pairs(),
        }));
    }
    Ok(Output { result: json!({"mu_max": cfg.numerics.mu_max, "ends": spectra}), header: vec!["label", "mu", "multiplicity"], rows, warnings: vec![] })
}

fn spectrum(cfg: &Config) -> Result<Output, CliError> {
    let lambda_max = cfg.numerics.lambda_max;
    let grid = policy(cfg).grid(&cfg.spec, lambda_max)?;
    let modes = contributing_modes(&cfg.spec, &cfg.potential, lambda_max, &grid, cfg.numerics.continuum)?;
    let pot = RadialPotential::new(&cfg.spec)?;
    let v_min = pot.v_min(grid.r0, grid.r_max());
    let solved = modes
        .par_iter()
        .map(|&(mu, mult)| {
            let g = mode_grid(&pot, &grid, mu, lambda_max, v_min, true);
            let op = assemble(&cfg.spec, mu, g, &Perturbation::None)?;
            Ok((mu, mult, eigenvalues_below(&op, lambda_max, cfg.numerics.tol), op.warnings))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut rows = Vec::new();
    let mut per_mode = Vec::new();
    let mut warnings = Vec::new();
    for (mu, mult, eigs, w) in solved {
        warnings.extend(w);
        for (j, e) in eigs.iter().enumerate() {
            rows.push(vec![json!(mu), json!(mult), json!(j), json!(e)]);
        }
        per_mode.push(json!({"mu": mu, "multiplicity": mult, "eigenvalues": eigs}));
    }
    warnings.sort();
    warnings.dedup();
    Ok(Output {
        result: json!({"lambda_max": lambda_max, "grid": grid, "modes": per_mode}),
        header: vec!["mu", "multiplicity", "index", "eigenvalue"],
        rows,
        warnings,
    })
}

fn weyl(cfg: &Config) -> Result<Output, CliError> {
    let nm = &cfg.numerics;
    let prediction = weyl_constants(&cfg.spec, &cfg.potential, nm.tol)?;
    let lambdas = linspace(nm.lambda_min, nm.lambda_max, nm.samples);
    let opts = CountingOptions { policy: policy(cfg), continuum: nm.continuum, ..CountingOptions::default() };
    let counts = counting_samples(&cfg.spec, &cfg.potential, &lambdas, &opts)?;
    let samples: Vec<(f64, f64)> = lambdas.iter().zip(&counts.counts).map(|(l, n)| (*l, *n as f64)).collect();
    let fit = weyl_fit(&samples, &prediction)?;
    let rows = samples.iter().map(|(l, n)| vec![json!(l), json!(*n as u64), json!(predicted_count(&prediction, *l))]).collect();
    Ok(Output {
        warnings: fit.warnings.clone(),
        result: json!({"prediction": prediction, "fit": fit, "grid": counts.grid, "modes": counts.modes}),
        header: vec!["lambda", "N", "prediction"],
        rows,
    })
}

fn threshold(cfg: &Config) -> Result<Output, CliError> {
    let nm = &cfg.numerics;
    let est = threshold_estimate(&cfg.spec, &cfg.potential, &nm.schedule, nm.h.unwrap_or(DEFAULT_SPACING))?;
    let rows = est.schedule.iter().zip(&est.ground_states).map(|(l, g)| vec![json!(l), json!(g)]).collect();
    Ok(Output { result: serde_json::to_value(&est).unwrap(), header: vec!["length", "ground_state"], rows, warnings: vec![] })
}

fn scan(cfg: &Config) -> Result<Output, CliError> {
    if cfg.numerics.g_grid.is_empty() {
        return Err(CliError::Config("numerics.g_grid: empty".into()));
    }
    let base = cfg.potential.ends.first().map(|e| e.flux.clone()).unwrap_or_default();
    let mut opts = CouplingOptions::for_spec(&cfg.spec);
    if let Some(l) = cfg.numerics.lambda_star {
        opts.lambda_star = l;
    }
    if let Some(h) = cfg.numerics.h {
        opts.h = h;
    }
    let scan = coupling_scan(&cfg.spec, &base, &cfg.numerics.g_grid, &opts)?;
    let rows = scan
        .rows
        .iter()
        .map(|r| vec![json!(r.g), json!(r.trapping), json!(r.zero_mode), json!(r.ground_state), json!(r.spacing), json!(r.spacing_doubled), json!(r.spacing_ratio)])
        .collect();
    Ok(Output {
        result: json!({"options": opts, "scan": scan}),
        header: vec!["g", "trapping", "zero_mode", "ground_state", "spacing", "spacing_doubled", "spacing_ratio"],
        rows,
        warnings: vec![],
    })
}

fn mourre(cfg: &Config) -> Result<Output, CliError> {
    let nm = &cfg.numerics;
    let j = window(cfg)?;
    let r0 = cfg.spec.r0();
    let grid = Grid::covering(r0, nm.r_max.unwrap_or(r0 + nm.mourre_length), nm.mourre_h)?;
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for &big_r in &nm.mourre_r {
        let rep = mourre_probe(&cfg.spec, &cfg.potential, big_r, j, grid)?;
        warnings.extend(rep.warnings.iter().map(|w| format!("R = {}: {w}", big_r.map_or("inf".into(), |r| r.to_string()))));
        reports.push(rep);
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.r.map_or(json!("inf"), |v| json!(v)),
                json!(r.window_dimension),
                json!(r.min_projected_eigenvalue),
                json!(r.far_floor),
                json!(r.localization_fraction),
                json!(r.epsilon_r),
                json!(r.symmetry_defect),
            ]
        })
        .collect();
    Ok(Output {
        result: json!({"grid": grid, "reports": reports}),
        header: vec!["R", "window_dimension", "min_projected", "far_floor", "localization", "epsilon_R", "symmetry_defect"],
        rows,
        warnings,
    })
}

fn holder(cfg: &Config) -> Result<Output, CliError> {
    let nm = &cfg.numerics;
    let opts = HolderOptions { lengths: nm.holder_lengths.clone(), h: nm.h.unwrap_or(HolderOptions::default().h), ..HolderOptions::default() };
    let rep = holder_probe(&cfg.spec, &cfg.potential, nm.s_weight, window(cfg)?, &nm.z_samples, &opts)?;
    let mut rows = Vec::new();
    for run in &rep.runs {
        for (dz, norm) in &run.pairs {
            rows.push(vec![json!(run.length), json!(run.eta), json!(dz), json!(norm)]);
        }
    }
    let mut warnings = Vec::new();
    if !rep.bound_states.is_empty() {
        warnings.push(format!("levels {:?} persist across truncations next to the samples", rep.bound_states));
    }
    Ok(Output { result: serde_json::to_value(&rep).unwrap(), header: vec!["length", "eta", "dz", "norm_difference"], rows, warnings })
}

fn zeta(cfg: &Config) -> Result<Output, CliError> {
    let s = match cfg.numerics.zeta_s {
        Some(s) => s,
        None => {
            let p = cfg.spec.p_f64();
            if p >= 1.0 {
                return Err(CliError::Config("numerics.zeta_s: required unless p < 1".into()));
            }
            (1.0 / p - 1.0) / 2.0
        }
    };
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for (end, pot) in cfg.spec.ends.iter().zip(&cfg.potential.ends) {
        let z = spectral_zeta(end, &pot.flux, s, cfg.numerics.tol)?;
        rows.push(vec![json!(end.label), json!(s), json!(z.value), json!(z.error_bound)]);
        values.push(json!({"label": end.label, "zeta": z}));
    }
    Ok(Output { result: json!({"s": s, "ends": values}), header: vec!["label", "s", "value", "error_bound"], rows, warnings: vec![] })
}
