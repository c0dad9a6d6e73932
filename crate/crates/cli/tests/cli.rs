use std::fs;
use std::path::Path;

use cusp_cli::{main_with_args, CliError, EXAMPLES, EXIT_INVALID, EXIT_NUMERICAL, EXIT_USAGE};
use cusp_spectra::config::parse_config;
use cusp_spectra::error::{SpectralError, TopologyError};
use serde_json::Value;

fn example(dir: &Path, name: &str) -> String {
    let text = EXAMPLES.iter().find(|(n, _)| *n == name).unwrap().1;
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> i32 {
    let mut all = vec!["cusp-spectra"];
    all.extend_from_slice(args);
    main_with_args(all)
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(run(&["classify"]), EXIT_USAGE);
    assert_eq!(run(&["classify", "--config", "x.cfg", "--format", "xml"]), EXIT_USAGE);
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "n = 2\np = 1\nx0 = 1\n[end.b]\nkind = circle\nlength = 2pi\nflux = [1/2, 0]\n").unwrap();
    assert_eq!(run(&["classify", "--config", bad.to_str().unwrap(), "--out", out]), EXIT_INVALID);
    let missing = dir.path().join("missing.cfg");
    assert_eq!(run(&["classify", "--config", missing.to_str().unwrap(), "--out", out]), EXIT_INVALID);
    let cfg = example(dir.path(), "trap_p1.cfg");
    assert_eq!(run(&["weyl", "--config", &cfg, "--out", out, "--tol=-1"]), EXIT_INVALID);
    let free = example(dir.path(), "threshold_free.cfg");
    assert_eq!(run(&["weyl", "--config", &free, "--out", out, "--no-cache"]), EXIT_INVALID);
}

#[test]
fn numerical_failures_exit_three() {
    assert_eq!(CliError::from(SpectralError::NoConvergence("x".into())).exit_code(), EXIT_NUMERICAL);
    assert_eq!(CliError::from(TopologyError::Overflow).exit_code(), EXIT_NUMERICAL);
    assert_eq!(CliError::from(SpectralError::NonTrapping).exit_code(), EXIT_INVALID);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example(dir.path(), "trap_p1.cfg");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&["weyl", "--config", &cfg, "--out", a.to_str().unwrap(), "--format", "both", "--no-cache"]), 0);
    assert_eq!(
        run(&["weyl", "--config", &cfg, "--out", b.to_str().unwrap(), "--format", "both", "--no-cache", "--threads", "1"]),
        0
    );
    for f in ["weyl.json", "weyl.csv", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn cache_hit_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example(dir.path(), "trap_p_third.cfg");
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    assert_eq!(run(&["zeta", "--config", &cfg, "--out", out_s]), 0);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cache"], "miss");
    let fresh = fs::read(out.join("zeta.json")).unwrap();
    assert_eq!(run(&["zeta", "--config", &cfg, "--out", out_s]), 0);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cache"], "hit");
    assert_eq!(fs::read(out.join("zeta.json")).unwrap(), fresh);

    // an override changes the key
    assert_eq!(run(&["zeta", "--config", &cfg, "--out", out_s, "--tol", "1e-8"]), 0);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cache"], "miss");

    // entries from another schema are ignored
    let key = manifest["cache_key"].as_str().unwrap();
    let entry = out.join(".cache").join(format!("{key}.json"));
    let stale = fs::read_to_string(&entry).unwrap().replace("\"schema_version\":\"1\"", "\"schema_version\":\"0\"");
    fs::write(&entry, stale).unwrap();
    assert_eq!(run(&["zeta", "--config", &cfg, "--out", out_s, "--tol", "1e-8"]), 0);
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cache"], "miss");
}

#[test]
fn json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = example(dir.path(), "torus_cusp.cfg");
    let out = dir.path().join("out");
    assert_eq!(run(&["modes", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "both"]), 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("modes.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], "1");
    let mut from_json = Vec::new();
    for end in report["result"]["ends"].as_array().unwrap() {
        for pair in end["modes"].as_array().unwrap() {
            from_json.push((end["label"].as_str().unwrap().to_string(), pair[0].as_f64().unwrap(), pair[1].as_u64().unwrap()));
        }
    }
    let csv = fs::read_to_string(out.join("modes.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("label,mu,multiplicity"));
    let from_csv: Vec<_> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse::<f64>().unwrap(), f[2].parse::<u64>().unwrap())
        })
        .collect();
    assert!(!from_json.is_empty());
    assert_eq!(from_json, from_csv);
}

#[test]
fn classify_reports_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    for (name, trapping) in [("one_cusp_half.cfg", true), ("one_cusp_integral.cfg", false)] {
        let cfg = example(dir.path(), name);
        assert_eq!(run(&["classify", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
        let report: Value = serde_json::from_str(&fs::read_to_string(out.join("classify.json")).unwrap()).unwrap();
        assert_eq!(report["result"]["verdict"]["trapping"], trapping, "{name}");
    }
}

#[test]
fn examples_are_written_and_parse() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["examples", "--out", dir.path().to_str().unwrap()]), 0);
    for (name, _) in EXAMPLES {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        parse_config(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
