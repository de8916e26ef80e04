//! End-to-end tests against the compiled binary: exit codes, JSON schemas,
//! cache behavior, and config precedence.

use std::path::Path;
use std::process::{Command, Output};

fn mgw() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mgw"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    mgw()
        .args(args)
        .current_dir(dir)
        .env_remove("MGW_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["kl", "--type", "A1", "--bogus-flag"], dir.path());
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_is_not_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_type_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["rootdata", "--type", "Z9"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn rootdata_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["rootdata", "--type", "A2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["type"], "A2");
    assert_eq!(v["rank"], 2);
    assert_eq!(v["coxeter_number"], 3);
    assert_eq!(v["cartan"], serde_json::json!([[2, -1], [-1, 2]]));
    assert_eq!(v["rho"], serde_json::json!([1, 1]));
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 3);
    assert!(v["schema_version"].is_number());
}

#[test]
fn kl_trivial_table() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let out = run(
        &["kl", "--type", "A1", "--max-length", "0", "--cache-dir", cache.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["entries"], serde_json::json!([{"w": "e", "x": "e", "h": [[0, 1]]}]));
}

#[test]
fn kl_cache_hit_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let args = [
        "kl", "--type", "A1", "--max-length", "4", "--cache-dir", cache.to_str().unwrap(),
    ];
    let cold = run(&args, dir.path());
    assert_eq!(cold.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cold.stderr).contains("miss"));
    let warm = run(&args, dir.path());
    assert_eq!(warm.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&warm.stderr).contains("hit"));
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn cache_dir_precedence() {
    let dir = tempfile::tempdir().unwrap();
    // default
    let out = run(&["cache", "dir"], dir.path());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), ".mgw-cache");
    // env overrides default
    let out = mgw()
        .args(["cache", "dir"])
        .current_dir(dir.path())
        .env("MGW_CACHE", "/tmp/envcache")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "/tmp/envcache");
    // config overrides env
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "cache_dir = \"/tmp/cfgcache\"\n").unwrap();
    let out = mgw()
        .args(["cache", "dir", "--config", cfg.to_str().unwrap()])
        .current_dir(dir.path())
        .env("MGW_CACHE", "/tmp/envcache")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "/tmp/cfgcache");
    // flag overrides config
    let out = mgw()
        .args([
            "cache", "dir", "--config", cfg.to_str().unwrap(), "--cache-dir", "/tmp/flagcache",
        ])
        .current_dir(dir.path())
        .env("MGW_CACHE", "/tmp/envcache")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "/tmp/flagcache");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "type = \"A1\"\nmax_length = 2\n").unwrap();
    let cache = dir.path().join("c");
    let out = run(
        &["kl", "--config", cfg.to_str().unwrap(), "--cache-dir", cache.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["type"], "A1");
    assert_eq!(v["max_length"], 2);
    // a flag overrides the config value
    let out = run(
        &[
            "kl", "--config", cfg.to_str().unwrap(), "--max-length", "1", "--cache-dir",
            cache.to_str().unwrap(),
        ],
        dir.path(),
    );
    let v = stdout_json(&out);
    assert_eq!(v["max_length"], 1);
}

#[test]
fn periodic_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["periodic", "--type", "A1", "--radius", "3", "--verify", "inversion,kato,h-eq-p"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["pass"], true, "check {} failed", c["name"]);
    }
}

#[test]
fn chars_weyl_is_sorted_and_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["chars", "--type", "A1", "--p", "3", "--weyl", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let weights: Vec<i64> = v["weyl"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["weight"][0].as_i64().unwrap())
        .collect();
    assert_eq!(weights, vec![-2, 0, 2]);
}

#[test]
fn chars_rejects_bad_prime() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["chars", "--type", "A2", "--p", "2", "--weyl", "1 1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn graph_emits_dot_and_gkm() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = run(
        &[
            "graph", "--type", "A2", "--upto", "s0 s1", "--field", "Fp:5", "--dot",
            dot.to_str().unwrap(), "--gkm",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph"));
    let v = stdout_json(&out);
    assert_eq!(v["gkm"]["pass"], true);
}

#[test]
fn gkm_violation_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["graph", "--type", "A1", "--upto", "s0 s1 s0", "--field", "Fp:2", "--gkm"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["gkm"]["pass"], false);
    assert!(v["gkm"]["witness"].is_object());
}

#[test]
fn bm_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bm.json");
    let out = run(
        &[
            "bm", "--type", "A2", "--w", "s0 s1", "--field", "Q", "--json",
            path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["w"], "s0 s1");
    assert_eq!(v["field"], "Q");
    let stalks = v["stalks"].as_array().unwrap();
    assert_eq!(stalks.len(), 4);
    for s in stalks {
        assert_eq!(s["flagged"], false);
    }
    assert!(v["timings"]["build_ms"].is_number());
}

#[test]
fn verify_momconj_passes_over_q() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "momconj", "--type", "A1", "--max-length", "4", "--field", "Q"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_star_passes_and_fails_correctly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "star", "--type", "A1", "--p", "3", "--w", "e", "--height", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["shells_scanned"].as_u64().unwrap() >= 2);
    // an element outside the restricted box is rejected as a usage error in
    // the library sense: nonzero exit, message on stderr
    let out = run(
        &["verify", "star", "--type", "A1", "--p", "3", "--w", "s0", "--height", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn determinism_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let path = dir.path().join(format!("bm{workers}.json"));
        let out = run(
            &[
                "bm", "--type", "A2", "--w", "s0 s1 s0", "--field", "Q", "--workers", workers,
                "--json", path.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        outputs.push(v);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn cache_clear_removes_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    run(
        &["kl", "--type", "A1", "--max-length", "1", "--cache-dir", cache.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let out = run(&["cache", "clear", "--cache-dir", cache.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 0);
}

#[test]
fn csv_format_for_kl() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let out = run(
        &[
            "kl", "--type", "A1", "--max-length", "1", "--format", "csv", "--cache-dir",
            cache.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("w,x,h\n"));
    assert!(text.contains("e,e,1v^0"));
}

#[test]
fn zero_workers_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["rootdata", "--type", "A1", "--workers", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
