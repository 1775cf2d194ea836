use std::fs;
use std::path::Path;

use spinbus_cli::main_with_args;
use spinbus_core::{validate_schedule, Schedule};

fn run(args: &[&str]) -> i32 {
    let mut v = vec!["spinbus"];
    v.extend_from_slice(args);
    main_with_args(v)
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn compile_all_strategies_writes_parsable_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["compile", "--gen", "ghz", "--n", "16", "--strategy", "all", "--placement", "spectral", "--out", out]), 0);
    for st in ["baseline", "parallel", "min_return", "tunable_velocity", "swap_return"] {
        let text = fs::read_to_string(dir.path().join(format!("ghz_{st}.schedule.json"))).unwrap();
        let s = Schedule::from_json(&text).unwrap();
        assert!(validate_schedule(&s).is_empty(), "{st}");
    }
    let (header, rows) = csv_rows(&dir.path().join("ghz_report.csv"));
    assert_eq!(header.join(","), "strategy,total_time_ns,mean_dC,std_dC,n_shuttles,total_distance_um");
    assert_eq!(rows.len(), 5);
    let (header, rows) = csv_rows(&dir.path().join("ghz_compare.csv"));
    assert_eq!(header.join(","), "strategy,time_ratio,error_ratio");
    assert_eq!(rows[0][1], "1.0");
    let _: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ghz_report.json")).unwrap()).unwrap();
}

#[test]
fn invalid_qasm_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.qasm");
    fs::write(&f, "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    assert_eq!(run(&["compile", "--input", f.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]), 1);
}

#[test]
fn qasm_input_compiles() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bell.qasm");
    fs::write(&f, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[3];\nh q[0];\ncx q[0],q[2];\nmeasure q -> c;\n").unwrap();
    let out = dir.path().join("o");
    assert_eq!(run(&["compile", "--input", f.to_str().unwrap(), "--strategy", "min_return", "--out", out.to_str().unwrap()]), 0);
    assert!(out.join("bell_min_return.schedule.json").exists());
    assert!(!out.join("bell_baseline.schedule.json").exists());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["compile", "--gen", "nope", "--out", out]), 2);
    assert_eq!(run(&["compile", "--out", out]), 2);
    assert_eq!(run(&["compile", "--gen", "ghz", "--strategy", "fastest", "--out", out]), 2);
    assert_eq!(run(&["compile", "--gen", "ghz", "--placement", "random", "--runs", "0", "--out", out]), 2);
    assert_eq!(run(&["compile", "--input", "/nonexistent.qasm", "--out", out]), 2);
    let arch = dir.path().join("arch.json");
    fs::write(&arch, r#"{"n_sites": 4, "site_pitch_um": -2}"#).unwrap();
    assert_eq!(run(&["compile", "--gen", "ghz", "--arch-config", arch.to_str().unwrap(), "--out", out]), 2);
    assert_eq!(run(&["frobnicate"]), 2);
}

#[test]
fn random_placement_runs_are_aggregated() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["compile", "--gen", "qaoa", "--n", "8", "--placement", "random", "--runs", "10", "--seed", "4", "--out", out]), 0);
    for s in 4..14 {
        assert!(dir.path().join(format!("qaoa_seed{s}_report.csv")).exists());
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        serde_json::json!({
            "gen": "dj",
            "n": 6,
            "strategy": "parallel",
            "format": ["csv"],
            "out": out,
            "arch": {"n_sites": 6, "site_pitch_um": 2.0, "zone_offset_um": 1.0, "velocity_mps": 20.0, "t_1q_ns": 20.0, "t_2q_ns": 45.0},
            "error": {"l_c_nm": 100.0, "t2_star_us": 20.0, "l_dot_nm": 20.0, "e_vs0_uev": 100.0, "d_bar_nm": 30.0, "a_x_pi_per_nm": 0.05}
        })
        .to_string(),
    )
    .unwrap();
    assert_eq!(run(&["compile", "--config", cfg.to_str().unwrap(), "--strategy", "baseline"]), 0);
    let (_, rows) = csv_rows(&out.join("dj_report.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "baseline");
    assert!(!out.join("dj_baseline.schedule.json").exists());

    fs::write(&cfg, r#"{"gen": "dj", "colour": "red"}"#).unwrap();
    assert_eq!(run(&["compile", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn bench_and_sweep_emit_contract_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(&["bench", "--n", "6", "--runs", "2", "--families", "ghz,qft", "--out", out]), 0);
    let (header, rows) = csv_rows(&dir.path().join("bench.csv"));
    assert_eq!(header.join(","), "family,strategy,placement,seed,total_time_ns,mean_dC,std_dC");
    assert_eq!(rows.len(), 2 * 5 * 3);
    assert!(dir.path().join("bench_summary.csv").exists());

    assert_eq!(run(&["sweep", "--sizes", "10,11,12", "--families", "graph_state", "--runs", "2", "--out", out]), 0);
    let (header, rows) = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(header.join(","), "family,n,depth,strategy,time_ratio,error_ratio");
    assert_eq!(rows.len(), 3 * 5);
    for row in &rows {
        row[4].parse::<f64>().unwrap();
        row[5].parse::<f64>().unwrap();
    }
}

#[test]
fn sweep_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(run(&["sweep", "--sizes", "8,9", "--families", "random,qaoa", "--runs", "3", "--seed", "9", "--out", d.path().to_str().unwrap()]), 0);
    }
    assert_eq!(fs::read(a.path().join("sweep.csv")).unwrap(), fs::read(b.path().join("sweep.csv")).unwrap());
    assert_eq!(fs::read(a.path().join("sweep.json")).unwrap(), fs::read(b.path().join("sweep.json")).unwrap());
}
