use std::path::Path;
use std::process::{Command, Output};

use sqw_cli::RunSpec;

fn sqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqw")).args(args).env_remove("SQW_OUT_DIR").output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = sqw(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Header and rows of a CSV with `#` metadata lines.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<String> {
    let (header, rows) = parse_csv(text);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.into_iter().map(|r| r[i].clone()).collect()
}

fn reals(text: &str, name: &str) -> Vec<f64> {
    column(text, name).iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn evolve_has_expected_shape() {
    let text = stdout(&["evolve", "--n", "100", "--v", "2", "--phi", "pi", "--steps", "20"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["step", "p_success", "c_r", "c_l", "c_r_norm", "c_l_norm"]);
    assert_eq!(rows.len(), 21);
    assert_eq!(reals(&text, "c_r_norm")[0], 1.0);
    assert_eq!(reals(&text, "c_l")[0], 9899.0);
}

#[test]
fn full_mode_matches_reduced() {
    let reduced = stdout(&["evolve", "--n", "100", "--v", "2", "--phi", "pi", "--steps", "20"]);
    let full = stdout(&["evolve", "--n", "100", "--v", "2", "--phi", "pi", "--mode", "full", "--steps", "20"]);
    for (a, b) in reals(&reduced, "p_success").iter().zip(reals(&full, "p_success")) {
        assert!((a - b).abs() <= 1e-10);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["evolve", "--n", "100000", "--v", "2", "--mode", "full"][..],
        &["evolve", "--n", "2"],
        &["evolve", "--v", "100"],
        &["evolve", "--phi", "tau"],
        &["evolve", "--mode", "sideways"],
        &["evolve", "--steps", "0"],
        &["sweep-phase", "--phases", "1"],
        &["incoherent", "--n-list", "5000", "--v-list", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(sqw(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn memory_cap_is_configurable() {
    let args = ["evolve", "--n", "20", "--mode", "full", "--steps", "3"];
    assert!(sqw(&args).status.success());
    let mut capped = args.to_vec();
    capped.extend(["--memory-cap", "379"]);
    let out = sqw(&capped);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory cap"));
}

#[test]
fn phase_forms_agree() {
    let a = stdout(&["evolve", "--n", "30", "--phi", "pi/2", "--steps", "5"]);
    let b = stdout(&["evolve", "--n", "30", "--phi", "1.5707963267948966", "--steps", "5"]);
    assert_eq!(column(&a, "p_success"), column(&b, "p_success"));
    let neg = stdout(&["evolve", "--n", "30", "--phi", "-pi/2", "--steps", "5"]);
    let conj = stdout(&["evolve", "--n", "30", "--phi", "3pi/2", "--steps", "5"]);
    assert_eq!(column(&neg, "p_success"), column(&conj, "p_success"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out =
            sqw(&["sweep-phase", "--phases", "9", "--trials", "2000", "--seed", "5", "--threads", threads, "--out", p]);
        assert!(out.status.success());
        std::fs::read(&path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    assert_eq!(a, b);
}

#[test]
fn seed_changes_only_monte_carlo_columns() {
    let a = stdout(&["sweep-phase", "--phases", "5", "--trials", "500", "--seed", "1"]);
    let b = stdout(&["sweep-phase", "--phases", "5", "--trials", "500", "--seed", "2"]);
    assert_eq!(column(&a, "avg_queries"), column(&b, "avg_queries"));
    assert_ne!(column(&a, "blind_mc"), column(&b, "blind_mc"));
}

fn assert_replays(path: &Path) {
    let original = std::fs::read_to_string(path).unwrap();
    let spec = RunSpec::from_output(&original).unwrap();
    let regenerated = sqw_cli::execute(&spec).unwrap().render(&spec);
    assert_eq!(regenerated, original, "{}", path.display());
    let check = sqw(&["replay", path.to_str().unwrap(), "--check"]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn metadata_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 6] = [
        &["evolve", "--n", "40", "--v", "3", "--phi", "2pi/3", "--steps", "12"],
        &["evolve", "--n", "12", "--mode", "full", "--format", "json"],
        &["sweep-phase", "--n", "30", "--phases", "4", "--trials", "300", "--seed", "9"],
        &["sweep-phase", "--n", "30", "--phases", "3", "--surface", "--m-max", "10"],
        &["queries", "--n", "50", "--v", "1", "--phi", "0.7"],
        &["incoherent", "--n-list", "10,12", "--v-list", "1,3", "--n-max", "8", "--phi", "pi/4"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("run{i}.out"));
        let mut full = args.to_vec();
        full.extend(["--out", path.to_str().unwrap()]);
        assert!(sqw(&full).status.success(), "{args:?}");
        assert_replays(&path);
    }
}

#[test]
fn replay_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    assert!(sqw(&["evolve", "--n", "20", "--steps", "4", "--out", path.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&path).unwrap().replacen("\n1,", "\n1,9", 1);
    std::fs::write(&path, text).unwrap();
    assert_eq!(sqw(&["replay", path.to_str().unwrap(), "--check"]).status.code(), Some(1));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sqw"))
        .args(["queries", "--n", "30"])
        .env("SQW_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(dir.path().join("queries_n30_v2.csv").exists());
}

#[test]
fn json_mirrors_columns() {
    let text = stdout(&["evolve", "--n", "30", "--steps", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let columns: Vec<&str> = doc["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, columns);
    assert_eq!(doc["runspec"]["command"], "evolve");
}

#[test]
fn sweep_columns_and_baselines() {
    let text = stdout(&["sweep-phase", "--trials", "1000"]);
    let (header, rows) = parse_csv(&text);
    assert_eq!(
        &header[..9],
        ["phi", "max_p", "step_at_max", "min_c_r_norm", "min_c_l_norm", "best_m", "avg_queries", "blind", "memory"]
    );
    assert_eq!(rows.len(), 25);
    assert!(reals(&text, "blind").iter().all(|&b| b == 50.0));
    assert!(*reals(&text, "max_p").last().unwrap() >= 0.95);
    let q0 = reals(&text, "avg_queries")[0];
    assert!((q0 - 50.0).abs() <= 5.0, "{q0}");
}

#[test]
fn incoherent_identities_in_output() {
    let text = stdout(&["incoherent", "--n-list", "100", "--v-list", "2", "--n-max", "30"]);
    let stat = column(&text, "stat");
    let point_rows = stat.iter().filter(|s| s.is_empty()).count();
    assert_eq!(point_rows, 31);
    let p_mm = reals(&text, "p_mm");
    assert!(p_mm.iter().all(|p| (p - 1.0).abs() <= 1e-12));
    let p_in = reals(&text, "p_in");
    let p_out = reals(&text, "p_out");
    for n in 0..30 {
        assert!((p_out[n] - p_in[n + 1]).abs() <= 1e-12);
    }
    let total = &reals(&text, "p_total")[..31];
    assert!(total.iter().all(|t| (t - total[0]).abs() <= 0.05));
}

#[test]
fn validate_reports_json() {
    let out = sqw(&["validate", "--quick"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.len() >= 9);
    assert!(rows.iter().all(|r| r["passed"] == true));
}
