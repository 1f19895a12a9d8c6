//! End-to-end runs of the command-line driver.

use std::f64::consts::PI;
use std::path::Path;

use j1j2_cli::record::{Payload, ResultRecord};
use j1j2_cli::run;

fn run_in(dir: &Path, name: &str, args: &[&str]) -> (i32, std::path::PathBuf) {
    let out = dir.join(name);
    let mut argv = vec!["j1j2".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.to_string_lossy().into_owned());
    (run(argv), out)
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(rows: &[Vec<String>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn ed_reproduces_the_table_ground_level() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_in(dir.path(), "ed.csv", &["ed", "--sites", "4", "--eta", "1", "--b", "1"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["index", "re", "im", "multiplicity"]);
    assert_eq!(rows.len(), 16);
    let min = column(&rows, 1).into_iter().fold(f64::INFINITY, f64::min);
    assert!((min + 100.4304).abs() < 5e-5, "{min}");
    let mult: usize = rows.iter().filter(|r| r[3] == "1").count();
    assert!(mult >= 1);
}

#[test]
fn verify_reports_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_in(dir.path(), "v.csv", &["verify", "--eta", "1", "--b", "1", "--sites", "4"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["check", "residual", "threshold", "pass"]);
    assert_eq!(rows.len(), 5);
    assert!(column(&rows, 1).iter().all(|&r| r < 1e-10));
}

#[test]
fn gap_curve_peaks_at_quarter_points() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_in(dir.path(), "gap.csv", &["gap", "--gamma", "1", "--a-step", "0.01"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["a", "gap", "branch"]);
    let a = column(&rows, 0);
    let g = column(&rows, 1);
    let argmax = |lo: f64, hi: f64| {
        (0..a.len()).filter(|&i| a[i] >= lo && a[i] <= hi).max_by(|&i, &j| g[i].total_cmp(&g[j])).map(|i| a[i]).unwrap()
    };
    assert!((argmax(0.0, PI / 2.0) - PI / 4.0).abs() <= 0.01);
    assert!((argmax(PI / 2.0, PI) - 3.0 * PI / 4.0).abs() <= 0.01);
    assert!(g.iter().all(|&x| x > 0.0));
}

#[test]
fn reality_sweep_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) =
        run_in(dir.path(), "r.json", &["reality-scan", "--eta", "0.8", "--sites", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let rec: ResultRecord = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let Payload::Reality { intervals, failures, .. } = rec.payload else { panic!("wrong payload") };
    assert!(failures.is_empty());
    let ends: Vec<f64> = intervals.iter().flat_map(|&(x, y)| [x, y]).collect();
    let expected = [0.0, 0.4, 1.17, 1.97, 2.74, 3.14];
    assert_eq!(ends.len(), expected.len(), "{intervals:?}");
    for (e, x) in ends.iter().zip(expected) {
        assert!((e - x).abs() <= 0.01 + 1e-9, "{e} vs {x}");
    }
}

#[test]
fn dispersion_rows_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) =
        run_in(dir.path(), "d.csv", &["dispersion", "--gamma", "1", "--a", "1", "--samples", "200"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["u_r", "u_s", "K", "dE"]);
    assert_eq!(rows.len(), 200);
    assert!(column(&rows, 3).iter().all(|&e| e >= 0.0));
}

#[test]
fn bae_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bae", "--sites", "4", "--gamma", "1", "--a", "1", "--seed", "5", "--seeds", "60"];
    let (c1, o1) = run_in(dir.path(), "b1.csv", &args);
    let (c2, o2) = run_in(dir.path(), "b2.csv", &args);
    assert_eq!((c1, c2), (0, 0));
    let (b1, b2) = (std::fs::read(&o1).unwrap(), std::fs::read(&o2).unwrap());
    assert_eq!(b1, b2);
    let (header, rows) = csv_rows(&o1);
    assert_eq!(header, ["solution", "M", "root_index", "re", "im", "residual", "energy_re", "energy_im"]);
    assert!(column(&rows, 5).iter().all(|&r| r < 1e-10));
}

#[test]
fn density_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_in(dir.path(), "rho.json", &["thermo-density", "--eta", "1", "--b", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out).unwrap();
    let rec: ResultRecord = serde_json::from_str(&text).unwrap();
    let again: ResultRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(rec, again);
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&rec).unwrap()), text);
    let Payload::Density { normalization, rows, .. } = rec.payload else { panic!("wrong payload") };
    assert!((normalization - 0.5).abs() < 1e-8);
    assert_eq!(rows.len(), 401);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["gap", "--gamma", "1", "--a-start", "1", "--a-stop", "0"],
        vec!["ed", "--eta", "1"],
        vec!["ed", "--eta", "1", "--b", "1", "--a", "0.5"],
        vec!["ed", "--sites", "5", "--eta", "1", "--b", "1"],
        vec!["thermo-density", "--eta", "0.8", "--a", "0.3"],
        vec!["gap", "--gamma", "-1"],
        vec!["nonsense"],
        vec!["ed", "--bogus-flag"],
    ] {
        let (code, out) = run_in(dir.path(), "x.csv", &args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!out.exists(), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(["j1j2", "--help"]), 0);
}
