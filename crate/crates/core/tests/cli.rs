use std::path::Path;
use std::process::{Command, Output};

use sectordim::{fringe_dimension, Fringe, SectorPlate};

fn sectordim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sectordim")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_plate(dir: &Path, name: &str, plate: &SectorPlate) -> String {
    let path = dir.join(name);
    std::fs::write(&path, plate.to_json()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn dim_reports_known_plates() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_plate(dir.path(), "half.json", &SectorPlate::single_sector(std::f64::consts::PI).unwrap());
    let quarter = write_plate(dir.path(), "q.json", &SectorPlate::single_sector(std::f64::consts::FRAC_PI_2).unwrap());
    let uniform = write_plate(dir.path(), "u.json", &SectorPlate::uniform());
    assert!(stdout(&sectordim(&["dim", &half])).starts_with("D = 3.000000\n"));
    assert!(stdout(&sectordim(&["dim", &quarter])).starts_with("D = 6.000000\n"));
    assert!(stdout(&sectordim(&["dim", &uniform])).starts_with("D = 1.000000\n"));
}

#[test]
fn spectrum_csv_has_one_row_per_mode() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_plate(dir.path(), "half.json", &SectorPlate::single_sector(std::f64::consts::PI).unwrap());
    let text = stdout(&sectordim(&["spectrum", &half, "--l-max", "5"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,re_c,im_c,gamma"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][0], -5.0);
    // even modes other than zero vanish for the half plate
    assert!(rows[3][3] < 1e-30);
    assert!((rows[5][3]).abs() < 1e-30);
}

#[test]
fn fringe_csv_round_trips_to_printed_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_plate(dir.path(), "half.json", &SectorPlate::single_sector(std::f64::consts::PI).unwrap());
    let csv = dir.path().join("fringe.csv");
    let summary = stdout(&sectordim(&["fringe", &half, "--format", "csv", "--out", csv.to_str().unwrap()]));
    let printed: f64 = summary.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    let fringe = Fringe::from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(fringe_dimension(&fringe).unwrap(), printed);
    assert!((printed - 3.0).abs() < 1e-6);
}

#[test]
fn fringe_aperture_cut_gives_two_modes() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_plate(dir.path(), "half.json", &SectorPlate::single_sector(std::f64::consts::PI).unwrap());
    let out = sectordim(&["fringe", &half, "--l-cut", "1"]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("D = 2.000000"), "{summary}");
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("delta_rad,rate\n"));
}

#[test]
fn quarter_sector_fringe_has_zero_shoulders() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_plate(dir.path(), "q.json", &SectorPlate::single_sector(std::f64::consts::FRAC_PI_2).unwrap());
    let fringe = Fringe::from_csv(&stdout(&sectordim(&["fringe", &q]))).unwrap();
    for (&d, &r) in fringe.deltas().iter().zip(fringe.rates()) {
        let dist = d.min(std::f64::consts::TAU - d);
        if dist >= std::f64::consts::FRAC_PI_2 {
            assert!(r < 1e-12, "rate {r} at {d}");
        }
    }
}

#[test]
fn analytic_sweep_in_degrees() {
    let text = stdout(&sectordim(&["analytic", "--sweep", "0:360:90"]));
    let dims: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let expected = [1.0, 6.0, 3.0, 6.0, 1.0];
    assert_eq!(dims.len(), expected.len());
    for (d, e) in dims.iter().zip(expected) {
        assert!((d - e).abs() < 1e-12);
    }
}

#[test]
fn optimize_emits_json_report() {
    let text = stdout(&sectordim(&["optimize", "--n", "1", "--budget", "200", "--seed", "3"]));
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["n_mesas"], 1);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["boundaries_rad"].as_array().unwrap().len(), 2);
    assert!((report["dimension"].as_f64().unwrap() - 6.0).abs() < 0.01);
}

#[test]
fn schmidt_of_uniform_weights() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "# flat\n1 1 1\n1, 1\n").unwrap();
    assert!(stdout(&sectordim(&["schmidt", w.to_str().unwrap()])).starts_with("K = 5.000000\n"));
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"boundaries_rad": [1.0, 0.5], "phases_rad": [0.0, 3.14]}"#).unwrap();
    let out = sectordim(&["dim", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));

    assert_eq!(sectordim(&["dim", "/nonexistent/plate.json"]).status.code(), Some(1));
    assert_eq!(sectordim(&["analytic", "--delta", "396"]).status.code(), Some(1));
    assert_eq!(sectordim(&["optimize", "--n", "0"]).status.code(), Some(2));
    assert_eq!(sectordim(&["dim", "--bogus"]).status.code(), Some(2));
}
