use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sptgame(args: &[&str], out: &Path, workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sptgame"));
    cmd.args(args).arg("--out").arg(out);
    match workers {
        Some(w) => cmd.env("SPTGAME_WORKERS", w),
        None => cmd.env_remove("SPTGAME_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str], out: &Path) {
    let o = sptgame(args, out, None);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn read(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect();
    (header, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn cluster_exact_hits_seven_eighths_at_the_critical_temperature() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["cluster-exact", "--n", "64", "--temps", "0,0.327"], dir.path());
    let (header, rows) = read(&dir.path().join("cluster-exact.csv"));
    assert_eq!(header, ["n", "T", "P_min", "T_c"]);
    assert_eq!(f(&rows[0][2]), 1.0);
    assert!((f(&rows[1][2]) - 7.0 / 8.0).abs() < 1e-3);
    assert!((f(&rows[1][3]) - 0.327).abs() < 5e-3);
}

#[test]
fn phase_diagram_rows() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["phase-diagram", "--n", "6", "--jx", "0", "--jzz", "0,2"], dir.path());
    let (header, rows) = read(&dir.path().join("phase-diagram.csv"));
    assert_eq!(header, ["J_X", "J_ZZ", "min_sop", "P_min", "degenerate"]);
    assert!((f(&rows[0][2]) - 1.0).abs() < 1e-12);
    assert!((f(&rows[0][3]) - 1.0).abs() < 1e-12);
    assert_eq!(rows[1][4], "true");
    assert!((f(&rows[1][3]) - 3.0 / 8.0).abs() < 1e-2);
}

#[test]
fn axis_rows_rebuild_the_winning_probability() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["axis", "--axis", "zz", "--n", "12", "--j", "0,0.5", "--temps", "0,0.3"], dir.path());
    let (header, rows) = read(&dir.path().join("axis.csv"));
    assert_eq!(header, ["axis", "J", "n", "T", "g", "h", "U_g", "U_h", "U_gh", "T_twist", "UgT", "P", "P_min"]);
    assert_eq!(rows.len(), 2 * 2 * 6);
    for group in rows.chunks(6) {
        let mut lowest = f64::INFINITY;
        for r in group {
            let v: Vec<f64> = r[6..13].iter().map(|s| f(s)).collect();
            let p = (12.0 * (1.0 + v[0]) + v[1] + v[2] - 3.0 * (v[3] + v[4])) / 32.0;
            assert!((p - v[5]).abs() < 1e-15);
            lowest = lowest.min(p);
        }
        assert!(group.iter().all(|r| f(&r[12]) == lowest));
    }
    // the cluster point at zero temperature wins every round
    assert!((f(&rows[0][12]) - 1.0).abs() < 1e-9);
}

#[test]
fn cluster_state_wins_every_sampled_round() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["game", "--n", "6", "--trials", "300"], dir.path());
    let (header, rows) = read(&dir.path().join("game.csv"));
    assert_eq!(header, ["n", "source", "g", "h", "trials", "empirical", "analytic", "sigma"]);
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!((f(&r[5]), f(&r[6])), (1.0, 1.0));
    }
}

#[test]
fn thermal_game_stays_within_sampling_error() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["game", "--n", "6", "--source", "thermal-dense", "--temperature", "0.6", "--trials", "4000", "--seed", "5"], dir.path());
    for r in read(&dir.path().join("game.csv")).1 {
        let (emp, exact) = (f(&r[5]), f(&r[6]));
        let sigma = (exact * (1.0 - exact) / 4000.0).sqrt();
        assert!((emp - exact).abs() <= 4.0 * sigma, "{r:?}");
    }
}

#[test]
fn output_is_identical_across_runs_and_worker_counts() {
    let runs: Vec<(Vec<&str>, &str)> = vec![
        (vec!["metts", "--n", "6", "--jx", "0.2,0.4", "--temps", "0.5,1", "--n-i", "8", "--warmup", "1", "--seed", "3"], "metts.csv"),
        (vec!["game", "--n", "6", "--source", "thermal-dense", "--trials", "700", "--seed", "9"], "game.csv"),
        (vec!["phase-diagram", "--n", "6", "--jx", "0:1:3", "--jzz", "0:1:2"], "phase-diagram.csv"),
    ];
    for (args, file) in runs {
        let bodies: Vec<Vec<u8>> = [Some("1"), Some("4"), None]
            .into_iter()
            .map(|w| {
                let dir = tempfile::tempdir().unwrap();
                let o = sptgame(&args, dir.path(), w);
                assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
                fs::read(dir.path().join(file)).unwrap()
            })
            .collect();
        assert!(bodies.windows(2).all(|w| w[0] == w[1]), "{file} differs between runs");
    }
}

#[test]
fn metts_rows_cover_every_observable() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["metts", "--n", "6", "--temps", "0.4", "--n-i", "6", "--warmup", "0", "--seed", "11"], dir.path());
    let (header, rows) = read(&dir.path().join("metts.csv"));
    assert_eq!(header, ["J_X", "J_ZZ", "T", "n", "observable", "mean", "stderr", "tau", "N_I", "seed"]);
    let names: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert!(names.contains(&"U(z)") && names.contains(&"P(z,x)"), "{names:?}");
    assert!(rows.iter().all(|r| r[8] == "6" && r[9] == "11"));
}

#[test]
fn floats_survive_the_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["cluster-exact", "--n", "12,18", "--tmin", "0.05", "--tmax", "2", "--tsteps", "9"], dir.path());
    let text = fs::read_to_string(dir.path().join("cluster-exact.csv")).unwrap();
    for line in text.lines().skip(1) {
        for field in line.split(',').skip(1) {
            let x: f64 = field.parse().unwrap();
            assert_eq!(format!("{x:?}"), field);
        }
    }
}

#[test]
fn manifest_lists_every_output_and_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["cluster-exact", "--n", "12", "--temps", "0.3", "--seed", "42"], dir.path());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cluster-exact.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "cluster-exact");
    assert_eq!(m["seed"], 42);
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    assert!(Path::new(outputs[0].as_str().unwrap()).exists());

    ok(&["classical"], dir.path());
    let best: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("classical.json")).unwrap()).unwrap();
    assert_eq!(best["value"], 0.875);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| sptgame(args, dir.path(), None).status.code();
    assert_eq!(code(&["phase-diagram", "--n", "64"]), Some(3));
    assert_eq!(code(&["metts", "--n", "16", "--temps", "1"]), Some(3));
    assert_eq!(code(&["cluster-exact", "--tmin", "1", "--tmax", "0"]), Some(2));
    assert_eq!(code(&["metts", "--temps", "0"]), Some(2));
    assert_eq!(code(&["axis", "--axis", "y"]), Some(2));
    assert_eq!(code(&["game", "--source", "moon"]), Some(2));
    assert_eq!(code(&["game", "--n", "7"]), Some(2));
    assert_eq!(code(&["cluster-exact", "--bogus"]), Some(2));
    let blocked = dir.path().join("file");
    fs::write(&blocked, "").unwrap();
    assert_eq!(sptgame(&["classical"], &blocked, None).status.code(), Some(1));
}
