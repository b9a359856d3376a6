use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gmcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn out_dir(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn read(dir: &str, file: &str) -> String {
    fs::read_to_string(Path::new(dir).join(file)).unwrap()
}

#[test]
fn oracle_table_ends_at_shrink_time() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "o");
    let res = gmcf(&["oracle", "--epsilon", "-1", "--rho0", "0.5", "--out", &out]);
    assert_eq!(res.status.code(), Some(0));
    let table = read(&out, "oracle.csv");
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("t,rho,t_hat,rho_hat,rho_mcf"));
    let last: Vec<f64> = table
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let expected = -0.5 * (1.0f64 - 0.25).ln();
    assert!((last[0] - expected).abs() < 1e-12, "{}", last[0]);
    assert_eq!(last[1], 0.0);
}

#[test]
fn validate_fixed_sphere_passes() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "v");
    let res = gmcf(&[
        "validate", "--case", "biii", "--epsilon", "-1", "--shape", "circle:m=64", "--out", &out,
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    let kv = read(&out, "report.kv");
    let clauses: Vec<&str> = kv.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(clauses, ["clause=hypothesis", "clause=fixed_point", "clause=drift"]);
    for line in kv.lines() {
        let fields: Vec<&str> = line.split(' ').collect();
        assert_eq!(fields.len(), 5, "{line}");
        assert_eq!(fields[1], "pass=true");
        for (f, key) in fields[2..].iter().zip(["value=", "bound=", "tol="]) {
            let v = f.strip_prefix(key).unwrap();
            v.parse::<f64>().unwrap();
            assert!(v.contains('e'), "{v}");
        }
    }
}

#[test]
fn inapplicable_case_fails_with_exit_one() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "w");
    let res = gmcf(&["validate", "--case", "a", "--epsilon", "-1", "--shape", "circle:m=64", "--out", &out]);
    assert_eq!(res.status.code(), Some(1));
    assert!(read(&out, "report.kv").starts_with("clause=hypothesis pass=false"));
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(gmcf(&["simulate", "--cfl", "2"]).status.code(), Some(2));
    assert_eq!(gmcf(&["bogus"]).status.code(), Some(2));
    assert_eq!(gmcf(&["simulate", "--shape", "nothing:r=1"]).status.code(), Some(2));
    assert_eq!(gmcf(&["simulate", "--mode", "oracle"]).status.code(), Some(2));

    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "# comment\nmode = simulate\nmu = -1\n").unwrap();
    let res = gmcf(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains(":3:"));
}

#[test]
fn malformed_shape_file_names_the_line() {
    let tmp = TempDir::new().unwrap();
    let shape = tmp.path().join("bad.csv");
    fs::write(&shape, "1,0\n0,1\n-1,x\n0,-1\n").unwrap();
    let res = gmcf(&["simulate", "--shape", shape.to_str().unwrap(), "--out", &out_dir(&tmp, "s")]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains(":3:"));
}

#[test]
fn simulate_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = out_dir(&tmp, name);
        let res = gmcf(&[
            "simulate", "--shape", "random_convex:m=32", "--seed", "7", "--epsilon", "1", "--max-steps", "40",
            "--out", &out,
        ]);
        assert_eq!(res.status.code(), Some(0));
        out
    };
    let (a, b) = (run("a"), run("b"));
    let series = read(&a, "series.csv");
    assert_eq!(series, read(&b, "series.csv"));
    assert_eq!(
        series.lines().next(),
        Some("step,t,dt,area,weighted_area,circumradius,roundness,max_speed")
    );
    assert_eq!(series.lines().count(), 42);
    assert_eq!(read(&a, "snap_40.csv"), read(&b, "snap_40.csv"));
}

#[test]
fn snapshots_reload_as_shapes() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "m");
    let res = gmcf(&["simulate", "--shape", "icosphere:r=1,sub=1", "--max-steps", "5", "--out", &out]);
    assert_eq!(res.status.code(), Some(0));
    let snap = Path::new(&out).join("snap_5.off");
    let text = fs::read_to_string(&snap).unwrap();
    assert!(text.starts_with("OFF\n42 80 0\n"));
    let res = gmcf(&["simulate", "--shape", snap.to_str().unwrap(), "--max-steps", "1", "--out", &out_dir(&tmp, "n")]);
    assert_eq!(res.status.code(), Some(0));
}

#[test]
fn compare_halves_the_discrepancy() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "c");
    let res = gmcf(&[
        "compare", "--shape", "ellipse:a=1.5,b=1,m=32", "--epsilon", "1", "--max-time", "0.05", "--refinements", "2",
        "--out", &out,
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let report = read(&out, "report.txt");
    assert!(read(&out, "compare.csv").lines().count() > 1);
    let ratios: Vec<f64> = report
        .lines()
        .filter(|l| l.starts_with("ratio"))
        .map(|l| l.rsplit(' ').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 4, "{report}");
    assert!(ratios.iter().all(|r| (r - 2.0).abs() < 0.1), "{ratios:?}");
}
