use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tailkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailkern"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn hand_file(dir: &Path) -> String {
    write(dir, "hand.csv", "z,delta\n1,1\n2,0\n3,1\n")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn estimate_hand_file_worms() {
    let dir = tempfile::tempdir().unwrap();
    let out = tailkern(&["estimate", &hand_file(dir.path()), "--estimator", "worms"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    assert!(csv.starts_with("estimator,kernel,k,estimate,defined"));
    assert!(!csv.contains('\r'));
    let v: f64 = column(&csv, "estimate")[0].parse().unwrap();
    assert!((v - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn indicator_kernel_column_matches_worms() {
    let dir = tempfile::tempdir().unwrap();
    let z: String = (1..=60)
        .map(|i| format!("{},{}\n", 1.0 + (i as f64 * 0.37).exp() % 50.0, u8::from(i % 3 != 0)))
        .collect();
    let data = write(dir.path(), "d.csv", &format!("z,delta\n{z}"));
    let worms = tailkern(&["estimate", &data, "--estimator", "worms"]);
    let kern = tailkern(&["estimate", &data, "--estimator", "kernel", "--kernel", "indicator"]);
    assert!(worms.status.success() && kern.status.success(), "{}", stderr(&kern));
    assert_eq!(column(&stdout(&worms), "estimate"), column(&stdout(&kern), "estimate"));
}

#[test]
fn empty_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    let out = tailkern(&["estimate", &empty]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("empty.csv") && msg.contains("fewer than 2 rows"), "{msg}");
}

#[test]
fn malformed_row_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "z,delta\n1,1\n-2,0\n3,1\n");
    let out = tailkern(&["estimate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('3'), "{}", stderr(&out));
    let bad = write(dir.path(), "bad2.csv", "z,delta\n1,1\n2,7\n");
    assert_eq!(tailkern(&["estimate", &bad]).status.code(), Some(2));
}

const SMALL: &str = "n = 60\nreplications = 1\nseed = 4\nestimators = worms,kernel\nscenario = bb\n";

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, threads) in [(&a, "1"), (&b, "4")] {
        let o = tailkern(&["--output-dir", out.to_str().unwrap(), "--threads", threads, "simulate", &cfg]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("scenario,estimator,kernel,selected"));
    }
    for f in ["bb_summary.csv", "bb_smoothness.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
    let summary = fs::read_to_string(a.join("bb_summary.csv")).unwrap();
    assert!(summary.contains("bb-weak") && summary.contains("bb-strong"));
}

#[test]
fn four_scenarios_give_four_file_sets() {
    let dir = tempfile::tempdir().unwrap();
    let body = "n = 60\nreplications = 2\nestimators = worms\n\
        scenario = burr-burr\n\
        scenario = burr-frechet\nfamily.g = frechet\n\
        scenario = frechet-burr\nfamily.f = frechet\n\
        scenario = frechet-frechet\nfamily.f = frechet\nfamily.g = frechet\n";
    let cfg = write(dir.path(), "four.cfg", body);
    let out = dir.path().join("out");
    let o = tailkern(&["--seed", "1", "--output-dir", out.to_str().unwrap(), "simulate", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for name in ["burr-burr", "burr-frechet", "frechet-burr", "frechet-frechet"] {
        let s = fs::read_to_string(out.join(format!("{name}_summary.csv"))).unwrap();
        assert!(s.contains(&format!("{name}-weak")) && s.contains(&format!("{name}-strong")));
    }
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "n = 60\ncolour = red\n");
    let o = tailkern(&["--output-dir", dir.path().to_str().unwrap(), "simulate", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
    let cfg = write(dir.path(), "zero.cfg", "n = 60\ngamma.f = 0\ngamma.g = 1\n");
    let o = tailkern(&["--output-dir", dir.path().to_str().unwrap(), "simulate", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gamma must be positive"), "{}", stderr(&o));
}

#[test]
fn asymptotics_table() {
    let o = tailkern(&["asymptotics", "--gamma-f", "0.5", "--gamma-g", "1", "--n", "500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let kernels = column(&csv, "kernel");
    assert_eq!(kernels, ["indicator", "biweight", "triweight", "quadweight"]);
    let sigma: f64 = column(&csv, "sigma2")[0].parse().unwrap();
    let p = 2.0 / 3.0;
    assert!((sigma - p * 0.25 / (2.0 * p - 1.0)).abs() < 1e-8);
    for v in &column(&csv, "phi") {
        assert!(v.parse::<f64>().unwrap().is_finite());
    }

    let strong = tailkern(&["asymptotics", "--gamma-f", "1", "--gamma-g", "0.5"]);
    assert!(strong.status.success());
    assert!(column(&stdout(&strong), "sigma2").iter().all(|v| v == "validity-error"));
}

#[test]
fn select_k_reads_estimate_output() {
    let dir = tempfile::tempdir().unwrap();
    let z: String = (1..=80).map(|i| format!("{},1\n", 1.0 / (i as f64 / 81.0).powf(0.5))).collect();
    let data = write(dir.path(), "d.csv", &format!("z,delta\n{z}"));
    let paths = tailkern(&["estimate", &data, "--estimator", "worms,kernel"]);
    assert!(paths.status.success());
    let p = write(dir.path(), "paths.csv", &stdout(&paths));
    let o = tailkern(&["select-k", &p, "--nu", "0.3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    assert_eq!(column(&csv, "estimator"), ["worms", "kernel"]);
    for k in column(&csv, "k_star") {
        let k: usize = k.parse().unwrap();
        assert!((10..=79).contains(&k));
    }
}
