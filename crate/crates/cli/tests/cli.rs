use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use argmin_core::chain::theta_kernel;
use argmin_core::Kernel;

fn argmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argmin"))
        .args(args)
        .env_remove("ARGMIN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exact_half_has_quarter_corner() {
    let out = argmin(&["exact", "--model", "theta:0.5", "--N", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let corner = text
        .lines()
        .find(|l| l.starts_with("0,3,"))
        .expect("row 0, col 3");
    let value: f64 = corner.rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(value, 0.25);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["exact", "--model", "theta:1.5", "--N", "3"][..],
        &["exact", "--model", "walk", "--N", "3"],
        &["exact", "--model", "ssrw"],
        &["sim-walk", "--model", "theta:0.3", "--N", "3"],
        &["sim-levy", "--model", "ssrw"],
        &["kernel", "--rho", "0.5", "--t", "-1", "--x", "0.2"],
        &["verify", "--suite", "nonsense"],
        &["frobnicate"],
    ] {
        let out = argmin(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn lemma_suite_passes() {
    let out = argmin(&["verify", "--suite", "lemmas", "--n-max", "50"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS lemmas"));
}

#[test]
fn exact_csv_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k.csv");
    let out = argmin(&[
        "exact",
        "--model",
        "theta:0.3",
        "--N",
        "7",
        "--out",
        path_str(&p),
    ]);
    assert_eq!(code(&out), 0);
    let pi = fs::File::open(dir.path().join("k.pi.csv")).unwrap();
    let back = Kernel::read_csv(pi, fs::File::open(&p).unwrap()).unwrap();
    assert_eq!(back, theta_kernel(0.3, 7).unwrap());

    let j = dir.path().join("k.json");
    let out = argmin(&[
        "exact",
        "--model",
        "theta:0.3",
        "--N",
        "7",
        "--format",
        "json",
        "--out",
        path_str(&j),
    ]);
    assert_eq!(code(&out), 0);
    let back = Kernel::read_json(fs::File::open(&j).unwrap()).unwrap();
    assert_eq!(back, theta_kernel(0.3, 7).unwrap());
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec![
            "sim-walk",
            "--model",
            "stable:1.5,1",
            "--N",
            "3",
            "--steps",
            "20000",
            "--replicas",
            "3",
            "--seed",
            "7",
        ],
        vec![
            "sim-levy",
            "--model",
            "stable:1.5,1",
            "--mesh",
            "1e-3",
            "--horizon",
            "120",
            "--replicas",
            "2",
            "--seed",
            "0x2a",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let files: Vec<_> = (0..2)
            .map(|k| dir.path().join(format!("{i}_{k}.json")))
            .collect();
        for f in &files {
            let mut a = args.clone();
            a.extend(["--out", path_str(f)]);
            assert_eq!(code(&argmin(&a)), 0, "{a:?}");
        }
        let (a, b) = (fs::read(&files[0]).unwrap(), fs::read(&files[1]).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
    // a different seed changes the output
    let other = dir.path().join("other.json");
    let mut a = runs[0].clone();
    let last = a.len() - 1;
    a[last] = "8";
    a.extend(["--out", path_str(&other)]);
    assert_eq!(code(&argmin(&a)), 0);
    assert_ne!(
        fs::read(&other).unwrap(),
        fs::read(dir.path().join("0_0.json")).unwrap()
    );
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_argmin"))
        .args([
            "kernel", "--model", "gaussian", "--t", "0.3", "--x", "0.6", "--points", "10",
        ])
        .env("ARGMIN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let density = fs::read_to_string(dir.path().join("kernel.csv")).unwrap();
    assert!(density.starts_with("y,q\n"));
    assert_eq!(density.lines().count(), 11);
    let atom = fs::read_to_string(dir.path().join("kernel.atom.csv")).unwrap();
    let weight: f64 = atom
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((weight - 0.755928946018454).abs() < 1e-12);
}

#[test]
fn ladder_table_header() {
    let out = argmin(&["ladder", "--model", "ssrw", "--M", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,p,p_tilde,tau"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn signs_file_model() {
    let dir = tempfile::tempdir().unwrap();
    let signs = dir.path().join("s.json");
    let q = vec![0.5; 9];
    let doc = serde_json::json!({"q_ge": q, "q_gt": q, "q_lt": q});
    fs::write(&signs, doc.to_string()).unwrap();
    let model = format!("signs:{}", signs.display());
    let out = argmin(&["exact", "--model", &model, "--N", "4", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let k = Kernel::read_json(&out.stdout[..]).unwrap();
    assert!(k.max_abs_diff(&theta_kernel(0.5, 4).unwrap()).unwrap() < 1e-12);
}
