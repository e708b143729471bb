use std::fs;
use std::path::Path;
use std::process::Command;

use kgsl::propagators::Equation;
use kgsl_lab::config::{ExperimentConfig, InitialData};
use kgsl_lab::{simulate, CliError, SnapshotFile};
use num_complex::Complex;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgsl"))
}

fn small_config(dir: &Path) -> ExperimentConfig {
    let text = format!(
        r#"
[run]
equation = "kg"
seed = 7

[grid]
n = 32
length = 20.0

[time]
dt = 0.01
duration = 0.5
dt_save = 0.1

[initial_data]
family = "random_smooth"
amplitude = 0.2
max_frequency = 2.0

[diagnostics]
concentration_amounts = [0.01]
r_epsilon = 0.1
norms = ["lp:4", "besov:0.25,inf,2"]

[output]
dir = "{}"
"#,
        dir.display()
    );
    ExperimentConfig::from_toml(&text).unwrap()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn snapshot_round_trip_is_bit_exact(
        bits in prop::collection::vec(any::<u64>(), 16 * 16 * 2),
        t in any::<f64>(),
        kg in any::<bool>(),
    ) {
        let plane: Vec<Complex<f64>> = bits
            .chunks(2)
            .map(|c| Complex::new(f64::from_bits(c[0]), f64::from_bits(c[1])))
            .collect();
        let snap = SnapshotFile {
            equation: if kg { Equation::KleinGordon } else { Equation::Schrodinger },
            n: 16,
            length: 3.5,
            t,
            fields: if kg { vec![plane.clone(), plane] } else { vec![plane] },
        };
        let bytes = snap.to_bytes();
        let back = SnapshotFile::from_bytes(&bytes).unwrap();
        prop_assert_eq!(back.to_bytes(), bytes);
        prop_assert_eq!(back.t.to_bits(), t.to_bits());
    }
}

#[test]
fn snapshot_header_and_checksum() {
    let snap = SnapshotFile {
        equation: Equation::Schrodinger,
        n: 16,
        length: 2.0,
        t: 0.5,
        fields: vec![vec![Complex::new(1.0, -2.0); 256]],
    };
    let mut bytes = snap.to_bytes();
    assert_eq!(&bytes[0..4], b"KGSL");
    assert_eq!(bytes.len(), 40 + 256 * 16);
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    assert!(matches!(SnapshotFile::from_bytes(&bytes), Err(CliError::Snapshot(_))));
    assert!(SnapshotFile::from_bytes(&bytes[..20]).is_err());
}

#[test]
fn unknown_keys_are_rejected() {
    let err = ExperimentConfig::from_toml("[grid]\nn = 64\nwidth = 3.0\n").unwrap_err();
    assert!(err.to_string().contains("width"), "{err}");
    assert!(ExperimentConfig::from_toml("[gird]\nn = 64\n").is_err());
    let err = ExperimentConfig::from_toml("[initial_data]\nfamily = \"gaussian\"\namplitude = 1.0\nwidth = 1.0\nradius = 2.0\n")
        .unwrap_err();
    assert!(err.to_string().contains("radius"), "{err}");
}

#[test]
fn validation_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.initial_data = InitialData::File {
        path: dir.path().join("missing.bin"),
    };
    match c.validate() {
        Err(CliError::Config { field, .. }) => assert_eq!(field, "initial_data.path"),
        other => panic!("unexpected {other:?}"),
    }
    let mut c = small_config(dir.path());
    c.time.dt = -1.0;
    match c.validate() {
        Err(CliError::Config { field, .. }) => assert_eq!(field, "time.dt"),
        other => panic!("unexpected {other:?}"),
    }
    let mut c = small_config(dir.path());
    c.diagnostics.norms = vec!["besov:9,2,2".into()];
    assert!(matches!(c.validate(), Err(CliError::Config { field, .. }) if field == "diagnostics.norms"));
}

#[test]
fn zero_duration_gives_one_snapshot_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.time.duration = 0.0;
    let out = simulate(&c, "simulate").unwrap();
    let csv = fs::read_to_string(out.dir.join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("t,E,E0,M,H,boundary_leakage,spectral_tail"));
    assert_eq!(fs::read_dir(out.dir.join("snapshots")).unwrap().count(), 1);
    assert_eq!(out.summary["snapshots"], 1);
}

#[test]
fn runs_are_bit_identical_and_summaries_embed_the_config() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = simulate(&small_config(a.path()), "simulate").unwrap();
    let rb = simulate(&small_config(b.path()), "simulate").unwrap();
    assert_eq!(
        fs::read(ra.dir.join("diagnostics.csv")).unwrap(),
        fs::read(rb.dir.join("diagnostics.csv")).unwrap()
    );
    assert_eq!(read_dir_sorted(&ra.dir.join("snapshots")), read_dir_sorted(&rb.dir.join("snapshots")));
    assert_eq!(ra.summary["config"]["run"]["seed"], 7);
    assert_eq!(ra.summary["config"]["grid"]["n"], 32);
    assert_eq!(ra.summary["code_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(ra.summary["config_hash"].as_str().unwrap().len(), 64);

    let mut other = small_config(a.path());
    other.run.seed = 8;
    let first_a = SnapshotFile::read(&ra.dir.join("snapshots/snapshot_00000.bin")).unwrap();
    simulate(&other, "simulate").unwrap();
    let first_c = SnapshotFile::read(&ra.dir.join("snapshots/snapshot_00000.bin")).unwrap();
    assert_ne!(first_a, first_c);
}

#[test]
fn snapshot_restart_reproduces_the_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&small_config(dir.path()), "simulate").unwrap();
    let path = out.dir.join("snapshots/snapshot_00000.bin");
    let restart = tempfile::tempdir().unwrap();
    let mut c = small_config(restart.path());
    c.initial_data = InitialData::File { path };
    let again = simulate(&c, "simulate").unwrap();
    assert_eq!(
        fs::read(out.dir.join("diagnostics.csv")).unwrap(),
        fs::read(again.dir.join("diagnostics.csv")).unwrap()
    );
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[grid]\nn = 64\nbogus = 1\n").unwrap();
    let status = bin().args(["simulate", "--config"]).arg(&bad).output().unwrap().status;
    assert_eq!(status.code(), Some(2));

    let status = bin()
        .args(["simulate", "--T", "1", "--saves", "3"])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(2));

    let hot = dir.path().join("hot.toml");
    fs::write(
        &hot,
        format!(
            "[grid]\nn = 32\nlength = 10.0\n[time]\ndt = 0.01\nduration = 1.0\ndt_save = 0.5\n\
             [initial_data]\nfamily = \"gaussian\"\namplitude = 7.4\nwidth = 1.0\n[output]\ndir = \"{}\"\n",
            dir.path().join("hot").display()
        ),
    )
    .unwrap();
    let status = bin().args(["simulate", "--config"]).arg(&hot).output().unwrap().status;
    assert_eq!(status.code(), Some(3));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hot/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["truncated"], true);
}

#[test]
fn output_root_comes_from_the_environment() {
    let root = tempfile::tempdir().unwrap();
    let status = bin()
        .env("KGSL_OUTPUT_DIR", root.path())
        .args(["simulate", "--n", "16", "--L", "10", "--T", "0", "--no-snapshots"])
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(root.path().join("run/summary.json").is_file());
    assert!(!root.path().join("run/snapshots").exists());
}

#[test]
fn norms_command_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&small_config(dir.path()), "simulate").unwrap();
    let snap = out.dir.join("snapshots/snapshot_00003.bin");
    let run = || {
        let o = bin()
            .args(["norms", "--spec", "besov:0.25,inf,2", "--input"])
            .arg(&snap)
            .output()
            .unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    let value: f64 = first.trim().parse().unwrap();
    assert!(value > 0.0);
}

#[test]
fn probe_tm_emits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["probe-tm", "--family", "moser", "--m", "1..3", "--n", "256", "--L", "16", "--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let csv = fs::read_to_string(dir.path().join("probe_tm.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,h_mu_norm,tm_value");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let h: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((h - 1.0).abs() < 1e-12);
    }
}

#[test]
fn counterexample_emits_tables() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["counterexample", "--kind", "kg", "--N", "256", "--a", "1.0", "--sweep", "64,256", "--output-dir"])
        .arg(dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let bounds = fs::read_to_string(dir.path().join("vn_bounds.csv")).unwrap();
    assert!(bounds.lines().any(|l| l.starts_with("grad_sq,")));
    let sweep = fs::read_to_string(dir.path().join("growth_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 3);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert!(summary["bounds"]["l2_sq"].as_f64().unwrap() < summary["bounds"]["l2_sq_bound"].as_f64().unwrap());
}

#[test]
fn scatter_and_decay_reports() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "scatter-report", "--n", "64", "--L", "40", "--dt", "0.05", "--dt-save", "0.5", "--T", "6",
            "--no-snapshots", "--output-dir",
        ])
        .arg(dir.path().join("s"))
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s/summary.json")).unwrap()).unwrap();
    assert!(summary["scattering"]["final_increment"].is_number());
    assert!(dir.path().join("s/scattering.csv").is_file());

    let status = bin()
        .args([
            "decay-fit", "--n", "64", "--L", "40", "--dt", "0.05", "--dt-save", "0.5", "--T", "6",
            "--nonlinearity", "off", "--no-snapshots", "--t-min", "2", "--output-dir",
        ])
        .arg(dir.path().join("d"))
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d/summary.json")).unwrap()).unwrap();
    assert!(summary["decay_fit"]["exponent"].as_f64().unwrap() < 0.0);
}
