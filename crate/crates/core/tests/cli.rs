//! End-to-end runs of the `fermispec` binary.

use std::path::Path;
use std::process::{Command, Output};

use fermispec::cli::{CompareRow, OverlapRow, SpectrumRow};
use fermispec::experiments::{FitResult, SweepRow};
use fermispec::experiments::edge_spectrum;
use fermispec::spectrum::top_k_weights;

fn fermispec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermispec"))
        .current_dir(dir)
        .env_remove("FERMISPEC_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_rows<T: serde::de::DeserializeOwned>(path: &Path) -> Vec<T> {
    csv::Reader::from_path(path).unwrap().deserialize().map(|r| r.unwrap()).collect()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn sweep_field_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["sweep-field", "--n", "10", "--h-min", "0", "--h-max", "2", "--steps", "9", "-o", "sweep.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("sweep.csv");
    assert_eq!(
        header(&path),
        "n_sites,field,cut,entropy_bits,lambda_1,lambda_2,lambda_3,lambda_4,overlap_1,overlap_2,overlap_3,overlap_4,s_1,s_2,s_3,nu_min"
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r') && !text.contains('"'));
    let rows: Vec<SweepRow> = read_rows(&path);
    assert_eq!(rows.len(), 9);
    for row in rows {
        let again = SweepRow::compute(row.n_sites, row.field, row.cut).unwrap();
        for (a, b) in row.lambdas().iter().zip(again.lambdas()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((row.entropy_bits - again.entropy_bits).abs() < 1e-12);
        assert!((row.nu_min - again.nu_min).abs() < 1e-12);
    }
}

#[test]
fn empty_grid_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["sweep-field", "--n", "10", "--h-min", "0", "--h-max", "2", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none(), "no output on failure");
}

#[test]
fn unknown_flag_prints_usage() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["spectrum", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn invalid_values_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["oracle-compare", "--n", "13"][..],
        &["spectrum", "--n", "10", "--h", "-1"],
        &["spectrum", "--n", "10", "--k", "0"],
        &["spectrum", "--n", "10", "--cut", "11"],
        &["sweep-field", "--h-min", "1", "--h-max", "1", "--steps", "3"],
        &["scaling", "--n", "16,33"],
        &["error-growth", "--n", "40,80,120"],
    ] {
        let out = fermispec(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn oracle_compare_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["oracle-compare", "--n", "8", "--h", "1.0", "--cut", "4", "-o", "cmp.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<CompareRow> = read_rows(&dir.path().join("cmp.csv"));
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.abs_diff < 1e-10));
}

#[test]
fn spectrum_writes_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["spectrum", "--n", "50", "--h", "1.0", "--cut", "25", "--k", "10", "-o", "out/spec.csv", "--emit-plot"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join("out/spec.csv");
    let rows: Vec<SpectrumRow> = read_rows(&csv);
    let expected = top_k_weights(&edge_spectrum(50, 1.0, 25).unwrap(), 10).unwrap();
    assert_eq!(rows.len(), 10);
    for (r, t) in rows.iter().zip(&expected) {
        assert!((r.lambda_n - t.weight).abs() < 1e-12);
        assert!((r.overlap_n - t.weight.sqrt()).abs() < 1e-12);
    }
    let script = std::fs::read_to_string(dir.path().join("out/spec.gp")).unwrap();
    assert!(script.contains("'spec.csv'"), "{script}");
}

#[test]
fn fits_are_written_beside_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["scaling", "--n", "16,32,64", "--h", "1", "-o", "scaling.csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("slope"));
    let fit_csv = dir.path().join("scaling_fit.csv");
    assert_eq!(header(&fit_csv), "slope,intercept,residual,domain");
    let fits: Vec<FitResult> = read_rows(&fit_csv);
    assert!(fits[0].slope > 0.05 && fits[0].slope < 0.12);

    let out = fermispec(dir.path(), &["decay-fit", "--n", "50", "--h", "1", "-o", "decay.csv"]);
    assert_eq!(out.status.code(), Some(0));
    // Data went to decay.csv, so its fit lands in decay_fit.csv.
    let fits: Vec<FitResult> = read_rows(&dir.path().join("decay_fit.csv"));
    assert_eq!(fits.len(), 1);
}

#[test]
fn overlaps_are_long_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = fermispec(dir.path(), &["overlaps", "--n", "20", "--h-min", "0.5", "--h-max", "1.5", "--steps", "3", "--k", "4", "-o", "o.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<OverlapRow> = read_rows(&dir.path().join("o.csv"));
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [1, 2, 3, 4].repeat(3));
}

#[test]
fn help_lists_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 7] = [
        ("sweep-field", &["--n", "--h-min", "--h-max", "--steps", "--cut", "--output", "--emit-plot", "[default: 50]"]),
        ("spectrum", &["--n", "--h", "--cut", "--k", "--output", "--emit-plot", "[default: 10]"]),
        ("scaling", &["--n", "--h", "--output", "[default: 16,32,64,128,256]"]),
        ("decay-fit", &["--n", "--h", "--cut", "--k", "--output"]),
        ("error-growth", &["--n", "--h", "--chi-overlap", "--chi-entropy", "--output", "[default: 4]", "[default: 3]"]),
        ("overlaps", &["--n", "--h-min", "--h-max", "--steps", "--k", "--output"]),
        ("oracle-compare", &["--n", "--h", "--cut", "--k", "--output", "[default: 8]"]),
    ];
    for (cmd, flags) in cases {
        let out = fermispec(dir.path(), &[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8_lossy(&out.stdout);
        for flag in flags {
            assert!(text.contains(flag), "{cmd} help lacks {flag}:\n{text}");
        }
    }
}

#[test]
fn thread_cap_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_fermispec"))
            .current_dir(dir.path())
            .env("FERMISPEC_THREADS", value)
            .args(["sweep-field", "--n", "8", "--steps", "4", "-o", "t.csv"])
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("2"), Some(0));
    assert_eq!(run("zero"), Some(2));
    assert_eq!(run("0"), Some(2));
}
