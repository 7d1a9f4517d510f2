use std::path::Path;
use std::process::{Command, Output};

use esdlab::analysis::{sample_trajectory, sweep, time_grid, ModelSpec, Source};
use esdlab_cli::config::{parse_config, RunConfig};
use esdlab_cli::output::{parse_trajectory_csv, to_json, EsdDocument, SweepDocument};

fn esdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esdlab")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    esdlab(args).status.code().unwrap()
}

fn sweep_doc(path: &Path) -> SweepDocument {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const ISING_RUN: &[&str] = &[
    "simulate",
    "--model",
    "ising",
    "--r",
    "0.5",
    "--theta",
    "0.7853981634",
    "--J",
    "1",
    "--t-max",
    "10",
    "--steps",
    "1000",
];

#[test]
fn trajectory_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ising.csv");
    let args: Vec<&str> = ISING_RUN
        .iter()
        .copied()
        .chain(["--output", out.to_str().unwrap()])
        .collect();
    assert_eq!(code(&args), 0);
    let parsed = parse_trajectory_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed.meta("model"), Some("ising"));
    assert_eq!(parsed.meta("r"), Some("0.5"));
    assert_eq!(parsed.meta("steps"), Some("1000"));

    let RunConfig::Simulate { model, time, .. } =
        parse_config(std::iter::once("esdlab").chain(ISING_RUN.iter().copied())).unwrap()
    else {
        panic!()
    };
    let traj = sample_trajectory(&model, &time.grid(), Source::Analytic, None).unwrap();
    assert_eq!(parsed.rows.len(), traj.samples.len());
    for (row, s) in parsed.rows.iter().zip(&traj.samples) {
        let expected = [
            s.t,
            s.wootters(),
            s.paper_cutoff(),
            s.energy_h0,
            s.energy_hi.unwrap(),
            s.purity,
        ];
        for (got, want) in row.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
        }
    }
}

#[test]
fn bell_state_first_row() {
    let out = esdlab(&[
        "simulate",
        "--model",
        "ising",
        "--r",
        "1",
        "--theta",
        "0.7853981633974483",
        "--J",
        "1",
        "--steps",
        "2",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text
        .lines()
        .find(|l| !l.starts_with('#') && !l.starts_with('t'))
        .unwrap();
    assert_eq!(first.split(',').nth(1), Some("1.000000000000"));
}

#[test]
fn empty_trajectory_has_header_and_metadata_only() {
    let out = esdlab(&["simulate", "--model", "tc", "--steps", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = parse_trajectory_csv(&text).unwrap();
    assert!(parsed.rows.is_empty());
    assert_eq!(parsed.meta("model"), Some("tc"));
}

#[test]
fn stationary_dephasing_rows_keep_unit_concurrence() {
    let out = esdlab(&[
        "simulate",
        "--model",
        "dephasing",
        "--r",
        "1",
        "--theta",
        "0.7853981633974483",
        "--steps",
        "25",
    ]);
    let parsed = parse_trajectory_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed.rows.len(), 25);
    assert!(parsed.rows.iter().all(|r| r[1] == 1.0 && r[4].is_nan()));
}

#[test]
fn both_sources_write_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tc.csv");
    assert_eq!(
        code(&[
            "simulate",
            "--model",
            "tc",
            "--r",
            "0.5",
            "--source",
            "both",
            "--output",
            out.to_str().unwrap()
        ]),
        0
    );
    let a = parse_trajectory_csv(&std::fs::read_to_string(dir.path().join("tc.analytic.csv")).unwrap()).unwrap();
    let o = parse_trajectory_csv(&std::fs::read_to_string(dir.path().join("tc.oracle.csv")).unwrap()).unwrap();
    assert_eq!(o.meta("cutoff"), Some("2"));
    for (x, y) in a.rows.iter().zip(&o.rows) {
        assert!((x[1] - y[1]).abs() < 1e-10);
    }
}

#[test]
fn sweep_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.json");
    let args = [
        "sweep",
        "--model",
        "ising",
        "--r",
        "0.5",
        "--y-axis",
        "J",
        "--y-min",
        "0",
        "--y-max",
        "2",
        "--y-steps",
        "9",
        "--steps",
        "51",
    ];
    let with_out: Vec<&str> = args
        .iter()
        .copied()
        .chain(["--output", out.to_str().unwrap()])
        .collect();
    assert_eq!(code(&with_out), 0);
    let doc = sweep_doc(&out);
    let RunConfig::Sweep { spec, .. } = parse_config(std::iter::once("esdlab").chain(args)).unwrap() else {
        panic!()
    };
    let grid = sweep(&spec).unwrap();
    assert_eq!(doc.shape, [9, 51]);
    assert_eq!(doc.value_rows(), grid.values);
    assert_eq!(doc.x_axis.values, grid.x_values);
    assert_eq!(doc.dark_mask.decode(), grid.dark_mask.concat());
    assert_eq!(doc.parameters["model"], "ising");

    let local = SweepDocument::new(&grid, &spec.base, None, Vec::new());
    let reparsed: SweepDocument = serde_json::from_str(&to_json(&local)).unwrap();
    assert_eq!(reparsed, local);
    assert_eq!(reparsed.value_rows(), grid.values);
    assert_eq!(reparsed.dark_mask.decode(), grid.dark_mask.concat());
}

#[test]
fn single_point_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one.json");
    let args = [
        "sweep",
        "--model",
        "ising",
        "--y-axis",
        "r",
        "--y-min",
        "1",
        "--y-max",
        "1",
        "--y-steps",
        "1",
        "--steps",
        "1",
        "--output",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let doc = sweep_doc(&out);
    assert_eq!(doc.shape, [1, 1]);
    assert!((doc.values[0].unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn preset_masks() {
    let dir = tempfile::tempdir().unwrap();
    let fig4a = dir.path().join("fig4a.json");
    let fig3a = dir.path().join("fig3a.json");
    assert_eq!(
        code(&["sweep", "--preset", "fig4a", "--output", fig4a.to_str().unwrap()]),
        0
    );
    assert_eq!(
        code(&["sweep", "--preset", "fig3a", "--output", fig3a.to_str().unwrap()]),
        0
    );
    let doc = sweep_doc(&fig4a);
    assert!(doc.dark_mask.decode().iter().any(|&d| d));
    assert_eq!(
        doc.sections.iter().map(|s| s.value).collect::<Vec<_>>(),
        vec![0.35, 1.0, 0.5]
    );
    assert!(doc.sections[2].dark_periods.iter().any(|p| p.revived));
    assert!(!sweep_doc(&fig3a).dark_mask.decode().iter().any(|&d| d));
}

#[test]
fn esd_report_parses() {
    let out = esdlab(&[
        "esd", "--model", "ising", "--r", "0.5", "--t-max", "10", "--steps", "1001",
    ]);
    assert!(out.status.success());
    let doc: EsdDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!doc.dark_periods.is_empty());
    assert_eq!(doc.extrema.len(), 2);
    assert!(doc.extrema[1].complete);
}

#[test]
fn compare_exit_codes() {
    assert_eq!(
        code(&["compare", "--model", "ising", "--r", "0.5", "--tol", "1e-12"]),
        0
    );
    assert_eq!(code(&["compare", "--model", "tc", "--r", "0.5", "--theta", "1.4"]), 0);
    assert_eq!(
        code(&[
            "compare",
            "--model",
            "tc",
            "--r",
            "0.5",
            "--theta",
            "1.4",
            "--closed-form",
            "printed"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "compare",
            "--model",
            "dephasing",
            "--theta",
            "0.15707963267948966",
            "--Gamma",
            "2",
            "--max-cutoff",
            "8"
        ]),
        4
    );
    assert_eq!(code(&["compare", "--model", "dephasing", "--family", "ee_gg"]), 2);
    assert_eq!(code(&["simulate", "--model", "tc", "--omega0", "1", "--omega", "2"]), 2);
    assert_eq!(
        code(&["simulate", "--model", "ising", "--output", "/nonexistent/dir/out.csv"]),
        3
    );
}

#[test]
fn certify_reports_cutoff() {
    let out = esdlab(&["certify", "--model", "tc", "--r", "0.5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some("cutoff=2"));
}

#[test]
fn thread_hint_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_esdlab"))
            .args(["sweep", "--preset", "fig1a", "--steps", "41", "--y-steps", "21"])
            .env("ESDLAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("64").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn model_spec_echo_covers_parameters() {
    let spec = ModelSpec::Dephasing {
        params: esdlab::models::DephasingParams::single_mode(1.0, 3.0, 1.0, 0.5).unwrap(),
        initial: esdlab::models::InitialStateFamily::new(1.0, 0.1, esdlab::models::Family::EgGe).unwrap(),
    };
    let keys: Vec<String> = spec.parameters().into_iter().map(|(k, _)| k).collect();
    for k in ["model", "r", "theta", "omega0", "Omega", "mode0_omega", "mode0_Gamma"] {
        assert!(keys.iter().any(|x| x == k), "{k}");
    }
    assert_eq!(time_grid(1.0, 3), vec![0.0, 0.5, 1.0]);
}
