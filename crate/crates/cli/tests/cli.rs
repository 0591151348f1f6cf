use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use swarmlab::trace::read_trace_csv;
use swarmlab_cli::compare_command;
use swarmlab_cli::config::parse_compare_config;

const RUN: &str = r#"
algorithm = "pso"
function = "sphere"
dim = 3
population = 10
iterations = 40
seed = 7
"#;

fn swarmlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swarmlab"))
        .current_dir(dir)
        .env_remove("SWARMLAB_OUT")
        .args(args)
        .output()
        .unwrap()
}

fn stderr_line(out: &Output) -> String {
    let s = String::from_utf8_lossy(&out.stderr).into_owned();
    assert_eq!(s.lines().count(), 1, "diagnostic must be one line: {s}");
    s
}

#[test]
fn run_writes_header_plus_one_row_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    let out = swarmlab(
        dir.path(),
        &["run", "--config", "run.toml", "--out", "t.csv"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("algorithm=pso function=sphere best_fitness="));
    assert!(stdout.contains("evaluations=410"));

    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(text.lines().count(), 41);
    let records = read_trace_csv(&text).unwrap();
    assert_eq!(records.last().unwrap().iteration, 40);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    fs::write(
        dir.path().join("par.toml"),
        format!("{RUN}parallel = true\n"),
    )
    .unwrap();
    for (cfg, out) in [
        ("run.toml", "a.csv"),
        ("run.toml", "b.csv"),
        ("par.toml", "c.csv"),
    ] {
        assert!(
            swarmlab(dir.path(), &["run", "--config", cfg, "--out", out])
                .status
                .success()
        );
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, fs::read(dir.path().join("c.csv")).unwrap());
}

#[test]
fn seed_flag_overrides_config_and_names_default_output() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    assert!(
        swarmlab(dir.path(), &["run", "--config", "run.toml", "--seed", "11"])
            .status
            .success()
    );
    assert!(dir.path().join("pso_sphere_s11.csv").exists());
}

#[test]
fn output_directory_variable_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("out");
    fs::create_dir(&outdir).unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_swarmlab"))
        .current_dir(dir.path())
        .env("SWARMLAB_OUT", &outdir)
        .args(["run", "--config", "run.toml"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(outdir.join("pso_sphere_s7.csv").exists());
}

#[test]
fn missing_output_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    let out = swarmlab(
        dir.path(),
        &["run", "--config", "run.toml", "--out", "nope/t.csv"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_line(&out).starts_with("error kind=io-error message="));
    assert!(!dir.path().join("nope").exists());
}

#[test]
fn bad_config_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.toml"),
        "algorithm = \"cuckoo\"\nfunction = \"sphere\"\ndim = 2\n[params]\npa = 1.5\n",
    )
    .unwrap();
    let out = swarmlab(dir.path(), &["run", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let line = stderr_line(&out);
    assert!(line.starts_with("error kind=config-error"), "{line}");
    assert!(line.contains("[0, 1]"), "{line}");
}

#[test]
fn analyze_prints_lambda2_and_writes_square_chain() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "algorithm = \"firefly\"\nfunction = \"four_peaks\"\ndim = 2\npopulation = 15\niterations = 30\nsnapshot_every = 1\n",
    )
    .unwrap();
    assert!(swarmlab(
        dir.path(),
        &["run", "--config", "run.toml", "--out", "fa.csv"]
    )
    .status
    .success());
    let out = swarmlab(dir.path(), &["analyze", "--trace", "fa.csv", "--bins", "4"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("states=16 transitions=450 lambda2="),
        "{stdout}"
    );

    let chain = fs::read_to_string(dir.path().join("fa_chain.csv")).unwrap();
    let rows: Vec<Vec<f64>> = chain
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert_eq!(row.len(), 16);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn analyze_without_snapshots_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), RUN).unwrap();
    assert!(swarmlab(
        dir.path(),
        &["run", "--config", "run.toml", "--out", "t.csv"]
    )
    .status
    .success());
    let out = swarmlab(dir.path(), &["analyze", "--trace", "t.csv", "--bins", "4"]);
    assert_eq!(out.status.code(), Some(3));
    stderr_line(&out);
}

const COMPARE: &str = r#"
threshold = 1e-2
[[runs]]
algorithm = "bat"
function = "sphere"
dim = 3
population = 10
iterations = 30
[[runs]]
algorithm = "pso"
function = "sphere"
dim = 3
population = 10
iterations = 30
"#;

#[test]
fn compare_rows_are_sorted_by_median_best() {
    let spec = parse_compare_config(COMPARE).unwrap();
    let table = compare_command(&spec, &[1, 2, 3]).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows[0].median_best <= table.rows[1].median_best);
    assert_eq!(table.rows[0].label, "pso/sphere/d3");
}

#[test]
fn adding_a_seed_leaves_existing_runs_alone() {
    let spec = parse_compare_config(COMPARE).unwrap();
    let one = compare_command(&spec, &[5]).unwrap();
    let more = compare_command(&spec, &[5, 6]).unwrap();
    for row in &one.rows {
        assert_eq!(row.seeds, 1);
        assert_eq!(row.iqr_best, 0.0);
    }
    let cfg = spec.runs[1].run_config().unwrap().with_seed(5);
    let f = spec.runs[1].benchmark().unwrap();
    let direct = swarmlab::run_optimization(&cfg, &f).unwrap().best_fitness();
    let pso = one
        .rows
        .iter()
        .find(|r| r.label.starts_with("pso"))
        .unwrap();
    assert_eq!(pso.median_best, direct);
    let pso_more = more
        .rows
        .iter()
        .find(|r| r.label.starts_with("pso"))
        .unwrap();
    let cfg6 = cfg.clone().with_seed(6);
    let other = swarmlab::run_optimization(&cfg6, &f)
        .unwrap()
        .best_fitness();
    assert_eq!(pso_more.median_best, 0.5 * (direct + other));
}

#[test]
fn compare_command_line_prints_one_row_per_spec() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), COMPARE).unwrap();
    let out = swarmlab(
        dir.path(),
        &[
            "compare", "--config", "c.toml", "--seeds", "1", "--out", "c.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn tune_writes_report_with_one_winner() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("t.toml"),
        r#"
algorithm = "fpa"
function = "sphere"
dim = 2
population = 8
iterations = 20
seeds = [1, 2]
points_per_range = 2
output = "tune.csv"
[[ranges]]
name = "p_switch"
lo = 0.2
hi = 0.8
"#,
    )
    .unwrap();
    let out = swarmlab(dir.path(), &["tune", "--config", "t.toml"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("tune.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "point,p_switch,median_best,iqr,winner");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1..].iter().filter(|l| l.ends_with(",1")).count(), 1);
}
