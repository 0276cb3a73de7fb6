use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gpme(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpme"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn presets_lists_every_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = gpme(&["presets"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "table-appendix-b",
        "waiting-time",
        "integral-amr",
        "harmonic-kmin",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn preset_config_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = gpme(&["presets", "waiting-time"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let cfg = write(dir.path(), "w.cfg", &String::from_utf8(out.stdout).unwrap());
    let out = gpme(&["validate", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn unknown_preset_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        gpme(&["presets", "nope"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn validate_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "problem.t_end = 0.05\nscheme.dt_factor = 0.9\noutput.probes = 1.5\n",
    );
    let out = gpme(&["validate", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("stability"), "{err}");
    assert!(err.contains("probe outside domain"), "{err}");
}

#[test]
fn parse_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "run.grids = 50\nrun.grids = 100\n");
    assert_eq!(gpme(&["run", &cfg], dir.path()).status.code(), Some(1));
    let cfg = write(dir.path(), "bad2.cfg", "just text\n");
    assert_eq!(gpme(&["validate", &cfg], dir.path()).status.code(), Some(1));
    assert_eq!(
        gpme(&["run", "missing.cfg"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn front_leaving_the_domain_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "long.cfg",
        "experiment = sam-jump\nrun.grids = 25\nrun.schemes = sam-jump\nproblem.t_end = 1.0\noutput.snapshots = 0.5\n",
    );
    let out = gpme(&["run", &cfg, "--output-dir", "o"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

const SMALL: &str = "experiment = average-schemes
run.grids = 10, 20
run.schemes = arithmetic, sam-jump
problem.t_end = 0.02
output.probes = 0.25
output.snapshots = 0.01, 0.02
";

#[test]
fn run_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    let out = gpme(&["run", &cfg, "--output-dir", "res"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let res = dir.path().join("res");

    let summary = fs::read_to_string(res.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "scheme");
    assert!(header.contains(&"max_conservation_residual"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], "arithmetic");
    assert_eq!(rows[3][0], "sam-jump");
    for row in &rows {
        assert_eq!(row.len(), header.len());
    }
    let l2 = header.iter().position(|h| *h == "l2").unwrap();
    assert!(
        rows[0][l2].contains('e'),
        "scientific notation: {}",
        rows[0][l2]
    );

    let probe = fs::read_to_string(res.join("sam-jump_N20_dtf0.03125_probe_x0.25.csv")).unwrap();
    assert!(probe.starts_with("t,p,p_exact\n"));
    let snap =
        fs::read_to_string(res.join("arithmetic_N10_dtf0.03125_snapshot_t0.01.csv")).unwrap();
    assert_eq!(snap.lines().count(), 1 + 11);
    let front = fs::read_to_string(res.join("arithmetic_N10_dtf0.03125_front.csv")).unwrap();
    assert!(front.starts_with("t,xi,crossing,support,x_exact\n"));
}

#[test]
fn output_dir_defaults_to_config_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "small.cfg",
        &format!("{SMALL}output.dir = from-config\n"),
    );
    assert_eq!(gpme(&["run", &cfg], dir.path()).status.code(), Some(0));
    assert!(dir.path().join("from-config/summary.csv").exists());
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.cfg", SMALL);
    for d in ["a", "b"] {
        assert_eq!(
            gpme(&["run", &cfg, "--output-dir", d], dir.path())
                .status
                .code(),
            Some(0)
        );
    }
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() > 5);
    for name in names {
        let a = fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs");
    }
}
