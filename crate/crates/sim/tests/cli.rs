use std::path::Path;
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockade-sim")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn preset_run_writes_every_record_and_a_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let run = sim(&["preset", "fig2", "--out", out.to_str().unwrap(), "--jobs", "2", "--plot"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    // 201 detunings, one row per solver.
    assert_eq!(text.lines().count(), 1 + 402);
    let script = std::fs::read_to_string(dir.path().join("fig2.csv.gp")).unwrap();
    assert!(script.contains("'fig2.csv'"));
}

#[test]
fn exit_codes_separate_user_errors_from_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let out = out.to_str().unwrap();

    assert_eq!(code(&sim(&["frobnicate"])), 1);
    assert_eq!(code(&sim(&["--help"])), 0);
    assert_eq!(code(&sim(&["preset", "fig99", "--out", out])), 1);

    let missing = dir.path().join("absent.toml");
    assert_eq!(code(&sim(&["sweep", "--config", missing.to_str().unwrap(), "--out", out])), 2);

    let bad = dir.path().join("bad.toml");
    write(&bad, "schema_version = 1\nn_max = 2\naxis1.param = \"g\"\naxis1.min = 1.0\naxis1.max = 0.0\naxis1.count = 0\n");
    let run = sim(&["sweep", "--config", bad.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&run), 1);
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("n_max") && stderr.contains("count"), "{stderr}");

    let good = dir.path().join("good.toml");
    write(&good, "schema_version = 1\nsolver = \"amplitudes\"\naxis1.param = \"delta_c\"\naxis1.min = 1.0\naxis1.max = 2.0\naxis1.count = 3\n");
    let unwritable = dir.path().join("no/such/dir/o.csv");
    assert_eq!(code(&sim(&["sweep", "--config", good.to_str().unwrap(), "--out", unwritable.to_str().unwrap()])), 2);
}

#[test]
fn format_follows_extension_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    write(&cfg, "schema_version = 1\nsolver = \"amplitudes\"\naxis1.param = \"delta_c\"\naxis1.min = 1.0\naxis1.max = 2.0\naxis1.count = 3\n");
    let cfg = cfg.to_str().unwrap();

    let jsonl = dir.path().join("o.jsonl");
    assert_eq!(code(&sim(&["sweep", "--config", cfg, "--out", jsonl.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&jsonl).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with('{')));

    let forced = dir.path().join("o.txt");
    let run = sim(&["sweep", "--config", cfg, "--out", forced.to_str().unwrap(), "--format", "jsonl"]);
    assert_eq!(code(&run), 0);
    assert!(std::fs::read_to_string(&forced).unwrap().starts_with('{'));
}

#[test]
fn jobs_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    write(&cfg, "schema_version = 1\nsolver = \"amplitudes\"\naxis1.param = \"g\"\naxis1.min = 0.5\naxis1.max = 1.5\naxis1.count = 7\n");
    let run_with = |jobs: &str, name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_blockade-sim"))
            .args(["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env("BLOCKADE_SIM_JOBS", jobs)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(run_with("1", "a.csv"), run_with("3", "b.csv"));
}

#[test]
fn self_check_passes() {
    let run = sim(&["check"]);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert_eq!(code(&run), 0, "{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
    assert_eq!(stdout.lines().count(), blockade_sim::selfcheck::CHECKS.len());
}
