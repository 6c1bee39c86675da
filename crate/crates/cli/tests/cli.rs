use std::path::Path;
use std::process::{Command, Output};

fn logiq(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logiq"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn sweep_csv(out: &Path, threads: &str) -> String {
    let o = logiq(
        &[
            "--threads",
            threads,
            "sweep",
            "--set",
            "layout=linear",
            "--set",
            "memory_times=0:0.4:0.05",
            "--set",
            "gate_errors=1e-3,1e-2",
        ],
        out,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out.join("sweep.csv")).unwrap()
}

#[test]
fn sweep_csv_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = sweep_csv(dir.path(), "1");
    let b = sweep_csv(dir.path(), "1");
    let c = sweep_csv(dir.path(), "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let rows: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 2 * 9);
    assert!(a.contains("# config_sha256 = "));
}

#[test]
fn noiseless_single_point_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noiseless.conf");
    std::fs::write(&cfg, "# no decay, perfect gates\nt1 = inf\nt2 = inf\ngate_errors = 0\nmemory_times = 0.5\n").unwrap();
    let o = logiq(&["--config", cfg.to_str().unwrap(), "sweep"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 1);
    let gain: f64 = rows[0].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(gain, 0.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "code = combined5\nmemory_times = 0.1\n").unwrap();
    let o = logiq(&["--config", cfg.to_str().unwrap(), "sweep", "--set", "code=bitflip3"], dir.path());
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.contains("# code = bitflip3"));
    assert!(csv.lines().last().unwrap().starts_with("bitflip3,"));
}

#[test]
fn validation_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for set in ["code=shor9", "memory_times=0.5,0.1", "gate_errors=", "t1=-1", "nonsense"] {
        let o = logiq(&["sweep", "--set", set], dir.path());
        assert_eq!(o.status.code(), Some(2), "{set}");
    }
    let o = logiq(&["reproduce", "fig99"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = logiq(&["--config", "/nonexistent/logiq.conf", "sweep"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_check_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    // the published device crossings are not reproduced
    let o = logiq(&["reproduce", "device", "--check"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
    let o = logiq(&["reproduce", "ibm", "--check"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("ibm_bitflip3.csv").exists());
}

#[test]
fn route_report_lists_swap_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = logiq(&["route-report"], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let swaps: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("combined5"))
        .map(|l| l.split_whitespace().nth(3).unwrap())
        .collect();
    assert_eq!(swaps, ["0", "2", "6"]);
}

#[test]
fn compare_linear_noiseless_edge() {
    let dir = tempfile::tempdir().unwrap();
    let o = logiq(
        &[
            "compare-linear",
            "--p-e",
            "0",
            "--set",
            "t1=inf",
            "--set",
            "t2=inf",
            "--set",
            "gate_errors=0",
            "--set",
            "memory_times=0:0.3:0.1",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("simulated window = none"));
}
