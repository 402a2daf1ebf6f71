//! End-to-end tests of the `ldg` binary: exit codes, byte-stable CSV output,
//! and the --out / config-out precedence.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ldg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldg"))
        .args(args)
        .output()
        .expect("spawn ldg")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    p.push(name);
    p
}

fn write_cfg(name: &str, text: &str) -> PathBuf {
    let p = tmp(name);
    fs::write(&p, text).unwrap();
    p
}

const CONV: &str = "\
problem = ex1_cubic
k = 1
cells = 8,16
theta = 1.0
dt_override = 2e-3
t_end = 0.1
";

#[test]
fn convergence_runs_and_is_byte_stable() {
    let cfg = write_cfg("conv.cfg", CONV);
    let a = ldg(&["convergence", "--config", cfg.to_str().unwrap()]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = ldg(&["convergence", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout, "repeat runs must emit identical bytes");

    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,theta,N,error,order");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,1,8,") && lines[1].ends_with(','));
    let order: f64 = lines[2].rsplit(',').next().unwrap().parse().unwrap();
    assert!((order - 2.0).abs() < 0.4, "P1 order ~2, got {order}");
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn out_flag_beats_config_out() {
    let via_flag = tmp("via_flag.csv");
    let via_cfg = tmp("via_cfg.csv");
    let cfg_text = format!("{CONV}out = {}\n", via_cfg.display());
    let cfg = write_cfg("conv_out.cfg", &cfg_text);
    let _ = fs::remove_file(&via_flag);
    let _ = fs::remove_file(&via_cfg);

    let r = ldg(&[
        "convergence",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        via_flag.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty(), "csv must go to the file, not stdout");
    assert!(via_flag.exists() && !via_cfg.exists());

    // without --out the config's `out` applies
    let r = ldg(&["convergence", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success());
    assert!(via_cfg.exists());
    assert_eq!(fs::read(&via_flag).unwrap(), fs::read(&via_cfg).unwrap());
}

#[test]
fn unknown_key_exits_2_with_line_number() {
    let cfg = write_cfg("bad_key.cfg", "problem = ex1_cubic\nwat = 1\n");
    let r = ldg(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("line 2") && err.contains("wat"), "{err}");
}

#[test]
fn missing_config_file_exits_2() {
    let r = ldg(&["run", "--config", tmp("does_not_exist.cfg").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn mode_mismatch_exits_2() {
    let cfg = write_cfg("mode_mismatch.cfg", &format!("{CONV}mode = history\n"));
    let r = ldg(&["convergence", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("history"));
}

#[test]
fn blowup_exits_3() {
    // dt far beyond the parabolic stability limit
    let cfg = write_cfg(
        "blow.cfg",
        "problem = ex1_cubic\nk = 2\ncells = 20\ntheta = 1.0\ndt_override = 0.05\nt_end = 1\n",
    );
    let r = ldg(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("blew up"));
}

#[test]
fn snapshot_has_ten_points_per_cell() {
    let cfg = write_cfg(
        "snap.cfg",
        "problem = ex6_buckley\nk = 1\ncells = 12\ntheta = 1.0\ncfl = 0.05\nt_end = 0.01\n",
    );
    let r = ldg(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,u1,u2");
    assert_eq!(lines.len(), 1 + 12 * 10);
    // cell endpoints are sampled: x = 0 appears once, interior interfaces twice
    let first_x: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
    assert_eq!(first_x, 0.0);
    let xs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    // printed x carries six significant digits
    let iface = 1.0 / 12.0;
    let hits = xs.iter().filter(|&&x| (x - iface).abs() < 1e-6).count();
    assert_eq!(hits, 2, "interface must carry both one-sided samples");
}

#[test]
fn history_stride_one_rows_match_step_count() {
    // dt divides t_end exactly: 5 steps, plus the projected t = 0 row
    let cfg = write_cfg(
        "hist.cfg",
        "problem = ex1_cubic\nk = 1\ncells = 8\ntheta = 0.8\ndt_override = 2e-3\nt_end = 0.01\n",
    );
    let r = ldg(&["history", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,t,error");
    assert_eq!(lines.len(), 1 + 1 + 5, "t = 0 row plus one row per step");
    assert!(lines[1].starts_with("0.8,0,"));
    let last_t: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(last_t, 0.01, "final row must land on t_end exactly");
}

#[test]
fn projtest_reports_every_kind() {
    let cfg = write_cfg(
        "proj.cfg",
        "problem = ex1_cubic\nk = 1\ncells = 8,16\ntheta = 0.8\n",
    );
    let r = ldg(&["projtest", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    for kind in ["l2", "ggr_plus", "ggr_minus", "ggr_vector", "modified"] {
        assert_eq!(
            text.lines().filter(|l| l.starts_with(&format!("{kind},"))).count(),
            2,
            "two rows for {kind}"
        );
    }
}

#[test]
fn fluxtest_residuals_are_machine_small() {
    let cfg = write_cfg(
        "fluxpool.cfg",
        "problem = ex1_cubic\nk = 2\ncells = 9\ntheta = 1.2\n",
    );
    let r = ldg(&["fluxtest", "--config", cfg.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let resid: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(resid < 1e-11, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 3, "skew, energy, conservation");
}

#[test]
fn nonperiodic_projtest_rejected() {
    let cfg = write_cfg(
        "proj_np.cfg",
        "problem = ex4_dirichlet\nk = 1\ncells = 8,16\ntheta = 0.8\n",
    );
    let r = ldg(&["projtest", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}
