use std::path::Path;
use std::process::{Command, Output};

use cst_arcs::harness::{read_grid, Grid};

fn cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cst-arcs"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn cst-arcs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn one_line_error(out: &Output, kind: &str) {
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error: {kind}: ")), "{err}");
}

#[test]
fn pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&cli(
        &[
            "phantom",
            "--n",
            "32",
            "--delta",
            "5",
            "--type",
            "three-disks",
            "-o",
            "p.arcg",
        ],
        d,
    ));
    ok(&cli(
        &[
            "forward", "p.arcg", "--x0max", "3N", "--rmax", "3N", "-o", "s.arcg",
        ],
        d,
    ));
    ok(&cli(
        &[
            "reconstruct",
            "s.arcg",
            "--n",
            "32",
            "--delta",
            "5",
            "-o",
            "r.arcg",
        ],
        d,
    ));
    let nmse: f64 = ok(&cli(&["nmse", "r.arcg", "p.arcg"], d))
        .trim()
        .parse()
        .unwrap();
    assert!(nmse > 0.0 && nmse < 0.1, "{nmse}");
    ok(&cli(&["render", "r.arcg", "-o", "r.pgm"], d));
    let pgm = std::fs::read(d.join("r.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n32 32\n255\n"));

    match read_grid(d.join("s.arcg")).unwrap() {
        Grid::Sinogram(s) => assert_eq!(s.values.dim(), (193, 95)),
        other => panic!("{}", other.kind_name()),
    }

    // same inputs, same bytes
    ok(&cli(
        &[
            "reconstruct",
            "s.arcg",
            "--n",
            "32",
            "--delta",
            "5",
            "-o",
            "r2.arcg",
        ],
        d,
    ));
    assert_eq!(
        std::fs::read(d.join("r.arcg")).unwrap(),
        std::fs::read(d.join("r2.arcg")).unwrap()
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.cfg"),
        "n = 16\ndelta = 1, 2\ntype = disk\nx0max = 2N\nrmax = 2N\n",
    )
    .unwrap();
    let csv = ok(&cli(
        &["sweep", "--config", "run.cfg", "--epsilon", "0.01,0.1"],
        d,
    ));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "delta,x0max,dx0,rmax,dr,epsilon,nmse,seconds");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("1,32,1,32,1,0.1,"));

    ok(&cli(
        &[
            "sweep", "--config", "run.cfg", "--delta", "3", "-o", "out.csv",
        ],
        d,
    ));
    let csv = std::fs::read_to_string(d.join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("3,"));
}

#[test]
fn failures_are_single_lines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    one_line_error(&cli(&["phantom", "--n", "8", "-o", "x.arcg"], d), "config");
    one_line_error(&cli(&["render", "missing.arcg", "-o", "x.pgm"], d), "io");
    std::fs::write(d.join("bad.arcg"), b"ARCG\x01\x00").unwrap();
    one_line_error(&cli(&["render", "bad.arcg", "-o", "x.pgm"], d), "format");
    ok(&cli(
        &[
            "phantom", "--n", "16", "--delta", "0", "--type", "disk", "-o", "p.arcg",
        ],
        d,
    ));
    ok(&cli(&["forward", "p.arcg", "-o", "s.arcg"], d));
    one_line_error(
        &cli(
            &["reconstruct", "s.arcg", "--epsilon", "0", "-o", "r.arcg"],
            d,
        ),
        "config",
    );
    one_line_error(
        &cli(&["reconstruct", "p.arcg", "-o", "r.arcg"], d),
        "config",
    );
    one_line_error(
        &cli(
            &["reconstruct", "s.arcg", "--delta", "1,2", "-o", "r.arcg"],
            d,
        ),
        "config",
    );
    one_line_error(&cli(&["frobnicate"], d), "usage");
}
