//! Golden-file tests for every subcommand. Set `UPDATE_GOLDEN=1` to rewrite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubepack"))
        .args(args)
        .current_dir(root().join("fixtures"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str, actual: &str) {
    let path = root().join("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {name}");
}

fn check(args: &[&str], code: i32, name: &str) {
    let (got, stdout, stderr) = run(args);
    assert_eq!(got, code, "exit code of {args:?}; stderr: {stderr}");
    golden(name, &stdout);
}

#[test]
fn verify_lattice() {
    check(&["verify", "--in", "lattice2.json", "--format", "text"], 0, "verify_lattice.txt");
    check(&["verify", "--in", "lattice2.json"], 0, "verify_lattice.json");
}

#[test]
fn verify_overlap_is_refuted() {
    check(&["verify", "--in", "overlap.json", "--format", "text"], 2, "verify_overlap.txt");
}

#[test]
fn verify_even_sum() {
    check(&["verify", "--in", "even_sum.json", "--format", "text"], 0, "verify_even_sum.txt");
}

#[test]
fn decompose_columns_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    check(
        &["decompose", "--in", "fig2.json", "--svg", svg.to_str().unwrap()],
        0,
        "decompose_fig2.json",
    );
    golden("decompose_fig2.svg", &fs::read_to_string(svg).unwrap());
}

#[test]
fn decompose_odd_period() {
    let (code, _, stderr) = run(&["decompose", "--in", "odd.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("is odd"), "{stderr}");
    check(&["decompose", "--in", "odd.json", "--double-periods", "--format", "text"], 0, "decompose_odd_doubled.txt");
}

#[test]
fn witness_twin() {
    check(&["witness", "twin", "--in", "pack.json", "--u", "1/2,0"], 0, "witness_twin.json");
    let (code, stdout, stderr) = run(&["witness", "twin", "--in", "pack.json", "--u", "1/2,1/4"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("not covered"), "{stderr}");
}

#[test]
fn witness_orthant() {
    check(
        &["witness", "orthant", "--in", "fig2.json", "--base", "0,0", "--sign", "+,+"],
        0,
        "witness_orthant.json",
    );
    check(
        &["witness", "orthant", "--in", "fig2.json", "--base", "1,1/2", "--sign", "-,+", "--format", "text"],
        0,
        "witness_orthant.txt",
    );
    let (code, _, _) = run(&["witness", "orthant", "--in", "pack.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["witness", "orthant", "--in", "fig2.json", "--base", "1,0"]);
    assert_eq!(code, 2);
}

#[test]
fn erode() {
    check(&["erode", "--in", "pack.json", "--window", "0,0;2,1"], 2, "erode_pack.json");
    check(&["erode", "--in", "even_sum.json", "--format", "text"], 0, "erode_even_sum.txt");
}

#[test]
fn census() {
    check(
        &["census", "--in", "fig2.json", "--u", "1,1/2", "--window", "0,0;2,2", "--format", "text"],
        0,
        "census_fig2.txt",
    );
    check(&["census", "--in", "lattice2.json", "--window", "0,0;4,4", "--steps", "2"], 0, "census_lattice.json");
}

#[test]
fn certify_subgroup() {
    check(&["certify", "subgroup", "--in", "lattice2.json", "--k", "3,5", "--L", "0,1"], 0, "certify_lattice.json");
    check(
        &["certify", "subgroup", "--in", "even_sum.json", "--k", "2,2", "--L", "0,1", "--format", "text"],
        2,
        "certify_even_sum.txt",
    );
}

#[test]
fn generate() {
    check(&["generate", "lattice", "--dim", "3"], 0, "generate_lattice3.json");
    check(&["generate", "columns", "--shift", "1/3"], 0, "generate_columns.json");
    check(&["generate", "random", "--dim", "2", "--grid", "3", "--seed", "7"], 0, "generate_random.json");
    let (code, _, _) = run(&["generate", "random", "--periods", "2,3"]);
    assert_eq!(code, 2);
}

#[test]
fn generate_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lat.json");
    let (code, stdout, _) = run(&["generate", "lattice", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text, fs::read_to_string(root().join("fixtures/lattice2.json")).unwrap());
}

#[test]
fn render() {
    check(&["render", "--in", "pack.json", "--scale", "32"], 0, "render_pack.svg");
}

#[test]
fn parse_errors_exit_one() {
    let (code, _, stderr) = run(&["verify", "--in", "bad.json"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("origins[1][1]"), "{stderr}");
    let (code, _, _) = run(&["verify", "--in", "missing.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["witness", "twin", "--in", "pack.json", "--u", "1/2"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["erode", "--in", "pack.json", "--window", "0,0;0,1"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}
