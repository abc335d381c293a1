use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nerveseq"))
        .args(args)
        .env("NERVESEQ_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let out = run(args, dir.path());
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn text(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = run(args, dir.path());
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn barcode_of_square() {
    let sq = data("square.cplx");
    let t = text(&["barcode", path(&sq), "--format", "text"]);
    assert_eq!(t, "0 0 inf\n1 1 4\n1 2 3\n");
    let one = text(&["barcode", path(&sq), "--degree", "1", "--format", "text"]);
    assert_eq!(one, "1 1 4\n1 2 3\n");
    let halved = text(&["barcode", path(&sq), "--grid", "1/2", "--format", "text"]);
    assert_eq!(halved, "0 0 inf\n1 2 8\n1 4 6\n");
    let zero = text(&["barcode", path(&sq), "--max-degree", "0", "--format", "text"]);
    assert_eq!(zero, "0 0 inf\n");
}

#[test]
fn barcode_svg_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["barcode", path(&data("square.cplx")), "--svg"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("barcode.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("stroke-width=\"3\"").count(), 3);
}

#[test]
fn nerve_of_loop_cover() {
    let v = json(&["nerve", path(&data("loop.cover"))]);
    assert_eq!(v["names"], serde_json::json!(["upper", "lower"]));
    assert_eq!(v["max_card"], 3);
    assert_eq!(v["nerve"], "simplex 0 0\nsimplex 1 1\nsimplex 0 1 1\n");
    assert_eq!(v["acyclicity"]["epsilon"], "inf");
    let capped = text(&["nerve", path(&data("loop.cover")), "--max-card", "1", "--strategy", "max", "--format", "text"]);
    assert!(capped.contains("# vertex 1 = lower"));
    assert!(!capped.contains("simplex 0 1"));
}

#[test]
fn check_cover_summarizes() {
    let v = json(&["check-cover", path(&data("weighted.cover"))]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["members"][0]["name"], "a");
    assert_eq!(v["acyclicity"]["epsilon"], "0");
}

#[test]
fn spectral_pages() {
    let cover = data("square.cover");
    let all = json(&["spectral", path(&cover)]);
    let pages = all["pages"].as_array().unwrap();
    assert_eq!(pages.len() as u64, all["infinity_page"].as_u64().unwrap());
    let e2 = json(&["spectral", path(&cover), "--page", "2"]);
    assert_eq!(e2["pages"][0], pages[1]);
    let grid = text(&["spectral", path(&cover), "--page", "0", "--format", "text"]);
    assert!(grid.starts_with("E^0"));
}

#[test]
fn total_matches_ambient() {
    let v = json(&["total", path(&data("square.cover"))]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["total"], v["ambient"]);
}

#[test]
fn verify_bound_passes_on_shipped_covers() {
    let v = json(&["verify-bound", path(&data("square.cplx")), path(&data("square.cover"))]);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["units"], "doubled-grid-steps");
    assert_eq!(json(&["verify-bound", path(&data("weighted.cover"))])["verdict"], "pass");
    assert_eq!(json(&["verify-bound", path(&data("loop.cover"))])["verdict"], "vacuous");
    let f3 = json(&["verify-bound", path(&data("square.cover")), "--field", "3"]);
    assert_eq!(f3["verdict"], "pass");
}

#[test]
fn examples_emit_files_that_reload() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, stem) in [("sphere", "sphere-2"), ("bipyramid", "bipyramid-2")] {
        let out = run(&["examples", kind, "--dim", "2", "--emit"], dir.path());
        assert!(out.status.success());
        let cplx = dir.path().join(format!("{stem}.cplx"));
        let cover = dir.path().join(format!("{stem}.cover"));
        let direct: Value = serde_json::from_slice(&out.stdout).unwrap();
        let reloaded = json(&["verify-bound", path(&cplx), path(&cover)]);
        assert_eq!(direct["verdict"], "pass");
        assert_eq!(direct["degrees"], reloaded["degrees"]);
    }
    let s = json(&["examples", "sharpness", "--dim", "3"]);
    assert!(s["equalities"].as_array().unwrap().iter().all(|e| e["measured"] == e["expected"]));
    let r = run(&["examples", "random", "--seed", "4", "--emit"], dir.path());
    assert!(r.status.success());
    assert!(dir.path().join("random-4.cover").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cover = data("square.cover");
    let commands: [&[&str]; 4] = [
        &["spectral", path(&cover)],
        &["verify-bound", path(&cover), "--format", "text"],
        &["examples", "random", "--seed", "11"],
        &["nerve", path(&cover)],
    ];
    for args in commands {
        assert_eq!(text(args), text(args), "{args:?}");
    }
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cplx");
    std::fs::write(&bad, "simplex 0 1\nsimplex 0 1 3 x\n").unwrap();
    let out = run(&["barcode", path(&bad)], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let missing = run(&["barcode", path(&dir.path().join("nope.cplx"))], dir.path());
    assert_eq!(missing.status.code(), Some(2));

    let incompatible = run(&["verify-bound", path(&data("square.cplx")), path(&data("loop.cover"))], dir.path());
    assert_eq!(incompatible.status.code(), Some(2));

    let field = run(&["barcode", path(&data("square.cplx")), "--field", "4"], dir.path());
    assert_eq!(field.status.code(), Some(2));

    let usage = run(&["frobnicate"], dir.path());
    assert_eq!(usage.status.code(), Some(2));

    let real = dir.path().join("real.cplx");
    std::fs::write(&real, "simplex 0 0.5\n").unwrap();
    assert_eq!(run(&["barcode", path(&real)], dir.path()).status.code(), Some(2));
    assert!(run(&["barcode", path(&real), "--grid", "0.5"], dir.path()).status.success());
}
