mod common;

use std::path::Path;
use std::process::Command;

use gddx::cli::{self, EXIT_NOT_PROVED, EXIT_PROVED, EXIT_RESOURCE, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn gddx(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(std::iter::once("gddx").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    common::fixture_path(name).to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn nine_point_in_german() {
    let r = gddx(&["prove", &fixture("ninepoint.gcs"), "--lang", "de"]);
    assert_eq!(r.code, EXIT_PROVED, "{}", r.err);
    assert!(r.out.lines().next().unwrap().contains("konzyklisch(D,E,F,G)"), "{}", r.out);
    assert!(r.out.contains("nach Voraussetzung"));
    assert!(r.out.lines().any(|l| l.starts_with("  ")));
    assert!(r.err.is_empty());
}

#[test]
fn dot_output() {
    let r = gddx(&["prove", &fixture("ninepoint.gcs"), "--format", "dot"]);
    assert_eq!(r.code, EXIT_PROVED);
    assert!(r.out.starts_with("digraph proof {"));
    assert!(r.out.contains("rankdir=BT"));
}

#[test]
fn no_structure_gives_flat_list() {
    let flat = gddx(&["prove", &fixture("ninepoint.gcs"), "--no-structure"]);
    let also_flat = gddx(&["prove", &fixture("ninepoint.gcs"), "--format", "flat"]);
    assert_eq!(flat.code, EXIT_PROVED);
    assert_eq!(flat.out, also_flat.out);
    assert!(!flat.out.lines().any(|l| l.starts_with(' ')));
    assert!(flat.out.contains("; because "));
}

#[test]
fn unproved_goal_exits_one() {
    let r = gddx(&["prove", &fixture("scalene.gcs")]);
    assert_eq!(r.code, EXIT_NOT_PROVED);
    assert!(r.out.contains("cong(A,B,A,C)"), "{}", r.out);
    assert!(r.out.contains("false on diagram"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gcs", "point A\npoint B\nmidpoint M A Q\n");
    let r = gddx(&["prove", &bad]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("line 3"), "{}", r.err);

    let r = gddx(&["prove", &fixture("ninepoint.gcs"), "--lang", "zz"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("zz"));

    assert_eq!(gddx(&["prove", "/nonexistent/file.gcs"]).code, EXIT_USAGE);
    assert_eq!(gddx(&["prove"]).code, EXIT_USAGE);
    assert_eq!(gddx(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(gddx(&["prove", &fixture("ninepoint.gcs"), "--goal", "para A"]).code, EXIT_USAGE);
    assert_eq!(gddx(&["prove", &fixture("ninepoint.gcs"), "--backend", "wu", "--format", "dot"]).code, EXIT_USAGE);
    assert_eq!(gddx(&["--help"]).code, 0);
}

#[test]
fn degenerate_figure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "deg.gcs", "point A\npoint B\nmidpoint M A B\nintersect X A B A M\ngoal coll X A B\n");
    let r = gddx(&["prove", &p]);
    assert_eq!(r.code, EXIT_RESOURCE);
    assert!(r.err.contains("degenerate"));
}

#[test]
fn explicit_and_detected_goals() {
    let r = gddx(&["prove", &fixture("midline.gcs"), "--goal", "para A B E F"]);
    assert_eq!(r.code, EXIT_PROVED);
    let listed = gddx(&["detect", &fixture("ninepoint.gcs")]);
    assert_eq!(listed.code, 0);
    let (n, _) = listed
        .out
        .lines()
        .find(|l| l.ends_with("cyclic D E F G"))
        .unwrap()
        .split_once(". ")
        .unwrap();
    let auto = gddx(&["prove", &fixture("ninepoint.gcs"), "--goal", &format!("auto:{n}")]);
    let declared = gddx(&["prove", &fixture("ninepoint.gcs")]);
    assert_eq!(auto.code, EXIT_PROVED);
    assert_eq!(auto.out, declared.out);
}

#[test]
fn detect_on_single_point_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "one.gcs", "point A\n");
    let r = gddx(&["detect", &p]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
}

#[test]
fn wu_backend() {
    let r = gddx(&["prove", &fixture("midline.gcs"), "--backend", "wu"]);
    assert_eq!(r.code, EXIT_PROVED, "{}", r.err);
    assert!(r.out.contains("≠ 0"));
    let r = gddx(&["prove", &fixture("scalene.gcs"), "--backend", "wu"]);
    assert_eq!(r.code, EXIT_NOT_PROVED);
}

#[test]
fn geogebra_input() {
    let r = gddx(&["prove", &fixture("midline.xml"), "--goal", "para E F A B"]);
    assert_eq!(r.code, EXIT_PROVED, "{}", r.err);
    // An empty goal has nothing to fall back on for an imported figure.
    assert_eq!(gddx(&["prove", &fixture("midline.xml")]).code, EXIT_USAGE);
}

#[test]
fn lint_exit_codes() {
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/i18n");
    let r = gddx(&["i18n-lint", shipped]);
    assert_eq!(r.code, 0, "{}", r.out);
    assert!(r.out.contains("de: ok"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(format!("{shipped}/en.csv"), dir.path().join("en.csv")).unwrap();
    write(dir.path(), "fr.csv", "1,because,parce que\n");
    let r = gddx(&["i18n-lint", dir.path().to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("missing key"));

    // A duplicate key stops the catalog from loading at all.
    write(dir.path(), "fr.csv", "1,because,parce que\n1,because,car\n");
    let r = gddx(&["i18n-lint", dir.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("line 2") && r.err.contains("line 1"), "{}", r.err);

    std::fs::remove_file(dir.path().join("en.csv")).unwrap();
    assert_eq!(gddx(&["i18n-lint", dir.path().to_str().unwrap()]).code, EXIT_USAGE);
}

#[test]
fn output_is_byte_identical_across_runs_and_processes() {
    let args = ["prove", &fixture("ninepoint.gcs"), "--lang", "de", "--seed", "5"];
    let a = gddx(&args);
    let b = gddx(&args);
    assert_eq!(a.out, b.out);
    let spawn = || Command::new(env!("CARGO_BIN_EXE_gddx")).args(args).output().unwrap();
    let (p, q) = (spawn(), spawn());
    assert_eq!(p.status.code(), Some(EXIT_PROVED));
    assert_eq!(p.stdout, q.stdout);
    assert_eq!(p.stdout, a.out.as_bytes());
}
