use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibercheck")).args(args).env_remove("FIBERCHECK_MAX_DEPTH").output().unwrap()
}

fn run_path(args: &[&str], path: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibercheck")).args(args).arg(path).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(examples().join(name)).unwrap()
}

#[test]
fn germ_reports_exact_invariants() {
    let o = run(&["germ", "y^3 - x^4"]);
    assert_eq!(o.status.code(), Some(0));
    let json = run(&["--format", "json", "germ", "y^3 - x^4"]);
    let text = stdout(&json);
    for needle in ["\"mu\": 6", "\"delta\": 3", "\"branches\": 1"] {
        assert!(text.contains(needle), "{needle} missing from {text}");
    }
}

#[test]
fn non_reduced_germ_warns() {
    let o = run(&["germ", "x^2*y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not reduced"), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_one() {
    assert_eq!(run(&["germ", "y^2 - "]).status.code(), Some(1));
    assert_eq!(run(&["germ", "2y"]).status.code(), Some(1));
    assert_eq!(run(&["audit", "/nonexistent/file.toml"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("typo.toml");
    std::fs::write(&file, fixture_text("nodal-genus2.toml").replace("fiber_genus", "genuss")).unwrap();
    let o = run_path(&["audit"], &file);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("genuss"), "{}", stderr(&o));
}

#[test]
fn irregularity_below_base_genus_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("q.toml");
    std::fs::write(&file, fixture_text("nodal-genus2.toml").replace("base_genus = 0", "base_genus = 2")).unwrap();
    let o = run_path(&["audit"], &file);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("q ≥ b required"), "{}", stderr(&o));
}

#[test]
fn fixtures_audit_clean_in_both_formats() {
    for name in ["nodal-genus2", "double-cover-exp1", "cusp-fiber", "product-c2xe"] {
        let path = examples().join(name);
        let text = run_path(&["audit", "--strict-extras"], &path);
        assert_eq!(text.status.code(), Some(0), "{name}: {}", stdout(&text));
        assert!(stdout(&text).contains("result: consistent"));
        let json = run_path(&["--format", "json", "audit"], &path);
        assert_eq!(json.status.code(), Some(0));
        assert!(stdout(&json).contains("\"consistent\": true"), "{name}");
    }
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let path = examples().join("double-cover-exp1.toml");
    let text = stdout(&run_path(&["audit"], &path));
    let json = stdout(&run_path(&["--format", "json", "audit"], &path));
    let rows = [("chi_f", "chi_f", "1"), ("K_f_sq", "K_f^2", "4"), ("e_f", "e_f", "8"), ("h11", "h11", "6")];
    for (key, label, value) in rows {
        assert!(json.contains(&format!("\"{key}\": {value}")), "{key} in {json}");
        let line = text.lines().find(|l| l.split_whitespace().next() == Some(label)).unwrap();
        assert_eq!(line.split_whitespace().collect::<Vec<_>>(), [label, value], "{text}");
    }
}

#[test]
fn corrupted_picard_number_leaves_residual_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(&file, fixture_text("double-cover-exp1.toml").replace("h11 = 6", "h11 = 7")).unwrap();
    let o = run_path(&["--format", "json", "audit"], &file);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"residual\": -1"), "{}", stdout(&o));
    let o = run_path(&["audit"], &file);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("DATA INCONSISTENT"));
}

#[test]
fn cover_verb() {
    let o = run_path(&["--format", "json", "cover"], &examples().join("double-cover-exp1"));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for needle in ["\"chiO_S\": 0", "\"K_S_sq\": -4", "\"e_S\": 4"] {
        assert!(out.contains(needle), "{needle} in {out}");
    }
    assert_eq!(run_path(&["cover"], &examples().join("nodal-genus2")).status.code(), Some(1));
}

#[test]
fn fiber_and_resolve_verbs() {
    let o = run_path(&["fiber"], &examples().join("cusp-fiber"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["resolve", "y^2 - x^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn depth_cap_comes_from_the_environment() {
    let deep = "y^2 - x^41";
    assert_eq!(run(&["germ", deep]).status.code(), Some(0));
    let capped = Command::new(env!("CARGO_BIN_EXE_fibercheck"))
        .args(["germ", deep])
        .env("FIBERCHECK_MAX_DEPTH", "5")
        .output()
        .unwrap();
    assert_ne!(capped.status.code(), Some(0));
    assert!(stderr(&capped).contains('5'), "{}", stderr(&capped));
}

#[test]
fn empty_corpus_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_path(&["corpus"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 of 0"), "{}", stdout(&o));
}

#[test]
fn corpus_of_worked_examples_shows_zero_margins() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["nodal-genus2.toml", "double-cover-exp1.toml"] {
        std::fs::copy(examples().join(name), dir.path().join(name)).unwrap();
    }
    let o = run_path(&["corpus"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.trim_start().starts_with("arakelov-semistable-s1")).unwrap();
    assert_eq!(row.split_whitespace().skip(1).collect::<Vec<_>>(), ["0", "0"], "{row}");
    assert!(out.contains("2 of 2"));
}

#[test]
fn corpus_with_one_corrupted_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(examples().join("nodal-genus2.toml"), dir.path().join("a.toml")).unwrap();
    std::fs::write(dir.path().join("b.toml"), fixture_text("double-cover-exp1.toml").replace("p_g = 0", "p_g = 1")).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    for mode in [&["corpus"][..], &["--sequential", "corpus"][..]] {
        let o = run_path(mode, dir.path());
        assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
        assert!(stdout(&o).contains("1 of 2"), "{}", stdout(&o));
    }
    std::fs::write(dir.path().join("c.toml"), "name = ").unwrap();
    assert_eq!(run_path(&["corpus"], dir.path()).status.code(), Some(2));
    std::fs::remove_file(dir.path().join("b.toml")).unwrap();
    assert_eq!(run_path(&["corpus"], dir.path()).status.code(), Some(1));
}
