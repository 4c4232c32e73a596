use std::process::{Command, Output};

use flashext::charts::{check_svg, parse_tsv};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flashext")).args(args).env_remove("FLASHEXT_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn basis_lists_monomials() {
    let o = run(&["basis", "--height", "0", "--max-weight", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count(), 3);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["ext-eq", "--k", "x", "--m", "1"]).status.code(), Some(2));
}

#[test]
fn out_resolves_against_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_flashext"))
        .args(["ext-eq", "--k", "1", "--m", "2", "--out", "chart.tsv"])
        .env("FLASHEXT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("chart.tsv")).unwrap();
    let c = parse_tsv(&text).unwrap();
    assert!(c.classes.iter().any(|x| x.name == "x0"));
}

#[test]
fn svg_output_is_well_formed() {
    let o = run(&["ext-eq", "--k", "2", "--m", "0", "--chart", "svg"]);
    assert!(o.status.success());
    let s = check_svg(&stdout(&o)).unwrap();
    assert_eq!(s.panels, vec!["A".to_string(), "B".to_string()]);
    let one = run(&["ext-eq", "--k", "2", "--m", "0", "--chart", "svg", "--no-split"]);
    assert_eq!(check_svg(&stdout(&one)).unwrap().panels.len(), 1);
}

#[test]
fn tsv_round_trips_through_chart() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m2.tsv");
    assert!(run(&["m2", "--height", "1", "--out", path.to_str().unwrap()]).status.success());
    let o = run(&["chart", "--input", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn split_reports_brown_gitler_index() {
    let o = run(&["split", "--kind", "bg", "--k", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("L(7)"), "{}", stdout(&o));
}

#[test]
fn cooperations_is_json() {
    let o = run(&["cooperations", "--k", "3"]);
    assert!(o.status.success());
    let _: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
}

#[test]
fn verify_exit_status_follows_the_triangle_reading() {
    let stated = run(&["verify", "--k-max", "2", "--m-max", "1"]);
    assert_eq!(stated.status.code(), Some(1));
    let fails: Vec<String> = stdout(&stated).lines().filter(|l| l.starts_with("FAIL")).map(String::from).collect();
    assert_eq!(fails.len(), 1, "{fails:?}");
    assert!(fails[0].contains("(2,0)") || fails[0].contains("k=2 m=0"), "{fails:?}");
    let forced = run(&["verify", "--k-max", "2", "--m-max", "1", "--reading", "degree-forced"]);
    assert_eq!(forced.status.code(), Some(0), "{}", stdout(&forced));
    assert!(!stdout(&forced).contains("FAIL"));
}
