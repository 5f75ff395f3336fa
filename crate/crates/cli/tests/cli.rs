use std::process::{Command, Output};

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(args)
        .env_remove("SKEIN_THREADS")
        .output()
        .expect("run skein")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_single_crossing() {
    let o = skein(&["expand", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("\tA\n") && text.contains("\tA^-1\n"), "{text}");
}

#[test]
fn budget_overrun_exits_3() {
    let o = skein(&["expand", "--m", "5", "--n", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = skein(&["expand", "--m", "3", "--n", "3", "--restricted", "--max-restricted", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(skein(&["coeff", "--state", "{\"m\":1}"]).status.code(), Some(2));
    assert_eq!(skein(&["coeff", "--b", "(3,9)", "--n", "4"]).status.code(), Some(2));
    assert_eq!(skein(&["coeff", "--state", "/nonexistent/state.json"]).status.code(), Some(2));
    assert_eq!(skein(&["expand", "--m", "0", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn coefficient_report_for_heavy_example() {
    for route in ["auto", "tree", "fiber", "oracle"] {
        let o = skein(&["coeff", "--b", "(3,4,4,3)", "--n", "4", "--route", route]);
        assert_eq!(o.status.code(), Some(0), "{route}");
        let text = stdout(&o);
        assert!(text.contains("coefficient: 1 + 2A^4 + A^8 + A^12\n"), "{text}");
        assert!(text.contains("palindromic: false\n"), "{text}");
        assert!(text.contains("b_max: (3,4,4,3)\n"), "{text}");
    }
    let o = skein(&["coeff", "--b", "(3,4,4,3)", "--n", "4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["coefficient"], "1 + 2A^4 + A^8 + A^12");
}

#[test]
fn exported_state_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let path = path.to_str().unwrap();
    let o = skein(&["export", "--b", "(3,4,4,3)", "--n", "4", "--what", "state", "--out", path]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(path).unwrap();
    let again = skein(&["export", "--state", path, "--what", "state"]);
    assert_eq!(stdout(&again), first);
    let by_file = skein(&["coeff", "--state", path, "--route", "tree"]);
    let inline = skein(&["coeff", "--state", first.trim(), "--route", "tree"]);
    assert_eq!(stdout(&by_file), stdout(&inline));
    let filtered = skein(&["expand", "--m", "4", "--n", "4", "--restricted", "--filter-state", path]);
    assert!(stdout(&filtered).ends_with("\t1 + 2A^4 + A^8 + A^12\n"));
}

#[test]
fn exports_dot() {
    let o = skein(&["export", "--b", "(3,4,4,3)", "--n", "4", "--what", "hasse"]);
    let text = stdout(&o);
    assert!(text.starts_with("digraph"), "{text}");
    assert_eq!(text.matches("|b|=").count(), 5);
    let o = skein(&["export", "--b", "(3,4,4,3)", "--n", "4", "--what", "tree", "--format", "dot"]);
    assert!(stdout(&o).contains("@"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["expand", "--m", "3", "--n", "4", "--format", "json"];
    let one = skein(&[&args[..], &["--threads", "1"]].concat());
    let serial = skein(&[&args[..], &["--serial"]].concat());
    let many = Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(args)
        .env("SKEIN_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, serial.stdout);
}

#[test]
fn verify_passes_and_catches_flipped_markers() {
    let o = skein(&["verify", "--max-m", "2", "--max-n", "3", "--trees", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = skein(&["verify", "--max-m", "2", "--max-n", "3", "--trees", "20", "--flip-convention"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn factoring_needs_a_cross_section() {
    let block = r#"{"m":3,"n":3,"arcs":[["x1","y1"],["x2","y2"],["x3","yp1"],["yp2","xp2"],["yp3","xp3"],["xp1","y3"]]}"#;
    assert_eq!(skein(&["coeff", "--state", block, "--route", "factored"]).status.code(), Some(2));
    let o = skein(&["coeff", "--state", block, "--route", "tree"]);
    assert!(stdout(&o).contains("coefficient: A^-7 + A^-3 + A\n"), "{}", stdout(&o));
}
