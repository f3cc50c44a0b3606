//! End-to-end checks of the `josephus` binary: output shapes, exit codes,
//! and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn josephus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_josephus"))
        .args(args)
        .env("JOSEPHUS_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn web_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../web").join(name)
}

#[test]
fn solve_defaults_to_the_hundred_instance() {
    let out = josephus(&["solve"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "26\n");
}

#[test]
fn solve_agrees_across_algorithms() {
    for algorithm in ["imperative", "naive", "zipper", "order-statistic", "recurrence"] {
        let out = josephus(&["solve", "-n", "100", "-m", "10", "--algorithm", algorithm]);
        assert_eq!(code(&out), 0, "{algorithm}: {}", stderr_of(&out));
        assert_eq!(stdout_of(&out), "26\n", "{algorithm}");
    }
    let out = josephus(&["solve", "-n", "64", "-m", "2", "--algorithm", "closed-form"]);
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn solve_single_player() {
    let out = josephus(&["solve", "-n", "1", "-m", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn solve_rejects_zero_players_with_usage_error() {
    let out = josephus(&["solve", "-n", "0", "-m", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_order_prints_the_elimination_order() {
    let out = josephus(&["solve", "-n", "6", "-m", "3", "--order"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "order: 3 6 4 2 5\nsurvivor: 1\n");
}

#[test]
fn solve_order_with_survivor_only_algorithm_is_usage_error() {
    let out = josephus(&["solve", "-n", "6", "-m", "3", "--order", "--algorithm", "recurrence"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("--order"));
}

#[test]
fn closed_form_requires_step_two() {
    let out = josephus(&["solve", "-n", "10", "-m", "3", "--algorithm", "closed-form"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("kill step 2"));
}

#[test]
fn trace_json_has_the_full_order() {
    let out = josephus(&["trace", "-n", "6", "-m", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["n"], 6);
    assert_eq!(value["m"], 3);
    assert_eq!(value["order"].as_array().unwrap().len(), 5);
    assert_eq!(value["survivor"], 1);
    assert!(value.get("states").is_none());
}

#[test]
fn trace_single_player_has_empty_order() {
    let out = josephus(&["trace", "-n", "1", "-m", "1"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["order"].as_array().unwrap().len(), 0);
    assert_eq!(value["survivor"], 1);
}

#[test]
fn trace_csv_has_one_row_per_kill() {
    let out = josephus(&["trace", "-n", "6", "-m", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,killed,remaining_count");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "1,3,5");
    assert_eq!(lines[5], "5,5,1");
}

#[test]
fn trace_states_circle_serializes_circles() {
    let out = josephus(&["trace", "-n", "6", "-m", "3", "--states", "circle"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let states = value["states"].as_array().unwrap();
    assert_eq!(states.len(), 5);
    assert_eq!(states[0]["focus"], 4);
    assert_eq!(states[0]["rest"], serde_json::json!([5, 6, 1, 2]));
}

#[test]
fn trace_states_imperative_serializes_snapshots() {
    let out = josephus(&["trace", "-n", "6", "-m", "3", "--states", "imperative"]);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let states = value["states"].as_array().unwrap();
    assert_eq!(states[0]["index"], 2);
    assert_eq!(states[0]["prisoners"], serde_json::json!([1, 2, 4, 5, 6]));
}

#[test]
fn trace_states_with_csv_is_usage_error() {
    let out = josephus(&["trace", "--format", "csv", "--states", "circle"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_holds_on_the_demonstration_instance() {
    let out = josephus(&["verify", "--universe", "6", "-m", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["morphism"], true);
    assert_eq!(value["isomorphism"], true);
    assert_eq!(value["counterexample"], serde_json::Value::Null);
    assert_eq!(value["states_checked"], 1956 + 6);
}

#[test]
fn verify_holds_trivially_on_one_label() {
    let out = josephus(&["verify", "--universe", "1", "-m", "1"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_guards_large_universes() {
    let out = josephus(&["verify", "--universe", "9", "-m", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("guard"));
}

#[test]
fn verify_line6_reading_reports_a_counterexample_and_fails() {
    let out = josephus(&["verify", "--universe", "6", "-m", "3", "--reading", "line6"]);
    assert_eq!(code(&out), 1);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["isomorphism"], false);
    assert!(value["counterexample"].is_object());
}

#[test]
fn verify_is_schedule_independent() {
    let serial = josephus(&["verify", "--universe", "5", "-m", "3"]);
    let parallel = josephus(&["verify", "--universe", "5", "-m", "3", "--jobs", "4"]);
    assert_eq!(stdout_of(&serial), stdout_of(&parallel));
    assert_eq!(code(&serial), code(&parallel));
}

#[test]
fn diagram_with_map_has_both_clusters_and_dashed_edges() {
    let out = josephus(&["diagram", "--universe", "2", "-m", "3", "--map"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let graph = josephus::dot::parse_dot(&stdout_of(&out)).unwrap();
    assert_eq!(graph.nodes.len(), 4 + 6);
    assert_eq!(graph.solid_edges().count(), 10);
    assert_eq!(graph.dashed_edges().count(), 4);
}

#[test]
fn diagram_single_system_defaults_to_circles() {
    let out = josephus(&["diagram", "--universe", "2", "-m", "3"]);
    let graph = josephus::dot::parse_dot(&stdout_of(&out)).unwrap();
    assert_eq!(graph.nodes.len(), 4);
    assert_eq!(graph.dashed_edges().count(), 0);
}

#[test]
fn diagram_cap_is_a_domain_error() {
    let out = josephus(&["diagram", "--universe", "6", "-m", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("cap"));
}

#[test]
fn bench_counters_are_zero_for_single_player() {
    let out = josephus(&["bench", "--sizes", "1", "-m", "10", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("solver,n,ops"));
    for line in lines {
        assert!(line.ends_with(",1,0"), "expected zero counter in {line}");
    }
}

#[test]
fn bench_output_is_deterministic() {
    let args = ["bench", "--sizes", "512,1024", "-m", "10", "--format", "csv"];
    let first = josephus(&args);
    let second = josephus(&args);
    assert_eq!(stdout_of(&first), stdout_of(&second));
}

#[test]
fn bench_closed_form_with_wrong_step_is_usage_error() {
    let out = josephus(&["bench", "--sizes", "8", "-m", "3", "--solvers", "closed-form"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tangle_reproduces_the_bundled_program() {
    let out = josephus(&[
        "tangle",
        web_path("romans.py.web").to_str().unwrap(),
        "--root",
        "The main program",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("def removeTen(prisoners):\n"));
    assert!(text.ends_with("print(prisoners)\n"));
}

#[test]
fn tangle_missing_root_is_a_domain_error() {
    let out = josephus(&[
        "tangle",
        web_path("romans.py.web").to_str().unwrap(),
        "--root",
        "No such chunk",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("No such chunk"));
}

#[test]
fn tangle_reports_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.web");
    std::fs::write(&path, "<<a>>=\n<<b>>\n@\n<<b>>=\n<<a>>\n@\n").unwrap();
    let out = josephus(&["tangle", path.to_str().unwrap(), "--root", "a"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("a -> b -> a"));
}

#[test]
fn weave_of_empty_document_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.web");
    std::fs::write(&path, "").unwrap();
    let out = josephus(&["weave", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "");
}

#[test]
fn weave_of_the_bundled_document_has_notes_and_index() {
    let out = josephus(&["weave", web_path("romans.py.web").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("**Note 1.** ⟨Procedures for data manipulation 1⟩ ≡"));
    assert!(text.contains("**Note 2.** ⟨The main program 2⟩ ≡"));
    assert!(text.contains("## Index"));
    assert!(text.contains("referenced by ⟨The main program 2⟩"));
}

#[test]
fn output_files_match_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    let to_file = josephus(&["trace", "-n", "6", "-m", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&to_file), 0);
    let to_stdout = josephus(&["trace", "-n", "6", "-m", "3"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout_of(&to_stdout));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = josephus(&["decimate"]);
    assert_eq!(code(&out), 2);
}
