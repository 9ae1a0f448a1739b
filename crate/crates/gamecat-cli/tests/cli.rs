use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn gamecat(args: &[&str]) -> Output {
    gamecat_with(args, &[], None)
}

fn gamecat_with(args: &[&str], env: &[(&str, &str)], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gamecat"));
    cmd.args(args).env_remove("GAMECAT_CAP").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn gamecat");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("wait for gamecat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Moves of a transcript: every line that is not the result line.
fn moves(transcript: &str) -> Vec<String> {
    transcript.lines().filter(|l| !l.starts_with("result:")).map(String::from).collect()
}

#[test]
fn viz_cogenerating_graph_has_one_node_per_moment() {
    let o = gamecat(&["viz", &fixture("cogenerating.json"), "--depth", "3", "--format", "graph"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    // Strings 1^a 0^b of length at most 3, counted by brute force over binary strings.
    let expected = (0..=3usize)
        .map(|len| (0..1usize << len).filter(|bits| (0..len).all(|i| i == 0 || bits >> i & 1 <= bits >> (i - 1) & 1)).count())
        .sum::<usize>();
    assert_eq!(out.lines().filter(|l| l.contains("[label=")).count(), expected);
    assert_eq!(out.lines().filter(|l| l.contains("->")).count(), expected - 1);
    assert!(out.starts_with("digraph"));
}

#[test]
fn viz_marks_turns_by_shape() {
    let o = gamecat(&["viz", &fixture("cogenerating.json"), "--depth", "1", "--format", "graph"]);
    let out = stdout(&o);
    assert!(out.contains("n0 [label=\"root\", shape=box]"));
    assert!(out.contains("n1 [label=\"1\", shape=ellipse]"));
}

#[test]
fn viz_empty_game_is_one_annotation_node() {
    let o = gamecat(&["viz", &fixture("empty.json"), "--format", "graph"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("[label=")).count(), 1);
    assert!(out.contains("empty game"));
}

#[test]
fn viz_bm_sierpinski_is_a_fan_of_chains() {
    let out_path = scratch("bm-sierpinski.txt");
    let o = gamecat(&["viz", &fixture("bm-sierpinski.json"), "--depth", "2", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out_path).unwrap();
    // Root, the two nonempty opens, and the three decreasing pairs of nonempty opens.
    assert_eq!(text.lines().count(), 1 + 2 + 3);
    assert_eq!(text.lines().filter(|l| l.contains("[bob wins]")).count(), 3);
    assert!(text.contains("    {a} (alice to move)"));
}

#[test]
fn viz_over_the_cap_exits_3() {
    let o = gamecat(&["viz", &fixture("cogenerating.json"), "--depth", "40", "--cap", "50"]);
    assert_eq!(code(&o), 3);
    let o = gamecat_with(&["viz", &fixture("cogenerating.json"), "--depth", "40"], &[("GAMECAT_CAP", "50")], None);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("cap of 50"));
}

#[test]
fn corrupted_spec_exits_2_with_location() {
    let o = gamecat(&["check", &fixture("corrupted.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("corrupted.json:2:"), "{}", stderr(&o));
}

#[test]
fn schema_errors_name_the_field() {
    let dir = scratch("schema");
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("version.json", r#"{"version":"2","kind":"bm","params":{"space":"point"}}"#, "version"),
        ("field.json", r#"{"version":"1","kind":"bm","params":{"space":"point","depth":3}}"#, "params"),
        (
            "base.json",
            r#"{"version":"1","kind":"tightness","params":{"space":"sierpinski","base":"z"}}"#,
            "params.base",
        ),
        (
            "bits.json",
            r#"{"version":"1","kind":"custom-regular","params":{"runs":[{"cycle":["0"]}]},"payoff":"10"}"#,
            "payoff",
        ),
        ("space.json", r#"{"version":"1","kind":"bm","params":{"space":"klein-bottle"}}"#, "params.space"),
        (
            "opens.json",
            r#"{"version":"1","kind":"bm","params":{"space":{"points":["a","b"],"opens":[[],["a"],["b"]]}}}"#,
            "params.space",
        ),
    ];
    for (name, text, field) in cases {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let o = gamecat(&["viz", path.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(&format!(": {field}")), "{name}: {}", stderr(&o));
    }
}

#[test]
fn counterexample_suite_passes_at_depth_6() {
    let o = gamecat(&["check", "--suite", "counterexamples", "--depth", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("counterexamples quotient_composite pass")), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("counterexamples ")).count(), 6);
}

#[test]
fn law_suite_on_canonical_games_passes_quickly() {
    let start = Instant::now();
    let specs: Vec<String> =
        ["empty", "terminal", "generating", "cogenerating"].iter().map(|n| fixture(&format!("{n}.json"))).collect();
    let mut args = vec!["check", "--suite", "laws"];
    args.extend(specs.iter().map(String::as_str));
    let o = gamecat(&args);
    assert!(start.elapsed() < Duration::from_secs(5));
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("summary pass="));
    assert!(stdout(&o).contains(" fail=0 "));
}

#[test]
fn reports_are_byte_identical() {
    let a = gamecat(&["check", "--suite", "all", "--seed", "17"]);
    let b = gamecat(&["check", "--suite", "all", "--seed", "17"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = gamecat(&["check", "--suite", "laws", "--seed", "18"]);
    assert!(stdout(&c).starts_with("report suite=laws depth=6 seed=18\n"));
}

#[test]
fn topological_specs_pass_the_topo_suite() {
    let o = gamecat(&[
        "check",
        "--suite",
        "topo",
        "--depth",
        "3",
        &fixture("bm-sierpinski.json"),
        &fixture("covering-sierpinski.json"),
        &fixture("tightness-discrete.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    for name in ["bm-sierpinski", "covering-sierpinski", "tightness-discrete"] {
        assert!(out.contains(&format!("topo {name}/winners pass")), "{out}");
        assert!(out.contains(&format!("topo {name}/universality pass")), "{out}");
    }
    assert!(out.contains("topo naturality/mutation-caught pass"));
}

#[test]
fn non_regular_specs_are_undecided_in_the_metric_suite() {
    let o = gamecat(&["check", "--suite", "metric", &fixture("cogenerating.json"), &fixture("three-runs.json")]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("metric cogenerating/regular undecided-at-depth-6"), "{out}");
    assert!(out.contains("metric three-runs/ball-roundtrip pass"));
}

#[test]
fn play_bm_sierpinski_against_repeat() {
    let o = gamecat(&[
        "play",
        &fixture("bm-sierpinski.json"),
        "--side",
        "alice",
        "--opponent",
        "repeat-bob",
        "--innings",
        "3",
        "--script",
        &fixture("alice-moves.txt"),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(
        moves(&out),
        vec!["0 alice {a,b}", "0 bob {a,b}", "1 alice {a}", "1 bob {a}", "2 alice {a}", "2 bob {a}"]
    );
    assert!(out.ends_with("result: bob wins\n"));
}

#[test]
fn scripted_play_is_reproducible_and_saved() {
    let saved = scratch("transcript.txt");
    let args = [
        "play",
        &fixture("bm-sierpinski.json"),
        "--side",
        "alice",
        "--opponent",
        "first",
        "--script",
        &fixture("alice-moves.txt"),
        "--transcript",
        saved.to_str().unwrap(),
    ];
    let a = gamecat(&args);
    let b = gamecat(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&saved).unwrap(), a.stdout);
}

#[test]
fn zero_innings_is_an_empty_transcript() {
    let o = gamecat(&["play", &fixture("bm-sierpinski.json"), "--side", "bob", "--innings", "0"]);
    assert_eq!(code(&o), 0);
    assert!(moves(&stdout(&o)).is_empty());
}

#[test]
fn illegal_input_is_reprompted_and_eof_aborts() {
    let o = gamecat_with(
        &["play", &fixture("bm-sierpinski.json"), "--side", "alice", "--opponent", "first", "--innings", "3"],
        &[],
        Some("{b}\n{a}\n"),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("illegal move `{b}`"));
    let out = stdout(&o);
    assert_eq!(moves(&out), vec!["0 alice {a}", "0 bob {a}"]);
    assert!(out.contains("result: aborted after 2 moves"));
}

#[test]
fn winning_opponent_needs_a_winning_strategy() {
    let o = gamecat_with(
        &["play", &fixture("bm-sierpinski.json"), "--side", "bob", "--opponent", "winning", "--innings", "1"],
        &[],
        Some("{a}\n"),
    );
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let o = gamecat(&["play", &fixture("bm-sierpinski.json"), "--side", "bob", "--opponent", "repeat-bob"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn runspace_of_terminal_is_one_by_one() {
    let o = gamecat(&["metric", &fixture("terminal.json"), "runspace"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("points: 1\n"));
    assert!(out.ends_with("\ninf\n"));
}

#[test]
fn krom_of_generating_is_the_full_run_space() {
    let k = gamecat(&["metric", &fixture("generating.json"), "krom"]);
    let r = gamecat(&["metric", &fixture("generating.json"), "runspace"]);
    assert_eq!(code(&k), 0);
    assert_eq!(k.stdout, r.stdout);
}

#[test]
fn runspace_codes_of_three_runs() {
    let o = gamecat(&["metric", &fixture("three-runs.json"), "runspace"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(4).collect();
    // First differences: a vs b at 0, b vs b1 at 1.
    assert_eq!(rows, vec!["inf 0 0", "0 inf 1", "0 1 inf"]);
}

#[test]
fn ball_roundtrip_on_three_points_passes() {
    let o = gamecat(&["metric", &fixture("three-runs.json"), "ball-roundtrip"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn metric_on_a_non_regular_game_exits_4() {
    let o = gamecat(&["metric", &fixture("cogenerating.json"), "runspace"]);
    assert_eq!(code(&o), 4);
}
