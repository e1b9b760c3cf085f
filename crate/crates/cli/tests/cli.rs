//! End-to-end tests of the command-line interface: output contents, formats,
//! and exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flag-einstein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn solve_text_reports_known_solutions() {
    let out = run(&["solve", "-n", "7", "-p", "3", "--format", "text"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("SO(14)/U(3) x U(4)"));
    assert!(text.contains("(24, 12, 24, 6), total 66"));
    // Two Kähler–Einstein metrics with exact components and the flat constant.
    assert!(text.contains("7/2, 9, 11/2, 2"));
    assert!(text.contains("7/2, 3, 13/2, 10"));
    assert!(text.contains("Einstein constant 1/12"));
    // Four non-Kähler metrics; spot-check two coordinate enclosures.
    assert!(text.contains("x2 = 0.7257"));
    assert!(text.contains("x4 = 1.5722"));
    assert_eq!(text.matches("x2 = ").count(), 4);
}

#[test]
fn solve_defaults_to_json() {
    let out = run(&["solve", "-n", "9", "-p", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["counts"]["kahler"], 2);
    assert_eq!(v["counts"]["nonKahler"], 2);
}

#[test]
fn solve_json_is_well_formed() {
    let out = run(&["solve", "-n", "5", "-p", "2", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(v["schema"], "flag-einstein/1");
    assert_eq!(v["params"], serde_json::json!({"n": 5, "p": 2}));
    assert_eq!(v["dimensions"]["total"], 32);
    assert_eq!(v["kahler"].as_array().unwrap().len(), 2);
    let non_kahler = v["nonKahler"].as_array().unwrap();
    assert_eq!(non_kahler.len(), 4);
    assert_eq!(non_kahler[0]["x2Decimals"], "0.6955");
    assert_eq!(non_kahler[0]["scaleInvariantDecimals"], "12.4373");
    // Canonical serialization: parse then re-serialize is byte-identical.
    let reserialized = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(text.trim_end(), reserialized);
}

#[test]
fn solve_csv_lists_all_solutions() {
    let out = run(&["solve", "-n", "4", "-p", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "kind,label,x1,x2,x3,x4,einsteinConstant,scaleInvariant,residualBound"
    );
    assert_eq!(lines.len(), 1 + 1 + 4);
    assert!(lines[1].starts_with("kahler,g1,"));
    assert!(lines.iter().any(|l| l.starts_with("nonKahler,")));
}

#[test]
fn invalid_parameters_exit_with_usage_code() {
    let out = run(&["solve", "-n", "3", "-p", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invalid parameters"));
    assert!(stderr(&out).contains("n >= 4"));

    let out = run(&["solve", "-n", "7", "-p", "3", "--width", "-1/2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--n-max", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "plot-data",
        "-n",
        "7",
        "-p",
        "3",
        "--from",
        "2",
        "--to",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_with_usage_code() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_cleanly() {
    for args in [
        &["--help"][..],
        &["--version"][..],
        &["solve", "--help"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "args: {args:?}");
    }
}

#[test]
fn verify_small_range_succeeds() {
    let out = run(&["verify", "--n-max", "6", "--width", "1e-6", "--jobs", "2"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("(4, 2): kahler 1, non-kahler 4 (expected 4)"));
    assert!(text.contains("verified 6 pairs"));
}

#[test]
fn sweep_csv_lists_every_pair() {
    let out = run(&[
        "sweep", "--n-max", "6", "--width", "1e-6", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,kahler,nonKahler,exceptional"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.contains(&"4,2,1,4,true"));
    assert!(rows.contains(&"6,3,1,4,true"));
}

#[test]
fn table_invariants_json_matches_known_values() {
    let out = run(&["table", "--which", "invariants", "--format", "json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 6);
    let by_pair = |n: u64, p: u64| {
        pairs
            .iter()
            .find(|row| row["params"]["n"] == n && row["params"]["p"] == p)
            .unwrap_or_else(|| panic!("pair ({n}, {p}) present"))
    };
    let row = by_pair(7, 3);
    assert_eq!(row["g1"], "25.2814");
    assert_eq!(row["g4"], "25.5943");
    let row = by_pair(5, 2);
    assert_eq!(row["g2"], "12.6088");
    // Dual pairs share their invariant columns.
    assert_eq!(by_pair(6, 4)["g3"], by_pair(6, 2)["g3"]);
}

#[test]
fn table_solutions_csv_has_four_rows_per_pair() {
    let out = run(&["table", "--which", "solutions", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,p,metric,x1,x2,x3,x4");
    assert_eq!(lines.len(), 1 + 6 * 4);
    assert!(lines.contains(&"7,3,g1,1,0.7257,1,0.4662"));
    assert!(lines.contains(&"6,4,g2,1,0.3632,1,1.9057"));
}

#[test]
fn certify_targets_all_pass() {
    for target in ["resultants", "vertex", "duality", "equal-blocks", "kahler"] {
        let out = run(&["certify", "--target", target, "--n-max", "6"]);
        assert!(
            out.status.success(),
            "target {target} stderr: {}",
            stderr(&out)
        );
    }
}

#[test]
fn certify_vertex_reports_shift_coefficients() {
    let out = run(&["certify", "--target", "vertex", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let positivity = v["positivity"].as_array().unwrap();
    assert_eq!(positivity.len(), 7);
    let m2 = &positivity[0];
    assert_eq!(
        m2["shiftedCoefficients"],
        serde_json::json!(["766", "2307", "511", "39", "1"])
    );
    assert!(v["exceptionalValues"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["indicator"].as_str().unwrap().starts_with('-')));
}

#[test]
fn plot_data_csv_covers_requested_range() {
    let out = run(&[
        "plot-data",
        "-n",
        "7",
        "-p",
        "3",
        "--from",
        "0",
        "--to",
        "2",
        "--samples",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines[1].starts_with("0.00000000000000000000,"));
    assert!(lines[2].starts_with("1.00000000000000000000,"));
    // The family quartic evaluates to 8 (p - 1)^3 = 64 at x2 = 2.
    assert_eq!(lines[3], "2.00000000000000000000,64.00000000000000000000");
}

#[test]
fn plot_data_defaults_to_the_window() {
    let out = run(&["plot-data", "-n", "5", "-p", "2", "--samples", "11"]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1 + 11);
    // The window for (5, 2) runs from 2/3 to 2.
    assert!(lines[1].starts_with("0.66666666666666666667,"));
    assert!(lines[11].starts_with("2.00000000000000000000,"));
}

#[test]
fn plot_data_cofactor_stays_positive_on_root_free_side() {
    let out = run(&[
        "plot-data",
        "-n",
        "7",
        "-p",
        "3",
        "--poly",
        "cofactor-x4",
        "--samples",
        "50",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let value = line.split(',').nth(1).expect("two columns");
        assert!(
            !value.starts_with('-'),
            "unexpected negative sample: {line}"
        );
    }
}
