//! End-to-end tests of the `fuzzy-potts` binary: argument handling, exit
//! codes, cap refusals, file parsing, and byte-level determinism.

use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fuzzy-potts"));
    cmd.args(args);
    // The binary reads these for default caps; clear them so the ambient
    // environment cannot change what a test observes.
    for name in [
        "FUZZY_POTTS_MAX_EDGES",
        "FUZZY_POTTS_MAX_PA_VERTICES",
        "FUZZY_POTTS_MAX_JOINT_BITS",
    ] {
        cmd.env_remove(name);
    }
    for (name, value) in env {
        cmd.env(name, value);
    }
    let output = cmd.output().expect("binary runs");
    Run {
        code: output.status.code().expect("binary exits normally"),
        stdout: String::from_utf8(output.stdout).expect("stdout is utf-8"),
        stderr: String::from_utf8(output.stderr).expect("stderr is utf-8"),
    }
}

fn json(run: &Run) -> serde_json::Value {
    serde_json::from_str(&run.stdout).expect("stdout is one JSON document")
}

#[test]
fn association_check_on_the_one_path_family_holds() {
    let run = run(&[
        "check-pa",
        "--family",
        "figure1",
        "--m",
        "1",
        "--measure",
        "uniform-forest",
        "--alpha",
        "1/2",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = json(&run);
    assert_eq!(report["result"]["verdict"], "holds");
    assert_eq!(report["result"]["upsets"], 20);
}

#[test]
fn two_path_analysis_at_width_seven_reports_negative_covariance() {
    let run = run(&["figure1", "--m", "7"]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = json(&run);
    assert_eq!(report["result"]["covariance"]["exact"], "-64/123201");
    assert!(report["result"]["covariance"]["decimal"]
        .as_str()
        .unwrap()
        .starts_with('-'));
    assert_eq!(report["result"]["sign"], "negative");
    assert_eq!(report["result"]["counts"]["forests"], "9477");
}

#[test]
fn association_check_refuses_six_vertices_naming_the_cap() {
    let run = run(&["check-pa", "--family", "path", "--n", "6", "--alpha", "1/2"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.is_empty());
    assert!(
        run.stderr.contains("6 coordinates") && run.stderr.contains("cap of 4"),
        "stderr: {}",
        run.stderr
    );
}

#[test]
fn cap_precedence_is_flag_over_environment_over_default() {
    // Environment lowers the up-set cap below the instance size: refused.
    let env = [("FUZZY_POTTS_MAX_PA_VERTICES", "1")];
    let refused = run_with_env(
        &["check-pa", "--family", "k2", "--alpha", "1/2"],
        &env,
    );
    assert_eq!(refused.code, 1);
    assert!(refused.stderr.contains("cap of 1"), "stderr: {}", refused.stderr);

    // A flag overrides the same environment setting: verdict computed.
    let allowed = run_with_env(
        &[
            "check-pa",
            "--family",
            "k2",
            "--alpha",
            "1/2",
            "--max-pa-vertices",
            "2",
        ],
        &env,
    );
    assert_eq!(allowed.code, 0, "stderr: {}", allowed.stderr);
    assert_eq!(json(&allowed)["result"]["verdict"], "holds");

    // An invalid environment value is an error, not a silent default.
    let invalid = run_with_env(
        &["check-pa", "--family", "k2", "--alpha", "1/2"],
        &[("FUZZY_POTTS_MAX_PA_VERTICES", "lots")],
    );
    assert_eq!(invalid.code, 1);
    assert!(
        invalid.stderr.contains("FUZZY_POTTS_MAX_PA_VERTICES"),
        "stderr: {}",
        invalid.stderr
    );
}

#[test]
fn edge_cap_refusal_names_the_flag_cap() {
    let run = run(&[
        "measure",
        "--family",
        "triangle",
        "--max-edges",
        "2",
    ]);
    assert_eq!(run.code, 1);
    assert!(
        run.stderr.contains("3 edges") && run.stderr.contains("cap of 2"),
        "stderr: {}",
        run.stderr
    );
}

#[test]
fn graph_files_parse_and_bad_lines_are_named() {
    let dir = tempfile::tempdir().expect("tempdir");
    let good = dir.path().join("triangle.graph");
    std::fs::write(&good, "# triangle\nvertices 3\n0 1\n1 2\n0 2\n").unwrap();
    let run_good = run(&[
        "measure",
        "--file",
        good.to_str().unwrap(),
        "--measure",
        "uniform-forest",
    ]);
    assert_eq!(run_good.code, 0, "stderr: {}", run_good.stderr);
    let report = json(&run_good);
    assert_eq!(report["result"]["edge_table"].as_array().unwrap().len(), 8);
    // The uniform forest on a triangle: every configuration except the
    // full one, equally weighted.
    assert_eq!(report["result"]["edge_table"][0]["probability"]["exact"], "1/7");
    assert_eq!(report["result"]["edge_table"][7]["probability"]["exact"], "0");

    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "vertices 3\n0 1\n0 9\n").unwrap();
    let run_bad = run(&["measure", "--file", bad.to_str().unwrap()]);
    assert_eq!(run_bad.code, 1);
    assert!(
        run_bad.stderr.contains(":3:") && run_bad.stderr.contains("out of range"),
        "stderr: {}",
        run_bad.stderr
    );
}

#[test]
fn conditional_covariance_check_uses_the_designated_site() {
    // The figure1 family designates vertex 0 and edge 0, so no --x/--e.
    let designated = run(&[
        "check-lemma2",
        "--family",
        "figure1",
        "--m",
        "1",
        "--q",
        "2",
        "--alpha",
        "1/2",
    ]);
    assert_eq!(designated.code, 0, "stderr: {}", designated.stderr);
    let report = json(&designated);
    assert_eq!(report["result"]["verdict"], "holds");
    assert_eq!(report["result"]["scan"], "exhaustive");
    assert_eq!(report["params"]["x"], 0);
    assert_eq!(report["params"]["e"], 0);

    // A non-incident pair is a precondition failure.
    let bad = run(&[
        "check-lemma2",
        "--family",
        "figure1",
        "--m",
        "1",
        "--alpha",
        "1/2",
        "--x",
        "2",
        "--e",
        "0",
    ]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("not incident"), "stderr: {}", bad.stderr);

    // Graphs without a designated site require both flags.
    let missing = run(&["check-lemma2", "--family", "triangle", "--alpha", "1/2"]);
    assert_eq!(missing.code, 1);
    assert!(
        missing.stderr.contains("--x") && missing.stderr.contains("--e"),
        "stderr: {}",
        missing.stderr
    );
}

#[test]
fn coupling_verification_and_sampling_report_exactly() {
    let run = run(&[
        "couple",
        "--family",
        "triangle",
        "--q",
        "2",
        "--x",
        "0",
        "--e",
        "0",
        "--samples",
        "300",
        "--seed",
        "11",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = json(&run);
    assert_eq!(report["result"]["leaf_count"], 8);
    let verification = &report["result"]["verification"];
    for key in [
        "probabilities_sum_to_one",
        "open_marginal_matches",
        "closed_marginal_matches",
        "domination_holds",
        "off_component_agreement",
        "all_hold",
    ] {
        assert_eq!(verification[key], true, "verification field {key}");
    }
    assert_eq!(report["result"]["samples"]["count"], 300);
    assert_eq!(report["result"]["samples"]["dominated"], 300);

    // Sampling is defined for the lowest-incident rule only.
    let highest = run_with_args_sampling_highest();
    assert_eq!(highest.code, 1);
    assert!(
        highest.stderr.contains("lowest-incident"),
        "stderr: {}",
        highest.stderr
    );
}

fn run_with_args_sampling_highest() -> Run {
    run(&[
        "couple",
        "--family",
        "triangle",
        "--q",
        "2",
        "--x",
        "0",
        "--e",
        "0",
        "--rule",
        "highest",
        "--samples",
        "10",
    ])
}

#[test]
fn probe_exits_zero_when_nothing_is_found() {
    let run = run(&[
        "probe-q",
        "--qs",
        "1/2",
        "--ps",
        "1/2",
        "--alphas",
        "1/2",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = json(&run);
    assert_eq!(report["result"]["violation_count"], 0);
    assert_eq!(report["result"]["cells"], 10);
}

#[test]
fn boundary_scan_is_consistent_and_tabulates_to_csv() {
    let run_json = run(&["boundary"]);
    assert_eq!(run_json.code, 0, "stderr: {}", run_json.stderr);
    let report = json(&run_json);
    assert_eq!(report["result"]["consistent"], true);
    assert_eq!(report["result"]["cells"].as_array().unwrap().len(), 15);

    let run_csv = run(&["boundary", "--format", "csv"]);
    assert_eq!(run_csv.code, 0);
    let lines: Vec<&str> = run_csv.stdout.lines().collect();
    assert_eq!(lines.len(), 16);
    assert_eq!(
        lines[0],
        "q,alpha,condition_met,holds_everywhere,failure_graph_index,failure_p"
    );
    // The (q=2, alpha=1/2) cell satisfies the product threshold.
    assert!(lines.contains(&"2,1/2,true,true,,"));
}

#[test]
fn verdict_commands_have_no_csv_form() {
    let run = run(&[
        "check-pa",
        "--family",
        "k2",
        "--alpha",
        "1/2",
        "--format",
        "csv",
    ]);
    assert_eq!(run.code, 1);
    assert!(
        run.stderr.contains("csv output is not available"),
        "stderr: {}",
        run.stderr
    );
}

#[test]
fn measure_rejects_floating_point_and_stray_flags() {
    let float = run(&["measure", "--family", "k2", "--p", "0.5"]);
    assert_eq!(float.code, 1);
    assert!(float.stderr.contains("--p"), "stderr: {}", float.stderr);

    let stray = run(&[
        "measure",
        "--family",
        "k2",
        "--measure",
        "uniform-forest",
        "--p",
        "1/2",
    ]);
    assert_eq!(stray.code, 1);
    assert!(
        stray.stderr.contains("uniform-forest takes no"),
        "stderr: {}",
        stray.stderr
    );

    let unknown = run(&["measure", "--family", "petersen"]);
    assert_eq!(unknown.code, 1);
    assert!(
        unknown.stderr.contains("unknown family"),
        "stderr: {}",
        unknown.stderr
    );
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let usage = run(&["measure", "--no-such-flag"]);
    assert_eq!(usage.code, 1);

    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("Exit codes"));
    assert!(help.stdout.contains("FUZZY_POTTS_MAX_EDGES"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["figure1", "--m", "7", "--alpha", "1/100"],
        vec!["corpus"],
        vec!["corpus", "--format", "text"],
        vec![
            "couple",
            "--family",
            "triangle",
            "--q",
            "2",
            "--x",
            "0",
            "--e",
            "0",
            "--samples",
            "100",
            "--seed",
            "7",
        ],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.code, second.code, "exit codes differ for {args:?}");
        assert_eq!(first.code, 0, "stderr: {}", first.stderr);
        assert_eq!(
            first.stdout, second.stdout,
            "stdout differs between runs for {args:?}"
        );
    }
}

#[test]
fn spin_measure_table_matches_direct_construction() {
    // K2 at p = 1/2, cluster weight 2, bias 1/2: the edge is open with
    // probability 1/3, and the spin table is symmetric.
    let run = run(&[
        "measure",
        "--family",
        "k2",
        "--q",
        "2",
        "--alpha",
        "1/2",
    ]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report = json(&run);
    assert_eq!(report["result"]["edge_table"][1]["probability"]["exact"], "1/3");
    let spin = report["result"]["spin_table"].as_array().unwrap();
    assert_eq!(spin.len(), 4);
    assert_eq!(spin[0]["probability"]["exact"], "1/3");
    assert_eq!(spin[1]["probability"]["exact"], "1/6");
    assert_eq!(spin[2]["probability"]["exact"], "1/6");
    assert_eq!(spin[3]["probability"]["exact"], "1/3");
}
