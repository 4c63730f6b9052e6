//! End-to-end checks of the `alq` binary: golden outputs, format parity,
//! exit codes, cache behavior, and byte-determinism across thread counts.

use std::path::Path;
use std::process::{Command, Output};

fn alq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn within_emits_golden_csv_row() {
    let out = alq(&["within", "--x-max", "10", "--ell", "2", "--threshold", "constant:1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "n_max,ell_num,ell_den,threshold_kind,threshold_param,count,normalized\n\
         10,2,1,constant,1,1,0.230259\n"
    );
}

#[test]
fn within_series_samples_at_step_multiples() {
    let out = alq(&[
        "within", "--x-max", "2000", "--ell", "2", "--threshold", "constant:13",
        "--series", "1000",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "x,count,normalized\n1000,93,0.642421\n2000,128,0.486458\n"
    );
}

#[test]
fn almost_counts_match_across_formats() {
    let csv = alq(&["almost", "--x-max", "100", "--ell", "2", "--k", "12"]);
    assert_eq!(code(&csv), 0);
    assert_eq!(stdout_of(&csv), "x_max,ell,k,count\n100,2,12,6\n");
    let json = alq(&[
        "almost", "--x-max", "100", "--ell", "2", "--k", "12",
        "--output-format", "json",
    ]);
    assert_eq!(code(&json), 0);
    let body = stdout_of(&json);
    assert!(body.contains("\"count\": 6"), "json body: {body}");
    assert!(body.contains("\"k\": 12"), "json body: {body}");
}

#[test]
fn almost_accepts_negative_offsets() {
    let out = alq(&["almost", "--x-max", "1000", "--ell", "2", "--k", "-1"]);
    assert_eq!(code(&out), 0);
    // The deficiency-1 census over [1, 1000]: exactly the powers of two 1..512.
    assert_eq!(stdout_of(&out), "x_max,ell,k,count\n1000,2,-1,10\n");
}

#[test]
fn spikes_window_of_zero_offset_is_the_perfect_count() {
    let out = alq(&["spikes", "--x-max", "10", "--ell", "2", "--k-min", "0", "--k-max", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "k,count,rank\n0,1,\n");
}

#[test]
fn near_census_lists_every_profile_row() {
    let out = alq(&["near", "--x-max", "234", "--k", "1"]);
    assert_eq!(code(&out), 0);
    let body = stdout_of(&out);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 14, "header + 13 members: {body}");
    assert_eq!(lines[0], "n,abundance,min_exceptions,achievable_cardinalities,witness_min");
    assert!(lines.contains(&"56,8,1,1;2,8"));
    assert!(lines.contains(&"196,7,1,1;3,7"));
    assert!(lines.contains(&"234,78,1,1;3;5;7;8,78"));
}

#[test]
fn admissible_reports_members_and_density_bound() {
    let out = alq(&["admissible", "--x-max", "234", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "k,x_max,members,phi_sum,density_lower_bound\n\
         1,234,6;12;18;24;196;224,35515/296352,0.072854346\n"
    );
}

#[test]
fn exact_and_intersect_agree_with_census_members() {
    let exact = alq(&["exact", "--x-max", "100", "--k", "2"]);
    assert_eq!(code(&exact), 0);
    let body = stdout_of(&exact);
    let members: Vec<&str> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        members,
        ["12", "18", "24", "30", "36", "40", "48", "54", "56", "66", "80", "84", "90", "96"]
    );
    let both = alq(&["intersect", "--x-max", "100", "--k1", "1", "--k2", "2"]);
    assert_eq!(code(&both), 0);
    let rows = stdout_of(&both);
    let ns: Vec<&str> = rows.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["12", "18", "24", "40", "56"]);
}

#[test]
fn e_eps_row_carries_both_counts() {
    let out = alq(&["e-eps", "--x-max", "1000", "--k", "2", "--eps", "1/4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "x_max,k,eps_num,eps_den,strongly_abundant,members,fraction\n\
         1000,2,1,4,41,41,1.000000\n"
    );
}

#[test]
fn distribution_values_are_monotone_in_u() {
    let out = alq(&[
        "distribution", "--x-max", "1000", "--u", "1", "--u", "3/2", "--u", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "u_num,u_den,value\n1,1,0.001000\n3,2,0.428000\n2,1,0.754000\n"
    );
}

#[test]
fn lemma_check_finds_no_violations() {
    let out = alq(&["lemma-check", "--x-max", "2000", "--k", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "n\n");
}

#[test]
fn constants_report_is_flat_json_with_exact_fractions() {
    let out = alq(&[
        "constants", "--perfect-limit", "10000", "--structured-bound", "100000",
    ]);
    assert_eq!(code(&out), 0);
    let body = stdout_of(&out);
    assert!(body.contains("\"c_9\": \"179017/360360\""), "body: {body}");
    assert!(body.contains("\"c_4\": \"1/6\""), "body: {body}");
    assert!(body.contains("\"sum_inv_perfect_2_1e4\""), "body: {body}");
    assert!(body.contains("\"M_lower_phi_sum\": \"35515/296352\""), "body: {body}");
}

#[test]
fn table1_below_first_cutoff_warns_and_emits_label_rows() {
    let out = alq(&["table1", "--x-max", "100"]);
    assert_eq!(code(&out), 0);
    assert!(stderr_of(&out).contains("warning:"), "stderr: {}", stderr_of(&out));
    let body = stdout_of(&out);
    assert_eq!(body.lines().count(), 9, "header + 8 threshold rows: {body}");
    assert_eq!(body.lines().next(), Some("k_y"));
}

#[test]
fn table2_partial_grid_matches_hand_counts() {
    let out = alq(&["table2", "--x-max", "1000000"]);
    assert_eq!(code(&out), 0);
    let body = stdout_of(&out);
    let mut lines = body.lines();
    assert_eq!(
        lines.next(),
        Some("x,e_1_2,e_1,e_2,e_1_2_over_e_1,e_1_2_over_e_2")
    );
    assert_eq!(lines.next(), Some("100,5,7,14,0.714,0.357"));
    assert_eq!(lines.next(), Some("1000,6,15,41,0.400,0.146"));
}

#[test]
fn sieve_rows_match_known_records_and_cache_roundtrips() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().to_str().unwrap();
    let args = ["sieve", "--lo", "1", "--x-max", "20", "--cache-dir", cache];
    let first = alq(&args);
    assert_eq!(code(&first), 0);
    let body = stdout_of(&first);
    assert!(body.starts_with("n,sigma,tau,omega,big_omega,phi,mu,p_plus,spf\n"));
    assert!(body.contains("\n6,12,4,2,2,2,1,3,2\n"));
    assert!(body.contains("\n16,31,5,1,4,8,0,2,2\n"));
    assert!(cache_has_files(dir.path()), "cache dir should gain a segment file");
    let second = alq(&args);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout, "cached rerun must be byte-identical");
}

fn cache_has_files(dir: &Path) -> bool {
    std::fs::read_dir(dir).map(|rd| rd.count() > 0).unwrap_or(false)
}

#[test]
fn outputs_are_byte_identical_across_thread_counts() {
    for cmd in [
        vec!["spikes", "--x-max", "2000", "--ell", "2", "--k-min", "-5", "--k-max", "60"],
        vec!["exact", "--x-max", "1000", "--k", "2"],
        vec!["distribution", "--x-max", "2000", "--u", "2"],
    ] {
        let mut one = cmd.clone();
        one.extend(["--threads", "1"]);
        let mut four = cmd.clone();
        four.extend(["--threads", "4"]);
        let a = alq(&one);
        let b = alq(&four);
        assert_eq!(code(&a), 0, "{cmd:?}");
        assert_eq!(code(&b), 0, "{cmd:?}");
        assert_eq!(a.stdout, b.stdout, "thread count changed bytes for {cmd:?}");
    }
}

#[test]
fn exit_codes_separate_guard_budget_usage_and_undecided() {
    // Default guard refuses oversized scans with code 2.
    let guarded = alq(&["within", "--x-max", "200000000", "--ell", "2", "--threshold", "constant:1"]);
    assert_eq!(code(&guarded), 2);
    assert!(stderr_of(&guarded).contains("--allow-large"));
    // A census bound baked into the library also maps to code 2.
    let capped = alq(&["near", "--x-max", "30000000", "--k", "1"]);
    assert_eq!(code(&capped), 2);
    // Bad argument values are usage errors: code 1.
    let usage = alq(&["within", "--x-max", "10", "--ell", "2", "--threshold", "bogus:1"]);
    assert_eq!(code(&usage), 1);
    let zero_den = alq(&["distribution", "--x-max", "10", "--u", "1/0"]);
    assert_eq!(code(&zero_den), 1);
    // Starved witness searches finish the report, then exit 3.
    let starved = alq(&["near", "--x-max", "1000", "--k", "4", "--node-limit", "1"]);
    assert_eq!(code(&starved), 3);
    assert!(stdout_of(&starved).contains("6,0,0,0,"));
    assert!(stderr_of(&starved).contains("witness searches exhausted"));
    // Help is a success.
    assert_eq!(code(&alq(&["--help"])), 0);
}
