//! End-to-end checks of the binary: output shapes, exit codes, format
//! switches, and determinism of repeated invocations.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_level-zero"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out)
        .lines()
        .map(|line| serde_json::from_str(line).expect("json line"))
        .collect()
}

#[test]
fn orbits_table_lists_all_orbits_ascending() {
    let out = run(&["orbits", "--q", "3", "--n", "2"]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 5);
    let canonicals: Vec<u64> = rows.iter().map(|r| r["canonical"].as_u64().unwrap()).collect();
    assert_eq!(canonicals, vec![0, 1, 2, 4, 5]);
    assert_eq!(rows[1]["members"], serde_json::json!([1, 3]));
    assert_eq!(rows[1]["regular"], serde_json::json!(true));
    assert_eq!(rows[0]["size"], serde_json::json!(1));
}

#[test]
fn orbits_filter_narrows_to_regular_rows() {
    let out = run(&["orbits", "--q", "3", "--n", "2", "--filter", "regular"]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["regular"] == serde_json::json!(true)));

    let out = run(&["orbits", "--q", "3", "--n", "2", "--filter", "non-regular"]);
    assert_eq!(json_lines(&out).len(), 2);
}

#[test]
fn orbits_tsv_has_header_and_rows() {
    let out = run(&["--format", "tsv", "orbits", "--q", "3", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "canonical\tmembers\tsize\tregular\tdescent_d\tdescent_j"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn reduce_identifies_the_collapsing_example() {
    let out = run(&["reduce", "--q", "3", "--n", "2", "--k", "1", "--ell", "2"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["orbit"], serde_json::json!([0]));
    assert_eq!(row["supercuspidal"], serde_json::json!(false));
    assert_eq!(row["support_display"], serde_json::json!("(d=1,{0})^x2"));
    assert_eq!(row["field_cuspidal_tokens"], serde_json::json!(1));
    assert_eq!(row["field_supercuspidal_tokens"], serde_json::json!(0));
}

#[test]
fn reduce_reports_the_shifted_orbit() {
    let out = run(&["reduce", "--q", "5", "--n", "2", "--k", "4", "--ell", "3"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["canonical"], serde_json::json!(12));
    assert_eq!(row["orbit"], serde_json::json!([12]));
}

#[test]
fn support_totals_the_dimension() {
    let out = run(&["support", "--q", "5", "--n", "2", "--k", "4", "--ell", "3"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["total_degree"], serde_json::json!(2));
    assert_eq!(row["entries"][0]["degree"], serde_json::json!(1));
    assert_eq!(row["entries"][0]["multiplicity"], serde_json::json!(2));
}

#[test]
fn trace_reports_exact_vector_and_labeled_approximation() {
    let out = run(&["trace", "--q", "3", "--n", "2", "--k", "1", "--m", "1"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["modulus"], serde_json::json!(8));
    assert_eq!(row["coeffs"], serde_json::json!([0, -1, 0, -1]));
    let re: f64 = row["approx_re"].as_str().unwrap().parse().unwrap();
    let im: f64 = row["approx_im"].as_str().unwrap().parse().unwrap();
    assert!(re.abs() < 1e-9);
    assert!((im + 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn trace_rejects_non_primitive_exponents() {
    let out = run(&["trace", "--q", "3", "--n", "2", "--k", "1", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("primitive"));
}

fn record(lift: u64, orbit: u64, side: &str) -> String {
    format!(
        "{{\"n\":2,\"p\":3,\"q\":3,\"delta\":2,\"e\":1,\"f\":2,\"r\":0,\"lift\":{lift},\"orbit_canonical\":{orbit},\"side\":\"{side}\",\"char\":0}}"
    )
}

#[test]
fn triple_canonicalize_normalizes_the_lift() {
    let rec = record(1, 2, "GL");
    let out = run(&["triple", "canonicalize", "--record", &rec]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["lift"], serde_json::json!(0));
    assert_eq!(row["side"], serde_json::json!("GL"));
}

#[test]
fn triple_fiber_lists_one_presentation_per_lift() {
    let rec = record(0, 1, "GL");
    let out = run(&["triple", "fiber", "--record", &rec]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["lift"], serde_json::json!(0));
    assert_eq!(rows[1]["lift"], serde_json::json!(1));
}

#[test]
fn triple_equal_recognizes_presentations_of_one_class() {
    let rec = record(0, 1, "GL");
    let out = run(&["triple", "fiber", "--record", &rec]);
    let rows: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(rows.len(), 2);

    let out = run(&["triple", "equal", "--record", &rows[0], "--record", &rows[1]]);
    assert!(out.status.success());
    assert_eq!(json_lines(&out)[0]["equal"], serde_json::json!(true));

    let other = record(0, 2, "GL");
    let out = run(&["triple", "equal", "--record", &rows[0], "--record", &other]);
    assert_eq!(json_lines(&out)[0]["equal"], serde_json::json!(false));
}

#[test]
fn triple_equal_requires_exactly_two_records() {
    let rec = record(0, 1, "GL");
    let out = run(&["triple", "equal", "--record", &rec]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn triple_rec_toggles_the_side_and_inverts() {
    let rec = record(1, 1, "GL");
    let out = run(&["triple", "rec", "--record", &rec]);
    assert!(out.status.success());
    let flipped = stdout(&out).lines().next().unwrap().to_owned();
    assert!(flipped.contains("\"side\":\"Galois\""));

    let out = run(&["triple", "rec", "--inverse", "--record", &flipped]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next().unwrap(), rec);
}

#[test]
fn triple_reduce_marks_the_coefficient_characteristic() {
    let rec = record(0, 1, "GL");
    let out = run(&["triple", "reduce", "--record", &rec, "--ell", "2"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["char"], serde_json::json!(2));
    assert_eq!(row["orbit_canonical"], serde_json::json!(0));
}

#[test]
fn triple_json_round_trips_bit_for_bit() {
    let rec = record(1, 2, "Galois");
    let out = run(&["triple", "canonicalize", "--record", &rec]);
    let first = stdout(&out);
    let reprinted = run(&[
        "triple",
        "canonicalize",
        "--record",
        first.lines().next().unwrap(),
    ]);
    assert_eq!(stdout(&reprinted), first);
}

#[test]
fn triple_rejects_malformed_and_non_canonical_records() {
    let out = run(&["triple", "canonicalize", "--record", "{\"n\":2}"]);
    assert_eq!(out.status.code(), Some(2));

    let non_canonical = "{\"n\":2,\"p\":3,\"q\":3,\"delta\":1,\"e\":1,\"f\":1,\"r\":0,\"lift\":0,\"orbit_canonical\":3,\"side\":\"GL\",\"char\":0}";
    let out = run(&["triple", "canonicalize", "--record", non_canonical]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("canonical"));
}

#[test]
fn beta_outputs_signs_labels_and_twists() {
    let out = run(&[
        "beta", "epsilon-gal", "--p", "3", "--q", "3", "--delta", "2", "--e", "1", "--f", "2",
        "--r", "0",
    ]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["label"], serde_json::json!(4));
    assert_eq!(row["order"], serde_json::json!(8));

    let out = run(&[
        "beta",
        "canonical-label",
        "--p",
        "3",
        "--q",
        "3",
        "--delta",
        "2",
        "--e",
        "1",
        "--f",
        "2",
        "--r",
        "0",
    ]);
    assert_eq!(json_lines(&out)[0]["twist"], serde_json::json!(4));

    let out = run(&["beta", "twist", "--q", "3", "--n", "2", "--k", "1", "--s", "1"]);
    let row = &json_lines(&out)[0];
    assert_eq!(row["canonical"], serde_json::json!(5));
    assert_eq!(row["members"], serde_json::json!([5, 7]));
}

#[test]
fn verify_single_point_passes_and_exits_zero() {
    let out = run(&["verify", "fixing-character", "--q", "3", "--n", "2"]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["status"] == serde_json::json!("pass")));
    assert!(rows.iter().all(|r| r.get("elapsed_ms").is_none()));
}

#[test]
fn verify_grid_sweeps_every_prime_power_context() {
    let out = run(&["verify", "divisor-inequality", "--q-max", "5", "--n-max", "3"]);
    assert!(out.status.success());
    let rows = json_lines(&out);
    let contexts: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["params"]["q"].as_u64().unwrap(), r["params"]["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(contexts, vec![(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (5, 3)]);
}

#[test]
fn verify_timings_flag_adds_elapsed_fields() {
    let out = run(&["--timings", "verify", "trace-separation", "--q", "3", "--n", "2"]);
    assert!(out.status.success());
    assert!(json_lines(&out)[0].get("elapsed_ms").is_some());
}

#[test]
fn verify_tsv_renders_params_inline() {
    let out = run(&["--format", "tsv", "verify", "trace-separation", "--q", "3", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "claim\tparams\tstatus\twitness");
    let row = lines.next().unwrap();
    assert!(row.starts_with("trace-separation\tn=2,q=3\tpass\t"));
}

#[test]
fn verify_timeout_reports_inconclusive_with_exit_four() {
    let out = run(&["verify", "trace-separation", "--q", "9", "--n", "4", "--timeout-ms", "0"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json_lines(&out)[0]["status"], serde_json::json!("inconclusive"));
}

#[test]
fn usage_errors_exit_two_on_stderr() {
    let out = run(&["orbits", "--q", "6", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("prime power"));
}

#[test]
fn sweep_bound_flag_and_env_cap_enumeration() {
    let out = run(&["--sweep-bound", "4", "orbits", "--q", "9", "--n", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("exceeds"));

    let out = bin()
        .env("LEVEL_ZERO_SWEEP_BOUND", "4")
        .args(["orbits", "--q", "9", "--n", "4"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .env("LEVEL_ZERO_SWEEP_BOUND", "not-a-number")
        .args(["orbits", "--q", "3", "--n", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("LEVEL_ZERO_SWEEP_BOUND"));
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = ["verify", "xi-rigidity", "--q-max", "4", "--n-max", "2"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = ["orbits", "--q", "8", "--n", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_regular_cover_single_context() {
    let out = run(&["verify", "regular-cover", "--q", "2", "--n", "2"]);
    assert!(out.status.success());
    let row = &json_lines(&out)[0];
    assert_eq!(row["status"], serde_json::json!("pass"));
    let covers = row["witness"]["covers"].as_array().unwrap();
    assert_eq!(covers.len(), 1);
    assert_eq!(covers[0]["alpha"], serde_json::json!(0));
    assert_eq!(covers[0]["ell"], serde_json::json!(43));
    assert_eq!(covers[0]["beta"], serde_json::json!(381));
}

#[test]
fn verify_reduction_commutation_rejects_bad_ell() {
    let out = run(&["verify", "reduction-commutation", "--q", "3", "--n", "2", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "reduction-commutation", "--q", "3", "--n", "2", "--ell", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
