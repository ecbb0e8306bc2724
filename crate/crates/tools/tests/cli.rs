use og6_tools::cli::{run, Outcome, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn og6(args: &[&str]) -> Outcome {
    run(std::iter::once("og6").chain(args.iter().copied()), || None)
}

fn og6_piped(args: &[&str], input: String) -> Outcome {
    run(std::iter::once("og6").chain(args.iter().copied()), move || Some(input))
}

#[test]
fn signature_of_l() {
    let o = og6(&["sig", "U+U+U+[-2]+[-2]"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout.trim(), "(3,5)");
}

#[test]
fn disc_of_u_is_trivial() {
    assert_eq!(og6(&["disc", "U"]).stdout.trim(), "trivial group");
}

#[test]
fn disc_json_has_fraction_strings() {
    let o = og6(&["disc", "[2]+[-2]", "--format", "json"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["order"], "4");
    let q: Vec<&str> = v["q"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(q, ["1/2 mod 2", "3/2 mod 2"]);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let o = og6(&["sig", "U+[x]"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("byte 3"), "{}", o.stderr);
}

#[test]
fn unknown_command_is_usage_error() {
    assert_eq!(og6(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(og6(&["classify", "--target", "L", "--p", "11"]).code, EXIT_USAGE);
}

#[test]
fn classify_p7_pipes_into_diff() {
    let c = og6(&["classify", "--target", "L", "--p", "7"]);
    assert_eq!(c.code, EXIT_OK);
    let d = og6_piped(&["diff", "--table", "table5#p7"], c.stdout);
    assert_eq!(d.code, EXIT_OK, "{}", d.stdout);
    let v: Value = serde_json::from_str(&d.stdout).unwrap();
    assert_eq!(v["equal"], true);
}

#[test]
fn diff_against_wrong_table_is_a_mismatch() {
    let c = og6(&["classify", "--target", "L", "--p", "5"]);
    let d = og6_piped(&["diff", "--table", "table5#p7"], c.stdout);
    assert_eq!(d.code, EXIT_MISMATCH);
}

#[test]
fn output_is_deterministic() {
    let a = og6(&["classify", "--target", "lambda", "--p", "3"]);
    let b = og6(&["classify", "--target", "lambda", "--p", "3"]);
    assert_eq!(a, b);
}

#[test]
fn csv_header_order() {
    let o = og6(&["classify", "--target", "L", "--p", "3", "--format", "csv"]);
    let header = o.stdout.lines().next().unwrap();
    assert_eq!(header, "p,disc_action_order,coinvariant,invariant,signature_coinv,a,delta,status,reason");
    assert!(o.stdout.contains("length exceeds rank"));
}

#[test]
fn embed_reports_det_identity() {
    let o = og6(&["embed", "--sub", "U^2+[-2]^3", "--ambient", "U^3+[-2]^2"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["h_order"], "4");
    assert_eq!(recs[0]["det_identity"], true);
    assert_eq!(recs[0]["complement"]["expression"], "[2]");
}

#[test]
fn complement_of_first_hyperbolic_plane() {
    let o = og6(&["complement", "--ambient", "U^3+[-2]^2", "--basis", "[[1,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0]]"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["was_primitive"], true);
    assert_eq!(v["complement"]["signature"], "(2,4)");
}

#[test]
fn verify_bundled_certificate() {
    let o = og6(&["verify-isometry", "--lattice", "U^3+[-2]^2", "--matrix", "table4#3"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["disc_order"], 2);
    assert_eq!(v["spinor"], 1);
    assert_eq!(v["effective"], true);
}

#[test]
fn verify_rejects_non_isometry() {
    let o = og6(&["verify-isometry", "--lattice", "U", "--matrix", "[[1,1],[0,1]]"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("not an isometry"));
}

#[test]
fn rows_are_images_transposes() {
    let o = og6(&["verify-isometry", "--lattice", "[2]+[-2]", "--matrix", "[[-1,0],[0,1]]", "--rows-are-images"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
}

#[test]
fn catalog_p3_signature_filter() {
    let o = og6(&["catalog", "--p", "3", "--max-rank", "6", "--signature", "2,4"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let a: Vec<u64> = v.as_array().unwrap().iter().map(|e| e["a"].as_u64().unwrap()).collect();
    assert_eq!(a, [5, 3, 1]);
}

#[test]
fn data_dir_override() {
    let o = og6(&["diff", "--table", "table5#p7", "--data-dir", "/nonexistent"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("/nonexistent"));
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_og6")).args(["sig", "U(2)+A2(-1)"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "(1,3)");
}
