//! End-to-end tests of the `mhk` binary: the documented command grammar,
//! exit codes, report fields, determinism, and that every emitted artifact
//! parses back and re-verifies.

use std::path::Path;
use std::process::{Command, Output};

use mhk_core::{
    generate_closure, verify_design, BinaryMatrix, BoolFn, Budget, DefiniteCnf, DesignKind,
    DesignSpec, GroundSet, SetFamily,
};

fn mhk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mhk"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    mhk()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("the binary under test spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("reports are UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("diagnostics are UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("the process exits normally")
}

/// The value of a `# key: value` report line.
fn field(report: &str, key: &str) -> String {
    let prefix = format!("# {key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("report has no field `{key}`:\n{report}"))
        .to_string()
}

fn write_file(dir: &Path, name: &str, contents: &str) {
    std::fs::write(dir.join(name), contents).expect("test inputs are writable");
}

/// Circuits of the rank-2 uniform matroid on four points: all 3-subsets.
fn u42_circuits() -> SetFamily {
    let g = GroundSet::new(4).unwrap();
    SetFamily::from_masks(g, [0b0111, 0b1011, 0b1101, 0b1110]).unwrap()
}

const U42_HG: &str = "n 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n";

#[test]
fn closure_of_a_vertex_under_the_empty_formula_is_itself() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "empty.cnf", "n 3\n");
    let out = run_in(dir.path(), &["closure", "--cnf", "empty.cnf", "--set", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "closure"), "{0}");
    assert_eq!(field(&report, "steps"), "0");
}

#[test]
fn check_matroid_prints_the_elimination_witness_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write_file(
        dir.path(),
        "example1.hg",
        "n 6\n0 1 5\n1 2 5\n2 3 5\n3 4 5\n0 4 5\n",
    );
    let out = run_in(dir.path(), &["check-matroid", "example1.hg"]);
    assert_eq!(code(&out), 1);
    let report = stdout(&out);
    assert_eq!(field(&report, "matroid"), "false");
    assert!(
        field(&report, "violation").contains("no circuit lies in their union"),
        "unexpected witness: {report}"
    );
}

#[test]
fn check_matroid_accepts_uniform_circuits() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let out = run_in(dir.path(), &["check-matroid", "u_4_2.hg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(field(&stdout(&out), "matroid"), "true");
}

#[test]
fn min_clauses_uniform_method_reports_the_binomial_count() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let out = run_in(dir.path(), &["min-clauses", "u_4_2.hg", "--method", "uniform"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "value"), "6");
    assert_eq!(field(&report, "exact"), "true");

    // The artifact is a parseable formula under which every 2-subset
    // derives the whole ground set.
    let witness: DefiniteCnf = report.parse().unwrap();
    assert_eq!(witness.len(), 6);
    let g = witness.ground();
    for a in 0..4 {
        for b in a + 1..4 {
            let pair = g.vset((1 << a) | (1 << b)).unwrap();
            assert_eq!(witness.closure(&pair), g.universe(), "pair {pair}");
        }
    }
}

#[test]
fn dualize_is_an_involution_and_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let first = run_in(dir.path(), &["dualize", "u_4_2.hg"]);
    let second = run_in(dir.path(), &["dualize", "u_4_2.hg"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");

    let report = stdout(&first);
    assert_eq!(field(&report, "transversals"), "6");
    let dual: SetFamily = report.parse().unwrap();
    assert_eq!(dual.len(), 6);

    // Feeding the report back reproduces the original circuits.
    write_file(dir.path(), "dual.hg", &report);
    let back = run_in(dir.path(), &["dualize", "dual.hg"]);
    assert_eq!(code(&back), 0);
    let original: SetFamily = stdout(&back).parse().unwrap();
    assert_eq!(original, u42_circuits());
}

#[test]
fn json_lines_reports_mirror_text_fields() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let text = stdout(&run_in(dir.path(), &["dualize", "u_4_2.hg"]));
    let json_out = run_in(dir.path(), &["dualize", "u_4_2.hg", "--format", "json-lines"]);
    assert_eq!(code(&json_out), 0);
    let raw = stdout(&json_out);
    assert_eq!(raw.lines().count(), 1, "one JSON object per report");
    let parsed: serde_json::Value = raw.trim().parse().unwrap();

    for line in text.lines().filter(|l| l.starts_with("# ")) {
        let key = line[2..].split(':').next().unwrap();
        assert!(parsed.get(key).is_some(), "missing JSON field `{key}`");
    }
    assert_eq!(parsed["transversals"], 6);
    assert_eq!(parsed["sets"].as_array().unwrap().len(), 6);

    write_file(dir.path(), "empty.cnf", "n 3\n");
    let closure = run_in(
        dir.path(),
        &["closure", "--cnf", "empty.cnf", "--set", "0", "--format", "json-lines"],
    );
    let parsed: serde_json::Value = stdout(&closure).trim().parse().unwrap();
    assert_eq!(parsed["closure"], serde_json::json!([0]));
    assert_eq!(parsed["steps"], 0);
}

#[test]
fn parse_errors_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "bad.hg", "n 4\n0 1\n9 2\n");
    let out = run_in(dir.path(), &["dualize", "bad.hg"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("bad.hg"), "error names the file: {err}");
    assert!(err.contains("line 3"), "error names the line: {err}");
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let edges: String = (0..9).map(|i| format!("{i} {}\n", i + 1)).collect();
    write_file(dir.path(), "path.hg", &format!("n 10\n{edges}"));
    let out = run_in(dir.path(), &["--budget", "1", "dualize", "path.hg"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn is_matroid_horn_recognizes_circular_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let circular = DefiniteCnf::circular(&u42_circuits());
    write_file(dir.path(), "u42.cnf", &circular.to_string());
    let out = run_in(dir.path(), &["is-matroid-horn", "--cnf", "u42.cnf"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "matroid_horn"), "true");
    let recovered: SetFamily = report.parse().unwrap();
    assert_eq!(recovered, u42_circuits());

    // A lone clause lacks the rest of its rotation group.
    write_file(dir.path(), "single.cnf", "n 4\n0 1 -> 2\n");
    let out = run_in(dir.path(), &["is-matroid-horn", "--cnf", "single.cnf"]);
    assert_eq!(code(&out), 1);
    assert!(field(&stdout(&out), "reason").contains("missing head"));
}

#[test]
fn implicate_dual_emits_the_dual_prime_implicates() {
    let dir = tempfile::tempdir().unwrap();
    let input = "n 4\n0 -> 1\n1 2 -> 3\n";
    write_file(dir.path(), "phi.cnf", input);
    let out = run_in(dir.path(), &["implicate-dual", "--cnf", "phi.cnf"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "definite_horn"), "true");

    let budget = Budget::default();
    let emitted: DefiniteCnf = report.parse().unwrap();
    let expected = BoolFn::from_cnf(&input.parse().unwrap(), &budget)
        .unwrap()
        .implicate_dual(&budget)
        .unwrap();
    let got = BoolFn::from_cnf(&emitted, &budget).unwrap();
    for x in 0..16u64 {
        assert_eq!(got.value(x), expected.value(x), "truth tables differ at {x:#b}");
    }
}

#[test]
fn covering_number_witness_verifies_via_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["design", "covering-number", "--n", "5", "--q", "3", "--r", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "covering_number"), "4");
    assert_eq!(field(&report, "schonheim_bound"), "4");

    // The report itself is a valid design file.
    write_file(dir.path(), "cover.hg", &report);
    let verify = run_in(
        dir.path(),
        &["design", "verify", "cover.hg", "--kind", "covering", "--target", "2"],
    );
    assert_eq!(code(&verify), 0, "{}", stderr(&verify));
    assert_eq!(field(&stdout(&verify), "valid"), "true");

    // Four triples on five points multiply cover some pair, so the same
    // family is not a Steiner system.
    let steiner = run_in(
        dir.path(),
        &["design", "verify", "cover.hg", "--kind", "steiner", "--target", "2"],
    );
    assert_eq!(code(&steiner), 1);
    assert!(field(&stdout(&steiner), "defect").contains("more than one block"));
}

#[test]
fn design_closed_forms_match_the_brute_force_values() {
    let dir = tempfile::tempdir().unwrap();
    let fh = run_in(dir.path(), &["design", "fort-hedlund", "--n", "7"]);
    assert_eq!(code(&fh), 0);
    assert_eq!(field(&stdout(&fh), "covering_number"), "7");

    let sb = run_in(
        dir.path(),
        &["design", "schonheim", "--n", "7", "--q", "3", "--r", "2"],
    );
    assert_eq!(field(&stdout(&sb), "schonheim_bound"), "7");

    let bose = run_in(dir.path(), &["design", "steiner-bose", "--n", "9"]);
    assert_eq!(code(&bose), 0);
    let report = stdout(&bose);
    assert_eq!(field(&report, "blocks"), "12");
    write_file(dir.path(), "sts9.hg", &report);
    let verify = run_in(
        dir.path(),
        &["design", "verify", "sts9.hg", "--kind", "steiner", "--target", "2"],
    );
    assert_eq!(code(&verify), 0, "{}", stderr(&verify));
}

#[test]
fn construct_uniform_star_and_doubling_yield_valid_systems() {
    let dir = tempfile::tempdir().unwrap();
    let budget = Budget::default();
    let spec = DesignSpec::new(DesignKind::Implication, 5, 3, 2).unwrap();

    let star = run_in(
        dir.path(),
        &["construct-uniform", "--n", "5", "--r", "2", "--kind", "star"],
    );
    assert_eq!(code(&star), 0, "{}", stderr(&star));
    let report = stdout(&star);
    assert_eq!(field(&report, "blocks"), "6");
    let family: SetFamily = report.parse().unwrap();
    assert!(verify_design(&spec, &family, &budget).unwrap().valid);

    let cover = stdout(&run_in(
        dir.path(),
        &["design", "covering-number", "--n", "5", "--q", "3", "--r", "2"],
    ));
    write_file(dir.path(), "cover.hg", &cover);
    let doubled = run_in(
        dir.path(),
        &[
            "construct-uniform",
            "--n",
            "5",
            "--r",
            "2",
            "--kind",
            "doubling",
            "--cover",
            "cover.hg",
        ],
    );
    assert_eq!(code(&doubled), 0, "{}", stderr(&doubled));
    let report = stdout(&doubled);
    let family: SetFamily = report.parse().unwrap();
    assert!(family.len() <= 8, "doubling at most doubles the cover");
    assert!(verify_design(&spec, &family, &budget).unwrap().valid);
}

#[test]
fn rank2_layout_reports_its_group_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["construct-uniform", "--n", "47", "--r", "2", "--kind", "rank2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "groups"), "9");
    assert_eq!(field(&report, "residual"), "2");
    assert_eq!(field(&report, "blocks"), "585");

    let wrong_rank = run_in(
        dir.path(),
        &["construct-uniform", "--n", "47", "--r", "3", "--kind", "rank2"],
    );
    assert_eq!(code(&wrong_rank), 2);
    assert!(stderr(&wrong_rank).contains("--r 2"));
}

#[test]
fn min_generator_witness_regenerates_the_family() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let out = run_in(dir.path(), &["min-generator", "u_4_2.hg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "value"), "2");
    assert_eq!(field(&report, "exact"), "true");

    let witness: SetFamily = report.parse().unwrap();
    let budget = Budget::default();
    let (closure, _) = generate_closure(&witness, &u42_circuits(), &budget).unwrap();
    assert_eq!(closure, u42_circuits());
}

#[test]
fn chordless_method_works_from_a_binary_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = BinaryMatrix::complete_graph_incidence(4).unwrap();
    write_file(dir.path(), "k4.mat", &k4.to_string());
    let out = run_in(
        dir.path(),
        &["min-circuits", "--binary", "k4.mat", "--method", "chordless"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(field(&report, "circuits"), "7");
    assert_eq!(field(&report, "value"), "4");
    assert_eq!(field(&report, "exact"), "true");

    // A circuit file that disagrees with the matrix is rejected.
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let clash = run_in(
        dir.path(),
        &["min-circuits", "u_4_2.hg", "--binary", "k4.mat"],
    );
    assert_eq!(code(&clash), 2);
    assert!(stderr(&clash).contains("does not match"));
}

#[test]
fn output_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let direct = run_in(dir.path(), &["dualize", "u_4_2.hg"]);
    let filed = run_in(dir.path(), &["dualize", "u_4_2.hg", "--output", "out.txt"]);
    assert_eq!(code(&filed), 0);
    assert!(filed.stdout.is_empty(), "--output leaves stdout empty");
    let written = std::fs::read(dir.path().join("out.txt")).unwrap();
    assert_eq!(written, direct.stdout);
}

#[test]
fn thread_caps_do_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "u_4_2.hg", U42_HG);
    let default = run_in(dir.path(), &["dualize", "u_4_2.hg"]);
    let flagged = run_in(dir.path(), &["dualize", "u_4_2.hg", "--threads", "1"]);
    let via_env = mhk()
        .current_dir(dir.path())
        .env("MHK_THREADS", "1")
        .args(["dualize", "u_4_2.hg"])
        .output()
        .unwrap();
    assert_eq!(default.stdout, flagged.stdout);
    assert_eq!(default.stdout, via_env.stdout);

    let bad_env = mhk()
        .current_dir(dir.path())
        .env("MHK_THREADS", "zebra")
        .args(["dualize", "u_4_2.hg"])
        .output()
        .unwrap();
    assert_eq!(code(&bad_env), 2);
    assert!(stderr(&bad_env).contains("MHK_THREADS"));
}
