//! End-to-end checks of the command-line front end: output grammar, exit
//! codes, format defaults, config handling, and byte-level determinism.

use antilap::cli::run;
use antilap::numerics::{fmt_f64, QuadratureSpec};
use antilap::solutions::{build, eval_solution, SolutionFamily};

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("antilap")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn triangle_csv_prints_exact_rows_in_order() {
    let (code, out, err) = run_cli(&["triangle", "--family", "b", "--max-n", "7"]);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    assert_eq!(
        out,
        "n,k,value\n3,3,1\n5,3,1/2\n5,5,1/2\n7,3,3/8\n7,5,1/4\n7,7,3/8\n"
    );
    let (code, out, _) = run_cli(&["triangle", "--family", "a-even", "--max-n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,k,value\n4,4,1\n6,4,1\n6,6,1/2\n8,4,1\n8,6,1/2\n8,8,1/4\n");
}

#[test]
fn eval_row_matches_direct_library_evaluation() {
    let (code, out, _) = run_cli(&[
        "eval", "--family", "psi-ring", "--n", "5", "--a", "1", "--r", "2", "--z", "1",
    ]);
    assert_eq!(code, 0);
    let sol = build(SolutionFamily::PsiRing, 5).unwrap();
    let reference = eval_solution(&sol, 2.0, 1.0, Some(1.0), &QuadratureSpec::default()).unwrap();
    let expected = format!(
        "r,z,value,err\n{},{},{},{}\n",
        fmt_f64(2.0),
        fmt_f64(1.0),
        fmt_f64(reference.value),
        fmt_f64(reference.err_estimate)
    );
    assert_eq!(out, expected);
}

#[test]
fn verify_single_suite_json_and_exit_zero() {
    let (code, out, err) = run_cli(&["verify", "--suite", "triangles"]);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    let report: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(report["suite"], "triangles");
    assert_eq!(report["pass"], true);
    assert_eq!(report["seed"], 0);
    assert!(report["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn verify_group_aggregates_suites() {
    let (code, out, _) = run_cli(&["verify", "symbolic", "--max-n", "12"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(report["pass"], true);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 5);
    let names: Vec<&str> = suites
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        ["annihilation", "transforms", "rearrangements", "triangles", "sums"]
    );
}

#[test]
fn verify_csv_lines_stay_comma_clean() {
    let (code, out, _) = run_cli(&["verify", "symbolic", "--max-n", "12", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("suite,check,pass,detail"));
    for line in lines {
        assert_eq!(
            line.matches(',').count(),
            3,
            "row has a stray comma: {line}"
        );
    }
}

#[test]
fn config_file_tunes_runs_and_rejects_unknown_keys() {
    let dir = std::env::temp_dir();
    let good = dir.join("antilap_cli_good.conf");
    std::fs::write(&good, "quad.abs_tol = 1e-6\nquad.rel_tol = 1e-6\n").unwrap();
    let (code, out, _) = run_cli(&[
        "eval",
        "--family",
        "psi-ring",
        "--n",
        "3",
        "--a",
        "1",
        "--r",
        "2",
        "--z",
        "1",
        "--config",
        good.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let loose: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let (_, out_tight, _) = run_cli(&[
        "eval", "--family", "psi-ring", "--n", "3", "--a", "1", "--r", "2", "--z", "1",
        "--format", "json",
    ]);
    let tight: serde_json::Value = serde_json::from_str(out_tight.trim()).unwrap();
    let evals_loose = loose["evals"].as_u64().unwrap();
    let evals_tight = tight["evals"].as_u64().unwrap();
    assert!(
        evals_loose < evals_tight,
        "looser tolerances should need fewer integrand evaluations \
         ({evals_loose} vs {evals_tight})"
    );

    let bad = dir.join("antilap_cli_bad.conf");
    std::fs::write(&bad, "quad.abs_tol = 1e-6\nquad.weird = 3\n").unwrap();
    let (code, _, err) = run_cli(&[
        "verify", "--suite", "triangles", "--config", bad.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key"));
}

#[test]
fn domain_and_usage_failures_exit_two() {
    let (code, _, err) = run_cli(&["eval", "--family", "xi", "--n", "3", "--r", "0", "--z", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("singular"));
    let (code, _, _) = run_cli(&["build", "--family", "psi", "--n", "5", "--format", "csv"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["eval", "--family", "psi", "--n", "5", "--x", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["eval", "--family", "phi", "--n", "5", "--r", "1", "--z", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["pair", "--family", "psi-ring", "--n", "5"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&["asympt", "--family", "phi", "--n", "5", "--direction", "r-large"]);
    assert_eq!(code, 2);
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let args = [
        "verify",
        "--suite",
        "rearrangements",
        "--max-n",
        "6",
        "--format",
        "csv",
    ];
    let (code_a, out_a, _) = run_cli(&args);
    let (code_b, out_b, _) = run_cli(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b);

    let grid = [
        "plotdata", "--family", "psi-ring", "--n", "3", "--a", "1", "--r-min", "0", "--r-max",
        "2", "--r-steps", "4", "--z-min", "0", "--z-max", "1", "--z-steps", "3",
    ];
    let (_, grid_a, _) = run_cli(&grid);
    let (_, grid_b, _) = run_cli(&grid);
    assert_eq!(grid_a, grid_b);
}

#[test]
fn plotdata_emits_closed_form_grid_in_row_major_order() {
    // The even point solution in four dimensions is ln(1/sqrt(r^2 + z^2)).
    let (code, out, err) = run_cli(&[
        "plotdata", "--family", "psi", "--n", "4", "--r-min", "1", "--r-max", "2", "--r-steps",
        "2", "--z-min", "1", "--z-max", "2", "--z-steps", "2",
    ]);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    let mut expected = String::from("r,z,value\n");
    for (r, z) in [(1.0f64, 1.0f64), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0)] {
        let v = -(r * r + z * z).sqrt().ln();
        expected.push_str(&format!("{},{},{}\n", fmt_f64(r), fmt_f64(z), fmt_f64(v)));
    }
    assert_eq!(out, expected);
}

#[test]
fn plotdata_leaves_singular_points_empty_and_warns_once() {
    let (code, out, err) = run_cli(&[
        "plotdata", "--family", "xi", "--n", "3", "--r-min", "0", "--r-max", "9", "--r-steps",
        "10", "--z-min", "0", "--z-max", "9", "--z-steps", "10",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 101);
    let empty: Vec<&str> = lines[1..]
        .iter()
        .copied()
        .filter(|l| l.ends_with(','))
        .collect();
    assert_eq!(empty.len(), 1);
    assert!(empty[0].starts_with(&fmt_f64(0.0)));
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("1 of 100"));

    let (code, _, err) = run_cli(&[
        "plotdata", "--family", "xi", "--n", "3", "--r-min", "2", "--r-max", "2", "--r-steps",
        "5", "--z-min", "0", "--z-max", "1", "--z-steps", "2",
    ]);
    assert_eq!(code, 2, "degenerate r range must be rejected: {err}");

    let (code, _, err) = run_cli(&[
        "plotdata", "--family", "xi", "--n", "3", "--r-min", "0", "--r-max", "1", "--r-steps",
        "1", "--z-min", "0", "--z-max", "1", "--z-steps", "1",
    ]);
    assert_eq!(code, 2, "all-singular grid must be a domain error");
    assert!(err.contains("singular"));
}

#[test]
fn binary_process_streams_and_exit_codes_match() {
    let exe = env!("CARGO_BIN_EXE_antilap");
    let ok = std::process::Command::new(exe)
        .args(["coeffs", "--family", "a", "--k", "7", "--n", "11"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        "family,k,n,value\na,7,11,18/35\n"
    );
    assert!(ok.stderr.is_empty());

    let bad = std::process::Command::new(exe)
        .args(["coeffs", "--family", "a", "--k", "4", "--n", "11"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(!bad.stderr.is_empty());
}
