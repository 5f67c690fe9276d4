mod common;

use std::fs;

use ec_designs::cli::{run_command, Outcome, EXIT_FAILS, EXIT_OK, EXIT_USAGE};
use ec_designs::constructions::{netto13, ts13_4, DEFAULT_SEED};
use ec_designs::io::{parse_blocks_file, write_blocks_file};
use ec_designs::report::Report;

fn run(args: &str) -> Outcome {
    run_command(std::iter::once("ec-designs").chain(args.split_whitespace()))
}

fn run_args(args: &[&str]) -> Outcome {
    run_command(std::iter::once("ec-designs").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn ec_on_ts13_4_holds() {
    let out = run("ec --n 2 ts13_4");
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    let report = out.report.unwrap();
    assert!(report.ec.unwrap().result.holds);
    assert!(out.stdout.contains("2-e.c.: holds"));
}

#[test]
fn ec_failure_exits_one() {
    let out = run("ec --n 2 sqs8");
    assert_eq!(out.exit_code, EXIT_FAILS);
    assert_eq!(out.stdout, golden("ec_sqs8.txt"));
}

#[test]
fn xi_of_one_big_of_sqs8() {
    let out = run("xi sqs8 --graph-mode sbig --s 1");
    assert_eq!(out.exit_code, EXIT_OK);
    let xi = out.report.unwrap().xi.unwrap().result;
    assert!(xi.value < 2);
    assert!(out.stdout.contains("xi: 0"));
}

#[test]
fn xi_json_golden() {
    let out = run("--json xi ts13_4");
    let mut report = Report::from_json(&out.stdout).unwrap();
    assert_eq!(&report, out.report.as_ref().unwrap());
    report.timings_us.clear();
    assert_eq!(report.to_json(), golden("xi_ts13_4.json"));
}

#[test]
fn validate_commands() {
    assert_eq!(run("validate --t 3 --k 4 --lambda 1 sqs16").exit_code, EXIT_OK);
    let out = run("validate --t 2 --k 3 --lambda 2 --max-violations 3 netto13");
    assert_eq!(out.exit_code, EXIT_FAILS);
    assert_eq!(out.stdout, golden("validate_netto_lambda2.txt"));
    let pbd = run("validate --k-set 3 --lambda 1 netto13");
    assert_eq!(pbd.exit_code, EXIT_OK);
    assert!(pbd.stdout.contains("valid as a (13, {3}, 1)-PBD"));
    assert_eq!(run("validate --lambda 1 netto13").exit_code, EXIT_USAGE);
    assert_eq!(run("validate --t 5 --k 3 --lambda 1 netto13").exit_code, EXIT_USAGE);
}

#[test]
fn json_reports_round_trip() {
    for args in [
        "--json validate --t 2 --k 3 --lambda 2 netto13",
        "--json graph --mode sbig --s 0,2 sqs8",
        "--json dominate complete:6:3",
        "--json subsys --w 6 --k 3 --lambda 4 ts13_4",
        "--json conditions --v 13 --k 3 --lambda 4 --n 2",
        "--json ec --n 3 complete:9:3",
        "--json verify-paper --fast",
        "--json construct netto13",
    ] {
        let out = run(args);
        let parsed = Report::from_json(&out.stdout).unwrap_or_else(|e| panic!("{args}: {e}"));
        assert_eq!(&parsed, out.report.as_ref().unwrap(), "{args}");
        assert_eq!(parsed.to_json(), out.stdout, "{args}");
    }
}

#[test]
fn report_key_order_is_fixed() {
    let out = run("--json ec --n 2 sqs8");
    let keys: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(keys, ["command", "seed", "source", "design", "graph", "ec", "timings_us"]);
}

#[test]
fn construct_prints_and_writes_blocks() {
    let out = run("construct netto13");
    assert_eq!(out.exit_code, EXIT_OK);
    assert_eq!(out.stdout, write_blocks_file(&netto13()));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.txt");
    let out = run_args(&["construct", "ts13_4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, EXIT_OK);
    assert_eq!(parse_blocks_file(&fs::read_to_string(&path).unwrap()).unwrap(), ts13_4());

    let out = run("construct cyclic:13:1,3,9/2,5,6");
    assert_eq!(parse_blocks_file(&out.stdout).unwrap(), netto13());
    assert_eq!(run("construct cyclic:13:1,3,x").exit_code, EXIT_USAGE);
    assert_eq!(run("construct cyclic:13:1,3,13").exit_code, EXIT_USAGE);
}

#[test]
fn files_are_accepted_as_sources() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("netto.txt");
    fs::write(&path, write_blocks_file(&netto13())).unwrap();
    let out = run_args(&["ec", "--n", "2", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, EXIT_OK);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "v 3\nb 2\n0 1 2\n").unwrap();
    let out = run_args(&["validate", "--k", "3", "--lambda", "1", bad.to_str().unwrap()]);
    assert_eq!(out.exit_code, EXIT_USAGE);
    assert!(out.stderr.contains("declared 2 blocks, found 1"), "{}", out.stderr);

    let out = run("ec --n 2 no/such/file.txt");
    assert_eq!(out.exit_code, EXIT_USAGE);
}

#[test]
fn builtin_names_shadow_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sqs8"), "not a blocks file").unwrap();
    fs::write(dir.path().join("mine"), write_blocks_file(&netto13())).unwrap();
    let cwd = std::env::current_dir().unwrap();
    std::env::set_current_dir(dir.path()).unwrap();
    let builtin = run("validate --t 3 --k 4 --lambda 1 sqs8");
    let file = run("validate --t 2 --k 3 --lambda 1 mine");
    std::env::set_current_dir(cwd).unwrap();
    assert_eq!(builtin.exit_code, EXIT_OK, "{}", builtin.stderr);
    assert_eq!(file.exit_code, EXIT_OK, "{}", file.stderr);
}

#[test]
fn graph_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let out = run_args(&["graph", "--mode", "sbig", "--s", "0", "--out", path.to_str().unwrap(), "sqs8"]);
    assert_eq!(out.exit_code, EXIT_OK);
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..2], ["n 14", "m 7"]);
    assert_eq!(lines.len(), 9);
    assert_eq!(run("graph --mode sbig sqs8").exit_code, EXIT_USAGE);
    assert_eq!(run("graph --s 1 sqs8").exit_code, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(run("").exit_code, EXIT_USAGE);
    assert_eq!(run("frobnicate sqs8").exit_code, EXIT_USAGE);
    assert_eq!(run("ec sqs8").exit_code, EXIT_USAGE);
    assert_eq!(run("ec --n 14 sqs8").exit_code, EXIT_USAGE);
    assert_eq!(run("ec --n 0 sqs8").exit_code, EXIT_USAGE);
    assert_eq!(run("verify-paper --extra sqs99=x").exit_code, EXIT_USAGE);
    assert_eq!(run("xi complete:3:5").exit_code, EXIT_USAGE);
    let help = run("--help");
    assert_eq!(help.exit_code, EXIT_OK);
    assert!(help.stdout.contains("verify-paper"));
}

#[test]
fn seed_is_reported_and_used() {
    let default = run("--json construct ts9_2").report.unwrap();
    assert_eq!(default.seed, DEFAULT_SEED);
    let other = run("--json --seed 7 construct ts9_2").report.unwrap();
    assert_eq!(other.seed, 7);
    for r in [&default, &other] {
        let d = parse_blocks_file(r.blocks_file.as_ref().unwrap()).unwrap();
        assert!(d.is_simple());
        assert_eq!(d.b(), 24);
    }
    assert!(run("--seed 7 ec --n 1 ts9_2").stdout.contains("seed: 7"));
}

#[test]
fn verify_paper_with_extras() {
    let dir = tempfile::tempdir().unwrap();
    let p10 = dir.path().join("sqs10.txt");
    let p14 = dir.path().join("sqs14.txt");
    fs::write(&p10, write_blocks_file(&common::sqs_by_search(10))).unwrap();
    fs::write(&p14, write_blocks_file(&common::sqs_by_search(14))).unwrap();
    let out = run_args(&[
        "verify-paper",
        "--fast",
        "--extra",
        &format!("sqs10={}", p10.display()),
        "--extra",
        &format!("sqs14={}", p14.display()),
    ]);
    let suite = out.report.unwrap().suite.unwrap();
    let get = |id: &str| suite.checks.iter().find(|c| c.id == id).unwrap();
    assert!(get("extra:sqs10").passed);
    assert!(get("extra:sqs14").passed);
    assert!(suite.checks.iter().all(|c| c.id != "stress"));

    // A file with the wrong order fails its check rather than the run.
    let out = run_args(&["verify-paper", "--fast", "--extra", &format!("sqs14={}", p10.display())]);
    let suite = out.report.unwrap().suite.unwrap();
    assert!(!suite.checks.iter().find(|c| c.id == "extra:sqs14").unwrap().passed);
    assert_eq!(out.exit_code, EXIT_FAILS);
}

#[test]
fn verify_paper_exit_code_tracks_checks() {
    let out = run("verify-paper --fast");
    let suite = out.report.as_ref().unwrap().suite.as_ref().unwrap();
    assert_eq!(out.exit_code == EXIT_OK, suite.all_passed);
    assert!(out.stdout.contains("PASS [1]"));
}
