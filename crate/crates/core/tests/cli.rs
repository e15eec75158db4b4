use std::path::PathBuf;
use std::process::Command;

use cantor_retract::cli::{run, EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cantor-retract").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.txt"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(name: &str, args: &[&str], code: i32) {
    let (got, out, err) = invoke(args);
    assert_eq!(got, code, "{name}: stderr {err}");
    assert_eq!(out, golden(name), "{name}");
}

#[test]
fn retract_goldens() {
    assert_golden("retract_odd", &["retract", "{0, 2, 22}"], EXIT_OK);
    assert_golden("retract_empty", &["retract", "{}"], EXIT_OK);
    assert_golden("retract_deep_tail", &["retract", "{0~2, 0222, 022}"], EXIT_OK);
}

#[test]
fn witness_golden() {
    assert_golden(
        "witness_pass",
        &["witness", "{0, 2, 22}", "0", "--depth", "4"],
        EXIT_OK,
    );
}

#[test]
fn check_counterexample_exits_2() {
    assert_golden(
        "check_counterexample",
        &["check", "0", "0", "{*}", "--depth", "1"],
        EXIT_COUNTEREXAMPLE,
    );
}

#[test]
fn enumerate_goldens() {
    assert_golden(
        "enumerate_two_parts",
        &["enumerate", "{0, 2}", "--depth", "2"],
        EXIT_OK,
    );
    assert_golden(
        "enumerate_capped",
        &["enumerate", "{*}", "--depth", "3", "--cap", "10"],
        EXIT_OK,
    );
}

#[test]
fn campaign_lines_golden() {
    assert_golden(
        "campaign_lines",
        &[
            "campaign",
            "--suite",
            "group-laws",
            "--suite",
            "retraction-oracle",
            "--format",
            "lines",
        ],
        EXIT_OK,
    );
}

#[test]
fn parse_prints_canonical_form() {
    let (code, out, _) = invoke(&["parse", "element", "{22~2, 0, 02~0}"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "{0, 02, ~2}\n");
    let (code, out, _) = invoke(&["parse", "point", "2022~0"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "2022\n"));
}

#[test]
fn input_errors_exit_1() {
    let cases: &[&[&str]] = &[
        &["parse", "cover", "{2, 00, 01}"],
        &["parse", "cover", "{0, 00}"],
        &["retract", "{0, 0}"],
        &["witness", "{0, 2}", "*"],
        &["witness", "{0, 2, 22}", "2"],
        &["enumerate", "{0}"],
        &["enumerate", "{00, 02, 2}", "--depth", "1"],
        &["campaign", "--suite", "no-such-suite"],
        &["campaign", "--depth", "2"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_ERROR, "{args:?}: {out}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_error_reports_position() {
    let (_, _, err) = invoke(&["parse", "element", "{0, 21}"]);
    assert_eq!(
        err,
        "error: cannot parse group element \"{0, 21}\": invalid character '1' at position 5\n"
    );
}

#[test]
fn config_error_names_the_line() {
    let dir = std::env::temp_dir().join(format!("cantor-retract-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.conf");
    std::fs::write(&path, "# comment\nseed = 7\ncases = lots\n").unwrap();
    let (code, _, err) = invoke(&["campaign", "--config", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 3:"), "{err}");
}

#[test]
fn config_file_drives_the_campaign() {
    let dir = std::env::temp_dir().join(format!("cantor-retract-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ok.conf");
    std::fs::write(&path, "cases = 20\nsuites = maximality, group-laws\n").unwrap();
    let (code, out, err) = invoke(&[
        "campaign",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "lines",
    ]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, "group-laws 20 0\nmaximality 20 0\n");
}

#[test]
fn help_exits_0() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("retract"));
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cantor-retract");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let ok = status(&["retract", "{0, 2, 22}"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), golden("retract_odd"));

    let bad = status(&["retract", "{0,"]);
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: "));

    let found = status(&["check", "0", "0", "{*}", "--depth", "1"]);
    assert_eq!(found.status.code(), Some(EXIT_COUNTEREXAMPLE));
}
