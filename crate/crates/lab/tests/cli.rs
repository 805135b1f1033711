use std::fs;
use std::process::Command as Proc;

use hecke_lab::config::CheckSpec;
use hecke_lab::report::{emit_report, sidecar_config, Report};
use hecke_lab::{parse_config, run, Command, LabError, RunOptions};

const E4_FE: &str = r#"{
  "group": {"p": 3, "weight": 4},
  "coefficients": {"kind": "eisenstein", "weight": 4, "mmax": 400},
  "check": {"type": "fe", "tol": 1e-8}
}"#;

const E4_FIRST: &str = r#"{
  "group": {"p": 3, "weight": 4},
  "coefficients": {"kind": "eisenstein", "weight": 4, "mmax": 20000},
  "check": {"type": "first", "rho": 5, "grid": [2.5, 5.5, 10.5], "tol": 1e-6}
}"#;

const DELTA_FIRST: &str = r#"{
  "group": {"p": 3, "weight": 12},
  "coefficients": {"kind": "delta", "mmax": 20000},
  "check": {"type": "first", "rho": 2, "grid": [3.5, 7.5]}
}"#;

const DELTA_SECOND: &str = r#"{
  "group": {"p": 3, "weight": 12},
  "coefficients": {"kind": "delta", "mmax": 20000},
  "check": {"type": "second", "rho": 1, "grid": [1, 2, 5]}
}"#;

fn opts(dir: &std::path::Path) -> RunOptions {
    RunOptions { out: dir.to_path_buf(), ..Default::default() }
}

#[test]
fn minimal_config_parses() {
    let c = parse_config(E4_FE).unwrap();
    assert!(c.rpf.zero_terms.is_empty() && c.rpf.poles.is_empty());
    assert!(c.rpf().unwrap().is_empty());
    assert_eq!(c.check.name(), "fe");
}

#[test]
fn zero_alpha_is_rejected() {
    let text = r#"{
      "group": {"p": 3, "weight": 4},
      "coefficients": {"kind": "list", "a": [[1, 0]], "beta": 1.0},
      "rpf": {"poles": [{"alpha": 0.0, "c": [[1, 0]]}]},
      "check": {"type": "residues"}
    }"#;
    let e = parse_config(text).unwrap_err();
    assert!(e.to_string().contains("PoleBlock.alpha"), "{e}");
}

#[test]
fn rho_below_threshold_names_the_inequality() {
    let text = E4_FIRST.replace("\"rho\": 5", "\"rho\": 1");
    let e = parse_config(&text).unwrap_err();
    assert!(e.to_string().contains("rho >= 2*beta - 2k - 1/2 violated: 1 < 2"), "{e}");
}

#[test]
fn unknown_keys_fail_with_position() {
    let text = E4_FE.replace("\"tol\": 1e-8", "\"tol\": 1e-8, \"tolerance\": 1");
    match parse_config(&text) {
        Err(LabError::Parse { line, column, message }) => {
            // reported where the check object closes
            assert!((4..=5).contains(&line), "line {line}");
            assert!(column > 0);
            assert!(message.contains("tolerance"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_config("{\"group\": "), Err(LabError::Parse { .. })));
}

#[test]
fn empty_report_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let rep = Report::new("verify-first", &["x", "lhs_re"], 1e-6);
    let (csv, _) = emit_report(&rep, None, None, dir.path(), "empty").unwrap();
    assert_eq!(fs::read_to_string(csv).unwrap(), "x,lhs_re\n");
}

#[test]
fn first_identity_rows_and_sidecar_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(E4_FIRST).unwrap();
    let out = run(Command::VerifyFirst, &cfg, &opts(dir.path())).unwrap();
    assert_eq!(out.exit_code(), 0);
    let text = fs::read_to_string(&out.csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        "x,lhs_re,lhs_im,L1_re,L1_im,L2_re,L2_im,L3_re,L3_im,L4_re,L4_im,L5_re,L5_im,rhs_re,rhs_im,abs_err,rel_err,bessel_terms_used"
    );
    // 17 significant digits
    assert!(lines[1].starts_with("2.5000000000000000e0,"));
    let echoed = sidecar_config(&fs::read_to_string(&out.json).unwrap()).unwrap().unwrap();
    assert_eq!(echoed, cfg);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let cfg = parse_config(DELTA_SECOND).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = run(Command::VerifySecond, &cfg, &RunOptions { threads: 1, ..opts(a.path()) }).unwrap();
    let ob = run(Command::VerifySecond, &cfg, &RunOptions { threads: 3, ..opts(b.path()) }).unwrap();
    assert_eq!(oa.exit_code(), 0);
    assert_eq!(fs::read(oa.csv).unwrap(), fs::read(ob.csv).unwrap());
}

#[test]
fn check_type_must_match_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(E4_FE).unwrap();
    assert!(matches!(run(Command::VerifyFirst, &cfg, &opts(dir.path())), Err(LabError::Invalid(_))));
}

#[test]
fn residues_and_kernels_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
      "group": {"p": 3, "weight": 4},
      "coefficients": {"kind": "list", "a": [[1, 0], [-0.5, 0]], "beta": 1.0},
      "rpf": {"zero_terms": [{"r": 3, "c": [0.3, -0.1]}],
              "poles": [{"alpha": 1.3, "c": [[0.4, 0.1], [-0.2, 0.3]]}, {"alpha": -0.8, "c": [[0.1, -0.6]]}]},
      "continuation": {"delta_strip": 4.55},
      "check": {"type": "kernels", "rho": 1, "y": 12.0}
    }"#;
    let cfg = parse_config(text).unwrap();
    let out = run(Command::Kernels, &cfg, &opts(dir.path())).unwrap();
    assert_eq!(out.report.rows.len(), 7);
    assert_eq!(out.exit_code(), 0);

    let mut cfg = cfg;
    cfg.check = CheckSpec::Residues { radius: 0.25, n: 64, tol: 1e-7 };
    let out = run(Command::Residues, &cfg, &opts(dir.path())).unwrap();
    assert_eq!(out.report.rows.len(), 4);
    assert_eq!(out.exit_code(), 0);
}

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_hecke-lab"))
}

fn write_config(dir: &std::path::Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("run.json");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_zero_when_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), E4_FE);
    let st = bin().args(["verify-fe", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).status().unwrap();
    assert_eq!(st.code(), Some(0));
    assert!(dir.path().join("verify-fe.csv").exists());
    assert!(dir.path().join("verify-fe.json").exists());

    let cfg = write_config(dir.path(), DELTA_FIRST);
    let st = bin().args(["verify-first", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).status().unwrap();
    assert_eq!(st.code(), Some(0));
}

#[test]
fn exit_two_on_tolerance_breach() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DELTA_FIRST);
    let st = bin()
        .args(["verify-first", "--tol", "1e-30", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn exit_one_on_error() {
    let dir = tempfile::tempdir().unwrap();
    let st = bin().args(["verify-fe", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(st.code(), Some(1));
    let cfg = write_config(dir.path(), "{\"group\": {\"p\": 3}}");
    let st = bin().args(["verify-fe", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(st.code(), Some(1));
}

#[test]
fn selfcheck_passes() {
    let dir = tempfile::tempdir().unwrap();
    let st = bin().args(["selfcheck", "--seed", "7", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stdout));
    let side = fs::read_to_string(dir.path().join("selfcheck.json")).unwrap();
    assert!(side.contains("\"seed\": 7"));
}
