mod common;

use std::process::Command as Process;

use metallic_lightlike::cli::{load_manifest, parse_manifest, run, Command, HintOverride, ManifestError, RunOptions, Status};
use metallic_lightlike::Error;

const MLL: &str = env!("CARGO_BIN_EXE_mll");

fn mll(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(MLL).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    common::fixture(name).display().to_string()
}

const BASE: &str = r#"{
    "metallic": {"p": 1, "q": 1},
    "ambient": {"dim": 3, "signature": [-1, 1, 1]},
    "structure": {"J": ["sigma", "sigma", "sigma"]},
    "submanifold": {"chart_dim": 2, "components": ["u1", "u1", "u2"]},
    "sample_points": [["0", "0"]]
}"#;

fn with(edit: impl FnOnce(&mut serde_json::Value)) -> Vec<u8> {
    let mut v: serde_json::Value = serde_json::from_str(BASE).unwrap();
    edit(&mut v);
    serde_json::to_vec(&v).unwrap()
}

#[test]
fn base_manifest_loads() {
    let m = parse_manifest(BASE.as_bytes()).unwrap();
    assert_eq!(m.instance.chart_dim(), 2);
    assert_eq!(m.instance.variables(), &["u1".to_string(), "u2".to_string()]);
}

#[test]
fn signature_length_must_match() {
    let bytes = with(|v| v["ambient"]["signature"] = serde_json::json!([-1, 1]));
    let err = parse_manifest(&bytes).unwrap_err();
    assert!(matches!(&err, ManifestError::Field { field, .. } if field == "ambient.signature"), "{err}");
}

#[test]
fn pythagorean_pairs_are_checked() {
    let bytes = with(|v| {
        v["constants"] = serde_json::json!({"c": "1/2", "s": "1/2"});
        v["pythagorean"] = serde_json::json!([["c", "s"]]);
    });
    let err = parse_manifest(&bytes).unwrap_err();
    assert!(err.to_string().contains("pythagorean[0]"), "{err}");
    let ok = with(|v| {
        v["constants"] = serde_json::json!({"c": "5/13", "s": "12/13"});
        v["pythagorean"] = serde_json::json!([["c", "s"]]);
    });
    assert!(parse_manifest(&ok).is_ok());
}

#[test]
fn malformed_json_reports_line() {
    let err = parse_manifest(b"{\n  \"metallic\": {\"p\": 1,,\n}").unwrap_err();
    assert!(matches!(err, ManifestError::Json { line: 2, .. }), "{err}");
}

#[test]
fn expression_errors_carry_field_and_position() {
    let bytes = with(|v| v["submanifold"]["components"][1] = serde_json::json!("u1 + * u2"));
    match parse_manifest(&bytes).unwrap_err() {
        ManifestError::Expr { field, source } => {
            assert_eq!(field, "submanifold.components[1]");
            assert_eq!(source.position(), 5);
        }
        other => panic!("{other}"),
    }
    let bytes = with(|v| v["submanifold"]["components"][2] = serde_json::json!("u2 + w"));
    let err = parse_manifest(&bytes).unwrap_err();
    assert!(err.to_string().contains("w"), "{err}");
    let bytes = with(|v| v["submanifold"]["components"][2] = serde_json::json!("u2^-1"));
    assert!(parse_manifest(&bytes).is_err());
}

#[test]
fn malformed_corpus_never_panics() {
    let bad = [
        "", "{", "[]", "null", "{\"metallic\": 3}", "(", "u1 +", "1/0", "sigma^", "((u1)", "u1 u2", "2^99", "3/", "#",
    ];
    for src in bad {
        let _ = parse_manifest(src.as_bytes());
        let bytes = with(|v| v["submanifold"]["components"][0] = serde_json::json!(src));
        if let Err(ManifestError::Expr { source, .. }) = parse_manifest(&bytes) {
            assert!(source.position() <= src.len());
        }
    }
}

#[test]
fn non_constant_structure_is_unsupported() {
    let bytes = with(|v| {
        v["structure"] = serde_json::json!({"J_matrix": [["sigma", "0", "0"], ["0", "sigma", "u1"], ["0", "0", "sigma"]]});
    });
    let err: Error = parse_manifest(&bytes).unwrap_err().into();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn invalid_structure_is_invalid_input() {
    let bytes = with(|v| v["structure"] = serde_json::json!({"J": ["sigma", "1", "sigma"]}));
    let err: Error = parse_manifest(&bytes).unwrap_err().into();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn analyze_example1_exits_zero() {
    let (code, out, _) = mll(&["analyze", &fixture("example1.json")]);
    assert_eq!(code, 0);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["classification"]["class"], "r-lightlike");
    assert_eq!(r["classification"]["r"], 1);
    assert_eq!(r["structure_kind"], "invariant");
}

#[test]
fn verify_example2_metric_connection_is_consistent() {
    let (code, out, _) = mll(&["verify", &fixture("example2.json"), "--checks", "4.4"]);
    assert_eq!(code, 0);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
    assert_eq!(r["checks"][0]["status"], "consistent");
}

#[test]
fn classify_nondegenerate_exits_three() {
    let dir = std::env::temp_dir().join(format!("mll-r0-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r0.json");
    std::fs::write(&path, with(|v| v["submanifold"]["components"] = serde_json::json!(["0", "u1", "u2"]))).unwrap();
    let (code, _, err) = mll(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("NotLightlike"), "{err}");
}

#[test]
fn bad_input_exits_two() {
    let (code, _, _) = mll(&["analyze", "/nonexistent/manifest.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = mll(&["verify", &fixture("example1.json"), "--checks", "9.9"]);
    assert_eq!(code, 2);
    let (code, _, _) = mll(&["bogus", &fixture("example1.json")]);
    assert_eq!(code, 2);
}

#[test]
fn inapplicable_checks_are_rows() {
    let m = load_manifest(&common::fixture("example1.json")).unwrap();
    let opts = RunOptions {
        checks: Some(vec!["4.1".into(), "3.3".into()]),
        ..Default::default()
    };
    let r = run(Command::Verify, &m, &opts).unwrap();
    assert_eq!(r.checks[0].status, Status::NotApplicable);
    assert_eq!(r.checks[1].status, Status::Consistent);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn all_expands_by_structure_kind() {
    let ids = |name: &str| -> Vec<String> {
        let m = load_manifest(&common::fixture(name)).unwrap();
        let opts = RunOptions {
            checks: Some(vec!["all".into()]),
            ..Default::default()
        };
        run(Command::Verify, &m, &opts).unwrap().checks.into_iter().map(|c| c.id).collect()
    };
    assert_eq!(ids("example1.json"), ["3.1", "3.2", "3.3", "3.4", "3.5", "lemma3.1", "identities"]);
    assert_eq!(ids("example2.json"), ["4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "prop4.3", "identities"]);
}

#[test]
fn screen_hint_override() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let auto = RunOptions {
        screen_hint: Some(HintOverride::Automatic),
        ..Default::default()
    };
    let r = run(Command::Frames, &m, &auto).unwrap();
    assert!(r.points.iter().all(|p| p.screen_choice == "repaired"));
    let named = RunOptions {
        screen_hint: Some(HintOverride::parse("U4,Jxi,JN")),
        ..Default::default()
    };
    let r = run(Command::Frames, &m, &named).unwrap();
    assert!(r.points.iter().all(|p| p.screen_choice == "hint"));
    let bad = RunOptions {
        screen_hint: Some(HintOverride::parse("U4,nope")),
        ..Default::default()
    };
    assert_eq!(run(Command::Frames, &m, &bad).unwrap_err().exit_code(), 2);
}

#[test]
fn reports_are_deterministic() {
    for name in ["example1.json", "example2.json", "cone.json", "totally_lightlike.json"] {
        for cmd in ["analyze", "verify", "frames"] {
            let a = mll(&[cmd, &fixture(name)]);
            let b = mll(&[cmd, &fixture(name)]);
            assert_eq!(a, b, "{cmd} {name}");
        }
    }
}

#[test]
fn hash_tracks_manifest_bytes() {
    let a = parse_manifest(BASE.as_bytes()).unwrap();
    let b = parse_manifest(format!("{BASE} ").as_bytes()).unwrap();
    let c = parse_manifest(BASE.as_bytes()).unwrap();
    assert_ne!(a.hash, b.hash);
    assert_eq!(a.hash, c.hash);
}

fn strings(v: &serde_json::Value, out: &mut Vec<String>) {
    match v {
        serde_json::Value::String(s) => out.push(s.clone()),
        serde_json::Value::Array(a) => a.iter().for_each(|x| strings(x, out)),
        serde_json::Value::Object(o) => o.values().for_each(|x| strings(x, out)),
        _ => {}
    }
}

#[test]
fn text_report_carries_json_scalars() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let r = run(Command::Analyze, &m, &RunOptions::default()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let text = r.to_text();
    let mut all = Vec::new();
    strings(&json["points"], &mut all);
    assert!(!all.is_empty());
    for s in all {
        assert!(text.contains(&s), "missing `{s}` in text report");
    }
}
