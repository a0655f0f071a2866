mod common;

use metallic_lightlike::bundles::StructureKind;
use metallic_lightlike::calculus::{gauss_weingarten, identity_suite, tangent_samples, Evaluator, FieldExpr, Poly, ScreenMode};
use metallic_lightlike::cli::{load_manifest, Manifest};
use metallic_lightlike::verifier::{integrable_at, CheckId, Verdict, Verifier};

const FIXTURES: [&str; 4] = ["example1.json", "example2.json", "cone.json", "totally_lightlike.json"];

fn setup(name: &str) -> (Manifest, StructureKind, ScreenMode) {
    let m = load_manifest(&common::fixture(name)).unwrap();
    let kind = match name {
        "example2.json" => StructureKind::ScreenSemiInvariant,
        _ => StructureKind::Invariant,
    };
    let mode = match &m.hint {
        Some(h) => ScreenMode::Hint(m.resolve_hint(h).unwrap()),
        None => ScreenMode::Default,
    };
    (m, kind, mode)
}

#[test]
fn every_applicable_theorem_is_consistent() {
    for name in FIXTURES {
        let (m, kind, mode) = setup(name);
        let ev = Evaluator::new(&m.instance, mode).unwrap();
        let v = Verifier::new(&ev, kind);
        for id in CheckId::applicable(kind) {
            let r = v.run(id).unwrap();
            assert_eq!(r.verdict, Verdict::Consistent, "{name} {}: {:?}", id.as_str(), r.rows);
            if id.is_theorem() {
                assert_eq!(r.rows.len(), m.instance.sample_points().len());
            } else {
                assert!(!r.equations.is_empty());
            }
        }
    }
}

#[test]
fn repaired_screen_is_consistent_too() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let ev = Evaluator::new(&m.instance, ScreenMode::Repair).unwrap();
    let v = Verifier::new(&ev, StructureKind::ScreenSemiInvariant);
    for id in CheckId::applicable(StructureKind::ScreenSemiInvariant) {
        assert_eq!(v.run(id).unwrap().verdict, Verdict::Consistent, "{}", id.as_str());
    }
}

#[test]
fn inapplicable_ids_are_not_applicable() {
    let (m, kind, mode) = setup("example1.json");
    let ev = Evaluator::new(&m.instance, mode).unwrap();
    let r = Verifier::new(&ev, kind).run(CheckId::SemiMetricConnection).unwrap();
    assert_eq!(r.verdict, Verdict::NotApplicable);
}

#[test]
fn identity_suite_holds_everywhere() {
    for name in FIXTURES {
        let (m, _, mode) = setup(name);
        let ev = Evaluator::new(&m.instance, mode).unwrap();
        let fields = tangent_samples(&ev, 3, 7, false);
        let rows = identity_suite(&ev, &fields).unwrap();
        assert!(!rows.is_empty());
        let labels: std::collections::BTreeSet<_> = rows.iter().map(|r| r.label).collect();
        assert!(labels.contains("screen-metric-compatibility"), "{name}: {labels:?}");
        for r in &rows {
            assert!(r.holds, "{name}: {} at {} [{}]: {} vs {}", r.label, r.point, r.fields, r.lhs, r.rhs);
        }
    }
}

#[test]
fn cone_has_nonzero_lightlike_second_form() {
    let (m, _, mode) = setup("cone.json");
    let ev = Evaluator::new(&m.instance, mode).unwrap();
    let params = m.instance.params();
    let dt = FieldExpr::Chart(m.instance.coordinate_field(1));
    let data = gauss_weingarten(&ev, 0, &dt, &dt).unwrap();
    assert!(data.reassembles());
    let v = |xs: &[i64]| xs.iter().map(|&x| params.int(x)).collect::<Vec<_>>();
    assert_eq!(data.ambient, v(&[2, 2, 0]));
    // ğ(h^l, Z₁) = ğ(∇̄_∂t ∂t, Z₁) does not depend on the normalization of ξ
    let z1 = v(&[5, 3, 4]);
    assert_eq!(m.instance.ambient().inner(&data.h_l, &z1), params.int(-4));
}

#[test]
fn polynomial_fields_break_the_ltr_identity_on_example2() {
    let (m, kind, mode) = setup("example2.json");
    let ev = Evaluator::new(&m.instance, mode).unwrap();
    let r = Verifier::new(&ev, kind)
        .with_constant_samples(false)
        .run(CheckId::SemiInvariantProposition)
        .unwrap();
    assert_eq!(r.verdict, Verdict::Inconsistent);
    assert!(r.equations.iter().any(|e| e.label == "h^l(U,JV) = 0" && !e.holds));
    // constant-coefficient fields satisfy it
    let r = Verifier::new(&ev, kind).run(CheckId::SemiInvariantProposition).unwrap();
    assert_eq!(r.verdict, Verdict::Consistent);
}

#[test]
fn bracket_integrability() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let inst = &m.instance;
    let params = inst.params();
    let (d1, d2, d3) = (inst.coordinate_field(0), inst.coordinate_field(1), inst.coordinate_field(2));
    assert!(integrable_at(inst, &[d1.clone(), d2.clone()]).iter().all(|&b| b));
    // ∂₁ + u₂∂₃ and ∂₂ bracket to −∂₃: the contact distribution
    let mut x = d1.clone();
    x[2] = Poly::var(params, 4, 1);
    let flags = integrable_at(inst, &[x, d2]);
    assert!(flags.iter().all(|&b| !b));
    assert!(integrable_at(inst, &[d3]).iter().all(|&b| b));
}
