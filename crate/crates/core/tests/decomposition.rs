mod common;

use metallic_lightlike::bundles::{analyze_point, build_decomposition, ScreenChoice, ScreenStrategy, StructureKind};
use metallic_lightlike::cli::{load_manifest, parse_manifest};
use metallic_lightlike::linalg::{Subspace, Vector};
use metallic_lightlike::scalar::MetallicScalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Σ ηᵢ uᵢ vᵢ, written out independently of the library metric.
fn dot(signature: &[i8], u: &[MetallicScalar], v: &[MetallicScalar]) -> MetallicScalar {
    let params = u[0].params();
    signature
        .iter()
        .zip(u.iter().zip(v))
        .fold(params.zero(), |acc, (&s, (a, b))| acc + params.int(s as i64) * a.clone() * b.clone())
}

#[test]
fn transversal_relations_on_random_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..120 {
        let lf = common::random_lightlike_frame(&mut rng);
        let sig = lf.space.metric().signature().entries().to_vec();
        let d = build_decomposition(&lf.space, &lf.frame, &ScreenStrategy::Default)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert_eq!(d.r(), lf.r, "case {case}");
        let (xi, nn) = (d.xi(), d.transversal_basis());
        for i in 0..lf.r {
            assert!(dot(&sig, &xi[i], &xi[i]).is_zero(), "case {case}: xi not null");
            for j in 0..lf.r {
                let expect = if i == j { 1 } else { 0 };
                assert_eq!(dot(&sig, &xi[i], &nn[j]), d.params().int(expect), "case {case}");
                assert!(dot(&sig, &nn[i], &nn[j]).is_zero(), "case {case}");
            }
            for s in d.screen().basis() {
                assert!(dot(&sig, &nn[i], s).is_zero(), "case {case}: N not orthogonal to screen");
            }
            for w in d.coscreen().basis() {
                assert!(dot(&sig, &nn[i], w).is_zero(), "case {case}: N not orthogonal to co-screen");
            }
        }
        assert!(d.relations(lf.space.metric()).all_hold(), "case {case}");
    }
}

#[test]
fn example1_decomposition_is_exact() {
    let m = load_manifest(&common::fixture("example1.json")).unwrap();
    let inst = &m.instance;
    let params = inst.params();
    assert_eq!(inst.ambient().metric().signature().entries(), &[-1, 1, 1, 1, 1]);
    let v = |xs: &[(i64, i64)]| -> Vector<MetallicScalar> { xs.iter().map(|&(a, b)| params.ratio(a, b)).collect() };
    for pt in inst.sample_points() {
        let a = analyze_point(inst.ambient(), &inst.frame_at(pt), None).unwrap();
        assert_eq!(a.kind, StructureKind::Invariant);
        let d = &a.decomposition;
        let z3 = v(&[(1, 1), (3, 5), (4, 5), (0, 1), (0, 1)]);
        assert!(d.radical().same_span(&Subspace::span(params, 5, &[z3])));
        let n = &d.transversal_basis()[0];
        let sig = [-1, 1, 1, 1, 1];
        assert_eq!(dot(&sig, &d.xi()[0], n), params.one());
        assert!(dot(&sig, n, n).is_zero());
        assert!(d.screen().basis().iter().all(|s| dot(&sig, n, s).is_zero()));
        assert!(a.invariance.screen_invariant && a.invariance.radical_invariant);
        assert!(a.invariance.ltr_invariant && a.invariance.coscreen_invariant);
        assert_eq!(d.coscreen().dim(), 1);
    }
}

#[test]
fn example2_radical_and_screen_split() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let inst = &m.instance;
    let params = inst.params();
    let s = params.sigma();
    let xi = vec![params.one(), -s.clone(), s.clone(), params.zero(), params.one()];
    let jn_dir = vec![-s.clone(), params.one(), params.one(), params.zero(), s.clone()];
    for pt in inst.sample_points() {
        let frame = inst.frame_at(pt);
        for hint in [true, false] {
            let hv: Option<Vec<Vector<MetallicScalar>>> = hint.then(|| {
                m.resolve_hint(m.hint.as_ref().unwrap())
                    .unwrap()
                    .iter()
                    .map(|f| inst.push_forward(f).eval(pt))
                    .collect()
            });
            let a = analyze_point(inst.ambient(), &frame, hv.as_deref()).unwrap();
            let d = &a.decomposition;
            assert_eq!(d.class().label(), "co-isotropic");
            assert_eq!(d.choice(), if hint { ScreenChoice::Hint } else { ScreenChoice::Repaired });
            assert!(d.radical().same_span(&Subspace::span(params, 5, &[xi.clone()])));
            assert_eq!(a.kind, StructureKind::ScreenSemiInvariant);
            assert_eq!(a.semi_invariance.dims, Some([1, 1, 1]));
            assert_eq!(a.semi_invariance.l0_invariant, Some(true));
            assert!(a.semi_invariance.coscreen_invariant);
            let jn = inst.ambient().j(&d.transversal_basis()[0]);
            assert!(Subspace::span(params, 5, &[jn_dir.clone()]).contains_vector(&jn));
        }
    }
}

#[test]
fn printed_example2_radical_vector_is_not_radical() {
    let m = load_manifest(&common::fixture("example2.json")).unwrap();
    let inst = &m.instance;
    let params = inst.params();
    let s = params.sigma();
    let space = inst.ambient();
    // σU₁ + U₂ − U₃ is null but pairs nontrivially with U₂
    let combo = vec![s.clone(), params.one(), -params.one(), params.zero(), s.clone()];
    let u2 = vec![params.zero(), params.one(), params.zero(), params.zero(), s.clone()];
    assert!(space.inner(&combo, &combo).is_zero());
    assert_eq!(space.inner(&combo, &u2), params.one() + s.clone() * s.clone());
    // the printed coordinate form is not tangent at all
    let coords = vec![s.clone(), params.one(), -params.one(), params.zero(), -s];
    let frame = inst.frame_at(&inst.sample_points()[0]);
    assert!(!Subspace::span(params, 5, &frame).contains_vector(&coords));
}

#[test]
fn nondegenerate_instance_is_not_lightlike() {
    let src = br#"{
        "metallic": {"p": 1, "q": 1},
        "ambient": {"dim": 3, "signature": [-1, 1, 1]},
        "structure": {"J": ["sigma", "sigma", "sigma"]},
        "submanifold": {"chart_dim": 2, "components": ["u1", "u2", "0"]},
        "sample_points": [["0", "0"]]
    }"#;
    let m = parse_manifest(src).unwrap();
    let inst = &m.instance;
    let err = analyze_point(inst.ambient(), &inst.frame_at(&inst.sample_points()[0]), None).unwrap_err();
    assert_eq!(err, metallic_lightlike::bundles::BundleError::NotLightlike);
}
