mod common;

use metallic_lightlike::calculus::Poly;
use metallic_lightlike::field::Jet;
use metallic_lightlike::linalg::{nullspace, rank, Matrix};
use metallic_lightlike::scalar::{MetallicParams, MetallicScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params_strategy() -> impl Strategy<Value = MetallicParams> {
    (0..common::PARAMS.len()).prop_map(|i| {
        let (p, q) = common::PARAMS[i];
        MetallicParams::new(p, q).unwrap()
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar_in(params: MetallicParams) -> impl Strategy<Value = MetallicScalar> {
    (rational(), rational()).prop_map(move |(a, b)| MetallicScalar::from_parts(params, a, b))
}

fn triple() -> impl Strategy<Value = (MetallicScalar, MetallicScalar, MetallicScalar)> {
    params_strategy().prop_flat_map(|p| (scalar_in(p), scalar_in(p), scalar_in(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn field_axioms((x, y, z) in triple()) {
        let params = x.params();
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!(x.clone() + params.zero(), x.clone());
        prop_assert_eq!(x.clone() * params.one(), x.clone());
        prop_assert!((x.clone() - x.clone()).is_zero());
        if !x.is_zero() {
            prop_assert!((x.clone() * x.inv().unwrap()).is_one());
        } else {
            prop_assert!(x.inv().is_err());
        }
    }

    #[test]
    fn multiplication_matches_companion_matrices((x, y, _z) in triple()) {
        let lhs = common::companion(&(x.clone() * y.clone()));
        let rhs = common::mat_mul(&common::companion(&x), &common::companion(&y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((x, y, _z) in triple()) {
        prop_assert_eq!((x.clone() + y.clone()).conjugate(), x.conjugate() + y.conjugate());
        prop_assert_eq!((x.clone() * y.clone()).conjugate(), x.conjugate() * y.conjugate());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        let params = x.params();
        prop_assert_eq!(params.sigma().conjugate(), params.sigma_conj());
    }

    #[test]
    fn norm_is_rational_and_multiplicative((x, y, _z) in triple()) {
        let n = x.clone() * x.conjugate();
        prop_assert!(n.is_rational());
        prop_assert_eq!(n.a(), &x.norm());
        prop_assert_eq!((x.clone() * y.clone()).norm(), x.norm() * y.norm());
    }

    #[test]
    fn sign_agrees_with_floating_evaluation((x, _y, _z) in triple()) {
        let params = x.params();
        let (p, q) = (params.p() as f64, params.q() as f64);
        let sigma = (p + (p * p + 4.0 * q).sqrt()) / 2.0;
        let approx = num_traits::ToPrimitive::to_f64(x.a()).unwrap()
            + num_traits::ToPrimitive::to_f64(x.b()).unwrap() * sigma;
        if approx.abs() > 1e-9 {
            prop_assert_eq!(x.sign() as f64, approx.signum());
        }
        prop_assert_eq!(x.sign() == 0, x.is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = common::params(&mut rng);
        let f = common::random_poly(&mut rng, params, 3);
        let g = common::random_poly(&mut rng, params, 3);
        for k in 0..3 {
            let lhs = (f.clone() * g.clone()).derivative(k);
            let rhs = f.derivative(k) * g.clone() + f.clone() * g.derivative(k);
            prop_assert_eq!(lhs, rhs);
        }
        // jets reproduce directional derivatives
        let point: Vec<MetallicScalar> = (0..3).map(|_| common::scalar(&mut rng, params)).collect();
        let dir: Vec<MetallicScalar> = (0..3).map(|_| common::scalar(&mut rng, params)).collect();
        let jets: Vec<Jet> = point.iter().zip(&dir).map(|(p, d)| Jet::new(p.clone(), d.clone())).collect();
        let h = f.clone() * g.clone();
        let jet = h.eval(&jets);
        let expect = (0..3).fold(params.zero(), |acc, k| acc + dir[k].clone() * h.derivative(k).eval(&point));
        prop_assert_eq!(jet.value, h.eval(&point));
        prop_assert_eq!(jet.deriv, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// `A = B·C` with inner dimension `k` has rank at most `k`; the nullspace
    /// is annihilated exactly and has complementary dimension.
    #[test]
    fn nullspace_and_rank_are_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = common::params(&mut rng);
        use rand::Rng;
        let (rows, cols, k) = (rng.gen_range(1..=6), rng.gen_range(1..=6), rng.gen_range(0..=4));
        let a = if k == 0 {
            Matrix::zeros(params, rows, cols)
        } else {
            common::random_matrix(&mut rng, params, rows, k)
                .mul(&common::random_matrix(&mut rng, params, k, cols))
                .unwrap()
        };
        let r = rank(&a).unwrap();
        prop_assert!(r <= k.min(rows).min(cols));
        prop_assert_eq!(r, rank(&a.transpose()).unwrap());
        let ns = nullspace(&a).unwrap();
        prop_assert_eq!(ns.len(), cols - r);
        for v in &ns {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(MetallicScalar::is_zero));
        }
        let basis = Matrix::from_columns(params, cols, &ns);
        prop_assert_eq!(rank(&basis).unwrap(), ns.len());
    }
}

#[test]
fn poly_product_with_zero_is_zero() {
    let params = MetallicParams::golden();
    let x = Poly::var(params, 2, 0);
    assert!((x * Poly::zero(params, 2)).is_zero());
}
