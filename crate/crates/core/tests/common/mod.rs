#![allow(dead_code)]

use std::path::PathBuf;

use metallic_lightlike::calculus::Poly;
use metallic_lightlike::linalg::{invert, AmbientMetric, Matrix, Signature, Vector};
use metallic_lightlike::scalar::{MetallicParams, MetallicScalar};
use metallic_lightlike::structure::{build_structure, AmbientSpace, DiagTag, StructureSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub const PARAMS: [(i64, i64); 4] = [(1, 1), (2, 1), (3, 1), (1, 3)];

pub fn params(rng: &mut ChaCha8Rng) -> MetallicParams {
    let (p, q) = PARAMS[rng.gen_range(0..PARAMS.len())];
    MetallicParams::new(p, q).unwrap()
}

pub fn rational(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound)))
}

pub fn scalar(rng: &mut ChaCha8Rng, params: MetallicParams) -> MetallicScalar {
    MetallicScalar::from_parts(params, rational(rng, 9), rational(rng, 9))
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng, params: MetallicParams) -> MetallicScalar {
    loop {
        let s = scalar(rng, params);
        if !s.is_zero() {
            return s;
        }
    }
}

/// `a + bσ` as the rational matrix of multiplication on the basis `(1, σ)`.
pub fn companion(x: &MetallicScalar) -> [[BigRational; 2]; 2] {
    let params = x.params();
    let p = BigRational::from_integer(params.p().into());
    let q = BigRational::from_integer(params.q().into());
    let (a, b) = (x.a().clone(), x.b().clone());
    [[a.clone(), q * b.clone()], [b.clone(), a + p * b]]
}

pub fn mat_mul(x: &[[BigRational; 2]; 2], y: &[[BigRational; 2]; 2]) -> [[BigRational; 2]; 2] {
    let e = |i: usize, j: usize| x[i][0].clone() * y[0][j].clone() + x[i][1].clone() * y[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn random_poly(rng: &mut ChaCha8Rng, params: MetallicParams, nvars: usize) -> Poly {
    let mut out = Poly::zero(params, nvars);
    for _ in 0..rng.gen_range(0..=4) {
        let mut term = Poly::constant(params, nvars, scalar(rng, params));
        for k in 0..nvars {
            term = term * Poly::var(params, nvars, k).pow(rng.gen_range(0..=2));
        }
        out = out + term;
    }
    out
}

pub fn random_vector(rng: &mut ChaCha8Rng, params: MetallicParams, n: usize, bound: i64) -> Vector<MetallicScalar> {
    (0..n).map(|_| params.rational(rational(rng, bound))).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, params: MetallicParams, rows: usize, cols: usize) -> Matrix<MetallicScalar> {
    Matrix::from_rows(params, (0..rows).map(|_| random_vector(rng, params, cols, 4)).collect()).unwrap()
}

/// Ambient space with a random diagonal metallic pattern.
pub fn space(rng: &mut ChaCha8Rng, params: MetallicParams, signature: Vec<i8>) -> AmbientSpace {
    let metric = AmbientMetric::new(Signature::new(signature.clone()).unwrap());
    let tags = (0..signature.len())
        .map(|_| if rng.gen_bool(0.5) { DiagTag::Sigma } else { DiagTag::Conj })
        .collect();
    let s = build_structure(params, &StructureSpec::Diagonal(tags), &metric).unwrap();
    AmbientSpace::new(metric, s).unwrap()
}

/// Cayley transform `(I − A)⁻¹(I + A)` of `A = ηK`, `K` antisymmetric: an
/// exact rational isometry of the metric `η`.
pub fn random_isometry(rng: &mut ChaCha8Rng, params: MetallicParams, signature: &[i8]) -> Matrix<MetallicScalar> {
    let n = signature.len();
    loop {
        let mut a = Matrix::zeros(params, n, n);
        for i in 0..n {
            for j in i + 1..n {
                let k = params.rational(rational(rng, 2));
                let eta_i = params.int(signature[i] as i64);
                let eta_j = params.int(signature[j] as i64);
                a.set(i, j, eta_i * k.clone());
                a.set(j, i, -(eta_j * k));
            }
        }
        let id = Matrix::identity(params, n);
        if let Ok(inv) = invert(&id.sub(&a)) {
            return inv.mul(&id.add(&a)).unwrap();
        }
    }
}

/// A random frame with radical rank `r`: null pairs `e_neg + e_pos` for the
/// radical, screen vectors from the orthogonal complement, then a random
/// isometry and a random change of frame.
pub struct LightlikeFrame {
    pub space: AmbientSpace,
    pub frame: Vec<Vector<MetallicScalar>>,
    pub r: usize,
}

pub fn random_signature(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Vec<i8> {
    loop {
        let s: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let neg = s.iter().filter(|&&x| x < 0).count();
        if neg >= r && n - neg >= r {
            return s;
        }
    }
}

pub fn random_lightlike_frame(rng: &mut ChaCha8Rng) -> LightlikeFrame {
    use metallic_lightlike::linalg::{nullspace, value_rank};
    let params = params(rng);
    loop {
        let r = rng.gen_range(1..=2);
        let n = rng.gen_range(2 * r + 1..=7);
        let signature = random_signature(rng, n, r);
        let space = space(rng, params, signature.clone());
        let neg: Vec<usize> = (0..n).filter(|&i| signature[i] < 0).collect();
        let pos: Vec<usize> = (0..n).filter(|&i| signature[i] > 0).collect();
        let mut radical = Vec::new();
        for i in 0..r {
            let mut v = vec![params.zero(); n];
            v[neg[i]] = params.one();
            v[pos[i]] = params.one();
            radical.push(v);
        }
        // screen vectors orthogonal to the radical, supported off its pairs
        let used: Vec<usize> = (0..r).flat_map(|i| [neg[i], pos[i]]).collect();
        let free: Vec<usize> = (0..n).filter(|i| !used.contains(i)).collect();
        let s_dim = rng.gen_range(0..=free.len().min(3));
        let mut frame = radical.clone();
        for _ in 0..s_dim {
            let mut v = vec![params.zero(); n];
            for &i in &free {
                v[i] = params.rational(rational(rng, 3));
            }
            frame.push(v);
        }
        let q = random_isometry(rng, params, &signature);
        let frame: Vec<_> = frame.iter().map(|v| q.mul_vec(v).unwrap()).collect();
        let m = frame.len();
        let mix = random_matrix(rng, params, m, m);
        let frame: Vec<_> = (0..m)
            .map(|i| {
                let mut out = vec![params.zero(); n];
                for (j, v) in frame.iter().enumerate() {
                    for k in 0..n {
                        out[k] = out[k].clone() + mix.get(i, j).clone() * v[k].clone();
                    }
                }
                out
            })
            .collect();
        if value_rank(&frame) != m {
            continue;
        }
        let g = metallic_lightlike::linalg::gram(params, space.metric(), &frame).unwrap();
        let rad = nullspace(&g).unwrap().len();
        if rad == r {
            return LightlikeFrame { space, frame, r };
        }
    }
}
