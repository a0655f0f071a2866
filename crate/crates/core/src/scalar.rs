//! Exact arithmetic in the quadratic field `Q(σ)`, where `σ` is the positive
//! root of `x² − p·x − q`.
//!
//! Every value is a pair of arbitrary-precision rationals `(a, b)` standing
//! for `a + b·σ`. Multiplication reduces with `σ² = p·σ + q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("metallic parameters must be positive integers (got p={p}, q={q})")]
    NonPositive { p: i64, q: i64 },
    #[error("discriminant p²+4q = {disc} is a perfect square; Q(σ) would not be a field")]
    SquareDiscriminant { disc: i64 },
    #[error("division by zero")]
    DivisionByZero,
}

/// The pair `(p, q)` fixing the metallic number `σ = (p + √(p²+4q)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetallicParams {
    p: i64,
    q: i64,
    disc: i64,
}

impl MetallicParams {
    pub fn new(p: i64, q: i64) -> Result<Self, ScalarError> {
        if p <= 0 || q <= 0 {
            return Err(ScalarError::NonPositive { p, q });
        }
        let disc = p
            .checked_mul(p)
            .and_then(|pp| q.checked_mul(4).and_then(|q4| pp.checked_add(q4)))
            .ok_or(ScalarError::NonPositive { p, q })?;
        let root = disc.sqrt();
        if root * root == disc {
            return Err(ScalarError::SquareDiscriminant { disc });
        }
        Ok(Self { p, q, disc })
    }

    /// The golden case `p = q = 1`.
    pub fn golden() -> Self {
        Self::new(1, 1).expect("golden parameters are valid")
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn zero(&self) -> MetallicScalar {
        MetallicScalar::from_parts(*self, BigRational::zero(), BigRational::zero())
    }

    pub fn one(&self) -> MetallicScalar {
        self.int(1)
    }

    pub fn sigma(&self) -> MetallicScalar {
        MetallicScalar::from_parts(*self, BigRational::zero(), BigRational::one())
    }

    /// The conjugate root `p − σ`.
    pub fn sigma_conj(&self) -> MetallicScalar {
        self.int(self.p) - self.sigma()
    }

    pub fn int(&self, n: i64) -> MetallicScalar {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(&self, num: i64, den: i64) -> MetallicScalar {
        self.rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(&self, r: BigRational) -> MetallicScalar {
        MetallicScalar::from_parts(*self, r, BigRational::zero())
    }
}

/// An element `a + b·σ` of `Q(σ)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MetallicScalar {
    params: MetallicParams,
    a: BigRational,
    b: BigRational,
}

impl MetallicScalar {
    pub fn from_parts(params: MetallicParams, a: BigRational, b: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        Self { params, a, b }
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `σ`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.params, other.params,
            "mixing scalars from different metallic fields"
        );
    }

    /// The field automorphism `σ ↦ p − σ`.
    pub fn conjugate(&self) -> Self {
        let p = BigRational::from_integer(BigInt::from(self.params.p));
        Self::from_parts(self.params, &self.a + &self.b * p, -self.b.clone())
    }

    /// Field norm `x · conj(x)`, always rational.
    pub fn norm(&self) -> BigRational {
        let prod = self.clone() * self.conjugate();
        debug_assert!(prod.b.is_zero());
        prod.a
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // x⁻¹ = conj(x) / N(x); N(x) ≠ 0 because the discriminant is not a square.
        let n = self.norm();
        let c = self.conjugate();
        Ok(Self::from_parts(self.params, c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other);
        Ok(self.clone() * other.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::from_parts(self.params, &self.a * r, &self.b * r)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = self.params.one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Sign of the real number `a + b·σ`, decided with rational arithmetic only.
    pub fn sign(&self) -> i8 {
        // a + bσ = c + e·√disc with c = a + b·p/2 and e = b/2.
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let p = BigRational::from_integer(BigInt::from(self.params.p));
        let c = &self.a + &self.b * &p * &half;
        let e = &self.b * &half;
        let sc = signum(&c);
        let se = signum(&e);
        if se == 0 {
            return sc;
        }
        if sc == 0 || sc == se {
            return se;
        }
        let disc = BigRational::from_integer(BigInt::from(self.params.disc));
        match (&c * &c).cmp(&(&e * &e * disc)) {
            Ordering::Greater => sc,
            Ordering::Less => se,
            Ordering::Equal => unreachable!("√disc is irrational"),
        }
    }

    /// Decimal expansion truncated (toward zero) to `digits` places.
    pub fn to_real_approx(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let s = self.sign();
        let abs = if s < 0 { -self.clone() } else { self.clone() };
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = abs.scale(&BigRational::from_integer(scale.clone()));
        let n = floor_nonneg(&scaled);
        let int_part = &n / &scale;
        let frac_part = &n % &scale;
        let frac = format!("{:0>width$}", frac_part.to_string(), width = digits);
        let sign = if s < 0 && !n.is_zero() { "-" } else { "" };
        format!("{sign}{int_part}.{frac}")
    }

    /// Double-precision approximation; only for diagnostics and test oracles.
    pub fn to_f64(&self) -> f64 {
        let sigma = (self.params.p as f64 + (self.params.disc as f64).sqrt()) / 2.0;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * sigma
    }
}

fn signum(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `floor(x)` for `x ≥ 0`, by bisection on exact sign tests.
fn floor_nonneg(x: &MetallicScalar) -> BigInt {
    let params = x.params;
    let sigma_bound = BigInt::from(params.p + params.disc.sqrt() + 2);
    let bound = (x.a.abs().ceil().to_integer() + x.b.abs().ceil().to_integer() * sigma_bound)
        + BigInt::one();
    let mut lo = BigInt::zero();
    let mut hi = bound;
    // invariant: lo ≤ x < hi
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        let diff = x.clone() - params.rational(BigRational::from_integer(mid.clone()));
        if diff.sign() >= 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl Add for MetallicScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self::from_parts(self.params, self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for MetallicScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        Self::from_parts(self.params, self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for MetallicScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        if self.b.is_zero() {
            return Self::from_parts(self.params, &self.a * &rhs.a, &self.a * &rhs.b);
        }
        if rhs.b.is_zero() {
            return Self::from_parts(self.params, &self.a * &rhs.a, &self.b * &rhs.a);
        }
        // (a + bσ)(c + dσ) = (ac + bdq) + (ad + bc + bdp)σ
        let p = BigRational::from_integer(BigInt::from(self.params.p));
        let q = BigRational::from_integer(BigInt::from(self.params.q));
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a + &bd * q;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + bd * p;
        Self::from_parts(self.params, a, b)
    }
}

impl Neg for MetallicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_parts(self.params, -self.a, -self.b)
    }
}

impl fmt::Display for MetallicScalar {
    /// Literal form accepted by the expression parser, e.g. `3/5 + 2*sigma`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sigma_term(b: &BigRational) -> String {
            if b.is_one() {
                "sigma".to_string()
            } else {
                format!("{b}*sigma")
            }
        }
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => {
                if (-self.b.clone()).is_one() {
                    write!(f, "-sigma")
                } else {
                    write!(f, "{}", sigma_term(&self.b))
                }
            }
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}", self.a, sigma_term(&-self.b.clone()))
                } else {
                    write!(f, "{} + {}", self.a, sigma_term(&self.b))
                }
            }
        }
    }
}

impl fmt::Debug for MetallicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> MetallicParams {
        MetallicParams::golden()
    }

    #[test]
    fn params_validation() {
        assert_eq!(MetallicParams::new(1, 1).unwrap().disc(), 5);
        assert_eq!(MetallicParams::new(2, 1).unwrap().disc(), 8);
        assert_eq!(
            MetallicParams::new(3, 10),
            Err(ScalarError::SquareDiscriminant { disc: 49 })
        );
        assert!(matches!(
            MetallicParams::new(0, 1),
            Err(ScalarError::NonPositive { .. })
        ));
        assert!(matches!(
            MetallicParams::new(1, -2),
            Err(ScalarError::NonPositive { .. })
        ));
    }

    #[test]
    fn sigma_squared_is_one_plus_sigma() {
        let f = golden();
        assert_eq!(f.sigma() * f.sigma(), f.one() + f.sigma());
    }

    #[test]
    fn inverse_of_golden_sigma() {
        let f = golden();
        let inv = f.sigma().inv().unwrap();
        assert_eq!(inv, f.sigma() - f.one());
        // oracle: multiply back
        assert!((inv * f.sigma()).is_one());
        assert_eq!(f.zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        for (p, q) in [(1, 1), (2, 1), (3, 2)] {
            let f = MetallicParams::new(p, q).unwrap();
            assert_eq!(f.sigma().conjugate(), f.sigma_conj());
            assert_eq!(f.sigma() * f.sigma().conjugate(), f.int(-q));
            let x = f.ratio(3, 7) + f.ratio(-2, 5) * f.sigma();
            assert_eq!(x.conjugate().conjugate(), x);
        }
    }

    #[test]
    fn signs() {
        let f = golden();
        assert_eq!(f.zero().sign(), 0);
        assert_eq!((f.one() - f.sigma()).sign(), -1);
        assert_eq!((f.int(2) - f.sigma()).sign(), 1);
        assert_eq!(f.sigma_conj().sign(), -1);
        // 2σ − p = √disc > 0
        assert_eq!((f.int(2) * f.sigma() - f.int(1)).sign(), 1);
    }

    #[test]
    fn decimal_expansions() {
        let f = golden();
        assert_eq!(f.sigma().to_real_approx(6), "1.618033");
        assert_eq!(f.zero().to_real_approx(6), "0.000000");
        let silver = MetallicParams::new(2, 1).unwrap();
        assert_eq!(silver.sigma().to_real_approx(6), "2.414213");
        assert_eq!(f.sigma_conj().to_real_approx(4), "-0.6180");
        assert_eq!(f.ratio(1, 3).to_real_approx(3), "0.333");
    }

    #[test]
    fn display_forms() {
        let f = golden();
        assert_eq!((f.ratio(3, 5) + f.int(2) * f.sigma()).to_string(), "3/5 + 2*sigma");
        assert_eq!(f.sigma().to_string(), "sigma");
        assert_eq!((-f.sigma()).to_string(), "-sigma");
        assert_eq!((f.int(-1) + f.sigma()).to_string(), "-1 + sigma");
        assert_eq!((f.one() - f.ratio(1, 2) * f.sigma()).to_string(), "1 - 1/2*sigma");
        assert_eq!(f.zero().to_string(), "0");
    }
}
