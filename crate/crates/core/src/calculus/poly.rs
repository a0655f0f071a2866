//! Multivariate polynomials over `Q(σ)` in the chart variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::FieldElement;
use crate::scalar::{MetallicParams, MetallicScalar};

/// Exponent vector → nonzero coefficient. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    params: MetallicParams,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, MetallicScalar>,
}

impl Poly {
    pub fn zero(params: MetallicParams, nvars: usize) -> Self {
        Self {
            params,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(params: MetallicParams, nvars: usize, c: MetallicScalar) -> Self {
        let mut p = Self::zero(params, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(params: MetallicParams, nvars: usize) -> Self {
        Self::constant(params, nvars, params.one())
    }

    pub fn var(params: MetallicParams, nvars: usize, k: usize) -> Self {
        assert!(k < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(params, nvars);
        p.add_term(e, params.one());
        p
    }

    /// Degree-one polynomial `c₀ + Σ c_k u_k`.
    pub fn affine(params: MetallicParams, c0: MetallicScalar, coeffs: &[MetallicScalar]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::constant(params, nvars, c0);
        for (k, c) in coeffs.iter().enumerate() {
            p = p + Self::var(params, nvars, k).scale(c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: MetallicScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.remove(&exps);
        let total = match entry {
            Some(prev) => prev + c,
            None => c,
        };
        if !total.is_zero() {
            self.terms.insert(exps, total);
        }
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &MetallicScalar)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// The constant value, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<MetallicScalar> {
        match self.terms.len() {
            0 => Some(self.params.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &MetallicScalar) -> Self {
        let mut out = Self::zero(self.params, self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(self.params, self.nvars);
        for _ in 0..exp {
            out = out * self.clone();
        }
        out
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.params, self.nvars);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            out.add_term(e2, c.clone() * self.params.int(i64::from(e[k])));
        }
        out
    }

    pub fn eval<T: FieldElement>(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars, "point has wrong chart dimension");
        let mut total = T::zero(self.params);
        for (e, c) in &self.terms {
            let mut term = T::from_scalar(c.clone());
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = term * x.clone();
                }
            }
            total = total + term;
        }
        total
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different charts");
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let minus = -self.params.one();
        self.scale(&minus)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials in different charts");
        let mut out = Poly::zero(self.params, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl Poly {
    /// Renders with variable names `names`; monomials in descending order.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| match k {
                    1 => names[i].clone(),
                    _ => format!("{}^{}", names[i], k),
                })
                .collect();
            let coef = c.to_string();
            let term = if mono.is_empty() {
                coef
            } else if c.is_one() {
                mono.join("*")
            } else {
                format!("({})*{}", coef, mono.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|k| format!("u{k}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

/// A vector of polynomials, one per ambient coordinate (or chart coefficient).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVec {
    pub components: Vec<Poly>,
}

impl PolyVec {
    pub fn new(components: Vec<Poly>) -> Self {
        Self { components }
    }

    pub fn zero(params: MetallicParams, nvars: usize, len: usize) -> Self {
        Self::new(vec![Poly::zero(params, nvars); len])
    }

    pub fn constant(params: MetallicParams, nvars: usize, v: &[MetallicScalar]) -> Self {
        Self::new(
            v.iter()
                .map(|c| Poly::constant(params, nvars, c.clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn derivative(&self, k: usize) -> Self {
        Self::new(self.components.iter().map(|p| p.derivative(k)).collect())
    }

    pub fn eval<T: FieldElement>(&self, point: &[T]) -> Vec<T> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        Self::new(
            self.components
                .iter()
                .map(|a| a.clone() * f.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }
}
