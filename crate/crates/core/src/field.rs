//! The element trait shared by exact scalars and first-order jets.
//!
//! Linear algebra and bundle construction are written once over
//! [`FieldElement`]. Running them on [`Jet`] values yields the construction
//! together with its exact directional derivative; pivot and rank decisions
//! always look at the value part only, so the jet run reproduces the choices
//! made by the plain run.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{MetallicParams, MetallicScalar};

pub trait FieldElement:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn params(&self) -> MetallicParams;
    fn zero(params: MetallicParams) -> Self;
    fn from_scalar(s: MetallicScalar) -> Self;
    fn value(&self) -> &MetallicScalar;
    /// Exact zero test (all parts).
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; defined whenever the value part is nonzero.
    fn try_inv(&self) -> Option<Self>;

    fn one(params: MetallicParams) -> Self {
        Self::from_scalar(params.one())
    }

    /// Usable as an elimination pivot.
    fn is_unit(&self) -> bool {
        !self.value().is_zero()
    }
}

impl FieldElement for MetallicScalar {
    fn params(&self) -> MetallicParams {
        MetallicScalar::params(self)
    }
    fn zero(params: MetallicParams) -> Self {
        params.zero()
    }
    fn from_scalar(s: MetallicScalar) -> Self {
        s
    }
    fn value(&self) -> &MetallicScalar {
        self
    }
    fn is_zero(&self) -> bool {
        MetallicScalar::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// `value + deriv·ε` with `ε² = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct Jet {
    pub value: MetallicScalar,
    pub deriv: MetallicScalar,
}

impl Jet {
    pub fn new(value: MetallicScalar, deriv: MetallicScalar) -> Self {
        Self { value, deriv }
    }

    pub fn constant(value: MetallicScalar) -> Self {
        let deriv = value.params().zero();
        Self { value, deriv }
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})ε", self.value, self.deriv)
    }
}

impl Add for Jet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl Sub for Jet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl Mul for Jet {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let deriv = self.value.clone() * rhs.deriv + self.deriv * rhs.value.clone();
        Jet::new(self.value * rhs.value, deriv)
    }
}

impl Neg for Jet {
    type Output = Self;
    fn neg(self) -> Self {
        Jet::new(-self.value, -self.deriv)
    }
}

impl FieldElement for Jet {
    fn params(&self) -> MetallicParams {
        self.value.params()
    }
    fn zero(params: MetallicParams) -> Self {
        Jet::constant(params.zero())
    }
    fn from_scalar(s: MetallicScalar) -> Self {
        Jet::constant(s)
    }
    fn value(&self) -> &MetallicScalar {
        &self.value
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        let inv = self.value.inv().ok()?;
        // (v + dε)⁻¹ = v⁻¹ − d·v⁻²·ε
        let deriv = -(self.deriv.clone() * inv.clone() * inv.clone());
        Some(Jet::new(inv, deriv))
    }
}
