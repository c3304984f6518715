use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::Value;

use super::quad::{check_discriminant, QuadFieldElement};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A field usable by the exact linear algebra kernels: `ℚ` or `ℚ(√−D)`.
///
/// Elements of `ℚ(√−D)` need the parameter `D` to build constants, so every
/// scalar type carries a small context value (`()` for `ℚ`, `D` for the
/// quadratic fields).
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type Ctx: Copy + Eq + Hash + Debug + Send + Sync;

    /// Number of integer coordinates in an element of the ring of integers
    /// as a ℤ-module (1 for ℚ, 2 for a quadratic field).
    const INTEGRAL_RANK: usize;

    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation; the identity on ℚ.
    fn conj(&self) -> Self;
    fn from_rational(r: Rational, ctx: Self::Ctx) -> Self;
    /// The value as a rational number, when it is one.
    fn to_rational(&self) -> Option<Rational>;
    /// Builds `parts[0] + parts[1]·√−D` (only `parts[0]` for ℚ).
    fn from_integers(parts: &[i64], ctx: Self::Ctx) -> Self;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value, ctx: Self::Ctx) -> Result<Self>;

    fn from_int(n: i64, ctx: Self::Ctx) -> Self {
        Self::from_rational(Rational::from(n), ctx)
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.ctx())
    }
}

impl Scalar for Rational {
    type Ctx = ();
    const INTEGRAL_RANK: usize = 1;

    fn zero(_: ()) -> Self {
        Rational::zero()
    }
    fn one(_: ()) -> Self {
        Rational::one()
    }
    fn ctx(&self) {}
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(r: Rational, _: ()) -> Self {
        r
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn from_integers(parts: &[i64], _: ()) -> Self {
        Rational::from(parts[0])
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value, _: ()) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            Value::Number(n) => n
                .as_i64()
                .map(Rational::from)
                .ok_or_else(|| Error::Parse(format!("non-integer JSON number {n}"))),
            other => Err(Error::Parse(format!("expected a rational, got {other}"))),
        }
    }
}

impl Scalar for QuadFieldElement {
    type Ctx = u64;
    const INTEGRAL_RANK: usize = 2;

    fn zero(d: u64) -> Self {
        QuadFieldElement::zero(d)
    }
    fn one(d: u64) -> Self {
        QuadFieldElement::one(d)
    }
    fn ctx(&self) -> u64 {
        self.d()
    }
    fn is_zero(&self) -> bool {
        QuadFieldElement::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        QuadFieldElement::inv(self)
    }
    fn conj(&self) -> Self {
        QuadFieldElement::conj(self)
    }
    fn from_rational(r: Rational, d: u64) -> Self {
        QuadFieldElement::from_rational(r, d)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a().clone())
    }
    fn from_integers(parts: &[i64], d: u64) -> Self {
        QuadFieldElement::raw(Rational::from(parts[0]), Rational::from(parts[1]), d)
    }
    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("quadratic field element serializes")
    }
    /// Accepts the object form, or a bare rational which is promoted into
    /// the field.
    fn from_json(v: &Value, d: u64) -> Result<Self> {
        match v {
            Value::Object(_) => {
                let x: QuadFieldElement = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                if x.d() != d {
                    return Err(Error::MixedDiscriminant(d, x.d()));
                }
                Ok(x)
            }
            _ => {
                check_discriminant(d as i64)?;
                Ok(QuadFieldElement::from_rational(Rational::from_json(v, ())?, d))
            }
        }
    }
}
