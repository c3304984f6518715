use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;
use crate::error::{Error, Result};

/// An element `a + b·√−D` of the imaginary quadratic field `ℚ(√−D)`.
///
/// `D` travels with every element. Arithmetic between elements of different
/// fields is a programming error and panics; the checked constructors and
/// parsers reject such input before it reaches arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadFieldElement {
    a: Rational,
    b: Rational,
    d: u64,
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Validates a discriminant parameter.
pub fn check_discriminant(d: i64) -> Result<u64> {
    if d > 0 && is_squarefree(d as u64) {
        Ok(d as u64)
    } else {
        Err(Error::InvalidDiscriminant(d))
    }
}

impl QuadFieldElement {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        check_discriminant(d as i64)?;
        Ok(QuadFieldElement { a, b, d })
    }

    /// Constructor for a `d` already known to be valid.
    pub(crate) fn raw(a: Rational, b: Rational, d: u64) -> Self {
        debug_assert!(is_squarefree(d));
        QuadFieldElement { a, b, d }
    }

    pub fn from_rational(a: Rational, d: u64) -> Self {
        QuadFieldElement::raw(a, Rational::zero(), d)
    }

    /// The generator `√−D`.
    pub fn sqrt_neg_d(d: u64) -> Self {
        QuadFieldElement::raw(Rational::zero(), Rational::one(), d)
    }

    pub fn zero(d: u64) -> Self {
        QuadFieldElement::from_rational(Rational::zero(), d)
    }

    pub fn one(d: u64) -> Self {
        QuadFieldElement::from_rational(Rational::one(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadFieldElement::raw(self.a.clone(), -&self.b, self.d)
    }

    /// `a² + D·b²`, nonnegative and zero only at zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + Rational::from(self.d as i64) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        let ninv = n.recip()?;
        Some(QuadFieldElement::raw(&self.a * &ninv, -(&self.b * &ninv), self.d))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(QuadFieldElement::raw(&self.a + &rhs.a, &self.b + &rhs.b, self.d))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let d = Rational::from(self.d as i64);
        // (a + b s)(c + e s) with s² = −D
        let a = &self.a * &rhs.a - d * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(QuadFieldElement::raw(a, b, self.d))
    }

    fn same_field(&self, rhs: &Self) -> Result<()> {
        if self.d == rhs.d {
            Ok(())
        } else {
            Err(Error::MixedDiscriminant(self.d, rhs.d))
        }
    }

    fn expect_same(&self, rhs: &Self) {
        if let Err(e) = self.same_field(rhs) {
            panic!("{e}");
        }
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√-{}", self.b, self.d)
        } else {
            write!(f, "{} + ({})√-{}", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    #[serde(rename = "D")]
    d: i64,
    a: Rational,
    b: Rational,
}

impl Serialize for QuadFieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QuadRepr {
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d as i64,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadFieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = QuadRepr::deserialize(deserializer)?;
        let d = check_discriminant(r.d).map_err(de::Error::custom)?;
        Ok(QuadFieldElement::raw(r.a, r.b, d))
    }
}

impl Add for QuadFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self + &rhs
    }
}

impl<'a> Add<&'a QuadFieldElement> for QuadFieldElement {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        self.expect_same(rhs);
        QuadFieldElement::raw(self.a + &rhs.a, self.b + &rhs.b, self.d)
    }
}

impl Sub for QuadFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self - &rhs
    }
}

impl<'a> Sub<&'a QuadFieldElement> for QuadFieldElement {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        self.expect_same(rhs);
        QuadFieldElement::raw(self.a - &rhs.a, self.b - &rhs.b, self.d)
    }
}

impl Mul for QuadFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<'a> Mul<&'a QuadFieldElement> for QuadFieldElement {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        self.expect_same(rhs);
        self.checked_mul(rhs).expect("same field")
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for QuadFieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.inv().expect("division by zero in quadratic field");
        self * inv
    }
}

impl Neg for QuadFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        QuadFieldElement::raw(-self.a, -self.b, self.d)
    }
}
