//! Scalar fields used by maps and bracket tables: exact rationals, the quadratic
//! extensions Q(sqrt d) with d > 0, and a floating fallback.

use crate::rational::{format_rational, sqrt_decompose, to_f64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn approx_f64(&self) -> f64;
    fn magnitude(&self) -> Self;
    fn compare(&self, other: &Self) -> Ordering;
    /// True when the representation is exact.
    fn is_exact() -> bool {
        true
    }
    fn render(&self) -> String;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn approx_f64(&self) -> f64 {
        to_f64(self)
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn render(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> Self {
        self.abs()
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
    fn is_exact() -> bool {
        false
    }
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

/// `a + b*sqrt(d)` with rational `a`, `b` and a fixed positive integer radicand `d`.
///
/// Rational values carry `b = 0` and may have `d = 0`; mixing two irrational values
/// with different radicands is a programming error and panics.
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadraticNumber {
    pub fn rational(a: Rational) -> Self {
        QuadraticNumber { a, b: Rational::zero(), d: BigInt::zero() }
    }

    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        assert!(d.is_positive() || b.is_zero(), "radicand must be positive");
        let mut q = QuadraticNumber { a, b, d };
        q.normalize();
        q
    }

    /// `sqrt(r)` for positive rational `r`, as an element of Q(sqrt d).
    pub fn sqrt_of(r: &Rational) -> crate::error::Result<Self> {
        let (c, d) = sqrt_decompose(r)?;
        Ok(if d.is_one() {
            QuadraticNumber::rational(c)
        } else {
            QuadraticNumber::new(Rational::zero(), c, d)
        })
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            return;
        }
        if self.d.is_one() {
            self.a = &self.a + &self.b;
            self.b = Rational::zero();
        }
    }

    fn radicand(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => {
                if self.d.is_zero() {
                    other.d.clone()
                } else {
                    self.d.clone()
                }
            }
            (false, true) => self.d.clone(),
            (true, false) => other.d.clone(),
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed quadratic radicands");
                self.d.clone()
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    pub fn signum_i(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }
}

fn sgn(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rational(&self.a),
                format_rational(&self.b),
                self.d
            )
        }
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.radicand(&o);
        QuadraticNumber { a: self.a + o.a, b: self.b + o.b, d }
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = self.radicand(&o);
        QuadraticNumber { a: self.a - o.a, b: self.b - o.b, d }
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        QuadraticNumber { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.radicand(&o);
        let dr = Rational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadraticNumber { a, b, d }
    }
}

impl Div for QuadraticNumber {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt d)");
        let c = o.conjugate();
        let num = self * c;
        QuadraticNumber { a: num.a / &n, b: num.b / &n, d: num.d }
    }
}

impl Zero for QuadraticNumber {
    fn zero() -> Self {
        QuadraticNumber::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadraticNumber {
    fn one() -> Self {
        QuadraticNumber::rational(Rational::one())
    }
}

impl Scalar for QuadraticNumber {
    fn from_rational(r: &Rational) -> Self {
        QuadraticNumber::rational(r.clone())
    }
    fn approx_f64(&self) -> f64 {
        let d = num_traits::ToPrimitive::to_f64(&self.d).unwrap_or(0.0);
        to_f64(&self.a) + to_f64(&self.b) * d.sqrt()
    }
    fn magnitude(&self) -> Self {
        if self.signum_i() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn compare(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_i().cmp(&0)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sqrt_two_arithmetic() {
        let s = QuadraticNumber::sqrt_of(&int(2)).unwrap();
        assert_eq!(s.clone() * s.clone(), QuadraticNumber::rational(int(2)));
        let inv = QuadraticNumber::one() / s.clone();
        assert_eq!(inv * s.clone(), QuadraticNumber::one());
        assert_eq!(s.signum_i(), 1);
        let x = QuadraticNumber::rational(rat(3, 2)) - s.clone();
        assert_eq!(x.signum_i(), 1);
        let y = QuadraticNumber::rational(rat(7, 5)) - s;
        assert_eq!(y.signum_i(), -1);
    }

    #[test]
    fn perfect_square_collapses() {
        let s = QuadraticNumber::sqrt_of(&rat(16, 25)).unwrap();
        assert!(s.is_rational());
        assert_eq!(s.a, rat(4, 5));
    }
}
