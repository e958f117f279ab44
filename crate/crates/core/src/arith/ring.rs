use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use super::Rational;

/// A commutative ring containing the rationals (a Q-algebra).
///
/// Implemented by [`Rational`] and by [`super::MultiPoly`], which lets the
/// univariate and series code run unchanged over a parameter ring `Q[a2, ...]`.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(c: Rational) -> Self;

    /// Exact quotient `self / d` if it exists in the ring.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    /// Inverse of a unit, `None` otherwise.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn scale(&self, c: &Rational) -> Self {
        self.clone() * Self::from_rational(c.clone())
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Text used when this element appears as a coefficient of a larger polynomial.
    fn coeff_text(&self) -> String {
        self.to_string()
    }
}

/// Rings in which every nonzero element is a unit.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.unit_inverse().expect("inverse of zero")
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn one() -> Self {
        Rational::one()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn from_rational(c: Rational) -> Self {
        c
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            None
        } else {
            Some(self / d)
        }
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }

    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }

    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Field for Rational {}
