//! The generic number type every system function is written against.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::DomainError;
use crate::interval::Interval;

/// Distance from 1 below which `sqrt(a^2 - 1)` refuses to be differentiated.
pub const RADICAL_MARGIN: f64 = 1e-9;

/// Arithmetic shared by plain floats, intervals, dual numbers and jets.
///
/// Fallible operations return [`DomainError`] instead of producing NaN or
/// an unbounded enclosure.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for types that carry derivative information.
    const DIFFERENTIATING: bool;

    /// A constant. Floating types take the midpoint.
    fn from_interval(c: Interval) -> Self;

    fn from_f64(x: f64) -> Self {
        Self::from_interval(Interval::point(x))
    }

    fn try_div(self, rhs: Self) -> Result<Self, DomainError>;

    fn try_sqrt(self) -> Result<Self, DomainError>;

    fn powi(self, n: u32) -> Self;

    /// Enclosure of the underlying value, ignoring derivative parts.
    fn value_enclosure(&self) -> Interval;

    fn sqr(self) -> Self {
        self * self
    }

    fn recip(self) -> Result<Self, DomainError> {
        Self::from_f64(1.0).try_div(self)
    }

    fn scale(self, c: f64) -> Self {
        self * Self::from_f64(c)
    }
}

/// `sqrt(a^2 - 1)`, the height of a kite vertex above the base.
///
/// Differentiating types require `a >= 1 + RADICAL_MARGIN` on the whole
/// enclosure since the derivative is unbounded at `a = 1`.
pub fn radical<S: Scalar>(a: S) -> Result<S, DomainError> {
    if S::DIFFERENTIATING && a.value_enclosure().lo() < 1.0 + RADICAL_MARGIN {
        return Err(DomainError::RadicalEndpoint);
    }
    (a.sqr() - S::from_f64(1.0)).try_sqrt()
}

impl Scalar for f64 {
    const DIFFERENTIATING: bool = false;

    fn from_interval(c: Interval) -> Self {
        c.mid()
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn try_div(self, rhs: Self) -> Result<Self, DomainError> {
        if rhs == 0.0 {
            return Err(DomainError::DivisionByZero);
        }
        let q = self / rhs;
        if q.is_finite() {
            Ok(q)
        } else {
            Err(DomainError::NonFinite)
        }
    }

    fn try_sqrt(self) -> Result<Self, DomainError> {
        if self < 0.0 {
            Err(DomainError::NegativeSqrt)
        } else {
            Ok(self.sqrt())
        }
    }

    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }

    fn value_enclosure(&self) -> Interval {
        Interval::try_new(*self, *self).unwrap_or(Interval::new(f64::NEG_INFINITY, f64::INFINITY))
    }
}

impl Scalar for Interval {
    const DIFFERENTIATING: bool = false;

    fn from_interval(c: Interval) -> Self {
        c
    }

    fn try_div(self, rhs: Self) -> Result<Self, DomainError> {
        self.checked_div(&rhs)
    }

    fn try_sqrt(self) -> Result<Self, DomainError> {
        self.sqrt()
    }

    fn powi(self, n: u32) -> Self {
        Interval::powi(&self, n)
    }

    fn value_enclosure(&self) -> Interval {
        *self
    }

    fn sqr(self) -> Self {
        Interval::powi(&self, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_guards_derivatives_only() {
        assert_eq!(radical(Interval::new(1.0, 1.1)).unwrap().lo(), 0.0);
        assert_eq!(radical(1.0f64).unwrap(), 0.0);
        let d = crate::autodiff::Dual::<Interval, 1>::variable(Interval::new(1.0, 1.1), 0);
        assert_eq!(radical(d).unwrap_err(), DomainError::RadicalEndpoint);
    }

    #[test]
    fn float_division_by_zero_is_an_error() {
        assert_eq!(1.0f64.try_div(0.0), Err(DomainError::DivisionByZero));
        assert_eq!((-1.0f64).try_sqrt(), Err(DomainError::NegativeSqrt));
    }
}
