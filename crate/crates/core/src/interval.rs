//! Closed binary64 intervals with outward rounding.
//!
//! Every operation first computes the round-to-nearest result and then
//! steps the endpoint one ulp outward, but only when an error-free
//! transformation (TwoSum, FMA residual) shows the native result was
//! inexact in the unsafe direction. Results are therefore as tight as
//! directed-rounding hardware would give, without touching the FPU
//! control word.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DomainError;

/// Below this magnitude the FMA residual may itself be rounded, so the
/// helpers fall back to unconditional stepping.
const TINY: f64 = 1e-280;

mod round {
    use super::TINY;

    #[inline]
    fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
        let bb = s - a;
        (a - (s - bb)) + (b - bb)
    }

    #[inline]
    fn lower_nonfinite(x: f64) -> f64 {
        if x.is_nan() || x == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            f64::MAX
        }
    }

    #[inline]
    fn upper_nonfinite(x: f64) -> f64 {
        if x.is_nan() || x == f64::INFINITY {
            f64::INFINITY
        } else {
            f64::MIN
        }
    }

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return lower_nonfinite(s);
        }
        if two_sum_err(a, b, s) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return upper_nonfinite(s);
        }
        if two_sum_err(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_down(a: f64, b: f64) -> f64 {
        add_down(a, -b)
    }

    #[inline]
    pub fn sub_up(a: f64, b: f64) -> f64 {
        add_up(a, -b)
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return if p.is_nan() { 0.0 } else { lower_nonfinite(p) };
        }
        if p.abs() < TINY {
            return p.next_down();
        }
        if a.mul_add(b, -p) < 0.0 {
            p.next_down()
        } else {
            p
        }
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return if p.is_nan() { 0.0 } else { upper_nonfinite(p) };
        }
        if p.abs() < TINY {
            return p.next_up();
        }
        if a.mul_add(b, -p) > 0.0 {
            p.next_up()
        } else {
            p
        }
    }

    /// Sign of `a/b - fl(a/b)`, or `None` when the residual is not exact.
    #[inline]
    fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
        if a == 0.0 {
            return Some(0.0);
        }
        if q.abs() < TINY || a.abs() < TINY || b.abs() > 1.0 / TINY || !b.is_finite() {
            return None;
        }
        let r = (-q).mul_add(b, a);
        Some(r * b.signum())
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        let q = a / b;
        if !q.is_finite() {
            return if q.is_nan() {
                f64::NEG_INFINITY
            } else {
                lower_nonfinite(q)
            };
        }
        match div_residual_sign(a, b, q) {
            Some(s) if s >= 0.0 => q,
            _ => q.next_down(),
        }
    }

    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        let q = a / b;
        if !q.is_finite() {
            return if q.is_nan() {
                f64::INFINITY
            } else {
                upper_nonfinite(q)
            };
        }
        match div_residual_sign(a, b, q) {
            Some(s) if s <= 0.0 => q,
            _ => q.next_up(),
        }
    }

    /// Requires `x >= 0`.
    #[inline]
    pub fn sqrt_down(x: f64) -> f64 {
        let s = x.sqrt();
        if x == 0.0 || x == f64::INFINITY {
            return s;
        }
        if x < TINY {
            return s.next_down().max(0.0);
        }
        if (-s).mul_add(s, x) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    /// Requires `x >= 0`.
    #[inline]
    pub fn sqrt_up(x: f64) -> f64 {
        let s = x.sqrt();
        if x == 0.0 || x == f64::INFINITY {
            return s;
        }
        if x < TINY {
            return s.next_up();
        }
        if (-s).mul_add(s, x) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    /// `x^n` rounded down, for `x >= 0`.
    pub fn pow_down(x: f64, n: u32) -> f64 {
        let mut acc = 1.0;
        for _ in 0..n {
            acc = mul_down(acc, x);
        }
        acc
    }

    /// `x^n` rounded up, for `x >= 0`.
    pub fn pow_up(x: f64, n: u32) -> f64 {
        let mut acc = 1.0;
        for _ in 0..n {
            acc = mul_up(acc, x);
        }
        acc
    }
}

/// A closed interval `[lo, hi]` of binary64 numbers.
///
/// Infinite endpoints only arise as overflow results; they are never
/// accepted by [`Interval::checked_div`] or [`Interval::sqrt`] as
/// meaningful inputs.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`.
    ///
    /// Panics if either bound is NaN or `lo > hi`; use [`Interval::try_new`]
    /// for untrusted input.
    #[track_caller]
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|| panic!("invalid interval [{lo}, {hi}]"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            None
        } else {
            Some(Interval { lo, hi })
        }
    }

    /// The degenerate interval `[x, x]`.
    #[track_caller]
    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// A floating-point number inside the interval, close to its centre.
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        if self.lo == f64::NEG_INFINITY {
            return f64::MIN;
        }
        if self.hi == f64::INFINITY {
            return f64::MAX;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Upper bound on the radius around [`Interval::mid`].
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        round::sub_up(self.hi, m).max(round::sub_up(m, self.lo))
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other ⊆ int(self)`, the strict containment used by the Krawczyk test.
    pub fn interior_encloses(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    /// Every element is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    /// Every element is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at the midpoint; both halves share the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    /// Widens both endpoints outward by `eps` (absolute).
    pub fn inflate(&self, eps: f64) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, eps),
            hi: round::add_up(self.hi, eps),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    /// Non-negative integer power with even-power tightening.
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n % 2 == 1 {
            let lo = if self.lo >= 0.0 {
                round::pow_down(self.lo, n)
            } else {
                -round::pow_up(-self.lo, n)
            };
            let hi = if self.hi >= 0.0 {
                round::pow_up(self.hi, n)
            } else {
                -round::pow_down(-self.hi, n)
            };
            Interval { lo, hi }
        } else if self.lo >= 0.0 {
            Interval {
                lo: round::pow_down(self.lo, n),
                hi: round::pow_up(self.hi, n),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: round::pow_down(-self.hi, n),
                hi: round::pow_up(-self.lo, n),
            }
        } else {
            Interval {
                lo: 0.0,
                hi: round::pow_up(self.mag(), n),
            }
        }
    }

    /// Integer power; negative exponents require `0 ∉ self`.
    pub fn pow_int(&self, n: i32) -> Result<Interval, DomainError> {
        if n >= 0 {
            Ok(self.powi(n as u32))
        } else {
            if self.contains_zero() {
                return Err(DomainError::NegativePowerOfZero);
            }
            Interval::ONE.checked_div(&self.powi(n.unsigned_abs()))
        }
    }

    pub fn checked_div(&self, rhs: &Interval) -> Result<Interval, DomainError> {
        if rhs.contains_zero() {
            return Err(DomainError::DivisionByZero);
        }
        let (a, b) = (self, rhs);
        let corners = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)];
        let lo = corners
            .iter()
            .map(|&(x, y)| round::div_down(x, y))
            .fold(f64::INFINITY, f64::min);
        let hi = corners
            .iter()
            .map(|&(x, y)| round::div_up(x, y))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    pub fn recip(&self) -> Result<Interval, DomainError> {
        Interval::ONE.checked_div(self)
    }

    /// Square root of `self ∩ [0, ∞)`. Negative parts are clamped away as
    /// long as `hi >= 0`.
    pub fn sqrt(&self) -> Result<Interval, DomainError> {
        if self.hi < 0.0 {
            return Err(DomainError::NegativeSqrt);
        }
        let lo = self.lo.max(0.0);
        Ok(Interval {
            lo: round::sqrt_down(lo),
            hi: round::sqrt_up(self.hi),
        })
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        // Sign-case dispatch keeps the common all-positive path at two products.
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval {
                lo: round::mul_down(a.lo, b.lo),
                hi: round::mul_up(a.hi, b.hi),
            };
        }
        let corners = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in corners {
            lo = lo.min(round::mul_down(x, y));
            hi = hi.max(round::mul_up(x, y));
        }
        Interval { lo, hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(deserializer)?;
        Interval::try_new(lo, hi)
            .ok_or_else(|| D::Error::custom(format!("invalid interval [{lo}, {hi}]")))
    }
}

/// Enclosures of the irrational constants used by the kite equations.
pub mod consts {
    use super::Interval;

    pub fn sqrt2() -> Interval {
        Interval::point(2.0).sqrt().expect("positive")
    }

    pub fn sqrt3() -> Interval {
        Interval::point(3.0).sqrt().expect("positive")
    }

    /// `2/√3`, the side ratio of the equilateral kite shape.
    pub fn two_over_sqrt3() -> Interval {
        Interval::point(2.0).checked_div(&sqrt3()).expect("nonzero")
    }

    /// `√2(√3 + 1)`, the upper bound of the admissible `b` range.
    pub fn b_tilde_max() -> Interval {
        sqrt2() * (sqrt3() + Interval::ONE)
    }
}
