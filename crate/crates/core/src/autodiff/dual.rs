use std::ops::{Add, Mul, Neg, Sub};

use crate::error::DomainError;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// First-order forward-mode number: a value and `N` partial derivatives.
///
/// The underlying scalar may itself be a `Dual`, which gives second
/// derivatives by nesting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S, const N: usize> {
    pub value: S,
    pub partials: [S; N],
}

impl<S: Scalar, const N: usize> Dual<S, N> {
    pub fn constant(value: S) -> Self {
        Dual {
            value,
            partials: [S::from_f64(0.0); N],
        }
    }

    /// The independent variable number `index`.
    pub fn variable(value: S, index: usize) -> Self {
        let mut d = Self::constant(value);
        d.partials[index] = S::from_f64(1.0);
        d
    }

    /// Seeds a whole argument vector as independent variables.
    pub fn seed(x: &[S; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::variable(x[i], i))
    }

    /// Applies the chain rule for a unary function with value `f` and
    /// derivative `df` at `self.value`.
    fn chain(&self, f: S, df: S) -> Self {
        Dual {
            value: f,
            partials: self.partials.map(|p| df * p),
        }
    }
}

impl<S: Scalar, const N: usize> Add for Dual<S, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            value: self.value + rhs.value,
            partials: std::array::from_fn(|i| self.partials[i] + rhs.partials[i]),
        }
    }
}

impl<S: Scalar, const N: usize> Sub for Dual<S, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            value: self.value - rhs.value,
            partials: std::array::from_fn(|i| self.partials[i] - rhs.partials[i]),
        }
    }
}

impl<S: Scalar, const N: usize> Neg for Dual<S, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            value: -self.value,
            partials: self.partials.map(|p| -p),
        }
    }
}

impl<S: Scalar, const N: usize> Mul for Dual<S, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual {
            value: self.value * rhs.value,
            partials: std::array::from_fn(|i| {
                self.partials[i] * rhs.value + self.value * rhs.partials[i]
            }),
        }
    }
}

impl<S: Scalar, const N: usize> Scalar for Dual<S, N> {
    const DIFFERENTIATING: bool = true;

    fn from_interval(c: Interval) -> Self {
        Self::constant(S::from_interval(c))
    }

    fn try_div(self, rhs: Self) -> Result<Self, DomainError> {
        let q = self.value.try_div(rhs.value)?;
        let mut partials = [S::from_f64(0.0); N];
        for (i, p) in partials.iter_mut().enumerate() {
            *p = (self.partials[i] - q * rhs.partials[i]).try_div(rhs.value)?;
        }
        Ok(Dual { value: q, partials })
    }

    fn try_sqrt(self) -> Result<Self, DomainError> {
        let r = self.value.try_sqrt()?;
        if r.value_enclosure().contains_zero() {
            return Err(DomainError::DivisionByZero);
        }
        let twice = r + r;
        let mut partials = [S::from_f64(0.0); N];
        for (i, p) in partials.iter_mut().enumerate() {
            *p = self.partials[i].try_div(twice)?;
        }
        Ok(Dual { value: r, partials })
    }

    fn powi(self, n: u32) -> Self {
        match n {
            0 => Self::from_f64(1.0),
            1 => self,
            _ => {
                let lower = self.value.powi(n - 1);
                let df = lower * S::from_f64(n as f64);
                self.chain(lower * self.value, df)
            }
        }
    }

    fn value_enclosure(&self) -> Interval {
        self.value.value_enclosure()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let [x, y] = Dual::<f64, 2>::seed(&[3.0, 2.0]);
        let f = x * y * y;
        assert_eq!(f.value, 12.0);
        assert_eq!(f.partials, [4.0, 12.0]);
        let g = x.try_div(y).unwrap();
        assert_eq!(g.partials, [0.5, -0.75]);
    }

    #[test]
    fn nested_duals_give_second_derivatives() {
        type D2 = Dual<Dual<f64, 1>, 1>;
        let inner = Dual::<f64, 1>::variable(2.0, 0);
        let x = D2::variable(inner, 0);
        let f = x.powi(3);
        assert_eq!(f.value.value, 8.0);
        assert_eq!(f.partials[0].value, 12.0);
        assert_eq!(f.partials[0].partials[0], 12.0);
    }

    #[test]
    fn sqrt_at_zero_has_no_derivative() {
        let x = Dual::<Interval, 1>::variable(Interval::new(-1.0, 1.0), 0);
        assert!(x.try_sqrt().is_err());
    }
}
