use std::ops::{Add, Mul, Neg, Sub};

use crate::error::DomainError;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Truncated Taylor series `c0 + c1 t + c2 t^2 + c3 t^3`.
///
/// Evaluating a function on `x0 + t v` gives `c_k = D^k F(x0)(v,..,v) / k!`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<S> {
    pub coeffs: [S; 4],
}

impl<S: Scalar> Jet<S> {
    pub fn constant(c: S) -> Self {
        let z = S::from_f64(0.0);
        Jet {
            coeffs: [c, z, z, z],
        }
    }

    /// The line `x0 + t v`.
    pub fn line(x0: S, v: S) -> Self {
        let z = S::from_f64(0.0);
        Jet {
            coeffs: [x0, v, z, z],
        }
    }

    /// `k! c_k`, the k-th directional derivative.
    pub fn derivative(&self, k: usize) -> S {
        const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
        self.coeffs[k].scale(FACT[k])
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet {
            coeffs: std::array::from_fn(|k| self.coeffs[k] + rhs.coeffs[k]),
        }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet {
            coeffs: std::array::from_fn(|k| self.coeffs[k] - rhs.coeffs[k]),
        }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.coeffs, rhs.coeffs);
        Jet {
            coeffs: [
                a[0] * b[0],
                a[0] * b[1] + a[1] * b[0],
                a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
                a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0],
            ],
        }
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    const DIFFERENTIATING: bool = true;

    fn from_interval(c: Interval) -> Self {
        Self::constant(S::from_interval(c))
    }

    fn try_div(self, rhs: Self) -> Result<Self, DomainError> {
        let (a, b) = (self.coeffs, rhs.coeffs);
        let mut q = [S::from_f64(0.0); 4];
        for k in 0..4 {
            let mut acc = a[k];
            for j in 0..k {
                acc = acc - q[j] * b[k - j];
            }
            q[k] = acc.try_div(b[0])?;
        }
        Ok(Jet { coeffs: q })
    }

    fn try_sqrt(self) -> Result<Self, DomainError> {
        let a = self.coeffs;
        let r0 = a[0].try_sqrt()?;
        if r0.value_enclosure().contains_zero() {
            return Err(DomainError::DivisionByZero);
        }
        let twice = r0 + r0;
        let mut r = [r0, r0, r0, r0];
        for k in 1..4 {
            let mut acc = a[k];
            for j in 1..k {
                acc = acc - r[j] * r[k - j];
            }
            r[k] = acc.try_div(twice)?;
        }
        Ok(Jet { coeffs: r })
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::from_f64(1.0);
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    fn value_enclosure(&self) -> Interval {
        self.coeffs[0].value_enclosure()
    }
}
