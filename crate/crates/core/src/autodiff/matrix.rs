use std::ops::{Add, Mul, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::CertError;
use crate::interval::Interval;

/// Dense `R x C` matrix of intervals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalMatrix<const R: usize, const C: usize>(pub [[Interval; C]; R]);

impl<const R: usize, const C: usize> IntervalMatrix<R, C> {
    pub fn zeros() -> Self {
        IntervalMatrix([[Interval::ZERO; C]; R])
    }

    pub fn from_f64(m: &[[f64; C]; R]) -> Self {
        IntervalMatrix(m.map(|row| row.map(Interval::point)))
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.0[i][j]
    }

    pub fn mid(&self) -> [[f64; C]; R] {
        self.0.map(|row| row.map(|x| x.mid()))
    }

    pub fn transpose(&self) -> IntervalMatrix<C, R> {
        IntervalMatrix(std::array::from_fn(|j| {
            std::array::from_fn(|i| self.0[i][j])
        }))
    }

    pub fn mul_vec(&self, v: &[Interval; C]) -> [Interval; R] {
        std::array::from_fn(|i| dot(&self.0[i], v))
    }

    pub fn mul_mat<const K: usize>(&self, rhs: &IntervalMatrix<C, K>) -> IntervalMatrix<R, K> {
        IntervalMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let mut acc = Interval::ZERO;
                for j in 0..C {
                    acc = acc + self.0[i][j] * rhs.0[j][k];
                }
                acc
            })
        }))
    }

    /// Maximum absolute row sum bound.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(Interval::mag).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl<const N: usize> IntervalMatrix<N, N> {
    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Interval::ONE;
        }
        m
    }
}

impl<const R: usize, const C: usize> Add for IntervalMatrix<R, C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        IntervalMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl<const R: usize, const C: usize> Sub for IntervalMatrix<R, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        IntervalMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl<const R: usize, const C: usize, const K: usize> Mul<IntervalMatrix<C, K>>
    for IntervalMatrix<R, C>
{
    type Output = IntervalMatrix<R, K>;
    fn mul(self, rhs: IntervalMatrix<C, K>) -> IntervalMatrix<R, K> {
        self.mul_mat(&rhs)
    }
}

impl<const R: usize, const C: usize> Serialize for IntervalMatrix<R, C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(R))?;
        for row in &self.0 {
            seq.serialize_element(&row[..])?;
        }
        seq.end()
    }
}

/// Interval dot product.
pub fn dot<const N: usize>(a: &[Interval; N], b: &[Interval; N]) -> Interval {
    a.iter()
        .zip(b)
        .fold(Interval::ZERO, |acc, (x, y)| acc + *x * *y)
}

/// Floating-point inverse by Gaussian elimination with partial pivoting.
///
/// The result is only an approximate inverse; it serves as a
/// preconditioner and never enters a rigorous bound directly.
pub fn invert_f64<const N: usize>(m: &[[f64; N]; N]) -> Result<[[f64; N]; N], CertError> {
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CertError::SingularMatrix);
    }
    let mut a = *m;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[piv][col].abs() <= scale * 1e-15 {
            return Err(CertError::SingularMatrix);
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..N {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..N {
            if i != col {
                let f = a[i][col];
                if f != 0.0 {
                    for j in 0..N {
                        a[i][j] -= f * a[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    if inv.iter().flatten().all(|x| x.is_finite()) {
        Ok(inv)
    } else {
        Err(CertError::SingularMatrix)
    }
}

/// Solves `m x = b` in floating point.
pub fn solve_f64<const N: usize>(m: &[[f64; N]; N], b: &[f64; N]) -> Result<[f64; N], CertError> {
    let inv = invert_f64(m)?;
    Ok(std::array::from_fn(|i| {
        (0..N).map(|j| inv[i][j] * b[j]).sum()
    }))
}
