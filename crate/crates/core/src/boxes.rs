//! Fixed-dimension boxes, the unit of work for every campaign.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::interval::Interval;

/// Cartesian product of `N` intervals.
#[derive(Clone, Copy, PartialEq)]
pub struct IntervalBox<const N: usize>(pub [Interval; N]);

impl<const N: usize> IntervalBox<N> {
    pub fn new(dims: [Interval; N]) -> Self {
        IntervalBox(dims)
    }

    /// Box from `[lo, hi]` pairs; panics on invalid pairs.
    #[track_caller]
    pub fn from_bounds(bounds: [(f64, f64); N]) -> Self {
        IntervalBox(bounds.map(|(lo, hi)| Interval::new(lo, hi)))
    }

    pub fn point(x: [f64; N]) -> Self {
        IntervalBox(x.map(Interval::point))
    }

    pub fn dims(&self) -> &[Interval; N] {
        &self.0
    }

    pub fn mid(&self) -> [f64; N] {
        self.0.map(|d| d.mid())
    }

    pub fn widths(&self) -> [f64; N] {
        self.0.map(|d| d.width())
    }

    /// Largest component width.
    pub fn max_width(&self) -> f64 {
        self.0.iter().map(Interval::width).fold(0.0, f64::max)
    }

    /// Index of the widest dimension; the first one wins ties.
    pub fn widest_dim(&self) -> usize {
        let mut best = 0;
        for i in 1..N {
            if self.0[i].width() > self.0[best].width() {
                best = i;
            }
        }
        best
    }

    /// Splits the widest dimension at its midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        self.bisect_at(self.widest_dim())
    }

    pub fn bisect_at(&self, dim: usize) -> (Self, Self) {
        let (l, r) = self.0[dim].bisect();
        let mut left = *self;
        let mut right = *self;
        left.0[dim] = l;
        right.0[dim] = r;
        (left, right)
    }

    pub fn contains_point(&self, x: &[f64; N]) -> bool {
        self.0.iter().zip(x).all(|(d, &v)| d.contains(v))
    }

    pub fn encloses(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.encloses(b))
    }

    /// `other` lies in the interior of `self` in every dimension.
    pub fn interior_encloses(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| a.interior_encloses(b))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let mut out = *self;
        for i in 0..N {
            out.0[i] = self.0[i].intersect(&other.0[i])?;
        }
        Some(out)
    }

    pub fn hull(&self, other: &Self) -> Self {
        IntervalBox(std::array::from_fn(|i| self.0[i].hull(&other.0[i])))
    }

    /// Product of the widths.
    pub fn volume(&self) -> f64 {
        self.0.iter().map(|d| d.hi() - d.lo()).product()
    }

    /// Uniform grid of `n^N` cells. Neighbouring cells share their
    /// boundary values exactly and the outer faces coincide with `self`.
    pub fn grid(&self, n: usize) -> Vec<Self> {
        assert!(n >= 1);
        let cuts: [Vec<f64>; N] = std::array::from_fn(|i| {
            let d = self.0[i];
            (0..=n)
                .map(|k| {
                    if k == 0 {
                        d.lo()
                    } else if k == n {
                        d.hi()
                    } else {
                        let t = k as f64 / n as f64;
                        (d.lo() + t * (d.hi() - d.lo())).clamp(d.lo(), d.hi())
                    }
                })
                .collect()
        });
        let total = n.pow(N as u32);
        let mut cells = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut dims = self.0;
            for i in (0..N).rev() {
                let k = rem % n;
                rem /= n;
                dims[i] = Interval::new(cuts[i][k], cuts[i][k + 1]);
            }
            cells.push(IntervalBox(dims));
        }
        cells
    }

    /// Lexicographic order on `(lo, hi)` of each dimension, used to make
    /// campaign output independent of scheduling.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        for i in 0..N {
            let o = self.0[i]
                .lo()
                .total_cmp(&other.0[i].lo())
                .then(self.0[i].hi().total_cmp(&other.0[i].hi()));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl<const N: usize> fmt::Debug for IntervalBox<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> Serialize for IntervalBox<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(N))?;
        for d in &self.0 {
            seq.serialize_element(d)?;
        }
        seq.end()
    }
}

impl<'de, const N: usize> Deserialize<'de> for IntervalBox<N> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<Interval>::deserialize(deserializer)?;
        let len = v.len();
        let dims: [Interval; N] = v
            .try_into()
            .map_err(|_| D::Error::custom(format!("expected {N} intervals, got {len}")))?;
        Ok(IntervalBox(dims))
    }
}
