//! Central-configuration equations of the full planar four-body problem
//! with the base fixed at `q1 = (-1, 0)`, `q2 = (1, 0)`.
//!
//! Unknowns are `(x3, y3, x4, y4, lambda)`. For body `j` the residual is
//!
//! ```text
//! E_j = lambda (q_j - c) - sum_{i != j} m_i (q_j - q_i) / r_ij^3
//! ```
//!
//! with `c` the centre of mass. Of the eight scalar residuals, five are
//! selected; the remaining three follow from translation and rotation
//! invariance and are checked separately.

use crate::error::DomainError;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::system::ParamSystem;

/// Index of each unknown.
pub const X3: usize = 0;
pub const Y3: usize = 1;
pub const X4: usize = 2;
pub const Y4: usize = 3;
pub const LAMBDA: usize = 4;

/// Sign of each unknown and each selected residual under the reflection
/// `x -> -x` that swaps bodies 1 and 2.
pub const REFLECTION: [f64; 5] = [-1.0, 1.0, -1.0, 1.0, 1.0];

/// Which pair of bodies carries the parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MassLayout {
    /// `m1 = m2 = 1`, `m3 = m4 = mu`.
    AxisPair,
    /// `m1 = m2 = mu`, `m3 = m4 = 1`. At `mu = 0` this is the limit of an
    /// infinitely heavy axis pair.
    BasePair,
}

/// The full planar system with one mass parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullPlanarSystem {
    pub layout: MassLayout,
}

impl FullPlanarSystem {
    pub const STANDARD: FullPlanarSystem = FullPlanarSystem {
        layout: MassLayout::AxisPair,
    };
    pub const SWAPPED: FullPlanarSystem = FullPlanarSystem {
        layout: MassLayout::BasePair,
    };

    /// All eight residuals `[E1x, E1y, E2x, E2y, E3x, E3y, E4x, E4y]`.
    pub fn residuals<S: Scalar>(&self, x: &[S; 5], mu: S) -> Result<[S; 8], DomainError> {
        let one = S::from_f64(1.0);
        let zero = S::from_f64(0.0);
        let (mb, ma) = match self.layout {
            MassLayout::AxisPair => (one, mu),
            MassLayout::BasePair => (mu, one),
        };
        let masses = [mb, mb, ma, ma];
        let q = [
            [S::from_f64(-1.0), zero],
            [one, zero],
            [x[X3], x[Y3]],
            [x[X4], x[Y4]],
        ];
        let total = (mb + ma).scale(2.0);
        // q1 + q2 = 0, so only the axis pair contributes to the centre.
        let c = [
            (ma * (x[X3] + x[X4])).try_div(total)?,
            (ma * (x[Y3] + x[Y4])).try_div(total)?,
        ];
        let lambda = x[LAMBDA];

        let mut inv_r3 = [[zero; 4]; 4];
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dx = q[i][0] - q[j][0];
                let dy = q[i][1] - q[j][1];
                let r2 = dx.sqr() + dy.sqr();
                if r2.value_enclosure().lo() <= 0.0 {
                    return Err(DomainError::Collision);
                }
                let r3 = r2 * r2.try_sqrt()?;
                let v = r3.recip().map_err(|_| DomainError::Collision)?;
                inv_r3[i][j] = v;
                inv_r3[j][i] = v;
            }
        }

        let mut out = [zero; 8];
        for j in 0..4 {
            for k in 0..2 {
                let mut e = lambda * (q[j][k] - c[k]);
                for i in 0..4 {
                    if i != j {
                        e = e - masses[i] * (q[j][k] - q[i][k]) * inv_r3[i][j];
                    }
                }
                out[2 * j + k] = e;
            }
        }
        Ok(out)
    }

    /// The three residuals not in the square selection.
    pub fn residual_check<S: Scalar>(&self, x: &[S; 5], mu: S) -> Result<[S; 3], DomainError> {
        let e = self.residuals(x, mu)?;
        Ok(match self.layout {
            MassLayout::AxisPair => [e[1], e[3], e[0] + e[2]],
            MassLayout::BasePair => [e[5], e[6], e[7]],
        })
    }
}

impl ParamSystem<5> for FullPlanarSystem {
    fn id(&self) -> String {
        match self.layout {
            MassLayout::AxisPair => "full-planar (m1=m2=1, m3=m4=m)".into(),
            MassLayout::BasePair => "full-planar swapped (m1=m2=mu, m3=m4=1)".into(),
        }
    }

    /// Axis-pair layout: `[E3x, E3y, E4x, E4y, (E1x - E2x)/2]`. The last
    /// entry is the reflection-invariant combination of the base
    /// equations, which makes the system equivariant under `x -> -x`.
    ///
    /// Base-pair layout: `[E1x, E1y, E2x, E2y, E3x]`; the axis bodies
    /// dominate and the base equations carry the shape information.
    fn eval_mu<S: Scalar>(&self, x: &[S; 5], mu: S) -> Result<[S; 5], DomainError> {
        let e = self.residuals(x, mu)?;
        Ok(match self.layout {
            MassLayout::AxisPair => [e[4], e[5], e[6], e[7], (e[0] - e[2]).scale(0.5)],
            MassLayout::BasePair => [e[0], e[1], e[2], e[3], e[4]],
        })
    }
}

/// Full planar state of a symmetric kite with heights `(s, t)` and
/// configuration constant `lambda`.
pub fn symmetric_state(s: Interval, t: Interval, lambda: Interval) -> [Interval; 5] {
    [Interval::ZERO, s, Interval::ZERO, t, lambda]
}

/// Applies the reflection `x -> -x` to a state.
pub fn reflect<S: Scalar>(x: &[S; 5]) -> [S; 5] {
    std::array::from_fn(|i| if REFLECTION[i] < 0.0 { -x[i] } else { x[i] })
}
