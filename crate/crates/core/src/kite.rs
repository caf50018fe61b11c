//! Equations of the symmetric concave kite.
//!
//! Bodies 1 and 2 sit at `(-1, 0)` and `(1, 0)` with unit mass, bodies 3
//! and 4 on the symmetry axis at heights `s = sqrt(a^2 - 1)` and
//! `t = sqrt(b^2 - 1)` with mass `m` each, where `a = r13` and `b = r14`.

use crate::autodiff::Dual;
use crate::boxes::IntervalBox;
use crate::error::DomainError;
use crate::f2_numerator;
use crate::interval::{consts, Interval};
use crate::scalar::{radical, Scalar};
use crate::system::{ParamSystem, System};

/// Side lengths `a = r13`, `b = r14` of the kite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KiteVars<S> {
    pub a: S,
    pub b: S,
}

impl<S: Scalar> KiteVars<S> {
    pub fn new(a: S, b: S) -> Self {
        KiteVars { a, b }
    }
}

/// Auxiliary quantities shared by all kite equations.
#[derive(Clone, Copy, Debug)]
pub struct KiteAux<S> {
    pub a: S,
    pub b: S,
    /// Height of body 3.
    pub s: S,
    /// Height of body 4.
    pub t: S,
    /// `s - t`.
    pub d: S,
    pub a3: S,
    pub b3: S,
    /// `s (a^3 - 8) / a^6`
    pub x: S,
    /// `a^3 + d^3`
    pub x1: S,
    /// `t (b^3 - 8) / b^6`
    pub y: S,
    /// `b^3 + d^3`
    pub y1: S,
    /// `a^3 b^3 d^2 / 4`
    pub w1: S,
}

impl<S: Scalar> KiteAux<S> {
    pub fn new(v: KiteVars<S>) -> Result<Self, DomainError> {
        let s = radical(v.a)?;
        let t = radical(v.b)?;
        Self::from_parts(v.a, v.b, s, t)
    }

    /// Builds the auxiliaries from heights, with `a, b` recovered as
    /// `sqrt(1 + s^2)`, `sqrt(1 + t^2)`. Smooth through `s = 0`.
    pub fn from_heights(s: S, t: S) -> Result<Self, DomainError> {
        let one = S::from_f64(1.0);
        let a = (one + s.sqr()).try_sqrt()?;
        let b = (one + t.sqr()).try_sqrt()?;
        Self::from_parts(a, b, s, t)
    }

    pub fn from_parts(a: S, b: S, s: S, t: S) -> Result<Self, DomainError> {
        let a3 = a.powi(3);
        let b3 = b.powi(3);
        let eight = S::from_f64(8.0);
        let d = s - t;
        let d2 = d.sqr();
        let d3 = d2 * d;
        let x = (s * (a3 - eight)).try_div(a3.sqr())?;
        let y = (t * (b3 - eight)).try_div(b3.sqr())?;
        Ok(KiteAux {
            a,
            b,
            s,
            t,
            d,
            a3,
            b3,
            x,
            x1: a3 + d3,
            y,
            y1: b3 + d3,
            w1: (a3 * b3 * d2).scale(0.25),
        })
    }
}

/// Configuration constant `lambda = m (1/a^3 + 1/b^3) + 1/4`.
pub fn eval_lambda<S: Scalar>(v: KiteVars<S>, m: S) -> Result<S, DomainError> {
    let inv = v.a.powi(3).recip()? + v.b.powi(3).recip()?;
    Ok(m * inv + S::from_f64(0.25))
}

/// The two mass-dependent equations `(g1, g2)`.
pub fn eval_g1_g2<S: Scalar>(v: KiteVars<S>, m: S) -> Result<(S, S), DomainError> {
    g1_g2_of(&KiteAux::new(v)?, m)
}

pub fn g1_g2_of<S: Scalar>(k: &KiteAux<S>, m: S) -> Result<(S, S), DomainError> {
    let eight = S::from_f64(8.0);
    let inv_d2 = k.d.sqr().recip()?;
    let g1 = m * (inv_d2 + k.d.try_div(k.b3)?) - (k.s * (eight - k.a3)).try_div(k.a3.scale(4.0))?;
    let g2 = m * (inv_d2 + k.d.try_div(k.a3)?) + (k.t * (eight - k.b3)).try_div(k.b3.scale(4.0))?;
    Ok((g1, g2))
}

/// `(g1, g2)` at `m = 0`, where the mass terms vanish identically.
pub fn g1_g2_massless<S: Scalar>(k: &KiteAux<S>) -> Result<(S, S), DomainError> {
    let eight = S::from_f64(8.0);
    let g1 = -(k.s * (eight - k.a3)).try_div(k.a3.scale(4.0))?;
    let g2 = (k.t * (eight - k.b3)).try_div(k.b3.scale(4.0))?;
    Ok((g1, g2))
}

/// Mass ratio solving `g1 = 0`: `m = -w1 x / y1`.
pub fn eval_m<S: Scalar>(v: KiteVars<S>) -> Result<S, DomainError> {
    m_of(&KiteAux::new(v)?)
}

pub fn m_of<S: Scalar>(k: &KiteAux<S>) -> Result<S, DomainError> {
    (-(k.w1 * k.x)).try_div(k.y1)
}

/// Mass-free equation `g = x x1 + y y1`.
pub fn eval_g<S: Scalar>(v: KiteVars<S>) -> Result<S, DomainError> {
    Ok(g_of(&KiteAux::new(v)?))
}

pub fn g_of<S: Scalar>(k: &KiteAux<S>) -> S {
    k.x * k.x1 + k.y * k.y1
}

/// The two mass formulas `(h1, h2)`: `h1 = -w1 x / y1` solves `g1 = 0`
/// and `h2 = w1 y / x1` solves `g2 = 0`. They agree exactly where `g = 0`.
pub fn eval_h1_h2<S: Scalar>(v: KiteVars<S>) -> Result<(S, S), DomainError> {
    h1_h2_of(&KiteAux::new(v)?)
}

pub fn h1_h2_of<S: Scalar>(k: &KiteAux<S>) -> Result<(S, S), DomainError> {
    Ok((m_of(k)?, (k.w1 * k.y).try_div(k.x1)?))
}

/// `f1 = m_a g_b - m_b g_a`, the stationarity condition of the mass
/// along the curve `g = 0`.
pub fn eval_f1<S: Scalar>(v: KiteVars<S>) -> Result<S, DomainError> {
    let [a, b] = Dual::<S, 2>::seed(&[v.a, v.b]);
    let k = KiteAux::new(KiteVars::new(a, b))?;
    let m = m_of(&k)?;
    let g = g_of(&k);
    Ok(m.partials[0] * g.partials[1] - m.partials[1] * g.partials[0])
}

/// `f2 = h1_a h2_b - h1_b h2_a`, computed by differentiation. Only used
/// to cross-check the cleared numerator.
pub fn eval_f2<S: Scalar>(v: KiteVars<S>) -> Result<S, DomainError> {
    let [a, b] = Dual::<S, 2>::seed(&[v.a, v.b]);
    let (h1, h2) = eval_h1_h2(KiteVars::new(a, b))?;
    Ok(h1.partials[0] * h2.partials[1] - h1.partials[1] * h2.partials[0])
}

/// Numerator of `f2` with all denominators cleared; see [`f2_numerator`].
pub fn eval_f2_tilde<S: Scalar>(v: KiteVars<S>) -> Result<S, DomainError> {
    let s = radical(v.a)?;
    let t = radical(v.b)?;
    Ok(f2_numerator::eval(v.a, v.b, s, t))
}

/// `(dg/da, dg/db)`.
pub fn eval_grad_g<S: Scalar>(v: KiteVars<S>) -> Result<(S, S), DomainError> {
    let [a, b] = Dual::<S, 2>::seed(&[v.a, v.b]);
    let g = eval_g(KiteVars::new(a, b))?;
    Ok((g.partials[0], g.partials[1]))
}

/// Quintic governing the sign of `dy/db`: `p(z) = -2z^5 + 3z^3 + 40z^2 - 48`.
pub fn eval_p<S: Scalar>(z: S) -> S {
    let c = |x: f64| S::from_f64(x);
    // Horner form: ((((-2 z) z + 3) z + 40) z) z - 48
    ((((c(-2.0) * z) * z + c(3.0)) * z + c(40.0)) * z) * z - c(48.0)
}

/// `p^(k)(z)` for `k = 0..=3`.
pub fn eval_p_derivative<S: Scalar>(z: S, k: usize) -> S {
    let c = |x: f64| S::from_f64(x);
    match k {
        0 => eval_p(z),
        1 => (((c(-10.0) * z) * z + c(9.0)) * z + c(80.0)) * z,
        2 => ((c(-40.0) * z) * z + c(18.0)) * z + c(80.0),
        3 => c(-120.0) * z.sqr() + c(18.0),
        _ => panic!("p derivatives are provided up to order 3"),
    }
}

/// Heights of bodies 3 and 4 for a kite shape.
pub fn shape_to_positions<S: Scalar>(v: KiteVars<S>) -> Result<([S; 2], [S; 2]), DomainError> {
    let zero = S::from_f64(0.0);
    let s = (v.a.sqr() - S::from_f64(1.0)).try_sqrt()?;
    let t = (v.b.sqr() - S::from_f64(1.0)).try_sqrt()?;
    Ok(([zero, s], [zero, t]))
}

/// Named regions of the `(a, b)` plane, as closed boxes.
pub struct SearchDomain;

impl SearchDomain {
    /// Closure of the admissible range of `a`, `[1, 2]`.
    pub fn i_a() -> Interval {
        Interval::new(1.0, 2.0)
    }

    /// Closure of `(sqrt 2, 5/2)`.
    pub fn i_b() -> Interval {
        Interval::new(consts::sqrt2().lo(), 2.5)
    }

    /// Closure of `(sqrt 2, sqrt 2 (sqrt 3 + 1))`.
    pub fn i_b_tilde() -> Interval {
        Interval::new(consts::sqrt2().lo(), consts::b_tilde_max().hi())
    }

    /// `I_A x I_B`.
    pub fn d() -> IntervalBox<2> {
        IntervalBox::new([Self::i_a(), Self::i_b()])
    }

    /// Small box known to contain the maximum of the mass ratio.
    pub fn d0() -> IntervalBox<2> {
        IntervalBox::from_bounds([(1.1, 1.2), (2.0, 2.1)])
    }

    /// `[1, 2] x [5/2, sqrt 2 (sqrt 3 + 1)]`, where `g` has no zero.
    pub fn exclusion_region() -> IntervalBox<2> {
        IntervalBox::new([Self::i_a(), Interval::new(2.5, consts::b_tilde_max().hi())])
    }

    /// The equilateral shape `(2/sqrt 3, 2)`.
    pub fn equilateral() -> IntervalBox<2> {
        IntervalBox::new([consts::two_over_sqrt3(), Interval::point(2.0)])
    }
}

/// `F = (f1, g)`: its zero in `D0` is the shape of maximal mass.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxMassSystem;

impl System<2> for MaxMassSystem {
    fn id(&self) -> String {
        "max-mass (f1, g)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let v = KiteVars::new(x[0], x[1]);
        Ok([eval_f1(v)?, eval_g(v)?])
    }
}

/// `H~ = (f2~, g)`: candidate bifurcation points on the curve `g = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BifurcationCandidateSystem;

impl System<2> for BifurcationCandidateSystem {
    fn id(&self) -> String {
        "bifurcation-candidates (f2~, g)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let a = x[0];
        let b = x[1];
        let s = radical(a)?;
        let t = radical(b)?;
        let k = KiteAux::from_parts(a, b, s, t)?;
        Ok([f2_numerator::eval(a, b, s, t), g_of(&k)])
    }
}

/// `(dg/da, g)`: stationary points of the curve `b = b(a)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CurveStationarySystem;

impl System<2> for CurveStationarySystem {
    fn id(&self) -> String {
        "curve-stationary (g_a, g)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let [a, b] = Dual::<S, 2>::seed(x);
        let g = eval_g(KiteVars::new(a, b))?;
        Ok([g.partials[0], g.value])
    }
}

/// `G(r, m) = (m - h1, m - h2)` with `r = (a, b)` and parameter `m`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FoldSystem;

impl ParamSystem<2> for FoldSystem {
    fn id(&self) -> String {
        "mass-curve G = (m - h1, m - h2)".into()
    }

    fn eval_mu<S: Scalar>(&self, x: &[S; 2], m: S) -> Result<[S; 2], DomainError> {
        let (h1, h2) = eval_h1_h2(KiteVars::new(x[0], x[1]))?;
        Ok([m - h1, m - h2])
    }
}

/// Symmetric kites of a given mass in height coordinates `(s, t)`:
/// `(g, m - h1)` for `m > 0`, and `(g1, g2)` with the mass terms dropped
/// for `m = 0`. Height coordinates keep the system smooth at `a = 1`.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricHeightsSystem {
    pub m: Interval,
}

impl SymmetricHeightsSystem {
    pub fn massless(&self) -> bool {
        self.m.is_point() && self.m.lo() == 0.0
    }
}

impl System<2> for SymmetricHeightsSystem {
    fn id(&self) -> String {
        if self.massless() {
            "symmetric-heights (g1, g2) at m = 0".into()
        } else {
            format!("symmetric-heights (g, m - h1) at m = {}", self.m)
        }
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let k = KiteAux::from_heights(x[0], x[1])?;
        if self.massless() {
            let (g1, g2) = g1_g2_massless(&k)?;
            Ok([g1, g2])
        } else {
            Ok([g_of(&k), S::from_interval(self.m) - m_of(&k)?])
        }
    }
}
