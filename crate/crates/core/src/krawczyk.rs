//! The Krawczyk operator
//! `K(x0, X) = x0 - C F(x0) + (I - C DF(X)) (X - x0)` on a single box.
//!
//! If `K ⊂ int X` the box holds exactly one zero of `F`, and it lies in
//! `K`. If `K ∩ X = ∅` the box holds none.

use serde::Serialize;

use crate::autodiff::{invert_f64, jacobian, jacobian_f64, solve_f64, IntervalMatrix};
use crate::boxes::IntervalBox;
use crate::error::{CertError, DomainError};
use crate::interval::Interval;
use crate::system::{eval_interval, System};

/// Default absolute width at which refinement of a unique zero stops.
pub const DEFAULT_REFINE_WIDTH: f64 = 1e-12;

/// Refinement stops once an iteration shrinks the width by less than this
/// fraction.
const STAGNATION: f64 = 0.01;

const MAX_REFINE_STEPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KrawczykVerdict {
    UniqueZero,
    NoZero,
    Contracted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrawczykResult<const N: usize> {
    pub verdict: KrawczykVerdict,
    /// `K(x0, X)`, absent when the operator could not be formed.
    pub k_box: Option<IntervalBox<N>>,
    pub x0: [f64; N],
    /// Floating preconditioner used.
    pub c: Option<[[f64; N]; N]>,
    /// Why the verdict is `Unknown`, if it is.
    pub failure: Option<CertError>,
}

impl<const N: usize> KrawczykResult<N> {
    fn unknown(x0: [f64; N], c: Option<[[f64; N]; N]>, e: CertError) -> Self {
        KrawczykResult {
            verdict: KrawczykVerdict::Unknown,
            k_box: None,
            x0,
            c,
            failure: Some(e),
        }
    }
}

/// Approximate inverse of the midpoint Jacobian over `x`.
pub fn make_preconditioner<const N: usize, F: System<N>>(
    f: &F,
    x: &IntervalBox<N>,
) -> Result<[[f64; N]; N], CertError> {
    let (_, j) = jacobian(f, &x.0)?;
    invert_f64(&j.mid())
}

/// One application of the Krawczyk operator with `x0 = mid(X)`.
pub fn krawczyk_step<const N: usize, F: System<N>>(f: &F, x: &IntervalBox<N>) -> KrawczykResult<N> {
    let x0 = x.mid();
    let jac = match jacobian(f, &x.0) {
        Ok((_, j)) => j,
        Err(e) => return KrawczykResult::unknown(x0, None, e.into()),
    };
    let c = match invert_f64(&jac.mid()) {
        Ok(c) => c,
        Err(e) => return KrawczykResult::unknown(x0, None, e),
    };
    let fx0 = match eval_interval(f, &x0.map(Interval::point)) {
        Ok(v) => v,
        Err(e) => return KrawczykResult::unknown(x0, Some(c), e.into()),
    };
    let k = krawczyk_box(&c, &jac, &fx0, x, &x0);
    if !k.0.iter().all(Interval::is_finite) {
        return KrawczykResult::unknown(x0, Some(c), DomainError::NonFinite.into());
    }
    let verdict = if x.interior_encloses(&k) {
        KrawczykVerdict::UniqueZero
    } else if x.intersect(&k).is_none() {
        KrawczykVerdict::NoZero
    } else {
        KrawczykVerdict::Contracted
    };
    KrawczykResult {
        verdict,
        k_box: Some(k),
        x0,
        c: Some(c),
        failure: None,
    }
}

fn krawczyk_box<const N: usize>(
    c: &[[f64; N]; N],
    jac: &IntervalMatrix<N, N>,
    fx0: &[Interval; N],
    x: &IntervalBox<N>,
    x0: &[f64; N],
) -> IntervalBox<N> {
    let ci = IntervalMatrix::from_f64(c);
    let cf = ci.mul_vec(fx0);
    let m = IntervalMatrix::<N, N>::identity() - ci * *jac;
    let dx: [Interval; N] = std::array::from_fn(|i| x.0[i] - Interval::point(x0[i]));
    let mdx = m.mul_vec(&dx);
    IntervalBox(std::array::from_fn(|i| {
        Interval::point(x0[i]) - cf[i] + mdx[i]
    }))
}

/// Shrinks a box known to hold a unique zero by iterating `X <- K ∩ X`.
///
/// Stops when every width is at most `target`, when an iteration improves
/// the largest width by less than 1%, or when the operator can no longer
/// be formed. The returned box always contains the zero.
pub fn refine<const N: usize, F: System<N>>(
    f: &F,
    x: &IntervalBox<N>,
    target: f64,
) -> IntervalBox<N> {
    let mut cur = *x;
    for _ in 0..MAX_REFINE_STEPS {
        let w = cur.max_width();
        if w <= target {
            break;
        }
        let r = krawczyk_step(f, &cur);
        let Some(k) = r.k_box else { break };
        let Some(next) = cur.intersect(&k) else { break };
        let improved = next.max_width() < w * (1.0 - STAGNATION);
        cur = next;
        if !improved {
            break;
        }
    }
    cur
}

/// Krawczyk test on `mid(X) ± factor * rad(X)`, used for zeros lying on a
/// face of `X` where the plain test cannot succeed.
pub fn krawczyk_inflated<const N: usize, F: System<N>>(
    f: &F,
    x: &IntervalBox<N>,
    factor: f64,
) -> (IntervalBox<N>, KrawczykResult<N>) {
    let big = IntervalBox(x.0.map(|d| {
        let m = Interval::point(d.mid());
        let r = d.rad() * factor;
        m.inflate(r.max(f64::MIN_POSITIVE))
    }));
    let r = krawczyk_step(f, &big);
    (big, r)
}

/// Floating-point Newton iteration, used only to produce candidates for
/// the Krawczyk test.
pub fn newton_f64<const N: usize, F: System<N>>(
    f: &F,
    x0: &[f64; N],
    max_iter: usize,
) -> Result<[f64; N], CertError> {
    let mut x = *x0;
    for _ in 0..max_iter {
        let (fx, j) = jacobian_f64(f, &x).map_err(|e| CertError::NewtonFailed(e.to_string()))?;
        let dx = solve_f64(&j, &fx).map_err(|e| CertError::NewtonFailed(e.to_string()))?;
        let mut step = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..N {
            x[i] -= dx[i];
            step = step.max(dx[i].abs());
            scale = scale.max(x[i].abs());
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(CertError::NewtonFailed(
                "iterate left the finite range".into(),
            ));
        }
        if step <= 4.0 * f64::EPSILON * scale.max(1.0) {
            return Ok(x);
        }
    }
    // Accept a slowly converging iterate if the residual is small; the
    // Krawczyk test decides anyway.
    let fx = f
        .eval(&x)
        .map_err(|e| CertError::NewtonFailed(e.to_string()))?;
    if fx.iter().all(|v| v.abs() < 1e-9) {
        Ok(x)
    } else {
        Err(CertError::NewtonFailed(format!(
            "no convergence from {x0:?}"
        )))
    }
}

/// Unique zero of `f` near the floating guess `x`, by the Krawczyk test on
/// boxes of increasing radius around it. Returns the box in which the zero
/// is unique and its refined enclosure.
pub fn certify_near<const N: usize, F: System<N>>(
    f: &F,
    x: &[f64; N],
    refine_width: f64,
) -> Result<(IntervalBox<N>, IntervalBox<N>), CertError> {
    for r in [1e-12, 1e-10, 1e-8, 1e-6, 1e-4] {
        let bx = IntervalBox(x.map(|c| Interval::point(c).inflate(r * c.abs().max(1.0))));
        let k = krawczyk_step(f, &bx);
        if let (KrawczykVerdict::UniqueZero, Some(k_box)) = (k.verdict, k.k_box) {
            let start = bx.intersect(&k_box).unwrap_or(k_box);
            return Ok((bx, refine(f, &start, refine_width)));
        }
    }
    Err(CertError::NoRoot(format!(
        "Krawczyk test failed around {x:?}"
    )))
}
