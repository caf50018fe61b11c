//! Rigorous classification of a one-parameter bifurcation.
//!
//! At a solution with a simple zero eigenvalue, right/left null vectors
//! `v`, `w` give four test quantities
//!
//! ```text
//! t1 = w·F_mu    t2 = w·(DF_mu v)    t3 = w·D²F(v,v)    t4 = w·D³F(v,v,v)
//! ```
//!
//! A fold needs `t1 ≠ 0, t3 ≠ 0`; a transcritical point `t1 = 0, t2 ≠ 0,
//! t3 ≠ 0`; a pitchfork `t1 = t3 = 0, t2 ≠ 0, t4 ≠ 0`. Nonzero claims come
//! from enclosures excluding zero. Zero claims never come from mere
//! containment: they need an exact `[0, 0]` enclosure or a reflection
//! symmetry that forces them.

use serde::Serialize;

use crate::autodiff::{
    directional_jet, dot, jacobian, mixed_derivative, param_derivative, IntervalMatrix,
};
use crate::boxes::IntervalBox;
use crate::error::CertError;
use crate::interval::Interval;
use crate::system::{ParamSystem, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BifurcationKind {
    Fold,
    Transcritical,
    PitchforkSuper,
    PitchforkSub,
    Inconclusive,
}

/// How a test quantity was shown to vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroEvidence {
    /// The enclosure is exactly `[0, 0]`.
    ExactEnclosure,
    /// Forced by reflection symmetry; see [`SymmetryCertificate`].
    Structural,
}

/// How the null vectors are obtained.
#[derive(Clone, Copy, Debug)]
pub enum NullSpace<const N: usize> {
    /// `v = (-j12, j11)`, `w = (-j21, j11)` for a 2×2 Jacobian.
    ClosedForm2,
    /// Floating estimate from the midpoint Jacobian, slightly inflated.
    Numeric,
    /// Vectors supplied by the caller.
    Given([Interval; N], [Interval; N]),
}

/// A diagonal reflection `R = diag(signs)` acting on states and on
/// equations, with `F(R x, mu) = R F(x, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Reflection<const N: usize> {
    #[serde(skip)]
    pub signs: [f64; N],
}

/// Record of the checks under which `t1` and `t3` are declared zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryCertificate {
    pub signs: Vec<f64>,
    /// The state box is mapped onto itself.
    pub state_invariant: bool,
    /// `v` and `w` vanish exactly on the fixed subspace.
    pub null_vectors_odd: bool,
    /// Odd components of `F_mu` contain zero.
    pub f_mu_even: bool,
    /// Largest relative defect of `F(Rx) = R F(x)` at sample points.
    pub equivariance_defect: f64,
}

impl SymmetryCertificate {
    pub fn holds(&self) -> bool {
        self.state_invariant
            && self.null_vectors_odd
            && self.f_mu_even
            && self.equivariance_defect < 1e-12
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationReport {
    pub system: String,
    pub point: Vec<Interval>,
    pub mu: Interval,
    pub jacobian: Vec<Vec<Interval>>,
    pub v: Vec<Interval>,
    pub w: Vec<Interval>,
    pub jv: Vec<Interval>,
    pub wj: Vec<Interval>,
    pub t1: Interval,
    pub t2: Interval,
    pub t3: Interval,
    pub t4: Interval,
    pub t1_zero: Option<ZeroEvidence>,
    pub t3_zero: Option<ZeroEvidence>,
    pub symmetry: Option<SymmetryCertificate>,
    pub kind: BifurcationKind,
}

fn exact_zero(t: &Interval) -> bool {
    t.lo() == 0.0 && t.hi() == 0.0
}

/// Null vector of a floating matrix by Gaussian elimination with full
/// pivoting, treating the last pivot as zero. Normalised to max-norm 1.
pub fn null_vector_f64<const N: usize>(m: &[[f64; N]; N]) -> [f64; N] {
    let mut a = *m;
    let mut cols: [usize; N] = std::array::from_fn(|i| i);
    for k in 0..N.saturating_sub(1) {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.abs() > best {
                    best = x.abs();
                    pi = i;
                    pj = j;
                }
            }
        }
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        cols.swap(k, pj);
        let p = a[k][k];
        if p == 0.0 {
            continue;
        }
        for i in (k + 1)..N {
            let f = a[i][k] / p;
            for j in k..N {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut y = [0.0; N];
    if N > 0 {
        y[N - 1] = 1.0;
    }
    for k in (0..N.saturating_sub(1)).rev() {
        let mut s = 0.0;
        for j in (k + 1)..N {
            s += a[k][j] * y[j];
        }
        y[k] = if a[k][k] != 0.0 { -s / a[k][k] } else { 0.0 };
    }
    let mut v = [0.0; N];
    for k in 0..N {
        v[cols[k]] = y[k];
    }
    let n = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if n > 0.0 {
        v.map(|x| x / n)
    } else {
        v
    }
}

/// Right and left null vectors of `j`, certified by `0 ∈ (J v)_i` and
/// `0 ∈ (wᵀ J)_i` for every component.
pub fn null_vectors<const N: usize>(
    j: &IntervalMatrix<N, N>,
    method: NullSpace<N>,
) -> Result<([Interval; N], [Interval; N]), CertError> {
    let (v, w) = match method {
        NullSpace::ClosedForm2 => {
            if N != 2 {
                return Err(CertError::InvalidInput(
                    "closed form needs a 2x2 matrix".into(),
                ));
            }
            let mut v = [Interval::ZERO; N];
            let mut w = [Interval::ZERO; N];
            v[0] = -j.0[0][1];
            v[1] = j.0[0][0];
            w[0] = -j.0[1][0];
            w[1] = j.0[0][0];
            (v, w)
        }
        NullSpace::Numeric => {
            let m = j.mid();
            let inflate = |x: f64| Interval::point(x).inflate(x.abs() * 1e-10);
            let v = null_vector_f64(&m).map(inflate);
            let w = null_vector_f64(&j.transpose().mid()).map(inflate);
            (v, w)
        }
        NullSpace::Given(v, w) => (v, w),
    };
    certify_null_pair(j, &v, &w)?;
    Ok((v, w))
}

/// Checks `0 ∈ J v` and `0 ∈ wᵀ J` componentwise, with `v, w` nonzero.
pub fn certify_null_pair<const N: usize>(
    j: &IntervalMatrix<N, N>,
    v: &[Interval; N],
    w: &[Interval; N],
) -> Result<(), CertError> {
    if v.iter().all(Interval::contains_zero) || w.iter().all(Interval::contains_zero) {
        return Err(CertError::NotRankDeficient(
            "null vector enclosure contains 0".into(),
        ));
    }
    let jv = j.mul_vec(v);
    let wj = j.transpose().mul_vec(w);
    if let Some(i) = jv.iter().position(|x| !x.contains_zero()) {
        return Err(CertError::NotRankDeficient(format!(
            "(J v)_{i} = {} excludes 0",
            jv[i]
        )));
    }
    if let Some(i) = wj.iter().position(|x| !x.contains_zero()) {
        return Err(CertError::NotRankDeficient(format!(
            "(wᵀ J)_{i} = {} excludes 0",
            wj[i]
        )));
    }
    Ok(())
}

/// Verifies the symmetry hypotheses that force `t1 = t3 = 0`.
fn check_symmetry<const N: usize, P: ParamSystem<N>>(
    f: &P,
    refl: &Reflection<N>,
    point: &IntervalBox<N>,
    mu: Interval,
    v: &[Interval; N],
    w: &[Interval; N],
    f_mu: &[Interval; N],
) -> SymmetryCertificate {
    let odd = |i: usize| refl.signs[i] < 0.0;
    let state_invariant = (0..N).all(|i| !odd(i) || point.0[i].lo() == -point.0[i].hi());
    let null_vectors_odd = (0..N).all(|i| odd(i) || (exact_zero(&v[i]) && exact_zero(&w[i])));
    let f_mu_even = (0..N).all(|i| !odd(i) || f_mu[i].contains_zero());
    // Spot-check equivariance at deterministic off-symmetric points.
    let mut defect = 0.0f64;
    let base = point.mid();
    for k in 1..=8 {
        let x: [f64; N] = std::array::from_fn(|i| {
            let shift = 0.01 * ((k * (i + 3)) % 7) as f64 / 7.0 + 0.003 * k as f64;
            base[i] + shift
        });
        let rx: [f64; N] = std::array::from_fn(|i| refl.signs[i] * x[i]);
        let (Ok(fx), Ok(frx)) = (f.eval_mu(&x, mu.mid()), f.eval_mu(&rx, mu.mid())) else {
            defect = f64::INFINITY;
            continue;
        };
        for i in 0..N {
            let scale = fx[i].abs().max(1.0);
            defect = defect.max((frx[i] - refl.signs[i] * fx[i]).abs() / scale);
        }
    }
    SymmetryCertificate {
        signs: refl.signs.to_vec(),
        state_invariant,
        null_vectors_odd,
        f_mu_even,
        equivariance_defect: defect,
    }
}

/// Decision table of the classification; `t2` fixes the orientation of
/// `w` so that the super/subcritical split reads off `t2 t4 < 0`.
pub fn decide(
    t1: &Interval,
    t2: &Interval,
    t3: &Interval,
    t4: &Interval,
    t1_zero: bool,
    t3_zero: bool,
) -> BifurcationKind {
    let nz = |t: &Interval| !t.contains_zero();
    if nz(t1) && nz(t3) {
        BifurcationKind::Fold
    } else if t1_zero && nz(t2) && nz(t3) {
        BifurcationKind::Transcritical
    } else if t1_zero && t3_zero && nz(t2) && nz(t4) {
        if (t2.is_positive()) == (t4.is_negative()) {
            BifurcationKind::PitchforkSuper
        } else {
            BifurcationKind::PitchforkSub
        }
    } else {
        BifurcationKind::Inconclusive
    }
}

/// Classifies the candidate `(point, mu)` of `f(x, mu) = 0`.
pub fn classify<const N: usize, P: ParamSystem<N>>(
    f: &P,
    point: &IntervalBox<N>,
    mu: Interval,
    method: NullSpace<N>,
    symmetry: Option<Reflection<N>>,
) -> Result<BifurcationReport, CertError> {
    let frozen = f.at(mu);
    let (_, j) = jacobian(&frozen, &point.0)?;
    let (v, w) = null_vectors(&j, method)?;
    let f_mu = param_derivative(f, &point.0, mu)?;
    let t1 = dot(&w, &f_mu);
    let t2 = dot(&w, &mixed_derivative(f, &point.0, &v, mu)?);
    let jets = directional_jet(&frozen, &point.0, &v)?;
    let d2 = jets.map(|j| j.derivative(2));
    let d3 = jets.map(|j| j.derivative(3));
    let t3 = dot(&w, &d2);
    let t4 = dot(&w, &d3);

    let sym = symmetry.map(|r| check_symmetry(f, &r, point, mu, &v, &w, &f_mu));
    let structural = sym.as_ref().is_some_and(SymmetryCertificate::holds);
    let zero_of = |t: &Interval| {
        if structural && t.contains_zero() {
            Some(ZeroEvidence::Structural)
        } else if exact_zero(t) {
            Some(ZeroEvidence::ExactEnclosure)
        } else {
            None
        }
    };
    let t1_zero = zero_of(&t1);
    let t3_zero = zero_of(&t3);
    let kind = decide(&t1, &t2, &t3, &t4, t1_zero.is_some(), t3_zero.is_some());
    Ok(BifurcationReport {
        system: frozen.id(),
        point: point.0.to_vec(),
        mu,
        jacobian: j.0.iter().map(|r| r.to_vec()).collect(),
        v: v.to_vec(),
        w: w.to_vec(),
        jv: j.mul_vec(&v).to_vec(),
        wj: j.transpose().mul_vec(&w).to_vec(),
        t1,
        t2,
        t3,
        t4,
        t1_zero,
        t3_zero,
        symmetry: sym,
        kind,
    })
}
