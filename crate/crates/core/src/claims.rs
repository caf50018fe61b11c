//! Global inequality claims about the kite equations: the region where
//! `g` has no zero, the root `b1` of the quintic `p`, and the sign facts
//! behind uniqueness of the curve `g = 0`.

use serde::Serialize;

use crate::autodiff::Dual;
use crate::boxes::IntervalBox;
use crate::error::{CertError, DomainError};
use crate::interval::{consts, Interval};
use crate::kite::{eval_g, eval_p, g_of, KiteAux, KiteVars, SearchDomain};
use crate::prover::{
    certify_exclusion, certify_scalar_root, certify_sign, Campaign, CampaignConfig, Sign,
    SignCampaign,
};
use crate::scalar::{radical, Scalar};
use crate::system::System;

/// Bracket of the root `b1` of `p`.
pub const B1_BRACKET: (f64, f64) = (2.75, 2.76);

/// Distance kept from `a = 1` where `dg/db` vanishes.
pub const DG_DB_MARGIN: f64 = 1e-6;

/// Distance kept below `b1` where `d(y y1)/db` may vanish.
pub const B1_MARGIN: f64 = 1e-6;

/// Distance kept from the endpoints of `I_A`, where `x` vanishes.
pub const X_MARGIN: f64 = 1e-9;

/// `g` has no zero in `[1, 2] x [5/2, sqrt 2 (sqrt 3 + 1)]`.
pub fn certify_curve_exclusion(cfg: &CampaignConfig) -> Result<SignCampaign<2>, CertError> {
    certify_exclusion(
        |x: &[Interval; 2]| eval_g(KiteVars::new(x[0], x[1])),
        &SearchDomain::exclusion_region(),
        cfg,
    )
}

/// `p(z) = -2z^5 + 3z^3 + 40z^2 - 48` as a one-dimensional system.
#[derive(Clone, Copy, Debug, Default)]
pub struct Quintic;

impl System<1> for Quintic {
    fn id(&self) -> String {
        "p(z) = -2z^5 + 3z^3 + 40z^2 - 48".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 1]) -> Result<[S; 1], DomainError> {
        Ok([eval_p(x[0])])
    }
}

/// The unique root of `p` in `B1_BRACKET`.
pub fn certify_b1(cfg: &CampaignConfig) -> Result<(Campaign<1>, Interval), CertError> {
    let c = certify_scalar_root(&Quintic, Interval::new(B1_BRACKET.0, B1_BRACKET.1), cfg)?;
    match (c.is_complete(), c.zeros.as_slice()) {
        (true, [z]) => {
            let b1 = z.enclosure.0[0];
            Ok((c, b1))
        }
        _ => Err(CertError::NotUnique(format!(
            "p has {} certified zeros and {} unresolved boxes in the bracket",
            c.zeros.len(),
            c.unknown().len()
        ))),
    }
}

/// `x = s (a^3 - 8) / a^6`.
pub fn x_of_a(a: Interval) -> Result<Interval, DomainError> {
    let s = radical(a)?;
    let a3 = a.powi(3);
    (s * (a3 - Interval::point(8.0))).checked_div(&a3.sqr())
}

/// `y1 = b^3 + (s - t)^3`.
pub fn y1_of(a: Interval, b: Interval) -> Result<Interval, DomainError> {
    let d = radical(a)? - radical(b)?;
    Ok(b.powi(3) + d.powi(3))
}

/// `dx1/db = -3 (s - t)^2 b / t`.
pub fn dx1_db(a: Interval, b: Interval) -> Result<Interval, DomainError> {
    let t = radical(b)?;
    let d = radical(a)? - t;
    Ok(-(d.sqr() * b).scale(3.0).checked_div(&t)?)
}

/// Auxiliaries with `b` differentiated and `a` held fixed; `s` is computed
/// without derivatives, so `a = 1` is admissible.
fn aux_in_b(a: Interval, b: Interval) -> Result<KiteAux<Dual<Interval, 1>>, DomainError> {
    type D = Dual<Interval, 1>;
    let bd = D::variable(b, 0);
    KiteAux::from_parts(D::constant(a), bd, D::constant(radical(a)?), radical(bd)?)
}

/// `d(y y1)/db`.
pub fn d_yy1_db(a: Interval, b: Interval) -> Result<Interval, DomainError> {
    let k = aux_in_b(a, b)?;
    Ok((k.y * k.y1).partials[0])
}

/// `dg/db`.
pub fn dg_db(a: Interval, b: Interval) -> Result<Interval, DomainError> {
    Ok(g_of(&aux_in_b(a, b)?).partials[0])
}

/// Outcome of one sign claim.
#[derive(Clone, Debug, Serialize)]
pub struct SignClaim {
    pub name: &'static str,
    pub region: Vec<Interval>,
    pub sign: Sign,
    pub holds: bool,
    pub certified_boxes: usize,
    pub survivors: usize,
    pub budget_exceeded: bool,
}

impl SignClaim {
    fn from_campaign<const N: usize>(name: &'static str, c: &SignCampaign<N>) -> Self {
        SignClaim {
            name,
            region: c.region.0.to_vec(),
            sign: c.sign,
            holds: c.holds(),
            certified_boxes: c.certified.len(),
            survivors: c.survivors.len(),
            budget_exceeded: c.budget_exceeded,
        }
    }
}

/// The five sign facts:
///
/// - `x < 0` for `a` in `I_A`,
/// - `y1 > 0` on `I_A x I_B~`,
/// - `dx1/db <= 0` on `I_A x I_B~`,
/// - `d(y y1)/db > 0` for `b` in `(sqrt 2, b1 - 1e-6)`,
/// - `dg/db > 0` on `D` with `a >= 1 + 1e-6`.
pub fn sign_suite(cfg: &CampaignConfig) -> Result<Vec<SignClaim>, CertError> {
    let (_, b1) = certify_b1(cfg)?;
    let i_a = SearchDomain::i_a();
    let sqrt2 = consts::sqrt2().lo();
    let wide = IntervalBox::new([i_a, SearchDomain::i_b_tilde()]);
    let mut out = Vec::new();

    let inner_a = IntervalBox::from_bounds([(1.0 + X_MARGIN, 2.0 - X_MARGIN)]);
    let c = certify_sign(
        |x: &[Interval; 1]| x_of_a(x[0]),
        &inner_a,
        Sign::Negative,
        cfg,
    )?;
    out.push(SignClaim::from_campaign("x < 0", &c));

    let c = certify_sign(
        |x: &[Interval; 2]| y1_of(x[0], x[1]),
        &wide,
        Sign::Positive,
        cfg,
    )?;
    out.push(SignClaim::from_campaign("y1 > 0", &c));

    let c = certify_sign(
        |x: &[Interval; 2]| dx1_db(x[0], x[1]),
        &wide,
        Sign::NonPositive,
        cfg,
    )?;
    out.push(SignClaim::from_campaign("dx1/db <= 0", &c));

    let below_b1 = IntervalBox::from_bounds([(1.0, 2.0), (sqrt2, b1.lo() - B1_MARGIN)]);
    let c = certify_sign(
        |x: &[Interval; 2]| d_yy1_db(x[0], x[1]),
        &below_b1,
        Sign::Positive,
        cfg,
    )?;
    out.push(SignClaim::from_campaign("d(y y1)/db > 0", &c));

    let d = IntervalBox::new([Interval::new(1.0 + DG_DB_MARGIN, 2.0), SearchDomain::i_b()]);
    let c = certify_sign(
        |x: &[Interval; 2]| dg_db(x[0], x[1]),
        &d,
        Sign::Positive,
        cfg,
    )?;
    out.push(SignClaim::from_campaign("dg/db > 0", &c));

    Ok(out)
}
