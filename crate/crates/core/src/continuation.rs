//! The curve `b = b(a)` of symmetric kites, its stationary points, the
//! symmetric and asymmetric configurations at a given mass, and the
//! reference table of configurations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::autodiff::Dual;
use crate::bifurcation::BifurcationReport;
use crate::boxes::IntervalBox;
use crate::error::{CertError, DomainError};
use crate::interval::Interval;
use crate::kite::{
    eval_g, eval_lambda, eval_m, g_of, m_of, KiteAux, KiteVars, SearchDomain,
    SymmetricHeightsSystem,
};
use crate::krawczyk::{certify_near, newton_f64};
use crate::planar::{reflect, FullPlanarSystem, LAMBDA, X3, X4, Y3, Y4};
use crate::points::{certify_max_mass, Pitchfork};
use crate::prover::{certify_all_zeros, zeros_in_current_pool, CampaignConfig};
use crate::scalar::{radical, Scalar};
use crate::system::{ParamSystem, System};

/// Distance of admissible `a` from the endpoints of `(1, 2)`.
pub const A_MARGIN: f64 = 1e-9;

/// A certified point of the curve `g(a, b) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub a: Interval,
    pub b: Interval,
    /// Height of body 3, `sqrt(a^2 - 1)`.
    pub s: Interval,
    /// Height of body 4, `sqrt(b^2 - 1)`.
    pub t: Interval,
    pub m: Interval,
    pub lambda: Interval,
}

/// `g(a, .)` for a fixed `a`.
#[derive(Clone, Copy, Debug)]
pub struct CurveSlice {
    pub a: Interval,
}

impl System<1> for CurveSlice {
    fn id(&self) -> String {
        format!("g(a, b) at a = {}", self.a)
    }

    fn eval<S: Scalar>(&self, x: &[S; 1]) -> Result<[S; 1], DomainError> {
        Ok([eval_g(KiteVars::new(S::from_interval(self.a), x[0]))?])
    }
}

fn check_a(a: Interval) -> Result<(), CertError> {
    if a.lo() > 1.0 + A_MARGIN && a.hi() < 2.0 - A_MARGIN {
        Ok(())
    } else {
        Err(CertError::InvalidInput(format!(
            "a = {a} must lie in (1 + {A_MARGIN:e}, 2 - {A_MARGIN:e})"
        )))
    }
}

fn curve_config(cfg: &CampaignConfig) -> CampaignConfig {
    CampaignConfig {
        initial_grid: 8,
        min_box_width: 1e-13,
        ..cfg.clone()
    }
}

fn b_hat_here(a: Interval, cfg: &CampaignConfig) -> Result<CurvePoint, CertError> {
    check_a(a)?;
    let c = zeros_in_current_pool(&CurveSlice { a }, &IntervalBox([SearchDomain::i_b()]), cfg);
    if !c.is_complete() {
        return Err(CertError::BudgetExceeded(format!(
            "{} unresolved boxes for g({a}, b)",
            c.unknown().len()
        )));
    }
    match c.zeros.as_slice() {
        [] => Err(CertError::NoRoot(format!("g({a}, b) has no zero in I_B"))),
        [z] => {
            let b = z.enclosure.0[0];
            let v = KiteVars::new(a, b);
            let m = eval_m(v)?;
            Ok(CurvePoint {
                a,
                b,
                s: radical(a)?,
                t: radical(b)?,
                m,
                lambda: eval_lambda(v, m)?,
            })
        }
        zs => Err(CertError::NotUnique(format!(
            "g({a}, b) has {} zeros in I_B",
            zs.len()
        ))),
    }
}

/// The unique `b` with `g(a, b) = 0`, by an exhaustive scalar search over
/// `[sqrt 2, 5/2]`, with the mass and configuration constant attached.
pub fn solve_b_hat(a: Interval, cfg: &CampaignConfig) -> Result<CurvePoint, CertError> {
    cfg.validate()?;
    let c = curve_config(cfg);
    cfg.install(|| b_hat_here(a, &c))
}

/// Samples of the curve at `samples` equally spaced values of `a` in
/// `[a_min, a_max]`, each certified independently.
pub fn trace_curve(
    a_min: f64,
    a_max: f64,
    samples: usize,
    cfg: &CampaignConfig,
) -> Result<Vec<CurvePoint>, CertError> {
    cfg.validate()?;
    if samples < 2 || !(a_min < a_max) {
        return Err(CertError::InvalidInput(
            "trace needs a_min < a_max and at least two samples".into(),
        ));
    }
    check_a(Interval::new(a_min, a_max))?;
    let c = curve_config(cfg);
    let step = (a_max - a_min) / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples)
        .map(|i| {
            if i + 1 == samples {
                a_max
            } else {
                a_min + step * i as f64
            }
        })
        .collect();
    cfg.install(|| {
        grid.into_par_iter()
            .map(|a| b_hat_here(Interval::point(a), &c))
            .collect()
    })
}

/// `(dg/ds, g)` in height coordinates `(s, t)`. For `s > 0` its zeros are
/// the stationary points of `b = b(a)`, since `dg/ds = (s/a) dg/da`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CurveStationaryHeights;

impl System<2> for CurveStationaryHeights {
    fn id(&self) -> String {
        "curve-stationary heights (g_s, g)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let s = Dual::<S, 1>::variable(x[0], 0);
        let t = Dual::<S, 1>::constant(x[1]);
        let g = g_of(&KiteAux::from_heights(s, t)?);
        Ok([g.partials[0], g.value])
    }
}

/// `(m_s g_t - m_t g_s, g)` in height coordinates. Equal to
/// `(s t / (a b)) f1` off the axes, and smooth through `s = 0`, so a
/// campaign can cover the whole region without a margin at `a = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MassStationaryHeights;

impl System<2> for MassStationaryHeights {
    fn id(&self) -> String {
        "mass-stationary heights (m_s g_t - m_t g_s, g)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let [s, t] = Dual::<S, 2>::seed(x);
        let k = KiteAux::from_heights(s, t)?;
        let m = m_of(&k)?;
        let g = g_of(&k);
        Ok([
            m.partials[0] * g.partials[1] - m.partials[1] * g.partials[0],
            g.value,
        ])
    }
}

/// Heights domain covering `[1, 2] x [sqrt 2, 5/2]` with a margin, so that
/// zeros on `a = 1` are interior.
pub fn heights_domain() -> IntervalBox<2> {
    IntervalBox::from_bounds([(-1.0 / 64.0, 1.75), (0.96875, 2.3125)])
}

/// Heights `(s, t)` of the closure of `[1, 2] x [sqrt 2, 5/2]`.
pub fn heights_of_d() -> IntervalBox<2> {
    let s_max = Interval::point(3.0).sqrt().expect("positive");
    let t_max = Interval::point(5.25).sqrt().expect("positive");
    IntervalBox::new([
        Interval::new(0.0, s_max.hi()),
        Interval::new(1.0, t_max.hi()),
    ])
}

/// `(a, b)` from heights, `a = sqrt(1 + s^2)`.
pub fn shape_from_heights(h: &IntervalBox<2>) -> Result<(Interval, Interval), DomainError> {
    let a = (Interval::ONE + h.0[0].sqr()).sqrt()?;
    let b = (Interval::ONE + h.0[1].sqr()).sqrt()?;
    Ok((a, b))
}

/// A certified point in the `(a, b)` plane with its mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapePoint {
    pub a: Interval,
    pub b: Interval,
    pub m: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveExtrema {
    pub b_min: ShapePoint,
    pub b_max: ShapePoint,
    pub m_max: ShapePoint,
}

/// Certifies the minimum and maximum of `b` along the curve and the
/// maximum of the mass.
pub fn find_curve_extrema(cfg: &CampaignConfig) -> Result<CurveExtrema, CertError> {
    let c = certify_all_zeros(&CurveStationaryHeights, &heights_domain(), cfg)?;
    if !c.is_complete() {
        return Err(CertError::BudgetExceeded(format!(
            "{} unresolved boxes in the stationary-point campaign",
            c.unknown().len()
        )));
    }
    let inside = heights_of_d();
    let mut pts = Vec::new();
    for z in &c.zeros {
        if z.enclosure.0[0].lo() > 0.0 && inside.encloses(&z.enclosure) {
            let (a, b) = shape_from_heights(&z.enclosure)?;
            let m = eval_m(KiteVars::new(a, b))?;
            pts.push(ShapePoint { a, b, m });
        }
    }
    if pts.len() != 2 {
        return Err(CertError::NotUnique(format!(
            "expected two stationary points of the curve, found {}",
            pts.len()
        )));
    }
    pts.sort_by(|p, q| p.b.mid().total_cmp(&q.b.mid()));
    let max = certify_max_mass(cfg)?;
    Ok(CurveExtrema {
        b_min: pts[0],
        b_max: pts[1],
        m_max: ShapePoint {
            a: max.shape.0[0],
            b: max.shape.0[1],
            m: max.m0,
        },
    })
}

fn check_mass(m: f64) -> Result<(), CertError> {
    if m.is_finite() && m >= 0.0 {
        Ok(())
    } else {
        Err(CertError::InvalidInput(format!(
            "mass {m} must be finite and non-negative"
        )))
    }
}

/// All symmetric kites with `m3 = m4 = m`, sorted by the height of body 3.
///
/// At masses inside the certified enclosure of the maximal mass the fold
/// shape is returned as the single solution.
pub fn solve_symmetric_for_m(m: f64, cfg: &CampaignConfig) -> Result<Vec<CurvePoint>, CertError> {
    check_mass(m)?;
    let max = certify_max_mass(cfg)?;
    if max.m0.contains(m) {
        let (a, b) = (max.shape.0[0], max.shape.0[1]);
        return Ok(vec![CurvePoint {
            a,
            b,
            s: radical(a)?,
            t: radical(b)?,
            m: max.m0,
            lambda: max.lambda0,
        }]);
    }
    let mi = Interval::point(m);
    let c = certify_all_zeros(&SymmetricHeightsSystem { m: mi }, &heights_domain(), cfg)?;
    if !c.is_complete() {
        return Err(CertError::BudgetExceeded(format!(
            "{} unresolved boxes for the symmetric kites at m = {m}",
            c.unknown().len()
        )));
    }
    let inside = heights_of_d();
    let mut out = Vec::new();
    for z in &c.zeros {
        let h = z.enclosure;
        if h.intersect(&inside).is_none() {
            continue;
        }
        let (a, b) = shape_from_heights(&h)?;
        out.push(CurvePoint {
            a,
            b,
            s: h.0[0],
            t: h.0[1],
            m: mi,
            lambda: eval_lambda(KiteVars::new(a, b), mi)?,
        });
    }
    out.sort_by(|p, q| p.s.mid().total_cmp(&q.s.mid()));
    Ok(out)
}

/// The mass of bodies 3 and 4; infinite for the limit of massless
/// bodies 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MassValue {
    Finite(f64),
    Infinite,
}

impl fmt::Display for MassValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MassValue::Finite(m) => write!(f, "{m:?}"),
            MassValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for MassValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MassValue::Finite(m) => s.serialize_f64(*m),
            MassValue::Infinite => s.serialize_str("inf"),
        }
    }
}

/// One certified solution of the full planar system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchRow {
    pub m: MassValue,
    /// 1 and 2 for symmetric kites, 3 and up for mirror pairs of
    /// asymmetric ones, with odd ids on the `x3 < 0` side.
    pub branch: usize,
    pub q3: [Interval; 2],
    pub q4: [Interval; 2],
    pub lambda: Interval,
    pub symmetric: bool,
    /// Box in which this solution is the only one.
    pub search_box: IntervalBox<5>,
}

impl BranchRow {
    pub fn state(&self) -> [Interval; 5] {
        [self.q3[0], self.q3[1], self.q4[0], self.q4[1], self.lambda]
    }
}

/// Region searched for full planar solutions, over `(x3, y3, x4, y4, lambda)`.
pub fn planar_search_box() -> IntervalBox<5> {
    IntervalBox::from_bounds([(-1.5, 1.5), (0.0, 2.5), (-1.5, 1.5), (0.5, 3.0), (0.1, 3.0)])
}

/// Number of random starts of the floating multistart.
pub const MULTISTART_STARTS: usize = 4096;

const MULTISTART_SEED: u64 = 0x6b69_7465;

/// Offsets from the axis below which a floating solution is treated as
/// symmetric.
const SYMMETRIC_TOL: f64 = 1e-7;

/// Floating solutions closer than this are the same candidate.
const DUPLICATE_TOL: f64 = 1e-7;

/// Least-squares `lambda` for positions `x`; the residuals are affine in it.
fn lsq_lambda(sys: &FullPlanarSystem, x: &[f64; 5], mu: f64) -> Option<f64> {
    let mut x0 = *x;
    x0[LAMBDA] = 0.0;
    let mut x1 = *x;
    x1[LAMBDA] = 1.0;
    let e0 = sys.eval_mu(&x0, mu).ok()?;
    let e1 = sys.eval_mu(&x1, mu).ok()?;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..5 {
        let a = e1[i] - e0[i];
        num += a * e0[i];
        den += a * a;
    }
    (den > 0.0).then(|| -num / den)
}

fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

/// Body 3 strictly inside the triangle of bodies 1, 2 and 4.
fn is_concave_kite_like(x: &[f64; 5]) -> bool {
    let q1 = [-1.0, 0.0];
    let q2 = [1.0, 0.0];
    let q3 = [x[X3], x[Y3]];
    let q4 = [x[X4], x[Y4]];
    let o = [orient(q1, q2, q3), orient(q2, q4, q3), orient(q4, q1, q3)];
    o.iter().all(|v| *v > 0.0) || o.iter().all(|v| *v < 0.0)
}

fn in_box(b: &IntervalBox<5>, x: &[f64; 5]) -> bool {
    b.contains_point(x)
}

/// Symmetric candidates snap to the axis; asymmetric ones are reflected
/// to the `x3 < 0` side.
fn normalize(x: [f64; 5]) -> [f64; 5] {
    if x[X3].abs() < SYMMETRIC_TOL && x[X4].abs() < SYMMETRIC_TOL {
        let mut y = x;
        y[X3] = 0.0;
        y[X4] = 0.0;
        y
    } else if x[X3] > 0.0 {
        reflect(&x)
    } else {
        x
    }
}

fn is_axis_state(x: &[f64; 5]) -> bool {
    x[X3] == 0.0 && x[X4] == 0.0
}

fn float_candidates(
    sys: &FullPlanarSystem,
    mu: f64,
    starts: &[[f64; 4]],
    filter: bool,
) -> Vec<[f64; 5]> {
    let bx = planar_search_box();
    let mut found: Vec<[f64; 5]> = starts
        .par_iter()
        .filter_map(|p| {
            let mut x = [p[0], p[1], p[2], p[3], 0.0];
            x[LAMBDA] = lsq_lambda(sys, &x, mu)?;
            let y = newton_f64(&sys.at(Interval::point(mu)), &x, 60).ok()?;
            let ok = in_box(&bx, &y) && (!filter || is_concave_kite_like(&y));
            ok.then(|| normalize(y))
        })
        .collect();
    found.sort_by(|p, q| {
        p.iter()
            .zip(q)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut distinct: Vec<[f64; 5]> = Vec::new();
    for x in found {
        let near = |y: &[f64; 5]| {
            (0..5).all(|i| (x[i] - y[i]).abs() <= DUPLICATE_TOL * y[i].abs().max(1.0))
        };
        if !distinct.iter().any(near) {
            distinct.push(x);
        }
    }
    distinct
}

fn random_starts() -> Vec<[f64; 4]> {
    let bx = planar_search_box();
    let mut rng = ChaCha8Rng::seed_from_u64(MULTISTART_SEED);
    (0..MULTISTART_STARTS)
        .map(|_| std::array::from_fn(|i| rng.gen_range(bx.0[i].lo()..=bx.0[i].hi())))
        .collect()
}

struct Certified {
    search_box: IntervalBox<5>,
    enclosure: IntervalBox<5>,
    symmetric: bool,
}

fn certify_candidate(
    sys: &FullPlanarSystem,
    mu: Interval,
    x: &[f64; 5],
    refine_width: f64,
) -> Option<Certified> {
    let at = sys.at(mu);
    let (search_box, mut enclosure) = certify_near(&at, x, refine_width).ok()?;
    let symmetric = is_axis_state(x);
    if symmetric {
        // The search box is mapped onto itself by the reflection, so its
        // unique zero is fixed by it.
        if !(enclosure.0[X3].contains_zero() && enclosure.0[X4].contains_zero()) {
            return None;
        }
        enclosure.0[X3] = Interval::ZERO;
        enclosure.0[X4] = Interval::ZERO;
    }
    Some(Certified {
        search_box,
        enclosure,
        symmetric,
    })
}

fn reflect_box(b: &IntervalBox<5>) -> IntervalBox<5> {
    IntervalBox(reflect(&b.0))
}

fn solve_planar(
    sys: FullPlanarSystem,
    mu: f64,
    mass: MassValue,
    seeds: Option<&[[f64; 4]]>,
    cfg: &CampaignConfig,
) -> Result<Vec<BranchRow>, CertError> {
    cfg.validate()?;
    let (starts, filter) = match seeds {
        Some(s) => (s.to_vec(), false),
        None => (random_starts(), true),
    };
    let mu_i = Interval::point(mu);
    let certified: Vec<Certified> = cfg.install(|| {
        let cands = float_candidates(&sys, mu, &starts, filter);
        cands
            .par_iter()
            .filter_map(|x| certify_candidate(&sys, mu_i, x, cfg.refine_width))
            .collect()
    });

    let domain = planar_search_box();
    let mut kept: Vec<Certified> = Vec::new();
    for c in certified {
        if !domain.encloses(&c.enclosure) {
            continue;
        }
        let same = |k: &Certified| {
            k.search_box.encloses(&c.enclosure)
                || c.search_box.encloses(&k.enclosure)
                || reflect_box(&k.search_box).encloses(&c.enclosure)
        };
        if !kept.iter().any(same) {
            kept.push(c);
        }
    }
    for c in &kept {
        let r = sys.residuals(&c.enclosure.0, mu_i)?;
        if !r.iter().all(Interval::contains_zero) {
            return Err(CertError::NoRoot(format!(
                "certified state {:?} fails the residual check",
                c.enclosure
            )));
        }
    }

    let by_height = |p: &Certified, q: &Certified| {
        p.enclosure.0[Y3]
            .mid()
            .total_cmp(&q.enclosure.0[Y3].mid())
            .then(p.enclosure.0[Y4].mid().total_cmp(&q.enclosure.0[Y4].mid()))
    };
    let (mut sym, mut asym): (Vec<_>, Vec<_>) = kept.into_iter().partition(|c| c.symmetric);
    sym.sort_by(by_height);
    asym.sort_by(by_height);

    let row = |branch: usize, e: &IntervalBox<5>, b: &IntervalBox<5>, symmetric: bool| BranchRow {
        m: mass,
        branch,
        q3: [e.0[X3], e.0[Y3]],
        q4: [e.0[X4], e.0[Y4]],
        lambda: e.0[LAMBDA],
        symmetric,
        search_box: *b,
    };
    let mut rows: Vec<BranchRow> = sym
        .iter()
        .enumerate()
        .map(|(i, c)| row(i + 1, &c.enclosure, &c.search_box, true))
        .collect();
    let mut next = (sym.len() + 1).max(3);
    for c in &asym {
        rows.push(row(next, &c.enclosure, &c.search_box, false));
        rows.push(row(
            next + 1,
            &reflect_box(&c.enclosure),
            &reflect_box(&c.search_box),
            false,
        ));
        next += 2;
    }
    Ok(rows)
}

/// Certified solutions of the full planar system with `m1 = m2 = 1` and
/// `m3 = m4 = m`, both mirror images of each asymmetric one.
///
/// With `seeds`, Newton starts from the given `(x3, y3, x4, y4)`. Without,
/// a fixed-seed multistart over [`planar_search_box`] is used, keeping
/// configurations in which body 3 lies inside the triangle of the others.
/// Every returned solution is certified unique in its own box; the set is
/// not proven complete.
pub fn solve_full_planar_for_m(
    m: f64,
    seeds: Option<&[[f64; 4]]>,
    cfg: &CampaignConfig,
) -> Result<Vec<BranchRow>, CertError> {
    check_mass(m)?;
    solve_planar(
        FullPlanarSystem::STANDARD,
        m,
        MassValue::Finite(m),
        seeds,
        cfg,
    )
}

/// The limit `m -> inf`, solved as `m1 = m2 = 0`, `m3 = m4 = 1`.
pub fn solve_full_planar_heavy_limit(
    seeds: Option<&[[f64; 4]]>,
    cfg: &CampaignConfig,
) -> Result<Vec<BranchRow>, CertError> {
    solve_planar(
        FullPlanarSystem::SWAPPED,
        0.0,
        MassValue::Infinite,
        seeds,
        cfg,
    )
}

/// Full planar solutions near a symmetry-breaking point at one mass.
#[derive(Clone, Debug, Serialize)]
pub struct BranchCount {
    pub m: f64,
    pub symmetric: usize,
    pub asymmetric: usize,
    pub rows: Vec<BranchRow>,
}

impl BranchCount {
    pub fn total(&self) -> usize {
        self.symmetric + self.asymmetric
    }
}

/// Counts solutions at `m* - dm` and `m* + dm`. Seeds are the symmetric
/// kites at that mass and the pitchfork state displaced by `±eps v`, with
/// `eps^2 = |6 t2 dm / t4|` from the cubic normal form.
pub fn pitchfork_branch_counts(
    p: &Pitchfork,
    report: &BifurcationReport,
    dm: f64,
    cfg: &CampaignConfig,
) -> Result<(BranchCount, BranchCount), CertError> {
    let m_star = p.m.mid();
    let eps = (6.0 * report.t2.mid() * dm / report.t4.mid()).abs().sqrt();
    let v: Vec<f64> = report.v.iter().map(Interval::mid).collect();
    let base = p.state.mid();
    let count = |m: f64| -> Result<BranchCount, CertError> {
        let mut seeds: Vec<[f64; 4]> = solve_symmetric_for_m(m, cfg)?
            .iter()
            .map(|c| [0.0, c.s.mid(), 0.0, c.t.mid()])
            .collect();
        for sign in [-1.0, 1.0] {
            seeds.push(std::array::from_fn(|i| base[i] + sign * eps * v[i]));
        }
        let rows = solve_full_planar_for_m(m, Some(&seeds), cfg)?;
        let symmetric = rows.iter().filter(|r| r.symmetric).count();
        Ok(BranchCount {
            m,
            symmetric,
            asymmetric: rows.len() - symmetric,
            rows,
        })
    };
    Ok((count(m_star - dm)?, count(m_star + dm)?))
}
