//! One check per acceptance criterion. Each returns whether it holds and a
//! one-line summary of the evidence.

use std::time::Instant;

use kite_core::bifurcation::{BifurcationKind, ZeroEvidence};
use kite_core::claims::{certify_b1, certify_curve_exclusion, sign_suite};
use kite_core::continuation::{find_curve_extrema, pitchfork_branch_counts, solve_symmetric_for_m};
use kite_core::kite::{BifurcationCandidateSystem, MaxMassSystem, SearchDomain};
use kite_core::points::{certify_max_mass, certify_pitchfork, classify_fold, classify_pitchfork};
use kite_core::prover::{certify_all_zeros, CampaignConfig};
use kite_core::table::regenerate;
use kite_core::{CertError, Interval, IntervalBox};
use rayon::prelude::*;

use super::{
    certificate_json, normal_form_verdicts, planted_case, unit_square, Planted, ENCLOSURE_CASES,
};

pub const A0: f64 = 1.1733802447932033;
pub const B0: f64 = 2.0369863931895206;
pub const M0: f64 = 1.002713329037083;
pub const FOLD_T1: f64 = -227.0053559531752;
pub const FOLD_T3: f64 = -18222.7411964396;
pub const FOLD_JACOBIAN: [[f64; 2]; 2] = [
    [4.5172058916474534, -2.3231832749879904],
    [231.5225618448226, -119.07124810379195],
];
pub const PITCHFORK_MASS: f64 = 0.992299447752385;

#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
    /// Per-item lines printed under the criterion.
    pub rows: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            detail,
            rows: Vec::new(),
        }
    }
}

fn cfg() -> CampaignConfig {
    CampaignConfig::default()
}

fn err(e: CertError) -> Outcome {
    Outcome::new(false, format!("error: {e}"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return err(e.into()),
        }
    };
}

pub fn fold_point() -> Outcome {
    let max = tri!(certify_max_mass(&cfg()));
    let unique = max.campaign.zeros.len() == 1 && max.campaign.is_complete();
    let [a, b] = max.shape.0;
    let da = (a.mid() - A0).abs();
    let db = (b.mid() - B0).abs();
    let dm = (max.m0.mid() - M0).abs();
    let width = a.width().max(b.width()).max(max.m0.width());
    Outcome::new(
        unique && da <= 1e-10 && db <= 1e-10 && dm <= 1e-10 && width <= 1e-9,
        format!(
            "{} zero(s) in D0, |da| = {da:.1e}, |db| = {db:.1e}, |dm| = {dm:.1e}, width = {width:.1e}",
            max.campaign.zeros.len()
        ),
    )
}

pub fn candidate_uniqueness() -> Outcome {
    let start = Instant::now();
    let c = tri!(certify_all_zeros(
        &BifurcationCandidateSystem,
        &SearchDomain::d(),
        &cfg()
    ));
    let secs = start.elapsed().as_secs_f64();
    let equilateral = SearchDomain::equilateral();
    let holds =
        |p: &IntervalBox<2>| c.zeros.iter().filter(|z| z.enclosure.encloses(p)).count() == 1;
    let pass = c.zeros.len() == 2
        && c.is_complete()
        && holds(&equilateral)
        && holds(&IntervalBox::point([A0, B0]))
        && secs <= 600.0;
    Outcome::new(
        pass,
        format!(
            "{} unique zeros, {} unresolved boxes, {} boxes, {secs:.1} s",
            c.zeros.len(),
            c.unknown().len(),
            c.certificates.len()
        ),
    )
}

pub fn exclusion() -> Outcome {
    let c = tri!(certify_curve_exclusion(&cfg()));
    Outcome::new(
        c.holds(),
        format!(
            "{} boxes certified, {} survivors",
            c.certified.len(),
            c.survivors.len()
        ),
    )
}

pub fn scalar_root() -> Outcome {
    let (_, b1) = tri!(certify_b1(&cfg()));
    Outcome::new(
        b1.lo() > 2.75 && b1.hi() < 2.76 && b1.width() <= 1e-12,
        format!(
            "b1 in [{:?}, {:?}], width {:.1e}",
            b1.lo(),
            b1.hi(),
            b1.width()
        ),
    )
}

pub fn sign_facts() -> Outcome {
    let claims = tri!(sign_suite(&cfg()));
    let mut o = Outcome::new(
        claims.len() == 5 && claims.iter().all(|c| c.holds),
        format!(
            "{} of {} sign claims hold",
            claims.iter().filter(|c| c.holds).count(),
            claims.len()
        ),
    );
    o.rows = claims
        .iter()
        .map(|c| {
            format!(
                "{}: {} boxes, {} survivors",
                c.name, c.certified_boxes, c.survivors
            )
        })
        .collect();
    o
}

pub fn fold_classification() -> Outcome {
    let max = tri!(certify_max_mass(&cfg()));
    let r = tri!(classify_fold(&max));
    let t1_ok = r.t1.contains(FOLD_T1) && !r.t1.contains_zero();
    let t3_ok = r.t3.contains(FOLD_T3) && !r.t3.contains_zero();
    let dj = (0..2)
        .flat_map(|i| (0..2).map(move |k| (i, k)))
        .map(|(i, k)| {
            (r.jacobian[i][k].mid() - FOLD_JACOBIAN[i][k]).abs()
                / FOLD_JACOBIAN[i][k].abs().max(1.0)
        })
        .fold(0.0, f64::max);
    Outcome::new(
        t1_ok && t3_ok && r.kind == BifurcationKind::Fold && dj <= 1e-10,
        format!(
            "t1 = [{:?}, {:?}], t3 = [{:?}, {:?}], kind {:?}, relative Jacobian deviation {dj:.1e}",
            r.t1.lo(),
            r.t1.hi(),
            r.t3.lo(),
            r.t3.hi(),
            r.kind
        ),
    )
}

pub fn count_law() -> Outcome {
    let max = tri!(certify_max_mass(&cfg()));
    let mut counts = Vec::new();
    for m in [0.4, max.m0.mid(), 1.5] {
        counts.push(tri!(solve_symmetric_for_m(m, &cfg())).len());
    }
    let massless = tri!(solve_symmetric_for_m(0.0, &cfg()));
    let degenerate = massless.len() == 2
        && massless
            .iter()
            .zip([1.0, 2.0])
            .all(|(p, a)| (p.a.mid() - a).abs() <= 1e-10 && (p.b.mid() - 2.0).abs() <= 1e-10);
    let shapes: Vec<String> = massless
        .iter()
        .map(|p| format!("({:?}, {:?})", p.a.mid(), p.b.mid()))
        .collect();
    Outcome::new(
        counts == [2, 1, 0] && degenerate,
        format!(
            "counts {counts:?} at m = 0.4, m0, 1.5; m = 0 gives {}",
            shapes.join(", ")
        ),
    )
}

pub fn table_regression() -> Outcome {
    let rows = tri!(regenerate(&cfg()));
    let failing: Vec<&str> = rows
        .iter()
        .filter(|r| r.deviation() > 1e-8)
        .map(|r| r.label)
        .collect();
    let mut o = Outcome::new(
        failing.is_empty(),
        format!(
            "{} of {} rows within 1e-8; off: {failing:?}",
            rows.len() - failing.len(),
            rows.len()
        ),
    );
    o.rows = rows
        .iter()
        .map(|r| {
            let mark = if r.deviation() <= 1e-8 { "ok " } else { "OFF" };
            format!(
                "{mark} {} at m = {}: deviation {:.1e}",
                r.label,
                r.m,
                r.deviation()
            )
        })
        .collect();
    o
}

pub fn pitchfork() -> Outcome {
    let p = tri!(certify_pitchfork(cfg().refine_width));
    let r = tri!(classify_pitchfork(&p));
    let structural = r.t1_zero == Some(ZeroEvidence::Structural)
        && r.symmetry.as_ref().is_some_and(|s| s.holds());
    let (below, above) = tri!(pitchfork_branch_counts(&p, &r, 1e-3, &cfg()));
    let kind_ok = matches!(
        r.kind,
        BifurcationKind::PitchforkSuper | BifurcationKind::PitchforkSub
    );
    let pass = p.m.contains(PITCHFORK_MASS)
        && kind_ok
        && structural
        && !r.t2.contains_zero()
        && !r.t4.contains_zero()
        && below.total().min(above.total()) == 2
        && below.total().max(above.total()) == 4;
    Outcome::new(
        pass,
        format!(
            "m* = [{:?}, {:?}], kind {:?}, t1 {:?}, t2 = [{:.6e}, {:.6e}], t4 = [{:.6e}, {:.6e}], solutions {} below and {} above",
            p.m.lo(),
            p.m.hi(),
            r.kind,
            r.t1_zero,
            r.t2.lo(),
            r.t2.hi(),
            r.t4.lo(),
            r.t4.hi(),
            below.total(),
            above.total()
        ),
    )
}

pub fn curve_extrema() -> Outcome {
    let e = tri!(find_curve_extrema(&cfg()));
    let dev = |x: Interval, want: f64| (x.mid() - want).abs();
    let devs = [
        dev(e.b_min.a, 1.0068269818055548),
        dev(e.b_min.b, 1.6641309857549297),
        dev(e.b_max.a, 1.5397067078739939865),
        dev(e.b_max.b, 2.4488397355312008965),
        dev(e.m_max.a, 1.1733802447932032924),
        dev(e.m_max.m, 1.00271332903708271708),
    ];
    let worst = devs.iter().cloned().fold(0.0, f64::max);
    Outcome::new(worst <= 1e-9, format!("largest deviation {worst:.1e}"))
}

/// Seeds used by the acceptance run; the proptest suites draw their own.
fn seeds(stream: u64, n: u64) -> Vec<u64> {
    (0..n)
        .map(|i| stream.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ i)
        .collect()
}

pub fn property_suites() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for (k, (name, case)) in ENCLOSURE_CASES.iter().enumerate() {
        let failures: Vec<String> = seeds(k as u64 + 1, 1000)
            .into_par_iter()
            .filter_map(|s| case(s).err())
            .collect();
        pass &= failures.is_empty();
        rows.push(format!(
            "enclosure of {name}: {} boxes x {} points, {} failures",
            1000,
            super::POINTS,
            failures.len()
        ));
        rows.extend(failures.into_iter().take(3));
    }

    let lost: Vec<String> = seeds(100, 1000)
        .into_par_iter()
        .filter_map(|s| planted_case(s).err())
        .collect();
    pass &= lost.is_empty();
    rows.push(format!(
        "planted roots: 1000 systems, {} failures",
        lost.len()
    ));
    rows.extend(lost.into_iter().take(3));

    for (nf, want, got) in normal_form_verdicts() {
        pass &= want == got;
        rows.push(format!("normal form {nf:?}: {got:?}"));
    }

    let planted = Planted::from_seed(11);
    let mut identical = true;
    let reference = certificate_json(&planted, &unit_square(), 16, 1);
    for w in [2, 3, 8] {
        identical &= reference == certificate_json(&planted, &unit_square(), 16, w);
    }
    let reference = certificate_json(&MaxMassSystem, &SearchDomain::d0(), 100, 1);
    for w in [2, 5] {
        identical &= reference == certificate_json(&MaxMassSystem, &SearchDomain::d0(), 100, w);
    }
    let reference = certificate_json(&BifurcationCandidateSystem, &SearchDomain::d(), 20, 1);
    identical &=
        reference == certificate_json(&BifurcationCandidateSystem, &SearchDomain::d(), 20, 4);
    pass &= identical;
    rows.push(format!(
        "certificates byte-identical across worker counts: {identical}"
    ));

    let mut o = Outcome::new(
        pass,
        "enclosure, planted roots, normal forms, determinism".into(),
    );
    o.rows = rows;
    o
}

pub type Check = fn() -> Outcome;

/// Criteria in order, with names.
pub const CRITERIA: [(&str, Check); 11] = [
    ("fold point", fold_point),
    ("uniqueness of bifurcation candidates", candidate_uniqueness),
    ("exclusion", exclusion),
    ("scalar root b1", scalar_root),
    ("sign suite", sign_facts),
    ("fold classification", fold_classification),
    ("count law", count_law),
    ("table regression", table_regression),
    ("pitchfork", pitchfork),
    ("curve extrema", curve_extrema),
    ("property suites", property_suites),
];
