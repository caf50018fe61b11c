//! Drivers shared by the property suites and the acceptance run.

#![allow(dead_code)]

use kite_core::autodiff::Dual;
use kite_core::bifurcation::{classify, BifurcationKind, NullSpace};
use kite_core::certificate::CertificateFile;
use kite_core::continuation::CurveStationaryHeights;
use kite_core::kite::{
    eval_f1, eval_f2_tilde, eval_g, eval_g1_g2, eval_h1_h2, eval_lambda, eval_m, eval_p, KiteVars,
};
use kite_core::planar::FullPlanarSystem;
use kite_core::points::SymmetryBreakingSystem;
use kite_core::prover::{certify_all_zeros, Campaign, CampaignConfig, Verdict};
use kite_core::{DomainError, Interval, IntervalBox, ParamSystem, Scalar, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod criteria;

/// Sample points per box in the enclosure checks.
pub const POINTS: usize = 1000;

pub fn point_in(x: &Interval, t: f64) -> f64 {
    let p = x.lo() + t * (x.hi() - x.lo());
    p.clamp(x.lo(), x.hi())
}

/// Random sub-box of `region` with log-uniform widths.
fn random_box<const N: usize>(rng: &mut ChaCha8Rng, region: &[(f64, f64); N]) -> [Interval; N] {
    std::array::from_fn(|i| {
        let (lo, hi) = region[i];
        let w = (hi - lo) * 10f64.powf(rng.gen_range(-8.0..-0.5));
        let a = rng.gen_range(lo..hi - w);
        Interval::new(a, a + w)
    })
}

/// Isotonicity of the interval extension and agreement of the point
/// enclosure with the floating value, over `POINTS` points of one box.
fn check_function<const N: usize, const M: usize>(
    seed: u64,
    region: &[(f64, f64); N],
    fi: impl Fn(&[Interval; N]) -> Result<[Interval; M], DomainError>,
    ff: impl Fn(&[f64; N]) -> Result<[f64; M], DomainError>,
) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = random_box(&mut rng, region);
    let Ok(whole) = fi(&bx) else { return Ok(()) };
    for _ in 0..POINTS {
        let p: [f64; N] = std::array::from_fn(|i| point_in(&bx[i], rng.gen_range(0.0..=1.0)));
        let Ok(at_point) = fi(&p.map(Interval::point)) else {
            continue;
        };
        for k in 0..M {
            if !whole[k].encloses(&at_point[k]) {
                return Err(format!(
                    "component {k} at {p:?}: {:?} not in {:?}",
                    at_point[k], whole[k]
                ));
            }
        }
        if let Ok(v) = ff(&p) {
            for k in 0..M {
                let tol = 1e-9 * (1.0 + v[k].abs()) + at_point[k].width();
                if !at_point[k].inflate(tol).contains(v[k]) {
                    return Err(format!(
                        "component {k} at {p:?}: float {} far from {:?}",
                        v[k], at_point[k]
                    ));
                }
            }
        }
    }
    Ok(())
}

const SHAPES: [(f64, f64); 2] = [(1.0, 2.0), (1.414_213_562_373_096, 3.863_703_305_156_273)];
const SHAPES_OFF_EDGE: [(f64, f64); 2] = [(1.0 + 1e-6, 2.0), SHAPES[1]];

fn g_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &SHAPES,
        |x| Ok([eval_g(KiteVars::new(x[0], x[1]))?]),
        |x| Ok([eval_g(KiteVars::new(x[0], x[1]))?]),
    )
}

fn mass_case(seed: u64) -> Result<(), String> {
    fn f<S: Scalar>(x: &[S; 2]) -> Result<[S; 3], DomainError> {
        let v = KiteVars::new(x[0], x[1]);
        let (h1, h2) = eval_h1_h2(v)?;
        Ok([h1, h2, eval_m(v)?])
    }
    check_function(seed, &SHAPES, f, f)
}

fn reduced_case(seed: u64) -> Result<(), String> {
    fn f<S: Scalar>(x: &[S; 3]) -> Result<[S; 3], DomainError> {
        let v = KiteVars::new(x[0], x[1]);
        let (g1, g2) = eval_g1_g2(v, x[2])?;
        Ok([g1, g2, eval_lambda(v, x[2])?])
    }
    check_function(seed, &[SHAPES[0], SHAPES[1], (0.0, 3.0)], f, f)
}

fn f1_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &SHAPES_OFF_EDGE,
        |x| Ok([eval_f1(KiteVars::new(x[0], x[1]))?]),
        |x| Ok([eval_f1(KiteVars::new(x[0], x[1]))?]),
    )
}

fn f2_tilde_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &SHAPES,
        |x| Ok([eval_f2_tilde(KiteVars::new(x[0], x[1]))?]),
        |x| Ok([eval_f2_tilde(KiteVars::new(x[0], x[1]))?]),
    )
}

fn quintic_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &[(0.0, 4.0)],
        |x| Ok([eval_p(x[0])]),
        |x| Ok([eval_p(x[0])]),
    )
}

fn gradient_case(seed: u64) -> Result<(), String> {
    fn f<S: Scalar>(x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let [a, b] = Dual::<S, 2>::seed(x);
        Ok(eval_g(KiteVars::new(a, b))?.partials)
    }
    check_function(seed, &SHAPES_OFF_EDGE, f, f)
}

fn curve_stationary_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &[(-0.015, 1.75), (0.97, 2.3)],
        |x| CurveStationaryHeights.eval(x),
        |x| CurveStationaryHeights.eval(x),
    )
}

fn full_planar_case(seed: u64) -> Result<(), String> {
    fn f<S: Scalar>(x: &[S; 6]) -> Result<[S; 8], DomainError> {
        FullPlanarSystem::STANDARD.residuals(&[x[0], x[1], x[2], x[3], x[4]], x[5])
    }
    let region = [
        (-1.5, 1.5),
        (0.0, 2.5),
        (-1.5, 1.5),
        (0.5, 3.0),
        (0.1, 3.0),
        (0.0, 3.0),
    ];
    check_function(seed, &region, f, f)
}

fn swapped_planar_case(seed: u64) -> Result<(), String> {
    fn f<S: Scalar>(x: &[S; 6]) -> Result<[S; 5], DomainError> {
        FullPlanarSystem::SWAPPED.eval_mu(&[x[0], x[1], x[2], x[3], x[4]], x[5])
    }
    let region = [
        (-1.5, 1.5),
        (0.0, 2.5),
        (-1.5, 1.5),
        (0.5, 3.0),
        (0.1, 3.0),
        (0.0, 1.0),
    ];
    check_function(seed, &region, f, f)
}

fn symmetry_breaking_case(seed: u64) -> Result<(), String> {
    check_function(
        seed,
        &[(0.3, 0.8), (1.4, 2.0), (0.8, 1.3), (0.5, 1.5)],
        |x| SymmetryBreakingSystem.eval(x),
        |x| SymmetryBreakingSystem.eval(x),
    )
}

pub type Case = fn(u64) -> Result<(), String>;

/// Every system function with the region it is sampled on.
pub const ENCLOSURE_CASES: [(&str, Case); 11] = [
    ("g", g_case),
    ("h1, h2, m", mass_case),
    ("g1, g2, lambda", reduced_case),
    ("f1", f1_case),
    ("f2 numerator", f2_tilde_case),
    ("quintic p", quintic_case),
    ("gradient of g", gradient_case),
    ("curve stationary system", curve_stationary_case),
    ("full planar residuals", full_planar_case),
    ("swapped full planar system", swapped_planar_case),
    ("symmetry-breaking system", symmetry_breaking_case),
];

/// `A (f1, f2)` with `f1 = (x - px)(x - qx)` and
/// `f2 = y - c0 - c1 x + beta f1^2`. The zeros are exactly
/// `(px, c0 + c1 px)` and `(qx, c0 + c1 qx)`; all data are dyadic so both
/// roots are representable.
#[derive(Clone, Debug)]
pub struct Planted {
    pub px: f64,
    pub qx: f64,
    pub c0: f64,
    pub c1: f64,
    pub beta: f64,
    pub mix: [[f64; 2]; 2],
}

impl Planted {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let px = rng.gen_range(-900..=900) as f64 / 1024.0;
        let mut qx = px;
        while (qx - px).abs() < 0.05 {
            qx = rng.gen_range(-900..=900) as f64 / 1024.0;
        }
        let mix = loop {
            let m: [[f64; 2]; 2] =
                std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0)));
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() > 0.1 {
                break m;
            }
        };
        Planted {
            px,
            qx,
            c0: rng.gen_range(-400..=400) as f64 / 1024.0,
            c1: rng.gen_range(-32..=32) as f64 / 64.0,
            beta: rng.gen_range(-3.0..3.0),
            mix,
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::random(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn roots(&self) -> [[f64; 2]; 2] {
        [
            [self.px, self.c0 + self.c1 * self.px],
            [self.qx, self.c0 + self.c1 * self.qx],
        ]
    }
}

impl System<2> for Planted {
    fn id(&self) -> String {
        format!("planted {self:?}")
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        let c = S::from_f64;
        let f1 = (x[0] - c(self.px)) * (x[0] - c(self.qx));
        let f2 = x[1] - c(self.c0) - c(self.c1) * x[0] + c(self.beta) * f1.sqr();
        Ok([
            c(self.mix[0][0]) * f1 + c(self.mix[0][1]) * f2,
            c(self.mix[1][0]) * f1 + c(self.mix[1][1]) * f2,
        ])
    }
}

pub fn unit_square() -> IntervalBox<2> {
    IntervalBox::from_bounds([(-1.0, 1.0), (-1.0, 1.0)])
}

pub fn planted_config() -> CampaignConfig {
    CampaignConfig::default()
        .with_grid(4)
        .with_min_width(1e-6)
        .with_workers(1)
}

/// Roots that lie in a NoZero leaf, or in no leaf that could hold them.
pub fn lost_roots(c: &Campaign<2>, roots: &[[f64; 2]]) -> usize {
    roots
        .iter()
        .filter(|r| {
            let in_no_zero = c
                .certificates
                .iter()
                .any(|l| l.verdict == Verdict::NoZero && l.bx.contains_point(r));
            let held = c.zeros.iter().any(|z| z.enclosure.contains_point(r))
                || c.unknown().iter().any(|l| l.bx.contains_point(r));
            in_no_zero || !held
        })
        .count()
}

/// Runs the campaign on one planted system and checks that no root is
/// lost and every certified zero holds exactly one planted root.
pub fn planted_case(seed: u64) -> Result<(), String> {
    let sys = Planted::from_seed(seed);
    let roots = sys.roots();
    let c =
        certify_all_zeros(&sys, &unit_square(), &planted_config()).map_err(|e| e.to_string())?;
    let lost = lost_roots(&c, &roots);
    if lost > 0 {
        return Err(format!("{lost} roots lost for {sys:?}"));
    }
    for z in &c.zeros {
        let inside = roots
            .iter()
            .filter(|r| z.enclosure.contains_point(r))
            .count();
        if inside != 1 {
            return Err(format!(
                "enclosure {:?} holds {inside} roots of {sys:?}",
                z.enclosure
            ));
        }
    }
    if !c.is_complete() || c.zeros.len() != 2 {
        return Err(format!(
            "{} zeros, complete = {} for {sys:?}",
            c.zeros.len(),
            c.is_complete()
        ));
    }
    Ok(())
}

pub fn certificate_json<F: System<2>>(
    f: &F,
    domain: &IntervalBox<2>,
    grid: usize,
    workers: usize,
) -> String {
    let cfg = CampaignConfig::default()
        .with_grid(grid)
        .with_workers(workers);
    CertificateFile::from_campaign(&certify_all_zeros(f, domain, &cfg).unwrap()).to_json()
}

/// Scalar normal forms `f(x, mu)` with a bifurcation at the origin.
#[derive(Clone, Copy, Debug)]
pub enum NormalForm {
    Fold,
    Transcritical,
    PitchforkSuper,
    PitchforkSub,
}

impl ParamSystem<1> for NormalForm {
    fn id(&self) -> String {
        format!("{self:?} normal form")
    }

    fn eval_mu<S: Scalar>(&self, x: &[S; 1], mu: S) -> Result<[S; 1], DomainError> {
        let x = x[0];
        Ok([match self {
            NormalForm::Fold => mu - x.sqr(),
            NormalForm::Transcritical => mu * x - x.sqr(),
            NormalForm::PitchforkSuper => mu * x - x.powi(3),
            NormalForm::PitchforkSub => mu * x + x.powi(3),
        }])
    }
}

/// Each normal form with the verdict it must receive.
pub fn normal_form_verdicts() -> Vec<(NormalForm, BifurcationKind, BifurcationKind)> {
    use BifurcationKind as K;
    [
        (NormalForm::Fold, K::Fold),
        (NormalForm::Transcritical, K::Transcritical),
        (NormalForm::PitchforkSuper, K::PitchforkSuper),
        (NormalForm::PitchforkSub, K::PitchforkSub),
    ]
    .into_iter()
    .map(|(nf, want)| {
        let got = classify(
            &nf,
            &IntervalBox::point([0.0]),
            Interval::ZERO,
            NullSpace::Numeric,
            None,
        )
        .map(|r| r.kind)
        .unwrap_or(K::Inconclusive);
        (nf, want, got)
    })
    .collect()
}
