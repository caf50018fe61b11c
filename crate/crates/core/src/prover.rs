//! Branch-and-prune over a box.
//!
//! The domain is cut into a uniform grid; every cell is processed
//! independently by a depth-first loop that tries plain interval
//! exclusion, then the Krawczyk test, then bisects. Cells run in parallel
//! and the merged output is sorted, so the result does not depend on the
//! number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxes::IntervalBox;
use crate::error::{CertError, DomainError};
use crate::interval::Interval;
use crate::krawczyk::{krawczyk_inflated, krawczyk_step, refine, KrawczykVerdict};
use crate::system::{eval_interval, System};

/// Inflation applied to leaves that could be neither excluded nor
/// certified, so that zeros on their faces are caught.
const LEAF_INFLATION: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// Maximum bisection depth below a grid cell.
    pub max_depth: u32,
    /// Boxes no wider than this are not bisected further.
    pub min_box_width: f64,
    /// Cells per dimension of the initial grid.
    pub initial_grid: usize,
    /// Worker threads; 0 uses all available cores. Not serialized, since
    /// it does not affect results.
    #[serde(skip, default)]
    pub worker_count: usize,
    /// Target width for refined unique-zero enclosures.
    pub refine_width: f64,
    /// Boxes processed per grid cell before the campaign gives up on it.
    pub max_boxes_per_cell: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            max_depth: 64,
            min_box_width: 1e-8,
            initial_grid: 100,
            worker_count: 0,
            refine_width: 1e-12,
            max_boxes_per_cell: 2_000_000,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CertError> {
        if self.max_depth < 1 {
            return Err(CertError::InvalidInput(
                "max_depth must be at least 1".into(),
            ));
        }
        if !(self.min_box_width > 0.0) {
            return Err(CertError::InvalidInput(
                "min_box_width must be positive".into(),
            ));
        }
        if self.initial_grid < 1 {
            return Err(CertError::InvalidInput(
                "initial_grid must be at least 1".into(),
            ));
        }
        if !(self.refine_width > 0.0) {
            return Err(CertError::InvalidInput(
                "refine_width must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.initial_grid = n;
        self
    }

    pub fn with_workers(mut self, n: usize) -> Self {
        self.worker_count = n;
        self
    }

    pub fn with_min_width(mut self, w: f64) -> Self {
        self.min_box_width = w;
        self
    }

    /// Runs `op` on a pool with the configured number of workers.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if self.worker_count > 0 {
            builder = builder.num_threads(self.worker_count);
        }
        match builder.build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    UniqueZero,
    NoZero,
    Unknown,
}

/// Why a box received its verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Component `component` of the plain enclosure excludes zero.
    Plain { component: usize, value: Interval },
    /// The Krawczyk operator at `x0` over `search_box`; for unique zeros
    /// `search_box` may be an inflation of the certificate box.
    Krawczyk {
        search_box: Vec<Interval>,
        k_box: Vec<Interval>,
        x0: Vec<f64>,
    },
    /// Evaluation failed at the minimum width.
    SingularResidue { error: String },
    /// Neither excluded nor certified at the minimum width.
    Unresolved,
    /// Not processed because the cell ran out of budget.
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate<const N: usize> {
    #[serde(rename = "box")]
    pub bx: IntervalBox<N>,
    pub verdict: Verdict,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enclosure: Option<IntervalBox<N>>,
}

/// A unique zero found by a campaign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedZero<const N: usize> {
    /// Box in which the zero is unique.
    pub search_box: IntervalBox<N>,
    /// Refined enclosure of the zero.
    pub enclosure: IntervalBox<N>,
}

/// Outcome of a full campaign.
#[derive(Clone, Debug, PartialEq)]
pub struct Campaign<const N: usize> {
    pub system: String,
    pub domain: IntervalBox<N>,
    pub config: CampaignConfig,
    /// Every leaf box, sorted canonically.
    pub certificates: Vec<Certificate<N>>,
    /// Distinct unique zeros, sorted canonically by enclosure.
    pub zeros: Vec<CertifiedZero<N>>,
    pub budget_exceeded: bool,
}

impl<const N: usize> Campaign<N> {
    pub fn unknown(&self) -> Vec<&Certificate<N>> {
        self.certificates
            .iter()
            .filter(|c| c.verdict == Verdict::Unknown)
            .collect()
    }

    pub fn singular_residue(&self) -> Vec<&Certificate<N>> {
        self.certificates
            .iter()
            .filter(|c| matches!(c.evidence, Evidence::SingularResidue { .. }))
            .collect()
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.certificates.iter().filter(|c| c.verdict == v).count()
    }

    /// All zeros are accounted for: no unknown leaves and no budget cut.
    pub fn is_complete(&self) -> bool {
        !self.budget_exceeded && self.unknown().is_empty()
    }
}

enum Step<const N: usize> {
    Leaf(Certificate<N>),
    Split,
}

/// Decision for one box, without bisection.
fn examine<const N: usize, F: System<N>>(
    f: &F,
    bx: &IntervalBox<N>,
    cfg: &CampaignConfig,
    at_floor: bool,
) -> Step<N> {
    let mut domain_error: Option<DomainError> = None;
    match eval_interval(f, &bx.0) {
        Ok(y) => {
            if let Some((i, v)) = y.iter().enumerate().find(|(_, v)| !v.contains_zero()) {
                return Step::Leaf(Certificate {
                    bx: *bx,
                    verdict: Verdict::NoZero,
                    evidence: Evidence::Plain {
                        component: i,
                        value: *v,
                    },
                    enclosure: None,
                });
            }
        }
        Err(e) => domain_error = Some(e),
    }
    if domain_error.is_none() {
        let r = krawczyk_step(f, bx);
        match (r.verdict, r.k_box) {
            (KrawczykVerdict::NoZero, Some(k)) => {
                return Step::Leaf(Certificate {
                    bx: *bx,
                    verdict: Verdict::NoZero,
                    evidence: Evidence::Krawczyk {
                        search_box: bx.0.to_vec(),
                        k_box: k.0.to_vec(),
                        x0: r.x0.to_vec(),
                    },
                    enclosure: None,
                })
            }
            (KrawczykVerdict::UniqueZero, Some(k)) => {
                let start = bx.intersect(&k).unwrap_or(k);
                let enc = refine(f, &start, cfg.refine_width);
                return Step::Leaf(Certificate {
                    bx: *bx,
                    verdict: Verdict::UniqueZero,
                    evidence: Evidence::Krawczyk {
                        search_box: bx.0.to_vec(),
                        k_box: k.0.to_vec(),
                        x0: r.x0.to_vec(),
                    },
                    enclosure: Some(enc),
                });
            }
            _ => {}
        }
    }
    if !at_floor {
        return Step::Split;
    }
    if let Some(e) = domain_error {
        return Step::Leaf(Certificate {
            bx: *bx,
            verdict: Verdict::Unknown,
            evidence: Evidence::SingularResidue {
                error: e.to_string(),
            },
            enclosure: None,
        });
    }
    let (big, r) = krawczyk_inflated(f, bx, LEAF_INFLATION);
    if let (KrawczykVerdict::UniqueZero, Some(k)) = (r.verdict, r.k_box) {
        let start = big.intersect(&k).unwrap_or(k);
        let enc = refine(f, &start, cfg.refine_width);
        return Step::Leaf(Certificate {
            bx: *bx,
            verdict: Verdict::UniqueZero,
            evidence: Evidence::Krawczyk {
                search_box: big.0.to_vec(),
                k_box: k.0.to_vec(),
                x0: r.x0.to_vec(),
            },
            enclosure: Some(enc),
        });
    }
    Step::Leaf(Certificate {
        bx: *bx,
        verdict: Verdict::Unknown,
        evidence: Evidence::Unresolved,
        enclosure: None,
    })
}

/// Depth-first processing of one grid cell. Returns the leaves and
/// whether the budget ran out.
fn process_cell<const N: usize, F: System<N>>(
    f: &F,
    cell: IntervalBox<N>,
    cfg: &CampaignConfig,
) -> (Vec<Certificate<N>>, bool) {
    let mut out = Vec::new();
    let mut stack = vec![(cell, 0u32)];
    let mut processed = 0usize;
    while let Some((bx, depth)) = stack.pop() {
        if processed >= cfg.max_boxes_per_cell {
            out.push(Certificate {
                bx,
                verdict: Verdict::Unknown,
                evidence: Evidence::Budget,
                enclosure: None,
            });
            for (b, _) in stack.drain(..) {
                out.push(Certificate {
                    bx: b,
                    verdict: Verdict::Unknown,
                    evidence: Evidence::Budget,
                    enclosure: None,
                });
            }
            return (out, true);
        }
        processed += 1;
        let at_floor = bx.max_width() <= cfg.min_box_width || depth >= cfg.max_depth;
        match examine(f, &bx, cfg, at_floor) {
            Step::Leaf(c) => out.push(c),
            Step::Split => {
                let (l, r) = bx.bisect();
                // Push right first so the left child is processed first.
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
        }
    }
    (out, false)
}

/// Search box of a unique-zero certificate.
fn search_box_of<const N: usize>(c: &Certificate<N>) -> IntervalBox<N> {
    match &c.evidence {
        Evidence::Krawczyk { search_box, .. } => {
            IntervalBox(std::array::from_fn(|i| search_box[i]))
        }
        _ => c.bx,
    }
}

/// Groups unique-zero certificates that provably describe the same zero:
/// two certificates agree when one's enclosure lies in the other's search
/// box, by uniqueness of the zero there.
fn distinct_zeros<const N: usize>(certs: &[Certificate<N>]) -> Vec<CertifiedZero<N>> {
    let mut zeros: Vec<CertifiedZero<N>> = Vec::new();
    for c in certs.iter().filter(|c| c.verdict == Verdict::UniqueZero) {
        let enc = c.enclosure.expect("unique zero carries an enclosure");
        let sb = search_box_of(c);
        let same = zeros
            .iter_mut()
            .find(|z| z.search_box.encloses(&enc) || sb.encloses(&z.enclosure));
        match same {
            Some(z) => {
                if let Some(both) = z.enclosure.intersect(&enc) {
                    z.enclosure = both;
                }
                if enc.max_width() < z.enclosure.max_width() {
                    z.enclosure = enc;
                }
                if sb.volume() > z.search_box.volume() {
                    z.search_box = sb;
                }
            }
            None => zeros.push(CertifiedZero {
                search_box: sb,
                enclosure: enc,
            }),
        }
    }
    zeros.sort_by(|a, b| a.enclosure.canonical_cmp(&b.enclosure));
    zeros
}

/// Finds every zero of `f` in `domain`.
///
/// Each zero in the domain lies in the enclosure of some returned zero, or
/// in an `Unknown` leaf. A campaign with no unknown leaves is therefore a
/// complete count.
pub fn certify_all_zeros<const N: usize, F: System<N>>(
    f: &F,
    domain: &IntervalBox<N>,
    cfg: &CampaignConfig,
) -> Result<Campaign<N>, CertError> {
    cfg.validate()?;
    Ok(cfg.install(|| zeros_in_current_pool(f, domain, cfg)))
}

/// [`certify_all_zeros`] on the current rayon pool, for callers that
/// already run inside one. The configuration must be valid.
pub(crate) fn zeros_in_current_pool<const N: usize, F: System<N>>(
    f: &F,
    domain: &IntervalBox<N>,
    cfg: &CampaignConfig,
) -> Campaign<N> {
    let cells = domain.grid(cfg.initial_grid);
    let results: Vec<(Vec<Certificate<N>>, bool)> = cells
        .into_par_iter()
        .map(|c| process_cell(f, c, cfg))
        .collect();
    let budget_exceeded = results.iter().any(|(_, b)| *b);
    let mut certificates: Vec<Certificate<N>> = results.into_iter().flat_map(|(c, _)| c).collect();
    certificates.sort_by(|a, b| a.bx.canonical_cmp(&b.bx));
    let zeros = distinct_zeros(&certificates);
    Campaign {
        system: f.id(),
        domain: *domain,
        config: cfg.clone(),
        certificates,
        zeros,
        budget_exceeded,
    }
}

/// Strict or weak sign requirement for a scalar function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
    NonNegative,
    NonPositive,
    /// Zero is excluded, either sign allowed.
    NonZero,
}

impl Sign {
    pub fn holds(&self, v: &Interval) -> bool {
        match self {
            Sign::Positive => v.lo() > 0.0,
            Sign::Negative => v.hi() < 0.0,
            Sign::NonNegative => v.lo() >= 0.0,
            Sign::NonPositive => v.hi() <= 0.0,
            Sign::NonZero => !v.contains_zero(),
        }
    }
}

/// Outcome of a sign or exclusion campaign on a scalar function.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCampaign<const N: usize> {
    pub region: IntervalBox<N>,
    pub sign: Sign,
    pub config: CampaignConfig,
    /// Leaves on which the sign was certified, sorted canonically.
    pub certified: Vec<(IntervalBox<N>, Interval)>,
    /// Leaves at the minimum width where it was not, with the failure.
    pub survivors: Vec<(IntervalBox<N>, Result<Interval, DomainError>)>,
    pub budget_exceeded: bool,
}

impl<const N: usize> SignCampaign<N> {
    pub fn holds(&self) -> bool {
        self.survivors.is_empty() && !self.budget_exceeded
    }
}

type SignLeaves<const N: usize> = (
    Vec<(IntervalBox<N>, Interval)>,
    Vec<(IntervalBox<N>, Result<Interval, DomainError>)>,
    bool,
);

/// Certifies that `f` has the given sign on every point of `region`.
pub fn certify_sign<const N: usize, G>(
    f: G,
    region: &IntervalBox<N>,
    sign: Sign,
    cfg: &CampaignConfig,
) -> Result<SignCampaign<N>, CertError>
where
    G: Fn(&[Interval; N]) -> Result<Interval, DomainError> + Sync,
{
    cfg.validate()?;
    let cells = region.grid(cfg.initial_grid);
    let run_cell = |cell: IntervalBox<N>| -> SignLeaves<N> {
        let mut ok = Vec::new();
        let mut bad = Vec::new();
        let mut stack = vec![(cell, 0u32)];
        let mut processed = 0usize;
        while let Some((bx, depth)) = stack.pop() {
            if processed >= cfg.max_boxes_per_cell {
                bad.push((bx, Err(DomainError::NonFinite)));
                bad.extend(
                    stack
                        .drain(..)
                        .map(|(b, _)| (b, Err(DomainError::NonFinite))),
                );
                return (ok, bad, true);
            }
            processed += 1;
            let r = f(&bx.0).and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(DomainError::NonFinite)
                }
            });
            if let Ok(v) = r {
                if sign.holds(&v) {
                    ok.push((bx, v));
                    continue;
                }
            }
            if bx.max_width() <= cfg.min_box_width || depth >= cfg.max_depth {
                bad.push((bx, r));
            } else {
                let (l, rr) = bx.bisect();
                stack.push((rr, depth + 1));
                stack.push((l, depth + 1));
            }
        }
        (ok, bad, false)
    };
    let results: Vec<SignLeaves<N>> = cfg.install(|| cells.into_par_iter().map(run_cell).collect());
    let budget_exceeded = results.iter().any(|r| r.2);
    let mut certified = Vec::new();
    let mut survivors = Vec::new();
    for (ok, bad, _) in results {
        certified.extend(ok);
        survivors.extend(bad);
    }
    certified.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    survivors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(SignCampaign {
        region: *region,
        sign,
        config: cfg.clone(),
        certified,
        survivors,
        budget_exceeded,
    })
}

/// Certifies that `f` has no zero in `region`.
pub fn certify_exclusion<const N: usize, G>(
    f: G,
    region: &IntervalBox<N>,
    cfg: &CampaignConfig,
) -> Result<SignCampaign<N>, CertError>
where
    G: Fn(&[Interval; N]) -> Result<Interval, DomainError> + Sync,
{
    certify_sign(f, region, Sign::NonZero, cfg)
}

/// Certifies the zeros of a scalar equation in a bracket.
pub fn certify_scalar_root<F: System<1>>(
    f: &F,
    bracket: Interval,
    cfg: &CampaignConfig,
) -> Result<Campaign<1>, CertError> {
    certify_all_zeros(f, &IntervalBox([bracket]), cfg)
}
