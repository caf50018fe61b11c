//! Certified landmark points of the kite family: the maximum of the mass
//! ratio (the fold) and the symmetry-breaking point of the full planar
//! system (the pitchfork).

use serde::Serialize;

use crate::autodiff::{jacobian, Dual};
use crate::bifurcation::{classify, BifurcationReport, NullSpace, Reflection};
use crate::boxes::IntervalBox;
use crate::continuation::{
    heights_domain, heights_of_d, shape_from_heights, MassStationaryHeights,
};
use crate::error::{CertError, DomainError};
use crate::interval::{consts, Interval};
use crate::kite::{eval_lambda, eval_m, FoldSystem, KiteVars, MaxMassSystem, SearchDomain};
use crate::krawczyk::{certify_near, newton_f64};
use crate::planar::{FullPlanarSystem, REFLECTION};
use crate::prover::{certify_all_zeros, Campaign, CampaignConfig};
use crate::scalar::Scalar;
use crate::system::{ParamSystem, System};

/// The shape `(a0, b0)` of maximal mass `m0`.
#[derive(Clone, Debug)]
pub struct MaxMass {
    pub campaign: Campaign<2>,
    /// Enclosure of `(a0, b0)`.
    pub shape: IntervalBox<2>,
    pub m0: Interval,
    pub lambda0: Interval,
}

/// Certifies the unique zero of `(f1, g)` in `D0`.
pub fn certify_max_mass(cfg: &CampaignConfig) -> Result<MaxMass, CertError> {
    certify_max_mass_on(&SearchDomain::d0(), cfg)
}

pub fn certify_max_mass_on(
    domain: &IntervalBox<2>,
    cfg: &CampaignConfig,
) -> Result<MaxMass, CertError> {
    let campaign = certify_all_zeros(&MaxMassSystem, domain, cfg)?;
    if campaign.budget_exceeded {
        return Err(CertError::BudgetExceeded(format!(
            "{} unresolved boxes in the maximal-mass campaign",
            campaign.unknown().len()
        )));
    }
    if campaign.zeros.len() != 1 || !campaign.is_complete() {
        return Err(CertError::NotUnique(format!(
            "expected one certified zero of (f1, g), found {} with {} unknown boxes",
            campaign.zeros.len(),
            campaign.unknown().len()
        )));
    }
    let shape = campaign.zeros[0].enclosure;
    let v = KiteVars::new(shape.0[0], shape.0[1]);
    let m0 = eval_m(v)?;
    let lambda0 = eval_lambda(v, m0)?;
    Ok(MaxMass {
        campaign,
        shape,
        m0,
        lambda0,
    })
}

/// Reach around the collision corner `a = b = 2`, where bodies 3 and 4
/// coincide and the campaign cannot decide.
const COLLISION_RADIUS: f64 = 1e-6;

/// Stationary points of the mass along the curve over the whole region.
#[derive(Clone, Debug)]
pub struct MassStationaryScan {
    /// Campaign over the padded heights domain.
    pub campaign: Campaign<2>,
    /// Zeros inside the heights of `[1, 2] x [sqrt 2, 5/2]`, as `(a, b)`.
    pub shapes: Vec<IntervalBox<2>>,
    /// Unresolved boxes within `COLLISION_RADIUS` of the collision corner.
    pub at_collision: Vec<IntervalBox<2>>,
    /// Unresolved boxes anywhere else.
    pub elsewhere: Vec<IntervalBox<2>>,
}

impl MassStationaryScan {
    /// One stationary point and nothing unresolved away from the collision.
    pub fn holds(&self) -> bool {
        self.shapes.len() == 1 && self.elsewhere.is_empty() && !self.campaign.budget_exceeded
    }
}

/// Runs `MassStationaryHeights` over the padded heights domain.
pub fn scan_mass_stationary(cfg: &CampaignConfig) -> Result<MassStationaryScan, CertError> {
    let campaign = certify_all_zeros(&MassStationaryHeights, &heights_domain(), cfg)?;
    let inside = heights_of_d();
    let mut shapes = Vec::new();
    for z in campaign
        .zeros
        .iter()
        .filter(|z| inside.encloses(&z.enclosure))
    {
        let (a, b) = shape_from_heights(&z.enclosure)?;
        shapes.push(IntervalBox::new([a, b]));
    }
    let corner = consts::sqrt3();
    let near = |x: &Interval| {
        x.lo() >= corner.lo() - COLLISION_RADIUS && x.hi() <= corner.hi() + COLLISION_RADIUS
    };
    let (at_collision, elsewhere): (Vec<_>, Vec<_>) = campaign
        .unknown()
        .iter()
        .map(|c| c.bx)
        .partition(|b| b.0.iter().all(near));
    Ok(MassStationaryScan {
        campaign,
        shapes,
        at_collision,
        elsewhere,
    })
}

/// Classifies the fold of `G(r, m) = (m - h1, m - h2)` at `(a0, b0, m0)`.
pub fn classify_fold(max: &MaxMass) -> Result<BifurcationReport, CertError> {
    classify(
        &FoldSystem,
        &max.shape,
        max.m0,
        NullSpace::ClosedForm2,
        None,
    )
}

/// The symmetric full planar states with a singular reflection-odd
/// Jacobian block: unknowns `(y3, y4, lambda, m)`, equations the three
/// reflection-even residuals at `x3 = x4 = 0` and the determinant of
/// `d(E3x, E4x)/d(x3, x4)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetryBreakingSystem;

impl SymmetryBreakingSystem {
    /// `[[dE3x/dx3, dE3x/dx4], [dE4x/dx3, dE4x/dx4]]` and the even residuals.
    pub fn odd_block<S: Scalar>(x: &[S; 4]) -> Result<([[S; 2]; 2], [S; 3]), DomainError> {
        type D<S> = Dual<S, 2>;
        let zero = S::from_f64(0.0);
        let state = [
            D::variable(zero, 0),
            D::constant(x[0]),
            D::variable(zero, 1),
            D::constant(x[1]),
            D::constant(x[2]),
        ];
        let e = FullPlanarSystem::STANDARD.eval_mu(&state, D::constant(x[3]))?;
        Ok((
            [
                [e[0].partials[0], e[0].partials[1]],
                [e[2].partials[0], e[2].partials[1]],
            ],
            [e[1].value, e[3].value, e[4].value],
        ))
    }
}

impl System<4> for SymmetryBreakingSystem {
    fn id(&self) -> String {
        "symmetry-breaking (even residuals, det odd block)".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 4]) -> Result<[S; 4], DomainError> {
        let (j, even) = Self::odd_block(x)?;
        Ok([
            even[0],
            even[1],
            even[2],
            j[0][0] * j[1][1] - j[0][1] * j[1][0],
        ])
    }
}

/// Seed for the symmetry-breaking point: heights of the symmetric kite
/// where the asymmetric pair branches off, and the mass there.
pub const PITCHFORK_SEED: [f64; 3] = [0.5423375242243517, 1.69144572423217, 0.992299447752385];

#[derive(Clone, Debug, Serialize)]
pub struct Pitchfork {
    /// `(y3, y4, lambda, m)` enclosure.
    pub extended: IntervalBox<4>,
    /// Box in which the extended zero is unique.
    pub search_box: IntervalBox<4>,
    /// Full planar state `(0, y3, 0, y4, lambda)`.
    pub state: IntervalBox<5>,
    pub m: Interval,
}

/// Certifies the symmetry-breaking point near `PITCHFORK_SEED`.
pub fn certify_pitchfork(refine_width: f64) -> Result<Pitchfork, CertError> {
    let [y3, y4, m] = PITCHFORK_SEED;
    let a = (1.0 + y3 * y3).sqrt();
    let b = (1.0 + y4 * y4).sqrt();
    let lam = eval_lambda(KiteVars::new(a, b), m)?;
    let x = newton_f64(&SymmetryBreakingSystem, &[y3, y4, lam, m], 100)?;
    let (search_box, e) = certify_near(&SymmetryBreakingSystem, &x, refine_width)?;
    let state = IntervalBox([Interval::ZERO, e.0[0], Interval::ZERO, e.0[1], e.0[2]]);
    Ok(Pitchfork {
        extended: e,
        search_box,
        state,
        m: e.0[3],
    })
}

/// Classifies the pitchfork with null vectors built from the odd block,
/// `v = (-j12, 0, j11, 0, 0)` and `w = (-j21, 0, j11, 0, 0)`.
pub fn classify_pitchfork(p: &Pitchfork) -> Result<BifurcationReport, CertError> {
    let sys = FullPlanarSystem::STANDARD;
    let (_, j) = jacobian(&sys.at(p.m), &p.state.0)?;
    let (j11, j12, j21) = (j.0[0][0], j.0[0][2], j.0[2][0]);
    let z = Interval::ZERO;
    let v = [-j12, z, j11, z, z];
    let w = [-j21, z, j11, z, z];
    classify(
        &sys,
        &p.state,
        p.m,
        NullSpace::Given(v, w),
        Some(Reflection { signs: REFLECTION }),
    )
}
