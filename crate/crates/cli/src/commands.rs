//! One function per subcommand.

use kite_core::bifurcation::{BifurcationKind, ZeroEvidence};
use kite_core::certificate::CertificateFile;
use kite_core::claims::{certify_b1, certify_curve_exclusion, sign_suite};
use kite_core::continuation::{
    find_curve_extrema, solve_full_planar_for_m, solve_full_planar_heavy_limit,
    solve_symmetric_for_m, trace_curve,
};
use kite_core::kite::{eval_lambda, eval_m, KiteVars, MaxMassSystem, SearchDomain};
use kite_core::points::{
    certify_max_mass, certify_pitchfork, classify_fold, classify_pitchfork, scan_mass_stationary,
};
use kite_core::prover::{certify_all_zeros, CampaignConfig};
use kite_core::table::regenerate;
use kite_core::{CertError, Interval};
use serde_json::json;

use crate::error::CliError;
use crate::output::{self, Outcome, Status, BRANCH_HEADER};

/// Largest midpoint deviation accepted when regenerating the table.
pub const TABLE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MaxDomain {
    /// The small box around the maximum.
    D0,
    /// `D0`, plus a scan of the whole region `[1, 2] x [sqrt 2, 5/2]`
    /// showing the maximum is the only stationary point of the mass.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Point {
    Fold,
    Pitchfork,
}

/// Mass of bodies 3 and 4: a non-negative number or `inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mass {
    Finite(f64),
    Infinite,
}

impl std::str::FromStr for Mass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inf" {
            return Ok(Mass::Infinite);
        }
        match s.parse::<f64>() {
            Ok(m) if m.is_finite() && m >= 0.0 => Ok(Mass::Finite(m)),
            _ => Err(format!("expected a non-negative mass or inf, got {s:?}")),
        }
    }
}

pub fn certify_max(domain: MaxDomain, cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let campaign = certify_all_zeros(&MaxMassSystem, &SearchDomain::d0(), cfg)?;
    let mut holds = campaign.zeros.len() == 1 && campaign.is_complete();
    let mut budget = campaign.budget_exceeded;
    let mut report = match campaign.zeros.as_slice() {
        [z] if holds => {
            let v = KiteVars::new(z.enclosure.0[0], z.enclosure.0[1]);
            let m0 = eval_m(v).map_err(CertError::from)?;
            json!({
                "a0": z.enclosure.0[0],
                "b0": z.enclosure.0[1],
                "m0": m0,
                "lambda0": eval_lambda(v, m0).map_err(CertError::from)?,
            })
        }
        _ => json!({ "zeros": campaign.zeros.iter().map(|z| z.enclosure).collect::<Vec<_>>() }),
    };
    let mut counts = json!({
        "boxes": campaign.certificates.len(),
        "unique_zeros": campaign.zeros.len(),
        "unknown": campaign.unknown().len(),
    });
    let mut outcome = Outcome::new(Status::Holds, json!(null)).text(
        "certificates.json",
        CertificateFile::from_campaign(&campaign).to_json() + "\n",
    );
    if domain == MaxDomain::Full {
        let scan = scan_mass_stationary(cfg)?;
        holds &= scan.holds();
        budget |= scan.campaign.budget_exceeded;
        report["whole_region"] = json!({
            "stationary_shapes": scan.shapes,
            "unresolved_at_collision": scan.at_collision,
            "unresolved_elsewhere": scan.elsewhere,
        });
        counts["whole_region"] = json!({
            "boxes": scan.campaign.certificates.len(),
            "stationary_points": scan.shapes.len(),
            "unresolved_at_collision": scan.at_collision.len(),
            "unresolved_elsewhere": scan.elsewhere.len(),
        });
        outcome = outcome.text(
            "stationary_certificates.json",
            CertificateFile::from_campaign(&scan.campaign).to_json() + "\n",
        );
    }
    outcome.status = Status::from_checks(holds, budget);
    outcome.counts = counts;
    Ok(outcome.json("report.json", &report))
}

pub fn exclusion(cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let c = certify_curve_exclusion(cfg)?;
    let report = json!({
        "region": c.region,
        "holds": c.holds(),
        "certified_boxes": c.certified.len(),
        "survivors": c.survivors.iter().map(|(b, _)| *b).collect::<Vec<_>>(),
        "budget_exceeded": c.budget_exceeded,
    });
    let counts = json!({ "certified_boxes": c.certified.len(), "survivors": c.survivors.len() });
    Ok(
        Outcome::new(Status::from_checks(c.holds(), c.budget_exceeded), counts)
            .json("report.json", &report),
    )
}

pub fn root_b1(cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let (campaign, b1) = certify_b1(cfg)?;
    let holds = b1.lo() > 2.75 && b1.hi() < 2.76;
    let counts =
        json!({ "boxes": campaign.certificates.len(), "unique_zeros": campaign.zeros.len() });
    Ok(
        Outcome::new(Status::from_checks(holds, campaign.budget_exceeded), counts)
            .text(
                "certificates.json",
                CertificateFile::from_campaign(&campaign).to_json() + "\n",
            )
            .json("report.json", &json!({ "b1": b1, "width": b1.width() })),
    )
}

pub fn signs(cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let claims = sign_suite(cfg)?;
    let holds = claims.iter().all(|c| c.holds);
    let budget = claims.iter().any(|c| c.budget_exceeded);
    let counts = json!({
        "claims": claims.len(),
        "holding": claims.iter().filter(|c| c.holds).count(),
    });
    Ok(Outcome::new(Status::from_checks(holds, budget), counts).json("report.json", &claims))
}

pub fn trace(
    a_min: f64,
    a_max: f64,
    samples: usize,
    cfg: &CampaignConfig,
) -> Result<Outcome, CliError> {
    let points = trace_curve(a_min, a_max, samples, cfg)?;
    Ok(
        Outcome::new(Status::Holds, json!({ "samples": points.len() }))
            .text("curve.csv", output::curve_csv(&points)),
    )
}

pub fn extrema(cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let e = find_curve_extrema(cfg)?;
    Ok(Outcome::new(Status::Holds, json!({ "stationary_points": 3 })).json("report.json", &e))
}

pub fn solve(m: Mass, full_planar: bool, cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let rows = match (m, full_planar) {
        (Mass::Infinite, _) => solve_full_planar_heavy_limit(None, cfg)?,
        (Mass::Finite(m), true) => solve_full_planar_for_m(m, None, cfg)?,
        (Mass::Finite(m), false) => {
            let kites = solve_symmetric_for_m(m, cfg)?;
            let records = kites
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let z = Interval::ZERO;
                    output::branch_record(
                        format!("{m:?}"),
                        (i + 1).to_string(),
                        [z, k.s],
                        [z, k.t],
                        true,
                    )
                })
                .collect();
            let counts = json!({ "symmetric": kites.len(), "asymmetric": 0 });
            return Ok(Outcome::new(Status::Holds, counts)
                .text("branches.csv", output::table_csv(&BRANCH_HEADER, records))
                .json("report.json", &json!({ "m": m, "symmetric_kites": kites })));
        }
    };
    let symmetric = rows.iter().filter(|r| r.symmetric).count();
    let counts = json!({ "symmetric": symmetric, "asymmetric": rows.len() - symmetric });
    Ok(Outcome::new(Status::Holds, counts)
        .text("branches.csv", output::branches_csv(&rows))
        .json("report.json", &json!({ "solutions": rows })))
}

pub fn classify(at: Point, cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let (report, holds) = match at {
        Point::Fold => {
            let r = classify_fold(&certify_max_mass(cfg)?)?;
            let holds = r.kind == BifurcationKind::Fold;
            (r, holds)
        }
        Point::Pitchfork => {
            let r = classify_pitchfork(&certify_pitchfork(cfg.refine_width)?)?;
            let pitchfork = matches!(
                r.kind,
                BifurcationKind::PitchforkSuper | BifurcationKind::PitchforkSub
            );
            let holds = pitchfork && r.t1_zero == Some(ZeroEvidence::Structural);
            (r, holds)
        }
    };
    let counts = json!({ "kind": report.kind });
    Ok(Outcome::new(Status::from_checks(holds, false), counts).json("report.json", &report))
}

pub fn table1(cfg: &CampaignConfig) -> Result<Outcome, CliError> {
    let rows = regenerate(cfg)?;
    let within = rows
        .iter()
        .filter(|r| r.deviation() <= TABLE_TOLERANCE)
        .count();
    let records = rows
        .iter()
        .map(|r| {
            let mut rec = output::branch_record(
                r.m.to_string(),
                r.label.to_string(),
                r.q3,
                r.q4,
                r.symmetric,
            );
            rec.insert(0, r.label.to_string());
            rec.remove(2);
            for x in r.printed_q3.into_iter().chain(r.printed_q4) {
                rec.push(format!("{x:?}"));
            }
            rec.push(format!("{:?}", r.deviation()));
            rec
        })
        .collect();
    let header = [
        "label",
        "m",
        "q3x_lo",
        "q3x_hi",
        "q3y_lo",
        "q3y_hi",
        "q4x_lo",
        "q4x_hi",
        "q4y_lo",
        "q4y_hi",
        "symmetric",
        "printed_q3x",
        "printed_q3y",
        "printed_q4x",
        "printed_q4y",
        "deviation",
    ];
    let off: Vec<&str> = rows
        .iter()
        .filter(|r| r.deviation() > TABLE_TOLERANCE)
        .map(|r| r.label)
        .collect();
    let counts = json!({ "rows": rows.len(), "within_tolerance": within, "off": off });
    Ok(
        Outcome::new(Status::from_checks(off.is_empty(), false), counts)
            .text("table1.csv", output::table_csv(&header, records))
            .json("report.json", &rows),
    )
}
