//! Regeneration of the reference table of kite configurations: for each
//! mass, the symmetric kites and the mirror pairs of asymmetric ones,
//! with `q1 = (-1, 0)`, `q2 = (1, 0)`, `m1 = m2 = 1`, `m3 = m4 = m`.

use serde::Serialize;

use crate::continuation::{
    solve_full_planar_for_m, solve_full_planar_heavy_limit, solve_symmetric_for_m, BranchRow,
    MassValue,
};
use crate::error::CertError;
use crate::interval::Interval;
use crate::points::{certify_max_mass, certify_pitchfork};
use crate::prover::CampaignConfig;

/// Masses at which the table is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMass {
    Value(u16),
    /// The symmetry-breaking mass.
    Pitchfork,
    /// The maximal mass of symmetric kites.
    Fold,
    Infinite,
}

/// A printed row: label, mass, `q3`, `q4`.
pub struct ReferenceRow {
    pub label: &'static str,
    pub mass: TableMass,
    pub q3: [f64; 2],
    pub q4: [f64; 2],
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

const fn row(label: &'static str, mass: TableMass, q3: [f64; 2], q4: [f64; 2]) -> ReferenceRow {
    ReferenceRow {
        label,
        mass,
        q3,
        q4,
    }
}

/// `Value(k)` stands for the mass `k / 1000`.
/// Rows at one mass are listed symmetric first by increasing height of
/// body 3, then mirror pairs with `x3 < 0` first.
pub const REFERENCE: [ReferenceRow; 21] = {
    use TableMass::*;
    [
        row("A1", Value(0), [0.0, 0.0], [0.0, SQRT3]),
        row("A2", Value(0), [0.0, SQRT3], [0.0, SQRT3]),
        row(
            "B1",
            Value(400),
            [0.0, 0.08545589736279062],
            [0.0, 1.337330078035445],
        ),
        row(
            "B2",
            Value(400),
            [0.0, 1.1886118075960026],
            [0.0, 2.234523889944714],
        ),
        row(
            "P1",
            Pitchfork,
            [0.0, 0.5423375242243517],
            [0.0, 1.69144572423217],
        ),
        row(
            "P2",
            Pitchfork,
            [0.0, 0.6854333316530508],
            [0.0, 1.8579255427192582],
        ),
        row(
            "D1",
            Value(996),
            [0.0, 0.5564341378652076],
            [0.0, 1.70775303282403],
        ),
        row(
            "D2",
            Value(996),
            [0.0, 0.6503784729520715],
            [0.0, 1.8415795609684507],
        ),
        row(
            "D3",
            Value(996),
            [-0.009906700029766125, 0.5423813608539542],
            [0.04880076418676227, 1.6905216297662835],
        ),
        row(
            "D4",
            Value(996),
            [0.009906700029766125, 0.5423813608539542],
            [-0.04880076418676227, 1.6905216297662835],
        ),
        row("E1", Value(1000), [0.0, INV_SQRT3], [0.0, SQRT3]),
        row(
            "E2",
            Value(1000),
            [0.0, 0.6503784729520715],
            [0.0, 1.817239394723845],
        ),
        row(
            "E3",
            Value(1000),
            [-0.014277689766976964, 0.5424284291298985],
            [0.07027749578541109, 1.6895283608200573],
        ),
        row(
            "E4",
            Value(1000),
            [0.014277689766976964, 0.5424284291298985],
            [-0.07027749578541109, 1.6895283608200573],
        ),
        row(
            "F",
            Fold,
            [0.0, 0.6138576372995270328],
            [0.0, 1.7746305435327241844],
        ),
        row(
            "F3",
            Fold,
            [-0.016582744680756933, 0.5424600163486574],
            [0.08158057491289805, 1.688861170203973],
        ),
        row(
            "F4",
            Fold,
            [0.016582744680756933, 0.5424600163486574],
            [-0.08158057491289805, 1.688861170203973],
        ),
        row(
            "G3",
            Value(2000),
            [-0.13477940502391195, 0.5485425650707881],
            [0.5904621819032521, 1.5460132316491686],
        ),
        row(
            "G4",
            Value(2000),
            [0.13477940502391195, 0.5485425650707881],
            [-0.5904621819032521, 1.5460132316491686],
        ),
        row(
            "H3",
            Infinite,
            [-0.23430343925991237, 0.5533288328036454],
            [0.8620451062243932, 1.3456025507794094],
        ),
        row(
            "H4",
            Infinite,
            [0.23430343925991237, 0.5533288328036454],
            [-0.8620451062243932, 1.3456025507794094],
        ),
    ]
};

/// A regenerated row next to its printed values.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub label: &'static str,
    pub m: MassValue,
    pub q3: [Interval; 2],
    pub q4: [Interval; 2],
    pub symmetric: bool,
    pub printed_q3: [f64; 2],
    pub printed_q4: [f64; 2],
}

impl TableRow {
    /// Largest distance between enclosure midpoints and printed values.
    pub fn deviation(&self) -> f64 {
        let got = [
            self.q3[0].mid(),
            self.q3[1].mid(),
            self.q4[0].mid(),
            self.q4[1].mid(),
        ];
        let want = [
            self.printed_q3[0],
            self.printed_q3[1],
            self.printed_q4[0],
            self.printed_q4[1],
        ];
        got.iter()
            .zip(want)
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max)
    }
}

fn printed_rows(mass: TableMass) -> Vec<&'static ReferenceRow> {
    REFERENCE.iter().filter(|r| r.mass == mass).collect()
}

/// `(q3, q4, symmetric)` of a solution.
type Found = ([Interval; 2], [Interval; 2], bool);

fn symmetric_found(m: f64, cfg: &CampaignConfig) -> Result<Vec<Found>, CertError> {
    Ok(solve_symmetric_for_m(m, cfg)?
        .into_iter()
        .map(|c| ([Interval::ZERO, c.s], [Interval::ZERO, c.t], true))
        .collect())
}

fn planar_found(rows: Vec<BranchRow>) -> Vec<Found> {
    rows.into_iter()
        .filter(|r| !r.symmetric)
        .map(|r| (r.q3, r.q4, false))
        .collect()
}

fn seeds_of(rows: &[&ReferenceRow]) -> Vec<[f64; 4]> {
    rows.iter()
        .filter(|r| r.q3[0] != 0.0)
        .map(|r| [r.q3[0], r.q3[1], r.q4[0], r.q4[1]])
        .collect()
}

/// Regenerates every row. Symmetric rows come from the symmetric kite
/// solver, asymmetric ones from the full planar system seeded with the
/// printed positions, and the infinite-mass rows from the system with
/// massless bodies 1 and 2.
pub fn regenerate(cfg: &CampaignConfig) -> Result<Vec<TableRow>, CertError> {
    let m_star = certify_pitchfork(cfg.refine_width)?.m.mid();
    let m0 = certify_max_mass(cfg)?.m0.mid();
    let groups = [
        TableMass::Value(0),
        TableMass::Value(400),
        TableMass::Pitchfork,
        TableMass::Value(996),
        TableMass::Value(1000),
        TableMass::Fold,
        TableMass::Value(2000),
        TableMass::Infinite,
    ];
    let mut out = Vec::new();
    for g in groups {
        let printed = printed_rows(g);
        let seeds = seeds_of(&printed);
        let (mass, rows) = match g {
            TableMass::Infinite => (
                MassValue::Infinite,
                planar_found(solve_full_planar_heavy_limit(Some(&seeds), cfg)?),
            ),
            _ => {
                let m = match g {
                    TableMass::Value(k) => k as f64 / 1000.0,
                    TableMass::Pitchfork => m_star,
                    _ => m0,
                };
                let mut rows = symmetric_found(m, cfg)?;
                if !seeds.is_empty() {
                    rows.extend(planar_found(solve_full_planar_for_m(m, Some(&seeds), cfg)?));
                }
                (MassValue::Finite(m), rows)
            }
        };
        if rows.len() != printed.len() {
            return Err(CertError::NotUnique(format!(
                "{} configurations at {:?}, the table lists {}",
                rows.len(),
                g,
                printed.len()
            )));
        }
        for ((q3, q4, symmetric), p) in rows.into_iter().zip(&printed) {
            out.push(TableRow {
                label: p.label,
                m: mass,
                q3,
                q4,
                symmetric,
                printed_q3: p.q3,
                printed_q4: p.q4,
            });
        }
    }
    Ok(out)
}
