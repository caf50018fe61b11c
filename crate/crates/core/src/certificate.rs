//! Certificate files: the leaves of a campaign in a JSON document, with a
//! hash of the configuration and a checker that replays every verdict.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boxes::IntervalBox;
use crate::error::CertError;
use crate::krawczyk::{krawczyk_step, refine, KrawczykVerdict};
use crate::prover::{Campaign, CampaignConfig, Certificate, Evidence, Verdict};
use crate::system::{eval_interval, System};

/// Format tag written into every certificate file.
pub const FORMAT: &str = "kite-certificates/1";

/// Hex SHA-256 of the configuration as serialized JSON.
pub fn config_hash(cfg: &CampaignConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(json))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord<const N: usize> {
    pub search_box: IntervalBox<N>,
    pub enclosure: IntervalBox<N>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub boxes: usize,
    pub no_zero: usize,
    pub unique_zero_boxes: usize,
    pub unique_zeros: usize,
    pub unknown: usize,
    pub budget_exceeded: bool,
}

/// A campaign as written to disk. `system_id` and `config_hash` apply to
/// every certificate in the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile<const N: usize> {
    pub format: String,
    pub system_id: String,
    pub domain: IntervalBox<N>,
    pub config: CampaignConfig,
    pub config_hash: String,
    pub certificates: Vec<Certificate<N>>,
    pub zeros: Vec<ZeroRecord<N>>,
    pub summary: Summary,
}

impl<const N: usize> CertificateFile<N> {
    pub fn from_campaign(c: &Campaign<N>) -> Self {
        CertificateFile {
            format: FORMAT.into(),
            system_id: c.system.clone(),
            domain: c.domain,
            config: c.config.clone(),
            config_hash: config_hash(&c.config),
            certificates: c.certificates.clone(),
            zeros: c
                .zeros
                .iter()
                .map(|z| ZeroRecord {
                    search_box: z.search_box,
                    enclosure: z.enclosure,
                })
                .collect(),
            summary: Summary {
                boxes: c.certificates.len(),
                no_zero: c.count(Verdict::NoZero),
                unique_zero_boxes: c.count(Verdict::UniqueZero),
                unique_zeros: c.zeros.len(),
                unknown: c.count(Verdict::Unknown),
                budget_exceeded: c.budget_exceeded,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CertError> {
        let f: Self =
            serde_json::from_str(s).map_err(|e| CertError::InvalidInput(e.to_string()))?;
        if f.format != FORMAT {
            return Err(CertError::InvalidInput(format!(
                "unknown format {:?}",
                f.format
            )));
        }
        if f.config_hash != config_hash(&f.config) {
            return Err(CertError::InvalidInput(
                "config_hash does not match config".into(),
            ));
        }
        Ok(f)
    }

    /// Replays every certificate against `f` and checks that the leaves
    /// cover the domain. Returns the indices of certificates that fail.
    pub fn recheck<F: System<N>>(&self, f: &F) -> Result<Vec<usize>, CertError> {
        if f.id() != self.system_id {
            return Err(CertError::InvalidInput(format!(
                "file is for {:?}, not {:?}",
                self.system_id,
                f.id()
            )));
        }
        let mut failed = Vec::new();
        let mut volume = 0.0;
        for (i, c) in self.certificates.iter().enumerate() {
            volume += c.bx.volume();
            if !self.domain.encloses(&c.bx) || !replay(f, c, &self.config) {
                failed.push(i);
            }
        }
        let total = self.domain.volume();
        if volume < total * (1.0 - 1e-12) {
            return Err(CertError::InvalidInput(format!(
                "leaves cover volume {volume}, domain has {total}"
            )));
        }
        Ok(failed)
    }
}

fn replay<const N: usize, F: System<N>>(f: &F, c: &Certificate<N>, cfg: &CampaignConfig) -> bool {
    match (&c.verdict, &c.evidence) {
        (Verdict::NoZero, Evidence::Plain { component, .. }) => eval_interval(f, &c.bx.0)
            .ok()
            .and_then(|y| y.get(*component).copied())
            .is_some_and(|v| !v.contains_zero()),
        (Verdict::NoZero, Evidence::Krawczyk { search_box, .. }) => {
            let Some(sb) = to_box::<N>(search_box) else {
                return false;
            };
            sb.encloses(&c.bx) && krawczyk_step(f, &sb).verdict == KrawczykVerdict::NoZero
        }
        (Verdict::UniqueZero, Evidence::Krawczyk { search_box, .. }) => {
            let Some(sb) = to_box::<N>(search_box) else {
                return false;
            };
            let r = krawczyk_step(f, &sb);
            let (KrawczykVerdict::UniqueZero, Some(k)) = (r.verdict, r.k_box) else {
                return false;
            };
            let start = sb.intersect(&k).unwrap_or(k);
            sb.encloses(&c.bx) && c.enclosure == Some(refine(f, &start, cfg.refine_width))
        }
        (Verdict::Unknown, _) => true,
        _ => false,
    }
}

fn to_box<const N: usize>(v: &[crate::interval::Interval]) -> Option<IntervalBox<N>> {
    (v.len() == N).then(|| IntervalBox(std::array::from_fn(|i| v[i])))
}
