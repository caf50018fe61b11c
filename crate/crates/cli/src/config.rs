//! Run configuration: campaign budgets and tolerances, worker count and
//! output directory, read from a `key = value` file.
//!
//! Grammar: one `key = value` pair per line; blank lines and lines
//! starting with `#` are ignored; a key may appear at most once.
//!
//! Keys: `grid`, `max_depth`, `min_width`, `refine_width`,
//! `max_boxes_per_cell`, `workers`, `out`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use kite_core::prover::CampaignConfig;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub campaign: CampaignConfig,
    pub workers: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            campaign: CampaignConfig::default(),
            workers: 0,
            out: PathBuf::from("out"),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::BadInput(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::BadInput(format!("line {}: expected key = value", n + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::BadInput(format!(
                    "line {}: duplicate key {key}",
                    n + 1
                )));
            }
            let c = &mut cfg.campaign;
            match key {
                "grid" => c.initial_grid = parse_value(key, value)?,
                "max_depth" => c.max_depth = parse_value(key, value)?,
                "min_width" => c.min_box_width = parse_value(key, value)?,
                "refine_width" => c.refine_width = parse_value(key, value)?,
                "max_boxes_per_cell" => c.max_boxes_per_cell = parse_value(key, value)?,
                "workers" => cfg.workers = parse_value(key, value)?,
                "out" => cfg.out = PathBuf::from(value),
                _ => {
                    return Err(CliError::BadInput(format!(
                        "line {}: unknown key {key}",
                        n + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Campaign settings with the worker count applied.
    pub fn campaign(&self) -> CampaignConfig {
        self.campaign.clone().with_workers(self.workers)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.campaign
            .validate()
            .map_err(|e| CliError::BadInput(e.to_string()))
    }
}
