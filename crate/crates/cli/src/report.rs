//! Versioned JSON reports and their CSV mirror.

use std::io::Write;
use std::path::Path;

use hindman_core::CatalogFile;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::claims::{Counterexample, Outcome, Status};
use crate::config::CampaignConfig;
use crate::error::CliError;

pub const REPORT_VERSION: u32 = 1;

/// Where the catalog came from, plus its full definition so a report can be
/// replayed without the original file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRef {
    pub reference: String,
    pub definition: CatalogFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub summary: String,
    pub universe_bound: u128,
    pub status: Status,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub wall_time_ms: u64,
}

impl ClaimRecord {
    pub fn new(claim: &str, summary: &str, outcome: Outcome, wall_time_ms: u64) -> Self {
        Self {
            claim: claim.to_string(),
            summary: summary.to_string(),
            universe_bound: outcome.universe_bound,
            status: outcome.status,
            witness: outcome.witness,
            counterexample: outcome.counterexample,
            wall_time_ms,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub verified: usize,
    pub exhausted: usize,
    pub violated: usize,
}

impl Summary {
    pub fn of(records: &[ClaimRecord]) -> Self {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Self { verified: count(Status::Verified), exhausted: count(Status::Exhausted), violated: count(Status::Violated) }
    }

    /// Campaign status: any violation, else exhausted when nothing was verified.
    pub fn status(&self) -> Status {
        if self.violated > 0 {
            Status::Violated
        } else if self.verified == 0 && self.exhausted > 0 {
            Status::Exhausted
        } else {
            Status::Verified
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub coloring: String,
    pub catalog: CatalogRef,
    pub config: CampaignConfig,
    pub claims: Vec<ClaimRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(coloring: String, catalog: CatalogRef, config: CampaignConfig, claims: Vec<ClaimRecord>) -> Self {
        let summary = Summary::of(&claims);
        Self { report_version: REPORT_VERSION, coloring, catalog, config, claims, summary }
    }

    pub fn status(&self) -> Status {
        self.summary.status()
    }

    /// Copy with every timing field zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        let mut copy = self.clone();
        copy.claims.iter_mut().for_each(|r| r.wall_time_ms = 0);
        copy
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn read_json(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let report: Self =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: not a report: {e}", path.display())))?;
        if report.report_version != REPORT_VERSION {
            return Err(CliError::Usage(format!(
                "{}: report_version {} is not supported (expected {REPORT_VERSION})",
                path.display(),
                report.report_version
            )));
        }
        Ok(report)
    }

    /// One CSV row per claim record; structured fields are embedded as JSON.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record([
            "report_version",
            "coloring",
            "claim",
            "universe_bound",
            "status",
            "wall_time_ms",
            "witness",
            "counterexample",
        ])?;
        for r in &self.claims {
            let counterexample = r.counterexample.as_ref().map(|c| serde_json::to_string(c).expect("serializes"));
            writer.write_record([
                self.report_version.to_string(),
                self.coloring.clone(),
                r.claim.clone(),
                r.universe_bound.to_string(),
                r.status.as_str().to_string(),
                r.wall_time_ms.to_string(),
                r.witness.to_string(),
                counterexample.unwrap_or_default(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        self.write_csv(file).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}
