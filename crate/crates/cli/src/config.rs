use hindman_core::colorings::{CandidateCap, ColoringId};
use serde::{Deserialize, Serialize};

/// Bounds and fixtures for one verification campaign.
///
/// Every field is recorded in the report so a campaign can be replayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// Exclusive code bound for exhaustive scans over the universe.
    pub bound: u64,
    /// Uniqueness scans cover every set with `max B ≤ scan_max`.
    pub scan_max: u32,
    /// Stage horizon used by stabilization and defeat searches.
    pub horizon: u32,
    /// Largest `p`, `q` on the approximation grids.
    pub grid: u32,
    /// Candidate cap for the Σ₂ coloring.
    pub cap: CandidateCap,
    /// Candidate sets tried by each search-style claim before it gives up.
    pub budget: u64,
    /// Code whose memoized color is flipped.
    pub fault: Option<u64>,
}

impl CampaignConfig {
    /// Defaults sized so that each suite finishes in a few seconds.
    pub fn for_coloring(id: ColoringId) -> Self {
        let base = Self {
            bound: 1 << 14,
            scan_max: 14,
            horizon: 40,
            grid: 32,
            cap: CandidateCap::default(),
            budget: 100_000,
            fault: None,
        };
        match id {
            ColoringId::C31 => Self { scan_max: 16, horizon: 64, ..base },
            // defeat instances for k = 2 settle between stages 40 and 50
            ColoringId::C32 { .. } => Self { horizon: 62, ..base },
            ColoringId::C33 => base,
            ColoringId::C34 => Self { bound: 1 << 10, scan_max: 9, ..base },
        }
    }

    /// Number of bits spanned by the scan bound.
    pub fn bound_bits(&self) -> u32 {
        64 - self.bound.saturating_sub(1).leading_zeros()
    }
}
