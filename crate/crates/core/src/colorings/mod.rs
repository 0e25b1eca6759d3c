//! The four priority-style 2-colorings of finite sets, each parameterized by
//! a catalog, plus shared memo and trace plumbing.
//!
//! All colorings define `c(∅) = 0` as a recursion base and use code order
//! for every "least" choice.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{CatalogError, ColoringError};
use crate::FinSet;

mod c31;
mod c32;
mod c33;
mod c34;
mod grid;

pub use c31::{color_31, witnesses_31, Coloring31, WitnessTable31};
pub use c32::{color_32, decompositions_32, witnesses_32, Coloring32, Decomposition};
pub use c33::{color_33, polarity_33, primary_decomposition_33, Coloring33, PrimaryDecomposition33};
pub use c34::{color_34, true_witnesses_34, witness_34, CandidateCap, Coloring34, Split34};
pub use grid::WitnessGrid;

/// Identifier of one of the catalog colorings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColoringId {
    C31,
    /// `k` overrides the catalog's target size when present.
    C32 { k: Option<usize> },
    C33,
    C34,
}

impl fmt::Display for ColoringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringId::C31 => f.write_str("c31"),
            ColoringId::C32 { k: None } => f.write_str("c32"),
            ColoringId::C32 { k: Some(k) } => write!(f, "c32:k={k}"),
            ColoringId::C33 => f.write_str("c33"),
            ColoringId::C34 => f.write_str("c34"),
        }
    }
}

impl FromStr for ColoringId {
    type Err = ColoringError;

    fn from_str(text: &str) -> Result<Self, ColoringError> {
        let unknown = || ColoringError::UnknownId(text.to_string());
        let (name, params) = text.split_once(':').unwrap_or((text, ""));
        match (name, params) {
            ("c31", "") => Ok(ColoringId::C31),
            ("c33", "") => Ok(ColoringId::C33),
            ("c34", "") => Ok(ColoringId::C34),
            ("c32", "") => Ok(ColoringId::C32 { k: None }),
            ("c32", p) => {
                let k = p.strip_prefix("k=").and_then(|v| v.parse().ok()).ok_or_else(unknown)?;
                Ok(ColoringId::C32 { k: Some(k) })
            }
            _ => Err(unknown()),
        }
    }
}

/// Build options shared by all colorings.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Code whose memoized color is flipped (fault-injection fixture).
    pub fault: Option<u64>,
    /// Candidate universe for the Σ₂ coloring.
    pub cap: Option<CandidateCap>,
}

/// A memoized catalog coloring.
pub trait CatalogColoring: crate::ColoringOracle<u64> + Send {
    fn id(&self) -> ColoringId;

    /// The color of `set` (0 for the empty set).
    fn bit(&self, set: FinSet) -> u8;

    /// One step per recursive evaluation, outermost first.
    fn trace(&self, set: FinSet) -> Vec<TraceStep>;

    /// Same coloring with an empty memo and no fault.
    fn fresh(&self) -> Box<dyn CatalogColoring>;
}

pub fn build_coloring(
    id: ColoringId,
    catalog: &Arc<Catalog>,
    options: BuildOptions,
) -> Result<Box<dyn CatalogColoring>, CatalogError> {
    Ok(match id {
        ColoringId::C31 => {
            if catalog.entries().is_empty() {
                return Err(CatalogError::NoFamilies);
            }
            Box::new(Coloring31::new(Arc::clone(catalog)).with_fault(options.fault))
        }
        ColoringId::C32 { k } => {
            let sized = catalog.sized(k.unwrap_or(catalog.k()))?;
            Box::new(Coloring32::new(Arc::new(sized)).with_fault(options.fault))
        }
        ColoringId::C33 => {
            if catalog.entries().is_empty() {
                return Err(CatalogError::NoFamilies);
            }
            Box::new(Coloring33::new(Arc::clone(catalog)).with_fault(options.fault))
        }
        ColoringId::C34 => {
            if catalog.relations().is_empty() {
                return Err(CatalogError::NoRelations);
            }
            let cap = options.cap.unwrap_or_default();
            Box::new(Coloring34::new(Arc::clone(catalog), cap).with_fault(options.fault))
        }
    })
}

/// Which rule decided a color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `c(∅) = 0`.
    Empty,
    /// No rule applies; color 0.
    Default,
    InitialWitness { index: usize, witness: FinSet },
    Decomposition { i: usize, u: usize, z: FinSet, w: FinSet, d: FinSet },
    Primary { i: usize, u: usize, z: FinSet, w: FinSet, d: FinSet },
    Split { stage: usize, n: usize, a: FinSet, d: FinSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub set: FinSet,
    pub stage: u32,
    #[serde(flatten)]
    pub rule: Rule,
    pub color: u8,
}

/// Concurrent memo of colors keyed by code, with optional fault injection.
#[derive(Default)]
pub(crate) struct Memo {
    colors: RwLock<HashMap<u64, u8>>,
    fault: Option<u64>,
}

impl Memo {
    pub(crate) fn with_fault(fault: Option<u64>) -> Self {
        Self { colors: RwLock::new(HashMap::new()), fault }
    }

    pub(crate) fn get(&self, set: FinSet) -> Option<u8> {
        self.colors.read().expect("memo poisoned").get(&set.code()).copied()
    }

    /// Stores `color`, flipped when `set` is the injected fault, and returns
    /// the stored value.
    pub(crate) fn store(&self, set: FinSet, color: u8) -> u8 {
        let stored = if self.fault == Some(set.code()) { 1 - color } else { color };
        *self.colors.write().expect("memo poisoned").entry(set.code()).or_insert(stored)
    }

    /// Memoized evaluation; `compute` may recurse into the memo.
    pub(crate) fn get_or(&self, set: FinSet, compute: impl FnOnce() -> u8) -> u8 {
        if set.is_empty() {
            return 0;
        }
        if let Some(c) = self.get(set) {
            return c;
        }
        let c = compute();
        self.store(set, c)
    }
}

/// Least stage `s ≤ horizon` after which every listed slot is defined and
/// constant through `horizon`.
pub fn stabilization_stage<T: PartialEq>(
    horizon: u32,
    mut slots_at: impl FnMut(u32) -> Option<T>,
) -> Option<u32> {
    let last = slots_at(horizon)?;
    let mut s = horizon;
    while s > 0 {
        match slots_at(s - 1) {
            Some(v) if v == last => s -= 1,
            _ => break,
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_ids_roundtrip() {
        for text in ["c31", "c32", "c32:k=2", "c33", "c34"] {
            let id: ColoringId = text.parse().unwrap();
            assert_eq!(id.to_string(), text);
        }
        assert!("c35".parse::<ColoringId>().is_err());
        assert!("c32:k=x".parse::<ColoringId>().is_err());
        assert!("c31:k=1".parse::<ColoringId>().is_err());
    }

    #[test]
    fn memo_flips_only_the_fault() {
        let memo = Memo::with_fault(Some(5));
        let a = FinSet::from_code(5);
        let b = FinSet::from_code(6);
        assert_eq!(memo.get_or(a, || 0), 1);
        assert_eq!(memo.get_or(a, || 0), 1);
        assert_eq!(memo.get_or(b, || 0), 0);
        assert_eq!(memo.get_or(FinSet::empty(), || 1), 0);
    }

    #[test]
    fn stabilization_examples() {
        let seq = [None, Some(1), Some(2), Some(2), Some(2)];
        assert_eq!(stabilization_stage(4, |s| seq[s as usize]), Some(2));
        assert_eq!(stabilization_stage(0, |s| seq[s as usize]), None);
        assert_eq!(stabilization_stage(1, |s| seq[s as usize]), Some(1));
    }
}
