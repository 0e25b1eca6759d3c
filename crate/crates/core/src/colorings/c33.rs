//! Coloring in which no finite family full-matches an IP set generated by a
//! c.e. family.
//!
//! Each row `i` carries two witnesses `W^0_{i,s} < W^1_{i,s}`. The primary
//! decomposition of `B` picks the witness block whose tail has no primary
//! decomposition of its own, and the color of `B` copies or flips the color
//! of the head `Z` according to which of the two witnesses was used.

use std::sync::Arc;

use serde::Serialize;

use super::grid::{GridCache, WitnessGrid};
use super::{CatalogColoring, ColoringId, Memo, Rule, TraceStep};
use crate::catalog::Catalog;
use crate::error::ColoringError;
use crate::ip::{Color, ColoringOracle};
use crate::FinSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryDecomposition33 {
    pub i: usize,
    pub u: usize,
    pub z: FinSet,
    pub w: FinSet,
    pub d: FinSet,
}

fn grid_33(catalog: &Catalog, s: u32) -> WitnessGrid {
    WitnessGrid::build(s, 1, |i| catalog.entry(i).map(|w| w.stage(s)).unwrap_or_default())
}

/// All primary decompositions of `set` against `grid` (at most one is
/// expected). The candidate for `D` is checked recursively at the same stage.
fn primaries(grid: &WitnessGrid, set: FinSet) -> Vec<PrimaryDecomposition33> {
    grid.defined()
        .filter(|&(_, _, w)| set.contains_segment(w))
        .filter_map(|(i, u, w)| {
            let z = set.below(w.min()?);
            let d = set.above(w.max()?);
            let other = grid.get(i, 1 - u);
            let clash = other.is_some_and(|o| z.contains_segment(o) || d.contains_segment(o));
            (!clash && primaries(grid, d).is_empty()).then_some(PrimaryDecomposition33 { i, u, z, w, d })
        })
        .collect()
}

fn unique(found: Vec<PrimaryDecomposition33>, set: FinSet) -> Result<Option<PrimaryDecomposition33>, ColoringError> {
    match found.len() {
        0 | 1 => Ok(found.into_iter().next()),
        count => Err(ColoringError::MultiplePrimary { set: set.to_string(), count }),
    }
}

/// The primary `max B`-decomposition of `set`.
pub fn primary_decomposition_33(
    catalog: &Catalog,
    set: FinSet,
) -> Result<Option<PrimaryDecomposition33>, ColoringError> {
    let Some(s) = set.max() else { return Ok(None) };
    unique(primaries(&grid_33(catalog, s), set), set)
}

/// Polarity with which `set` contains row `i`, if it does.
pub fn polarity_33(catalog: &Catalog, set: FinSet, i: usize) -> Option<u8> {
    let pd = primary_decomposition_33(catalog, set).ok().flatten()?;
    if pd.i == i {
        Some(pd.u as u8)
    } else {
        polarity_33(catalog, pd.z, i).map(|v| v ^ pd.u as u8)
    }
}

/// Direct evaluation without memo.
pub fn color_33(catalog: &Catalog, set: FinSet) -> Result<u8, ColoringError> {
    match primary_decomposition_33(catalog, set)? {
        Some(pd) => Ok(color_33(catalog, pd.z)? ^ pd.u as u8),
        None => Ok(0),
    }
}

pub struct Coloring33 {
    catalog: Arc<Catalog>,
    grids: GridCache,
    memo: Memo,
}

impl Coloring33 {
    pub fn new(catalog: Arc<Catalog>) -> Self {
        Self { catalog, grids: GridCache::new(), memo: Memo::default() }
    }

    pub fn with_fault(mut self, fault: Option<u64>) -> Self {
        self.memo = Memo::with_fault(fault);
        self
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn grid(&self, s: u32) -> Arc<WitnessGrid> {
        self.grids.get(s, || grid_33(&self.catalog, s))
    }

    pub fn primary(&self, set: FinSet) -> Result<Option<PrimaryDecomposition33>, ColoringError> {
        let Some(s) = set.max() else { return Ok(None) };
        unique(primaries(&self.grid(s), set), set)
    }

    pub fn polarity(&self, set: FinSet, i: usize) -> Option<u8> {
        let pd = self.primary(set).ok().flatten()?;
        if pd.i == i {
            Some(pd.u as u8)
        } else {
            self.polarity(pd.z, i).map(|v| v ^ pd.u as u8)
        }
    }

    pub fn color_checked(&self, set: FinSet) -> Result<u8, ColoringError> {
        self.primary(set)?;
        Ok(self.bit(set))
    }
}

impl ColoringOracle<u64> for Coloring33 {
    fn arity(&self) -> u64 {
        2
    }

    fn color(&self, set: FinSet) -> Color {
        Color::from(self.bit(set))
    }
}

impl CatalogColoring for Coloring33 {
    fn id(&self) -> ColoringId {
        ColoringId::C33
    }

    fn bit(&self, set: FinSet) -> u8 {
        self.memo.get_or(set, || {
            let s = set.max().expect("nonempty");
            match primaries(&self.grid(s), set).first() {
                Some(pd) => self.bit(pd.z) ^ pd.u as u8,
                None => 0,
            }
        })
    }

    fn trace(&self, set: FinSet) -> Vec<TraceStep> {
        let mut steps = Vec::new();
        let mut current = set;
        loop {
            let Some(stage) = current.max() else {
                steps.push(TraceStep { set: current, stage: 0, rule: Rule::Empty, color: 0 });
                break;
            };
            let pd = primaries(&self.grid(stage), current).first().copied();
            let rule = match pd {
                Some(p) => Rule::Primary { i: p.i, u: p.u, z: p.z, w: p.w, d: p.d },
                None => Rule::Default,
            };
            steps.push(TraceStep { set: current, stage, rule, color: self.bit(current) });
            match pd {
                Some(p) => current = p.z,
                None => break,
            }
        }
        steps
    }

    fn fresh(&self) -> Box<dyn CatalogColoring> {
        Box::new(Coloring33::new(Arc::clone(&self.catalog)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogFile;
    use crate::staged::Generator;

    fn singletons() -> Catalog {
        Catalog::from_file(CatalogFile::single(Generator::Singletons { delay: 0 })).unwrap()
    }

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn witness_free_set_has_no_primary() {
        let cat = singletons();
        assert_eq!(primary_decomposition_33(&cat, s("{0}")).unwrap(), None);
        assert_eq!(color_33(&cat, s("{0}")).unwrap(), 0);
    }

    #[test]
    fn bare_first_witness_is_primary() {
        // singletons at stage 6: row 0 = {1},{2}; row 1 = {3},{4}; row 2 = {5},{6}
        let cat = singletons();
        let b = s("{0,5}");
        // both row-2 witnesses together block each other
        assert_eq!(primary_decomposition_33(&cat, s("{5,6}")).unwrap(), None);
        let pd = primary_decomposition_33(&cat, b).unwrap();
        assert_eq!(pd.map(|p| (p.i, p.u, p.z, p.d)), Some((2, 0, s("{0}"), FinSet::empty())));
        assert_eq!(color_33(&cat, b).unwrap(), 0);
        assert_eq!(polarity_33(&cat, b, 2), Some(0));
    }

    #[test]
    fn nested_polarity_composes() {
        let cat = singletons();
        // {2} at stage 2 is W^1_{0,2}; at stage 6 the outer block {6} is W^1_{2,6}
        let b = s("{2,6}");
        assert_eq!(polarity_33(&cat, s("{2}"), 0), Some(1));
        assert_eq!(polarity_33(&cat, b, 0), Some(0));
        assert_eq!(color_33(&cat, b).unwrap(), color_33(&cat, s("{2}")).unwrap() ^ 1);
    }

    #[test]
    fn uniqueness_and_consistency_scan() {
        let cat = Arc::new(Catalog::builtin());
        let c = Coloring33::new(Arc::clone(&cat));
        for code in 1..1u64 << 11 {
            let b = FinSet::from_code(code);
            assert_eq!(c.color_checked(b).unwrap(), color_33(&cat, b).unwrap());
            for i in 0..4 {
                if c.polarity(b, i).is_some() {
                    let hit = (0..=b.max().unwrap()).any(|t| {
                        let g = grid_33(&cat, t);
                        (0..2).any(|u| g.get(i, u).is_some_and(|w| b.contains_segment(w)))
                    });
                    assert!(hit, "{b} contains {i} without a witness block");
                }
            }
        }
    }
}
