//! Coloring with no c.e. monochromatic IP set.
//!
//! At stage `s` the witnesses `W^s_i` (`i ≤ s`) are drawn greedily from
//! `𝒲_{⌊i/2⌋,s}`, each the code-least member starting above every earlier
//! defined witness. A set `B` with `max B = s` is colored `i mod 2` when
//! `W^s_i` is an initial segment of `B`, and 0 when no witness is.

use std::sync::{Arc, OnceLock};

use super::{ColoringId, CatalogColoring, Memo, Rule, TraceStep};
use crate::catalog::Catalog;
use crate::error::ColoringError;
use crate::ip::{Color, ColoringOracle};
use crate::FinSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTable31 {
    stage: u32,
    slots: Vec<Option<FinSet>>,
}

impl WitnessTable31 {
    pub fn stage(&self) -> u32 {
        self.stage
    }

    /// `W^s_i`; undefined beyond `i = s`.
    pub fn get(&self, i: usize) -> Option<FinSet> {
        self.slots.get(i).copied().flatten()
    }

    pub fn defined(&self) -> impl Iterator<Item = (usize, FinSet)> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, w)| w.map(|w| (i, w)))
    }

    /// All indices whose witness is an initial segment of `set`.
    pub fn initial_witnesses(&self, set: FinSet) -> Vec<usize> {
        self.defined().filter(|(_, w)| w.is_initial_segment(set)).map(|(i, _)| i).collect()
    }
}

pub fn witnesses_31(catalog: &Catalog, s: u32) -> WitnessTable31 {
    let mut last_max: Option<u32> = None;
    let slots = (0..=s as usize)
        .map(|i| {
            let family = catalog.entry(i / 2).map(|w| w.stage(s)).unwrap_or_default();
            let found = family
                .iter()
                .find(|&w| match (last_max, w.min()) {
                    (Some(m), Some(lo)) => lo > m,
                    _ => true,
                });
            if let Some(w) = found {
                last_max = w.max();
            }
            found
        })
        .collect();
    WitnessTable31 { stage: s, slots }
}

/// Direct evaluation without memo; errors if two witnesses qualify.
pub fn color_31(catalog: &Catalog, set: FinSet) -> Result<u8, ColoringError> {
    let Some(s) = set.max() else { return Ok(0) };
    decide(&witnesses_31(catalog, s), set).map(|(c, _)| c)
}

fn decide(table: &WitnessTable31, set: FinSet) -> Result<(u8, Option<usize>), ColoringError> {
    match table.initial_witnesses(set).as_slice() {
        [] => Ok((0, None)),
        [i] => Ok(((i % 2) as u8, Some(*i))),
        [first, second, ..] => Err(ColoringError::MultipleWitness {
            set: set.to_string(),
            first: *first,
            second: *second,
        }),
    }
}

pub struct Coloring31 {
    catalog: Arc<Catalog>,
    tables: Vec<OnceLock<Arc<WitnessTable31>>>,
    memo: Memo,
}

impl Coloring31 {
    pub fn new(catalog: Arc<Catalog>) -> Self {
        Self { catalog, tables: (0..64).map(|_| OnceLock::new()).collect(), memo: Memo::default() }
    }

    pub fn with_fault(mut self, fault: Option<u64>) -> Self {
        self.memo = Memo::with_fault(fault);
        self
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn table(&self, s: u32) -> Arc<WitnessTable31> {
        match self.tables.get(s as usize) {
            Some(cell) => Arc::clone(cell.get_or_init(|| Arc::new(witnesses_31(&self.catalog, s)))),
            None => Arc::new(witnesses_31(&self.catalog, s)),
        }
    }

    /// Evaluation that reports a second qualifying witness as an error.
    pub fn color_checked(&self, set: FinSet) -> Result<u8, ColoringError> {
        let Some(s) = set.max() else { return Ok(0) };
        let (c, _) = decide(&self.table(s), set)?;
        Ok(self.memo.get_or(set, || c))
    }

    fn rule(&self, set: FinSet) -> Rule {
        let Some(s) = set.max() else { return Rule::Empty };
        let table = self.table(s);
        match table.initial_witnesses(set).first() {
            Some(&index) => Rule::InitialWitness { index, witness: table.get(index).unwrap() },
            None => Rule::Default,
        }
    }
}

impl ColoringOracle<u64> for Coloring31 {
    fn arity(&self) -> u64 {
        2
    }

    fn color(&self, set: FinSet) -> Color {
        Color::from(self.bit(set))
    }
}

impl CatalogColoring for Coloring31 {
    fn id(&self) -> ColoringId {
        ColoringId::C31
    }

    fn bit(&self, set: FinSet) -> u8 {
        self.memo.get_or(set, || {
            let s = set.max().expect("nonempty");
            // at most one witness can start at min B; keep the least on violation
            let table = self.table(s);
            table.initial_witnesses(set).first().map_or(0, |i| (i % 2) as u8)
        })
    }

    fn trace(&self, set: FinSet) -> Vec<TraceStep> {
        vec![TraceStep { set, stage: set.max().unwrap_or(0), rule: self.rule(set), color: self.bit(set) }]
    }

    fn fresh(&self) -> Box<dyn CatalogColoring> {
        Box::new(Coloring31::new(Arc::clone(&self.catalog)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogFile;
    use crate::staged::Generator;

    fn singleton_catalog() -> Catalog {
        Catalog::from_file(CatalogFile::single(Generator::Singletons { delay: 0 })).unwrap()
    }

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    /// Independent recomputation: scan all codes in increasing order and
    /// test the defining conditions against stage membership.
    fn oracle_table(cat: &Catalog, s: u32) -> Vec<Option<FinSet>> {
        let mut out: Vec<Option<FinSet>> = Vec::new();
        for i in 0..=s as usize {
            let fam = cat.entry(i / 2).unwrap().stage(s);
            let w = (1..1u64 << (s + 1)).map(FinSet::from_code).find(|&t| {
                fam.contains(t)
                    && out.iter().flatten().all(|&prev| prev.max().unwrap() < t.min().unwrap())
            });
            out.push(w);
        }
        out
    }

    #[test]
    fn singleton_witnesses_at_stage_two() {
        let cat = singleton_catalog();
        let t = witnesses_31(&cat, 2);
        assert_eq!(t.get(0), Some(s("{0}")));
        assert_eq!(t.get(1), Some(s("{1}")));
        assert_eq!(t.get(2), Some(s("{2}")));
        assert_eq!(t.get(3), None);
    }

    #[test]
    fn tables_match_oracle() {
        for cat in [singleton_catalog(), Catalog::builtin()] {
            for stage in 0..10 {
                let t = witnesses_31(&cat, stage);
                let expected = oracle_table(&cat, stage);
                for (i, w) in expected.iter().enumerate() {
                    assert_eq!(t.get(i), *w, "stage {stage} index {i}");
                }
            }
        }
    }

    #[test]
    fn empty_first_stage_leaves_slot_undefined() {
        let cat = Catalog::from_file(CatalogFile::single(Generator::Singletons { delay: 2 })).unwrap();
        assert_eq!(witnesses_31(&cat, 0).get(0), None);
    }

    #[test]
    fn singleton_witnesses_stabilize() {
        let cat = singleton_catalog();
        let first = witnesses_31(&cat, 0).get(0);
        for t in 0..64 {
            assert_eq!(witnesses_31(&cat, t).get(0), first);
        }
    }

    #[test]
    fn color_examples() {
        let cat = singleton_catalog();
        assert_eq!(color_31(&cat, s("{1,5}")).unwrap(), 1);
        assert_eq!(color_31(&cat, s("{0,5}")).unwrap(), 0);
        let delayed = Catalog::from_file(CatalogFile::single(Generator::Singletons { delay: 9 })).unwrap();
        assert_eq!(color_31(&delayed, s("{0,5}")).unwrap(), 0);
        let c = Coloring31::new(Arc::new(cat));
        assert_eq!(c.bit(s("{1,5}")), 1);
        assert_eq!(c.trace(s("{1,5}"))[0].rule, Rule::InitialWitness { index: 1, witness: s("{1}") });
    }

    #[test]
    fn at_most_one_initial_witness() {
        let c = Coloring31::new(Arc::new(Catalog::builtin()));
        for code in 1..1u64 << 12 {
            assert!(c.color_checked(FinSet::from_code(code)).is_ok());
        }
    }
}
