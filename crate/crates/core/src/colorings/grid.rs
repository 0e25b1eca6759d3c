use std::sync::{Arc, OnceLock};

use crate::{FinFamily, FinSet};

/// Stage-`s` witnesses `W^u_{i,s}` for `i ≤ s`, `u ≤ k`.
///
/// Slots are filled in `(i, u)` lexicographic order; each is the code-least
/// member of the row's family at stage `s` with `i < min W` whose minimum
/// exceeds the maximum of every earlier defined slot. Defined slots are
/// therefore strictly increasing blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessGrid {
    stage: u32,
    k: usize,
    slots: Vec<Vec<Option<FinSet>>>,
}

impl WitnessGrid {
    pub fn build(stage: u32, k: usize, mut family_at: impl FnMut(usize) -> Arc<FinFamily>) -> Self {
        let mut last_max: Option<u32> = None;
        let mut slots = Vec::with_capacity(stage as usize + 1);
        for i in 0..=stage as usize {
            let family = family_at(i);
            let mut row = Vec::with_capacity(k + 1);
            for _ in 0..=k {
                let floor = last_max.map_or(i as u32, |m| m.max(i as u32));
                let found = family.iter().find(|&w| w.min().is_some_and(|lo| lo > floor));
                if let Some(w) = found {
                    last_max = w.max();
                }
                row.push(found);
            }
            slots.push(row);
        }
        Self { stage, k, slots }
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, u: usize) -> Option<FinSet> {
        self.slots.get(i).and_then(|row| row.get(u)).copied().flatten()
    }

    pub fn row(&self, i: usize) -> Option<&[Option<FinSet>]> {
        self.slots.get(i).map(Vec::as_slice)
    }

    /// Defined slots `(i, u, W)` in lexicographic order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, FinSet)> + '_ {
        self.slots.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter_map(move |(u, w)| w.map(|w| (i, u, w)))
        })
    }
}

/// Per-stage cache of grids for stages below 64.
pub(crate) struct GridCache {
    grids: Vec<OnceLock<Arc<WitnessGrid>>>,
}

impl GridCache {
    pub(crate) fn new() -> Self {
        Self { grids: (0..64).map(|_| OnceLock::new()).collect() }
    }

    pub(crate) fn get(&self, s: u32, build: impl FnOnce() -> WitnessGrid) -> Arc<WitnessGrid> {
        match self.grids.get(s as usize) {
            Some(cell) => Arc::clone(cell.get_or_init(|| Arc::new(build()))),
            None => Arc::new(build()),
        }
    }
}
