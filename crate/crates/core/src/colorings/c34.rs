//! Coloring with no monochromatic IP set generated by a Σ₂-definable family.
//!
//! The approximate witnesses `T^{p,q}_{i,n}` (`n ≤ i`) are computed in
//! lexicographic `(i, n)` order. A set `B` is colored at the first stage
//! `i ≤ max B` where it splits as `A ∪ D` with `A = T^{min D, max D}_{i,n}`,
//! taking the longest such `D` and setting `c(B) = 1 - c(D)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use super::{CatalogColoring, ColoringId, Memo, Rule, TraceStep};
use crate::catalog::Catalog;
use crate::ip::{Color, ColoringOracle};
use crate::sigma2::Sigma2Relation;
use crate::FinSet;

/// Bound on candidate witnesses: `max T ≤ min(q, max_element)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCap {
    pub max_element: u32,
}

impl Default for CandidateCap {
    fn default() -> Self {
        Self { max_element: 13 }
    }
}

impl CandidateCap {
    pub fn new(max_element: u32) -> Self {
        Self { max_element: max_element.min(62) }
    }

    fn top(&self, q: u32) -> u32 {
        q.min(self.max_element)
    }
}

/// The split that colored a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Split34 {
    pub stage: usize,
    pub n: usize,
    pub a: FinSet,
    pub d: FinSet,
}

type Key = (u32, u32, usize, usize);

/// Memoized computation of `T^{p,q}_{i,n}` over the catalog relations.
struct WitnessSolver {
    catalog: Arc<Catalog>,
    cap: CandidateCap,
    memo: RwLock<HashMap<Key, Option<FinSet>>>,
}

impl WitnessSolver {
    fn new(catalog: Arc<Catalog>, cap: CandidateCap) -> Self {
        Self { catalog, cap, memo: RwLock::new(HashMap::new()) }
    }

    fn relation(&self, i: usize) -> &Sigma2Relation {
        self.catalog.relation(i).expect("catalog has relations")
    }

    fn witness(&self, p: u32, q: u32, i: usize, n: usize) -> Option<FinSet> {
        let key = (p, q, i, n);
        if let Some(&w) = self.memo.read().expect("memo poisoned").get(&key) {
            return w;
        }
        let w = self.search(p, q, i, n);
        self.memo.write().expect("memo poisoned").insert(key, w);
        w
    }

    fn search(&self, p: u32, q: u32, i: usize, n: usize) -> Option<FinSet> {
        let earlier: Vec<((usize, usize), FinSet)> = earlier_pairs(i, n)
            .filter_map(|(j, m)| self.witness(p, q, j, m).map(|t| ((j, m), t)))
            .collect();
        let floor = earlier.iter().filter_map(|&(_, t)| t.max()).max();
        let relation = self.relation(i);
        candidates(floor, self.cap.top(q)).find(|&t| {
            let lo = t.min().expect("candidates are nonempty");
            relation.eval_bounded(p, q, t)
                && earlier.iter().all(|&((j, m), tj)| self.witness(lo, q, j, m) == Some(tj))
        })
    }
}

/// Pairs `(j, m)` with `m ≤ j` strictly before `(i, n)`.
fn earlier_pairs(i: usize, n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=i).flat_map(move |j| (0..=j).map(move |m| (j, m))).take_while(move |&pair| pair < (i, n))
}

/// Nonempty sets in code order with `min > floor` and `max ≤ top`.
fn candidates(floor: Option<u32>, top: u32) -> impl Iterator<Item = FinSet> {
    let shift = floor.map_or(0, |f| f + 1);
    let count = if shift > top { 0 } else { 1u64 << (top + 1 - shift) };
    (1..count).map(move |c| FinSet::from_code(c << shift))
}

/// `T^{p,q}_{i,n}` computed from scratch.
pub fn witness_34(catalog: &Arc<Catalog>, p: u32, q: u32, i: usize, n: usize, cap: CandidateCap) -> Option<FinSet> {
    assert!(n <= i, "witness index n must satisfy n < i + 1");
    WitnessSolver::new(Arc::clone(catalog), cap).witness(p, q, i, n)
}

/// The true witnesses `T_{i,n}` for all pairs up to `(upto, upto)`,
/// evaluated with the certified quantifier bounds inside the same cap.
pub fn true_witnesses_34(catalog: &Catalog, upto: usize, cap: CandidateCap) -> Vec<((usize, usize), Option<FinSet>)> {
    let mut out: Vec<((usize, usize), Option<FinSet>)> = Vec::new();
    for (i, n) in earlier_pairs(upto, upto).chain(std::iter::once((upto, upto))) {
        let relation = catalog.relation(i).expect("catalog has relations");
        let defined: Vec<((usize, usize), FinSet)> =
            out.iter().filter_map(|&(pair, t)| t.map(|t| (pair, t))).collect();
        let floor = defined.iter().filter_map(|&(_, t)| t.max()).max();
        let found = candidates(floor, cap.max_element).find(|&t| {
            let lo = t.min().expect("nonempty");
            relation.truth(t)
                && defined.iter().all(|&((j, _), tj)| {
                    catalog.relation(j).expect("catalog has relations").exists_witness_upto(lo, tj)
                })
        });
        out.push(((i, n), found));
    }
    out
}

/// Direct evaluation with a fresh solver.
pub fn color_34(catalog: &Arc<Catalog>, set: FinSet, cap: CandidateCap) -> u8 {
    Coloring34::new(Arc::clone(catalog), cap).bit(set)
}

pub struct Coloring34 {
    solver: WitnessSolver,
    memo: Memo,
}

impl Coloring34 {
    pub fn new(catalog: Arc<Catalog>, cap: CandidateCap) -> Self {
        Self { solver: WitnessSolver::new(catalog, cap), memo: Memo::default() }
    }

    pub fn with_fault(mut self, fault: Option<u64>) -> Self {
        self.memo = Memo::with_fault(fault);
        self
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.solver.catalog
    }

    pub fn cap(&self) -> CandidateCap {
        self.solver.cap
    }

    /// Memoized `T^{p,q}_{i,n}`.
    pub fn witness(&self, p: u32, q: u32, i: usize, n: usize) -> Option<FinSet> {
        self.solver.witness(p, q, i, n)
    }

    /// The split deciding `set`: first stage, then longest `D`.
    pub fn split(&self, set: FinSet) -> Option<Split34> {
        let s = set.max()? as usize;
        for stage in 0..=s {
            for a in set.proper_initial_segments() {
                let d = set.difference(a);
                let (p, q) = (d.min()?, d.max()?);
                if let Some(n) = (0..=stage).find(|&n| self.witness(p, q, stage, n) == Some(a)) {
                    return Some(Split34 { stage, n, a, d });
                }
            }
        }
        None
    }
}

impl ColoringOracle<u64> for Coloring34 {
    fn arity(&self) -> u64 {
        2
    }

    fn color(&self, set: FinSet) -> Color {
        Color::from(self.bit(set))
    }
}

impl CatalogColoring for Coloring34 {
    fn id(&self) -> ColoringId {
        ColoringId::C34
    }

    fn bit(&self, set: FinSet) -> u8 {
        self.memo.get_or(set, || match self.split(set) {
            Some(sp) => 1 - self.bit(sp.d),
            None => 0,
        })
    }

    fn trace(&self, set: FinSet) -> Vec<TraceStep> {
        let mut steps = Vec::new();
        let mut current = set;
        while let Some(stage) = current.max() {
            let split = self.split(current);
            let rule = match split {
                Some(sp) => Rule::Split { stage: sp.stage, n: sp.n, a: sp.a, d: sp.d },
                None => Rule::Default,
            };
            steps.push(TraceStep { set: current, stage, rule, color: self.bit(current) });
            match split {
                Some(sp) => current = sp.d,
                None => break,
            }
        }
        steps
    }

    fn fresh(&self) -> Box<dyn CatalogColoring> {
        Box::new(Coloring34::new(Arc::clone(&self.solver.catalog), self.solver.cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogFile;
    use crate::sigma2::Sigma2Kind;

    fn single(kind: Sigma2Kind) -> Arc<Catalog> {
        Arc::new(Catalog::from_file(CatalogFile::single_relation(kind)).unwrap())
    }

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn trivial_relations() {
        let cap = CandidateCap::new(3);
        let t = single(Sigma2Kind::TrivialTrue);
        assert_eq!(witness_34(&t, 0, 3, 0, 0, cap), Some(s("{0}")));
        let f = single(Sigma2Kind::TrivialFalse);
        for (p, q) in [(0, 0), (3, 3), (9, 2)] {
            assert_eq!(witness_34(&f, p, q, 0, 0, cap), None);
            assert_eq!(witness_34(&f, p, q, 2, 1, cap), None);
        }
    }

    #[test]
    fn trivial_true_chain_is_singletons() {
        let t = single(Sigma2Kind::TrivialTrue);
        let c = Coloring34::new(t, CandidateCap::new(8));
        let row: Vec<_> = earlier_pairs(3, 0).map(|(i, n)| c.witness(0, 8, i, n).unwrap()).collect();
        let expected: Vec<_> = (0..6).map(|e| FinSet::singleton(e).unwrap()).collect();
        assert_eq!(row, expected);
    }

    /// Linear-scan oracle for the least candidate at (i, n) given the
    /// computed earlier witnesses.
    #[test]
    fn witnesses_are_least_candidates() {
        let cat = Arc::new(Catalog::builtin());
        let cap = CandidateCap::new(6);
        let c = Coloring34::new(Arc::clone(&cat), cap);
        for p in 0..5 {
            for q in 0..7 {
                for (i, n) in earlier_pairs(3, 3) {
                    let earlier: Vec<_> = earlier_pairs(i, n)
                        .filter_map(|(j, m)| c.witness(p, q, j, m).map(|t| ((j, m), t)))
                        .collect();
                    let expected = (1..1u64 << (q.min(6) + 1)).map(FinSet::from_code).find(|&t| {
                        cat.relation(i).unwrap().eval_bounded(p, q, t)
                            && earlier.iter().all(|&((j, m), tj)| {
                                tj.max() < t.min() && c.witness(t.min().unwrap(), q, j, m) == Some(tj)
                            })
                    });
                    assert_eq!(c.witness(p, q, i, n), expected, "p={p} q={q} i={i} n={n}");
                }
            }
        }
    }

    #[test]
    fn no_split_defaults_to_zero() {
        let f = single(Sigma2Kind::TrivialFalse);
        assert_eq!(color_34(&f, s("{1,4}"), CandidateCap::default()), 0);
    }

    #[test]
    fn split_prefers_longest_tail() {
        let t = single(Sigma2Kind::TrivialTrue);
        let c = Coloring34::new(t, CandidateCap::new(9));
        // stage 0 witness at (1, 5) is {0}; the shortest head wins
        let b = s("{0,1,5}");
        let sp = c.split(b).unwrap();
        assert_eq!((sp.stage, sp.n, sp.a, sp.d), (0, 0, s("{0}"), s("{1,5}")));
        assert_eq!(c.bit(b), 1 - c.bit(s("{1,5}")));
    }

    #[test]
    fn memo_matches_fresh_evaluation() {
        let cat = Arc::new(Catalog::builtin());
        let c = Coloring34::new(Arc::clone(&cat), CandidateCap::new(9));
        for code in 1..1u64 << 9 {
            let b = FinSet::from_code(code);
            assert_eq!(c.bit(b), color_34(&cat, b, CandidateCap::new(9)));
        }
    }

    #[test]
    fn true_witnesses_on_builtin() {
        let cat = Catalog::builtin();
        let ws = true_witnesses_34(&cat, 1, CandidateCap::new(10));
        // trivial_true then subset_evens
        assert_eq!(ws[0], ((0, 0), Some(s("{0}"))));
        assert_eq!(ws[1], ((1, 0), Some(s("{2}"))));
        assert_eq!(ws[2], ((1, 1), Some(s("{4}"))));
    }
}
