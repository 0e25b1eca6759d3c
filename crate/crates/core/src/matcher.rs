//! Bounded, certificate-producing versions of the half-match / full-match
//! argument for the finite unions theorem.
//!
//! Infinite IP sets are replaced by finite families drawn from a universe of
//! sets with code below a bound. Each operation re-checks its postcondition
//! by exhaustive evaluation before returning, and reports
//! [`MatchError::UniverseExhausted`] when the budget runs out instead of
//! returning an unverified answer.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::MatchError;
use crate::finset::{BitSet, Word};
use crate::ip::{
    family_minus_family, full_matches, half_matches, matches_family, nu, nu_all, Color, ColoringOracle,
    Family, MatchMode,
};
use crate::pairing::{cantor_pair, cantor_unpair};
use crate::FinSet;

/// Limits for every search in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Universe: nonempty sets with code below this bound.
    pub universe_bound: u128,
    /// Maximum iterations of each inductive construction.
    pub depth: usize,
    /// Union arity used when closing a family under unions.
    pub nu_cap: usize,
    /// Number of pairwise disjoint members standing in for "generates an IP set".
    pub ip_scale: usize,
    /// Maximum color evaluations spent in any single search.
    pub max_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { universe_bound: 1 << 8, depth: 6, nu_cap: 3, ip_scale: 2, max_nodes: 2_000_000 }
    }
}

impl SearchBudget {
    pub fn with_bound(universe_bound: u128) -> Self {
        Self { universe_bound, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), MatchError> {
        let fields = [
            ("universe_bound", self.universe_bound.min(usize::MAX as u128) as usize),
            ("depth", self.depth),
            ("nu_cap", self.nu_cap),
            ("ip_scale", self.ip_scale),
            ("max_nodes", self.max_nodes),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(MatchError::UniverseExhausted(format!("budget field {name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn universe<W: Word>(&self) -> Family<W> {
        Family::all_below(self.universe_bound)
    }
}

/// Summary of an exhaustive postcondition check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    /// Sets at which the postcondition was evaluated.
    pub checked: usize,
    pub universe_bound: u128,
}

fn summary(checked: usize, budget: &SearchBudget) -> CheckSummary {
    CheckSummary { checked, universe_bound: budget.universe_bound }
}

/// Outcome of the half-match dichotomy for a fixed finite `𝓑`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case", bound = "")]
pub enum Dichotomy<W: Word> {
    /// No further set can be added: every remaining `S` has some
    /// `D ∈ nu(𝒟)` with `𝓑` failing to half-match `D ∪ S`.
    FirstCase { d: Family<W>, check: CheckSummary },
    /// `𝓑` half-matches every member of `nu(generators)`; `t` is that closure.
    SecondCase { generators: Family<W>, t: Family<W>, check: CheckSummary },
}

/// Counts color evaluations against the node budget.
struct Meter {
    used: usize,
    limit: usize,
    what: &'static str,
}

impl Meter {
    fn new(limit: usize, what: &'static str) -> Self {
        Self { used: 0, limit, what }
    }

    fn tick(&mut self, n: usize) -> Result<(), MatchError> {
        self.used += n;
        if self.used > self.limit {
            Err(MatchError::UniverseExhausted(format!("{} exceeded {} evaluations", self.what, self.limit)))
        } else {
            Ok(())
        }
    }
}

fn support<W: Word>(sets: &[BitSet<W>]) -> BitSet<W> {
    sets.iter().fold(BitSet::empty(), |acc, &s| acc.union(s))
}

/// Either a finite `𝒟` that cannot be extended, or a family all of whose
/// unions are half-matched by `𝓑`.
///
/// `𝒟` grows from the least member of `𝒮 − 𝓑` by the least `S` disjoint from
/// it such that `𝓑` half-matches `D ∪ S` for every `D ∈ NU(𝒟)`. After
/// `depth` (rounded up to even) steps the pairs `D_{2i} ∪ D_{2i+1}` generate
/// the second case. An empty `𝓑` imposes no constraint and yields `T = 𝒮`.
pub fn half_match_dichotomy<W: Word, C: ColoringOracle<W> + ?Sized>(
    s: &Family<W>,
    b: &Family<W>,
    c: &C,
    budget: &SearchBudget,
) -> Result<Dichotomy<W>, MatchError> {
    budget.validate()?;
    if b.is_empty() {
        return Ok(Dichotomy::SecondCase { generators: s.clone(), t: s.clone(), check: summary(0, budget) });
    }
    let pool = family_minus_family(s, b);
    let first = pool
        .first()
        .ok_or_else(|| MatchError::UniverseExhausted("no member of S outside the support of B".into()))?;
    let depth = budget.depth.max(2).next_multiple_of(2);
    let mut meter = Meter::new(budget.max_nodes, "dichotomy search");
    let mut ds = vec![first];
    let mut nu_d: Vec<BitSet<W>> = vec![first];
    let extends = |x: BitSet<W>, nu_d: &[BitSet<W>], meter: &mut Meter| -> Result<bool, MatchError> {
        for &d in nu_d {
            meter.tick(b.len() + 1)?;
            if half_matches(b, d.union(x), c).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    while ds.len() < depth {
        let used = support(&ds);
        let mut found = None;
        for x in pool.iter().filter(|x| x.is_disjoint(used)) {
            if extends(x, &nu_d, &mut meter)? {
                found = Some(x);
                break;
            }
        }
        let Some(x) = found else {
            // certificate: every remaining candidate fails for some D ∈ NU(𝒟)
            let d = Family::new(ds.iter().copied());
            let closure = nu_all(&d);
            let mut checked = 0;
            for x in pool.iter().filter(|x| x.is_disjoint(used)) {
                checked += 1;
                if closure.iter().all(|dd| half_matches(b, dd.union(x), c).is_some()) {
                    return Err(MatchError::CertificateFailed(format!("first case: {x} extends D")));
                }
            }
            return Ok(Dichotomy::FirstCase { d, check: summary(checked, budget) });
        };
        let grown: Vec<BitSet<W>> = nu_d.iter().map(|d| d.union(x)).collect();
        nu_d.push(x);
        nu_d.extend(grown);
        ds.push(x);
    }
    let generators = Family::new(ds.chunks(2).map(|p| p[0].union(p[1])));
    let t = nu(&generators, budget.nu_cap);
    match matches_family(b, &t, c, MatchMode::Half) {
        Some(bad) => Err(MatchError::CertificateFailed(format!("second case: {bad} is not half-matched"))),
        None => Ok(Dichotomy::SecondCase { check: summary(t.len(), budget), generators, t }),
    }
}

/// A finite `𝓑` half-matching every member of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct HalfMatcher<W: Word> {
    pub b: Family<W>,
    pub t: Family<W>,
    /// Dichotomy rounds performed.
    pub rounds: usize,
    pub check: CheckSummary,
}

/// Seeds `𝓑 = {Q}` with the least member and alternates dichotomies; each
/// first case folds `𝒟` into `𝓑 = NU(𝓑 ∪ 𝒟)`. With `r` colors at most `r - 1`
/// dichotomies are needed before the remaining family is half-matched. In a
/// finite universe that guarantee can fail, so up to `budget.depth` further
/// rounds are tried before giving up.
pub fn find_half_matcher<W: Word, C: ColoringOracle<W> + ?Sized>(
    s: &Family<W>,
    c: &C,
    r: usize,
    budget: &SearchBudget,
) -> Result<HalfMatcher<W>, MatchError> {
    budget.validate()?;
    let q = s.first().ok_or_else(|| MatchError::UniverseExhausted("empty family".into()))?;
    let mut b = Family::new([q]);
    let mut rest = family_minus_family(s, &b);
    let rounds = r.saturating_sub(1).max(budget.depth);
    for round in 1..=rounds {
        if rest.is_empty() {
            return Err(MatchError::UniverseExhausted(format!("remaining family emptied after {round} rounds")));
        }
        if matches_family(&b, &rest, c, MatchMode::Half).is_none() {
            return Ok(HalfMatcher { check: summary(rest.len(), budget), b, t: rest, rounds: round - 1 });
        }
        match half_match_dichotomy(&rest, &b, c, budget)? {
            Dichotomy::SecondCase { t, check, .. } => return Ok(HalfMatcher { b, t, rounds: round, check }),
            Dichotomy::FirstCase { d, .. } => {
                b = nu_all(&b.union_with(&d));
                rest = family_minus_family(&rest, &b);
            }
        }
    }
    if rest.is_empty() {
        return Err(MatchError::UniverseExhausted("remaining family emptied".into()));
    }
    match matches_family(&b, &rest, c, MatchMode::Half) {
        Some(bad) => Err(MatchError::UniverseExhausted(format!("after {rounds} rounds {bad} is still unmatched"))),
        None => Ok(HalfMatcher { check: summary(rest.len(), budget), b, t: rest, rounds }),
    }
}

/// A coloring shared between refinement layers.
pub type SharedColoring<'a, W> = Arc<dyn ColoringOracle<W> + Send + 'a>;

/// A refined color `⟨B, c(S)⟩` naming the witness that matched `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedColor {
    pub witness: FinSet,
    pub base: Color,
}

impl RefinedColor {
    /// Cantor pairing of (witness code, base color).
    pub fn encode(&self) -> Option<u64> {
        cantor_pair(self.witness.code(), self.base)
    }

    pub fn decode(z: u64) -> Self {
        let (w, base) = cantor_unpair(z);
        Self { witness: FinSet::from_code(w), base }
    }
}

/// `c'(S) = ⟨B, c(S)⟩` with `B` the least member of `𝓑` matching `S`.
///
/// Colors are stored densely as `index(B) · r + c(S)`; sets outside the
/// refinement domain use the index `|𝓑|`.
pub struct RefinedColoring<'a, W: Word> {
    base: SharedColoring<'a, W>,
    b: Family<W>,
    witness: HashMap<BitSet<W>, usize>,
    r: u64,
}

impl<'a, W: Word> RefinedColoring<'a, W> {
    /// Witness and base color of `set`.
    pub fn refined(&self, set: BitSet<W>) -> (Option<BitSet<W>>, Color) {
        let idx = self.witness.get(&set).copied();
        (idx.map(|i| self.b.members()[i]), self.base.color(set))
    }

    pub fn witnesses(&self) -> &Family<W> {
        &self.b
    }
}

impl<W: Word> RefinedColoring<'_, W> {
    pub fn refined_color(&self, set: BitSet<W>) -> Option<RefinedColor> {
        let (w, base) = self.refined(set);
        let w = FinSet::from_code_u128(w?.code().to_u128()).ok()?;
        Some(RefinedColor { witness: w, base })
    }
}

impl<W: Word> ColoringOracle<W> for RefinedColoring<'_, W> {
    fn arity(&self) -> u64 {
        (self.b.len() as u64 + 1).saturating_mul(self.r)
    }

    fn color(&self, set: BitSet<W>) -> Color {
        let idx = self.witness.get(&set).copied().unwrap_or(self.b.len()) as u64;
        idx * self.r + self.base.color(set)
    }
}

/// Refines `c` on `domain` by the least matching member of `b`.
///
/// Every member of `domain` must be matched (half or full, by `mode`);
/// otherwise the first unmatched set is reported as [`MatchError::NoWitness`].
pub fn refine_coloring<'a, W: Word>(
    c: SharedColoring<'a, W>,
    b: &Family<W>,
    domain: &Family<W>,
    mode: MatchMode,
) -> Result<RefinedColoring<'a, W>, MatchError> {
    let index: HashMap<BitSet<W>, usize> = b.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut witness = HashMap::with_capacity(domain.len());
    for set in domain.iter() {
        let found = match mode {
            MatchMode::Half => half_matches(b, set, &*c),
            MatchMode::Full => full_matches(b, set, &*c),
        };
        match found {
            Some(w) => {
                witness.insert(set, index[&w]);
            }
            None => return Err(MatchError::NoWitness { set: set.to_string() }),
        }
    }
    let r = c.arity().max(1);
    Ok(RefinedColoring { base: c, b: b.clone(), witness, r })
}

/// Outcome of the full-match-or-avoid lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case", bound = "")]
pub enum FullOrAvoid<W: Word> {
    /// `c(S) ≠ avoided` for every `S ∈ nu(s)`.
    AvoidingFamily { s: Family<W>, avoided: Color, check: CheckSummary },
    /// `b` full-matches every member of `t`.
    FullMatch { b: Family<W>, t: Family<W>, rounds: usize, check: CheckSummary },
}

fn colors_on<W: Word, C: ColoringOracle<W> + ?Sized>(family: &Family<W>, c: &C) -> BTreeSet<Color> {
    family.iter().map(|s| c.color(s)).collect()
}

fn verify_avoiding<W: Word, C: ColoringOracle<W> + ?Sized>(
    s: &Family<W>,
    avoided: Color,
    c: &C,
    budget: &SearchBudget,
) -> Option<CheckSummary> {
    let closure = nu(s, budget.nu_cap);
    closure.iter().all(|x| c.color(x) != avoided).then(|| summary(closure.len(), budget))
}

/// Either a family whose unions avoid one color, or a finite family that
/// full-matches a family.
///
/// A color that occurs in `s` but whose complement already avoids it is
/// returned directly. Otherwise rounds of half-matching and refinement run
/// until `NU(⋃𝓑_i)` full-matches the current family; failing that, the
/// unmatched representatives are split by color, and a bounded search picks
/// one witness per round so that all unions avoid the majority color.
pub fn full_match_or_avoid<W: Word, C: ColoringOracle<W> + ?Sized>(
    s: &Family<W>,
    c: &C,
    r: usize,
    budget: &SearchBudget,
) -> Result<FullOrAvoid<W>, MatchError> {
    budget.validate()?;
    for avoided in colors_on(s, c) {
        let rest = s.filter(|x| c.color(x) != avoided);
        if crate::ip::generates_ip_at_scale(&rest, budget.ip_scale) {
            if let Some(check) = verify_avoiding(&rest, avoided, c, budget) {
                return Ok(FullOrAvoid::AvoidingFamily { s: rest, avoided, check });
            }
        }
    }

    let mut current: SharedColoring<'_, W> = Arc::new(c);
    let mut t = s.clone();
    let mut levels: Vec<Family<W>> = Vec::new();
    let mut unmatched: Vec<BitSet<W>> = Vec::new();
    for round in 1..=budget.depth {
        let r_eff = colors_on(&t, &*current).len().min(r.max(1) * (round * round));
        let hm = match find_half_matcher(&t, &*current, r_eff.max(1), budget) {
            Ok(hm) => hm,
            Err(MatchError::UniverseExhausted(_)) if !levels.is_empty() => break,
            Err(e) => return Err(e),
        };
        levels.push(hm.b.clone());
        let all_b = levels.iter().fold(Family::empty(), |acc, l| acc.union_with(l));
        let closure = nu(&all_b, budget.nu_cap);
        match matches_family(&closure, &hm.t, c, MatchMode::Full) {
            None => {
                return Ok(FullOrAvoid::FullMatch {
                    check: summary(hm.t.len(), budget),
                    b: closure,
                    t: hm.t,
                    rounds: round,
                })
            }
            Some(x) => unmatched.push(x),
        }
        current = Arc::new(refine_coloring(current, &hm.b, &hm.t, MatchMode::Half)?);
        t = hm.t;
        if t.is_empty() {
            break;
        }
    }

    // pigeonhole: least color whose class reaches ⌈n / r⌉
    let n = unmatched.len();
    let r = r.max(1);
    let need = n.div_ceil(r).max(1);
    let mut classes: HashMap<Color, usize> = HashMap::new();
    for &x in &unmatched {
        *classes.entry(c.color(x)).or_default() += 1;
    }
    let q = classes
        .iter()
        .filter(|(_, &k)| k >= need)
        .map(|(&col, _)| col)
        .min()
        .ok_or_else(|| MatchError::UniverseExhausted("no unmatched representatives".into()))?;

    let chosen = longest_avoiding_chain(&levels, q, c, budget)?;
    if chosen.len() < budget.ip_scale {
        return Err(MatchError::UniverseExhausted(format!(
            "longest chain avoiding color {q} has {} sets, need {}",
            chosen.len(),
            budget.ip_scale
        )));
    }
    let s_prime = Family::new(chosen);
    match verify_avoiding(&s_prime, q, c, budget) {
        Some(check) => Ok(FullOrAvoid::AvoidingFamily { s: s_prime, avoided: q, check }),
        None => Err(MatchError::CertificateFailed(format!("chain {s_prime} meets color {q}"))),
    }
}

/// Depth-first search for the longest sequence `B_1 ∈ levels[0], B_2 ∈
/// levels[1], ..` of pairwise disjoint sets all of whose unions avoid `q`.
fn longest_avoiding_chain<W: Word, C: ColoringOracle<W> + ?Sized>(
    levels: &[Family<W>],
    q: Color,
    c: &C,
    budget: &SearchBudget,
) -> Result<Vec<BitSet<W>>, MatchError> {
    struct Search<'s, W: Word, C: ?Sized> {
        levels: &'s [Family<W>],
        q: Color,
        c: &'s C,
        best: Vec<BitSet<W>>,
        nodes: usize,
        limit: usize,
    }
    impl<W: Word, C: ColoringOracle<W> + ?Sized> Search<'_, W, C> {
        fn go(&mut self, level: usize, chosen: &mut Vec<BitSet<W>>, unions: &[BitSet<W>]) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            if level == self.levels.len() || self.best.len() == self.levels.len() || self.nodes > self.limit {
                return;
            }
            let used = support(chosen);
            for x in self.levels[level].iter().filter(|x| x.is_disjoint(used)) {
                self.nodes += unions.len() + 1;
                if self.c.color(x) == self.q || unions.iter().any(|&u| self.c.color(u.union(x)) == self.q) {
                    continue;
                }
                let mut next = unions.to_vec();
                next.push(x);
                next.extend(unions.iter().map(|&u| u.union(x)));
                chosen.push(x);
                self.go(level + 1, chosen, &next);
                chosen.pop();
            }
            // a level may also be skipped
            self.go(level + 1, chosen, unions);
        }
    }
    let mut search = Search { levels, q, c, best: Vec::new(), nodes: 0, limit: budget.max_nodes };
    search.go(0, &mut Vec::new(), &[]);
    Ok(search.best)
}

/// Outcome of the full-match lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case", bound = "")]
pub enum FullMatcher<W: Word> {
    /// `c` is constant on `nu(s)`.
    MonochromaticFamily { s: Family<W>, color: Color, check: CheckSummary },
    FullMatch { b: Family<W>, t: Family<W>, rounds: usize, check: CheckSummary },
}

/// Induction on the number of colors: either `c` is already constant on the
/// closure, or avoid one color and recurse with one fewer.
pub fn find_full_matcher<W: Word, C: ColoringOracle<W> + ?Sized>(
    s: &Family<W>,
    c: &C,
    r: usize,
    budget: &SearchBudget,
) -> Result<FullMatcher<W>, MatchError> {
    budget.validate()?;
    let closure = nu(s, budget.nu_cap);
    let colors = colors_on(&closure, c);
    if r <= 1 || colors.len() <= 1 {
        return match colors.iter().copied().collect::<Vec<_>>().as_slice() {
            [color] => Ok(FullMatcher::MonochromaticFamily {
                s: s.clone(),
                color: *color,
                check: summary(closure.len(), budget),
            }),
            [] => Err(MatchError::UniverseExhausted("empty family".into())),
            _ => Err(MatchError::CertificateFailed(format!("{} colors occur with r = 1", colors.len()))),
        };
    }
    match full_match_or_avoid(s, c, r, budget)? {
        FullOrAvoid::FullMatch { b, t, rounds, check } => Ok(FullMatcher::FullMatch { b, t, rounds, check }),
        FullOrAvoid::AvoidingFamily { s: rest, .. } => find_full_matcher(&nu(&rest, budget.nu_cap), c, r - 1, budget),
    }
}

/// A verified family with monochromatic union closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct HindmanFamily<W: Word> {
    pub family: Family<W>,
    pub color: Color,
    /// Refinement levels produced before the tree search.
    pub levels: usize,
    /// Number of unions evaluated by the final check (`2^m - 1`).
    pub unions_checked: usize,
}

/// The common color of all `2^m - 1` unions of `family`, if there is one.
pub fn monochromatic_color<W: Word, C: ColoringOracle<W> + ?Sized>(family: &Family<W>, c: &C) -> Option<Color> {
    let members = family.members();
    let m = members.len();
    if m == 0 || m >= 24 {
        return None;
    }
    let first = c.color(members[0]);
    (1u32..1 << m)
        .map(|mask| support(&(0..m).filter(|&k| mask >> k & 1 == 1).map(|k| members[k]).collect::<Vec<_>>()))
        .all(|u| c.color(u) == first)
        .then_some(first)
}

/// Searches for `m` pairwise disjoint sets with monochromatic unions.
///
/// The full-matcher is iterated with refined colorings to produce levels of
/// candidate witnesses; the final tree search tries level members first,
/// then the last family, then the rest of the universe. Any returned family
/// is checked on all of its unions.
pub fn hindman_search<W: Word, C: ColoringOracle<W> + ?Sized>(
    c: &C,
    r: usize,
    m: usize,
    budget: &SearchBudget,
) -> Option<HindmanFamily<W>> {
    budget.validate().ok()?;
    if m == 0 {
        return None;
    }
    let universe: Family<W> = budget.universe();
    let mut current: SharedColoring<'_, W> = Arc::new(c);
    let mut t = universe.clone();
    let mut levels: Vec<Family<W>> = Vec::new();
    for _ in 0..budget.depth {
        let r_eff = colors_on(&t, &*current).len().max(r.min(2));
        match find_full_matcher(&t, &*current, r_eff, budget) {
            Ok(FullMatcher::MonochromaticFamily { s, .. }) => {
                levels.push(s);
                break;
            }
            Ok(FullMatcher::FullMatch { b, t: next, .. }) => {
                levels.push(b.clone());
                match refine_coloring(Arc::clone(&current), &b, &next, MatchMode::Full) {
                    Ok(refined) => current = Arc::new(refined),
                    Err(_) => break,
                }
                t = next;
            }
            Err(_) => break,
        }
    }
    let level_count = levels.len();
    let mut seen = BTreeSet::new();
    let candidates: Vec<BitSet<W>> = levels
        .iter()
        .flat_map(|l| l.iter())
        .chain(t.iter())
        .chain(universe.iter())
        .filter(|&x| seen.insert(x))
        .collect();
    let found = mono_dfs(&candidates, c, m, budget.max_nodes)?;
    let family = Family::new(found);
    let color = monochromatic_color(&family, c)?;
    Some(HindmanFamily { unions_checked: (1usize << family.len()) - 1, family, color, levels: level_count })
}

/// Depth-first search over `candidates` (in the given order) for `m`
/// pairwise disjoint sets whose unions share one color.
fn mono_dfs<W: Word, C: ColoringOracle<W> + ?Sized>(
    candidates: &[BitSet<W>],
    c: &C,
    m: usize,
    limit: usize,
) -> Option<Vec<BitSet<W>>> {
    #[allow(clippy::too_many_arguments)] // recursion state threaded explicitly
    fn go<W: Word, C: ColoringOracle<W> + ?Sized>(
        candidates: &[BitSet<W>],
        start: usize,
        c: &C,
        m: usize,
        chosen: &mut Vec<BitSet<W>>,
        unions: &[BitSet<W>],
        color: Option<Color>,
        nodes: &mut usize,
        limit: usize,
    ) -> bool {
        if chosen.len() == m {
            return true;
        }
        let used = support(chosen);
        for k in start..candidates.len() {
            let x = candidates[k];
            if !x.is_disjoint(used) {
                continue;
            }
            *nodes += unions.len() + 1;
            if *nodes > limit {
                return false;
            }
            let col = color.unwrap_or_else(|| c.color(x));
            if c.color(x) != col || unions.iter().any(|&u| c.color(u.union(x)) != col) {
                continue;
            }
            let mut next = unions.to_vec();
            next.push(x);
            next.extend(unions.iter().map(|&u| u.union(x)));
            chosen.push(x);
            if go(candidates, k + 1, c, m, chosen, &next, Some(col), nodes, limit) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(m);
    let mut nodes = 0;
    go(candidates, 0, c, m, &mut chosen, &[], None, &mut nodes, limit).then_some(chosen)
}

/// Lexicographically least family of `m` pairwise disjoint nonempty sets
/// with codes below `universe_bound` whose unions share one color.
pub fn brute_force_mono<W: Word, C: ColoringOracle<W> + ?Sized>(
    c: &C,
    m: usize,
    universe_bound: u128,
) -> Option<Family<W>> {
    if m == 0 {
        return None;
    }
    let universe: Family<W> = Family::all_below(universe_bound);
    mono_dfs(universe.members(), c, m, usize::MAX).map(Family::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{CardinalityParity, Constant, ContainsElement, RandomColoring};
    use crate::FinFamily;

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    fn singletons(n: u32) -> FinFamily {
        Family::new((0..n).map(|e| FinSet::singleton(e).unwrap()))
    }

    #[test]
    fn dichotomy_constant_is_second_case() {
        let b = Family::new([s("{0}")]);
        let out = half_match_dichotomy(&singletons(10), &b, &Constant(0), &SearchBudget::default()).unwrap();
        assert!(matches!(out, Dichotomy::SecondCase { .. }));
    }

    #[test]
    fn dichotomy_empty_b_returns_s() {
        let sf = singletons(6);
        match half_match_dichotomy(&sf, &Family::empty(), &CardinalityParity, &SearchBudget::default()).unwrap() {
            Dichotomy::SecondCase { t, .. } => assert_eq!(t, sf),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dichotomy_parity_branch_verifies_independently() {
        let b = Family::new([s("{0}")]);
        let sf = singletons(10);
        let c = CardinalityParity;
        match half_match_dichotomy(&sf, &b, &c, &SearchBudget::default()).unwrap() {
            Dichotomy::FirstCase { d, .. } => {
                let closure = nu_all(&d);
                for x in family_minus_family(&family_minus_family(&sf, &b), &d).iter() {
                    assert!(closure.iter().any(|dd| half_matches(&b, dd.union(x), &c).is_none()));
                }
            }
            Dichotomy::SecondCase { t, .. } => {
                for x in t.iter() {
                    assert!(half_matches(&b, x, &c).is_some());
                }
            }
        }
    }

    #[test]
    fn half_matcher_examples() {
        let budget = SearchBudget::default();
        let one = find_half_matcher(&singletons(8), &Constant(0), 1, &budget).unwrap();
        assert_eq!(one.rounds, 0);
        let hm = find_half_matcher(&singletons(12), &CardinalityParity, 2, &budget).unwrap();
        assert!(!hm.t.is_empty());
        assert_eq!(matches_family(&hm.b, &hm.t, &CardinalityParity, MatchMode::Half), None);
        let tiny = find_half_matcher(&singletons(1), &CardinalityParity, 2, &budget);
        assert!(matches!(tiny, Err(MatchError::UniverseExhausted(_))));
    }

    #[test]
    fn refined_colors() {
        let base: SharedColoring<'static, u64> = Arc::new(Constant(0));
        let b = Family::new([s("{0}")]);
        let domain = Family::new([s("{1}"), s("{2}"), s("{1,2}")]);
        let refined = refine_coloring(base, &b, &domain, MatchMode::Half).unwrap();
        for x in domain.iter() {
            assert_eq!(refined.refined_color(x), Some(RefinedColor { witness: s("{0}"), base: 0 }));
            assert!(refined.color(x) < refined.arity());
        }
        let rc = RefinedColor { witness: s("{3,5}"), base: 1 };
        assert_eq!(RefinedColor::decode(rc.encode().unwrap()), rc);
        let parity: SharedColoring<'static, u64> = Arc::new(CardinalityParity);
        let err = refine_coloring(parity, &b, &Family::new([s("{1}")]), MatchMode::Half);
        assert!(matches!(err, Err(MatchError::NoWitness { .. })));
    }

    #[test]
    fn full_or_avoid_examples() {
        let budget = SearchBudget::default();
        let out = full_match_or_avoid(&singletons(10), &Constant(0), 1, &budget).unwrap();
        assert!(matches!(out, FullOrAvoid::FullMatch { rounds: 1, .. }));
        let out = full_match_or_avoid(&singletons(10), &ContainsElement(0), 2, &budget).unwrap();
        match out {
            FullOrAvoid::AvoidingFamily { s: rest, avoided, .. } => {
                assert_eq!(avoided, 0);
                assert_eq!(rest, Family::new((1..10).map(|e| FinSet::singleton(e).unwrap())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn full_or_avoid_random_certificates() {
        let budget = SearchBudget { universe_bound: 1 << 6, ..SearchBudget::default() };
        for seed in 0..20 {
            let c = RandomColoring::new(seed, 2, 1 << 8);
            match full_match_or_avoid(&budget.universe::<u64>(), &c, 2, &budget) {
                Ok(FullOrAvoid::FullMatch { b, t, .. }) => {
                    assert_eq!(matches_family(&b, &t, &c, MatchMode::Full), None)
                }
                Ok(FullOrAvoid::AvoidingFamily { s: rest, avoided, .. }) => {
                    assert!(nu(&rest, budget.nu_cap).iter().all(|x| c.color(x) != avoided))
                }
                Err(MatchError::UniverseExhausted(_)) => {}
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
    }

    #[test]
    fn full_matcher_examples() {
        let budget = SearchBudget::default();
        let sf = singletons(12);
        assert!(matches!(
            find_full_matcher(&sf, &Constant(1), 1, &budget).unwrap(),
            FullMatcher::MonochromaticFamily { color: 1, .. }
        ));
        match find_full_matcher(&sf, &CardinalityParity, 2, &budget) {
            Ok(FullMatcher::FullMatch { b, t, .. }) => {
                assert_eq!(matches_family(&b, &t, &CardinalityParity, MatchMode::Full), None)
            }
            Ok(FullMatcher::MonochromaticFamily { s: fam, color, .. }) => {
                assert!(nu(&fam, budget.nu_cap).iter().all(|x| CardinalityParity.color(x) == color))
            }
            Err(e) => assert!(matches!(e, MatchError::UniverseExhausted(_)), "{e}"),
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_mono::<u64, _>(&Constant(0), 2, 8), Some(Family::new([s("{0}"), s("{1}")])));
        assert_eq!(
            brute_force_mono::<u64, _>(&CardinalityParity, 2, 1 << 6),
            Some(Family::new([s("{0,1}"), s("{2,3}")]))
        );
        assert_eq!(brute_force_mono::<u64, _>(&CardinalityParity, 1, 8), Some(Family::new([s("{0}")])));
        assert_eq!(brute_force_mono::<u64, _>(&Constant(0), 3, 2), None);
    }

    #[test]
    fn hindman_constant_takes_first_disjoint_sets() {
        let found = hindman_search::<u64, _>(&Constant(0), 1, 3, &SearchBudget::default()).unwrap();
        assert_eq!(found.family, Family::new([s("{0}"), s("{1}"), s("{2}")]));
        assert_eq!(found.unions_checked, 7);
    }

    #[test]
    fn hindman_agrees_with_brute_force() {
        let budget = SearchBudget::with_bound(1 << 8);
        for seed in 0..25 {
            let c = RandomColoring::new(seed, 2, 1 << 8);
            let h = hindman_search::<u64, _>(&c, 2, 2, &budget);
            let b = brute_force_mono::<u64, _>(&c, 2, 1 << 8);
            assert_eq!(h.is_some(), b.is_some(), "seed {seed}");
            if let Some(h) = h {
                assert_eq!(monochromatic_color(&h.family, &c), Some(h.color));
            }
        }
    }
}
