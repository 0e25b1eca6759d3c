//! Independent checks of matcher certificates.
//!
//! Each check restates the certificate's defining property and evaluates it
//! by brute force over the certificate's own data, without reusing the
//! search that produced it. `Err` names the first failing set.

use crate::finset::{BitSet, Word};
use crate::ip::{family_minus_family, half_matches, matches_family, nu, nu_all, Color, ColoringOracle, Family, MatchMode};
use crate::matcher::{Dichotomy, FullMatcher, FullOrAvoid, HalfMatcher, HindmanFamily, SearchBudget};

type Check = Result<(), String>;

fn disjoint<W: Word>(family: &Family<W>, what: &str) -> Check {
    if family.pairwise_disjoint() {
        Ok(())
    } else {
        Err(format!("{what} {family} is not pairwise disjoint"))
    }
}

fn constant_on<W: Word, C: ColoringOracle<W> + ?Sized>(family: &Family<W>, c: &C, color: Color) -> Check {
    match family.iter().find(|&x| c.color(x) != color) {
        Some(x) => Err(format!("{x} has color {} instead of {color}", c.color(x))),
        None => Ok(()),
    }
}

/// `s` is the family the dichotomy was run on and `b` the matching family.
pub fn dichotomy<W: Word, C: ColoringOracle<W> + ?Sized>(
    cert: &Dichotomy<W>,
    s: &Family<W>,
    b: &Family<W>,
    c: &C,
    budget: &SearchBudget,
) -> Check {
    match cert {
        Dichotomy::SecondCase { generators, t, .. } => {
            disjoint(generators, "generators")?;
            if *t != nu(generators, budget.nu_cap) {
                return Err("t is not the union closure of the generators".into());
            }
            if b.is_empty() {
                return Ok(());
            }
            match matches_family(b, t, c, MatchMode::Half) {
                Some(x) => Err(format!("{x} is not half-matched")),
                None => Ok(()),
            }
        }
        Dichotomy::FirstCase { d, .. } => {
            disjoint(d, "D")?;
            let pool = family_minus_family(s, b);
            if let Some(x) = d.iter().find(|&x| !pool.contains(x)) {
                return Err(format!("{x} is not a member of S − B"));
            }
            let closure = nu_all(d);
            let used = d.support();
            for x in pool.iter().filter(|x| x.is_disjoint(used)) {
                if closure.iter().all(|dd| half_matches(b, dd.union(x), c).is_some()) {
                    return Err(format!("{x} extends D"));
                }
            }
            Ok(())
        }
    }
}

pub fn half_matcher<W: Word, C: ColoringOracle<W> + ?Sized>(cert: &HalfMatcher<W>, c: &C) -> Check {
    if cert.t.is_empty() {
        return Err("empty matched family".into());
    }
    match matches_family(&cert.b, &cert.t, c, MatchMode::Half) {
        Some(x) => Err(format!("{x} is not half-matched")),
        None => Ok(()),
    }
}

pub fn full_match_or_avoid<W: Word, C: ColoringOracle<W> + ?Sized>(
    cert: &FullOrAvoid<W>,
    c: &C,
    budget: &SearchBudget,
) -> Check {
    match cert {
        FullOrAvoid::AvoidingFamily { s, avoided, .. } => match nu(s, budget.nu_cap).iter().find(|&x| c.color(x) == *avoided) {
            Some(x) => Err(format!("{x} has the avoided color {avoided}")),
            None if s.is_empty() => Err("empty avoiding family".into()),
            None => Ok(()),
        },
        FullOrAvoid::FullMatch { b, t, .. } => full_match(b, t, c),
    }
}

fn full_match<W: Word, C: ColoringOracle<W> + ?Sized>(b: &Family<W>, t: &Family<W>, c: &C) -> Check {
    if t.is_empty() {
        return Err("empty matched family".into());
    }
    match matches_family(b, t, c, MatchMode::Full) {
        Some(x) => Err(format!("{x} is not full-matched")),
        None => Ok(()),
    }
}

pub fn full_matcher<W: Word, C: ColoringOracle<W> + ?Sized>(cert: &FullMatcher<W>, c: &C, budget: &SearchBudget) -> Check {
    match cert {
        FullMatcher::MonochromaticFamily { s, color, .. } => {
            if s.is_empty() {
                return Err("empty family".into());
            }
            constant_on(&nu(s, budget.nu_cap), c, *color)
        }
        FullMatcher::FullMatch { b, t, .. } => full_match(b, t, c),
    }
}

/// All `2^m − 1` unions of `m` pairwise disjoint nonempty sets share `color`.
pub fn monochromatic<W: Word, C: ColoringOracle<W> + ?Sized>(family: &Family<W>, color: Color, m: usize, c: &C) -> Check {
    let members = family.members();
    if members.len() != m || members.iter().any(|x| x.is_empty()) {
        return Err(format!("{family} is not {m} nonempty sets"));
    }
    disjoint(family, "family")?;
    for mask in 1u64..1 << m {
        let union = (0..m).filter(|k| mask >> k & 1 == 1).fold(BitSet::empty(), |acc, k| acc.union(members[k]));
        if c.color(union) != color {
            return Err(format!("union {union} has color {}", c.color(union)));
        }
    }
    Ok(())
}

pub fn hindman<W: Word, C: ColoringOracle<W> + ?Sized>(cert: &HindmanFamily<W>, m: usize, c: &C) -> Check {
    monochromatic(&cert.family, cert.color, m, c)
}
