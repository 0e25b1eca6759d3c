//! Stagewise enumerations standing in for computably enumerable families.
//!
//! A [`StagedFamily`] maps a stage `s` to a finite family, monotone in `s`.
//! The generator kinds form a closed set so that catalog files stay
//! declarative.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::CatalogError;
use crate::{FinFamily, FinSet};

const WIDTH: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitMember {
    pub set: FinSet,
    #[serde(default)]
    pub stage: u32,
}

/// Declarative description of a staged family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `{n}` appears at stage `n + delay`.
    Singletons {
        #[serde(default)]
        delay: u32,
    },
    /// `{n, n + gap}` appears at stage `n + gap`; consecutive members overlap
    /// or interleave, so greedy witness selection has to skip slots.
    Interleaved { gap: u32 },
    /// `{2^j, .., 2^(j+1) - 1}` appears at stage `2^(j+1)`.
    DyadicBlocks,
    /// `{j}` for `j < size`, appearing at stage `j`; never IP-generating.
    Finite { size: u32 },
    /// Fixed members with their first stages.
    Explicit { members: Vec<ExplicitMember> },
}

impl Generator {
    pub fn validate(&self) -> Result<(), CatalogError> {
        match *self {
            Generator::Interleaved { gap } if gap == 0 || gap >= WIDTH => Err(
                CatalogError::Parameter(format!("interleaved gap must be in 1..{WIDTH}, got {gap}")),
            ),
            Generator::Finite { size } if size > WIDTH => Err(CatalogError::Parameter(format!(
                "finite size must be at most {WIDTH}, got {size}"
            ))),
            Generator::Explicit { ref members } if members.iter().any(|m| m.set.is_empty()) => {
                Err(CatalogError::Parameter("explicit members must be nonempty".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Singletons { delay: 0 } => "singletons".into(),
            Generator::Singletons { delay } => format!("singletons(delay={delay})"),
            Generator::Interleaved { gap } => format!("interleaved(gap={gap})"),
            Generator::DyadicBlocks => "dyadic_blocks".into(),
            Generator::Finite { size } => format!("finite(size={size})"),
            Generator::Explicit { members } => format!("explicit({} members)", members.len()),
        }
    }

    fn compute(&self, s: u32) -> FinFamily {
        let single = |n: u32| FinSet::singleton(n).expect("element below width");
        match self {
            Generator::Singletons { delay } => {
                let top = s.checked_sub(*delay).map(|t| t.min(WIDTH - 1));
                FinFamily::new(top.into_iter().flat_map(|t| (0..=t).map(single)))
            }
            Generator::Interleaved { gap } => {
                let top = s.checked_sub(*gap).map(|t| t.min(WIDTH - 1 - gap));
                FinFamily::new(
                    top.into_iter()
                        .flat_map(|t| (0..=t).map(|n| single(n).union(single(n + gap)))),
                )
            }
            Generator::DyadicBlocks => FinFamily::new(
                (0..6u32)
                    .filter(|&j| 2u64 << j <= u64::from(s))
                    .map(|j| FinSet::interval(1 << j, (2 << j) - 1).expect("block below width")),
            ),
            Generator::Finite { size } => FinFamily::new((0..*size).filter(|&j| j <= s).map(single)),
            Generator::Explicit { members } => {
                FinFamily::new(members.iter().filter(|m| m.stage <= s).map(|m| m.set))
            }
        }
    }
}

/// A monotone stage map `s ↦ W_s` with a memo table.
pub struct StagedFamily {
    generator: Generator,
    memo: Mutex<HashMap<u32, Arc<FinFamily>>>,
}

impl StagedFamily {
    pub fn new(generator: Generator) -> Result<Self, CatalogError> {
        generator.validate()?;
        Ok(Self { generator, memo: Mutex::new(HashMap::new()) })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn description(&self) -> String {
        self.generator.label()
    }

    /// The family enumerated by stage `s`.
    pub fn stage(&self, s: u32) -> Arc<FinFamily> {
        if let Some(hit) = self.memo.lock().expect("stage memo poisoned").get(&s) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(self.generator.compute(s));
        let mut memo = self.memo.lock().expect("stage memo poisoned");
        Arc::clone(memo.entry(s).or_insert(computed))
    }
}

impl Clone for StagedFamily {
    fn clone(&self) -> Self {
        Self { generator: self.generator.clone(), memo: Mutex::new(HashMap::new()) }
    }
}

impl fmt::Debug for StagedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StagedFamily").field("generator", &self.generator).finish()
    }
}

/// Stage `s` of `family`; free-function form of [`StagedFamily::stage`].
pub fn stage(family: &StagedFamily, s: u32) -> Arc<FinFamily> {
    family.stage(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staged(g: Generator) -> StagedFamily {
        StagedFamily::new(g).unwrap()
    }

    fn fam(sets: &[&str]) -> FinFamily {
        FinFamily::new(sets.iter().map(|t| t.parse::<FinSet>().unwrap()))
    }

    #[test]
    fn singleton_stages() {
        let w = staged(Generator::Singletons { delay: 0 });
        assert_eq!(*w.stage(3), fam(&["{0}", "{1}", "{2}", "{3}"]));
        let delayed = staged(Generator::Singletons { delay: 2 });
        assert!(delayed.stage(1).is_empty());
        assert_eq!(*delayed.stage(2), fam(&["{0}"]));
        assert_eq!(w.stage(500).len(), 64);
    }

    #[test]
    fn dyadic_stage_eight() {
        let w = staged(Generator::DyadicBlocks);
        assert_eq!(*w.stage(8), fam(&["{1}", "{2,3}", "{4,5,6,7}"]));
        assert_eq!(*w.stage(7), fam(&["{1}", "{2,3}"]));
        assert_eq!(w.stage(1000).len(), 6);
    }

    #[test]
    fn interleaved_and_finite() {
        let w = staged(Generator::Interleaved { gap: 1 });
        assert_eq!(*w.stage(2), fam(&["{0,1}", "{1,2}"]));
        let f = staged(Generator::Finite { size: 2 });
        assert_eq!(*f.stage(100), fam(&["{0}", "{1}"]));
        assert!(StagedFamily::new(Generator::Interleaved { gap: 0 }).is_err());
    }

    #[test]
    fn every_builtin_kind_is_monotone() {
        let kinds = [
            Generator::Singletons { delay: 0 },
            Generator::Singletons { delay: 3 },
            Generator::Interleaved { gap: 1 },
            Generator::Interleaved { gap: 3 },
            Generator::DyadicBlocks,
            Generator::Finite { size: 2 },
            Generator::Explicit {
                members: vec![
                    ExplicitMember { set: "{4,5}".parse().unwrap(), stage: 9 },
                    ExplicitMember { set: "{1}".parse().unwrap(), stage: 2 },
                ],
            },
        ];
        for g in kinds {
            let w = staged(g);
            for s in 0..63 {
                assert!(w.stage(s).is_subfamily(&w.stage(s + 1)), "{} at {s}", w.description());
            }
        }
    }

    #[test]
    fn generator_json_forms() {
        let g: Generator = serde_json::from_str(r#"{"kind":"singletons","delay":2}"#).unwrap();
        assert_eq!(g, Generator::Singletons { delay: 2 });
        let g: Generator = serde_json::from_str(r#"{"kind":"dyadic_blocks"}"#).unwrap();
        assert_eq!(g, Generator::DyadicBlocks);
        assert!(serde_json::from_str::<Generator>(r#"{"kind":"turing_machine"}"#).is_err());
    }
}
