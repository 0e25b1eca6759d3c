//! Finite, extensible catalogs of staged families and Σ₂ relations.
//!
//! Indices cycle over the entries, so every natural number names an entry.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::CatalogError;
use crate::pairing::{cantor_pair, cantor_unpair};
use crate::sigma2::{Sigma2Kind, Sigma2Relation};
use crate::staged::{Generator, StagedFamily};
use crate::{FinFamily, FinSet};

/// Universe on which Σ₂ bounds are certified at load time.
pub const DEFAULT_CERTIFY_BITS: u32 = 12;

/// On-disk catalog description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    #[serde(default)]
    pub families: Vec<Generator>,
    #[serde(default)]
    pub sigma2: Vec<Sigma2Kind>,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Size-`k` target families; generated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Vec<FinSet>>>,
}

fn default_k() -> usize {
    1
}

impl CatalogFile {
    pub fn builtin() -> Self {
        Self {
            families: vec![
                Generator::Singletons { delay: 0 },
                Generator::Singletons { delay: 2 },
                Generator::Interleaved { gap: 1 },
                Generator::DyadicBlocks,
                Generator::Finite { size: 2 },
            ],
            sigma2: vec![
                Sigma2Kind::TrivialTrue,
                Sigma2Kind::SubsetEvens,
                Sigma2Kind::MembershipThreshold { threshold: 2 },
                Sigma2Kind::DelayedWitness,
            ],
            k: 1,
            targets: None,
        }
    }

    /// Catalog with a single staged family and the builtin relations.
    pub fn single(generator: Generator) -> Self {
        Self { families: vec![generator], ..Self::builtin() }
    }

    /// Catalog with a single relation and the builtin families.
    pub fn single_relation(kind: Sigma2Kind) -> Self {
        Self { sigma2: vec![kind], ..Self::builtin() }
    }
}

/// A loaded catalog.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<Arc<StagedFamily>>,
    relations: Vec<Sigma2Relation>,
    k: usize,
    targets: Option<Vec<FinFamily>>,
    source: CatalogFile,
}

impl Catalog {
    pub fn from_file(file: CatalogFile) -> Result<Self, CatalogError> {
        Self::from_file_certified(file, DEFAULT_CERTIFY_BITS)
    }

    pub fn from_file_certified(file: CatalogFile, certify_bits: u32) -> Result<Self, CatalogError> {
        if file.families.is_empty() && file.sigma2.is_empty() {
            return Err(CatalogError::NoFamilies);
        }
        let entries = file
            .families
            .iter()
            .map(|g| StagedFamily::new(g.clone()).map(Arc::new))
            .collect::<Result<Vec<_>, _>>()?;
        let relations = file
            .sigma2
            .iter()
            .map(|k| Sigma2Relation::certify(k.clone(), certify_bits))
            .collect::<Result<Vec<_>, _>>()?;
        let targets = file
            .targets
            .as_ref()
            .map(|ts| ts.iter().map(|t| FinFamily::new(t.iter().copied())).collect());
        let catalog = Self { entries, relations, k: file.k, targets, source: file };
        catalog.check_targets(catalog.k)?;
        Ok(catalog)
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Parameter(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn builtin() -> Self {
        Self::from_file(CatalogFile::builtin()).expect("builtin catalog is valid")
    }

    pub fn source(&self) -> &CatalogFile {
        &self.source
    }

    pub fn entries(&self) -> &[Arc<StagedFamily>] {
        &self.entries
    }

    pub fn relations(&self) -> &[Sigma2Relation] {
        &self.relations
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `𝒲_i`, cycling over the entries.
    pub fn entry(&self, i: usize) -> Option<&Arc<StagedFamily>> {
        (!self.entries.is_empty()).then(|| &self.entries[i % self.entries.len()])
    }

    /// `φ_i`, cycling over the relations.
    pub fn relation(&self, i: usize) -> Option<&Sigma2Relation> {
        (!self.relations.is_empty()).then(|| &self.relations[i % self.relations.len()])
    }

    fn check_targets(&self, k: usize) -> Result<(), CatalogError> {
        if k == 0 {
            return Err(CatalogError::Parameter("k must be at least 1".into()));
        }
        if let (Some(ts), Some(raw)) = (&self.targets, &self.source.targets) {
            for (index, (t, r)) in ts.iter().zip(raw).enumerate() {
                if t.len() != r.len() {
                    return Err(CatalogError::BadTarget { index });
                }
                if t.len() != k {
                    return Err(CatalogError::TargetSize { index, found: t.len(), expected: k });
                }
            }
        }
        Ok(())
    }

    /// Pairs every size-`k` target family with every staged family.
    pub fn sized(&self, k: usize) -> Result<SizedFamilyCatalog, CatalogError> {
        if self.entries.is_empty() {
            return Err(CatalogError::NoFamilies);
        }
        self.check_targets(k)?;
        let targets = match &self.targets {
            Some(ts) => ts.clone(),
            None => default_targets(k),
        };
        if targets.is_empty() {
            return Err(CatalogError::Parameter("no target families".into()));
        }
        Ok(SizedFamilyCatalog { k, targets, entries: self.entries.clone() })
    }
}

/// All size-`k` families of nonempty subsets of `{0, .., b-1}`, for the
/// least `b ≥ 2` offering at least `k` sets.
pub fn default_targets(k: usize) -> Vec<FinFamily> {
    let mut b = 2u32;
    while (1usize << b) - 1 < k {
        b += 1;
    }
    let pool: Vec<FinSet> = (1..1u64 << b).map(FinSet::from_code).collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn combos(pool: &[FinSet], start: usize, k: usize, pick: &mut Vec<FinSet>, out: &mut Vec<FinFamily>) {
        if pick.len() == k {
            out.push(FinFamily::new(pick.iter().copied()));
            return;
        }
        for i in start..pool.len() {
            pick.push(pool[i]);
            combos(pool, i + 1, k, pick, out);
            pick.pop();
        }
    }
    combos(&pool, 0, k, &mut pick, &mut out);
    out
}

/// Indexed pairs `(𝒜_i, 𝒲_i)` with `|𝒜_i| = k`, enumerated by Cantor pairing
/// over (target index, staged index).
#[derive(Clone, Debug)]
pub struct SizedFamilyCatalog {
    k: usize,
    targets: Vec<FinFamily>,
    entries: Vec<Arc<StagedFamily>>,
}

impl SizedFamilyCatalog {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn targets(&self) -> &[FinFamily] {
        &self.targets
    }

    pub fn entries(&self) -> &[Arc<StagedFamily>] {
        &self.entries
    }

    /// Target and staged positions named by index `i`.
    pub fn positions(&self, i: usize) -> (usize, usize) {
        let (a, w) = cantor_unpair(i as u64);
        (a as usize % self.targets.len(), w as usize % self.entries.len())
    }

    /// `𝒜_i`.
    pub fn target(&self, i: usize) -> &FinFamily {
        &self.targets[self.positions(i).0]
    }

    /// `𝒲_i`.
    pub fn staged(&self, i: usize) -> &StagedFamily {
        &self.entries[self.positions(i).1]
    }

    /// Indices, in increasing order, naming the pair at the given positions.
    pub fn indices_of(&self, target: usize, entry: usize) -> impl Iterator<Item = usize> + '_ {
        let (t, e) = (self.targets.len() as u64, self.entries.len() as u64);
        (0u64..)
            .flat_map(move |r| (0..=r).map(move |w| (r - w, w)))
            .filter(move |&(a, w)| a % t == target as u64 && w % e == entry as u64)
            .filter_map(|(a, w)| cantor_pair(a, w))
            .map(|z| z as usize)
    }

    /// Least index naming the pair; always below `⟨target, entry⟩ + 1`.
    pub fn first_index(&self, target: usize, entry: usize) -> usize {
        cantor_pair(target as u64, entry as u64).expect("small positions") as usize
    }
}

/// The default catalog, its size-`k` pairing, and its relations.
pub fn builtin_catalogs() -> (Catalog, SizedFamilyCatalog, Vec<Sigma2Relation>) {
    let catalog = Catalog::builtin();
    let sized = catalog.sized(catalog.k()).expect("builtin catalog has families");
    let relations = catalog.relations().to_vec();
    (catalog, sized, relations)
}

/// Named builtin catalogs accepted wherever a catalog file is expected.
pub fn named_builtin(name: &str) -> Option<CatalogFile> {
    let file = match name {
        "builtin" | "default" => CatalogFile::builtin(),
        "singletons" => CatalogFile::single(Generator::Singletons { delay: 0 }),
        "delayed" => CatalogFile::single(Generator::Singletons { delay: 2 }),
        "interleaved" => CatalogFile::single(Generator::Interleaved { gap: 1 }),
        "dyadic" => CatalogFile::single(Generator::DyadicBlocks),
        "finite" => CatalogFile::single(Generator::Finite { size: 2 }),
        _ => return None,
    };
    Some(file)
}
