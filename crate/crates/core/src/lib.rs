//! Computable colorings of finite sets that defeat effective witnesses to the
//! finite unions theorem, together with bounded executable versions of the
//! half-match / full-match proof of the theorem.
//!
//! Sets are bit words ([`BitSet`]); the set-algebra and matching layers are
//! generic over the word, while the catalog-driven colorings work on 64-bit
//! sets ([`FinSet`]).

pub mod catalog;
pub mod certify;
pub mod colorings;
pub mod error;
pub mod finset;
pub mod ip;
pub mod matcher;
pub mod oracle;
pub mod pairing;
pub mod sigma2;
pub mod staged;

pub use catalog::{Catalog, CatalogFile, SizedFamilyCatalog};
pub use error::{CatalogError, ColoringError, FinSetError, MatchError};
pub use finset::{BitSet, Word};
pub use ip::{Color, ColoringOracle, Family};
pub use sigma2::{Sigma2Kind, Sigma2Relation};
pub use staged::{Generator, StagedFamily};

/// Finite sets of naturals below 64.
pub type FinSet = BitSet<u64>;
/// Finite sets of naturals below 32.
pub type SmallFinSet = BitSet<u32>;
/// Finite sets of naturals below 128.
pub type WideFinSet = BitSet<u128>;

pub type FinFamily = Family<u64>;
pub type SmallFamily = Family<u32>;
pub type WideFamily = Family<u128>;
