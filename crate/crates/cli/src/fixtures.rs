//! Colorings addressable from the command line.
//!
//! Besides the catalog colorings (`c31`, `c32:k=2`, ...) a few fixtures are
//! available for searches and matcher runs:
//! `const[:C]`, `parity`, `contains[:N]` and `random:seed=N[,r=R]`.

use std::path::Path;
use std::sync::Arc;

use hindman_core::catalog::named_builtin;
use hindman_core::colorings::{build_coloring, BuildOptions, CandidateCap, CatalogColoring, ColoringId};
use hindman_core::oracle::{CardinalityParity, Constant, ContainsElement, RandomColoring};
use hindman_core::{Catalog, CatalogFile, ColoringOracle};

use crate::error::CliError;
use crate::report::CatalogRef;

/// Largest table a random fixture tabulates.
const RANDOM_TABLE_LIMIT: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    Constant(u64),
    Parity,
    Contains(u32),
    Random { seed: u64, arity: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColoringSpec {
    Catalog(ColoringId),
    Fixture(Fixture),
}

fn number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CliError> {
    text.trim().parse().map_err(|_| CliError::Usage(format!("invalid {what} {text:?}")))
}

impl std::str::FromStr for ColoringSpec {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let (head, rest) = text.split_once(':').map_or((text, None), |(h, r)| (h, Some(r)));
        let fixture = match (head, rest) {
            ("const", None) => Fixture::Constant(0),
            ("const", Some(c)) => Fixture::Constant(number(c, "color")?),
            ("parity", None) => Fixture::Parity,
            ("contains", None) => Fixture::Contains(0),
            ("contains", Some(e)) => Fixture::Contains(number(e, "element")?),
            ("random", Some(params)) => {
                let (mut seed, mut arity) = (None, 2);
                for part in params.split(',') {
                    match part.split_once('=') {
                        Some(("seed", v)) => seed = Some(number(v, "seed")?),
                        Some(("r", v)) => arity = number(v, "arity")?,
                        _ => return Err(CliError::Usage(format!("invalid random parameter {part:?}"))),
                    }
                }
                let seed = seed.ok_or_else(|| CliError::Usage("random fixture needs seed=N".into()))?;
                if !(1..=256).contains(&arity) {
                    return Err(CliError::Usage(format!("arity {arity} outside 1..=256")));
                }
                Fixture::Random { seed, arity }
            }
            _ => {
                return text
                    .parse::<ColoringId>()
                    .map(ColoringSpec::Catalog)
                    .map_err(|e| CliError::Usage(e.to_string()))
            }
        };
        Ok(ColoringSpec::Fixture(fixture))
    }
}

/// Loads a catalog from a file path or a builtin name (`builtin`, `singletons`, ...).
pub fn load_catalog(reference: &str) -> Result<(Arc<Catalog>, CatalogRef), CliError> {
    let file = match named_builtin(reference) {
        Some(file) => file,
        None => {
            let path = Path::new(reference);
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str::<CatalogFile>(&text)
                .map_err(|e| CliError::Usage(format!("{reference}: invalid catalog: {e}")))?
        }
    };
    let catalog = Catalog::from_file(file.clone())?;
    Ok((Arc::new(catalog), CatalogRef { reference: reference.to_string(), definition: file }))
}

pub fn catalog_coloring(
    id: ColoringId,
    catalog: &Arc<Catalog>,
    cap: CandidateCap,
) -> Result<Box<dyn CatalogColoring>, CliError> {
    Ok(build_coloring(id, catalog, BuildOptions { fault: None, cap: Some(cap) })?)
}

/// Builds any coloring as a plain oracle; random tables cover codes below `bound`.
pub fn oracle(
    spec: ColoringSpec,
    catalog: impl FnOnce() -> Result<Arc<Catalog>, CliError>,
    bound: u128,
) -> Result<Box<dyn ColoringOracle<u64> + Send>, CliError> {
    Ok(match spec {
        ColoringSpec::Catalog(id) => catalog_coloring(id, &catalog()?, CandidateCap::default())?,
        ColoringSpec::Fixture(Fixture::Constant(c)) => Box::new(Constant(c)),
        ColoringSpec::Fixture(Fixture::Parity) => Box::new(CardinalityParity),
        ColoringSpec::Fixture(Fixture::Contains(e)) => Box::new(ContainsElement(e)),
        ColoringSpec::Fixture(Fixture::Random { seed, arity }) => {
            if bound > RANDOM_TABLE_LIMIT {
                return Err(CliError::Usage(format!("random fixtures tabulate at most {RANDOM_TABLE_LIMIT} codes")));
            }
            Box::new(RandomColoring::new(seed, arity, bound as usize))
        }
    })
}
