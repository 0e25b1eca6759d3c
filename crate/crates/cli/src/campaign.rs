//! Runs a claim suite, optionally on several worker threads.
//!
//! Claims are independent and build their own memo tables, so they may run
//! in any order; records are collected back in suite order, which keeps the
//! report identical for every worker count.

use std::time::Instant;

use rayon::prelude::*;

use crate::claims::{suite, Claim, ClaimContext};
use crate::error::CliError;
use crate::report::ClaimRecord;

pub fn run_claim(claim: &Claim, ctx: &ClaimContext) -> ClaimRecord {
    let start = Instant::now();
    let outcome = claim.run(ctx);
    let ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
    ClaimRecord::new(claim.id, claim.summary, outcome, ms)
}

/// Runs the suite for the context's coloring, restricted to `only` when given.
pub fn run_suite(ctx: &ClaimContext, workers: usize, only: &[String]) -> Result<Vec<ClaimRecord>, CliError> {
    let claims: Vec<Claim> = suite(ctx.id).into_iter().filter(|c| only.is_empty() || only.iter().any(|o| o == c.id)).collect();
    if let Some(unknown) = only.iter().find(|o| !claims.iter().any(|c| c.id == o.as_str())) {
        return Err(CliError::Usage(format!("unknown claim {unknown:?} for {}", ctx.id)));
    }
    if workers <= 1 {
        return Ok(claims.iter().map(|c| run_claim(c, ctx)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| claims.par_iter().map(|c| run_claim(c, ctx)).collect()))
}
