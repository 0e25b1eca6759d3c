//! Claim suites run by `verify`, one per coloring.
//!
//! A claim is a deterministic function of the coloring, the catalog and the
//! campaign bounds. It reports `verified`, `exhausted` (the bounded search
//! could not decide) or `violated` together with a counterexample that the
//! `replay` command reproduces by running the claim again.

use std::sync::Arc;

use hindman_core::colorings::{
    build_coloring, BuildOptions, CatalogColoring, Coloring31, Coloring32, Coloring33, Coloring34, ColoringId,
};
use hindman_core::{Catalog, CatalogError, FinSet, SizedFamilyCatalog};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::CampaignConfig;

mod common;
mod s31;
mod s32;
mod s33;
mod s34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Exhausted,
    Violated,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Exhausted => "exhausted",
            Status::Violated => "violated",
        }
    }
}

/// One color evaluation quoted as evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub set: FinSet,
    pub code: u64,
    pub color: u8,
}

impl Evaluation {
    pub fn new(set: FinSet, color: u8) -> Self {
        Self { set, code: set.code(), color }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub reason: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub universe_bound: u128,
    pub witness: Value,
    pub counterexample: Option<Counterexample>,
}

impl Outcome {
    pub fn verified(universe_bound: u128, witness: Value) -> Self {
        Self { status: Status::Verified, universe_bound, witness, counterexample: None }
    }

    pub fn exhausted(universe_bound: u128, witness: Value) -> Self {
        Self { status: Status::Exhausted, universe_bound, witness, counterexample: None }
    }

    pub fn violated(universe_bound: u128, counterexample: Counterexample) -> Self {
        Self { status: Status::Violated, universe_bound, witness: Value::Null, counterexample: Some(counterexample) }
    }
}

/// A named claim and its checker.
#[derive(Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub summary: &'static str,
    run: fn(&ClaimContext) -> Outcome,
}

impl Claim {
    pub fn run(&self, ctx: &ClaimContext) -> Outcome {
        (self.run)(ctx)
    }
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).finish()
    }
}

/// Everything a claim needs; each claim builds its own colorings so claims
/// can run on separate threads without sharing memo tables.
pub struct ClaimContext {
    pub id: ColoringId,
    pub catalog: Arc<Catalog>,
    pub config: CampaignConfig,
    sized: Option<Arc<SizedFamilyCatalog>>,
}

impl ClaimContext {
    /// Validates that the catalog supports the coloring.
    pub fn new(id: ColoringId, catalog: Arc<Catalog>, config: CampaignConfig) -> Result<Self, CatalogError> {
        build_coloring(id, &catalog, BuildOptions { fault: None, cap: Some(config.cap) })?;
        let sized = match id {
            ColoringId::C32 { k } => Some(Arc::new(catalog.sized(k.unwrap_or(catalog.k()))?)),
            _ => None,
        };
        Ok(Self { id, catalog, config, sized })
    }

    /// The coloring under test, carrying the injected fault if any.
    pub fn coloring(&self) -> Box<dyn CatalogColoring> {
        let options = BuildOptions { fault: self.config.fault, cap: Some(self.config.cap) };
        build_coloring(self.id, &self.catalog, options).expect("validated in ClaimContext::new")
    }

    pub fn c31(&self) -> Coloring31 {
        Coloring31::new(Arc::clone(&self.catalog)).with_fault(self.config.fault)
    }

    pub fn c32(&self) -> Coloring32 {
        let sized = self.sized.as_ref().expect("context built for c32");
        Coloring32::new(Arc::clone(sized)).with_fault(self.config.fault)
    }

    pub fn c33(&self) -> Coloring33 {
        Coloring33::new(Arc::clone(&self.catalog)).with_fault(self.config.fault)
    }

    pub fn c34(&self) -> Coloring34 {
        Coloring34::new(Arc::clone(&self.catalog), self.config.cap).with_fault(self.config.fault)
    }
}

/// The claims checked for `id`, in report order.
pub fn suite(id: ColoringId) -> Vec<Claim> {
    let mut claims = common::claims();
    claims.extend(match id {
        ColoringId::C31 => s31::claims(),
        ColoringId::C32 { .. } => s32::claims(),
        ColoringId::C33 => s33::claims(),
        ColoringId::C34 => s34::claims(),
    });
    claims
}

pub fn find(id: ColoringId, claim: &str) -> Option<Claim> {
    suite(id).into_iter().find(|c| c.id == claim)
}

fn set_json(set: FinSet) -> Value {
    json!({ "set": set, "code": set.code() })
}

fn bits_bound(bits: u32) -> u128 {
    1u128 << bits.min(127)
}

/// Exclusive code bound covering every set with `max ≤ max_element`.
fn bound_for_max(max_element: u32) -> u128 {
    bits_bound(max_element + 1)
}

/// Combines per-instance outcomes: any violation wins, then any exhaustion.
fn combine(universe_bound: u128, instances: Vec<Value>, violation: Option<Counterexample>, exhausted: bool) -> Outcome {
    match violation {
        Some(cx) => Outcome::violated(universe_bound, cx),
        None if exhausted => Outcome::exhausted(universe_bound, json!({ "instances": instances })),
        None => Outcome::verified(universe_bound, json!({ "instances": instances })),
    }
}
