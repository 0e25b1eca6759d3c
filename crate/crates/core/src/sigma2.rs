//! Decidable ternary relations `R(x, y, Z)` presenting `φ(Z) = ∃x ∀y R`.
//!
//! Every relation carries certified quantifier bounds so that the true value
//! of `φ` can be computed on a bounded universe. The bounds are checked
//! against a direct decision procedure when the relation is loaded.

use serde::{Deserialize, Serialize};

use crate::error::CatalogError;
use crate::FinSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sigma2Kind {
    /// `R ≡ true`.
    TrivialTrue,
    /// `R ≡ false`.
    TrivialFalse,
    /// `R(x, y, Z) = x ∈ Z ∧ x ≥ threshold`; `φ(Z)` iff `max Z ≥ threshold`.
    MembershipThreshold {
        #[serde(default)]
        threshold: u32,
    },
    /// `R(x, y, Z) = Z ⊆ evens`, independent of `x` and `y`.
    SubsetEvens,
    /// `R(x, y, Z) = Z ≠ ∅ ∧ x ≥ min Z ∧ ¬(|Z| even ∧ y ≥ x + max Z)`.
    ///
    /// `φ(Z)` iff `|Z|` is odd, but the witness `x` must reach `min Z` and
    /// refutations of even sets only appear at `y = x + max Z`.
    DelayedWitness,
}

impl Sigma2Kind {
    pub fn label(&self) -> String {
        match self {
            Sigma2Kind::TrivialTrue => "trivial_true".into(),
            Sigma2Kind::TrivialFalse => "trivial_false".into(),
            Sigma2Kind::MembershipThreshold { threshold } => {
                format!("membership_threshold(threshold={threshold})")
            }
            Sigma2Kind::SubsetEvens => "subset_evens".into(),
            Sigma2Kind::DelayedWitness => "delayed_witness".into(),
        }
    }

    pub fn holds(&self, x: u32, y: u32, z: FinSet) -> bool {
        match *self {
            Sigma2Kind::TrivialTrue => true,
            Sigma2Kind::TrivialFalse => false,
            Sigma2Kind::MembershipThreshold { threshold } => x >= threshold && z.contains(x),
            Sigma2Kind::SubsetEvens => is_subset_of_evens(z),
            Sigma2Kind::DelayedWitness => match (z.min(), z.max()) {
                (Some(lo), Some(hi)) => x >= lo && !(z.len().is_multiple_of(2) && y >= x + hi),
                _ => false,
            },
        }
    }

    /// Direct decision procedure for `φ`, used only to certify bounds.
    pub fn decide(&self, z: FinSet) -> bool {
        match *self {
            Sigma2Kind::TrivialTrue => true,
            Sigma2Kind::TrivialFalse => false,
            Sigma2Kind::MembershipThreshold { threshold } => z.max().is_some_and(|m| m >= threshold),
            Sigma2Kind::SubsetEvens => is_subset_of_evens(z),
            Sigma2Kind::DelayedWitness => z.len() % 2 == 1,
        }
    }

    fn x_bound(&self) -> u32 {
        match self {
            Sigma2Kind::TrivialTrue | Sigma2Kind::TrivialFalse | Sigma2Kind::SubsetEvens => 0,
            Sigma2Kind::MembershipThreshold { .. } | Sigma2Kind::DelayedWitness => 63,
        }
    }

    fn y_bound(&self, x: u32, z: FinSet) -> u32 {
        match self {
            Sigma2Kind::DelayedWitness => x + z.max().unwrap_or(0),
            _ => 0,
        }
    }
}

fn is_subset_of_evens(z: FinSet) -> bool {
    z.code() & 0xAAAA_AAAA_AAAA_AAAA == 0
}

/// A relation whose bounds have been certified on a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma2Relation {
    kind: Sigma2Kind,
    certified_bits: u32,
}

impl Sigma2Relation {
    /// Certifies the bounds against [`Sigma2Kind::decide`] for every set with
    /// code below `2^universe_bits`.
    pub fn certify(kind: Sigma2Kind, universe_bits: u32) -> Result<Self, CatalogError> {
        if let Sigma2Kind::MembershipThreshold { threshold } = kind {
            if threshold >= 64 {
                return Err(CatalogError::Parameter(format!(
                    "membership threshold must be below 64, got {threshold}"
                )));
            }
        }
        let relation = Self { kind, certified_bits: universe_bits.min(63) };
        let bad = (0..1u64 << relation.certified_bits)
            .map(FinSet::from_code)
            .find(|&z| relation.truth(z) != relation.kind.decide(z));
        match bad {
            Some(z) => Err(CatalogError::BoundCertification {
                relation: relation.kind.label(),
                set: z.to_string(),
            }),
            None => Ok(relation),
        }
    }

    pub fn kind(&self) -> &Sigma2Kind {
        &self.kind
    }

    pub fn certified_bits(&self) -> u32 {
        self.certified_bits
    }

    pub fn label(&self) -> String {
        self.kind.label()
    }

    pub fn holds(&self, x: u32, y: u32, z: FinSet) -> bool {
        self.kind.holds(x, y, z)
    }

    pub fn x_bound(&self) -> u32 {
        self.kind.x_bound()
    }

    /// Bound on the universal quantifier, valid for every `x`.
    pub fn y_bound(&self, x: u32, z: FinSet) -> u32 {
        self.kind.y_bound(x, z)
    }

    /// `∃x ≤ p ∀y ≤ q R(x, y, z)`.
    pub fn eval_bounded(&self, p: u32, q: u32, z: FinSet) -> bool {
        (0..=p).any(|x| (0..=q).all(|y| self.holds(x, y, z)))
    }

    /// `∃x ≤ p ∀y R(x, y, z)`, the universal quantifier settled by the
    /// certified bound.
    pub fn exists_witness_upto(&self, p: u32, z: FinSet) -> bool {
        (0..=p).any(|x| (0..=self.y_bound(x, z)).all(|y| self.holds(x, y, z)))
    }

    /// Least `x` with `∀y R(x, y, z)`, if `φ(z)`.
    pub fn least_witness(&self, z: FinSet) -> Option<u32> {
        (0..=self.x_bound()).find(|&x| (0..=self.y_bound(x, z)).all(|y| self.holds(x, y, z)))
    }

    /// Least `y ≤ ` the certified bound refuting `R(x, ·, z)`, if any.
    pub fn least_refutation(&self, x: u32, z: FinSet) -> Option<u32> {
        (0..=self.y_bound(x, z)).find(|&y| !self.holds(x, y, z))
    }

    /// True value of `φ(z)`.
    pub fn truth(&self, z: FinSet) -> bool {
        self.exists_witness_upto(self.x_bound(), z)
    }
}

/// `∃x ≤ p ∀y ≤ q R(x, y, t)`.
pub fn sigma2_eval_bounded(relation: &Sigma2Relation, p: u32, q: u32, t: FinSet) -> bool {
    relation.eval_bounded(p, q, t)
}

/// True value of the Σ₂ formula on `t`.
pub fn sigma2_truth(relation: &Sigma2Relation, t: FinSet) -> bool {
    relation.truth(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(kind: Sigma2Kind) -> Sigma2Relation {
        Sigma2Relation::certify(kind, 10).unwrap()
    }

    fn s(t: &str) -> FinSet {
        t.parse().unwrap()
    }

    #[test]
    fn bounded_eval_examples() {
        let t = rel(Sigma2Kind::TrivialTrue);
        assert!(sigma2_eval_bounded(&t, 0, 0, s("{5}")));
        let member = rel(Sigma2Kind::MembershipThreshold { threshold: 0 });
        assert!(!sigma2_eval_bounded(&member, 0, 0, s("{1}")));
        assert!(sigma2_eval_bounded(&member, 1, 9, s("{1}")));
    }

    #[test]
    fn truth_examples() {
        assert!(sigma2_truth(&rel(Sigma2Kind::TrivialTrue), s("{3}")));
        let evens = rel(Sigma2Kind::SubsetEvens);
        assert!(sigma2_truth(&evens, s("{2,4}")));
        assert!(!sigma2_truth(&evens, s("{1}")));
        // independent oracle: direct subset test
        for code in 0..1024u64 {
            let z = FinSet::from_code(code);
            assert_eq!(sigma2_truth(&evens, z), z.iter().all(|e| e % 2 == 0));
        }
    }

    #[test]
    fn delayed_witness_needs_large_quantifier_bounds() {
        let d = rel(Sigma2Kind::DelayedWitness);
        let z = s("{3,5}");
        // an even set looks true until y reaches x + max Z
        assert!(d.eval_bounded(3, 7, z));
        assert!(!d.eval_bounded(3, 8, z));
        assert!(!d.truth(z));
        // odd sets need x ≥ min Z
        assert!(!d.eval_bounded(2, 100, s("{3}")));
        assert!(d.eval_bounded(3, 100, s("{3}")));
        assert_eq!(d.least_witness(s("{3}")), Some(3));
        assert_eq!(d.least_refutation(3, z), Some(8));
    }

    #[test]
    fn certification_rejects_bad_parameters() {
        assert!(Sigma2Relation::certify(Sigma2Kind::MembershipThreshold { threshold: 70 }, 4).is_err());
    }

    #[test]
    fn kinds_parse() {
        let k: Sigma2Kind =
            serde_json::from_str(r#"{"kind":"membership_threshold","threshold":3}"#).unwrap();
        assert_eq!(k, Sigma2Kind::MembershipThreshold { threshold: 3 });
        assert!(serde_json::from_str::<Sigma2Kind>(r#"{"kind":"halting"}"#).is_err());
    }
}
