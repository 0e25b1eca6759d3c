use hindman_core::oracle::induced_integer_coloring;
use hindman_core::FinSet;
use serde_json::json;

use super::{Claim, ClaimContext, Counterexample, Evaluation, Outcome};

pub(super) fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "totality-determinism",
            summary: "every set below the bound gets a color in {0,1}, equal across two independent memo passes",
            run: totality,
        },
        Claim {
            id: "transport",
            summary: "the induced integer coloring agrees with the set coloring on carry-free sums",
            run: transport,
        },
    ]
}

fn totality(ctx: &ClaimContext) -> Outcome {
    let bound = ctx.config.bound;
    let memoized = ctx.coloring();
    let fresh = memoized.fresh();
    for code in 1..bound {
        let set = FinSet::from_code(code);
        let (a, b) = (memoized.bit(set), fresh.bit(set));
        if a > 1 || b > 1 || a != b {
            return Outcome::violated(
                bound.into(),
                Counterexample {
                    reason: format!("memoized color {a} differs from independent evaluation {b}"),
                    evaluations: vec![Evaluation::new(set, a), Evaluation::new(set, b)],
                    data: json!({ "trace": memoized.trace(set) }),
                },
            );
        }
    }
    Outcome::verified(bound.into(), json!({ "sets_checked": bound - 1 }))
}

/// `n ↦ c(supp n)` respects `a + b = a ∪ b` whenever `a & b = 0`.
fn transport(ctx: &ClaimContext) -> Outcome {
    let bits = ctx.config.bound_bits().min(12);
    let top = 1u64 << bits;
    let coloring = ctx.coloring();
    let induced = induced_integer_coloring(&*coloring);
    let mut pairs = 0u64;
    for a in 1..top {
        let free = !a & (top - 1);
        // walk the nonempty submasks b of the complement of a
        let mut b = free;
        while b > 0 {
            pairs += 1;
            let union = FinSet::from_code(a).union(FinSet::from_code(b));
            let by_set = coloring.bit(union);
            if induced(a + b) != u64::from(by_set) {
                return Outcome::violated(
                    top.into(),
                    Counterexample {
                        reason: format!("induced color of {} differs from the color of {union}", a + b),
                        evaluations: vec![Evaluation::new(union, by_set)],
                        data: json!({ "a": a, "b": b }),
                    },
                );
            }
            b = (b - 1) & free;
        }
    }
    Outcome::verified(top.into(), json!({ "carry_free_pairs": pairs }))
}
