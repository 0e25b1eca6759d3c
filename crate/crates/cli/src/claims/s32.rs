use hindman_core::colorings::{stabilization_stage, CatalogColoring};
use hindman_core::error::ColoringError;
use hindman_core::ip::generates_ip_at_scale;
use hindman_core::FinSet;
use serde_json::json;

use super::{bits_bound, bound_for_max, combine, Claim, ClaimContext, Counterexample, Evaluation, Outcome};

/// Disjoint members a family must show to count as IP-generating.
const DEFEAT_SCALE: usize = 6;

pub(super) fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "s32-witness-order",
            summary: "defined witnesses W^u_{i,s} satisfy i < min W and form increasing blocks",
            run: witness_order,
        },
        Claim {
            id: "s32-uniqueness",
            summary: "at most one correct unblocked decomposition, for every B with max B ≤ scan_max",
            run: uniqueness,
        },
        Claim {
            id: "s32-defeat",
            summary: "for each target A and IP-generating W some v ≤ k and B give c(A ∪ W^v ∪ B) = 1 - c(W^v ∪ B)",
            run: defeat,
        },
    ]
}

fn witness_order(ctx: &ClaimContext) -> Outcome {
    let horizon = ctx.config.horizon.min(63);
    let c = ctx.c32();
    let mut slots = 0usize;
    for s in 0..=horizon {
        let grid = c.grid(s);
        let mut previous: Option<FinSet> = None;
        for (i, u, w) in grid.defined() {
            slots += 1;
            let lo = w.min().expect("witnesses are nonempty");
            let above_row = lo > i as u32;
            let after_previous = previous.is_none_or(|p| p.max().expect("nonempty") < lo);
            if !above_row || !after_previous {
                return Outcome::violated(
                    bits_bound(s + 1),
                    Counterexample {
                        reason: format!("witness W^{u}_{{{i},{s}}} = {w} breaks the block order"),
                        evaluations: Vec::new(),
                        data: json!({ "stage": s, "i": i, "u": u, "witness": w, "previous": previous }),
                    },
                );
            }
            previous = Some(w);
        }
    }
    Outcome::verified(bits_bound(horizon + 1), json!({ "stages": horizon + 1, "slots_checked": slots }))
}

fn uniqueness(ctx: &ClaimContext) -> Outcome {
    let c = ctx.c32();
    let bound = bound_for_max(ctx.config.scan_max);
    for code in 1..bound as u64 {
        let set = FinSet::from_code(code);
        if let Err(ColoringError::MultipleCorrectUnblocked { count, .. }) = c.color_checked(set) {
            let winners: Vec<_> = c.decompositions(set).into_iter().filter(|d| d.is_correct_unblocked()).collect();
            return Outcome::violated(
                bound,
                Counterexample {
                    reason: format!("{set} has {count} correct unblocked decompositions"),
                    evaluations: vec![Evaluation::new(set, c.bit(set))],
                    data: json!({ "decompositions": winners }),
                },
            );
        }
    }
    Outcome::verified(bound, json!({ "sets_checked": bound - 1 }))
}

/// Follows the defeat argument: pick an index `n` naming `(A, W)` with
/// `max ⋃A ≤ n`, wait for row `n` to stabilize, take the first `B ∈ W`
/// beyond it, and look for the `v` whose decomposition is correct and
/// unblocked for every `A`.
fn defeat(ctx: &ClaimContext) -> Outcome {
    let horizon = ctx.config.horizon.min(62);
    let c = ctx.c32();
    let scat = c.catalog().clone();
    let k = scat.k();
    let mut instances = Vec::new();
    let mut exhausted = false;
    for a in 0..scat.targets().len() {
        let target = scat.targets()[a].clone();
        let target_top = target.support().max().unwrap_or(0) as usize;
        for (e, entry) in scat.entries().iter().enumerate() {
            let observed = entry.stage(horizon);
            if !generates_ip_at_scale(&observed, DEFEAT_SCALE) {
                instances.push(json!({ "target": a, "entry": entry.description(), "vacuous": true }));
                continue;
            }
            let row_at = |s: u32, n: usize| -> Option<Vec<FinSet>> {
                c.grid(s).row(n)?.iter().copied().collect::<Option<Vec<_>>>()
            };
            let mut settled = false;
            let indices = scat.indices_of(a, e).take_while(|&n| n <= horizon as usize).filter(|&n| n >= target_top);
            for n in indices {
                let Some(row) = row_at(horizon, n) else { continue };
                let Some(stable) = stabilization_stage(horizon, |s| row_at(s, n)) else { continue };
                let floor = stable.max(row[k].max().expect("nonempty") + 1);
                let Some(b) = observed.iter().find(|&b| b.min().is_some_and(|lo| lo >= floor)) else { continue };
                settled = true;
                let mut tried = Vec::new();
                let found = (0..=k).find(|&v| {
                    let x = row[v].union(b);
                    let cx = c.bit(x);
                    tried.push(Evaluation::new(x, cx));
                    target.iter().all(|t| {
                        let y = t.union(x);
                        let cy = c.bit(y);
                        tried.push(Evaluation::new(y, cy));
                        cy == 1 - cx
                    })
                });
                match found {
                    Some(v) => instances.push(json!({
                        "target": a,
                        "entry": entry.description(),
                        "index": n,
                        "stable_from": stable,
                        "v": v,
                        "w": row[v],
                        "b": b,
                        "tail_color": c.bit(row[v].union(b)),
                    })),
                    None => {
                        return Outcome::violated(
                            bits_bound(horizon + 1),
                            Counterexample {
                                reason: format!(
                                    "no v ≤ {k} makes every member of target {a} flip the color of W^v ∪ {b} (index {n})"
                                ),
                                evaluations: tried,
                                data: json!({ "target": a, "entry": e, "index": n, "row": row, "b": b }),
                            },
                        )
                    }
                }
                break;
            }
            if !settled {
                exhausted = true;
                instances.push(json!({ "target": a, "entry": entry.description(), "settled": false }));
            }
        }
    }
    combine(bits_bound(horizon + 1), instances, None, exhausted)
}
