use hindman_core::colorings::{true_witnesses_34, CatalogColoring, Coloring34};
use hindman_core::ip::{disjoint_members, Family};
use hindman_core::{FinSet, Sigma2Relation};
use serde_json::json;

use super::{bits_bound, combine, set_json, Claim, ClaimContext, Counterexample, Evaluation, Outcome};

/// Disjoint members a relation must show to count as IP-generating.
const DEFEAT_SCALE: usize = 5;

pub(super) fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "s34-witness-order",
            summary: "defined approximate witnesses T^{p,q}_{i,n} form increasing blocks",
            run: witness_order,
        },
        Claim {
            id: "s34-shrink",
            summary: "p ≤ p' with equal earlier witnesses implies T^{p',q}_{i,n} ⪯ T^{p,q}_{i,n}",
            run: shrink,
        },
        Claim {
            id: "s34-stability",
            summary: "p ≤ p' ≤ p'' with T^p and T^p'' equal below (i,n) implies T^p' equal to them below (i,n)",
            run: stability,
        },
        Claim {
            id: "s34-defeat",
            summary: "for each IP-generating relation some n gives c(T_{i,n} ∪ A ∪ B) ≠ c(A ∪ B)",
            run: defeat,
        },
    ]
}

/// `T^{p,q}` for every pair `(i, n)`, `n ≤ i`, over the catalog relations.
struct Grid {
    size: u32,
    pairs: Vec<(usize, usize)>,
    // indexed [q][p][pair]
    table: Vec<Vec<Vec<Option<FinSet>>>>,
}

impl Grid {
    fn build(c: &Coloring34, rows: usize, size: u32) -> Self {
        let pairs: Vec<(usize, usize)> = (0..rows).flat_map(|i| (0..=i).map(move |n| (i, n))).collect();
        let table = (0..=size)
            .map(|q| {
                (0..=size)
                    .map(|p| pairs.iter().map(|&(i, n)| c.witness(p, q, i, n)).collect())
                    .collect()
            })
            .collect();
        Self { size, pairs, table }
    }

    fn row(&self, p: u32, q: u32) -> &[Option<FinSet>] {
        &self.table[q as usize][p as usize]
    }

    fn universe(&self, c: &Coloring34) -> u128 {
        bits_bound(c.cap().max_element.min(self.size) + 1)
    }
}

fn common_prefix(a: &[Option<FinSet>], b: &[Option<FinSet>]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn grid_for(ctx: &ClaimContext) -> (Coloring34, Grid) {
    let c = ctx.c34();
    let rows = ctx.catalog.relations().len();
    let grid = Grid::build(&c, rows, ctx.config.grid);
    (c, grid)
}

fn witness_order(ctx: &ClaimContext) -> Outcome {
    let (c, grid) = grid_for(ctx);
    for q in 0..=grid.size {
        for p in 0..=grid.size {
            let row = grid.row(p, q);
            let defined: Vec<FinSet> = row.iter().flatten().copied().collect();
            if let Some(w) = defined.windows(2).find(|w| w[0].max() >= w[1].min()) {
                return Outcome::violated(
                    grid.universe(&c),
                    Counterexample {
                        reason: format!("T^{{{p},{q}}} witnesses {} and {} overlap", w[0], w[1]),
                        evaluations: Vec::new(),
                        data: json!({ "p": p, "q": q, "row": row }),
                    },
                );
            }
        }
    }
    Outcome::verified(grid.universe(&c), json!({ "grid": grid.size, "pairs": grid.pairs }))
}

fn shrink(ctx: &ClaimContext) -> Outcome {
    let (c, grid) = grid_for(ctx);
    let mut applicable = 0u64;
    for q in 0..=grid.size {
        for p in 0..=grid.size {
            for p2 in p..=grid.size {
                let (low, high) = (grid.row(p, q), grid.row(p2, q));
                let agree = common_prefix(low, high);
                // the hypothesis holds at every pair up to the first disagreement
                for k in 0..=agree.min(grid.pairs.len() - 1) {
                    applicable += 1;
                    let ok = match (low[k], high[k]) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(a), Some(b)) => b.code() <= a.code(),
                    };
                    if !ok {
                        let (i, n) = grid.pairs[k];
                        return Outcome::violated(
                            grid.universe(&c),
                            Counterexample {
                                reason: format!("T^{{{p2},{q}}}_{{{i},{n}}} is not ⪯ T^{{{p},{q}}}_{{{i},{n}}}"),
                                evaluations: Vec::new(),
                                data: json!({ "p": p, "p_prime": p2, "q": q, "i": i, "n": n, "low": low, "high": high }),
                            },
                        );
                    }
                }
            }
        }
    }
    Outcome::verified(grid.universe(&c), json!({ "grid": grid.size, "instances": applicable }))
}

fn stability(ctx: &ClaimContext) -> Outcome {
    let (c, grid) = grid_for(ctx);
    let mut triples = 0u64;
    for q in 0..=grid.size {
        for p in 0..=grid.size {
            for p3 in p..=grid.size {
                let agree = common_prefix(grid.row(p, q), grid.row(p3, q));
                for p2 in p..=p3 {
                    triples += 1;
                    if common_prefix(grid.row(p, q), grid.row(p2, q)) < agree {
                        return Outcome::violated(
                            grid.universe(&c),
                            Counterexample {
                                reason: format!(
                                    "T^{{{p},{q}}} and T^{{{p3},{q}}} agree on {agree} pairs but T^{{{p2},{q}}} does not"
                                ),
                                evaluations: Vec::new(),
                                data: json!({
                                    "p": p, "p_prime": p2, "p_double_prime": p3, "q": q,
                                    "rows": [grid.row(p, q), grid.row(p2, q), grid.row(p3, q)],
                                }),
                            },
                        );
                    }
                }
            }
        }
    }
    Outcome::verified(grid.universe(&c), json!({ "grid": grid.size, "triples": triples }))
}

/// Least set (in code order) with `min ≥ floor`, `max ≥ reach` and `φ`.
fn least_satisfying(relation: &Sigma2Relation, floor: u32, reach: u32, budget: u64) -> Option<FinSet> {
    if floor > 62 || reach > 62 {
        return None;
    }
    let start = if reach > floor { 1u64 << (reach - floor) } else { 1 };
    let stop = 1u64 << (63 - floor).min(62);
    (start..stop).take(budget as usize).map(|c| FinSet::from_code(c << floor)).find(|&z| relation.truth(z))
}

/// Follows the defeat argument for each relation `φ_i`: with the true
/// witnesses `T_{i,n}`, choose `p` settling `φ_i` below `T_{i,i}`, then `A`
/// above `p`, then `q` refuting every false `φ_j` below `T_{i,i}` for
/// `x ≤ min A`, then `B` reaching `q`. Some `n ≤ i` must separate the
/// colors of `T_{i,n} ∪ A ∪ B` and `A ∪ B`.
fn defeat(ctx: &ClaimContext) -> Outcome {
    let c = ctx.c34();
    let cap = c.cap();
    let relations = ctx.catalog.relations();
    let truth_pool: Vec<FinSet> = (1..1u64 << (cap.max_element + 1)).map(FinSet::from_code).collect();
    let mut instances = Vec::new();
    let mut exhausted = false;
    let mut top = cap.max_element;
    for (i, relation) in relations.iter().enumerate() {
        let members = Family::new(truth_pool.iter().copied().filter(|&z| relation.truth(z)));
        if disjoint_members(&members, DEFEAT_SCALE).is_none() {
            instances.push(json!({ "relation": relation.label(), "vacuous": true }));
            continue;
        }
        let truths = true_witnesses_34(&ctx.catalog, i, cap);
        let row: Vec<Option<FinSet>> = truths.iter().filter(|((j, _), _)| *j == i).map(|&(_, t)| t).collect();
        let Some(row) = row.into_iter().collect::<Option<Vec<FinSet>>>() else {
            exhausted = true;
            instances.push(json!({ "relation": relation.label(), "witnesses_within_cap": false }));
            continue;
        };
        let last = row[i];
        let below_last = || (1..=last.code()).map(FinSet::from_code);
        let p = below_last().filter_map(|t| relation.least_witness(t)).max().unwrap_or(0);
        let Some(a) = least_satisfying(relation, p.max(last.max().expect("nonempty") + 1), 0, ctx.config.budget) else {
            exhausted = true;
            instances.push(json!({ "relation": relation.label(), "a_found": false }));
            continue;
        };
        let a_min = a.min().expect("nonempty");
        let q = (0..=i)
            .flat_map(|j| {
                let rj = ctx.catalog.relation(j).expect("catalog has relations");
                below_last()
                    .filter(|&t| !rj.truth(t))
                    .flat_map(move |t| (0..=a_min).filter_map(move |x| rj.least_refutation(x, t)))
            })
            .max()
            .unwrap_or(0);
        let b_floor = a.max().expect("nonempty") + 1;
        let Some(b) = least_satisfying(relation, b_floor, q, ctx.config.budget) else {
            exhausted = true;
            instances.push(json!({ "relation": relation.label(), "b_found": false }));
            continue;
        };
        let tail = a.union(b);
        let (p_min, q_max) = (a_min, b.max().expect("nonempty"));
        top = top.max(q_max);
        // the recipe's premise: every true witness up to (i, i) is visible at (min A, max B)
        let premise = truths.iter().all(|&((j, m), t)| c.witness(p_min, q_max, j, m) == t);
        let tail_color = c.bit(tail);
        let mut tried = vec![Evaluation::new(tail, tail_color)];
        let found = (0..=i).find(|&n| {
            let head = row[n].union(tail);
            let color = c.bit(head);
            tried.push(Evaluation::new(head, color));
            color != tail_color
        });
        match (found, premise) {
            (Some(n), _) => instances.push(json!({
                "relation": relation.label(),
                "n": n,
                "t": row[n],
                "a": a,
                "b": b,
                "p": p,
                "q": q,
                "premise": premise,
                "split": c.split(row[n].union(tail)),
                "colored": set_json(row[n].union(tail)),
                "tail": set_json(tail),
            })),
            (None, true) => {
                return Outcome::violated(
                    bits_bound(top + 1),
                    Counterexample {
                        reason: format!("no n ≤ {i} separates T_{{{i},n}} ∪ A ∪ B from A ∪ B for {}", relation.label()),
                        evaluations: tried,
                        data: json!({ "relation": i, "witnesses": row, "a": a, "b": b }),
                    },
                )
            }
            (None, false) => {
                exhausted = true;
                instances.push(json!({ "relation": relation.label(), "premise": false, "a": a, "b": b }));
            }
        }
    }
    combine(bits_bound(top + 1), instances, None, exhausted)
}
