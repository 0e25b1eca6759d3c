use std::sync::Arc;

use hindman_core::colorings::{
    build_coloring, color_31, color_32, color_33, color_34, polarity_33, primary_decomposition_33, BuildOptions,
    CandidateCap, CatalogColoring, ColoringId, Rule,
};
use hindman_core::{Catalog, CatalogError, CatalogFile, FinSet};

type Direct<'a> = Box<dyn Fn(FinSet) -> u8 + 'a>;

const IDS: [&str; 5] = ["c31", "c32", "c32:k=2", "c33", "c34"];

fn builtin() -> Arc<Catalog> {
    Arc::new(Catalog::builtin())
}

fn build(id: &str, fault: Option<u64>) -> Box<dyn CatalogColoring> {
    let options = BuildOptions { fault, cap: None };
    build_coloring(id.parse().unwrap(), &builtin(), options).unwrap()
}

#[test]
fn ids_roundtrip_through_text() {
    for text in IDS {
        let id: ColoringId = text.parse().unwrap();
        assert_eq!(id.to_string(), text);
    }
    for bad in ["c35", "c32:k=", "c32:j=1", "", "C31"] {
        assert!(bad.parse::<ColoringId>().is_err(), "{bad}");
    }
}

#[test]
fn memoized_colorings_match_direct_evaluation() {
    let catalog = builtin();
    let sized = Arc::new(catalog.sized(catalog.k()).unwrap());
    let direct: [(&str, Direct); 4] = [
        ("c31", Box::new(|s| color_31(&catalog, s).unwrap())),
        ("c32", Box::new(|s| color_32(&sized, s).unwrap())),
        ("c33", Box::new(|s| color_33(&catalog, s).unwrap())),
        ("c34", Box::new(|s| color_34(&catalog, s, CandidateCap::default()))),
    ];
    for (id, eval) in direct {
        let memo = build(id, None);
        for code in 1u64..1 << 9 {
            let set = FinSet::from_code(code);
            assert_eq!(memo.bit(set), eval(set), "{id} at {set}");
        }
    }
}

#[test]
fn colors_are_bits_and_empty_set_is_zero() {
    for id in IDS {
        let c = build(id, None);
        assert_eq!(c.bit(FinSet::empty()), 0);
        assert!((1u64..1 << 10).all(|code| c.bit(FinSet::from_code(code)) <= 1), "{id}");
    }
}

#[test]
fn evaluation_order_does_not_change_colors() {
    for id in IDS {
        let ascending = build(id, None);
        let descending = build(id, None);
        let up: Vec<u8> = (1u64..1 << 10).map(|c| ascending.bit(FinSet::from_code(c))).collect();
        let mut down: Vec<u8> = (1u64..1 << 10).rev().map(|c| descending.bit(FinSet::from_code(c))).collect();
        down.reverse();
        assert_eq!(up, down, "{id}");
    }
}

#[test]
fn an_injected_fault_first_shows_at_its_code() {
    for id in IDS {
        for fault in [1u64, 6, 77, 300] {
            let faulty = build(id, Some(fault));
            let fresh = faulty.fresh();
            let first = (1u64..1 << 10).find(|&c| faulty.bit(FinSet::from_code(c)) != fresh.bit(FinSet::from_code(c)));
            assert_eq!(first, Some(fault), "{id} with fault at {fault}");
        }
    }
}

#[test]
fn traces_end_in_the_reported_color() {
    for id in IDS {
        let c = build(id, None);
        for code in [1u64, 13, 100, 513] {
            let set = FinSet::from_code(code);
            let trace = c.trace(set);
            let top = trace.first().expect("nonempty trace");
            assert_eq!(top.set, set);
            assert_eq!(top.color, c.bit(set), "{id} at {set}");
            assert!(trace.iter().all(|step| step.color <= 1));
        }
    }
    let empty = build("c33", None).trace(FinSet::empty());
    assert!(matches!(empty.first().map(|s| &s.rule), Some(Rule::Empty) | None));
}

#[test]
fn polarity_is_only_defined_for_decomposed_sets() {
    let catalog = builtin();
    for code in 1u64..1 << 10 {
        let set = FinSet::from_code(code);
        let top = set.max().unwrap() as usize;
        for i in 0..=top {
            if let Some(v) = polarity_33(&catalog, set, i) {
                assert!(v <= 1);
                assert!(primary_decomposition_33(&catalog, set).unwrap().is_some());
            }
        }
    }
}

#[test]
fn catalogs_missing_required_parts_are_rejected() {
    let no_relations = Arc::new(
        Catalog::from_file(CatalogFile { sigma2: Vec::new(), ..CatalogFile::builtin() }).unwrap_or_else(|e| panic!("{e}")),
    );
    let err = build_coloring(ColoringId::C34, &no_relations, BuildOptions::default()).err();
    assert!(matches!(err, Some(CatalogError::NoRelations)));
    assert!(build_coloring(ColoringId::C31, &no_relations, BuildOptions::default()).is_ok());
    assert!(Catalog::from_json(r#"{"families":[{"kind":"oracle_machine"}]}"#).is_err());
}
