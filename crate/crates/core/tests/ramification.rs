mod common;

use std::collections::BTreeSet;

use tomonoid::{
    class_poset, compute_support, idempotents, is_archimedean, is_commutative, ramify, Cell, IdempotentPair,
    Ramification, TomonoidTable,
};

fn all_pairs(t: &TomonoidTable) -> Vec<IdempotentPair> {
    let ids = idempotents(t);
    ids.iter()
        .flat_map(|&l| ids.iter().map(move |&r| IdempotentPair::new(l, r)))
        .collect()
}

fn general(t: &TomonoidTable, pair: IdempotentPair) -> Ramification {
    ramify(t, pair, false, false).unwrap()
}

fn below(a: Cell, b: Cell) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

#[test]
fn audit_passes_everywhere() {
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2) {
        for pair in all_pairs(t) {
            let r = general(t, pair);
            r.audit(t).unwrap_or_else(|e| panic!("{t:?} {pair}: {e}"));
            if is_commutative(t) && pair.left == pair.right {
                ramify(t, pair, true, false).unwrap().audit(t).unwrap();
            }
        }
        if is_archimedean(t) {
            ramify(t, IdempotentPair::identity(t), false, true)
                .unwrap()
                .audit(t)
                .unwrap();
        }
    }
}

#[test]
fn support_classes_are_level_classes() {
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2) {
        let support = compute_support(t).unwrap();
        for pair in all_pairs(t) {
            let r = general(t, pair);
            assert_eq!(r.support(), support);
            for &a in &support {
                for c in r.cells() {
                    let same = r.class_of(a) == r.class_of(c);
                    let expected = support.contains(&c) && t.mul(a.0 - 1, a.1 - 1) == t.mul(c.0 - 1, c.1 - 1);
                    assert_eq!(same, expected, "{t:?} {pair} {a:?} {c:?}");
                }
            }
        }
    }
}

#[test]
fn zero_and_atom_closure() {
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2) {
        for pair in all_pairs(t) {
            let r = general(t, pair);
            if r.is_obstructed() {
                continue;
            }
            let cos: Vec<Cell> = r.cells().filter(|&c| !r.in_support(c)).collect();
            for &a in &cos {
                for &b in &cos {
                    if below(a, b) && r.class_of(b) == r.zero_class() {
                        assert_eq!(r.class_of(a), r.zero_class());
                    }
                    if below(a, b) && r.class_of(a) == r.atom_class() {
                        assert_eq!(r.class_of(b), r.atom_class());
                    }
                }
            }
        }
    }
}

#[test]
fn archimedean_mode_coincides() {
    let mut checked = 0;
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2 && is_archimedean(t)) {
        let pair = IdempotentPair::identity(t);
        let arch = ramify(t, pair, false, true).unwrap();
        let gen = general(t, pair);
        assert_eq!(arch.class_assignment(), gen.class_assignment(), "{t:?}");
        let top = arch.ext().identity();
        assert_eq!(arch.classes()[&arch.atom_class()], vec![(1, top), (top, 1)]);
        checked += 1;
    }
    assert_eq!(checked, 1 + 1 + 2 + 8);
}

#[test]
fn symmetric_rule_only_coarsens() {
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2 && is_commutative(t)) {
        for e in idempotents(t) {
            let pair = IdempotentPair::new(e, e);
            let plain = general(t, pair);
            let sym = ramify(t, pair, true, false).unwrap();
            for a in plain.cells() {
                for b in plain.cells() {
                    if plain.class_of(a) == plain.class_of(b) {
                        assert_eq!(sym.class_of(a), sym.class_of(b));
                    }
                }
            }
            if !sym.is_obstructed() {
                for c in sym.cells() {
                    assert_eq!(sym.class_of(c), sym.class_of((c.1, c.0)));
                }
            }
        }
    }
}

#[test]
fn deterministic() {
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2) {
        for pair in all_pairs(t) {
            let a = general(t, pair);
            let b = general(t, pair);
            assert_eq!(a.class_assignment(), b.class_assignment());
            assert_eq!(a.log(), b.log());
            assert_eq!(a.to_string(), b.to_string());
        }
    }
}

#[test]
fn obstructions() {
    assert!(general(&TomonoidTable::two_element(), IdempotentPair::new(1, 0)).is_obstructed());
    let four: Vec<(TomonoidTable, IdempotentPair)> = common::tables_of(4)
        .flat_map(|t| all_pairs(t).into_iter().map(move |p| (t.clone(), p)))
        .filter(|(t, p)| general(t, *p).is_obstructed())
        .collect();
    assert!(!four.is_empty());
    // Obstruction never hits the identity pair or the bottom pair.
    for (t, p) in &four {
        assert_ne!(*p, IdempotentPair::identity(t));
        assert_ne!(*p, IdempotentPair::new(0, 0));
    }
}

/// Classes that end up in one strongly connected component of the class
/// order; they can only be chosen together.
#[test]
fn forced_groups_are_consistent() {
    let mut groups = 0;
    for t in common::tables_up_to(5).filter(|t| t.size() >= 2) {
        for pair in all_pairs(t) {
            let r = general(t, pair);
            if r.is_obstructed() {
                continue;
            }
            let dag = class_poset(&r).unwrap();
            let covered: BTreeSet<Cell> = dag.nodes().iter().flat_map(|n| n.cells.iter().copied()).collect();
            let cos: BTreeSet<Cell> = r.cells().filter(|&c| !r.in_support(c)).collect();
            assert_eq!(covered, cos);
            groups += dag.forced_groups().count();
        }
    }
    println!("forced groups up to size 5: {groups}");
}
