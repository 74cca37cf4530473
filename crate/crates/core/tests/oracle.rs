mod common;

use std::collections::{BTreeMap, BTreeSet};

use tomonoid::{
    atom_quotient, brute_force, count, count_cross_checked, generate, CountReport, Filter, TomoError, TomonoidTable,
    DEFAULT_ORACLE_CAP,
};

const GOLDEN: &str = include_str!("../golden/counts.txt");

fn generated_at(size: usize, filter: Filter) -> Vec<TomonoidTable> {
    generate(size, filter)
        .unwrap()
        .into_iter()
        .filter(|r| r.table.size() == size)
        .map(|r| r.table)
        .collect()
}

fn as_set(v: &[TomonoidTable]) -> BTreeSet<TomonoidTable> {
    let set: BTreeSet<_> = v.iter().cloned().collect();
    assert_eq!(set.len(), v.len(), "duplicates in stream");
    set
}

#[test]
fn forced_small_counts() {
    for (size, expected) in [(1, 1), (2, 1), (3, 2)] {
        assert_eq!(
            brute_force(size, Filter::ALL, DEFAULT_ORACLE_CAP).unwrap().len(),
            expected
        );
        assert_eq!(generated_at(size, Filter::ALL).len(), expected);
    }
    let three = brute_force(3, Filter::ALL, DEFAULT_ORACLE_CAP).unwrap();
    assert_eq!(three[0], common::rows(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 2]]));
    assert_eq!(three[1], common::rows(&[&[0, 0, 0], &[0, 1, 1], &[0, 1, 2]]));
}

#[test]
fn generator_equals_oracle_up_to_six() {
    for filter in [Filter::ALL, Filter::COMMUTATIVE, Filter::ARCHIMEDEAN] {
        for size in 1..=6 {
            let ours = generated_at(size, filter);
            let theirs = brute_force(size, filter, DEFAULT_ORACLE_CAP).unwrap();
            assert_eq!(as_set(&ours), as_set(&theirs), "size {size}, {filter:?}");
        }
    }
}

#[test]
fn golden_counts_match() {
    let golden = CountReport::parse(GOLDEN).unwrap();
    let max = *golden.by_size.keys().max().unwrap();
    assert_eq!(count(max).unwrap(), golden);
    assert_eq!(
        count_cross_checked(5, DEFAULT_ORACLE_CAP).unwrap().by_size[&5],
        golden.by_size[&5]
    );
    assert_eq!(CountReport::parse(&golden.to_string()).unwrap(), golden);
}

#[test]
fn oracle_respects_cap() {
    assert!(matches!(
        brute_force(DEFAULT_ORACLE_CAP + 1, Filter::ALL, DEFAULT_ORACLE_CAP),
        Err(TomoError::OracleCap { .. })
    ));
}

#[test]
fn oracle_output_is_sorted() {
    let five = brute_force(5, Filter::ALL, DEFAULT_ORACLE_CAP).unwrap();
    assert!(five.windows(2).all(|w| w[0].cells() < w[1].cells()));
}

/// For every parent of size n <= 4 the emitted children are exactly the
/// oracle tables of size n+1 whose atom quotient is that parent.
#[test]
fn completeness_per_parent() {
    for size in 2..=4 {
        let mut by_parent: BTreeMap<TomonoidTable, BTreeSet<TomonoidTable>> = BTreeMap::new();
        for big in brute_force(size + 1, Filter::ALL, DEFAULT_ORACLE_CAP).unwrap() {
            by_parent.entry(atom_quotient(&big).unwrap()).or_default().insert(big);
        }
        for t in common::tables_of(size) {
            let emitted: Vec<_> = tomonoid::coextensions(t, Filter::ALL)
                .unwrap()
                .into_iter()
                .map(|c| c.table)
                .collect();
            let expected = by_parent.remove(t).unwrap_or_default();
            assert_eq!(as_set(&emitted), expected, "parent {t:?}");
        }
        assert!(by_parent.is_empty(), "oracle tables with an unknown parent");
    }
}
