mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use tomonoid::{
    atom_char_idempotents, atom_quotient, brute_force, format_table, from_partition, idempotents, is_archimedean,
    is_commutative, parse_table, rees_quotient, render, to_partition, verify_partition, verify_table, Chain, Filter,
    Format, LevelPartition, TomonoidTable, DEFAULT_ORACLE_CAP,
};

fn oracle_set(size: usize) -> BTreeSet<TomonoidTable> {
    brute_force(size, Filter::ALL, DEFAULT_ORACLE_CAP)
        .unwrap()
        .into_iter()
        .collect()
}

/// Tables with the identity row and column in place and every other entry
/// anywhere in the chain; most of them are not tomonoids.
fn candidate() -> impl Strategy<Value = TomonoidTable> {
    (2usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n * n).prop_map(move |mut cells| {
            for x in 0..n {
                cells[(n - 1) * n + x] = x;
                cells[x * n + n - 1] = x;
            }
            let rows = cells.chunks(n).map(<[usize]>::to_vec).collect();
            TomonoidTable::from_rows(rows).unwrap()
        })
    })
}

/// Like `candidate`, but entries already respect `min(a, b)` so that a fair
/// share of the samples are valid.
fn bounded_candidate() -> impl Strategy<Value = TomonoidTable> {
    (2usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n * n).prop_map(move |raw| {
            let rows = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            if a == n - 1 {
                                b
                            } else if b == n - 1 {
                                a
                            } else {
                                raw[a * n + b].min(a.min(b))
                            }
                        })
                        .collect()
                })
                .collect();
            TomonoidTable::from_rows(rows).unwrap()
        })
    })
}

fn pooled() -> impl Strategy<Value = &'static TomonoidTable> {
    (0..common::pool().len()).prop_map(|i| &common::pool()[i].table)
}

fn power(t: &TomonoidTable, a: usize, k: usize) -> usize {
    (1..k).fold(a, |acc, _| t.mul(acc, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn verifier_agrees_with_oracle(t in prop_oneof![candidate(), bounded_candidate()]) {
        let valid = verify_table(&t).ok();
        prop_assert_eq!(valid, oracle_set(t.size()).contains(&t));
    }

    #[test]
    fn invalid_tables_fail_round_trip(t in bounded_candidate()) {
        let report = verify_table(&t);
        let parsed = parse_table(&format_table(&t));
        prop_assert_eq!(report.ok(), parsed.is_ok());
        prop_assert_eq!(from_partition(&to_partition(&t)).is_ok(), report.ok());
    }

    #[test]
    fn negativity(t in pooled()) {
        let n = t.size();
        for a in 0..n {
            for b in 0..n {
                prop_assert!(t.mul(a, b) <= a.min(b));
            }
        }
    }

    #[test]
    fn archimedean_checks_agree(t in pooled()) {
        let n = t.size();
        let rows = (0..n - 1).all(|b| (1..n).all(|a| t.mul(b, a) < a));
        let nilpotent = (0..n - 1).all(|a| power(t, a, n) == 0);
        prop_assert_eq!(is_archimedean(t), rows);
        prop_assert_eq!(is_archimedean(t), nilpotent);
    }

    #[test]
    fn quotients(t in pooled()) {
        let n = t.size();
        for q in 0..n - 1 {
            let r = rees_quotient(t, q).unwrap();
            prop_assert!(verify_table(&r).ok());
            prop_assert_eq!(r.size(), n - q);
            prop_assert_eq!(&rees_quotient(&r, 0).unwrap(), &r);
        }
        let mut cur = t.clone();
        let mut steps = 0;
        while cur.size() > 1 {
            cur = atom_quotient(&cur).unwrap();
            steps += 1;
        }
        prop_assert_eq!(steps, n - 1);
        prop_assert_eq!(cur, TomonoidTable::trivial());
    }

    #[test]
    fn atom_pair_is_idempotent(t in pooled()) {
        prop_assume!(t.size() >= 2);
        let pair = atom_char_idempotents(t).unwrap();
        let ids = idempotents(t);
        prop_assert!(ids.contains(&pair.left) && ids.contains(&pair.right));
    }

    #[test]
    fn partition_bijection(t in pooled()) {
        let p = to_partition(t);
        prop_assert_eq!(&from_partition(&p).unwrap(), t);
        prop_assert!(verify_partition(&p, false).unwrap().ok());
        prop_assert!(verify_partition(&p, true).unwrap().ok());

        // Same partition under foreign class names.
        let n = t.size();
        let class_of = (0..n * n).map(|i| 1000 - p.class_of(i / n, i % n)).collect();
        let values: BTreeMap<_, _> = (0..n).map(|v| (1000 - v, v)).collect();
        let renamed = LevelPartition::new(Chain::new(n).unwrap(), class_of, values).unwrap();
        prop_assert!(verify_partition(&renamed, false).unwrap().ok());
        let back = from_partition(&renamed).unwrap();
        prop_assert_eq!(&back, t);
        prop_assert_eq!(to_partition(&back), p);
    }

    #[test]
    fn level_class_criteria(t in pooled()) {
        let n = t.size();
        let p = to_partition(t);
        for (id, cells) in p.classes() {
            let c = p.value_of_class(id).unwrap();
            prop_assert!(cells.iter().all(|&(a, b)| a >= c && b >= c));
        }
        let symmetric = (0..n).all(|a| (0..n).all(|b| p.class_of(a, b) == p.class_of(b, a)));
        prop_assert_eq!(is_commutative(t), symmetric);
        let zero = p.class_of(0, 0);
        for a in 0..n {
            for b in 0..n {
                if p.class_of(a, b) == zero {
                    prop_assert!((0..=a).all(|x| (0..=b).all(|y| p.class_of(x, y) == zero)));
                }
            }
        }
    }

    #[test]
    fn text_round_trip(t in pooled()) {
        let doc = format_table(t);
        prop_assert_eq!(&parse_table(&doc).unwrap(), t);
        prop_assert_eq!(format_table(&parse_table(&doc).unwrap()), doc);
    }

    #[test]
    fn render_labels_follow_classes(t in pooled()) {
        let n = t.size();
        let out = render(t, Format::Ascii);
        prop_assert_eq!(&out, &render(t, Format::Ascii));
        let grid: Vec<Vec<String>> = out
            .lines()
            .take(n)
            .map(|l| l.split('|').nth(1).unwrap().split_whitespace().map(String::from).collect())
            .collect();
        // Printed top row first.
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        let same_symbol = grid[n - 1 - a][b] == grid[n - 1 - x][y];
                        prop_assert_eq!(same_symbol, t.mul(a, b) == t.mul(x, y));
                    }
                }
            }
        }
    }
}
