//! Level-set representation of a tomonoid.
//!
//! The level equivalence partitions `S x S` into classes of cells with equal
//! product. A partition of the square is a tomonoid partition iff it
//! satisfies regularity (P1''), the uniqueness of the representative on the
//! line of `1` (P2) and the Reidemeister condition (P3'), the latter only over
//! interior elements.

use std::collections::BTreeMap;

use crate::chain::{Chain, Elem, TomonoidTable, VerifyReport, ViolationKind};
use crate::error::{Result, TomoError};

pub type ClassId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPartition {
    chain: Chain,
    class_of: Vec<ClassId>,
    value_of_class: BTreeMap<ClassId, Elem>,
}

impl LevelPartition {
    /// Builds a partition from raw class assignments (row-major, `n * n`
    /// cells) and the value attached to every class.
    pub fn new(chain: Chain, class_of: Vec<ClassId>, value_of_class: BTreeMap<ClassId, Elem>) -> Result<Self> {
        let n = chain.size();
        if class_of.len() != n * n {
            return Err(TomoError::Structure(format!(
                "partition covers {} cells, expected {}",
                class_of.len(),
                n * n
            )));
        }
        Ok(Self {
            chain,
            class_of,
            value_of_class,
        })
    }

    pub fn chain(&self) -> Chain {
        self.chain
    }

    pub fn class_of(&self, a: Elem, b: Elem) -> ClassId {
        self.class_of[a * self.chain.size() + b]
    }

    pub fn value_of_class(&self, class: ClassId) -> Option<Elem> {
        self.value_of_class.get(&class).copied()
    }

    /// Cells of every class, in row-major order.
    pub fn classes(&self) -> BTreeMap<ClassId, Vec<(Elem, Elem)>> {
        let n = self.chain.size();
        let mut out: BTreeMap<ClassId, Vec<(Elem, Elem)>> = BTreeMap::new();
        for (i, &c) in self.class_of.iter().enumerate() {
            out.entry(c).or_default().push((i / n, i % n));
        }
        out
    }

    fn value(&self, a: Elem, b: Elem) -> Elem {
        self.value_of_class[&self.class_of(a, b)]
    }
}

/// The level equivalence of `t`; class identifiers are the products.
pub fn to_partition(t: &TomonoidTable) -> LevelPartition {
    let chain = t.chain();
    LevelPartition {
        chain,
        class_of: t.cells().to_vec(),
        value_of_class: chain.elements().map(|c| (c, c)).collect(),
    }
}

/// Reads off `a * b` as the value of the class of `(a, b)`.
pub fn from_partition(p: &LevelPartition) -> Result<TomonoidTable> {
    let report = verify_partition(p, false)?;
    if !report.ok() {
        return Err(TomoError::PartitionAxioms(report));
    }
    Ok(TomonoidTable::from_fn(p.chain.size(), |a, b| p.value(a, b)))
}

/// Checks (P1''), (P2) and (P3'). With `strict`, the Reidemeister condition
/// is checked over all elements, including `0` and `1`.
pub fn verify_partition(p: &LevelPartition, strict: bool) -> Result<VerifyReport> {
    let n = p.chain.size();
    let one = n - 1;
    for &c in &p.class_of {
        if !p.value_of_class.contains_key(&c) {
            return Err(TomoError::Structure(format!("unknown class identifier {c}")));
        }
    }
    if let Some((&c, &v)) = p.value_of_class.iter().find(|(_, &v)| v >= n) {
        return Err(TomoError::Structure(format!("class {c} has out-of-range value {v}")));
    }

    let mut report = VerifyReport::default();

    // (P2): each class meets the line of 1 exactly once, at (1,c), the
    // column of 1 at (c,1), and carries the value c.
    let mut on_line: BTreeMap<ClassId, Vec<Elem>> = BTreeMap::new();
    for c in 0..n {
        on_line.entry(p.class_of(one, c)).or_default().push(c);
    }
    let used: std::collections::BTreeSet<ClassId> = p.class_of.iter().copied().collect();
    for &class in &used {
        match on_line.get(&class).map(Vec::as_slice) {
            Some(&[c]) => {
                if p.class_of(c, one) != class {
                    report.push(
                        ViolationKind::UniquenessP2,
                        vec![one, c, c, one],
                        format!("(1,{c}) and ({c},1) lie in different classes"),
                    );
                }
                if p.value_of_class[&class] != c {
                    report.push(
                        ViolationKind::UniquenessP2,
                        vec![one, c],
                        format!(
                            "class {class} contains (1,{c}) but is labelled {}",
                            p.value_of_class[&class]
                        ),
                    );
                }
            }
            Some(many) => {
                let mut witness = Vec::new();
                for &c in many {
                    witness.extend([one, c]);
                }
                report.push(
                    ViolationKind::UniquenessP2,
                    witness,
                    format!("class {class} meets the line of 1 {} times", many.len()),
                );
            }
            None => {
                let i = p.class_of.iter().position(|&x| x == class).unwrap_or_default();
                report.push(
                    ViolationKind::UniquenessP2,
                    vec![i / n, i % n],
                    format!("class {class} does not meet the line of 1"),
                );
            }
        }
    }

    // (P1''): values do not decrease along the componentwise order. Checking
    // covering pairs suffices since the order on values is transitive.
    for a in 0..n {
        for b in 0..n {
            let v = p.value(a, b);
            for (c, d) in [(a + 1, b), (a, b + 1)] {
                if c < n && d < n && v > p.value(c, d) {
                    report.push(
                        ViolationKind::RegularityP1,
                        vec![a, b, c, d],
                        format!("({a},{b}) has value {v} above ({c},{d}) with value {}", p.value(c, d)),
                    );
                }
            }
        }
    }

    // (P3') / (P3)
    let interior = |x: Elem| strict || (x != 0 && x != one);
    for a in (0..n).filter(|&x| interior(x)) {
        for b in (0..n).filter(|&x| interior(x)) {
            let d = p.value(a, b);
            if !interior(d) {
                continue;
            }
            for c in (0..n).filter(|&x| interior(x)) {
                let e = p.value(b, c);
                if !interior(e) {
                    continue;
                }
                if p.class_of(d, c) != p.class_of(a, e) {
                    report.push(
                        ViolationKind::ReidemeisterP3,
                        vec![a, b, c, d, e],
                        format!("({d},{c}) and ({a},{e}) lie in different classes"),
                    );
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::verify_table;

    fn nilpotent3() -> TomonoidTable {
        TomonoidTable::from_rows(vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 2]]).unwrap()
    }

    fn idempotent3() -> TomonoidTable {
        TomonoidTable::from_rows(vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]).unwrap()
    }

    fn class_sizes(p: &LevelPartition) -> Vec<usize> {
        let mut sizes: Vec<usize> = p.classes().values().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    #[test]
    fn trivial_partition() {
        let p = to_partition(&TomonoidTable::trivial());
        assert_eq!(class_sizes(&p), vec![1]);
        assert_eq!(p.value_of_class(p.class_of(0, 0)), Some(0));
        assert_eq!(from_partition(&p).unwrap(), TomonoidTable::trivial());
    }

    #[test]
    fn nilpotent_class_sizes() {
        let p = to_partition(&nilpotent3());
        assert_eq!(class_sizes(&p), vec![6, 2, 1]);
        assert_eq!(p.classes()[&1], vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn round_trips() {
        for t in [nilpotent3(), idempotent3()] {
            let p = to_partition(&t);
            assert!(verify_partition(&p, true).unwrap().ok());
            assert_eq!(from_partition(&p).unwrap(), t);
        }
    }

    #[test]
    fn merging_zero_and_identity_classes_breaks_uniqueness() {
        let t = nilpotent3();
        // (a,a) lies in the zero class; merge that class with the class of (1,1).
        let class_of: Vec<ClassId> = t.cells().iter().map(|&v| if v == 2 { 0 } else { v }).collect();
        let values = [(0, 0), (1, 1)].into_iter().collect();
        let p = LevelPartition::new(t.chain(), class_of, values).unwrap();
        let report = verify_partition(&p, false).unwrap();
        assert!(report.has(ViolationKind::UniquenessP2), "{report}");
        assert!(matches!(from_partition(&p), Err(TomoError::PartitionAxioms(_))));
    }

    #[test]
    fn swapped_cells_break_regularity() {
        let t = idempotent3();
        let mut class_of = t.cells().to_vec();
        class_of.swap(1, 4); // (0,1) <-> (1,1)
        let values = (0..3).map(|c| (c, c)).collect();
        let p = LevelPartition::new(t.chain(), class_of, values).unwrap();
        let report = verify_partition(&p, false).unwrap();
        assert!(report.has(ViolationKind::RegularityP1));
        assert!(report
            .violations()
            .iter()
            .any(|v| v.kind == ViolationKind::RegularityP1 && v.witness == vec![0, 1, 1, 1]));
        assert!(!report.has(ViolationKind::UniquenessP2));
    }

    #[test]
    fn unknown_identifiers_are_structural() {
        let t = nilpotent3();
        let mut class_of = t.cells().to_vec();
        class_of[0] = 17;
        let values = (0..3).map(|c| (c, c)).collect();
        let p = LevelPartition::new(t.chain(), class_of, values).unwrap();
        assert!(matches!(verify_partition(&p, false), Err(TomoError::Structure(_))));
    }

    #[test]
    fn arbitrary_identifiers_are_normalised_by_value() {
        let t = nilpotent3();
        let class_of: Vec<ClassId> = t.cells().iter().map(|&v| 100 + v).collect();
        let values = (0..3).map(|c| (100 + c, c)).collect();
        let p = LevelPartition::new(t.chain(), class_of, values).unwrap();
        assert_eq!(from_partition(&p).unwrap(), t);
        assert!(verify_table(&from_partition(&p).unwrap()).ok());
    }
}
