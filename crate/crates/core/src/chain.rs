//! Finite chains and multiplication tables of finite negative tomonoids.
//!
//! Elements of a chain of size `n` are the indices `0..n`, ordered naturally.
//! Index `0` is the bottom element and index `n - 1` is both the top element
//! and the monoidal identity. Since two finite chains of equal size admit
//! exactly one order isomorphism, two tomonoids are isomorphic iff their
//! tables are equal.

use std::fmt;
use std::ops::Range;

use crate::error::{Result, TomoError};

/// An element of a finite chain, given by its position from the bottom.
pub type Elem = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    size: usize,
}

impl Chain {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(TomoError::Structure("a chain needs at least one element".into()));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn identity(&self) -> Elem {
        self.size - 1
    }

    /// The least element above the bottom, if the chain is non-trivial.
    pub fn atom(&self) -> Option<Elem> {
        (self.size >= 2).then_some(1)
    }

    pub fn elements(&self) -> Range<Elem> {
        0..self.size
    }
}

/// A square multiplication table over a finite chain.
///
/// Construction only checks the shape and the range of the entries; whether
/// the table is a finite negative tomonoid is decided by [`verify_table`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TomonoidTable {
    chain: Chain,
    cells: Vec<Elem>,
}

impl TomonoidTable {
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let chain = Chain::new(rows.len())?;
        let n = chain.size();
        let mut cells = Vec::with_capacity(n * n);
        for (a, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(TomoError::Structure(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some((b, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(TomoError::Structure(format!(
                    "entry {v} at ({a},{b}) is outside 0..{n}"
                )));
            }
            cells.extend(row);
        }
        Ok(Self { chain, cells })
    }

    /// Like [`TomonoidTable::from_rows`], but also rejects tables that fail
    /// the tomonoid axioms.
    pub fn validated(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let t = Self::from_rows(rows)?;
        let report = verify_table(&t);
        if report.ok() {
            Ok(t)
        } else {
            Err(TomoError::Axioms(report))
        }
    }

    pub(crate) fn from_fn(size: usize, mut f: impl FnMut(Elem, Elem) -> Elem) -> Self {
        let chain = Chain { size };
        let mut cells = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let v = f(a, b);
                debug_assert!(v < size);
                cells.push(v);
            }
        }
        Self { chain, cells }
    }

    /// The one-element tomonoid, in which `0 = 1`.
    pub fn trivial() -> Self {
        Self::from_fn(1, |_, _| 0)
    }

    /// The unique two-element f.n. tomonoid: `0 * 0 = 0` is forced by
    /// negativity.
    pub fn two_element() -> Self {
        Self::from_fn(2, |a, b| a.min(b))
    }

    pub fn chain(&self) -> Chain {
        self.chain
    }

    pub fn size(&self) -> usize {
        self.chain.size
    }

    /// The product `a * b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.cells[a * self.chain.size + b]
    }

    pub fn row(&self, a: Elem) -> &[Elem] {
        let n = self.chain.size;
        &self.cells[a * n..(a + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.cells.chunks(self.chain.size)
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.rows().map(<[Elem]>::to_vec).collect()
    }

    /// Row-major entries.
    pub fn cells(&self) -> &[Elem] {
        &self.cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Identity,
    Monotonicity,
    Associativity,
    Negativity,
    RegularityP1,
    UniquenessP2,
    ReidemeisterP3,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Monotonicity => "monotonicity",
            Self::Associativity => "associativity",
            Self::Negativity => "negativity",
            Self::RegularityP1 => "regularity-P1",
            Self::UniquenessP2 => "uniqueness-P2",
            Self::ReidemeisterP3 => "reidemeister-P3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<Elem>,
    pub detail: String,
}

/// Outcome of checking a table or a partition against the axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub(crate) fn push(&mut self, kind: ViolationKind, witness: Vec<Elem>, detail: String) {
        self.violations.push(Violation { kind, witness, detail });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let witness: Vec<String> = v.witness.iter().map(Elem::to_string).collect();
            write!(f, "{} ({}): {}", v.kind.name(), witness.join(","), v.detail)?;
        }
        Ok(())
    }
}

/// Checks identity, monotonicity, negativity and associativity, reporting
/// every violation found.
pub fn verify_table(t: &TomonoidTable) -> VerifyReport {
    let n = t.size();
    let one = n - 1;
    let mut report = VerifyReport::default();

    for x in 0..n {
        if t.mul(one, x) != x {
            report.push(
                ViolationKind::Identity,
                vec![one, x],
                format!("1 * {x} = {}", t.mul(one, x)),
            );
        }
        if x != one && t.mul(x, one) != x {
            report.push(
                ViolationKind::Identity,
                vec![x, one],
                format!("{x} * 1 = {}", t.mul(x, one)),
            );
        }
    }

    for a in 0..n {
        for b in 0..n {
            let v = t.mul(a, b);
            if a + 1 < n && v > t.mul(a + 1, b) {
                report.push(
                    ViolationKind::Monotonicity,
                    vec![a, b, a + 1, b],
                    format!("column {b}: {a}*{b} = {v} exceeds {}*{b} = {}", a + 1, t.mul(a + 1, b)),
                );
            }
            if b + 1 < n && v > t.mul(a, b + 1) {
                report.push(
                    ViolationKind::Monotonicity,
                    vec![a, b, a, b + 1],
                    format!("row {a}: {a}*{b} = {v} exceeds {a}*{} = {}", b + 1, t.mul(a, b + 1)),
                );
            }
            if v > a.min(b) {
                report.push(
                    ViolationKind::Negativity,
                    vec![a, b],
                    format!("{a}*{b} = {v} exceeds min({a},{b})"),
                );
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            let ab = t.mul(a, b);
            for c in 0..n {
                let left = t.mul(ab, c);
                let right = t.mul(a, t.mul(b, c));
                if left != right {
                    report.push(
                        ViolationKind::Associativity,
                        vec![a, b, c],
                        format!("({a}*{b})*{c} = {left} but {a}*({b}*{c}) = {right}"),
                    );
                }
            }
        }
    }
    report
}

pub fn is_commutative(t: &TomonoidTable) -> bool {
    let n = t.size();
    (0..n).all(|a| (a + 1..n).all(|b| t.mul(a, b) == t.mul(b, a)))
}

/// Archimedean test: no `b < 1` fixes a non-zero `a` from the left.
///
/// For finite negative tomonoids this is equivalent to nilpotency.
pub fn is_archimedean(t: &TomonoidTable) -> bool {
    let n = t.size();
    (1..n).all(|a| (0..n - 1).all(|b| t.mul(b, a) != a))
}

/// All idempotents, ascending. Always contains the bottom and the identity.
pub fn idempotents(t: &TomonoidTable) -> Vec<Elem> {
    t.chain().elements().filter(|&e| t.mul(e, e) == e).collect()
}

/// A pair of idempotents `(left, right)` of a tomonoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdempotentPair {
    pub left: Elem,
    pub right: Elem,
}

impl IdempotentPair {
    pub fn new(left: Elem, right: Elem) -> Self {
        Self { left, right }
    }

    pub fn identity(t: &TomonoidTable) -> Self {
        let one = t.chain().identity();
        Self::new(one, one)
    }

    pub fn is_valid_for(&self, t: &TomonoidTable) -> bool {
        let n = t.size();
        self.left < n
            && self.right < n
            && t.mul(self.left, self.left) == self.left
            && t.mul(self.right, self.right) == self.right
    }
}

impl fmt::Display for IdempotentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

/// The atom-characterising idempotents: the least `left` with
/// `left * atom = atom` and the least `right` with `atom * right = atom`.
pub fn atom_char_idempotents(t: &TomonoidTable) -> Result<IdempotentPair> {
    let atom = t.chain().atom().ok_or(TomoError::Trivial)?;
    let n = t.size();
    let least = |f: &dyn Fn(Elem) -> bool| (0..n).find(|&a| f(a));
    let left = least(&|a| t.mul(a, atom) == atom);
    let right = least(&|a| t.mul(atom, a) == atom);
    let (Some(left), Some(right)) = (left, right) else {
        return Err(TomoError::Soundness("the identity does not fix the atom".into()));
    };
    let pair = IdempotentPair::new(left, right);
    if !pair.is_valid_for(t) {
        return Err(TomoError::Soundness(format!(
            "atom-characterising pair {pair} is not idempotent"
        )));
    }
    Ok(pair)
}

/// The Rees quotient by `q`: every element `<= q` collapses to a new bottom.
///
/// The result lives on a chain of size `n - q`, where old element `a > q`
/// becomes `a - q`. Quotienting by the bottom returns the table unchanged.
pub fn rees_quotient(t: &TomonoidTable, q: Elem) -> Result<TomonoidTable> {
    let n = t.size();
    if q >= n {
        return Err(TomoError::OutOfRange { q, size: n });
    }
    if q == n - 1 {
        return Err(TomoError::QuotientByIdentity { q });
    }
    Ok(TomonoidTable::from_fn(n - q, |a, b| {
        if a == 0 || b == 0 {
            return 0;
        }
        let v = t.mul(a + q, b + q);
        v.saturating_sub(q)
    }))
}

/// The Rees quotient by the atom, i.e. the parent in the generation tree.
///
/// For two-element tomonoids the atom is the identity and the quotient is
/// the trivial tomonoid.
pub fn atom_quotient(t: &TomonoidTable) -> Result<TomonoidTable> {
    match t.size() {
        1 => Err(TomoError::Trivial),
        2 => Ok(TomonoidTable::trivial()),
        _ => rees_quotient(t, 1),
    }
}
