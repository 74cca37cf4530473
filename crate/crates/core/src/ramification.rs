//! Ramifications of a tomonoid partition over the zero doubling extension.
//!
//! Given a f.n. tomonoid `S` of size `n`, the zero doubling extension `Ŝ`
//! has `n + 1` elements: a new bottom `0̂` (index 0), a new atom `α̂`
//! (index 1) standing in for the old bottom of `S`, and the non-zero elements
//! of `S` shifted up by one. The ramification for a pair of idempotents is the
//! least equivalence on `Ŝ x Ŝ` closed under the rules listed in [`Rule`].
//! Every one-element coextension of `S` with that pair of atom-characterising
//! idempotents has a level equivalence coarsening the ramification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::chain::{is_archimedean, is_commutative, Chain, Elem, IdempotentPair, TomonoidTable};
use crate::error::{Result, TomoError};
use crate::partition::ClassId;
use crate::union_find::UnionFind;

/// A cell `(row, column)` of a square; the row is the left factor.
pub type Cell = (usize, usize);

/// The zero doubling extension of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedChain {
    base: Chain,
}

impl ExtendedChain {
    pub const ZERO: usize = 0;
    pub const ATOM: usize = 1;

    pub fn new(base: Chain) -> Self {
        Self { base }
    }

    pub fn base(&self) -> Chain {
        self.base
    }

    pub fn size(&self) -> usize {
        self.base.size() + 1
    }

    pub fn identity(&self) -> usize {
        self.base.size()
    }

    /// Image of an element of `S`: the old bottom becomes the new atom.
    pub fn embed(&self, s: Elem) -> usize {
        if s == 0 {
            Self::ATOM
        } else {
            s + 1
        }
    }

    /// The element of `S` a new index stands for, if it is a non-zero one.
    pub fn restrict(&self, x: usize) -> Option<Elem> {
        (x >= 2).then(|| x - 1)
    }
}

/// The rules generating a ramification.
///
/// Static rules are applied once; the two closure rules are re-fired until
/// nothing changes. Letters refer to `Ŝ`; `F` is the support, `F̄` the
/// cosupport, `∼` the level equivalence of `S`, and `(l, r)` the images of
/// the idempotent pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Support cells keep their level classes.
    Level,
    /// `(a,b) ∼ d`, `(b,c) ∼ e` in `F`, `(d,c)`, `(a,e)` in `F̄` gives `(d,c) ≈ (a,e)`.
    Associative,
    /// `(a,b) ∈ F̄`, `(b,c) ∼ e`, `c < r` gives `(a,e) ≈ 0̂`.
    RightFactorZero,
    /// `(b,c) ∈ F̄`, `(a,b) ∼ d`, `a < l` gives `(d,c) ≈ 0̂`.
    LeftFactorZero,
    /// `(a,b) ∈ F̄`, `(b,c) ∼ e`, `c ≥ r` gives `(a,e) ≈ (a,b)`.
    RightFactorInherit,
    /// `(b,c) ∈ F̄`, `(a,b) ∼ d`, `a ≥ l` gives `(d,c) ≈ (b,c)`.
    LeftFactorInherit,
    /// `(a,b), (b,c) ∈ F̄`, `a < l`, `c ≥ r` gives `(a,b) ≈ 0̂`.
    AtomConflictLeft,
    /// `(a,b), (b,c) ∈ F̄`, `a ≥ l`, `c < r` gives `(b,c) ≈ 0̂`.
    AtomConflictRight,
    /// Seeds of the zero class: `(0̂,1)`, `(a,α̂)` for `a < l`, `(α̂,b)` for `b < r`.
    ZeroSeed,
    /// Seeds of the atom class: `(α̂,1)`, `(l,α̂)`, `(α̂,r)`.
    AtomSeed,
    /// The zero class is downward closed.
    ZeroDownward,
    /// The atom class is upward closed within the cosupport.
    AtomUpward,
    /// `(a,b) ≈ (b,a)` on the cosupport.
    Symmetric,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::Level,
        Rule::Associative,
        Rule::RightFactorZero,
        Rule::LeftFactorZero,
        Rule::RightFactorInherit,
        Rule::LeftFactorInherit,
        Rule::AtomConflictLeft,
        Rule::AtomConflictRight,
        Rule::ZeroSeed,
        Rule::AtomSeed,
        Rule::ZeroDownward,
        Rule::AtomUpward,
        Rule::Symmetric,
    ];
}

/// One effective merge performed by the engine.
///
/// `witness` holds the rule's parameters: `(a, b, c)` for the rules quantified
/// over three elements, the seed or support cell for the cell rules, and the
/// cell already in the zero (atom) class for the closure rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Merge {
    pub rule: Rule,
    pub cells: (Cell, Cell),
    pub witness: [usize; 3],
}

#[derive(Clone, Debug)]
pub struct Ramification {
    ext: ExtendedChain,
    support: Vec<bool>,
    class_of: Vec<ClassId>,
    zero_class: ClassId,
    atom_class: ClassId,
    obstructed: bool,
    pair: IdempotentPair,
    commutative_mode: bool,
    archimedean_mode: bool,
    log: Vec<Merge>,
}

/// The support: cells of `Ŝ x Ŝ` over non-zero elements of `S` whose product
/// in `S` is non-zero.
pub fn compute_support(t: &TomonoidTable) -> Result<BTreeSet<Cell>> {
    if t.size() < 2 {
        return Err(TomoError::Trivial);
    }
    let m = t.size() + 1;
    let support: BTreeSet<Cell> = (2..m)
        .flat_map(|x| (2..m).map(move |y| (x, y)))
        .filter(|&(x, y)| t.mul(x - 1, y - 1) != 0)
        .collect();
    for &(x, y) in &support {
        for up in [(x + 1, y), (x, y + 1)] {
            if up.0 < m && up.1 < m && !support.contains(&up) {
                return Err(TomoError::Soundness(format!("support is not upward closed at {up:?}")));
            }
        }
    }
    Ok(support)
}

/// Computes the ramification of `t` for `pair`.
///
/// `commutative_mode` adds the symmetry rule. `archimedean_mode` restricts
/// the rules to those needed for Archimedean input with the identity pair:
/// the inheritance, atom-conflict and upward-closure rules are dropped.
pub fn ramify(
    t: &TomonoidTable,
    pair: IdempotentPair,
    commutative_mode: bool,
    archimedean_mode: bool,
) -> Result<Ramification> {
    let n = t.size();
    if n < 2 {
        return Err(TomoError::Trivial);
    }
    for e in [pair.left, pair.right] {
        if e >= n {
            return Err(TomoError::OutOfRange { q: e, size: n });
        }
        if t.mul(e, e) != e {
            return Err(TomoError::NotIdempotent(e));
        }
    }
    if archimedean_mode {
        if pair != IdempotentPair::identity(t) {
            return Err(TomoError::Precondition(format!(
                "archimedean mode needs the identity pair, got {pair}"
            )));
        }
        if !is_archimedean(t) {
            return Err(TomoError::Precondition(
                "archimedean mode needs an Archimedean tomonoid".into(),
            ));
        }
    }
    if commutative_mode {
        if pair.left != pair.right {
            return Err(TomoError::Precondition(format!(
                "commutative mode needs equal idempotents, got {pair}"
            )));
        }
        if !is_commutative(t) {
            return Err(TomoError::Precondition(
                "commutative mode needs a commutative tomonoid".into(),
            ));
        }
    }
    Engine::new(t, pair, commutative_mode, archimedean_mode).run()
}

struct Engine<'t> {
    t: &'t TomonoidTable,
    ext: ExtendedChain,
    m: usize,
    left: usize,
    right: usize,
    pair: IdempotentPair,
    commutative_mode: bool,
    archimedean_mode: bool,
    uf: UnionFind,
    log: Vec<Merge>,
    closing: bool,
    zero_queue: VecDeque<usize>,
    atom_queue: VecDeque<usize>,
}

impl<'t> Engine<'t> {
    fn new(t: &'t TomonoidTable, pair: IdempotentPair, commutative_mode: bool, archimedean_mode: bool) -> Self {
        let ext = ExtendedChain::new(t.chain());
        let m = ext.size();
        Self {
            t,
            ext,
            m,
            left: ext.embed(pair.left),
            right: ext.embed(pair.right),
            pair,
            commutative_mode,
            archimedean_mode,
            uf: UnionFind::new(m * m),
            log: Vec::new(),
            closing: false,
            zero_queue: VecDeque::new(),
            atom_queue: VecDeque::new(),
        }
    }

    fn one(&self) -> usize {
        self.m - 1
    }

    fn zero_anchor(&self) -> Cell {
        (self.one(), ExtendedChain::ZERO)
    }

    fn atom_anchor(&self) -> Cell {
        (self.one(), ExtendedChain::ATOM)
    }

    fn idx(&self, c: Cell) -> usize {
        c.0 * self.m + c.1
    }

    fn cell(&self, i: usize) -> Cell {
        (i / self.m, i % self.m)
    }

    /// The product of a support cell, as an index of `Ŝ`.
    fn product(&self, x: usize, y: usize) -> Option<usize> {
        if x < 2 || y < 2 {
            return None;
        }
        match self.t.mul(x - 1, y - 1) {
            0 => None,
            v => Some(v + 1),
        }
    }

    fn in_support(&self, x: usize, y: usize) -> bool {
        self.product(x, y).is_some()
    }

    fn merge(&mut self, rule: Rule, witness: [usize; 3], a: Cell, b: Cell) {
        let (ia, ib) = (self.idx(a), self.idx(b));
        if self.uf.same(ia, ib) {
            return;
        }
        let za = self.idx(self.zero_anchor());
        let aa = self.idx(self.atom_anchor());
        let a_zero = self.uf.same(ia, za);
        let b_zero = self.uf.same(ib, za);
        let a_atom = self.uf.same(ia, aa);
        let b_atom = self.uf.same(ib, aa);
        let side_a = self.uf.members(ia).to_vec();
        let side_b = self.uf.members(ib).to_vec();
        self.uf.union(ia, ib);
        self.log.push(Merge {
            rule,
            cells: (a, b),
            witness,
        });
        if !self.closing {
            return;
        }
        if a_zero != b_zero {
            let newcomers = if a_zero { &side_b } else { &side_a };
            self.zero_queue.extend(newcomers.iter().copied());
        }
        if !self.archimedean_mode && a_atom != b_atom {
            let newcomers = if a_atom { &side_b } else { &side_a };
            self.atom_queue.extend(newcomers.iter().copied());
        }
    }

    fn apply_static_rules(&mut self) {
        let m = self.m;
        let one = self.one();
        let zero = self.zero_anchor();
        let atom = self.atom_anchor();
        let general = !self.archimedean_mode;

        for x in 2..m {
            for y in 2..m {
                if let Some(p) = self.product(x, y) {
                    self.merge(Rule::Level, [x, y, 0], (x, y), (one, p));
                }
            }
        }

        for a in 2..m {
            for b in 2..m {
                for c in 2..m {
                    if let (Some(d), Some(e)) = (self.product(a, b), self.product(b, c)) {
                        if !self.in_support(d, c) && !self.in_support(a, e) {
                            self.merge(Rule::Associative, [a, b, c], (d, c), (a, e));
                        }
                    }
                    if let (false, Some(e)) = (self.in_support(a, b), self.product(b, c)) {
                        if c < self.right {
                            self.merge(Rule::RightFactorZero, [a, b, c], (a, e), zero);
                        } else if general {
                            self.merge(Rule::RightFactorInherit, [a, b, c], (a, e), (a, b));
                        }
                    }
                    if let (false, Some(d)) = (self.in_support(b, c), self.product(a, b)) {
                        if a < self.left {
                            self.merge(Rule::LeftFactorZero, [a, b, c], (d, c), zero);
                        } else if general {
                            self.merge(Rule::LeftFactorInherit, [a, b, c], (d, c), (b, c));
                        }
                    }
                }
            }
        }

        if general {
            for a in 1..m {
                for b in 1..m {
                    for c in 1..m {
                        if self.in_support(a, b) || self.in_support(b, c) {
                            continue;
                        }
                        if a < self.left && c >= self.right {
                            self.merge(Rule::AtomConflictLeft, [a, b, c], (a, b), zero);
                        }
                        if a >= self.left && c < self.right {
                            self.merge(Rule::AtomConflictRight, [a, b, c], (b, c), zero);
                        }
                    }
                }
            }
        }

        let mut zero_seeds = vec![(0, one)];
        zero_seeds.extend((0..self.left).map(|a| (a, ExtendedChain::ATOM)));
        zero_seeds.extend((0..self.right).map(|b| (ExtendedChain::ATOM, b)));
        for s in zero_seeds {
            self.merge(Rule::ZeroSeed, [s.0, s.1, 0], s, zero);
        }
        let mut atom_seeds = vec![(ExtendedChain::ATOM, one)];
        if general {
            atom_seeds.push((self.left, ExtendedChain::ATOM));
            atom_seeds.push((ExtendedChain::ATOM, self.right));
        }
        for s in atom_seeds {
            self.merge(Rule::AtomSeed, [s.0, s.1, 0], s, atom);
        }

        if self.commutative_mode {
            for a in 0..m {
                for b in a + 1..m {
                    if !self.in_support(a, b) && !self.in_support(b, a) {
                        self.merge(Rule::Symmetric, [a, b, 0], (a, b), (b, a));
                    }
                }
            }
        }
    }

    fn close(&mut self) {
        self.closing = true;
        let za = self.idx(self.zero_anchor());
        let mut zero_members = self.uf.members(za).to_vec();
        zero_members.sort_unstable();
        self.zero_queue.extend(zero_members);
        if !self.archimedean_mode {
            let aa = self.idx(self.atom_anchor());
            let mut atom_members = self.uf.members(aa).to_vec();
            atom_members.sort_unstable();
            self.atom_queue.extend(atom_members);
        }

        loop {
            if let Some(i) = self.zero_queue.pop_front() {
                let (x, y) = self.cell(i);
                let lower = [(x.wrapping_sub(1), y), (x, y.wrapping_sub(1))];
                for below in lower {
                    if below.0 < self.m && below.1 < self.m {
                        self.merge(Rule::ZeroDownward, [x, y, 0], below, (x, y));
                    }
                }
            } else if let Some(i) = self.atom_queue.pop_front() {
                let (x, y) = self.cell(i);
                for above in [(x + 1, y), (x, y + 1)] {
                    if above.0 < self.m && above.1 < self.m && !self.in_support(above.0, above.1) {
                        self.merge(Rule::AtomUpward, [x, y, 0], above, (x, y));
                    }
                }
            } else {
                break;
            }
        }
    }

    fn run(mut self) -> Result<Ramification> {
        self.apply_static_rules();
        self.close();

        let m = self.m;
        let support: Vec<bool> = (0..m * m)
            .map(|i| {
                let (x, y) = self.cell(i);
                self.in_support(x, y)
            })
            .collect();

        // Support classes are identified by their product; cosupport classes
        // get identifiers from m upwards, in order of their first cell.
        let mut class_of = vec![0; m * m];
        let mut root_ids: BTreeMap<usize, ClassId> = BTreeMap::new();
        let mut support_roots: BTreeMap<usize, ClassId> = BTreeMap::new();
        for (i, slot) in class_of.iter_mut().enumerate() {
            let (x, y) = self.cell(i);
            let root = self.uf.find(i);
            if let Some(p) = self.product(x, y) {
                *slot = p;
                if let Some(&q) = support_roots.get(&root) {
                    if q != p {
                        return Err(TomoError::Soundness(format!("support classes {q} and {p} were merged")));
                    }
                }
                support_roots.insert(root, p);
            } else {
                let next = m + root_ids.len();
                *slot = *root_ids.entry(root).or_insert(next);
            }
        }
        if let Some(root) = root_ids.keys().find(|r| support_roots.contains_key(r)) {
            return Err(TomoError::Soundness(format!(
                "a cosupport cell joined the support class {}",
                support_roots[root]
            )));
        }

        let zero_class = class_of[self.idx(self.zero_anchor())];
        let atom_class = class_of[self.idx(self.atom_anchor())];
        Ok(Ramification {
            ext: self.ext,
            support,
            class_of,
            zero_class,
            atom_class,
            obstructed: zero_class == atom_class,
            pair: self.pair,
            commutative_mode: self.commutative_mode,
            archimedean_mode: self.archimedean_mode,
            log: self.log,
        })
    }
}

impl Ramification {
    pub fn ext(&self) -> ExtendedChain {
        self.ext
    }

    pub fn size(&self) -> usize {
        self.ext.size()
    }

    pub fn pair(&self) -> IdempotentPair {
        self.pair
    }

    pub fn commutative_mode(&self) -> bool {
        self.commutative_mode
    }

    pub fn archimedean_mode(&self) -> bool {
        self.archimedean_mode
    }

    pub fn is_obstructed(&self) -> bool {
        self.obstructed
    }

    pub fn zero_class(&self) -> ClassId {
        self.zero_class
    }

    pub fn atom_class(&self) -> ClassId {
        self.atom_class
    }

    pub fn in_support(&self, c: Cell) -> bool {
        self.support[c.0 * self.size() + c.1]
    }

    pub fn class_of(&self, c: Cell) -> ClassId {
        self.class_of[c.0 * self.size() + c.1]
    }

    /// Class identifiers of all cells, row-major.
    pub fn class_assignment(&self) -> &[ClassId] {
        &self.class_of
    }

    pub fn support(&self) -> BTreeSet<Cell> {
        self.cells().filter(|&c| self.in_support(c)).collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let m = self.size();
        (0..m).flat_map(move |x| (0..m).map(move |y| (x, y)))
    }

    /// All classes with their cells in row-major order.
    pub fn classes(&self) -> BTreeMap<ClassId, Vec<Cell>> {
        let mut out: BTreeMap<ClassId, Vec<Cell>> = BTreeMap::new();
        for c in self.cells() {
            out.entry(self.class_of(c)).or_default().push(c);
        }
        out
    }

    /// Classes contained in the cosupport.
    pub fn cosupport_classes(&self) -> BTreeMap<ClassId, Vec<Cell>> {
        let mut classes = self.classes();
        classes.retain(|_, cells| !self.in_support(cells[0]));
        classes
    }

    /// The merges performed, in order.
    pub fn log(&self) -> &[Merge] {
        &self.log
    }

    /// Replays the merge log against `t`, checking that every merge is an
    /// instance of an enabled rule, that the replay reproduces the classes,
    /// and that the classes satisfy every rule.
    pub fn audit(&self, t: &TomonoidTable) -> std::result::Result<(), String> {
        audit::run(self, t)
    }
}

impl fmt::Display for Ramification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ramification n={} pair={} commutative={} archimedean={} obstructed={}",
            self.ext.base().size(),
            self.pair,
            self.commutative_mode,
            self.archimedean_mode,
            self.obstructed
        )?;
        for (id, cells) in self.cosupport_classes() {
            let mut tags = Vec::new();
            if id == self.zero_class {
                tags.push("zero");
            }
            if id == self.atom_class {
                tags.push("atom");
            }
            let cells: Vec<String> = cells.iter().map(|(x, y)| format!("({x},{y})")).collect();
            let tag = if tags.is_empty() {
                String::new()
            } else {
                format!(" [{}]", tags.join(","))
            };
            writeln!(f, "class {id}{tag}: {}", cells.join(" "))?;
        }
        Ok(())
    }
}

mod audit {
    //! Rule premises restated cell by cell, independent of the engine loops.

    use super::*;

    struct Ctx<'a> {
        t: &'a TomonoidTable,
        m: usize,
        l: usize,
        r: usize,
        arch: bool,
        comm: bool,
    }

    impl Ctx<'_> {
        fn nonzero(&self, x: usize) -> bool {
            (2..self.m).contains(&x)
        }

        /// `Some(product)` iff `(x, y)` lies in the support.
        fn sup(&self, x: usize, y: usize) -> Option<usize> {
            if !self.nonzero(x) || !self.nonzero(y) {
                return None;
            }
            let v = self.t.mul(x - 1, y - 1);
            (v > 0).then_some(v + 1)
        }

        fn enabled(&self, rule: Rule) -> bool {
            match rule {
                Rule::RightFactorInherit
                | Rule::LeftFactorInherit
                | Rule::AtomConflictLeft
                | Rule::AtomConflictRight
                | Rule::AtomUpward => !self.arch,
                Rule::Symmetric => self.comm,
                _ => true,
            }
        }

        /// The conclusion of a static rule instance, if its premise holds.
        fn instance(&self, rule: Rule, w: [usize; 3]) -> Option<(Cell, Cell)> {
            let [a, b, c] = w;
            let one = self.m - 1;
            let zero = (one, 0);
            let atom = (one, 1);
            let nz3 = self.nonzero(a) && self.nonzero(b) && self.nonzero(c);
            match rule {
                Rule::Level => self.sup(a, b).map(|p| ((a, b), (one, p))),
                Rule::Associative if nz3 => {
                    let d = self.sup(a, b)?;
                    let e = self.sup(b, c)?;
                    (self.sup(d, c).is_none() && self.sup(a, e).is_none()).then_some(((d, c), (a, e)))
                }
                Rule::RightFactorZero if nz3 => {
                    let e = self.sup(b, c)?;
                    (self.sup(a, b).is_none() && c < self.r).then_some(((a, e), zero))
                }
                Rule::LeftFactorZero if nz3 => {
                    let d = self.sup(a, b)?;
                    (self.sup(b, c).is_none() && a < self.l).then_some(((d, c), zero))
                }
                Rule::RightFactorInherit if nz3 => {
                    let e = self.sup(b, c)?;
                    (self.sup(a, b).is_none() && c >= self.r).then_some(((a, e), (a, b)))
                }
                Rule::LeftFactorInherit if nz3 => {
                    let d = self.sup(a, b)?;
                    (self.sup(b, c).is_none() && a >= self.l).then_some(((d, c), (b, c)))
                }
                Rule::AtomConflictLeft | Rule::AtomConflictRight => {
                    let positive = a > 0 && b > 0 && c > 0 && a < self.m && b < self.m && c < self.m;
                    let cosup = self.sup(a, b).is_none() && self.sup(b, c).is_none();
                    if !(positive && cosup) {
                        return None;
                    }
                    if rule == Rule::AtomConflictLeft {
                        (a < self.l && c >= self.r).then_some(((a, b), zero))
                    } else {
                        (a >= self.l && c < self.r).then_some(((b, c), zero))
                    }
                }
                Rule::ZeroSeed => {
                    let seed = (a, b);
                    let ok = seed == (0, one) || (b == 1 && a < self.l) || (a == 1 && b < self.r);
                    ok.then_some((seed, zero))
                }
                Rule::AtomSeed => {
                    let seed = (a, b);
                    let ok = seed == (1, one) || (!self.arch && (seed == (self.l, 1) || seed == (1, self.r)));
                    ok.then_some((seed, atom))
                }
                Rule::Symmetric => (a < self.m && b < self.m && self.sup(a, b).is_none() && self.sup(b, a).is_none())
                    .then_some(((a, b), (b, a))),
                _ => None,
            }
        }
    }

    fn same_pair(x: (Cell, Cell), y: (Cell, Cell)) -> bool {
        x == y || x == (y.1, y.0)
    }

    pub(super) fn run(r: &Ramification, t: &TomonoidTable) -> std::result::Result<(), String> {
        let m = r.size();
        if t.size() + 1 != m {
            return Err("table does not match the ramification".into());
        }
        let ctx = Ctx {
            t,
            m,
            l: r.ext.embed(r.pair.left),
            r: r.ext.embed(r.pair.right),
            arch: r.archimedean_mode,
            comm: r.commutative_mode,
        };
        let idx = |c: Cell| c.0 * m + c.1;
        let one = m - 1;
        let zero = (one, 0);
        let atom = (one, 1);

        for x in 0..m {
            for y in 0..m {
                if ctx.sup(x, y).is_some() != r.in_support((x, y)) {
                    return Err(format!("support mismatch at ({x},{y})"));
                }
            }
        }

        let mut uf = UnionFind::new(m * m);
        for (k, merge) in r.log.iter().enumerate() {
            if !ctx.enabled(merge.rule) {
                return Err(format!("merge {k} uses disabled rule {:?}", merge.rule));
            }
            let (p, q) = merge.cells;
            let justified = match merge.rule {
                Rule::ZeroDownward => {
                    let w = (merge.witness[0], merge.witness[1]);
                    q == w && p.0 <= w.0 && p.1 <= w.1 && ctx.sup(p.0, p.1).is_none() && uf.same(idx(w), idx(zero))
                }
                Rule::AtomUpward => {
                    let w = (merge.witness[0], merge.witness[1]);
                    q == w && p.0 >= w.0 && p.1 >= w.1 && ctx.sup(p.0, p.1).is_none() && uf.same(idx(w), idx(atom))
                }
                rule => ctx
                    .instance(rule, merge.witness)
                    .is_some_and(|concl| same_pair(concl, merge.cells)),
            };
            if !justified {
                return Err(format!("merge {k} is not justified: {merge:?}"));
            }
            if uf.union(idx(p), idx(q)).is_none() {
                return Err(format!("merge {k} was redundant: {merge:?}"));
            }
        }

        let cells: Vec<Cell> = r.cells().collect();
        for &p in &cells {
            for &q in &cells {
                if uf.same(idx(p), idx(q)) != (r.class_of(p) == r.class_of(q)) {
                    return Err(format!("replay disagrees on {p:?} and {q:?}"));
                }
            }
        }

        for rule in Rule::ALL.into_iter().filter(|&rule| ctx.enabled(rule)) {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if let Some((p, q)) = ctx.instance(rule, [a, b, c]) {
                            if r.class_of(p) != r.class_of(q) {
                                return Err(format!("{rule:?} instance ({a},{b},{c}) is not satisfied"));
                            }
                        }
                    }
                }
            }
        }
        for &p in &cells {
            for &q in &cells {
                let below = p.0 <= q.0 && p.1 <= q.1;
                if !below || ctx.sup(q.0, q.1).is_some() {
                    continue;
                }
                if r.class_of(q) == r.zero_class && r.class_of(p) != r.zero_class {
                    return Err(format!("zero class not downward closed at {p:?} <= {q:?}"));
                }
                if !ctx.arch && r.class_of(p) == r.atom_class && r.class_of(q) != r.atom_class {
                    return Err(format!("atom class not upward closed at {p:?} <= {q:?}"));
                }
            }
        }
        Ok(())
    }
}
