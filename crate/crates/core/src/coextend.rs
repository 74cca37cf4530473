//! One-element Rees coextensions.
//!
//! Once the ramification is known, a coextension is fixed by the set `Z` of
//! cosupport cells whose product becomes the new bottom. `Z` must be a
//! downward closed union of cosupport classes that contains the class of
//! `(1,0̂)` and avoids the class of `(1,α̂)`; every other cosupport cell gets
//! the new atom. The choices are the downsets of the class preorder, which is
//! condensed to a DAG first.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;
use serde::{Deserialize, Serialize};

use crate::chain::{
    atom_char_idempotents, atom_quotient, idempotents, is_archimedean, is_commutative, verify_table, IdempotentPair,
    TomonoidTable,
};
use crate::error::{Result, TomoError};
use crate::partition::ClassId;
use crate::ramification::{ramify, Cell, ExtendedChain, Ramification};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagNode {
    /// Cosupport classes condensed into this node; more than one means the
    /// preorder forces them together.
    pub classes: Vec<ClassId>,
    pub cells: Vec<Cell>,
}

/// The condensed preorder on cosupport classes. Nodes are numbered in a
/// fixed topological order, so the zero node is always node 0.
#[derive(Clone, Debug)]
pub struct ClassDag {
    nodes: Vec<DagNode>,
    covers: Vec<(usize, usize)>,
    below: Vec<Vec<bool>>,
    zero_node: usize,
    atom_node: usize,
}

impl ClassDag {
    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Covering pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn zero_node(&self) -> usize {
        self.zero_node
    }

    pub fn atom_node(&self) -> usize {
        self.atom_node
    }

    pub fn cells_of(&self, node: usize) -> &[Cell] {
        &self.nodes[node].cells
    }

    /// Whether `u <= v` in the condensed order.
    pub fn is_below(&self, u: usize, v: usize) -> bool {
        self.below[u][v]
    }

    pub fn lower_covers(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == v).map(|c| c.0)
    }

    /// Nodes that merge more than one class.
    pub fn forced_groups(&self) -> impl Iterator<Item = &DagNode> {
        self.nodes.iter().filter(|n| n.classes.len() > 1)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph classes {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let ids: Vec<String> = node.classes.iter().map(ClassId::to_string).collect();
            let mark = if i == self.zero_node {
                " zero"
            } else if i == self.atom_node {
                " atom"
            } else {
                ""
            };
            let _ = writeln!(out, "  n{i} [label=\"{}{mark}\"];", ids.join(","));
        }
        for (u, v) in &self.covers {
            let _ = writeln!(out, "  n{u} -> n{v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the class DAG of an unobstructed ramification.
pub fn class_poset(r: &Ramification) -> Result<ClassDag> {
    if r.is_obstructed() {
        let pair = r.pair();
        return Err(TomoError::Obstructed {
            left: pair.left,
            right: pair.right,
        });
    }
    let m = r.size();
    let classes = r.cosupport_classes();

    let mut graph: DiGraphMap<ClassId, ()> = DiGraphMap::new();
    for &id in classes.keys() {
        graph.add_node(id);
    }
    for (x, y) in r.cells().filter(|&c| !r.in_support(c)) {
        let from = r.class_of((x, y));
        for up in [(x + 1, y), (x, y + 1)] {
            if up.0 < m && up.1 < m && !r.in_support(up) {
                let to = r.class_of(up);
                if to != from {
                    graph.add_edge(from, to, ());
                }
            }
        }
    }

    let min_cell = |ids: &[ClassId]| ids.iter().map(|id| classes[id][0]).min().unwrap_or((m, m));
    let components: Vec<Vec<ClassId>> = tarjan_scc(&graph)
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    let comp_of: BTreeMap<ClassId, usize> = components
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&id| (id, i)))
        .collect();

    let k = components.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    let mut indegree = vec![0usize; k];
    for (from, to, _) in graph.all_edges() {
        let (u, v) = (comp_of[&from], comp_of[&to]);
        if u != v && succ[u].insert(v) {
            indegree[v] += 1;
        }
    }

    // Kahn's algorithm, ties broken by the least cell of the component.
    let mut ready: BinaryHeap<Reverse<(Cell, usize)>> = (0..k)
        .filter(|&u| indegree[u] == 0)
        .map(|u| Reverse((min_cell(&components[u]), u)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, u))) = ready.pop() {
        order.push(u);
        for &v in &succ[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(Reverse((min_cell(&components[v]), v)));
            }
        }
    }
    if order.len() != k {
        return Err(TomoError::Soundness("condensed class graph has a cycle".into()));
    }
    let mut position = vec![0; k];
    for (pos, &u) in order.iter().enumerate() {
        position[u] = pos;
    }

    let mut below = vec![vec![false; k]; k];
    for pos in (0..k).rev() {
        let u = order[pos];
        below[pos][pos] = true;
        for &v in &succ[u] {
            let reach = below[position[v]].clone();
            for (dst, src) in below[pos].iter_mut().zip(reach) {
                *dst |= src;
            }
        }
    }
    let mut covers = Vec::new();
    for u in 0..k {
        for v in 0..k {
            if u != v && below[u][v] && !(0..k).any(|w| w != u && w != v && below[u][w] && below[w][v]) {
                covers.push((u, v));
            }
        }
    }

    let nodes: Vec<DagNode> = order
        .iter()
        .map(|&u| {
            let ids = components[u].clone();
            let mut cells: Vec<Cell> = ids.iter().flat_map(|id| classes[id].iter().copied()).collect();
            cells.sort_unstable();
            DagNode { classes: ids, cells }
        })
        .collect();
    let zero_node = position[comp_of[&r.zero_class()]];
    let atom_node = position[comp_of[&r.atom_class()]];
    if zero_node == atom_node || below[atom_node][zero_node] {
        return Err(TomoError::Soundness("zero class is not below the atom class".into()));
    }
    Ok(ClassDag {
        nodes,
        covers,
        below,
        zero_node,
        atom_node,
    })
}

/// A downset of the class DAG: the nodes whose cells collapse to `0̂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoextensionChoice {
    nodes: BTreeSet<usize>,
}

impl CoextensionChoice {
    pub fn new(nodes: impl IntoIterator<Item = usize>) -> Self {
        Self {
            nodes: nodes.into_iter().collect(),
        }
    }

    pub fn nodes(&self) -> &BTreeSet<usize> {
        &self.nodes
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.contains(&node)
    }

    /// Downward closed, contains the zero node and excludes the atom node.
    pub fn is_admissible(&self, dag: &ClassDag) -> bool {
        self.contains(dag.zero_node)
            && !self.contains(dag.atom_node)
            && self.nodes.iter().all(|&v| v < dag.len())
            && self
                .nodes
                .iter()
                .all(|&v| (0..dag.len()).all(|u| !dag.is_below(u, v) || self.contains(u)))
    }
}

/// Iterator over admissible downsets, smallest first in the lexicographic
/// order of membership vectors over the topological node order.
pub struct Choices<'a> {
    dag: &'a ClassDag,
    candidates: Vec<usize>,
    stack: Vec<(usize, Vec<usize>)>,
}

impl Iterator for Choices<'_> {
    type Item = CoextensionChoice;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some((depth, chosen)) = self.stack.pop() {
            let Some(&v) = self.candidates.get(depth) else {
                return Some(CoextensionChoice::new(chosen));
            };
            // Lower covers precede v in the topological order, so their
            // membership is already decided.
            if self.dag.lower_covers(v).all(|u| chosen.contains(&u)) {
                let mut with = chosen.clone();
                with.push(v);
                self.stack.push((depth + 1, with));
            }
            if v != self.dag.zero_node {
                self.stack.push((depth + 1, chosen));
            }
        }
        None
    }
}

/// Every downset containing the zero node and excluding the atom node.
pub fn enumerate_choices(dag: &ClassDag) -> Result<Choices<'_>> {
    if dag.zero_node == dag.atom_node {
        return Err(TomoError::Precondition("zero and atom nodes coincide".into()));
    }
    let candidates: Vec<usize> = (0..dag.len()).filter(|&v| !dag.is_below(dag.atom_node, v)).collect();
    Ok(Choices {
        dag,
        candidates,
        stack: vec![(0, Vec::new())],
    })
}

/// How much of the postcondition `materialise` re-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    /// Quotient, idempotent pair and mode flags only.
    Light,
    /// Additionally the full axiom check of the new table.
    Full,
}

/// Writes out the table of the coextension picked by `choice`.
pub fn materialise(
    t: &TomonoidTable,
    r: &Ramification,
    dag: &ClassDag,
    choice: &CoextensionChoice,
    check: Check,
) -> Result<TomonoidTable> {
    let m = r.size();
    if t.size() + 1 != m {
        return Err(TomoError::Precondition(
            "ramification does not belong to this table".into(),
        ));
    }
    if !choice.is_admissible(dag) {
        return Err(TomoError::Precondition("choice is not an admissible downset".into()));
    }
    let mut in_zero = vec![false; m * m];
    for &node in choice.nodes() {
        for &(x, y) in dag.cells_of(node) {
            in_zero[x * m + y] = true;
        }
    }
    let table = TomonoidTable::from_fn(m, |x, y| {
        if r.in_support((x, y)) {
            t.mul(x - 1, y - 1) + 1
        } else if in_zero[x * m + y] {
            ExtendedChain::ZERO
        } else {
            ExtendedChain::ATOM
        }
    });

    let soundness = |what: &str| TomoError::Soundness(format!("coextension {what} (pair {})", r.pair()));
    if check == Check::Full {
        let report = verify_table(&table);
        if !report.ok() {
            return Err(TomoError::Soundness(format!("coextension fails the axioms: {report}")));
        }
    }
    if atom_quotient(&table)? != *t {
        return Err(soundness("does not quotient back to its parent"));
    }
    let ext = r.ext();
    let expected = IdempotentPair::new(ext.embed(r.pair().left), ext.embed(r.pair().right));
    if atom_char_idempotents(&table)? != expected {
        return Err(soundness("has the wrong atom-characterising idempotents"));
    }
    if r.commutative_mode() && !is_commutative(&table) {
        return Err(soundness("is not commutative"));
    }
    if r.archimedean_mode() && !is_archimedean(&table) {
        return Err(soundness("is not Archimedean"));
    }
    Ok(table)
}

/// Which coextensions to produce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Filter {
    pub commutative: bool,
    pub archimedean: bool,
}

impl Filter {
    pub const ALL: Filter = Filter {
        commutative: false,
        archimedean: false,
    };
    pub const COMMUTATIVE: Filter = Filter {
        commutative: true,
        archimedean: false,
    };
    pub const ARCHIMEDEAN: Filter = Filter {
        commutative: false,
        archimedean: true,
    };

    pub fn accepts(&self, t: &TomonoidTable) -> bool {
        (!self.commutative || is_commutative(t)) && (!self.archimedean || is_archimedean(t))
    }
}

/// A coextension together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coextension {
    pub table: TomonoidTable,
    pub pair: IdempotentPair,
    pub choice: CoextensionChoice,
}

/// Idempotent pairs to try for a filter, in emission order.
pub fn pairs_for(t: &TomonoidTable, filter: Filter) -> Result<Vec<IdempotentPair>> {
    if filter.archimedean {
        if !is_archimedean(t) {
            return Err(TomoError::Precondition(
                "the Archimedean filter needs an Archimedean tomonoid".into(),
            ));
        }
        return Ok(vec![IdempotentPair::identity(t)]);
    }
    if filter.commutative && !is_commutative(t) {
        return Err(TomoError::Precondition(
            "the commutative filter needs a commutative tomonoid".into(),
        ));
    }
    let ids = idempotents(t);
    let mut pairs = Vec::new();
    for &left in &ids {
        for &right in &ids {
            if !filter.commutative || left == right {
                pairs.push(IdempotentPair::new(left, right));
            }
        }
    }
    Ok(pairs)
}

/// All coextensions for one pair; empty when the ramification is obstructed.
pub fn coextensions_for_pair(
    t: &TomonoidTable,
    pair: IdempotentPair,
    commutative_mode: bool,
    archimedean_mode: bool,
    strict: bool,
) -> Result<Vec<Coextension>> {
    let r = ramify(t, pair, commutative_mode, archimedean_mode)?;
    if r.is_obstructed() {
        return Ok(Vec::new());
    }
    let dag = class_poset(&r)?;
    let mut out = Vec::new();
    for (ordinal, choice) in enumerate_choices(&dag)?.enumerate() {
        let check = if strict || cfg!(debug_assertions) || ordinal % 8 == 0 {
            Check::Full
        } else {
            Check::Light
        };
        let table = materialise(t, &r, &dag, &choice, check)?;
        out.push(Coextension { table, pair, choice });
    }
    Ok(out)
}

/// All one-element coextensions passing `filter`, grouped by pair in
/// ascending order and by choice within a pair.
pub fn coextensions(t: &TomonoidTable, filter: Filter) -> Result<Vec<Coextension>> {
    coextensions_with(t, filter, false)
}

pub fn coextensions_with(t: &TomonoidTable, filter: Filter, strict: bool) -> Result<Vec<Coextension>> {
    if t.size() < 2 {
        return Err(TomoError::Trivial);
    }
    let mut out = Vec::new();
    for pair in pairs_for(t, filter)? {
        out.extend(coextensions_for_pair(
            t,
            pair,
            filter.commutative,
            filter.archimedean,
            strict,
        )?);
    }
    Ok(out)
}
