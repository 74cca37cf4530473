//! Level-by-level generation of all f.n. tomonoids, and a brute-force oracle.
//!
//! Every non-trivial f.n. tomonoid has exactly one parent, its Rees quotient
//! by the atom, and is obtained from that parent by exactly one
//! (pair, choice) combination. Generation therefore needs no deduplication.

use std::collections::BTreeMap;
use std::fmt;

use crate::chain::{is_archimedean, is_commutative, IdempotentPair, TomonoidTable};
use crate::coextend::{coextensions_with, CoextensionChoice, Filter};
use crate::error::{Result, TomoError};

pub const DEFAULT_ORACLE_CAP: usize = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub commutative: bool,
    pub archimedean: bool,
}

impl Flags {
    pub fn of(t: &TomonoidTable) -> Self {
        Self {
            commutative: is_commutative(t),
            archimedean: is_archimedean(t),
        }
    }
}

/// One generated tomonoid with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenRecord {
    /// Position in the emitted stream.
    pub id: usize,
    pub table: TomonoidTable,
    pub parent: Option<usize>,
    pub pair: Option<IdempotentPair>,
    pub choice: Option<CoextensionChoice>,
    pub flags: Flags,
}

#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub max_size: usize,
    pub filter: Filter,
    /// Worker threads; `None` uses the default pool.
    pub jobs: Option<usize>,
    /// Root of the generation tree; the trivial tomonoid when absent.
    pub seed: Option<TomonoidTable>,
    /// Fully re-verify every materialised table.
    pub strict: bool,
}

impl GenerateOptions {
    pub fn new(max_size: usize, filter: Filter) -> Self {
        Self {
            max_size,
            filter,
            jobs: None,
            seed: None,
            strict: false,
        }
    }
}

/// Runs the generation, handing records to `sink` level by level in a fixed
/// order: by parent, then pair, then choice.
pub fn generate_into<E>(
    opts: &GenerateOptions,
    mut sink: impl FnMut(GenRecord) -> std::result::Result<(), E>,
) -> std::result::Result<(), E>
where
    E: From<TomoError>,
{
    if opts.max_size == 0 {
        return Err(TomoError::Precondition("max size must be at least 1".into()).into());
    }
    let seed = opts.seed.clone().unwrap_or_else(TomonoidTable::trivial);
    if !opts.filter.accepts(&seed) {
        return Err(TomoError::Precondition("seed table does not pass the filter".into()).into());
    }
    if seed.size() > opts.max_size {
        return Ok(());
    }

    let mut next_id = 0;
    let mut emit = |table: TomonoidTable,
                    parent: Option<usize>,
                    pair: Option<IdempotentPair>,
                    choice: Option<CoextensionChoice>|
     -> std::result::Result<(usize, TomonoidTable), E> {
        let id = next_id;
        next_id += 1;
        let flags = Flags::of(&table);
        sink(GenRecord {
            id,
            table: table.clone(),
            parent,
            pair,
            choice,
            flags,
        })?;
        Ok((id, table))
    };

    let mut level = vec![emit(seed, None, None, None)?];
    if level[0].1.size() == 1 && opts.max_size >= 2 {
        // The zero doubling of the trivial tomonoid degenerates, since its
        // bottom is its identity; the two-element tomonoid is the only child.
        let parent = level[0].0;
        level = vec![emit(TomonoidTable::two_element(), Some(parent), None, None)?];
    }

    while level[0].1.size() < opts.max_size {
        let children = expand(&level, opts)?;
        let mut next = Vec::new();
        for (parent, coexts) in level.iter().map(|(id, _)| *id).zip(children) {
            for c in coexts {
                next.push(emit(c.table, Some(parent), Some(c.pair), Some(c.choice))?);
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(())
}

type Children = Vec<Vec<crate::coextend::Coextension>>;

#[cfg(feature = "parallel")]
fn expand(level: &[(usize, TomonoidTable)], opts: &GenerateOptions) -> Result<Children> {
    use rayon::prelude::*;
    let work = || {
        level
            .par_iter()
            .map(|(_, t)| coextensions_with(t, opts.filter, opts.strict))
            .collect::<Result<Children>>()
    };
    match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| TomoError::Precondition(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn expand(level: &[(usize, TomonoidTable)], opts: &GenerateOptions) -> Result<Children> {
    level
        .iter()
        .map(|(_, t)| coextensions_with(t, opts.filter, opts.strict))
        .collect()
}

/// Collects the whole generation up to `max_size`.
pub fn generate(max_size: usize, filter: Filter) -> Result<Vec<GenRecord>> {
    let mut out = Vec::new();
    generate_into(&GenerateOptions::new(max_size, filter), |r| {
        out.push(r);
        Ok::<_, TomoError>(())
    })?;
    Ok(out)
}

/// Enumerates every f.n. tomonoid of the given size by exhaustive search, in
/// lexicographic order of the row-major table.
///
/// Candidates have the identity row and column fixed and entries bounded by
/// `min(a, b)`; monotonicity prunes the search and associativity is checked
/// on complete tables.
pub fn brute_force(size: usize, filter: Filter, cap: usize) -> Result<Vec<TomonoidTable>> {
    if size == 0 {
        return Err(TomoError::Precondition("size must be at least 1".into()));
    }
    if size > cap {
        return Err(TomoError::OracleCap { size, cap });
    }
    if size == 1 {
        return Ok(vec![TomonoidTable::trivial()]
            .into_iter()
            .filter(|t| filter.accepts(t))
            .collect());
    }
    let n = size;
    let mut base = vec![0usize; n * n];
    for x in 0..n {
        base[(n - 1) * n + x] = x;
        base[x * n + (n - 1)] = x;
    }
    // Row 0 is forced to zeros. Split the search on the contents of row 1.
    let prefixes = row_one_prefixes(n, &base);
    let search = |prefix: &Vec<usize>| {
        let mut found = Vec::new();
        let mut cells = prefix.clone();
        fill(n, &mut cells, 2 * n, &mut found);
        found
    };

    #[cfg(feature = "parallel")]
    let found: Vec<Vec<Vec<usize>>> = {
        use rayon::prelude::*;
        prefixes.par_iter().map(search).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Vec<Vec<usize>>> = prefixes.iter().map(search).collect();

    Ok(found
        .into_iter()
        .flatten()
        .map(|cells| TomonoidTable::from_fn(n, |a, b| cells[a * n + b]))
        .filter(|t| filter.accepts(t))
        .collect())
}

fn row_one_prefixes(n: usize, base: &[usize]) -> Vec<Vec<usize>> {
    if n == 2 {
        return vec![base.to_vec()];
    }
    // Row 1 over columns 1..n-1 is a non-decreasing 0/1 sequence.
    let width = n - 2;
    (0..=width)
        .rev()
        .map(|zeros| {
            let mut cells = base.to_vec();
            for j in 0..width {
                cells[n + 1 + j] = usize::from(j >= zeros);
            }
            cells
        })
        .collect()
}

fn fill(n: usize, cells: &mut Vec<usize>, pos: usize, found: &mut Vec<Vec<usize>>) {
    if pos >= (n - 1) * n {
        if associative(n, cells) {
            found.push(cells.clone());
        }
        return;
    }
    let (a, b) = (pos / n, pos % n);
    if b == 0 || b == n - 1 {
        fill(n, cells, pos + 1, found);
        return;
    }
    let lo = cells[(a - 1) * n + b].max(cells[a * n + b - 1]);
    let hi = a.min(b);
    for v in lo..=hi {
        cells[pos] = v;
        fill(n, cells, pos + 1, found);
    }
}

fn associative(n: usize, cells: &[usize]) -> bool {
    let mul = |a: usize, b: usize| cells[a * n + b];
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub total: usize,
    pub commutative: usize,
    pub archimedean: usize,
    pub both: usize,
}

impl Counts {
    pub fn add(&mut self, flags: Flags) {
        self.total += 1;
        self.commutative += usize::from(flags.commutative);
        self.archimedean += usize::from(flags.archimedean);
        self.both += usize::from(flags.commutative && flags.archimedean);
    }
}

/// Per-size counts of tomonoids, split by commutativity and Archimedeanicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountReport {
    pub by_size: BTreeMap<usize, Counts>,
}

impl CountReport {
    pub fn add(&mut self, t: &TomonoidTable) {
        self.by_size.entry(t.size()).or_default().add(Flags::of(t));
    }

    /// Reads the text produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut report = Self::default();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') || line.starts_with("size") {
                continue;
            }
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| TomoError::Structure(format!("bad count line {line:?}: {e}")))?;
            let [size, total, commutative, archimedean, both] = fields[..] else {
                return Err(TomoError::Structure(format!("count line {line:?} needs five fields")));
            };
            report.by_size.insert(
                size,
                Counts {
                    total,
                    commutative,
                    archimedean,
                    both,
                },
            );
        }
        Ok(report)
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>10} {:>12} {:>12} {:>10}",
            "size", "total", "commutative", "archimedean", "both"
        )?;
        for (size, c) in &self.by_size {
            writeln!(
                f,
                "{:>4} {:>10} {:>12} {:>12} {:>10}",
                size, c.total, c.commutative, c.archimedean, c.both
            )?;
        }
        Ok(())
    }
}

/// Counts all generated tomonoids up to `max_size`.
pub fn count(max_size: usize) -> Result<CountReport> {
    let mut report = CountReport::default();
    generate_into(&GenerateOptions::new(max_size, Filter::ALL), |r| {
        report.add(&r.table);
        Ok::<_, TomoError>(())
    })?;
    Ok(report)
}

/// Like [`count`], then recomputes every size up to `cap` with the oracle and
/// fails on any disagreement.
pub fn count_cross_checked(max_size: usize, cap: usize) -> Result<CountReport> {
    let report = count(max_size)?;
    for size in 1..=max_size.min(cap) {
        let mut oracle = CountReport::default();
        for t in brute_force(size, Filter::ALL, cap)? {
            oracle.add(&t);
        }
        let ours = report.by_size.get(&size).copied().unwrap_or_default();
        let theirs = oracle.by_size.get(&size).copied().unwrap_or_default();
        if ours != theirs {
            return Err(TomoError::Soundness(format!(
                "size {size}: generator counts {ours:?} but oracle counts {theirs:?}"
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_generations() {
        let sizes = |max| {
            generate(max, Filter::ALL)
                .unwrap()
                .iter()
                .map(|r| r.table.size())
                .collect::<Vec<_>>()
        };
        assert_eq!(sizes(1), vec![1]);
        assert_eq!(sizes(2), vec![1, 2]);
        assert_eq!(sizes(3), vec![1, 2, 3, 3]);
    }

    #[test]
    fn seed_records_have_no_pair() {
        let recs = generate(3, Filter::ALL).unwrap();
        assert_eq!(recs[0].parent, None);
        assert_eq!(recs[1].parent, Some(0));
        assert_eq!(recs[1].pair, None);
        assert_eq!(recs[2].parent, Some(1));
        assert!(recs[2].pair.is_some());
    }

    #[test]
    fn oracle_small_sizes() {
        assert_eq!(brute_force(1, Filter::ALL, 6).unwrap().len(), 1);
        assert_eq!(brute_force(2, Filter::ALL, 6).unwrap().len(), 1);
        let three = brute_force(3, Filter::ALL, 6).unwrap();
        assert_eq!(three.len(), 2);
        assert!(three.iter().all(is_commutative));
        assert_eq!(three.iter().filter(|t| is_archimedean(t)).count(), 1);
        assert!(three.windows(2).all(|w| w[0].cells() < w[1].cells()));
    }

    #[test]
    fn oracle_cap_is_enforced() {
        assert!(matches!(
            brute_force(7, Filter::ALL, 6),
            Err(TomoError::OracleCap { size: 7, cap: 6 })
        ));
    }

    #[test]
    fn count_rows() {
        let report = count(3).unwrap();
        let one = Counts {
            total: 1,
            commutative: 1,
            archimedean: 1,
            both: 1,
        };
        assert_eq!(report.by_size[&1], one);
        assert_eq!(report.by_size[&2], one);
        assert_eq!(
            report.by_size[&3],
            Counts {
                total: 2,
                commutative: 2,
                archimedean: 1,
                both: 1
            }
        );
        assert_eq!(CountReport::parse(&report.to_string()).unwrap(), report);
    }

    #[test]
    fn filtered_seed_must_pass_filter() {
        let idem = TomonoidTable::from_rows(vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]).unwrap();
        let mut opts = GenerateOptions::new(4, Filter::ARCHIMEDEAN);
        opts.seed = Some(idem);
        let res = generate_into(&opts, |_| Ok::<_, TomoError>(()));
        assert!(matches!(res, Err(TomoError::Precondition(_))));
    }
}
