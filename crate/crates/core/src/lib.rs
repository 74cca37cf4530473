//! Finite, negative, totally ordered monoids (f.n. tomonoids).
//!
//! The crate builds every f.n. tomonoid of a given size by iterated
//! one-element Rees coextension. A tomonoid is represented by its level-set
//! partition; a coextension is found by computing the ramification of the
//! partition over the zero doubling extension for a pair of idempotents, and
//! then choosing which ramification classes collapse to the new bottom.
//!
//! ```
//! use tomonoid::{coextensions, Filter, TomonoidTable};
//!
//! let two = TomonoidTable::two_element();
//! let children = coextensions(&two, Filter::ALL).unwrap();
//! assert_eq!(children.len(), 2);
//! ```

pub mod chain;
pub mod coextend;
mod error;
pub mod generator;
pub mod io;
pub mod partition;
pub mod ramification;
pub mod render;
mod union_find;

pub use chain::{
    atom_char_idempotents, atom_quotient, idempotents, is_archimedean, is_commutative, rees_quotient, verify_table,
    Chain, Elem, IdempotentPair, TomonoidTable, VerifyReport, Violation, ViolationKind,
};
pub use coextend::{
    class_poset, coextensions, coextensions_for_pair, coextensions_with, enumerate_choices, materialise, Check,
    ClassDag, Coextension, CoextensionChoice, Filter,
};
pub use error::{Result, TomoError};
pub use generator::{
    brute_force, count, count_cross_checked, generate, generate_into, CountReport, Counts, Flags, GenRecord,
    GenerateOptions, DEFAULT_ORACLE_CAP,
};
pub use io::{format_table, parse_table, parse_table_unverified, ParseError, RecordLine};
pub use partition::{from_partition, to_partition, verify_partition, LevelPartition};
pub use ramification::{compute_support, ramify, Cell, ExtendedChain, Ramification, Rule};
pub use render::{render, render_ramification, Format};
