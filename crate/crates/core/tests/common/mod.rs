#![allow(dead_code)]

use std::sync::OnceLock;

use tomonoid::{generate, Filter, GenRecord, TomonoidTable};

pub const POOL_MAX: usize = 6;

/// Every tomonoid up to `POOL_MAX` elements, in generation order.
pub fn pool() -> &'static [GenRecord] {
    static POOL: OnceLock<Vec<GenRecord>> = OnceLock::new();
    POOL.get_or_init(|| generate(POOL_MAX, Filter::ALL).expect("generation succeeds"))
}

pub fn tables_up_to(max: usize) -> impl Iterator<Item = &'static TomonoidTable> {
    pool().iter().map(|r| &r.table).filter(move |t| t.size() <= max)
}

pub fn tables_of(size: usize) -> impl Iterator<Item = &'static TomonoidTable> {
    pool().iter().map(|r| &r.table).filter(move |t| t.size() == size)
}

pub fn rows(rows: &[&[usize]]) -> TomonoidTable {
    TomonoidTable::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}
