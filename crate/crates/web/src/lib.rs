//! Browser front end. Every entry point takes and returns strings so that the
//! page needs no generated bindings beyond the exported functions; the plain
//! Rust versions are kept separate from the wasm exports for native tests.

use serde::Serialize;
use tomonoid::{
    coextend::pairs_for, coextensions_for_pair, format_table, generate_into, parse_table, ramify, render,
    render_ramification, Filter, Format, GenerateOptions, IdempotentPair, RecordLine, TomoError,
};
use wasm_bindgen::prelude::*;

/// Generation in the browser stops here; size 7 already has 2641 tables.
pub const MAX_BROWSER_SIZE: usize = 6;

#[derive(Serialize)]
struct Tile {
    id: usize,
    parent: Option<usize>,
    text: String,
    svg: String,
    commutative: bool,
    archimedean: bool,
}

#[derive(Serialize)]
struct RamifyView {
    obstructed: bool,
    listing: String,
    svg: String,
}

#[derive(Serialize)]
struct Child {
    pair: Option<[usize; 2]>,
    text: String,
    svg: String,
    record: String,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// All tomonoids of exactly `size` elements as drawable tiles.
pub fn generate_tiles(size: usize, commutative: bool, archimedean: bool) -> Result<String, String> {
    if size == 0 || size > MAX_BROWSER_SIZE {
        return Err(format!("size must be between 1 and {MAX_BROWSER_SIZE}"));
    }
    let filter = Filter {
        commutative,
        archimedean,
    };
    let mut tiles = Vec::new();
    generate_into(&GenerateOptions::new(size, filter), |rec| {
        if rec.table.size() == size {
            tiles.push(Tile {
                id: rec.id,
                parent: rec.parent,
                text: format_table(&rec.table),
                svg: render(&rec.table, Format::Svg),
                commutative: rec.flags.commutative,
                archimedean: rec.flags.archimedean,
            });
        }
        Ok::<_, TomoError>(())
    })
    .map_err(|e| e.to_string())?;
    to_json(&tiles)
}

/// Ramification grid and class listing of a table for one idempotent pair.
pub fn ramify_view(doc: &str, el: usize, er: usize, commutative: bool, archimedean: bool) -> Result<String, String> {
    let t = parse_table(doc).map_err(|e| e.to_string())?;
    let r = ramify(&t, IdempotentPair::new(el, er), commutative, archimedean).map_err(|e| e.to_string())?;
    to_json(&RamifyView {
        obstructed: r.is_obstructed(),
        listing: r.to_string(),
        svg: render_ramification(&r, Format::Svg),
    })
}

/// One-element coextensions of a table, for one pair or (negative `el`) all.
pub fn extend_view(doc: &str, el: i32, er: i32) -> Result<String, String> {
    let t = parse_table(doc).map_err(|e| e.to_string())?;
    let pairs = if el < 0 || er < 0 {
        pairs_for(&t, Filter::ALL).map_err(|e| e.to_string())?
    } else {
        vec![IdempotentPair::new(el as usize, er as usize)]
    };
    let mut children = Vec::new();
    for pair in pairs {
        for c in coextensions_for_pair(&t, pair, false, false, true).map_err(|e| e.to_string())? {
            children.push(Child {
                pair: Some([c.pair.left, c.pair.right]),
                text: format_table(&c.table),
                svg: render(&c.table, Format::Svg),
                record: RecordLine::new(&c.table, None, Some(c.pair), Some(c.choice)).to_json(),
            });
        }
    }
    to_json(&children)
}

#[wasm_bindgen]
pub fn generate(size: usize, commutative: bool, archimedean: bool) -> Result<String, JsValue> {
    generate_tiles(size, commutative, archimedean).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = ramify)]
pub fn ramify_js(doc: &str, el: usize, er: usize, commutative: bool, archimedean: bool) -> Result<String, JsValue> {
    ramify_view(doc, el, er, commutative, archimedean).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn extend(doc: &str, el: i32, er: i32) -> Result<String, JsValue> {
    extend_view(doc, el, er).map_err(|e| JsValue::from_str(&e))
}
