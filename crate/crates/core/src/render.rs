//! Partition grids as ASCII or SVG.
//!
//! Rows run bottom to top and columns left to right in chain order, so the
//! cell `(1,1)` sits in the upper right corner. Each cell shows its product;
//! equal symbols mark one level class.

use std::fmt::Write as _;

use crate::chain::{Elem, TomonoidTable};
use crate::ramification::Ramification;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Self::Ascii),
            "svg" => Ok(Self::Svg),
            other => Err(format!("unknown format {other:?}, expected ascii or svg")),
        }
    }
}

/// Symbol of element `x` in a chain of size `n`: `0`, `a`..`z`, `1` up to
/// 28 elements, decimal indices beyond.
pub fn symbol(x: Elem, n: usize) -> String {
    if x + 1 == n {
        "1".into()
    } else if x == 0 {
        "0".into()
    } else if n <= 28 {
        char::from(b'a' + (x - 1) as u8).to_string()
    } else {
        x.to_string()
    }
}

pub fn render(t: &TomonoidTable, format: Format) -> String {
    let n = t.size();
    let grid = Grid {
        n,
        label: |a, b| symbol(t.mul(a, b), n),
        group: |a, b| t.mul(a, b),
        axis: |x| symbol(x, n),
    };
    match format {
        Format::Ascii => grid.ascii(),
        Format::Svg => grid.svg(),
    }
}

/// Draws a ramification over the extended square.
///
/// Support cells show their product. In the cosupport the zero class shows
/// `0`, the atom class shows the atom symbol and the remaining classes get
/// upper-case letters; a coextension turns each letter into `0` or the atom.
pub fn render_ramification(r: &Ramification, format: Format) -> String {
    let m = r.size();
    let others: Vec<usize> = r
        .cosupport_classes()
        .into_keys()
        .filter(|&id| id != r.zero_class() && id != r.atom_class())
        .collect();
    let letter = |id: usize| -> String {
        let k = others.iter().position(|&o| o == id).unwrap_or(0);
        if k < 26 {
            char::from(b'A' + k as u8).to_string()
        } else {
            format!("C{k}")
        }
    };
    let grid = Grid {
        n: m,
        label: |a, b| {
            let id = r.class_of((a, b));
            if r.in_support((a, b)) {
                symbol(id, m)
            } else if id == r.zero_class() {
                "0".into()
            } else if id == r.atom_class() {
                symbol(1, m)
            } else {
                letter(id)
            }
        },
        group: |a, b| r.class_of((a, b)),
        axis: |x| symbol(x, m),
    };
    match format {
        Format::Ascii => grid.ascii(),
        Format::Svg => grid.svg(),
    }
}

struct Grid<L, G, A> {
    n: usize,
    label: L,
    group: G,
    axis: A,
}

const CELL: usize = 28;
const MARGIN: usize = 24;

impl<L, G, A> Grid<L, G, A>
where
    L: Fn(usize, usize) -> String,
    G: Fn(usize, usize) -> usize,
    A: Fn(usize) -> String,
{
    fn ascii(&self) -> String {
        let n = self.n;
        let width = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (self.label)(a, b).chars().count())
            .chain((0..n).map(|x| (self.axis)(x).chars().count()))
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for a in (0..n).rev() {
            let cells: Vec<String> = (0..n).map(|b| format!("{:>width$}", (self.label)(a, b))).collect();
            let _ = writeln!(out, "{:>width$} | {}", (self.axis)(a), cells.join(" "));
        }
        let rule_len = n * (width + 1) + 1;
        let _ = writeln!(out, "{:>width$} +{}", "", "-".repeat(rule_len));
        let axis: Vec<String> = (0..n).map(|b| format!("{:>width$}", (self.axis)(b))).collect();
        let _ = writeln!(out, "{:>width$}   {}", "", axis.join(" "));
        out
    }

    fn svg(&self) -> String {
        let n = self.n;
        let side = MARGIN + n * CELL + 1;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}" font-family="monospace" font-size="13">"#
        );
        // Row a is drawn at height n-1-a so that the identity row is on top.
        let x0 = |b: usize| MARGIN + b * CELL;
        let y0 = |a: usize| (n - 1 - a) * CELL;
        for a in 0..n {
            for b in 0..n {
                let g = (self.group)(a, b);
                let hue = (g * 137) % 360;
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="hsl({hue},55%,85%)" stroke="#bbb" stroke-width="0.5"/>"##,
                    x0(b),
                    y0(a)
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                    x0(b) + CELL / 2,
                    y0(a) + CELL / 2,
                    escape(&(self.label)(a, b))
                );
            }
        }
        // Class boundaries.
        for a in 0..n {
            for b in 0..n {
                let g = (self.group)(a, b);
                if b + 1 < n && (self.group)(a, b + 1) != g {
                    let x = x0(b + 1);
                    let _ = writeln!(
                        out,
                        r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-width="2"/>"#,
                        y0(a),
                        y0(a) + CELL
                    );
                }
                if a + 1 < n && (self.group)(a + 1, b) != g {
                    let y = y0(a);
                    let _ = writeln!(
                        out,
                        r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="2"/>"#,
                        x0(b),
                        x0(b) + CELL
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="0" width="{}" height="{}" fill="none" stroke="black" stroke-width="2"/>"#,
            n * CELL,
            n * CELL
        );
        for x in 0..n {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                MARGIN / 2,
                y0(x) + CELL / 2,
                escape(&(self.axis)(x))
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
