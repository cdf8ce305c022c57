//! Text formats: graph6, DIMACS edge lists, native `cdg` color matrices,
//! and `ws` window sets.
//!
//! `cdg` is the only format that can express an arbitrary coloring of
//! `V x V`:
//!
//! ```text
//! cdg 3 2
//! 0 1 1
//! 1 0 1
//! 1 1 0
//! ```
//!
//! graph6 and DIMACS describe simple undirected graphs and map to the
//! three-color palette: 0 on the diagonal, 1 for edges, 2 for non-edges.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::assembly::{Window, WindowSet};
use crate::error::{Error, Result};
use crate::model::{ColorId, EdgeColoredGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Graph6,
    Dimacs,
    Cdg,
    Ws,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "graph6" => Ok(Format::Graph6),
            "dimacs" => Ok(Format::Dimacs),
            "cdg" => Ok(Format::Cdg),
            "ws" => Ok(Format::Ws),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Raw input with its format, sniffed or forced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub format: Format,
    pub payload: String,
}

impl InputDocument {
    pub fn new(payload: impl Into<String>, forced: Option<Format>) -> Self {
        let payload = payload.into();
        let format = forced.unwrap_or_else(|| sniff(&payload));
        Self { format, payload }
    }
}

/// Guesses the format from the first non-blank line.
pub fn sniff(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let word = first.split_whitespace().next().unwrap_or("");
    match word {
        "cdg" => Format::Cdg,
        "ws" => Format::Ws,
        "p" | "c" => Format::Dimacs,
        _ => Format::Graph6,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Graph(EdgeColoredGraph),
    Windows(WindowSet),
}

pub fn parse_document(doc: &InputDocument) -> Result<Document> {
    match doc.format {
        Format::Ws => parse_window_set(&doc.payload).map(Document::Windows),
        _ => parse_graph(doc).map(Document::Graph),
    }
}

pub fn parse_graph(doc: &InputDocument) -> Result<EdgeColoredGraph> {
    match doc.format {
        Format::Graph6 => parse_graph6(&doc.payload),
        Format::Dimacs => parse_dimacs(&doc.payload),
        Format::Cdg => parse_cdg(&doc.payload),
        Format::Ws => Err(Error::parse(1, 1, "window set where a graph was expected")),
    }
}

/// Whitespace-separated tokens with 1-based line and column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    line.split_whitespace().map(move |tok| {
        let at = line[offset..].find(tok).expect("token from this line") + offset;
        offset = at + tok.len();
        (at + 1, tok)
    })
}

fn number<T: FromStr>(lineno: usize, col: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(lineno, col, format!("expected a number, found `{tok}`")))
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

pub fn parse_cdg(text: &str) -> Result<EdgeColoredGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let head: Vec<(usize, &str)> = tokens(header).collect();
    if head.len() != 3 || head[0].1 != "cdg" {
        return Err(Error::parse(hl, 1, "expected header `cdg n c`"));
    }
    let n: usize = number(hl, head[1].0, head[1].1)?;
    let c: u32 = number(hl, head[2].0, head[2].1)?;
    let mut colors = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (ln, line) in lines {
        if rows == n {
            return Err(Error::parse(
                ln,
                1,
                format!("more than the declared {n} rows"),
            ));
        }
        let before = colors.len();
        for (col, tok) in tokens(line) {
            let value: ColorId = number(ln, col, tok)?;
            if value >= c {
                return Err(Error::parse(
                    ln,
                    col,
                    format!("color {value} outside the declared range [0, {c})"),
                ));
            }
            colors.push(value);
        }
        if colors.len() - before != n {
            return Err(Error::parse(
                ln,
                1,
                format!("row has {} entries, expected {n}", colors.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("found {rows} rows, declared {n}"),
        ));
    }
    EdgeColoredGraph::new(n, colors, c)
}

/// Serializes as `cdg`, one row per line, single spaces.
pub fn write_cdg(g: &EdgeColoredGraph) -> String {
    let mut out = format!("cdg {} {}\n", g.n(), g.color_count());
    for u in 0..g.n() {
        let row: Vec<String> = g.row(u).iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<EdgeColoredGraph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut edge_lines = 0;
    for (ln, line) in content_lines(text) {
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        match toks[0].1 {
            "c" => continue,
            "p" => {
                if declared.is_some() {
                    return Err(Error::parse(ln, 1, "second problem line"));
                }
                if toks.len() != 4 || !matches!(toks[1].1, "edge" | "col") {
                    return Err(Error::parse(ln, 1, "expected `p edge n m`"));
                }
                let n = number(ln, toks[2].0, toks[2].1)?;
                let m = number(ln, toks[3].0, toks[3].1)?;
                declared = Some((n, m));
            }
            "e" => {
                let (n, _) = declared.ok_or_else(|| Error::parse(ln, 1, "edge before `p` line"))?;
                if toks.len() != 3 {
                    return Err(Error::parse(ln, 1, "expected `e u v`"));
                }
                let mut ends = [0usize; 2];
                for (slot, &(col, tok)) in ends.iter_mut().zip(&toks[1..]) {
                    let v: usize = number(ln, col, tok)?;
                    if v == 0 || v > n {
                        return Err(Error::parse(ln, col, format!("vertex {v} outside 1..={n}")));
                    }
                    *slot = v - 1;
                }
                if ends[0] == ends[1] {
                    return Err(Error::parse(ln, toks[1].0, "self-loop"));
                }
                edges.push((ends[0], ends[1]));
                edge_lines += 1;
            }
            other => {
                return Err(Error::parse(
                    ln,
                    toks[0].0,
                    format!("unknown line type `{other}`"),
                ))
            }
        }
    }
    let (n, m) = declared.ok_or_else(|| Error::parse(1, 1, "missing `p edge n m` line"))?;
    if edge_lines != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("declared {m} edges, found {edge_lines}"),
        ));
    }
    EdgeColoredGraph::from_edges(n, &edges)
}

pub fn parse_graph6(text: &str) -> Result<EdgeColoredGraph> {
    let (ln, line) = content_lines(text)
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let mut body = line.trim();
    let mut col0 = line.len() - line.trim_start().len() + 1;
    if let Some(rest) = body.strip_prefix(">>graph6<<") {
        body = rest;
        col0 += ">>graph6<<".len();
    }
    let bytes = body.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(
                ln,
                col0 + i,
                format!("byte {b} outside graph6 range"),
            ));
        }
    }
    let digit = |i: usize| -> Result<usize> {
        bytes
            .get(i)
            .map(|&b| (b - 63) as usize)
            .ok_or_else(|| Error::parse(ln, col0 + i, "truncated size field"))
    };
    let (n, start) = if bytes.first() != Some(&126) {
        (digit(0)?, 1)
    } else if bytes.get(1) != Some(&126) {
        (
            (1..4).try_fold(0, |acc, i| Ok::<_, Error>(acc << 6 | digit(i)?))?,
            4,
        )
    } else {
        (
            (2..8).try_fold(0, |acc, i| Ok::<_, Error>(acc << 6 | digit(i)?))?,
            8,
        )
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let data = &bytes[start.min(bytes.len())..];
    if data.len() != need {
        return Err(Error::parse(
            ln,
            col0 + start,
            format!(
                "expected {need} data bytes for {n} vertices, found {}",
                data.len()
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    EdgeColoredGraph::from_edges(n, &edges)
}

/// graph6 encoding of a simple graph (color 1 entries are edges).
pub fn write_graph6(g: &EdgeColoredGraph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n < 63 {
        out.push((n as u8 + 63) as char);
    } else if n < 258_048 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | (g.color(u, v) == 1) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push((acc + 63) as char);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push(((acc << (6 - k % 6)) + 63) as char);
    }
    out
}

/// `ws k m`, then `m` lines of `2k` integers: top row, then bottom row.
pub fn parse_window_set(text: &str) -> Result<WindowSet> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let head: Vec<(usize, &str)> = tokens(header).collect();
    if head.len() != 3 || head[0].1 != "ws" {
        return Err(Error::parse(hl, 1, "expected header `ws k m`"));
    }
    let k: usize = number(hl, head[1].0, head[1].1)?;
    let m: usize = number(hl, head[2].0, head[2].1)?;
    if k == 0 {
        return Err(Error::parse(hl, head[1].0, "window width must be positive"));
    }
    let mut windows = Vec::with_capacity(m);
    for (ln, line) in lines {
        let vals = tokens(line)
            .map(|(col, tok)| number::<VertexId>(ln, col, tok))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 2 * k {
            return Err(Error::parse(
                ln,
                1,
                format!("expected {} entries, found {}", 2 * k, vals.len()),
            ));
        }
        let w = Window::new(vals[..k].to_vec(), vals[k..].to_vec())
            .map_err(|e| Error::parse(ln, 1, e.to_string()))?;
        windows.push(w);
    }
    if windows.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("declared {m} windows, found {}", windows.len()),
        ));
    }
    WindowSet::new(k, windows)
}

/// Serializes a window set in the `ws` format.
pub fn write_window_set(ws: &WindowSet) -> String {
    let mut out = format!("ws {} {}\n", ws.k(), ws.len());
    for w in ws.elements() {
        let vals: Vec<String> = w
            .top
            .iter()
            .chain(&w.bottom)
            .map(|v| v.to_string())
            .collect();
        let _ = writeln!(out, "{}", vals.join(" "));
    }
    out
}
