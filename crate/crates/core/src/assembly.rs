//! Assembled window sets.
//!
//! A window is a `2 x k` matrix of vertex ids. A set of `k + 1` windows is
//! assembled when it is exactly the set of cyclic `k`-column windows of a
//! single `2 x (k + 1)` matrix with distinct entries in each row.
//!
//! For `k = 2` the set `{[12;45], [23;56], [31;64]}` is assembled with
//! witness `[123;456]`, while `{[12;45], [23;56], [34;61]}` is not, although
//! both touch the same vertex pairs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::VertexId;

/// One column: a top and a bottom vertex.
pub type Column = (VertexId, VertexId);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub top: Vec<VertexId>,
    pub bottom: Vec<VertexId>,
}

impl Window {
    pub fn new(top: Vec<VertexId>, bottom: Vec<VertexId>) -> Result<Self> {
        if top.len() != bottom.len() || top.is_empty() {
            return Err(Error::MalformedWindow(format!(
                "rows of length {} and {}",
                top.len(),
                bottom.len()
            )));
        }
        for row in [&top, &bottom] {
            let distinct: BTreeSet<_> = row.iter().collect();
            if distinct.len() != row.len() {
                return Err(Error::MalformedWindow(format!(
                    "repeated entry in row {row:?}"
                )));
            }
        }
        Ok(Self { top, bottom })
    }

    pub fn width(&self) -> usize {
        self.top.len()
    }

    pub fn columns(&self) -> impl Iterator<Item = Column> + '_ {
        self.top.iter().copied().zip(self.bottom.iter().copied())
    }

    fn from_columns(cols: &[Column]) -> Self {
        Self {
            top: cols.iter().map(|c| c.0).collect(),
            bottom: cols.iter().map(|c| c.1).collect(),
        }
    }
}

/// A set of equal-width windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    k: usize,
    elements: BTreeSet<Window>,
}

impl WindowSet {
    pub fn new(k: usize, elements: impl IntoIterator<Item = Window>) -> Result<Self> {
        let elements: BTreeSet<Window> = elements.into_iter().collect();
        if let Some(w) = elements.iter().find(|w| w.width() != k) {
            return Err(Error::MalformedWindow(format!(
                "window of width {} in a set of width {k}",
                w.width()
            )));
        }
        Ok(Self { k, elements })
    }

    /// Windows given as `(top, bottom)` row pairs.
    pub fn from_rows(k: usize, rows: &[(&[VertexId], &[VertexId])]) -> Result<Self> {
        let windows = rows
            .iter()
            .map(|(t, b)| Window::new(t.to_vec(), b.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, windows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &BTreeSet<Window> {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// All cyclic `k`-column windows of a `2 x (k + 1)` matrix.
pub fn cyclic_windows(matrix: &Window) -> Result<BTreeSet<Window>> {
    let m = matrix.width();
    if m < 2 {
        return Err(Error::MalformedWindow(
            "matrix needs at least two columns".into(),
        ));
    }
    let cols: Vec<Column> = matrix.columns().collect();
    Ok((0..m)
        .map(|start| {
            let w: Vec<Column> = (0..m - 1).map(|i| cols[(start + i) % m]).collect();
            Window::from_columns(&w)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub assembled: bool,
    /// A `2 x (k + 1)` matrix whose cyclic windows are exactly the set.
    pub witness: Option<Window>,
    /// Why a set was rejected without search.
    pub diagnostic: Option<String>,
}

pub fn is_assembled(ws: &WindowSet) -> Assembly {
    let k = ws.k();
    if ws.len() != k + 1 {
        return Assembly {
            assembled: false,
            witness: None,
            diagnostic: Some(format!(
                "expected {} windows of width {k}, found {}",
                k + 1,
                ws.len()
            )),
        };
    }
    let anchor = ws.elements().iter().next().expect("k + 1 >= 1 windows");
    let mut last_columns: BTreeSet<Column> = BTreeSet::new();
    for w in ws.elements() {
        last_columns.extend(w.columns());
    }
    for col in last_columns {
        let mut cols: Vec<Column> = anchor.columns().collect();
        cols.push(col);
        let candidate = Window::from_columns(&cols);
        let Ok(candidate) = Window::new(candidate.top, candidate.bottom) else {
            continue;
        };
        if cyclic_windows(&candidate).ok().as_ref() == Some(ws.elements()) {
            return Assembly {
                assembled: true,
                witness: Some(candidate),
                diagnostic: None,
            };
        }
    }
    Assembly {
        assembled: false,
        witness: None,
        diagnostic: None,
    }
}

/// Every column occurring in some window, as ordered `(top, bottom)` pairs.
pub fn project_to_vertices(ws: &WindowSet) -> BTreeSet<Column> {
    ws.elements().iter().flat_map(|w| w.columns()).collect()
}

/// The projection with each column read as an unordered vertex pair,
/// smaller id first.
pub fn unordered_projection(ws: &WindowSet) -> BTreeSet<Column> {
    project_to_vertices(ws)
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect()
}
