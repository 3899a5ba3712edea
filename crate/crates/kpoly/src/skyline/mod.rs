//! Set-valued skyline fillings.
//!
//! A filling assigns to each box of a left-justified diagram a nonempty set of
//! values; the largest value in a box is its anchor, the rest are free. Three
//! diagram variants share the conditions: `Atom` and `Quasi` use the base
//! composition itself as row lengths (row r gets a_r boxes, no basement),
//! `Key` reverses the base and prepends a basement column holding n-r+1 in
//! row r. Validity means: no value repeats in a column; everything in a box
//! is at least everything in the box to its right (with the basement acting
//! as a singleton box at column 0); no anchor triple is a coinversion; every
//! free value sits in the box the placement rule forces on it; and the first
//! column of anchors obeys the variant rule (equal to the row index for
//! `Atom`, at most the row index and strictly increasing up the rows for
//! `Quasi`).

pub mod enumerate;
pub mod highest;

pub use enumerate::{count_fillings, enumerate_fillings, filling_poly, for_each_filling};
pub use highest::{
    atom_to_kaon_expansion, destandardize, destandardize_with, fiber_reconstruct,
    highest_fillings, is_highest, quasilascoux_to_glide_expansion, HighestMode,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::composition::WeakComposition;
use crate::error::{Error, Result};

/// Which diagram and first-column rule a filling follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkylineVariant {
    /// Row lengths from the base, no basement, first-column anchors pinned to row indices.
    Atom,
    /// Row lengths from the base, no basement, first-column anchors bounded and increasing.
    Quasi,
    /// Row lengths from the reversed base, with basement n-r+1 in row r.
    Key,
}

impl SkylineVariant {
    /// True if the variant carries a basement column.
    pub fn has_basement(self) -> bool {
        matches!(self, SkylineVariant::Key)
    }
}

/// Row lengths of the diagram for base `a` under `variant`.
pub fn shape_for(a: &WeakComposition, variant: SkylineVariant) -> Vec<usize> {
    let mut shape: Vec<usize> = a.0.iter().map(|&v| v as usize).collect();
    if variant == SkylineVariant::Key {
        shape.reverse();
    }
    shape
}

/// Basement values for `n` rows under `variant` (row r holds n - r + 1).
pub fn basement_for(n: usize, variant: SkylineVariant) -> Option<Vec<u32>> {
    variant.has_basement().then(|| (0..n).map(|r| (n - r) as u32).collect())
}

/// A set-valued filling; box sets are kept sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetFilling {
    /// rows[r][c] is the set in row r+1, column c+1, sorted decreasing.
    pub rows: Vec<Vec<Vec<u32>>>,
    /// Basement values by row, present only for basement variants.
    pub basement: Option<Vec<u32>>,
}

impl SetFilling {
    /// Number of rows (the value range is 1..=n).
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of boxes, basement excluded.
    pub fn box_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Number of entries over all boxes, basement excluded.
    pub fn num_entries(&self) -> usize {
        self.rows.iter().flatten().map(|b| b.len()).sum()
    }

    /// Number of free (non-anchor) entries.
    pub fn excess(&self) -> u32 {
        (self.num_entries() - self.box_count()) as u32
    }

    /// The anchor of box (r, c), 0-based.
    pub fn anchor(&self, r: usize, c: usize) -> u32 {
        self.rows[r][c][0]
    }

    /// Row lengths of the underlying diagram.
    pub fn lengths(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.len()).collect()
    }

    /// The base composition this shape came from under `variant`.
    pub fn base(&self, variant: SkylineVariant) -> WeakComposition {
        let mut v: Vec<u32> = self.rows.iter().map(|r| r.len() as u32).collect();
        if variant == SkylineVariant::Key {
            v.reverse();
        }
        WeakComposition(v)
    }

    /// How many times each of 1..=n occurs, basement excluded.
    pub fn weight(&self) -> WeakComposition {
        let n = self.n_rows();
        let mut w = vec![0u32; n];
        for set in self.rows.iter().flatten() {
            for &v in set {
                w[(v - 1) as usize] += 1;
            }
        }
        WeakComposition(w)
    }

    /// All (row, col, index-in-set) occurrences of `v`, 0-based positions.
    pub fn occurrences(&self, v: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, set) in row.iter().enumerate() {
                if set.contains(&v) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// True if `v` occurs in column `c` (0-based), basement excluded.
    pub fn column_contains(&self, c: usize, v: u32) -> bool {
        self.rows.iter().any(|row| row.get(c).is_some_and(|set| set.contains(&v)))
    }
}

impl fmt::Display for SetFilling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in (0..self.rows.len()).rev() {
            write!(f, "row {}:", r + 1)?;
            if let Some(b) = &self.basement {
                write!(f, " [{}]", b[r])?;
            }
            for set in &self.rows[r] {
                let vals: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                write!(f, " {{{}}}", vals.join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// How a triple of anchors classifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleClass {
    /// A well-ordered triple with the side box in the lower row.
    InversionA,
    /// A well-ordered triple with the side box in the higher row.
    InversionB,
    /// A forbidden ordering; a valid filling has none of these.
    Coinversion,
    /// The boxes needed for a triple are not all present.
    NotATriple,
}

/// The anchor of box (r, c) where c = 0 means the basement (1-based column c).
fn anchor_or_basement(t: &SetFilling, r: usize, c: usize) -> Option<u32> {
    if c == 0 {
        return t.basement.as_ref().map(|b| b[r]);
    }
    t.rows[r].get(c - 1).map(|set| set[0])
}

/// Classifies the triple on rows `lower` < `higher` with its row pair in
/// columns `c`, `c + 1` (1-based; `c = 0` addresses the basement).
pub fn classify_triple(
    t: &SetFilling,
    lower: usize,
    higher: usize,
    c: usize,
) -> Result<TripleClass> {
    if lower >= higher || higher >= t.rows.len() {
        return Err(Error::InvalidIndex(format!("rows {} and {}", lower + 1, higher + 1)));
    }
    let len_lo = t.rows[lower].len();
    let len_hi = t.rows[higher].len();
    let (vb, va, vg) = if len_lo >= len_hi {
        // pair sits in the lower row, side box above it
        let b = anchor_or_basement(t, lower, c);
        let a = anchor_or_basement(t, lower, c + 1);
        let g = anchor_or_basement(t, higher, c + 1);
        match (b, a, g) {
            (Some(b), Some(a), Some(g)) => (b, a, g),
            _ => return Ok(TripleClass::NotATriple),
        }
    } else {
        // pair sits in the higher row, side box below it
        let b = anchor_or_basement(t, higher, c);
        let a = anchor_or_basement(t, higher, c + 1);
        let g = anchor_or_basement(t, lower, c);
        match (b, a, g) {
            (Some(b), Some(a), Some(g)) => (b, a, g),
            _ => return Ok(TripleClass::NotATriple),
        }
    };
    if va <= vg && vg <= vb {
        Ok(TripleClass::Coinversion)
    } else if len_lo >= len_hi {
        Ok(TripleClass::InversionA)
    } else {
        Ok(TripleClass::InversionB)
    }
}

/// The box of column `c` (1-based) that must receive a free `v`, if any:
/// among boxes whose anchor beats `v` and whose right neighbor's anchor does
/// not, the one with the least anchor.
pub fn receiving_box(t: &SetFilling, c: usize, v: u32) -> Option<usize> {
    let mut best: Option<(u32, usize)> = None;
    for (r, row) in t.rows.iter().enumerate() {
        let Some(set) = row.get(c - 1) else { continue };
        let anchor = set[0];
        if anchor <= v {
            continue;
        }
        if let Some(right) = row.get(c) {
            if right[0] > v {
                continue;
            }
        }
        if best.map_or(true, |(a, _)| anchor < a) {
            best = Some((anchor, r));
        }
    }
    best.map(|(_, r)| r)
}

/// Full validity check for `variant`.
pub fn is_valid_filling(t: &SetFilling, variant: SkylineVariant) -> bool {
    let n = t.rows.len();
    if n == 0 {
        return t.basement.is_none() || !variant.has_basement();
    }
    // basement must match the variant exactly
    match (variant.has_basement(), &t.basement) {
        (true, Some(b)) => {
            if *b != basement_for(n, variant).unwrap() {
                return false;
            }
        }
        (false, None) => {}
        _ => return false,
    }
    // box structure: nonempty, strictly decreasing, values in range
    for row in &t.rows {
        for set in row {
            if set.is_empty() || set.iter().any(|&v| v == 0 || v > n as u32) {
                return false;
            }
            if set.windows(2).any(|w| w[0] <= w[1]) {
                return false;
            }
        }
    }
    // no value repeats in a column
    let max_len = t.rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for c in 0..max_len {
        let mut seen = 0u64;
        for row in &t.rows {
            if let Some(set) = row.get(c) {
                for &v in set {
                    if seen >> v & 1 == 1 {
                        return false;
                    }
                    seen |= 1 << v;
                }
            }
        }
    }
    // everything in a box at least everything in its right neighbor
    for (r, row) in t.rows.iter().enumerate() {
        if let (Some(b), Some(first)) = (&t.basement, row.first()) {
            if b[r] < first[0] {
                return false;
            }
        }
        for pair in row.windows(2) {
            let left_min = *pair[0].last().unwrap();
            let right_max = pair[1][0];
            if left_min < right_max {
                return false;
            }
        }
    }
    // no coinversion triples
    let c_start = if variant.has_basement() { 0 } else { 1 };
    for lower in 0..n {
        for higher in lower + 1..n {
            for c in c_start..=max_len {
                if classify_triple(t, lower, higher, c) == Ok(TripleClass::Coinversion) {
                    return false;
                }
            }
        }
    }
    // every free value sits in its forced box
    for (r, row) in t.rows.iter().enumerate() {
        for (c0, set) in row.iter().enumerate() {
            for &v in &set[1..] {
                if receiving_box(t, c0 + 1, v) != Some(r) {
                    return false;
                }
            }
        }
    }
    // first-column anchor rule
    match variant {
        SkylineVariant::Atom => {
            for (r, row) in t.rows.iter().enumerate() {
                if let Some(first) = row.first() {
                    if first[0] != (r + 1) as u32 {
                        return false;
                    }
                }
            }
        }
        SkylineVariant::Quasi => {
            let mut last: u32 = 0;
            for (r, row) in t.rows.iter().enumerate() {
                if let Some(first) = row.first() {
                    let a = first[0];
                    if a > (r + 1) as u32 || a <= last {
                        return false;
                    }
                    last = a;
                }
            }
        }
        SkylineVariant::Key => {}
    }
    true
}

/// Serialization form of a filling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FillingDto {
    /// Row lengths from row 1 upward.
    pub shape: Vec<u32>,
    /// True when the shape is the reverse of the base composition.
    pub reversed: bool,
    /// Basement values by row; null for basement-free variants.
    pub basement: Option<Vec<u32>>,
    /// Boxes in reading order (rows, then columns, 1-based).
    pub boxes: Vec<BoxDto>,
}

/// One box of a serialized filling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoxDto {
    /// 1-based row.
    pub row: u32,
    /// 1-based column.
    pub col: u32,
    /// The set, sorted decreasing (anchor first).
    pub set: Vec<u32>,
}

impl SetFilling {
    /// Converts to the serialization form under `variant`.
    pub fn to_dto(&self, variant: SkylineVariant) -> FillingDto {
        let mut boxes = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, set) in row.iter().enumerate() {
                boxes.push(BoxDto { row: (r + 1) as u32, col: (c + 1) as u32, set: set.clone() });
            }
        }
        FillingDto {
            shape: self.rows.iter().map(|r| r.len() as u32).collect(),
            reversed: variant == SkylineVariant::Key,
            basement: self.basement.clone(),
            boxes,
        }
    }

    /// Rebuilds from the serialization form, checking box placement.
    pub fn from_dto(dto: &FillingDto) -> Result<Self> {
        let n = dto.shape.len();
        let mut rows: Vec<Vec<Vec<u32>>> = dto
            .shape
            .iter()
            .map(|&len| vec![Vec::new(); len as usize])
            .collect();
        for b in &dto.boxes {
            let r = b.row as usize;
            let c = b.col as usize;
            if r == 0 || r > n || c == 0 || c > dto.shape[r - 1] as usize {
                return Err(Error::InvalidIndex(format!("box ({}, {})", b.row, b.col)));
            }
            if !rows[r - 1][c - 1].is_empty() {
                return Err(Error::InvalidFilling(format!("box ({}, {}) given twice", b.row, b.col)));
            }
            if b.set.is_empty() {
                return Err(Error::InvalidFilling(format!("box ({}, {}) is empty", b.row, b.col)));
            }
            rows[r - 1][c - 1] = b.set.clone();
        }
        if rows.iter().flatten().any(|s| s.is_empty()) {
            return Err(Error::InvalidFilling("a box of the shape was not given".into()));
        }
        Ok(SetFilling { rows, basement: dto.basement.clone() })
    }
}
