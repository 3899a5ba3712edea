//! Filling enumeration.
//!
//! Anchors are placed by backtracking, column by column and bottom row up
//! within a column, so that every anchor condition (column distinctness, row
//! decrease, triples, the first-column rule) can be checked the moment a box
//! is filled. Once the anchors of a diagram are fixed, the free values
//! decompose: each column admits an independent set of addable values, each
//! with a forced receiving box, so the fillings over one anchor configuration
//! contribute x^(anchor weight) times a product of (1 + b x_v) factors. The
//! explicit enumeration expands those subsets instead, visiting every filling.

use num::bigint::BigInt;
use num::traits::One;

use super::{basement_for, shape_for, SetFilling, SkylineVariant};
use crate::composition::WeakComposition;
use crate::polynomial::BetaPolynomial;

/// One addable free value: (1-based column, value, 0-based receiving row).
pub type Addable = (usize, u32, usize);

struct Search<'a, F: FnMut(&SetFilling, &[Addable])> {
    lens: Vec<usize>,
    basement: Option<Vec<u32>>,
    variant: SkylineVariant,
    cells: Vec<(usize, usize)>,
    anchors: Vec<Vec<u32>>,
    colmask: Vec<u64>,
    visit: &'a mut F,
}

impl<F: FnMut(&SetFilling, &[Addable])> Search<'_, F> {
    /// Anchor of (row, col) using 1-based columns; col 0 reads the basement.
    fn cell_value(&self, r: usize, c: usize) -> Option<u32> {
        if c == 0 {
            return self.basement.as_ref().map(|b| b[r]);
        }
        self.anchors[r].get(c - 1).copied()
    }

    fn triples_allow(&self, r: usize, c: usize, v: u32) -> bool {
        // as the upper box of a lower-row pair: rows below, at least as long
        for rp in 0..r {
            if self.lens[rp] < self.lens[r] {
                continue;
            }
            let Some(va) = self.cell_value(rp, c) else { continue };
            let Some(vb) = self.cell_value(rp, c - 1) else { continue };
            if va <= v && v <= vb {
                return false;
            }
        }
        // as the right box of an upper-row pair: rows below, strictly shorter
        if let Some(vb) = self.cell_value(r, c - 1) {
            for rp in 0..r {
                if self.lens[rp] >= self.lens[r] {
                    continue;
                }
                let vg = if c >= 2 {
                    if self.lens[rp] >= c - 1 {
                        Some(self.anchors[rp][c - 2])
                    } else {
                        None
                    }
                } else {
                    None
                };
                let vg = match (vg, c) {
                    (Some(g), _) => g,
                    (None, 1) => match &self.basement {
                        Some(b) => b[rp],
                        None => continue,
                    },
                    _ => continue,
                };
                if v <= vg && vg <= vb {
                    return false;
                }
            }
        }
        true
    }

    fn rec(&mut self, idx: usize, last_col1: u32) {
        if idx == self.cells.len() {
            let filling = SetFilling {
                rows: self
                    .anchors
                    .iter()
                    .map(|row| row.iter().map(|&v| vec![v]).collect())
                    .collect(),
                basement: self.basement.clone(),
            };
            let addables = addable_values(&filling);
            (self.visit)(&filling, &addables);
            return;
        }
        let (r, c) = self.cells[idx];
        let (lo, hi) = match (c, self.variant) {
            (1, SkylineVariant::Atom) => ((r + 1) as u32, (r + 1) as u32),
            (1, SkylineVariant::Quasi) => (last_col1 + 1, (r + 1) as u32),
            (1, SkylineVariant::Key) => (1, self.basement.as_ref().unwrap()[r]),
            _ => (1, self.anchors[r][c - 2]),
        };
        for v in lo..=hi {
            if self.colmask[c] >> v & 1 == 1 {
                continue;
            }
            if !self.triples_allow(r, c, v) {
                continue;
            }
            self.anchors[r].push(v);
            self.colmask[c] |= 1 << v;
            self.rec(idx + 1, if c == 1 { v } else { last_col1 });
            self.colmask[c] &= !(1 << v);
            self.anchors[r].pop();
        }
    }
}

/// Visits every anchor configuration of base `a` under `variant`, passing the
/// singleton filling and its addable free values.
pub fn for_each_anchor_config<F: FnMut(&SetFilling, &[Addable])>(
    a: &WeakComposition,
    variant: SkylineVariant,
    visit: &mut F,
) {
    let lens = shape_for(a, variant);
    let n = lens.len();
    assert!(n < 60, "value range must fit the column bit masks");
    let max_len = lens.iter().copied().max().unwrap_or(0);
    let mut cells = Vec::new();
    for c in 1..=max_len {
        for (r, &len) in lens.iter().enumerate() {
            if len >= c {
                cells.push((r, c));
            }
        }
    }
    let mut search = Search {
        basement: basement_for(n, variant),
        variant,
        cells,
        anchors: vec![Vec::new(); n],
        colmask: vec![0u64; max_len + 1],
        lens,
        visit,
    };
    search.rec(0, 0);
}

/// The addable free values of a singleton (or partial) filling: for each
/// column and absent value, the box forced to receive it, if any.
pub fn addable_values(t: &SetFilling) -> Vec<Addable> {
    let n = t.n_rows() as u32;
    let max_len = t.rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for c in 1..=max_len {
        for v in 1..=n {
            if t.column_contains(c - 1, v) {
                continue;
            }
            if let Some(r) = super::receiving_box(t, c, v) {
                out.push((c, v, r));
            }
        }
    }
    out
}

/// All anchor configurations as singleton fillings.
pub fn anchor_configs(a: &WeakComposition, variant: SkylineVariant) -> Vec<SetFilling> {
    let mut out = Vec::new();
    for_each_anchor_config(a, variant, &mut |t, _| out.push(t.clone()));
    out
}

/// Visits every filling of base `a` under `variant`.
pub fn for_each_filling<F: FnMut(&SetFilling)>(
    a: &WeakComposition,
    variant: SkylineVariant,
    visit: &mut F,
) {
    for_each_anchor_config(a, variant, &mut |t, addables| {
        let mut current = t.clone();
        expand_subsets(&mut current, addables, 0, visit);
    });
}

fn expand_subsets<F: FnMut(&SetFilling)>(
    current: &mut SetFilling,
    addables: &[Addable],
    idx: usize,
    visit: &mut F,
) {
    if idx == addables.len() {
        visit(current);
        return;
    }
    expand_subsets(current, addables, idx + 1, visit);
    let (c, v, r) = addables[idx];
    let set = &mut current.rows[r][c - 1];
    let pos = set.iter().position(|&x| x < v).unwrap_or(set.len());
    set.insert(pos, v);
    expand_subsets(current, addables, idx + 1, visit);
    current.rows[r][c - 1].remove(pos);
}

/// Collects every filling of base `a` under `variant`.
pub fn enumerate_fillings(a: &WeakComposition, variant: SkylineVariant) -> Vec<SetFilling> {
    let mut out = Vec::new();
    for_each_filling(a, variant, &mut |t| out.push(t.clone()));
    out
}

/// Counts fillings without materializing them.
pub fn count_fillings(a: &WeakComposition, variant: SkylineVariant) -> u64 {
    let mut count = 0u64;
    for_each_anchor_config(a, variant, &mut |_, addables| {
        count += 1u64 << addables.len();
    });
    count
}

/// The generating polynomial over all fillings: each contributes its weight
/// monomial with a b-power counting the free entries.
pub fn filling_poly(a: &WeakComposition, variant: SkylineVariant) -> BetaPolynomial {
    let n = a.len();
    let mut total = BetaPolynomial::zero(n);
    for_each_anchor_config(a, variant, &mut |t, addables| {
        let mut p = BetaPolynomial::monomial(n, t.weight().0, 0, BigInt::one())
            .expect("weight length matches the variable count");
        for &(_, v, _) in addables {
            p = p.mul_one_plus_beta_var((v - 1) as usize).expect("value in range");
        }
        total = total.add(&p).expect("same variable count");
    });
    total
}
