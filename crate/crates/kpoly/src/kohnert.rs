//! Box diagrams and the moves connecting keys, atoms, and quasi bases.
//!
//! A box diagram is a finite set of cells (row, column), both 1-based, with
//! row 1 at the bottom. The diagram of a composition fills row i with its
//! first a_i columns. Two closure operations act on these: the drop move
//! (the rightmost box of a row falls to the highest empty cell below it in
//! its column) and, on compositions directly, the exchange move (swap a
//! smaller entry with a later larger one). The exchange closure lists the
//! atom terms of a key-type polynomial; filtering it by dominance within
//! each rearrangement class lists the quasi terms. Rectifying a diagram by
//! raising misplaced boxes until every row is left-justified, and slicing a
//! diagram into threads, translate between the diagram and filling pictures.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::composition::{sort_and_w, WeakComposition};
use crate::error::{Error, Result};
use crate::polynomial::{BetaPolynomial, ZBeta};
use crate::skyline::{is_valid_filling, receiving_box, SetFilling, SkylineVariant};

/// A finite set of boxes in the first quadrant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxDiagram {
    boxes: BTreeSet<(u32, u32)>,
}

/// Serialized form of a diagram: a sorted list of (row, column) pairs.
#[derive(Serialize, Deserialize)]
pub struct DiagramDto {
    pub boxes: Vec<(u32, u32)>,
}

impl BoxDiagram {
    /// Builds a diagram, rejecting cells outside the first quadrant.
    pub fn new<I: IntoIterator<Item = (u32, u32)>>(boxes: I) -> Result<Self> {
        let boxes: BTreeSet<(u32, u32)> = boxes.into_iter().collect();
        if let Some(&(r, c)) = boxes.iter().find(|&&(r, c)| r == 0 || c == 0) {
            return Err(Error::InvalidIndex(format!("box ({}, {}) is not 1-based", r, c)));
        }
        Ok(BoxDiagram { boxes })
    }

    /// The diagram with row i holding the first a_i columns.
    pub fn key_diagram(a: &WeakComposition) -> Self {
        let mut boxes = BTreeSet::new();
        for (i, &v) in a.0.iter().enumerate() {
            for c in 1..=v {
                boxes.insert(((i + 1) as u32, c));
            }
        }
        BoxDiagram { boxes }
    }

    /// Number of boxes.
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    /// True if the diagram has no boxes.
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// True if the cell is occupied.
    pub fn contains(&self, r: u32, c: u32) -> bool {
        self.boxes.contains(&(r, c))
    }

    /// The boxes in sorted order.
    pub fn boxes(&self) -> impl Iterator<Item = &(u32, u32)> {
        self.boxes.iter()
    }

    /// Box counts per row, padded to length n.
    pub fn row_weight(&self, n: usize) -> Result<WeakComposition> {
        let mut counts = vec![0u32; n];
        for &(r, _) in &self.boxes {
            let i = (r - 1) as usize;
            if i >= n {
                return Err(Error::InvalidIndex(format!("box row {} exceeds {} rows", r, n)));
            }
            counts[i] += 1;
        }
        Ok(WeakComposition(counts))
    }

    /// True if every row is left-justified.
    pub fn is_left_justified(&self) -> bool {
        self.boxes.iter().all(|&(r, c)| c == 1 || self.contains(r, c - 1))
    }

    /// Diagrams reached by one drop move.
    pub fn drop_successors(&self) -> Vec<BoxDiagram> {
        let mut rightmost: BTreeMap<u32, u32> = BTreeMap::new();
        for &(r, c) in &self.boxes {
            let e = rightmost.entry(r).or_insert(c);
            *e = (*e).max(c);
        }
        let mut out = Vec::new();
        for (&r, &c) in &rightmost {
            if let Some(target) = (1..r).rev().find(|&rr| !self.contains(rr, c)) {
                let mut next = self.boxes.clone();
                next.remove(&(r, c));
                next.insert((target, c));
                out.push(BoxDiagram { boxes: next });
            }
        }
        out
    }

    /// Serialized form.
    pub fn to_dto(&self) -> DiagramDto {
        DiagramDto { boxes: self.boxes.iter().copied().collect() }
    }

    /// Rebuilds a diagram from its serialized form.
    pub fn from_dto(dto: &DiagramDto) -> Result<Self> {
        BoxDiagram::new(dto.boxes.iter().copied())
    }
}

/// All diagrams reachable from the diagram of `a` by drop moves (memoized).
pub fn drop_closure(a: &WeakComposition) -> Arc<Vec<BoxDiagram>> {
    static CACHE: OnceLock<Mutex<HashMap<WeakComposition, Arc<Vec<BoxDiagram>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(a) {
        return Arc::clone(hit);
    }
    let start = BoxDiagram::key_diagram(a);
    let mut seen: BTreeSet<BoxDiagram> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(d) = queue.pop_front() {
        for next in d.drop_successors() {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let result = Arc::new(seen.into_iter().collect::<Vec<_>>());
    cache
        .lock()
        .unwrap()
        .entry(a.clone())
        .or_insert_with(|| Arc::clone(&result))
        .clone()
}

/// The char-type polynomial of `a` read off its drop closure.
pub fn drop_closure_poly(a: &WeakComposition) -> Result<BetaPolynomial> {
    let n = a.len();
    let mut total = BetaPolynomial::zero(n);
    for d in drop_closure(a).iter() {
        let wt = d.row_weight(n)?;
        total = total.add(&BetaPolynomial::monomial(n, wt.0, 0, BigInt::from(1))?)?;
    }
    Ok(total)
}

/// Compositions reachable from `a` by exchanging a smaller entry with a
/// later larger one.
pub fn exchange_closure(a: &WeakComposition) -> BTreeSet<WeakComposition> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(b) = queue.pop_front() {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if b.0[i] < b.0[j] {
                    let mut next = b.clone();
                    next.0.swap(i, j);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    seen
}

/// The members of the exchange closure dominated by every other member
/// sharing their positive part.
pub fn dominant_exchange_members(a: &WeakComposition) -> Vec<WeakComposition> {
    let closure = exchange_closure(a);
    let mut out = Vec::new();
    for b in &closure {
        let bp = b.positive_part();
        if closure.iter().filter(|c| c.positive_part() == bp).all(|c| c.dominates(b)) {
            out.push(b.clone());
        }
    }
    out
}

/// The exchange closure computed independently: rearrangements of `a` whose
/// sorting permutation lies below that of `a`.
pub fn bruhat_rearrangements(a: &WeakComposition) -> Result<BTreeSet<WeakComposition>> {
    let (_, wa) = sort_and_w(a);
    let mut out = BTreeSet::new();
    let mut values = a.0.clone();
    values.sort_unstable();
    let mut current = Vec::with_capacity(values.len());
    distinct_rearrangements(&mut values, &mut current, &mut |b| {
        let cand = WeakComposition(b.to_vec());
        let (_, wb) = sort_and_w(&cand);
        if crate::composition::bruhat_leq(&wb, &wa)? {
            out.insert(cand);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Visits every distinct ordering of `pool` (which must arrive sorted).
pub(crate) fn distinct_rearrangements(
    pool: &mut Vec<u32>,
    current: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if pool.is_empty() {
        return visit(current);
    }
    let mut last: Option<u32> = None;
    for k in 0..pool.len() {
        if last == Some(pool[k]) {
            continue;
        }
        last = Some(pool[k]);
        let v = pool.remove(k);
        current.push(v);
        distinct_rearrangements(pool, current, visit)?;
        current.pop();
        pool.insert(k, v);
    }
    Ok(())
}

/// Raises misplaced boxes (a box with an empty cell on its left) to the
/// nearest empty cell above, scanning rows top to bottom, until every row is
/// left-justified.
pub fn nearest_left_justified(d: &BoxDiagram) -> Result<BoxDiagram> {
    let mut boxes = d.boxes.clone();
    let budget = 10_000 + boxes.len() * boxes.len() * 64;
    for _ in 0..budget {
        let mut misplaced = None;
        for &(r, c) in boxes.iter().rev() {
            // BTreeSet order is (row, col) ascending; reversed gives the top
            // row first but columns right to left, so find the row and rescan
            if c >= 2 && !boxes.contains(&(r, c - 1)) {
                let first = boxes
                    .iter()
                    .filter(|&&(rr, cc)| rr == r && cc >= 2 && !boxes.contains(&(r, cc - 1)))
                    .map(|&(_, cc)| cc)
                    .min()
                    .unwrap();
                misplaced = Some((r, first));
                break;
            }
        }
        let Some((r, c)) = misplaced else {
            return Ok(BoxDiagram { boxes });
        };
        let target = (r + 1..).find(|&rr| !boxes.contains(&(rr, c))).unwrap();
        boxes.remove(&(r, c));
        boxes.insert((target, c));
    }
    Err(Error::Internal("left justification did not terminate".into()))
}

/// Slices a diagram into threads: each starts at the lowest remaining
/// first-column box and extends right, taking the highest remaining box in
/// the next column weakly below the current one.
pub fn thread_decomposition(d: &BoxDiagram) -> Result<Vec<Vec<(u32, u32)>>> {
    let mut remaining = d.boxes.clone();
    let mut threads = Vec::new();
    while let Some(&start) = remaining.iter().find(|&&(_, c)| c == 1) {
        let mut thread = vec![start];
        remaining.remove(&start);
        let (mut row, mut col) = start;
        loop {
            col += 1;
            let Some(&next) = remaining.iter().filter(|&&(r, c)| c == col && r <= row).max() else {
                break;
            };
            remaining.remove(&next);
            thread.push(next);
            row = next.0;
        }
        threads.push(thread);
    }
    if let Some(&(r, c)) = remaining.iter().next() {
        return Err(Error::Internal(format!("box ({}, {}) belongs to no thread", r, c)));
    }
    Ok(threads)
}

/// Reads a diagram as an atom-type filling: each thread becomes the row of
/// its first-column box, its entries the box rows in order.
pub fn diagram_to_filling(d: &BoxDiagram, n: usize) -> Result<SetFilling> {
    if let Some(&(r, c)) = d.boxes.iter().find(|&&(r, _)| r as usize > n) {
        return Err(Error::InvalidIndex(format!("box ({}, {}) exceeds {} rows", r, c, n)));
    }
    let mut rows: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    for thread in thread_decomposition(d)? {
        let out_row = (thread[0].0 - 1) as usize;
        rows[out_row] = thread.iter().map(|&(r, _)| vec![r]).collect();
    }
    let t = SetFilling { rows, basement: None };
    if !is_valid_filling(&t, SkylineVariant::Atom) {
        return Err(Error::Internal("threaded diagram is not a valid filling".into()));
    }
    Ok(t)
}

/// The diagram of a key-type filling's anchors: value v in column c puts a
/// box in row v of column c.
pub fn key_filling_to_diagram(t: &SetFilling) -> BoxDiagram {
    let mut boxes = BTreeSet::new();
    for row in &t.rows {
        for (c, set) in row.iter().enumerate() {
            boxes.insert((set[0], (c + 1) as u32));
        }
    }
    BoxDiagram { boxes }
}

/// Rewrites a key-type filling's anchors as an atom-type filling by column
/// extraction: repeatedly take the least first-column entry, then the
/// greatest entry weakly below it in each later column.
pub fn key_filling_anchors_to_atom(t: &SetFilling) -> Result<SetFilling> {
    let n = t.n_rows();
    let max_len = t.rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); max_len];
    for row in &t.rows {
        for (c, set) in row.iter().enumerate() {
            cols[c].insert(set[0]);
        }
    }
    let mut rows: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    while let Some(&first) = cols.first().and_then(|c| c.iter().next()) {
        cols[0].remove(&first);
        let mut values = vec![first];
        let mut prev = first;
        for col in cols.iter_mut().skip(1) {
            let Some(&next) = col.range(..=prev).next_back() else {
                break;
            };
            col.remove(&next);
            values.push(next);
            prev = next;
        }
        rows[(first - 1) as usize] = values.into_iter().map(|v| vec![v]).collect();
    }
    if let Some(c) = cols.iter().position(|c| !c.is_empty()) {
        return Err(Error::Internal(format!("column {} entries left unextracted", c + 1)));
    }
    let out = SetFilling { rows, basement: None };
    if !is_valid_filling(&out, SkylineVariant::Atom) {
        return Err(Error::Internal("extracted filling is not a valid atom filling".into()));
    }
    Ok(out)
}

/// Rewrites a key-type filling as an atom-type filling: anchors by column
/// extraction, free entries reinserted into their columns' receiving boxes.
pub fn key_filling_to_atom(t: &SetFilling) -> Result<SetFilling> {
    if !is_valid_filling(t, SkylineVariant::Key) {
        return Err(Error::InvalidFilling("not a key-type filling".into()));
    }
    let mut out = key_filling_anchors_to_atom(t)?;
    let mut free: Vec<(usize, u32)> = Vec::new();
    for row in &t.rows {
        for (c, set) in row.iter().enumerate() {
            free.extend(set.iter().skip(1).map(|&v| (c + 1, v)));
        }
    }
    free.sort_unstable();
    for (col, v) in free {
        let Some(r) = receiving_box(&out, col, v) else {
            return Err(Error::Internal(format!("free {} in column {} has no box", v, col)));
        };
        let set = &mut out.rows[r][col - 1];
        if set.contains(&v) {
            return Err(Error::Internal(format!("free {} collides in column {}", v, col)));
        }
        let at = set.iter().position(|&x| x < v).unwrap_or(set.len());
        set.insert(at, v);
    }
    if !is_valid_filling(&out, SkylineVariant::Atom) {
        return Err(Error::Internal("reinserted free entries broke the filling".into()));
    }
    Ok(out)
}

/// The key-type polynomial of `a` written in the atom basis: one unit term
/// per exchange closure member.
pub fn lascoux_to_atom_expansion(a: &WeakComposition) -> BTreeMap<WeakComposition, ZBeta> {
    exchange_closure(a).into_iter().map(|b| (b, ZBeta::one())).collect()
}

/// The key-type polynomial of `a` written in the quasi basis: one unit term
/// per dominant exchange member.
pub fn lascoux_to_quasilascoux_expansion(a: &WeakComposition) -> BTreeMap<WeakComposition, ZBeta> {
    dominant_exchange_members(a).into_iter().map(|b| (b, ZBeta::one())).collect()
}
