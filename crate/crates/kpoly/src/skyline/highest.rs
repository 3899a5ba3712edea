//! Destandardization: collapsing fillings onto their highest forms.
//!
//! A value i of a filling is eligible for raising when its leftmost
//! occurrence is not pinned (an anchor in the first column — for the quasi
//! mode additionally required to sit in row i) and no blocking occurrence of
//! the comparison value lies weakly right of it in another box. The meson
//! mode compares against the smallest label above i that is present at all;
//! the quasi mode compares against i + 1 literally. Raising replaces every i
//! by i + 1, deleting one duplicate if a box ends up with two; iterating
//! until nothing is eligible lands in the highest form, independently of the
//! raising order. Each deletion marks red the smallest starting letter of the
//! run it merges into, and that colored weight identifies each filling uniquely
//! within the fiber of its highest form: fibers are in bijection with the
//! (mesonic) glides of the highest form's weight, which is what turns filling
//! sums into kaon or glide expansions.

use std::collections::BTreeMap;

use super::enumerate::for_each_filling;
use super::{is_valid_filling, SetFilling, SkylineVariant};
use crate::composition::{Komposition, WeakComposition};
use crate::error::{Error, Result};
use crate::glide::{is_glide_of, is_mesonic_glide_of};
use crate::polynomial::ZBeta;

/// Which raising rule applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HighestMode {
    /// Atom fillings; highest forms index kaon expansions.
    Meson,
    /// Quasi fillings; highest forms index glide expansions.
    QuasiYamanouchi,
}

impl HighestMode {
    /// The filling variant each mode acts on.
    pub fn variant(self) -> SkylineVariant {
        match self {
            HighestMode::Meson => SkylineVariant::Atom,
            HighestMode::QuasiYamanouchi => SkylineVariant::Quasi,
        }
    }
}

/// The leftmost occurrence of `v`: the box in the least 1-based column
/// containing it (unique there, since columns never repeat a value).
fn leftmost(t: &SetFilling, v: u32) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in t.rows.iter().enumerate() {
        for (c, set) in row.iter().enumerate() {
            if set.contains(&v) && best.map_or(true, |(_, bc)| c < bc) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// True if raising `i` is allowed in `t` under `mode`.
pub fn is_eligible(t: &SetFilling, i: u32, mode: HighestMode) -> bool {
    let Some((lr, lc)) = leftmost(t, i) else { return false };
    // pinned: an anchor in the first column (quasi mode also wants row i)
    if lc == 0 && t.rows[lr][0][0] == i {
        match mode {
            HighestMode::Meson => return false,
            HighestMode::QuasiYamanouchi => {
                if (lr + 1) as u32 == i {
                    return false;
                }
            }
        }
    }
    // blocked: the comparison value weakly right of it, in another box
    let cmp = match mode {
        HighestMode::Meson => (i + 1..=t.n_rows() as u32).find(|&w| !t.occurrences(w).is_empty()),
        HighestMode::QuasiYamanouchi => Some(i + 1),
    };
    if let Some(w) = cmp {
        for (r, c) in t.occurrences(w) {
            if c >= lc && (r, c) != (lr, lc) {
                return false;
            }
        }
    }
    true
}

/// The values of `t` currently eligible for raising.
pub fn eligible_values(t: &SetFilling, mode: HighestMode) -> Vec<u32> {
    (1..=t.n_rows() as u32).filter(|&i| is_eligible(t, i, mode)).collect()
}

/// True if no value of `t` can be raised.
pub fn is_highest(t: &SetFilling, mode: HighestMode) -> bool {
    eligible_values(t, mode).is_empty()
}

/// Replaces every `i` by `i + 1`; returns whether a duplicate was deleted.
fn raise(t: &mut SetFilling, i: u32) -> Result<bool> {
    if i >= t.n_rows() as u32 {
        return Err(Error::Internal(format!("raising {} exceeds the value range", i)));
    }
    let mut deletions = 0usize;
    for row in &mut t.rows {
        for set in row.iter_mut() {
            if let Some(pos) = set.iter().position(|&x| x == i) {
                set.remove(pos);
                if set.contains(&(i + 1)) {
                    deletions += 1;
                } else {
                    let at = set.iter().position(|&x| x < i + 1).unwrap_or(set.len());
                    set.insert(at, i + 1);
                }
            }
        }
    }
    match deletions {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::Internal(format!("raising {} deleted {} duplicates", i, deletions))),
    }
}

/// Destandardizes `t`, choosing among eligible values with `pick`; returns
/// the highest form and the colored starting weight.
pub fn destandardize_with<F>(
    t: &SetFilling,
    mode: HighestMode,
    mut pick: F,
) -> Result<(SetFilling, Komposition)>
where
    F: FnMut(&[u32]) -> u32,
{
    let n = t.n_rows();
    let mut current = t.clone();
    let start_weight = t.weight();
    let mut reds = vec![false; n];
    // run_start[v] = smallest starting letter relabeled to v so far; a
    // deletion means run(i) joins run(i + 1), and the red belongs on the
    // smallest letter of the joined run, not on the label being raised
    let mut run_start: Vec<u32> = (0..=n as u32 + 1).collect();
    // entries shrink or total value grows each step, so this bound is safe
    let budget = t.num_entries() * (n + 1) + 1;
    for _ in 0..budget {
        let eligible = eligible_values(&current, mode);
        if eligible.is_empty() {
            let kwt = Komposition::new(start_weight.0.clone(), reds)
                .map_err(|e| Error::Internal(format!("colored weight is malformed: {}", e)))?;
            return Ok((current, kwt));
        }
        let i = pick(&eligible);
        if !eligible.contains(&i) {
            return Err(Error::Internal(format!("picker chose ineligible value {}", i)));
        }
        if raise(&mut current, i)? {
            let pos = run_start[i as usize + 1] as usize - 1;
            if start_weight.0[pos] == 0 || reds[pos] {
                return Err(Error::Internal(format!(
                    "cannot mark position {} red in {}",
                    pos + 1,
                    start_weight
                )));
            }
            reds[pos] = true;
        }
        run_start[i as usize + 1] = run_start[i as usize];
    }
    Err(Error::Internal("destandardization did not terminate".into()))
}

/// Destandardizes `t`, always raising the smallest eligible value.
pub fn destandardize(t: &SetFilling, mode: HighestMode) -> Result<(SetFilling, Komposition)> {
    destandardize_with(t, mode, |eligible| eligible[0])
}

/// All highest fillings of base `a` under `mode`.
pub fn highest_fillings(a: &WeakComposition, mode: HighestMode) -> Vec<SetFilling> {
    let mut out = Vec::new();
    for_each_filling(a, mode.variant(), &mut |t| {
        if is_highest(t, mode) {
            out.push(t.clone());
        }
    });
    out
}

/// The atom polynomial of `a` written in the kaon basis: each meson-highest
/// filling contributes b^excess on its weight.
pub fn atom_to_kaon_expansion(a: &WeakComposition) -> BTreeMap<WeakComposition, ZBeta> {
    expansion_by_highest(a, HighestMode::Meson)
}

/// The quasi polynomial of `a` written in the glide basis: each
/// quasi-highest filling contributes b^excess on its weight.
pub fn quasilascoux_to_glide_expansion(a: &WeakComposition) -> BTreeMap<WeakComposition, ZBeta> {
    expansion_by_highest(a, HighestMode::QuasiYamanouchi)
}

fn expansion_by_highest(a: &WeakComposition, mode: HighestMode) -> BTreeMap<WeakComposition, ZBeta> {
    let mut out: BTreeMap<WeakComposition, ZBeta> = BTreeMap::new();
    for_each_filling(a, mode.variant(), &mut |t| {
        if is_highest(t, mode) {
            out.entry(t.weight()).or_default().add_term(&num::BigInt::from(1), t.excess());
        }
    });
    out
}

/// Rebuilds the fiber element of highest form `s` indexed by the colored
/// composition `b` (a mesonic glide of the weight in meson mode, any glide
/// in quasi mode).
pub fn fiber_reconstruct(s: &SetFilling, b: &Komposition, mode: HighestMode) -> Result<SetFilling> {
    let weight = s.weight();
    let valid_index = match mode {
        HighestMode::Meson => is_mesonic_glide_of(b, &weight),
        HighestMode::QuasiYamanouchi => is_glide_of(b, &weight),
    };
    if !valid_index {
        return Err(Error::InvalidKomposition(format!(
            "{} does not index the fiber of a filling of weight {}",
            b, weight
        )));
    }
    let npos: Vec<usize> = weight.0.iter().enumerate().filter(|(_, &v)| v > 0).map(|(p, _)| p).collect();
    let blocks = match mode {
        HighestMode::Meson => mesonic_blocks(b, &npos),
        HighestMode::QuasiYamanouchi => greedy_blocks(b, &npos, &weight)?,
    };
    let mut working = s.clone();
    for (j, block) in blocks.iter().enumerate() {
        let value = (npos[j] + 1) as u32;
        apply_block(&mut working, value, block)?;
    }
    if !is_valid_filling(&working, mode.variant()) {
        return Err(Error::Internal(format!("reconstruction from {} left an invalid filling", b)));
    }
    Ok(working)
}

/// Nonzero entries of `b` cut at the weight's nonzero positions.
fn mesonic_blocks(b: &Komposition, npos: &[usize]) -> Vec<Vec<(usize, u32, bool)>> {
    let mut blocks = Vec::with_capacity(npos.len());
    let mut lo = 0usize;
    for &p in npos {
        let mut block = Vec::new();
        for pos in lo..=p {
            let (v, red) = b.entry(pos);
            if v > 0 {
                block.push((pos, v, red));
            }
        }
        blocks.push(block);
        lo = p + 1;
    }
    blocks
}

/// Nonzero entries of `b` grouped greedily: a group opens black, absorbs
/// entries until its target is met, then absorbs only red ones.
fn greedy_blocks(
    b: &Komposition,
    npos: &[usize],
    weight: &WeakComposition,
) -> Result<Vec<Vec<(usize, u32, bool)>>> {
    let entries: Vec<(usize, u32, bool)> = (0..b.len())
        .map(|p| (p, b.entry(p).0, b.entry(p).1))
        .filter(|&(_, v, _)| v > 0)
        .collect();
    let mut blocks = Vec::with_capacity(npos.len());
    let mut it = entries.into_iter().peekable();
    for &p in npos {
        let target = weight.0[p] as i64;
        let mut block = Vec::new();
        let mut sum = 0i64;
        while sum < target {
            let Some((pos, v, red)) = it.next() else {
                return Err(Error::Internal(format!("glide {} ran out of entries", b)));
            };
            if block.is_empty() && red {
                return Err(Error::Internal(format!("glide {} opens a group red", b)));
            }
            sum += v as i64 - red as i64;
            block.push((pos, v, red));
        }
        if sum != target {
            return Err(Error::Internal(format!("glide {} overshoots a group target", b)));
        }
        while let Some(&(_, v, red)) = it.peek() {
            if red && v == 1 {
                block.push(it.next().unwrap());
            } else {
                break;
            }
        }
        blocks.push(block);
    }
    if it.next().is_some() {
        return Err(Error::Internal(format!("glide {} has entries beyond the last group", b)));
    }
    Ok(blocks)
}

/// Rewrites the occurrences of `value` in `t` according to one block: the
/// block's letters fill the boxes containing `value` from the right, black
/// letters replacing and moving leftward, red letters joining the current box.
fn apply_block(t: &mut SetFilling, value: u32, block: &[(usize, u32, bool)]) -> Result<()> {
    let mut letters: Vec<(u32, bool)> = Vec::new();
    for &(pos, v, red) in block {
        let letter = (pos + 1) as u32;
        if red {
            letters.push((letter, true));
            letters.extend(std::iter::repeat((letter, false)).take((v - 1) as usize));
        } else {
            letters.extend(std::iter::repeat((letter, false)).take(v as usize));
        }
    }
    let mut targets = t.occurrences(value);
    targets.sort_by(|x, y| y.1.cmp(&x.1));
    let black_count = letters.iter().filter(|&&(_, red)| !red).count();
    if black_count != targets.len() {
        return Err(Error::Internal(format!(
            "block for value {} brings {} black letters for {} boxes",
            value,
            black_count,
            targets.len()
        )));
    }
    let mut idx = 0usize;
    for (k, &(letter, red)) in letters.iter().enumerate() {
        if k == 0 {
            if red {
                return Err(Error::Internal("a block's first letter must be black".into()));
            }
            replace_in_box(t, targets[idx], value, letter)?;
        } else if red {
            insert_in_box(t, targets[idx], letter)?;
        } else {
            idx += 1;
            replace_in_box(t, targets[idx], value, letter)?;
        }
    }
    Ok(())
}

fn replace_in_box(t: &mut SetFilling, at: (usize, usize), old: u32, new: u32) -> Result<()> {
    let set = &mut t.rows[at.0][at.1];
    let Some(pos) = set.iter().position(|&x| x == old) else {
        return Err(Error::Internal(format!("value {} missing from its target box", old)));
    };
    set.remove(pos);
    insert_in_box(t, at, new)
}

fn insert_in_box(t: &mut SetFilling, at: (usize, usize), v: u32) -> Result<()> {
    let set = &mut t.rows[at.0][at.1];
    if set.contains(&v) {
        return Err(Error::Internal(format!("value {} already present in its target box", v)));
    }
    let pos = set.iter().position(|&x| x < v).unwrap_or(set.len());
    set.insert(pos, v);
    Ok(())
}
