//! Glides and mesonic glides of a weak composition.
//!
//! Starting from a weak composition read as an all-black colored composition,
//! three local moves act on an adjacent pair whose left entry is zero and
//! whose right entry p is positive:
//!
//! * slide p one step left, keeping its color;
//! * split a black p into black q, r with q + r = p;
//! * split a black p into black q and red r with q + r = p + 1.
//!
//! The closure of the start under these moves is the glide set. Membership is
//! also decidable directly: a colored composition is a glide exactly when its
//! positions can be cut into consecutive blocks, one per nonzero entry of the
//! base, each block ending no later than that entry's position, contributing
//! entry sum minus red count equal to that entry, opening (leftmost nonzero)
//! with a black entry, with nothing nonzero after the final block. Mesonic
//! glides are the subset where every block is as long as possible (cut points
//! exactly at the base's nonzero positions) and each block ends in a nonzero
//! entry; they generate the kaon polynomials, while full glide sets generate
//! the glide polynomials.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::bigint::BigInt;
use num::traits::One;

use crate::composition::{Komposition, WeakComposition};
use crate::error::Result;
use crate::polynomial::{BetaPolynomial, Term, ZBeta};

/// The set of glides (or mesonic glides) of a base composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlideSet {
    base: WeakComposition,
    members: BTreeSet<Komposition>,
}

impl GlideSet {
    /// The base composition the set was generated from.
    pub fn base(&self) -> &WeakComposition {
        &self.base
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True if the set is empty (never happens for a generated set).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, b: &Komposition) -> bool {
        self.members.contains(b)
    }

    /// Iterates members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Komposition> {
        self.members.iter()
    }

    /// The generating polynomial: each member contributes b^excess x^entries.
    pub fn poly(&self) -> BetaPolynomial {
        let n = self.base.len();
        let mut p = BetaPolynomial::zero(n);
        for m in &self.members {
            p.add_term(Term { beta: m.excess(), exps: m.entries().to_vec() }, BigInt::one());
        }
        p
    }
}

/// 0-based indices of the nonzero entries of `a`.
fn nonzero_positions(a: &WeakComposition) -> Vec<usize> {
    a.0.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, _)| i).collect()
}

/// All single-move successors; slides out of a position `i` with
/// `forbid_slide_from[i]` set are suppressed.
fn successors(b: &Komposition, forbid_slide_from: Option<&[bool]>) -> Vec<Komposition> {
    let n = b.len();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (left, _) = b.entry(i);
        let (p, p_red) = b.entry(i + 1);
        if left != 0 || p == 0 {
            continue;
        }
        let slide_ok = forbid_slide_from.map_or(true, |f| !f[i + 1]);
        if slide_ok {
            let mut entries = b.entries().to_vec();
            let mut reds = b.reds().to_vec();
            entries[i] = p;
            reds[i] = p_red;
            entries[i + 1] = 0;
            reds[i + 1] = false;
            out.push(Komposition::new(entries, reds).expect("slide keeps colors legal"));
        }
        if !p_red {
            for q in 1..p {
                let mut entries = b.entries().to_vec();
                let mut reds = b.reds().to_vec();
                entries[i] = q;
                entries[i + 1] = p - q;
                out.push(Komposition::new(entries.clone(), reds.clone()).expect("black split is legal"));
                // same q but with one extra unit on the right, colored red
                entries[i + 1] = p - q + 1;
                reds[i + 1] = true;
                out.push(Komposition::new(entries, reds).expect("red split is legal"));
            }
            // the red split also allows q = p, r = 1
            let mut entries = b.entries().to_vec();
            let mut reds = b.reds().to_vec();
            entries[i] = p;
            entries[i + 1] = 1;
            reds[i + 1] = true;
            out.push(Komposition::new(entries, reds).expect("red split is legal"));
        }
    }
    out
}

fn closure(start: Komposition, forbid_slide_from: Option<&[bool]>) -> BTreeSet<Komposition> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(b) = queue.pop_front() {
        for s in successors(&b, forbid_slide_from) {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen
}

/// The glide set of `a`, by closing the all-black start under the local moves.
pub fn enumerate_glides(a: &WeakComposition) -> GlideSet {
    let members = closure(Komposition::from_black(a), None);
    GlideSet { base: a.clone(), members }
}

/// The mesonic glide set of `a`, via the move closure with slides out of
/// block-final positions suppressed.
pub fn mesonic_glides_by_moves(a: &WeakComposition) -> GlideSet {
    let mut forbid = vec![false; a.len()];
    for &p in &nonzero_positions(a) {
        forbid[p] = true;
    }
    let members = closure(Komposition::from_black(a), Some(&forbid));
    GlideSet { base: a.clone(), members }
}

/// Block boundary check: entries of `b` in `[lo, hi)` must sum (minus red
/// count) to `target` and open with a black entry.
fn block_ok(b: &Komposition, lo: usize, hi: usize, target: u32) -> bool {
    let mut sum: i64 = 0;
    let mut first_nonzero_black = None;
    for i in lo..hi {
        let (v, red) = b.entry(i);
        sum += v as i64;
        if red {
            sum -= 1;
        }
        if v > 0 && first_nonzero_black.is_none() {
            first_nonzero_black = Some(!red);
        }
    }
    sum == target as i64 && first_nonzero_black == Some(true)
}

/// Direct membership test for the glide set of `a`.
pub fn is_glide_of(b: &Komposition, a: &WeakComposition) -> bool {
    if b.len() != a.len() {
        return false;
    }
    let npos = nonzero_positions(a);
    if b.weight() as i64 - b.excess() as i64 != a.weight() as i64 {
        return false;
    }
    // last position that must be inside some block
    let last_nonzero = match b.entries().iter().rposition(|&v| v > 0) {
        None => return npos.is_empty(),
        Some(p) => p,
    };
    if npos.is_empty() {
        return false;
    }
    // depth-first over the cut points; cut j must satisfy cut <= npos[j] + 1
    fn rec(b: &Komposition, a: &WeakComposition, npos: &[usize], j: usize, lo: usize, last: usize) -> bool {
        if j == npos.len() {
            return lo > last;
        }
        let target = a.0[npos[j]];
        for hi in (lo + 1)..=(npos[j] + 1) {
            if block_ok(b, lo, hi, target) && rec(b, a, npos, j + 1, hi, last) {
                return true;
            }
        }
        false
    }
    rec(b, a, &npos, 0, 0, last_nonzero)
}

/// Direct membership test for the mesonic glide set of `a`.
pub fn is_mesonic_glide_of(b: &Komposition, a: &WeakComposition) -> bool {
    if b.len() != a.len() {
        return false;
    }
    let npos = nonzero_positions(a);
    let mut lo = 0usize;
    for &p in &npos {
        let hi = p + 1;
        if !block_ok(b, lo, hi, a.0[p]) {
            return false;
        }
        if b.entry(p).0 == 0 {
            return false;
        }
        lo = hi;
    }
    b.entries()[lo..].iter().all(|&v| v == 0)
}

/// Enumerates one block's colored sequences: length `len`, entry sum minus red
/// count equal to `target`, opening black, closing nonzero.
fn block_sequences(len: usize, target: u32) -> Vec<(Vec<u32>, Vec<bool>)> {
    let mut out = Vec::new();
    let mut entries = vec![0u32; len];
    let mut reds = vec![false; len];
    fn rec(
        pos: usize,
        rem: u32,
        seen_black: bool,
        len: usize,
        entries: &mut Vec<u32>,
        reds: &mut Vec<bool>,
        out: &mut Vec<(Vec<u32>, Vec<bool>)>,
    ) {
        if pos == len {
            if rem == 0 && entries[len - 1] > 0 {
                out.push((entries.clone(), reds.clone()));
            }
            return;
        }
        // zero entry (not allowed in the final position)
        if pos + 1 < len {
            entries[pos] = 0;
            reds[pos] = false;
            rec(pos + 1, rem, seen_black, len, entries, reds, out);
        }
        for v in 1..=rem {
            entries[pos] = v;
            reds[pos] = false;
            rec(pos + 1, rem - v, true, len, entries, reds, out);
        }
        if seen_black {
            for v in 1..=rem + 1 {
                entries[pos] = v;
                reds[pos] = true;
                rec(pos + 1, rem + 1 - v, true, len, entries, reds, out);
            }
        }
        entries[pos] = 0;
        reds[pos] = false;
    }
    if len > 0 {
        rec(0, target, false, len, &mut entries, &mut reds, &mut out);
    }
    out
}

/// The mesonic glide set of `a`, built block by block.
pub fn enumerate_mesonic_glides(a: &WeakComposition) -> GlideSet {
    let n = a.len();
    let npos = nonzero_positions(a);
    let mut partials: Vec<(Vec<u32>, Vec<bool>)> = vec![(Vec::new(), Vec::new())];
    let mut lo = 0usize;
    for &p in &npos {
        let hi = p + 1;
        let blocks = block_sequences(hi - lo, a.0[p]);
        let mut next = Vec::with_capacity(partials.len() * blocks.len());
        for (pe, pr) in &partials {
            for (be, br) in &blocks {
                let mut e = pe.clone();
                let mut r = pr.clone();
                e.extend_from_slice(be);
                r.extend_from_slice(br);
                next.push((e, r));
            }
        }
        partials = next;
        lo = hi;
    }
    let members = partials
        .into_iter()
        .map(|(mut e, mut r)| {
            e.resize(n, 0);
            r.resize(n, false);
            Komposition::new(e, r).expect("block sequences never color a zero")
        })
        .collect();
    GlideSet { base: a.clone(), members }
}

/// The glide polynomial of `a`.
pub fn glide_poly(a: &WeakComposition) -> BetaPolynomial {
    enumerate_glides(a).poly()
}

/// The kaon polynomial of `a`: the mesonic glide generating function.
pub fn kaon_poly(a: &WeakComposition) -> BetaPolynomial {
    enumerate_mesonic_glides(a).poly()
}

/// The bases indexing the kaon expansion of the glide polynomial of `a`:
/// every way of moving the nonzero entries of `a` leftward, keeping their
/// order, without passing position bounds.
pub fn glide_to_kaon_placements(a: &WeakComposition) -> Vec<WeakComposition> {
    let n = a.len();
    let npos = nonzero_positions(a);
    let values: Vec<u32> = npos.iter().map(|&p| a.0[p]).collect();
    let mut out = Vec::new();
    let mut slots = vec![0usize; npos.len()];
    fn rec(
        j: usize,
        lo: usize,
        n: usize,
        npos: &[usize],
        values: &[u32],
        slots: &mut Vec<usize>,
        out: &mut Vec<WeakComposition>,
    ) {
        if j == npos.len() {
            let mut b = vec![0u32; n];
            for (k, &s) in slots.iter().enumerate() {
                b[s] = values[k];
            }
            out.push(WeakComposition(b));
            return;
        }
        for s in lo..=npos[j] {
            slots[j] = s;
            rec(j + 1, s + 1, n, npos, values, slots, out);
        }
    }
    rec(0, 0, n, &npos, &values, &mut slots, &mut out);
    out
}

/// The glide polynomial written in the kaon basis: every placement appears
/// with coefficient 1.
pub fn glide_to_kaon_expansion(a: &WeakComposition) -> BTreeMap<WeakComposition, ZBeta> {
    glide_to_kaon_placements(a).into_iter().map(|b| (b, ZBeta::one())).collect()
}

/// Sanity identity: the glide polynomial equals the sum of the kaon
/// polynomials over its placements.
pub fn check_glide_kaon_identity(a: &WeakComposition) -> Result<bool> {
    let mut sum = BetaPolynomial::zero(a.len());
    for b in glide_to_kaon_placements(a) {
        sum = sum.add(&kaon_poly(&b))?;
    }
    Ok(sum == glide_poly(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::parse_composition;
    use crate::composition::Parsed;

    fn wc(v: &[u32]) -> WeakComposition {
        WeakComposition(v.to_vec())
    }

    fn kk(s: &str) -> Komposition {
        match parse_composition(s).unwrap() {
            Parsed::Colored(k) => k,
            Parsed::Weak(a) => Komposition::from_black(&a),
        }
    }

    /// Builds a polynomial from (beta, coeff, digit-string) rows.
    fn poly_from_table(n: usize, rows: &[(u32, i64, &str)]) -> BetaPolynomial {
        let mut p = BetaPolynomial::zero(n);
        for &(beta, coeff, digits) in rows {
            let exps: Vec<u32> = digits.chars().map(|c| c.to_digit(10).unwrap()).collect();
            assert_eq!(exps.len(), n);
            p.add_term(Term { beta, exps }, BigInt::from(coeff));
        }
        p
    }

    #[test]
    fn smallest_glide_set() {
        let g = enumerate_glides(&wc(&[0, 1]));
        assert_eq!(g.len(), 3);
        assert!(g.contains(&kk("0,1")));
        assert!(g.contains(&kk("1,0")));
        assert!(g.contains(&kk("1,1r")));
        for m in g.iter() {
            assert!(is_glide_of(m, g.base()));
        }
        assert!(!is_glide_of(&kk("1,1"), &wc(&[0, 1])));

        let m = enumerate_mesonic_glides(&wc(&[0, 1]));
        assert_eq!(m.len(), 2);
        assert!(m.contains(&kk("0,1")));
        assert!(m.contains(&kk("1,1r")));
        assert!(!m.contains(&kk("1,0")));
    }

    #[test]
    fn glide_membership_on_a_long_base() {
        let a = wc(&[0, 2, 0, 0, 2, 0, 1]);
        let g = enumerate_glides(&a);
        let b1 = kk("1,2r,0,2,0,1,1r");
        let b2 = kk("2,1,2r,1r,1r,1,0");
        assert!(is_glide_of(&b1, &a));
        assert!(is_glide_of(&b2, &a));
        assert!(g.contains(&b1));
        assert!(g.contains(&b2));
        // breaking a color or a value breaks membership
        assert!(!is_glide_of(&kk("1,2r,0,2,0,1,1"), &a));
        assert!(!is_glide_of(&kk("2r,1,2,1r,1r,1,0"), &a));
        // first block cannot reach its target sum by position 2
        assert!(!is_glide_of(&kk("0,1,0,2,0,1,2r"), &a));
        // shrinking the third block instead of recoloring stays inside the set
        assert!(is_glide_of(&kk("1,2r,0,2,0,0,1"), &a));
    }

    #[test]
    fn glide_polynomial_of_0201() {
        let p = glide_poly(&wc(&[0, 2, 0, 1]));
        let expected = poly_from_table(
            4,
            &[
                (0, 1, "0201"),
                (0, 1, "1101"),
                (0, 1, "0210"),
                (0, 1, "1110"),
                (0, 1, "2001"),
                (0, 1, "2010"),
                (0, 1, "2100"),
                (1, 1, "0211"),
                (1, 1, "1111"),
                (1, 1, "1201"),
                (1, 1, "1210"),
                (1, 1, "2011"),
                (1, 2, "2101"),
                (1, 2, "2110"),
                (2, 1, "1211"),
                (2, 2, "2111"),
            ],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn kaon_polynomial_of_0302() {
        let p = kaon_poly(&wc(&[0, 3, 0, 2]));
        let rows: Vec<(u32, i64, &str)> = [
            (0, vec!["0302", "0311", "1202", "1211", "2102", "2111"]),
            (
                1,
                vec![
                    "0312", "0321", "1212", "1221", "1302", "1311", "2112", "2121", "2202", "2211",
                    "3102", "3111",
                ],
            ),
            (2, vec!["1312", "1321", "2212", "2221", "3112", "3121"]),
        ]
        .into_iter()
        .flat_map(|(beta, keys)| keys.into_iter().map(move |k| (beta, 1i64, k)))
        .collect();
        assert_eq!(p, poly_from_table(4, &rows));
        assert_eq!(p.num_terms(), 24);
    }

    #[test]
    fn mesonic_membership_examples() {
        let a = wc(&[0, 3, 0, 2]);
        assert!(is_mesonic_glide_of(&kk("2,1,1,2r"), &a));
        let g = kk("3,1,0,2r");
        assert!(is_glide_of(&g, &a));
        assert!(!is_mesonic_glide_of(&g, &a));
        // every mesonic glide is a glide, never conversely here
        let mesonic = enumerate_mesonic_glides(&a);
        let glides = enumerate_glides(&a);
        assert!(mesonic.iter().all(|b| glides.contains(b)));
        assert!(glides.len() > mesonic.len());
    }

    #[test]
    fn mesonic_routes_agree() {
        for a in [wc(&[0, 1]), wc(&[0, 2]), wc(&[0, 0, 2]), wc(&[0, 3, 0, 2]), wc(&[1, 0, 2, 1])] {
            let direct = enumerate_mesonic_glides(&a);
            let moved = mesonic_glides_by_moves(&a);
            assert_eq!(direct, moved, "mesonic routes disagree for {}", a);
            for b in direct.iter() {
                assert!(is_mesonic_glide_of(b, &a));
            }
        }
    }

    #[test]
    fn kaon_of_002_doubles_a_monomial() {
        let p = kaon_poly(&wc(&[0, 0, 2]));
        assert_eq!(p.coeff(&[1, 1, 1], 1), BigInt::from(2));
    }

    #[test]
    fn all_zero_base_gives_constant_one() {
        assert_eq!(glide_poly(&wc(&[0, 0])), BetaPolynomial::one(2));
        assert_eq!(kaon_poly(&wc(&[0, 0])), BetaPolynomial::one(2));
        assert!(is_glide_of(&kk("0,0"), &wc(&[0, 0])));
        assert!(!is_glide_of(&kk("1,0"), &wc(&[0, 0])));
    }

    #[test]
    fn placements_expand_glides_into_kaons() {
        let a = wc(&[0, 2, 0, 1]);
        let placements = glide_to_kaon_placements(&a);
        assert_eq!(placements.len(), 5);
        assert!(placements.contains(&wc(&[2, 1, 0, 0])));
        assert!(placements.contains(&wc(&[0, 2, 0, 1])));
        assert!(check_glide_kaon_identity(&a).unwrap());
        assert!(check_glide_kaon_identity(&wc(&[1, 0, 2])).unwrap());
        assert!(check_glide_kaon_identity(&wc(&[0, 0, 3])).unwrap());
    }
}
