//! Brute-force oracles, written from the definitions with no shared logic
//! with the production code, compared against the library over a small grid
//! and against frozen counts.

use std::collections::BTreeSet;

use kpoly::glide::{enumerate_glides, enumerate_mesonic_glides, is_glide_of, is_mesonic_glide_of};
use kpoly::kohnert::drop_closure;
use kpoly::skyline::{enumerate_fillings, SetFilling, SkylineVariant};
use kpoly::{parse_composition, parse_weak, Komposition, Parsed, WeakComposition};

fn komp(s: &str) -> Komposition {
    match parse_composition(s).unwrap() {
        Parsed::Colored(k) => k,
        Parsed::Weak(a) => {
            let n = a.len();
            Komposition::new(a.0, vec![false; n]).unwrap()
        }
    }
}

/// Every composition with `len` entries summing to at most `max_weight`.
fn small_grid(max_len: usize, max_weight: u32) -> Vec<WeakComposition> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut cur = vec![0u32; len];
        loop {
            if cur.iter().sum::<u32>() <= max_weight {
                out.push(WeakComposition(cur.clone()));
            }
            let mut i = 0;
            while i < len && cur[i] == max_weight {
                cur[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
            cur[i] += 1;
        }
    }
    out
}

/// One colored block: sum of entries minus red count hits the target, the
/// first nonzero entry is black, the final entry is nonzero.
fn oracle_block_ok(entries: &[u32], reds: &[bool], lo: usize, hi: usize, target: u32) -> bool {
    if hi <= lo || entries[hi - 1] == 0 {
        return false;
    }
    let sum: i64 = entries[lo..hi].iter().map(|&v| v as i64).sum();
    let red_count = reds[lo..hi].iter().filter(|&&r| r).count() as i64;
    if sum - red_count != target as i64 {
        return false;
    }
    match (lo..hi).find(|&i| entries[i] > 0) {
        Some(first) => !reds[first],
        None => false,
    }
}

/// Membership by dynamic programming over block cut points: reached[p] says
/// the first j blocks can cover exactly positions 0..p.
fn oracle_is_glide(b: &Komposition, a: &WeakComposition) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let entries = b.entries();
    let reds: Vec<bool> = (0..n).map(|i| b.entry(i).1).collect();
    let targets: Vec<(usize, u32)> =
        a.0.iter().enumerate().filter(|(_, &v)| v > 0).map(|(i, &v)| (i, v)).collect();
    let mut reached = vec![false; n + 1];
    reached[0] = true;
    for &(pos, target) in &targets {
        let mut next = vec![false; n + 1];
        // a block for target a[pos] must end at or before position pos
        for hi in 1..=pos + 1 {
            for lo in 0..hi {
                if reached[lo] && oracle_block_ok(entries, &reds, lo, hi, target) {
                    next[hi] = true;
                }
            }
        }
        reached = next;
    }
    (0..=n).any(|p| reached[p] && entries[p..].iter().all(|&v| v == 0))
}

/// Mesonic membership: the blocks are pinned to end at the nonzero positions
/// of `a`, and the entry at each of those positions stays nonzero.
fn oracle_is_mesonic(b: &Komposition, a: &WeakComposition) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let entries = b.entries();
    let reds: Vec<bool> = (0..n).map(|i| b.entry(i).1).collect();
    let mut lo = 0usize;
    for (pos, &target) in a.0.iter().enumerate() {
        if target == 0 {
            continue;
        }
        if entries[pos] == 0 || !oracle_block_ok(entries, &reds, lo, pos + 1, target) {
            return false;
        }
        lo = pos + 1;
    }
    entries[lo..].iter().all(|&v| v == 0)
}

/// Every komposition of length n over entries up to `bound`, each nonzero
/// entry black or red.
fn all_kompositions(n: usize, bound: u32) -> Vec<Komposition> {
    let options = 2 * bound as usize + 1;
    let mut odometer = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let mut entries = Vec::with_capacity(n);
        let mut reds = Vec::with_capacity(n);
        for &o in &odometer {
            if o == 0 {
                entries.push(0);
                reds.push(false);
            } else {
                entries.push(((o - 1) / 2 + 1) as u32);
                reds.push(o % 2 == 0);
            }
        }
        out.push(Komposition::new(entries, reds).unwrap());
        let mut i = 0;
        while i < n && odometer[i] + 1 == options {
            odometer[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        odometer[i] += 1;
    }
    out
}

#[test]
fn glide_sets_match_the_condition_oracle() {
    for a in small_grid(4, 4) {
        let bound = a.weight() + 1;
        let by_oracle: BTreeSet<Komposition> = all_kompositions(a.len(), bound)
            .into_iter()
            .filter(|b| oracle_is_glide(b, &a))
            .collect();
        let by_library: BTreeSet<Komposition> = enumerate_glides(&a).iter().cloned().collect();
        assert_eq!(by_oracle, by_library, "glides of {}", a);
        for b in &by_oracle {
            assert!(is_glide_of(b, &a), "{} should be a glide of {}", b, a);
        }
    }
}

#[test]
fn mesonic_sets_match_the_condition_oracle() {
    for a in small_grid(4, 4) {
        let bound = a.weight() + 1;
        let by_oracle: BTreeSet<Komposition> = all_kompositions(a.len(), bound)
            .into_iter()
            .filter(|b| oracle_is_mesonic(b, &a))
            .collect();
        let by_library: BTreeSet<Komposition> =
            enumerate_mesonic_glides(&a).iter().cloned().collect();
        assert_eq!(by_oracle, by_library, "mesonic glides of {}", a);
        for b in &by_oracle {
            assert!(is_mesonic_glide_of(b, &a), "{} should be mesonic for {}", b, a);
        }
    }
}

#[test]
fn frozen_glide_memberships_and_counts() {
    let a = parse_weak("0,2,0,0,2,0,1").unwrap();
    for member in ["1,2r,0,2,0,1,1r", "2,1,2r,1r,1r,1,0"] {
        let b = komp(member);
        assert!(oracle_is_glide(&b, &a), "{} is a glide of {}", member, a);
        assert!(is_glide_of(&b, &a));
    }

    let a = parse_weak("0,3,0,2").unwrap();
    let mesonic = komp("2,1,1,2r");
    let not_mesonic = komp("3,1,0,2r");
    assert!(oracle_is_mesonic(&mesonic, &a) && is_mesonic_glide_of(&mesonic, &a));
    assert!(oracle_is_glide(&not_mesonic, &a) && is_glide_of(&not_mesonic, &a));
    assert!(!oracle_is_mesonic(&not_mesonic, &a) && !is_mesonic_glide_of(&not_mesonic, &a));
    assert_eq!(enumerate_mesonic_glides(&a).len(), 24);

    assert_eq!(enumerate_glides(&parse_weak("0,1").unwrap()).len(), 3);
    assert_eq!(enumerate_mesonic_glides(&parse_weak("0,1").unwrap()).len(), 2);
    assert_eq!(enumerate_glides(&parse_weak("2,0,0").unwrap()).len(), 1);
    assert_eq!(enumerate_glides(&parse_weak("0,2,0,1").unwrap()).len(), 19);
    assert_eq!(enumerate_mesonic_glides(&parse_weak("0,2,0,1").unwrap()).len(), 8);
}

/// Validity re-derived from the definitions: entry bounds, distinct columns,
/// weakly decreasing rows, no coinversion triple, free entries in the least
/// receptive anchor's box, and the variant's first-column rule.
fn oracle_valid(t: &SetFilling, variant: SkylineVariant) -> bool {
    let n = t.rows.len();
    let anchor = |r: usize, c: usize| -> Option<u32> {
        if c == 0 {
            t.basement.as_ref().map(|b| b[r])
        } else {
            t.rows[r].get(c - 1).map(|s| s[0])
        }
    };
    // sets are nonempty, strictly decreasing, with positive bounded entries
    for (r, row) in t.rows.iter().enumerate() {
        for set in row {
            if set.is_empty() || set.windows(2).any(|w| w[0] <= w[1]) {
                return false;
            }
            let bound = match variant {
                SkylineVariant::Atom | SkylineVariant::Quasi => (r + 1) as u32,
                SkylineVariant::Key => (n - r) as u32,
            };
            if set[0] > bound || set[set.len() - 1] == 0 {
                return false;
            }
        }
    }
    match variant {
        SkylineVariant::Atom | SkylineVariant::Quasi => {
            if t.basement.is_some() {
                return false;
            }
        }
        SkylineVariant::Key => {
            let Some(b) = &t.basement else { return false };
            if b.len() != n || (0..n).any(|r| b[r] != (n - r) as u32) {
                return false;
            }
        }
    }
    // first-column rule per variant
    let mut prev_first: Option<u32> = None;
    for r in 0..n {
        let Some(set) = t.rows[r].first() else { continue };
        match variant {
            SkylineVariant::Atom => {
                if set[0] != (r + 1) as u32 {
                    return false;
                }
            }
            SkylineVariant::Quasi => {
                if let Some(p) = prev_first {
                    if set[0] <= p {
                        return false;
                    }
                }
                prev_first = Some(set[0]);
            }
            SkylineVariant::Key => {}
        }
    }
    // columns hold distinct entries
    let max_len = t.rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for c in 0..max_len {
        let mut seen = BTreeSet::new();
        for row in &t.rows {
            if let Some(set) = row.get(c) {
                for &v in set {
                    if !seen.insert(v) {
                        return false;
                    }
                }
            }
        }
    }
    // rows weakly decrease as sets: min of the left bounds the max of the right
    for (r, row) in t.rows.iter().enumerate() {
        if let (Some(b), Some(set)) = (&t.basement, row.first()) {
            if b[r] < set[0] {
                return false;
            }
        }
        for c in 1..row.len() {
            if *row[c - 1].last().unwrap() < row[c][0] {
                return false;
            }
        }
    }
    // no coinversion triple, basement included for the basement variant
    let c_start = if t.basement.is_some() { 0 } else { 1 };
    for lower in 0..n {
        for higher in lower + 1..n {
            let len_lo = t.rows[lower].len();
            let len_hi = t.rows[higher].len();
            for c in c_start..=max_len {
                let (vb, va, vg) = if len_lo >= len_hi {
                    match (anchor(lower, c), anchor(lower, c + 1), anchor(higher, c + 1)) {
                        (Some(b), Some(a), Some(g)) => (b, a, g),
                        _ => continue,
                    }
                } else {
                    match (anchor(higher, c), anchor(higher, c + 1), anchor(lower, c)) {
                        (Some(b), Some(a), Some(g)) => (b, a, g),
                        _ => continue,
                    }
                };
                if va <= vg && vg <= vb {
                    return false;
                }
            }
        }
    }
    // every free entry sits with the least receptive anchor of its column
    for (r, row) in t.rows.iter().enumerate() {
        for (c, set) in row.iter().enumerate() {
            for &v in &set[1..] {
                let mut receiver: Option<(u32, usize)> = None;
                for (r2, row2) in t.rows.iter().enumerate() {
                    let Some(set2) = row2.get(c) else { continue };
                    if set2[0] <= v {
                        continue;
                    }
                    if let Some(right) = row2.get(c + 1) {
                        if right[0] > v {
                            continue;
                        }
                    }
                    if receiver.map_or(true, |(a, _)| set2[0] < a) {
                        receiver = Some((set2[0], r2));
                    }
                }
                if receiver.map(|(_, r2)| r2) != Some(r) {
                    return false;
                }
            }
        }
    }
    true
}

/// Box-by-box search over arbitrary set assignments, filtered by the oracle
/// validity predicate.
fn oracle_fillings(a: &WeakComposition, variant: SkylineVariant) -> Vec<SetFilling> {
    let n = a.len();
    let shape: Vec<usize> = match variant {
        SkylineVariant::Key => a.0.iter().rev().map(|&v| v as usize).collect(),
        _ => a.0.iter().map(|&v| v as usize).collect(),
    };
    let basement: Option<Vec<u32>> = match variant {
        SkylineVariant::Key => Some((0..n).map(|r| (n - r) as u32).collect()),
        _ => None,
    };
    let sets: Vec<Vec<u32>> = (1u32..1 << n)
        .map(|mask| (1..=n as u32).rev().filter(|v| mask >> (v - 1) & 1 == 1).collect())
        .collect();
    let boxes: Vec<(usize, usize)> =
        (0..n).flat_map(|r| (0..shape[r]).map(move |c| (r, c))).collect();
    let mut rows: Vec<Vec<Vec<u32>>> = shape.iter().map(|&l| vec![Vec::new(); l]).collect();
    let mut out = Vec::new();
    search(0, &boxes, &sets, &basement, variant, &mut rows, &mut out);
    return out;

    fn search(
        pos: usize,
        boxes: &[(usize, usize)],
        sets: &[Vec<u32>],
        basement: &Option<Vec<u32>>,
        variant: SkylineVariant,
        rows: &mut Vec<Vec<Vec<u32>>>,
        out: &mut Vec<SetFilling>,
    ) {
        if pos == boxes.len() {
            let t = SetFilling { rows: rows.clone(), basement: basement.clone() };
            if oracle_valid(&t, variant) {
                out.push(t);
            }
            return;
        }
        let (r, c) = boxes[pos];
        for s in sets {
            // cheap cut: the row rule already fails against the left neighbor
            if c > 0 && *rows[r][c - 1].last().unwrap() < s[0] {
                continue;
            }
            rows[r][c] = s.clone();
            search(pos + 1, boxes, sets, basement, variant, rows, out);
            rows[r][c].clear();
        }
    }
}

#[test]
fn filling_enumeration_matches_the_oracle() {
    for a in small_grid(4, 4) {
        for variant in [SkylineVariant::Atom, SkylineVariant::Quasi, SkylineVariant::Key] {
            let mut by_oracle = oracle_fillings(&a, variant);
            let mut by_library = enumerate_fillings(&a, variant);
            by_oracle.sort();
            by_library.sort();
            assert_eq!(by_oracle, by_library, "{:?} fillings of {}", variant, a);
        }
    }
}

#[test]
fn frozen_filling_counts() {
    let a = parse_weak("1,0,2").unwrap();
    assert_eq!(oracle_fillings(&a, SkylineVariant::Atom).len(), 8);
    assert_eq!(oracle_fillings(&a, SkylineVariant::Quasi).len(), 10);
    assert_eq!(oracle_fillings(&a, SkylineVariant::Key).len(), 13);
    let anchor_only =
        oracle_fillings(&a, SkylineVariant::Key).iter().filter(|t| t.excess() == 0).count();
    assert_eq!(anchor_only, 5);

    let a = parse_weak("0,2,0,1").unwrap();
    assert_eq!(enumerate_fillings(&a, SkylineVariant::Atom).len(), 12);
    assert_eq!(enumerate_fillings(&a, SkylineVariant::Quasi).len(), 25);
    assert_eq!(enumerate_fillings(&a, SkylineVariant::Key).len(), 27);
}

/// A fresh drop-move closure on plain coordinate sets: the rightmost box of a
/// row falls to the highest empty cell below it in its column.
fn oracle_drop_closure(a: &WeakComposition) -> BTreeSet<BTreeSet<(u32, u32)>> {
    let start: BTreeSet<(u32, u32)> = a
        .0
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| (1..=v).map(move |c| (i as u32 + 1, c)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut queue = vec![start.clone()];
    seen.insert(start);
    while let Some(d) = queue.pop() {
        let rows: BTreeSet<u32> = d.iter().map(|&(r, _)| r).collect();
        for &r in &rows {
            let cmax = d.iter().filter(|&&(br, _)| br == r).map(|&(_, c)| c).max().unwrap();
            let landing = (1..r).rev().find(|&r2| !d.contains(&(r2, cmax)));
            if let Some(r2) = landing {
                let mut next = d.clone();
                next.remove(&(r, cmax));
                next.insert((r2, cmax));
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }
    seen
}

#[test]
fn drop_closures_match_the_oracle() {
    for a in small_grid(4, 4) {
        let by_oracle = oracle_drop_closure(&a);
        let by_library: BTreeSet<BTreeSet<(u32, u32)>> =
            drop_closure(&a).iter().map(|d| d.boxes().cloned().collect()).collect();
        assert_eq!(by_oracle, by_library, "drop closure of {}", a);
    }
    assert_eq!(oracle_drop_closure(&parse_weak("1,0,2").unwrap()).len(), 5);
    assert_eq!(oracle_drop_closure(&parse_weak("0,2,0,1").unwrap()).len(), 8);
}
