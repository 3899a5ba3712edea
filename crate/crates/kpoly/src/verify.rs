//! Identity suite: every combinatorial model in the crate is re-derived by an
//! independent route over a grid of small indices, and the two answers are
//! compared at exact integer equality.
//!
//! Each check is a closure over one grid index; failures carry the offending
//! index so a red report names a concrete counterexample.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::bigint::BigInt;
use num::traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composition::{Komposition, WeakComposition};
use crate::error::{Error, Result};
use crate::expand::{expand_in_basis, fallback_counts, monomial_cmp, ElementCache};
use crate::family::{
    family_poly, quasi_grothendieck_poly, stable_limit_check, symmetric_grothendieck_poly, Family,
};
use crate::glide::{
    check_glide_kaon_identity, enumerate_glides, enumerate_mesonic_glides, is_glide_of,
    mesonic_glides_by_moves,
};
use crate::kohnert::{
    bruhat_rearrangements, diagram_to_filling, drop_closure, drop_closure_poly,
    dominant_exchange_members, exchange_closure, key_filling_anchors_to_atom, key_filling_to_atom,
    key_filling_to_diagram, lascoux_to_atom_expansion, lascoux_to_quasilascoux_expansion,
    nearest_left_justified, thread_decomposition,
};
use crate::scan::{grid_compositions, ScanBounds};
use crate::skyline::{
    atom_to_kaon_expansion, basement_for, destandardize, destandardize_with, enumerate_fillings,
    fiber_reconstruct, filling_poly, highest_fillings, is_valid_filling,
    quasilascoux_to_glide_expansion, shape_for, HighestMode, SetFilling, SkylineVariant,
};

/// Outcome of one named check across the whole grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    /// Grid indices the check ran on.
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    /// "ok", or the first counterexample found.
    pub detail: String,
}

/// The full suite result, plus how often the expansion engine had to fall
/// back to linear algebra while it ran.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
    pub fallbacks: Vec<(String, usize)>,
}

impl VerifyReport {
    /// True when every check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs one check over the grid in parallel and summarizes the failures.
fn grid_check<F>(
    pool: &rayon::ThreadPool,
    grid: &[WeakComposition],
    name: &str,
    f: F,
) -> VerifyCheck
where
    F: Fn(&WeakComposition) -> std::result::Result<(), String> + Sync,
{
    let mut failures: Vec<(usize, String)> = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .filter_map(|(i, a)| f(a).err().map(|e| (i, format!("{}: {}", a, e))))
            .collect()
    });
    failures.sort();
    VerifyCheck {
        name: name.to_string(),
        cases: grid.len(),
        failures: failures.len(),
        passed: failures.is_empty(),
        detail: failures
            .first()
            .map(|(_, e)| e.clone())
            .unwrap_or_else(|| "ok".to_string()),
    }
}

/// All nonempty subsets of 1..=n as decreasing lists.
fn all_box_sets(n: usize) -> Vec<Vec<u32>> {
    (1u32..1 << n)
        .map(|mask| {
            (1..=n as u32)
                .rev()
                .filter(|v| mask >> (v - 1) & 1 == 1)
                .collect()
        })
        .collect()
}

/// Brute-force filling search: assigns an arbitrary set to every box in row
/// order, prunes with the cheap local rules, and keeps what the full validity
/// predicate accepts.  No shared logic with the production enumerator beyond
/// that final predicate.
fn naive_fillings(a: &WeakComposition, variant: SkylineVariant) -> Vec<SetFilling> {
    let n = a.len();
    let shape = shape_for(a, variant);
    let basement = basement_for(n, variant);
    let sets = all_box_sets(n);
    let boxes: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..shape[r]).map(move |c| (r, c)))
        .collect();
    let mut rows: Vec<Vec<Vec<u32>>> = shape.iter().map(|&len| vec![Vec::new(); len]).collect();
    let mut out = Vec::new();

    fn place(
        pos: usize,
        boxes: &[(usize, usize)],
        sets: &[Vec<u32>],
        shape: &[usize],
        basement: &Option<Vec<u32>>,
        variant: SkylineVariant,
        rows: &mut Vec<Vec<Vec<u32>>>,
        out: &mut Vec<SetFilling>,
    ) {
        if pos == boxes.len() {
            let candidate = SetFilling { rows: rows.clone(), basement: basement.clone() };
            if is_valid_filling(&candidate, variant) {
                out.push(candidate);
            }
            return;
        }
        let (r, c) = boxes[pos];
        'next: for s in sets {
            let anchor = s[0];
            if c == 0 {
                match variant {
                    SkylineVariant::Atom if anchor != (r + 1) as u32 => continue,
                    SkylineVariant::Quasi if anchor > (r + 1) as u32 => continue,
                    SkylineVariant::Key if anchor > basement.as_ref().unwrap()[r] => continue,
                    _ => {}
                }
            } else {
                // weakly decreasing along the row: min of the left set bounds the max here
                let left = &rows[r][c - 1];
                if *left.last().unwrap() < anchor {
                    continue;
                }
            }
            for (r2, row) in rows.iter().enumerate().take(r) {
                if shape[r2] > c && row[c].iter().any(|v| s.contains(v)) {
                    continue 'next;
                }
            }
            rows[r][c] = s.clone();
            place(pos + 1, boxes, sets, shape, basement, variant, rows, out);
            rows[r][c].clear();
        }
    }

    place(0, &boxes, &sets, &shape, &basement, variant, &mut rows, &mut out);
    out
}

/// Deterministic pseudo-random picker state for order-independence checks.
fn lcg_next(state: &mut u64) -> u64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    *state >> 33
}

fn glide_closure_vs_conditions(a: &WeakComposition) -> std::result::Result<(), String> {
    let closure = enumerate_glides(a);
    let n = a.len();
    let bound = a.weight() + 1;
    // every (value, color) word over a safe alphabet, filtered by the condition oracle
    let mut satisfied: BTreeSet<Komposition> = BTreeSet::new();
    let options = 2 * bound as usize + 1;
    let mut odometer = vec![0usize; n];
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
        let b = Komposition::new(entries, reds).map_err(|e| e.to_string())?;
        if is_glide_of(&b, a) {
            satisfied.insert(b);
        }
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
    let from_moves: BTreeSet<Komposition> = closure.iter().cloned().collect();
    if satisfied != from_moves {
        return Err(format!(
            "condition oracle found {} members, moves found {}",
            satisfied.len(),
            from_moves.len()
        ));
    }
    Ok(())
}

fn mesonic_routes_agree(a: &WeakComposition) -> std::result::Result<(), String> {
    let by_moves: BTreeSet<Komposition> = mesonic_glides_by_moves(a).iter().cloned().collect();
    let direct: BTreeSet<Komposition> = enumerate_mesonic_glides(a).iter().cloned().collect();
    if by_moves != direct {
        return Err(format!(
            "moves route has {} members, block route has {}",
            by_moves.len(),
            direct.len()
        ));
    }
    Ok(())
}

fn fillings_match_naive(a: &WeakComposition) -> std::result::Result<(), String> {
    for variant in [SkylineVariant::Atom, SkylineVariant::Quasi, SkylineVariant::Key] {
        let mut naive = naive_fillings(a, variant);
        let mut fast = enumerate_fillings(a, variant);
        naive.sort();
        fast.sort();
        if naive != fast {
            return Err(format!(
                "{:?} naive search found {} fillings, enumerator found {}",
                variant,
                naive.len(),
                fast.len()
            ));
        }
    }
    Ok(())
}

fn members_lead_with_index(a: &WeakComposition) -> std::result::Result<(), String> {
    for family in [
        Family::Glide,
        Family::Kaon,
        Family::LascouxAtom,
        Family::QuasiLascoux,
        Family::Lascoux,
    ] {
        let p = family_poly(family, a, None).map_err(|e| e.to_string())?;
        let lead = p
            .terms()
            .max_by(|x, y| monomial_cmp(x.0.beta, &x.0.exps, y.0.beta, &y.0.exps))
            .ok_or_else(|| format!("{} member is zero", family))?;
        if lead.0.beta != 0 || lead.0.exps != a.0 || lead.1 != &BigInt::one() {
            return Err(format!(
                "{} member leads with b^{} x^{:?} coeff {}",
                family, lead.0.beta, lead.0.exps, lead.1
            ));
        }
    }
    Ok(())
}

fn engine_matches_combinatorics(
    a: &WeakComposition,
    cache: &ElementCache,
) -> std::result::Result<(), String> {
    let pairs: [(Family, Family, BTreeMap<WeakComposition, crate::polynomial::ZBeta>); 4] = [
        (Family::LascouxAtom, Family::Kaon, atom_to_kaon_expansion(a)),
        (Family::QuasiLascoux, Family::Glide, quasilascoux_to_glide_expansion(a)),
        (Family::Lascoux, Family::LascouxAtom, lascoux_to_atom_expansion(a)),
        (Family::Lascoux, Family::QuasiLascoux, lascoux_to_quasilascoux_expansion(a)),
    ];
    for (source, basis, expected) in pairs {
        let p = family_poly(source, a, None).map_err(|e| e.to_string())?;
        let got = expand_in_basis(&p, basis, cache).map_err(|e| e.to_string())?;
        if got.terms != expected {
            return Err(format!(
                "{} member expands into {} differently by engine ({} terms) and rule ({} terms)",
                source,
                basis,
                got.terms.len(),
                expected.len()
            ));
        }
    }
    Ok(())
}

fn fibers_are_indexed_by_colored_weights(a: &WeakComposition) -> std::result::Result<(), String> {
    for mode in [HighestMode::Meson, HighestMode::QuasiYamanouchi] {
        let fillings = enumerate_fillings(a, mode.variant());
        let mut fibers: BTreeMap<SetFilling, BTreeMap<Komposition, SetFilling>> = BTreeMap::new();
        for t in &fillings {
            let (u, kwt) = destandardize(t, mode).map_err(|e| e.to_string())?;
            if kwt.underlying() != t.weight() {
                return Err(format!("colored weight of {:?} forgot the start weight", mode));
            }
            let lost = (t.num_entries() - u.num_entries()) as u32;
            if kwt.excess() != lost {
                return Err(format!(
                    "{:?} fiber index has excess {} but {} entries were deleted",
                    mode,
                    kwt.excess(),
                    lost
                ));
            }
            if fibers.entry(u).or_default().insert(kwt, t.clone()).is_some() {
                return Err(format!("{:?} fiber index repeated", mode));
            }
        }
        let expected: BTreeSet<SetFilling> = highest_fillings(a, mode).into_iter().collect();
        let got: BTreeSet<SetFilling> = fibers.keys().cloned().collect();
        if expected != got {
            return Err(format!(
                "{:?} highest forms disagree: {} reached, {} enumerated",
                mode,
                got.len(),
                expected.len()
            ));
        }
        for (u, fiber) in &fibers {
            let wt = u.weight();
            let index_set: BTreeSet<Komposition> = match mode {
                HighestMode::Meson => enumerate_mesonic_glides(&wt).iter().cloned().collect(),
                HighestMode::QuasiYamanouchi => enumerate_glides(&wt).iter().cloned().collect(),
            };
            let keys: BTreeSet<Komposition> = fiber.keys().cloned().collect();
            if keys != index_set {
                return Err(format!(
                    "{:?} fiber over weight {} has {} members, index set has {}",
                    mode,
                    wt,
                    keys.len(),
                    index_set.len()
                ));
            }
            for (kwt, t) in fiber {
                let rebuilt = fiber_reconstruct(u, kwt, mode).map_err(|e| e.to_string())?;
                if &rebuilt != t {
                    return Err(format!(
                        "{:?} reconstruction of index {} found a different filling",
                        mode, kwt
                    ));
                }
            }
        }
    }
    Ok(())
}

fn raising_order_is_irrelevant(a: &WeakComposition) -> std::result::Result<(), String> {
    for mode in [HighestMode::Meson, HighestMode::QuasiYamanouchi] {
        for t in enumerate_fillings(a, mode.variant()) {
            let reference = destandardize(&t, mode).map_err(|e| e.to_string())?;
            for seed in [1u64, 99] {
                let mut state = seed;
                let shuffled = destandardize_with(&t, mode, |eligible| {
                    eligible[lcg_next(&mut state) as usize % eligible.len()]
                })
                .map_err(|e| e.to_string())?;
                if shuffled != reference {
                    return Err(format!("{:?} outcome depended on the raising order", mode));
                }
            }
        }
    }
    Ok(())
}

fn exchange_closure_vs_embeddings(a: &WeakComposition) -> std::result::Result<(), String> {
    let closure = exchange_closure(a);
    let by_order = bruhat_rearrangements(a).map_err(|e| e.to_string())?;
    if closure != by_order {
        return Err(format!(
            "swap closure has {} members, order filter has {}",
            closure.len(),
            by_order.len()
        ));
    }
    for b in dominant_exchange_members(a) {
        if !closure.contains(&b) {
            return Err(format!("dominant member {} left the closure", b));
        }
    }
    Ok(())
}

fn diagrams_rectify_onto_closure(a: &WeakComposition) -> std::result::Result<(), String> {
    let n = a.len();
    let mut shapes: BTreeSet<WeakComposition> = BTreeSet::new();
    for d in drop_closure(a).iter() {
        let rect = nearest_left_justified(d).map_err(|e| e.to_string())?;
        shapes.insert(rect.row_weight(n).map_err(|e| e.to_string())?);
    }
    let closure = exchange_closure(a);
    if shapes != closure {
        return Err(format!(
            "{} rectified shapes vs {} closure members",
            shapes.len(),
            closure.len()
        ));
    }
    let by_diagrams = drop_closure_poly(a).map_err(|e| e.to_string())?;
    let at_zero = filling_poly(a, SkylineVariant::Key).specialize_beta(0);
    if by_diagrams != at_zero {
        return Err("diagram weights disagree with the filling weights at b = 0".to_string());
    }
    Ok(())
}

fn threading_and_extraction_agree(a: &WeakComposition) -> std::result::Result<(), String> {
    let n = a.len();
    for d in drop_closure(a).iter() {
        let threads = thread_decomposition(d).map_err(|e| e.to_string())?;
        let mut covered: BTreeSet<(u32, u32)> = BTreeSet::new();
        for thread in &threads {
            for (i, &(r, c)) in thread.iter().enumerate() {
                if i > 0 {
                    let (pr, pc) = thread[i - 1];
                    if c != pc + 1 || r > pr {
                        return Err("thread stepped wrongly".to_string());
                    }
                }
                if !covered.insert((r, c)) {
                    return Err("threads overlapped".to_string());
                }
            }
        }
        if covered.len() != d.len() {
            return Err("threads missed a box".to_string());
        }
        let t = diagram_to_filling(d, n).map_err(|e| e.to_string())?;
        if t.weight() != d.row_weight(n).map_err(|e| e.to_string())? {
            return Err("filling weight differs from the diagram row weight".to_string());
        }
    }

    let keys = enumerate_fillings(a, SkylineVariant::Key);
    let mut images: Vec<SetFilling> = Vec::with_capacity(keys.len());
    for t in &keys {
        let by_anchors = key_filling_anchors_to_atom(t).map_err(|e| e.to_string())?;
        let d = key_filling_to_diagram(t);
        let by_diagram = diagram_to_filling(&d, n).map_err(|e| e.to_string())?;
        if by_anchors != by_diagram {
            return Err("anchor extraction differs from the diagram route".to_string());
        }
        let rect_shape = nearest_left_justified(&d)
            .and_then(|r| r.row_weight(n))
            .map_err(|e| e.to_string())?;
        let extracted_shape =
            WeakComposition(by_anchors.lengths().iter().map(|&l| l as u32).collect());
        if extracted_shape != rect_shape {
            return Err(format!(
                "extraction shape {} differs from the rectified shape {}",
                extracted_shape, rect_shape
            ));
        }
        let full = key_filling_to_atom(t).map_err(|e| e.to_string())?;
        if full.excess() != t.excess() || full.weight() != t.weight() {
            return Err("free values were lost on the way to the atom filling".to_string());
        }
        images.push(full);
    }
    let mut expected: Vec<SetFilling> = exchange_closure(a)
        .iter()
        .flat_map(|b| enumerate_fillings(b, SkylineVariant::Atom))
        .collect();
    images.sort();
    expected.sort();
    if images != expected {
        return Err(format!(
            "{} images vs {} atom fillings over the closure",
            images.len(),
            expected.len()
        ));
    }
    Ok(())
}

fn stable_members_have_their_symmetry(a: &WeakComposition) -> std::result::Result<(), String> {
    if a.0.contains(&0) {
        return Ok(());
    }
    let n = a.len() + 1;
    let quasi = quasi_grothendieck_poly(a, n).map_err(|e| e.to_string())?;
    if !quasi.is_quasisymmetric() {
        return Err("stable quasi member is not quasisymmetric".to_string());
    }
    let mut sorted = a.0.clone();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    if sorted == a.0 {
        let sym = symmetric_grothendieck_poly(a, n).map_err(|e| e.to_string())?;
        if !sym.is_symmetric() {
            return Err("stable symmetric member is not symmetric".to_string());
        }
        if sym.specialize_beta(0)
            != family_poly(Family::Schur, a, Some(n)).map_err(|e| e.to_string())?
        {
            return Err("symmetric member does not specialize onto its b = 0 form".to_string());
        }
    }
    Ok(())
}

fn zeros_reach_the_stable_member(a: &WeakComposition) -> std::result::Result<(), String> {
    for m in 1..=3usize {
        if !stable_limit_check(a, m).map_err(|e| e.to_string())? {
            return Err(format!("prepending {} zeros missed the stable member", m));
        }
    }
    Ok(())
}

/// Runs the whole identity suite over the grid cut out by `bounds`, using a
/// private thread pool of `jobs` workers.
pub fn run_identity_suite(bounds: &ScanBounds, jobs: usize) -> Result<VerifyReport> {
    let grid = grid_compositions(bounds);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {}", e)))?;
    let cache = Arc::new(ElementCache::new());
    let before: BTreeMap<Family, usize> = fallback_counts().into_iter().collect();

    let mut checks = Vec::new();
    checks.push(grid_check(
        &pool,
        &grid,
        "glide closure matches the membership conditions",
        glide_closure_vs_conditions,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "mesonic glides agree along both routes",
        mesonic_routes_agree,
    ));
    checks.push(grid_check(&pool, &grid, "glide members sum their kaon pieces", |a| {
        match check_glide_kaon_identity(a) {
            Ok(true) => Ok(()),
            Ok(false) => Err("glide polynomial is not the sum of its kaon pieces".to_string()),
            Err(e) => Err(e.to_string()),
        }
    }));
    checks.push(grid_check(
        &pool,
        &grid,
        "filling enumeration matches a naive search",
        fillings_match_naive,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "basis members lead with their own index",
        members_lead_with_index,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "engine expansions match the combinatorial rules",
        |a| engine_matches_combinatorics(a, &cache),
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "destandardization fibers are indexed by colored weights",
        fibers_are_indexed_by_colored_weights,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "raising order never changes the outcome",
        raising_order_is_irrelevant,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "exchange closure agrees with the embedded-word order",
        exchange_closure_vs_embeddings,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "drop diagrams rectify onto the exchange closure",
        diagrams_rectify_onto_closure,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "threading and extraction agree",
        threading_and_extraction_agree,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "stable members have their symmetry",
        stable_members_have_their_symmetry,
    ));
    checks.push(grid_check(
        &pool,
        &grid,
        "prepended zeros reach the stable member",
        zeros_reach_the_stable_member,
    ));

    let mut fallbacks: Vec<(String, usize)> = Vec::new();
    for (family, count) in fallback_counts() {
        let delta = count - before.get(&family).copied().unwrap_or(0);
        if delta > 0 {
            fallbacks.push((family.name().to_string(), delta));
        }
    }
    Ok(VerifyReport { checks, fallbacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_weak;

    fn tiny_bounds() -> ScanBounds {
        ScanBounds { max_weight: 3, max_len: 3, max_zeros: 2 }
    }

    #[test]
    fn the_suite_passes_on_a_tiny_grid() {
        let report = run_identity_suite(&tiny_bounds(), 2).unwrap();
        assert_eq!(report.checks.len(), 13);
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
            assert_eq!(check.failures, 0);
            assert_eq!(check.detail, "ok");
        }
        assert!(report.all_passed());
        assert!(report.fallbacks.is_empty(), "engine fell back: {:?}", report.fallbacks);
    }

    #[test]
    fn the_naive_search_agrees_on_known_counts() {
        let a = parse_weak("1,0,2").unwrap();
        assert_eq!(naive_fillings(&a, SkylineVariant::Atom).len(), 8);
        assert_eq!(naive_fillings(&a, SkylineVariant::Quasi).len(), 10);
        assert_eq!(naive_fillings(&a, SkylineVariant::Key).len(), 13);
    }

    #[test]
    fn report_serialization_round_trips() {
        let report = run_identity_suite(
            &ScanBounds { max_weight: 1, max_len: 2, max_zeros: 1 },
            1,
        )
        .unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: VerifyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks.len(), report.checks.len());
        assert!(back.all_passed());
    }
}
