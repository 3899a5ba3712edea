//! Conjecture scans over bounded grids of compositions.
//!
//! Three conjectures are scanned. The Euler check: for each index, summing
//! the coefficients of its quasi-type polynomial's glide expansion, and of
//! its atom-type polynomial's kaon expansion, then evaluating at b = -1 must
//! give 0 or 1. The kaon product: a glide member times a kaon member must
//! expand in kaons with nonnegative coefficients. The key product: a key
//! member times a key member must expand in atoms with nonnegative
//! coefficients. Scans run over a deterministic grid, fan work out over a
//! local thread pool, and emit one record per case in grid order so repeated
//! runs are byte-identical.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::composition::WeakComposition;
use crate::error::{Error, Result};
use crate::expand::{product_expansion, ElementCache, Expansion};
use crate::family::Family;
use crate::polynomial::ZBeta;
use crate::skyline::{atom_to_kaon_expansion, quasilascoux_to_glide_expansion};

/// Which conjecture a scan exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    /// Coefficient sums of both expansions evaluate to 0 or 1 at b = -1.
    Euler,
    /// Glide times kaon is kaon-positive.
    KaonProduct,
    /// Key times key is atom-positive.
    LascouxProduct,
}

impl ScanKind {
    /// The name used on the command line and in scan records.
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Euler => "euler",
            ScanKind::KaonProduct => "kaon-product",
            ScanKind::LascouxProduct => "lascoux-product",
        }
    }

    /// Looks a scan kind up by name.
    pub fn parse(s: &str) -> Result<ScanKind> {
        [ScanKind::Euler, ScanKind::KaonProduct, ScanKind::LascouxProduct]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownFamily(format!("no scan kind named {}", s)))
    }

    /// True if the scan runs over pairs of compositions.
    pub fn is_pairwise(self) -> bool {
        !matches!(self, ScanKind::Euler)
    }
}

/// Grid bounds: every composition with at most `max_len` entries, entry sum
/// at most `max_weight`, and at most `max_zeros` zero entries.
#[derive(Clone, Copy, Debug)]
pub struct ScanBounds {
    pub max_weight: u32,
    pub max_len: usize,
    pub max_zeros: usize,
}

/// The compositions inside `bounds`, in a fixed order: by length, then
/// lexicographically.
pub fn grid_compositions(bounds: &ScanBounds) -> Vec<WeakComposition> {
    let mut out = Vec::new();
    for len in 1..=bounds.max_len {
        let mut stack = vec![0u32; len];
        grid_rec(&mut stack, 0, bounds.max_weight, bounds.max_zeros, &mut out);
    }
    out
}

fn grid_rec(
    stack: &mut Vec<u32>,
    pos: usize,
    budget: u32,
    zeros: usize,
    out: &mut Vec<WeakComposition>,
) {
    if pos == stack.len() {
        out.push(WeakComposition(stack.clone()));
        return;
    }
    let start = if zeros == 0 { 1 } else { 0 };
    if start > budget {
        return;
    }
    for v in start..=budget {
        stack[pos] = v;
        grid_rec(stack, pos + 1, budget - v, zeros - (v == 0) as usize, out);
    }
    stack[pos] = 0;
}

/// One scanned case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRecord {
    pub kind: String,
    pub a: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u32>>,
    pub ok: bool,
    pub detail: String,
}

/// The two coefficient sums of `a`'s expansions and whether both evaluate
/// to 0 or 1 at b = -1.
pub fn euler_sum_check(a: &WeakComposition) -> (ZBeta, ZBeta, bool) {
    let mut quasi_sum = ZBeta::zero();
    for z in quasilascoux_to_glide_expansion(a).values() {
        quasi_sum.add_assign(z);
    }
    let mut atom_sum = ZBeta::zero();
    for z in atom_to_kaon_expansion(a).values() {
        atom_sum.add_assign(z);
    }
    let minus_one = BigInt::from(-1);
    let ok = [&quasi_sum, &atom_sum].iter().all(|z| {
        let v = z.eval(&minus_one);
        v == BigInt::from(0) || v == BigInt::from(1)
    });
    (quasi_sum, atom_sum, ok)
}

fn euler_record(a: &WeakComposition) -> ScanRecord {
    let (quasi_sum, atom_sum, ok) = euler_sum_check(a);
    ScanRecord {
        kind: ScanKind::Euler.name().to_string(),
        a: a.0.clone(),
        b: None,
        ok,
        detail: format!(
            "quasi sum {} -> {}, atom sum {} -> {}",
            quasi_sum,
            quasi_sum.eval(&BigInt::from(-1)),
            atom_sum,
            atom_sum.eval(&BigInt::from(-1)),
        ),
    }
}

fn positivity_record(
    kind: ScanKind,
    a: &WeakComposition,
    b: &WeakComposition,
    cache: &ElementCache,
) -> ScanRecord {
    let (f1, f2, basis) = match kind {
        ScanKind::KaonProduct => (Family::Glide, Family::Kaon, Family::Kaon),
        ScanKind::LascouxProduct => (Family::Lascoux, Family::Lascoux, Family::LascouxAtom),
        ScanKind::Euler => unreachable!("the Euler scan has no product"),
    };
    let (ok, detail) = match product_expansion(f1, a, f2, b, basis, cache) {
        Ok(e) => describe_positivity(&e),
        Err(err) => (false, format!("expansion failed: {}", err)),
    };
    ScanRecord { kind: kind.name().to_string(), a: a.0.clone(), b: Some(b.0.clone()), ok, detail }
}

fn describe_positivity(e: &Expansion) -> (bool, String) {
    match e.terms.iter().find(|(_, z)| !z.is_nonnegative()) {
        None => (true, format!("{} terms, all nonnegative", e.terms.len())),
        Some((index, z)) => (false, format!("negative coefficient {} on {}", z, index)),
    }
}

/// Runs the scan over its grid with `jobs` worker threads, returning one
/// record per case in grid order.
pub fn conjecture_scan(kind: ScanKind, bounds: &ScanBounds, jobs: usize) -> Result<Vec<ScanRecord>> {
    let grid = grid_compositions(bounds);
    let cache = ElementCache::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {}", e)))?;
    let records = pool.install(|| {
        use rayon::prelude::*;
        match kind {
            ScanKind::Euler => grid.par_iter().map(|a| euler_record(a)).collect::<Vec<_>>(),
            _ => {
                let pairs: Vec<(&WeakComposition, &WeakComposition)> =
                    grid.iter().flat_map(|a| grid.iter().map(move |b| (a, b))).collect();
                pairs
                    .par_iter()
                    .map(|(a, b)| positivity_record(kind, a, b, &cache))
                    .collect::<Vec<_>>()
            }
        }
    });
    Ok(records)
}
