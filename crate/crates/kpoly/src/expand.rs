//! Exact expansion of polynomials into the combinatorial bases.
//!
//! The engine orders monomials (a b-power and an exponent vector) so that
//! every basis member's own index is its strictly largest monomial: fewer
//! nonzero exponents beat more, then a larger maximal exponent wins, then
//! the larger sorted word 1^{e_1} 2^{e_2} ... wins, and b-degree breaks the
//! final tie. Peeling repeatedly reads the largest remaining monomial, which
//! must be the b-shifted leading term of exactly one basis member, and
//! subtracts that member. The leading monomial strictly decreases, so the
//! loop terminates with an exact expansion or fails fast. A failure falls
//! back to exact rational elimination over every candidate index (counted
//! per basis so the verification suite can report it), whose result is
//! checked by reconstruction before being trusted.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::WeakComposition;
use crate::error::{Error, Result};
use crate::family::{family_poly, Family};
use crate::polynomial::{bigint_to_number, number_to_bigint, BetaPolynomial, ZBeta};

/// Compares monomials; `Greater` means more dominant (extracted first).
pub fn monomial_cmp(ka: u32, a: &[u32], kb: u32, b: &[u32]) -> Ordering {
    let positives = |v: &[u32]| v.iter().filter(|&&e| e > 0).count();
    // fewer nonzero exponents dominate
    match positives(b).cmp(&positives(a)) {
        Ordering::Equal => {}
        other => return other,
    }
    let max = |v: &[u32]| v.iter().copied().max().unwrap_or(0);
    match max(a).cmp(&max(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    match s_word(a).cmp(&s_word(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    ka.cmp(&kb)
}

/// The sorted word 1^{a_1} 2^{a_2} ... of an exponent vector.
fn s_word(a: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.iter().sum::<u32>() as usize);
    for (i, &v) in a.iter().enumerate() {
        out.extend(std::iter::repeat((i + 1) as u32).take(v as usize));
    }
    out
}

/// Memoizes basis members so scans touch each index once.
pub struct ElementCache {
    map: Mutex<HashMap<(Family, Vec<u32>), Arc<BetaPolynomial>>>,
}

impl ElementCache {
    /// An empty cache.
    pub fn new() -> Self {
        ElementCache { map: Mutex::new(HashMap::new()) }
    }

    /// The member of `basis` at `index`, computed once.
    pub fn basis_element(&self, basis: Family, index: &WeakComposition) -> Result<Arc<BetaPolynomial>> {
        let key = (basis, index.0.clone());
        if let Some(hit) = self.map.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let poly = family_poly(basis, index, None)?;
        if poly.coeff(&index.0, 0) != BigInt::one() {
            return Err(Error::Internal(format!(
                "basis member {} of {} does not lead with coefficient one",
                index, basis
            )));
        }
        let arc = Arc::new(poly);
        Ok(Arc::clone(
            self.map.lock().unwrap().entry(key).or_insert(arc),
        ))
    }
}

impl Default for ElementCache {
    fn default() -> Self {
        ElementCache::new()
    }
}

/// One expansion: which basis, how many variables, and a coefficient in
/// Z[b] per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub basis: Family,
    pub n: usize,
    pub terms: BTreeMap<WeakComposition, ZBeta>,
}

/// Serialized form of an expansion; coefficients are b-power lists.
#[derive(Serialize, Deserialize)]
pub struct ExpansionDto {
    pub basis: String,
    pub n: usize,
    pub terms: Vec<ExpansionTermDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<bool>,
}

/// One serialized expansion term.
#[derive(Serialize, Deserialize)]
pub struct ExpansionTermDto {
    pub index: Vec<u32>,
    pub coeff: Vec<serde_json::Number>,
}

impl Expansion {
    /// True if every coefficient of every term is nonnegative.
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|z| z.is_nonnegative())
    }

    /// Sums the basis members back up; inverse of expanding.
    pub fn reconstruct(&self, cache: &ElementCache) -> Result<BetaPolynomial> {
        let mut out = BetaPolynomial::zero(self.n);
        for (index, z) in &self.terms {
            let elt = cache.basis_element(self.basis, index)?;
            for (j, c) in z.coeffs().iter().enumerate() {
                out.add_scaled(&elt, c, j as u32)?;
            }
        }
        Ok(out)
    }

    /// Serialized form; `positive` is included when `tag_positivity` asks.
    pub fn to_dto(&self, tag_positivity: bool) -> ExpansionDto {
        ExpansionDto {
            basis: self.basis.name().to_string(),
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(index, z)| ExpansionTermDto {
                    index: index.0.clone(),
                    coeff: z.coeffs().iter().map(bigint_to_number).collect(),
                })
                .collect(),
            positive: tag_positivity.then(|| self.is_positive()),
        }
    }

    /// Rebuilds an expansion from its serialized form.
    pub fn from_dto(dto: &ExpansionDto) -> Result<Expansion> {
        let basis = Family::parse(&dto.basis)?;
        let mut terms = BTreeMap::new();
        for t in &dto.terms {
            if t.index.len() != dto.n {
                return Err(Error::LengthMismatch { expected: dto.n, got: t.index.len() });
            }
            let mut z = ZBeta::zero();
            for (j, c) in t.coeff.iter().enumerate() {
                z.add_term(&number_to_bigint(c)?, j as u32);
            }
            terms.insert(WeakComposition(t.index.clone()), z);
        }
        Ok(Expansion { basis, n: dto.n, terms })
    }
}

/// Expands `p` exactly in `basis`.
pub fn expand_in_basis(p: &BetaPolynomial, basis: Family, cache: &ElementCache) -> Result<Expansion> {
    if basis.is_stable() {
        return Err(Error::VariantMismatch(format!(
            "{} members do not form an expansion basis here",
            basis
        )));
    }
    let terms = match peel(p, basis, cache) {
        Ok(terms) => terms,
        Err(Error::ExpansionFailed(_)) => {
            note_fallback(basis);
            solve_exact(p, basis, cache)?
        }
        Err(e) => return Err(e),
    };
    Ok(Expansion { basis, n: p.num_vars(), terms })
}

fn peel(
    p: &BetaPolynomial,
    basis: Family,
    cache: &ElementCache,
) -> Result<BTreeMap<WeakComposition, ZBeta>> {
    let mut remainder = p.clone();
    let mut terms: BTreeMap<WeakComposition, ZBeta> = BTreeMap::new();
    let mut prev: Option<(u32, Vec<u32>)> = None;
    while !remainder.is_zero() {
        let (term, coeff) = remainder
            .terms()
            .max_by(|(s, _), (t, _)| monomial_cmp(s.beta, &s.exps, t.beta, &t.exps))
            .map(|(t, c)| (t.clone(), c.clone()))
            .expect("nonzero polynomial has a maximal monomial");
        if let Some((pk, pe)) = &prev {
            if monomial_cmp(term.beta, &term.exps, *pk, pe) != Ordering::Less {
                return Err(Error::ExpansionFailed(
                    "leading monomial failed to decrease while peeling".into(),
                ));
            }
        }
        prev = Some((term.beta, term.exps.clone()));
        let index = WeakComposition(term.exps);
        let elt = cache.basis_element(basis, &index)?;
        remainder.add_scaled(&elt, &-coeff.clone(), term.beta)?;
        terms.entry(index).or_default().add_term(&coeff, term.beta);
    }
    terms.retain(|_, z| !z.is_zero());
    Ok(terms)
}

/// Exact elimination over every candidate index, verified by reconstruction.
fn solve_exact(
    p: &BetaPolynomial,
    basis: Family,
    cache: &ElementCache,
) -> Result<BTreeMap<WeakComposition, ZBeta>> {
    if p.is_zero() {
        return Ok(BTreeMap::new());
    }
    let n = p.num_vars();
    let wmax: u32 = p
        .terms()
        .map(|(t, _)| t.exps.iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    // unknowns: b^shift times the member at each index of weight <= wmax
    let mut unknowns: Vec<(WeakComposition, u32, Arc<BetaPolynomial>)> = Vec::new();
    let mut stack = vec![0u32; n];
    enumerate_bounded(&mut stack, 0, wmax, &mut |b| {
        let index = WeakComposition(b.to_vec());
        let weight: u32 = b.iter().sum();
        let elt = cache.basis_element(basis, &index)?;
        for shift in 0..=(wmax - weight) {
            unknowns.push((index.clone(), shift, Arc::clone(&elt)));
        }
        Ok(())
    })?;
    // row index per monomial seen in the target or any unknown
    let mut row_of: BTreeMap<(u32, Vec<u32>), usize> = BTreeMap::new();
    let touch = |key: (u32, Vec<u32>), row_of: &mut BTreeMap<(u32, Vec<u32>), usize>| {
        let next = row_of.len();
        *row_of.entry(key).or_insert(next)
    };
    for (t, _) in p.terms() {
        touch((t.beta, t.exps.clone()), &mut row_of);
    }
    for (_, shift, elt) in &unknowns {
        for (t, _) in elt.terms() {
            touch((t.beta + shift, t.exps.clone()), &mut row_of);
        }
    }
    let rows = row_of.len();
    let cols = unknowns.len();
    let mut matrix = vec![vec![BigRational::zero(); cols + 1]; rows];
    for (j, (_, shift, elt)) in unknowns.iter().enumerate() {
        for (t, c) in elt.terms() {
            let i = row_of[&(t.beta + shift, t.exps.clone())];
            matrix[i][j] += BigRational::from_integer(c.clone());
        }
    }
    for (t, c) in p.terms() {
        let i = row_of[&(t.beta, t.exps.clone())];
        matrix[i][cols] = BigRational::from_integer(c.clone());
    }
    let solution = eliminate(&mut matrix, cols)?;
    let mut terms: BTreeMap<WeakComposition, ZBeta> = BTreeMap::new();
    for ((index, shift, _), value) in unknowns.into_iter().zip(solution) {
        if value.is_zero() {
            continue;
        }
        if !value.is_integer() {
            return Err(Error::ExpansionFailed(format!(
                "coefficient {} on {} is not an integer",
                value, index
            )));
        }
        terms.entry(index).or_default().add_term(&value.to_integer(), shift);
    }
    terms.retain(|_, z| !z.is_zero());
    let check = Expansion { basis, n, terms };
    if check.reconstruct(cache)? != *p {
        return Err(Error::ExpansionFailed(
            "elimination result does not reconstruct the input".into(),
        ));
    }
    Ok(check.terms)
}

/// Visits every vector of the given length with entry sum at most `budget`.
fn enumerate_bounded(
    stack: &mut Vec<u32>,
    pos: usize,
    budget: u32,
    visit: &mut impl FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if pos == stack.len() {
        return visit(stack);
    }
    for v in 0..=budget {
        stack[pos] = v;
        enumerate_bounded(stack, pos + 1, budget - v, visit)?;
    }
    stack[pos] = 0;
    Ok(())
}

/// Gauss-Jordan over the rationals; free unknowns become zero.
fn eliminate(matrix: &mut [Vec<BigRational>], cols: usize) -> Result<Vec<BigRational>> {
    let rows = matrix.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut next_row = 0;
    for col in 0..cols {
        let Some(p) = (next_row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(next_row, p);
        let inv = matrix[next_row][col].clone();
        for x in matrix[next_row].iter_mut() {
            *x /= &inv;
        }
        for r in 0..rows {
            if r != next_row && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for j in 0..=cols {
                    let delta = &factor * &matrix[next_row][j];
                    matrix[r][j] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    for r in next_row..rows {
        if !matrix[r][cols].is_zero() {
            return Err(Error::ExpansionFailed("the system is inconsistent".into()));
        }
    }
    Ok((0..cols)
        .map(|col| match pivot_of_col[col] {
            Some(r) => matrix[r][cols].clone(),
            None => BigRational::zero(),
        })
        .collect())
}

/// How often each basis needed the elimination fallback.
pub fn fallback_counts() -> Vec<(Family, usize)> {
    let map = fallback_map().lock().unwrap();
    let mut out: Vec<(Family, usize)> = map.iter().map(|(&f, &c)| (f, c)).collect();
    out.sort();
    out
}

fn note_fallback(basis: Family) {
    *fallback_map().lock().unwrap().entry(basis).or_insert(0) += 1;
}

fn fallback_map() -> &'static Mutex<HashMap<Family, usize>> {
    static MAP: OnceLock<Mutex<HashMap<Family, usize>>> = OnceLock::new();
    MAP.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Expands the product of two family members in `basis`; the factors are
/// padded to a common variable count first.
pub fn product_expansion(
    f1: Family,
    a: &WeakComposition,
    f2: Family,
    b: &WeakComposition,
    basis: Family,
    cache: &ElementCache,
) -> Result<Expansion> {
    let n = a.len().max(b.len());
    let p1 = family_poly(f1, a, Some(n))?;
    let p2 = family_poly(f2, b, Some(n))?;
    expand_in_basis(&p1.mul(&p2)?, basis, cache)
}
