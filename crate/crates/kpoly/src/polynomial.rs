//! Exact polynomials in x_1..x_n with an extra deformation variable b.
//!
//! [`BetaPolynomial`] is a sparse sum of terms c * b^k * x^e with arbitrary
//! precision integer coefficients, kept in a canonical order (b-degree, then
//! exponent vectors lexicographically) so that equal polynomials serialize to
//! identical bytes. [`ZBeta`] is the dense univariate restriction used for
//! expansion coefficients, which live in Z[b].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monomial key: b-exponent first so the derived order sorts by b-degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    /// Exponent of the deformation variable.
    pub beta: u32,
    /// Exponents of x_1..x_n.
    pub exps: Vec<u32>,
}

/// A polynomial in Z[b][x_1..x_n], canonically ordered and zero-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaPolynomial {
    n: usize,
    terms: BTreeMap<Term, BigInt>,
}

impl BetaPolynomial {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        BetaPolynomial { n, terms: BTreeMap::new() }
    }

    /// The constant 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Term { beta: 0, exps: vec![0; n] }, BigInt::one());
        p
    }

    /// A single term c * b^beta * x^exps.
    pub fn monomial(n: usize, exps: Vec<u32>, beta: u32, coeff: BigInt) -> Result<Self> {
        if exps.len() != n {
            return Err(Error::VariableCountMismatch(n, exps.len()));
        }
        let mut p = Self::zero(n);
        p.add_term(Term { beta, exps }, coeff);
        Ok(p)
    }

    /// Number of x-variables.
    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// True if there are no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigInt)> {
        self.terms.iter()
    }

    /// The coefficient of b^beta * x^exps (zero if absent).
    pub fn coeff(&self, exps: &[u32], beta: u32) -> BigInt {
        let key = Term { beta, exps: exps.to_vec() };
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `coeff` to the term, dropping it if the sum vanishes.
    pub fn add_term(&mut self, term: Term, coeff: BigInt) {
        debug_assert_eq!(term.exps.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(term) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Product of two polynomials on the same variable set.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (s, cs) in &self.terms {
            for (t, ct) in &other.terms {
                let exps: Vec<u32> = s.exps.iter().zip(&t.exps).map(|(a, b)| a + b).collect();
                out.add_term(Term { beta: s.beta + t.beta, exps }, cs * ct);
            }
        }
        Ok(out)
    }

    /// Adds `coeff * b^beta_shift * other` in place.
    pub fn add_scaled(&mut self, other: &Self, coeff: &BigInt, beta_shift: u32) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        for (t, c) in &other.terms {
            self.add_term(Term { beta: t.beta + beta_shift, exps: t.exps.clone() }, coeff * c);
        }
        Ok(())
    }

    /// Multiplies by (1 + b * x_v), `v` zero-based.
    pub fn mul_one_plus_beta_var(&self, v: usize) -> Result<Self> {
        if v >= self.n {
            return Err(Error::InvalidIndex(format!("variable {} of {}", v + 1, self.n)));
        }
        let mut out = self.clone();
        for (t, c) in &self.terms {
            let mut exps = t.exps.clone();
            exps[v] += 1;
            out.add_term(Term { beta: t.beta + 1, exps }, c.clone());
        }
        Ok(out)
    }

    /// Substitutes an integer for b, collapsing all b-degrees.
    pub fn specialize_beta(&self, beta: i64) -> Self {
        let base = BigInt::from(beta);
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            let scale = num::pow::pow(base.clone(), t.beta as usize);
            out.add_term(Term { beta: 0, exps: t.exps.clone() }, c * scale);
        }
        out
    }

    /// Sets x_{m+1}..x_n to zero and truncates to `m` variables.
    pub fn restrict_vars(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::VariableCountMismatch(self.n, m));
        }
        let mut out = Self::zero(m);
        for (t, c) in &self.terms {
            if t.exps[m..].iter().all(|&e| e == 0) {
                out.add_term(Term { beta: t.beta, exps: t.exps[..m].to_vec() }, c.clone());
            }
        }
        Ok(out)
    }

    /// Exchanges the variables `i` and `j` (zero-based).
    pub fn swap_vars(&self, i: usize, j: usize) -> Result<Self> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidIndex(format!("swap {} {} of {}", i + 1, j + 1, self.n)));
        }
        let mut out = Self::zero(self.n);
        for (t, c) in &self.terms {
            let mut exps = t.exps.clone();
            exps.swap(i, j);
            out.add_term(Term { beta: t.beta, exps }, c.clone());
        }
        Ok(out)
    }

    /// True if invariant under every adjacent variable exchange.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n.saturating_sub(1)).all(|i| self.swap_vars(i, i + 1).unwrap() == *self)
    }

    /// True if coefficients depend only on the ordered sequence of nonzero exponents.
    pub fn is_quasisymmetric(&self) -> bool {
        // group terms by (b-degree, nonzero exponents in order); each group must
        // have one shared coefficient and be fully populated (one term per way
        // of placing the nonzero block into the n positions)
        let mut groups: BTreeMap<(u32, Vec<u32>), (BigInt, usize)> = BTreeMap::new();
        for (t, c) in &self.terms {
            let positives: Vec<u32> = t.exps.iter().copied().filter(|&e| e > 0).collect();
            let entry = groups.entry((t.beta, positives)).or_insert_with(|| (c.clone(), 0));
            if entry.0 != *c {
                return false;
            }
            entry.1 += 1;
        }
        for ((_, positives), (_, count)) in groups {
            if count != binomial(self.n, positives.len()) {
                return false;
            }
        }
        true
    }

    /// Converts to the serialization form.
    pub fn to_dto(&self) -> PolyDto {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| TermDto {
                x: t.exps.clone(),
                beta: t.beta,
                c: bigint_to_number(c),
            })
            .collect();
        PolyDto { n: self.n, terms }
    }

    /// Rebuilds from the serialization form.
    pub fn from_dto(dto: &PolyDto) -> Result<Self> {
        let mut p = Self::zero(dto.n);
        for t in &dto.terms {
            if t.x.len() != dto.n {
                return Err(Error::VariableCountMismatch(dto.n, t.x.len()));
            }
            p.add_term(Term { beta: t.beta, exps: t.x.clone() }, number_to_bigint(&t.c)?);
        }
        Ok(p)
    }
}

impl fmt::Display for BetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            match t.beta {
                0 => {}
                1 => factors.push("b".into()),
                k => factors.push(format!("b^{}", k)),
            }
            for (i, &e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if factors.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serialization form of a polynomial: variable count plus ordered terms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyDto {
    /// Number of x-variables.
    pub n: usize,
    /// Terms in canonical order.
    pub terms: Vec<TermDto>,
}

/// Serialization form of a single term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDto {
    /// Exponents of x_1..x_n.
    pub x: Vec<u32>,
    /// Exponent of the deformation variable.
    pub beta: u32,
    /// Integer coefficient; arbitrary precision survives the JSON trip.
    pub c: serde_json::Number,
}

/// Reads an exact integer back out of a JSON number.
pub fn number_to_bigint(n: &serde_json::Number) -> Result<BigInt> {
    BigInt::from_str(&n.to_string()).map_err(|_| Error::Parse {
        position: 0,
        message: format!("expected an integer coefficient, got {}", n),
    })
}

/// Embeds an exact integer into a JSON number.
pub fn bigint_to_number(v: &BigInt) -> serde_json::Number {
    serde_json::from_str(&v.to_string()).expect("an integer literal is a valid JSON number")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// A dense polynomial in Z[b], indexed by b-degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ZBeta(Vec<BigInt>);

impl ZBeta {
    /// The zero polynomial.
    pub fn zero() -> Self {
        ZBeta(Vec::new())
    }

    /// Wraps coefficients by ascending b-degree, trimming trailing zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut z = ZBeta(coeffs);
        z.normalize();
        z
    }

    /// The constant 1.
    pub fn one() -> Self {
        ZBeta(vec![BigInt::one()])
    }

    /// A single term c * b^k.
    pub fn term(coeff: BigInt, k: u32) -> Self {
        let mut v = vec![BigInt::zero(); k as usize + 1];
        v[k as usize] = coeff;
        ZBeta::new(v)
    }

    fn normalize(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of b^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficients by ascending b-degree, no trailing zeros.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Degree in b, or None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Adds another polynomial in place.
    pub fn add_assign(&mut self, other: &ZBeta) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), BigInt::zero());
        }
        for (i, c) in other.0.iter().enumerate() {
            self.0[i] += c;
        }
        self.normalize();
    }

    /// Adds c * b^k in place.
    pub fn add_term(&mut self, coeff: &BigInt, k: u32) {
        let k = k as usize;
        if self.0.len() <= k {
            self.0.resize(k + 1, BigInt::zero());
        }
        self.0[k] += coeff;
        self.normalize();
    }

    /// Evaluates at an integer (Horner).
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// True if every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for ZBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if mag.is_one() {
                        write!(f, "b")?;
                    } else {
                        write!(f, "{}*b", mag)?;
                    }
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn mono(n: usize, exps: &[u32], beta: u32, c: i64) -> BetaPolynomial {
        BetaPolynomial::monomial(n, exps.to_vec(), beta, big(c)).unwrap()
    }

    #[test]
    fn ring_operations() {
        let p = mono(2, &[1, 0], 0, 1).add(&mono(2, &[0, 1], 0, 1)).unwrap();
        let q = p.mul(&p).unwrap();
        assert_eq!(q.coeff(&[2, 0], 0), big(1));
        assert_eq!(q.coeff(&[1, 1], 0), big(2));
        assert_eq!(q.coeff(&[0, 2], 0), big(1));
        assert!(p.sub(&p).unwrap().is_zero());
        assert!(p.mul(&BetaPolynomial::zero(2)).unwrap().is_zero());
        assert!(p.add(&BetaPolynomial::one(3)).is_err());

        let r = p.mul_one_plus_beta_var(0).unwrap();
        assert_eq!(r.coeff(&[1, 0], 0), big(1));
        assert_eq!(r.coeff(&[2, 0], 1), big(1));
        assert_eq!(r.coeff(&[1, 1], 1), big(1));
        assert_eq!(r.num_terms(), 4);
    }

    #[test]
    fn beta_specialization() {
        let mut p = BetaPolynomial::one(2);
        p.add_term(Term { beta: 1, exps: vec![1, 0] }, big(2));
        p.add_term(Term { beta: 2, exps: vec![0, 1] }, big(1));
        let at0 = p.specialize_beta(0);
        assert_eq!(at0.num_terms(), 1);
        assert_eq!(at0.coeff(&[0, 0], 0), big(1));
        let atm1 = p.specialize_beta(-1);
        assert_eq!(atm1.coeff(&[1, 0], 0), big(-2));
        assert_eq!(atm1.coeff(&[0, 1], 0), big(1));
    }

    #[test]
    fn symmetry_detection() {
        let sym = mono(2, &[1, 0], 0, 1).add(&mono(2, &[0, 1], 0, 1)).unwrap();
        assert!(sym.is_symmetric());
        let asym = mono(3, &[1, 0, 0], 0, 1).add(&mono(3, &[0, 1, 0], 0, 1)).unwrap();
        assert!(!asym.is_symmetric());

        // x1*x2^2 + x1*x3^2 + x2*x3^2 is quasisymmetric but not symmetric
        let q = mono(3, &[1, 2, 0], 0, 1)
            .add(&mono(3, &[1, 0, 2], 0, 1))
            .unwrap()
            .add(&mono(3, &[0, 1, 2], 0, 1))
            .unwrap();
        assert!(q.is_quasisymmetric());
        assert!(!q.is_symmetric());
        let missing = mono(3, &[1, 2, 0], 0, 1).add(&mono(3, &[1, 0, 2], 0, 1)).unwrap();
        assert!(!missing.is_quasisymmetric());
    }

    #[test]
    fn restriction_and_swap() {
        let p = mono(3, &[1, 1, 0], 1, 2).add(&mono(3, &[0, 0, 2], 0, 1)).unwrap();
        let r = p.restrict_vars(2).unwrap();
        assert_eq!(r.num_vars(), 2);
        assert_eq!(r.coeff(&[1, 1], 1), big(2));
        assert_eq!(r.num_terms(), 1);
        let s = p.swap_vars(0, 2).unwrap();
        assert_eq!(s.coeff(&[0, 1, 1], 1), big(2));
        assert_eq!(s.coeff(&[2, 0, 0], 0), big(1));
    }

    #[test]
    fn canonical_serialization_is_byte_stable() {
        // x2 + x1 + b*x1*x2, inserted out of order, serializes sorted
        let mut p = BetaPolynomial::zero(2);
        p.add_term(Term { beta: 1, exps: vec![1, 1] }, big(1));
        p.add_term(Term { beta: 0, exps: vec![1, 0] }, big(1));
        p.add_term(Term { beta: 0, exps: vec![0, 1] }, big(1));
        let json = serde_json::to_string(&p.to_dto()).unwrap();
        assert_eq!(
            json,
            r#"{"n":2,"terms":[{"x":[0,1],"beta":0,"c":1},{"x":[1,0],"beta":0,"c":1},{"x":[1,1],"beta":1,"c":1}]}"#
        );
        let back = BetaPolynomial::from_dto(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn huge_coefficients_survive_json() {
        let c = BigInt::from_str("123456789012345678901234567890123456789").unwrap();
        let p = BetaPolynomial::monomial(1, vec![1], 0, c.clone()).unwrap();
        let json = serde_json::to_string(&p.to_dto()).unwrap();
        let back = BetaPolynomial::from_dto(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.coeff(&[1], 0), c);
    }

    #[test]
    fn zbeta_arithmetic() {
        let mut z = ZBeta::zero();
        assert!(z.is_zero());
        z.add_term(&big(36), 0);
        z.add_term(&big(94), 1);
        z.add_term(&big(75), 2);
        z.add_term(&big(16), 3);
        assert_eq!(z.eval(&big(-1)), big(1));
        assert_eq!(z.to_string(), "36 + 94*b + 75*b^2 + 16*b^3");
        assert!(z.is_nonnegative());
        z.add_term(&big(-16), 3);
        assert_eq!(z.degree(), Some(2));
        let w = ZBeta::new(vec![big(0), big(0)]);
        assert!(w.is_zero());
        assert_eq!(ZBeta::term(big(1), 1).to_string(), "b");
        assert_eq!(ZBeta::zero().to_string(), "0");
    }

    #[test]
    fn polynomial_display() {
        let mut p = BetaPolynomial::zero(2);
        p.add_term(Term { beta: 0, exps: vec![2, 0] }, big(1));
        p.add_term(Term { beta: 1, exps: vec![1, 1] }, big(-2));
        assert_eq!(p.to_string(), "x1^2 - 2*b*x1*x2");
        assert_eq!(BetaPolynomial::zero(1).to_string(), "0");
        assert_eq!(BetaPolynomial::one(1).to_string(), "1");
    }
}
