//! Weak compositions, colored compositions, partitions, and permutations.
//!
//! A weak composition is a finite sequence of nonnegative integers; trailing
//! zeros are significant (the length fixes the number of variables). A colored
//! composition additionally marks some of its *nonzero* entries red; the number
//! of red entries is its excess. Permutations enter through the minimal-length
//! way of sorting a weak composition into a partition, and carry the strong
//! Bruhat order via rank matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weak composition: entries are nonnegative, trailing zeros matter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeakComposition(pub Vec<u32>);

impl WeakComposition {
    /// Wraps a vector of entries.
    pub fn new(entries: Vec<u32>) -> Self {
        WeakComposition(entries)
    }

    /// Number of entries, counting trailing zeros.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True if there are no entries at all.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero entries.
    pub fn positive_len(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    /// Largest entry (0 for the empty composition).
    pub fn max_part(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// The nonzero entries in their original order.
    pub fn positive_part(&self) -> Vec<u32> {
        self.0.iter().copied().filter(|&e| e > 0).collect()
    }

    /// Entries sorted into weakly decreasing order.
    pub fn sorted_partition(&self) -> Partition {
        let mut v = self.0.clone();
        v.sort_unstable_by(|x, y| y.cmp(x));
        Partition(v)
    }

    /// Extends with trailing zeros to length `n` (error if already longer).
    pub fn pad_to(&self, n: usize) -> Result<WeakComposition> {
        if self.len() > n {
            return Err(Error::LengthMismatch { expected: n, got: self.len() });
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Ok(WeakComposition(v))
    }

    /// Dominance: every prefix sum of `self` is at least the one of `other`.
    ///
    /// Shorter arguments are implicitly padded with trailing zeros.
    pub fn dominates(&self, other: &WeakComposition) -> bool {
        let n = self.len().max(other.len());
        let mut s = 0i64;
        let mut o = 0i64;
        for i in 0..n {
            s += *self.0.get(i).unwrap_or(&0) as i64;
            o += *other.0.get(i).unwrap_or(&0) as i64;
            if s < o {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for WeakComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A colored composition: a weak composition with some nonzero entries red.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Komposition {
    entries: Vec<u32>,
    reds: Vec<bool>,
}

impl Komposition {
    /// Builds a colored composition, rejecting red zeros and length mismatch.
    pub fn new(entries: Vec<u32>, reds: Vec<bool>) -> Result<Self> {
        if entries.len() != reds.len() {
            return Err(Error::LengthMismatch { expected: entries.len(), got: reds.len() });
        }
        for (i, (&e, &r)) in entries.iter().zip(&reds).enumerate() {
            if r && e == 0 {
                return Err(Error::InvalidKomposition(format!("entry {} is a red zero", i + 1)));
            }
        }
        Ok(Komposition { entries, reds })
    }

    /// An all-black colored composition.
    pub fn from_black(a: &WeakComposition) -> Self {
        let reds = vec![false; a.len()];
        Komposition { entries: a.0.clone(), reds }
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True if there are no entries at all.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry values, colors forgotten.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// The color flags (true = red).
    pub fn reds(&self) -> &[bool] {
        &self.reds
    }

    /// Entry at `i` as a (value, is_red) pair.
    pub fn entry(&self, i: usize) -> (u32, bool) {
        (self.entries[i], self.reds[i])
    }

    /// Number of red entries.
    pub fn excess(&self) -> u32 {
        self.reds.iter().filter(|&&r| r).count() as u32
    }

    /// Sum of the entries.
    pub fn weight(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Forgets the colors.
    pub fn underlying(&self) -> WeakComposition {
        WeakComposition(self.entries.clone())
    }
}

impl fmt::Display for Komposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .zip(&self.reds)
            .map(|(&e, &r)| if r { format!("{}r", e) } else { e.to_string() })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A partition: entries weakly decreasing (trailing zeros allowed).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    /// Wraps a weakly decreasing vector, validating monotonicity.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse {
                position: 0,
                message: "partition entries must be weakly decreasing".into(),
            });
        }
        Ok(Partition(entries))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WeakComposition(self.0.clone()).fmt(f)
    }
}

/// A permutation of 1..=n in one-line notation (1-based images).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Wraps one-line notation, checking it is a bijection on 1..=n.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{:?}", images)));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(images))
    }

    /// One-line notation as a slice.
    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Size of the underlying symmetric group.
    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Number of inversions (Coxeter length).
    pub fn length(&self) -> usize {
        let mut l = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    l += 1;
                }
            }
        }
        l
    }

    /// The rank matrix entry: how many of the first `i` images are at most `j`.
    fn rank(&self, i: usize, j: usize) -> usize {
        self.0[..i].iter().filter(|&&v| v <= j).count()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(if self.0.len() > 9 { "," } else { "" }))
    }
}

/// Strong Bruhat order via rank matrices: `u <= v` iff ranks of `u` dominate.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::LengthMismatch { expected: u.n(), got: v.n() });
    }
    let n = u.n();
    for i in 1..=n {
        for j in 1..=n {
            if u.rank(i, j) < v.rank(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sorts `a` into a partition and returns the minimal-length sorting permutation.
///
/// The sort is stable: among equal entries, earlier positions come first. The
/// returned permutation `w` satisfies `sorted[w(i) - 1] == a[i - 1]`, i.e. `w`
/// sends original positions to sorted positions.
pub fn sort_and_w(a: &WeakComposition) -> (Partition, Permutation) {
    let n = a.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&p, &q| a.0[q].cmp(&a.0[p]).then(p.cmp(&q)));
    let sorted: Vec<u32> = idx.iter().map(|&p| a.0[p]).collect();
    let mut w = vec![0usize; n];
    for (sorted_pos, &orig_pos) in idx.iter().enumerate() {
        w[orig_pos] = sorted_pos + 1;
    }
    (Partition(sorted), Permutation(w))
}

/// A parsed composition argument: plain entries or colored ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    /// No color marks appeared.
    Weak(WeakComposition),
    /// At least one entry carried a red mark.
    Colored(Komposition),
}

/// Parses `"0,2,0,1"` or `"1,2r,0"`; a trailing `r` marks an entry red.
pub fn parse_composition(s: &str) -> Result<Parsed> {
    let mut entries = Vec::new();
    let mut reds = Vec::new();
    let mut any_red = false;
    let mut pos = 0usize;
    if s.trim().is_empty() {
        return Err(Error::Parse { position: 0, message: "empty composition".into() });
    }
    for tok in s.split(',') {
        let start = pos;
        pos += tok.len() + 1;
        let t = tok.trim();
        if t.is_empty() {
            return Err(Error::Parse { position: start, message: "empty entry".into() });
        }
        let (digits, red) = match t.strip_suffix(['r', 'R']) {
            Some(d) => (d, true),
            None => (t, false),
        };
        let value: u32 = digits.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("expected a nonnegative integer, got {:?}", t),
        })?;
        if red && value == 0 {
            return Err(Error::Parse { position: start, message: "zero entries cannot be red".into() });
        }
        entries.push(value);
        reds.push(red);
        any_red |= red;
    }
    if any_red {
        Ok(Parsed::Colored(Komposition::new(entries, reds)?))
    } else {
        Ok(Parsed::Weak(WeakComposition(entries)))
    }
}

/// Parses a plain weak composition, rejecting color marks.
pub fn parse_weak(s: &str) -> Result<WeakComposition> {
    match parse_composition(s)? {
        Parsed::Weak(a) => Ok(a),
        Parsed::Colored(_) => Err(Error::Parse {
            position: 0,
            message: "color marks are not allowed here".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wc(v: &[u32]) -> WeakComposition {
        WeakComposition(v.to_vec())
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sorting_is_stable_and_minimal_length() {
        let (sorted, w) = sort_and_w(&wc(&[0, 1, 0, 3]));
        assert_eq!(sorted.0, vec![3, 1, 0, 0]);
        assert_eq!(w.images(), &[3, 2, 4, 1]);
        // w really carries each original position onto its sorted position
        for i in 1..=4 {
            assert_eq!(sorted.0[w.apply(i) - 1], [0, 1, 0, 3][i - 1]);
        }

        let (sorted, w) = sort_and_w(&wc(&[2, 2, 0, 2]));
        assert_eq!(sorted.0, vec![2, 2, 2, 0]);
        assert_eq!(w.images(), &[1, 2, 4, 3]);

        let (_, id) = sort_and_w(&wc(&[3, 1, 0, 0]));
        assert_eq!(id.images(), &[1, 2, 3, 4]);
        assert_eq!(id.length(), 0);
    }

    #[test]
    fn bruhat_order_on_s3() {
        let e = perm(&[1, 2, 3]);
        let s1 = perm(&[2, 1, 3]);
        let s2 = perm(&[1, 3, 2]);
        let s1s2 = perm(&[2, 3, 1]);
        let s2s1 = perm(&[3, 1, 2]);
        let w0 = perm(&[3, 2, 1]);
        let all = [&e, &s1, &s2, &s1s2, &s2s1, &w0];
        for v in all {
            assert!(bruhat_leq(&e, v).unwrap());
            assert!(bruhat_leq(v, &w0).unwrap());
        }
        assert!(bruhat_leq(&s1, &s1s2).unwrap());
        assert!(bruhat_leq(&s1, &s2s1).unwrap());
        assert!(bruhat_leq(&s2, &s1s2).unwrap());
        assert!(bruhat_leq(&s2, &s2s1).unwrap());
        assert!(!bruhat_leq(&s1, &s2).unwrap());
        assert!(!bruhat_leq(&s2, &s1).unwrap());
        assert!(!bruhat_leq(&s1s2, &s2s1).unwrap());
        assert!(!bruhat_leq(&s2s1, &s1s2).unwrap());
        assert!(!bruhat_leq(&w0, &e).unwrap());
    }

    #[test]
    fn dominance_examples() {
        assert!(wc(&[1, 1]).dominates(&wc(&[0, 2])));
        assert!(!wc(&[0, 2]).dominates(&wc(&[1, 1])));
        assert!(wc(&[2, 0]).dominates(&wc(&[1, 1])));
        assert!(wc(&[1, 1]).dominates(&wc(&[1, 1])));
        // implicit zero padding on the right
        assert!(wc(&[1]).dominates(&wc(&[0, 1])));
        assert!(!wc(&[0, 1]).dominates(&wc(&[1])));
    }

    #[test]
    fn parsing_round_trips() {
        assert_eq!(parse_composition("0,2,0,1").unwrap(), Parsed::Weak(wc(&[0, 2, 0, 1])));
        let k = Komposition::new(vec![1, 2, 0], vec![false, true, false]).unwrap();
        assert_eq!(parse_composition("1,2r,0").unwrap(), Parsed::Colored(k.clone()));
        assert_eq!(k.to_string(), "1,2r,0");
        assert_eq!(k.excess(), 1);
        assert_eq!(wc(&[0, 2, 0, 1]).to_string(), "0,2,0,1");
    }

    #[test]
    fn parsing_rejects_bad_input() {
        assert!(parse_composition("").is_err());
        assert!(parse_composition("1,,2").is_err());
        assert!(parse_composition("0r").is_err());
        assert!(parse_composition("1,x").is_err());
        assert!(parse_composition("-1").is_err());
        assert!(parse_weak("1,2r").is_err());
        assert!(Komposition::new(vec![0], vec![true]).is_err());
        assert!(Komposition::new(vec![1, 2], vec![true]).is_err());
    }

    #[test]
    fn composition_accessors() {
        let a = wc(&[0, 6, 6, 2]);
        assert_eq!(a.weight(), 14);
        assert_eq!(a.positive_len(), 3);
        assert_eq!(a.max_part(), 6);
        assert_eq!(a.positive_part(), vec![6, 6, 2]);
        assert_eq!(a.sorted_partition().0, vec![6, 6, 2, 0]);
        assert_eq!(a.pad_to(6).unwrap().0, vec![0, 6, 6, 2, 0, 0]);
        assert!(a.pad_to(3).is_err());
        assert!(Partition::new(vec![3, 1, 2]).is_err());
        assert!(Permutation::new(vec![1, 1, 3]).is_err());
        assert_eq!(perm(&[3, 2, 4, 1]).inverse().images(), &[4, 2, 1, 3]);
    }
}
