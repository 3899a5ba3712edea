//! The polynomial families by name.
//!
//! Seven families are genuinely new here — glide, kaon, lascoux-atom,
//! quasi-lascoux, lascoux, quasi-grothendieck, symmetric-grothendieck — and
//! each has a classical counterpart obtained by setting b = 0: slide,
//! particle, demazure-atom, quasikey, demazure-character, quasi-schur,
//! schur. The first ten are indexed by a weak composition and live in as
//! many variables as it has entries. The stable four take a separate
//! variable count: quasi-grothendieck and quasi-schur are indexed by a
//! composition with no zero entries, symmetric-grothendieck and schur by a
//! partition, and both sum atom-type polynomials over all ways of placing
//! the index into the variables.

use std::fmt;

use crate::composition::WeakComposition;
use crate::error::{Error, Result};
use crate::glide::{glide_poly, kaon_poly};
use crate::kohnert::distinct_rearrangements;
use crate::polynomial::BetaPolynomial;
use crate::skyline::{filling_poly, SkylineVariant};

/// Every constructible family, keyed by its command-line name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Glide,
    Slide,
    Kaon,
    Particle,
    LascouxAtom,
    DemazureAtom,
    QuasiLascoux,
    Quasikey,
    Lascoux,
    DemazureCharacter,
    QuasiGrothendieck,
    QuasiSchur,
    SymmetricGrothendieck,
    Schur,
}

impl Family {
    /// Every family, in display order.
    pub const ALL: [Family; 14] = [
        Family::Glide,
        Family::Slide,
        Family::Kaon,
        Family::Particle,
        Family::LascouxAtom,
        Family::DemazureAtom,
        Family::QuasiLascoux,
        Family::Quasikey,
        Family::Lascoux,
        Family::DemazureCharacter,
        Family::QuasiGrothendieck,
        Family::QuasiSchur,
        Family::SymmetricGrothendieck,
        Family::Schur,
    ];

    /// The hyphenated name used on the command line and in serialized output.
    pub fn name(self) -> &'static str {
        match self {
            Family::Glide => "glide",
            Family::Slide => "slide",
            Family::Kaon => "kaon",
            Family::Particle => "particle",
            Family::LascouxAtom => "lascoux-atom",
            Family::DemazureAtom => "demazure-atom",
            Family::QuasiLascoux => "quasi-lascoux",
            Family::Quasikey => "quasikey",
            Family::Lascoux => "lascoux",
            Family::DemazureCharacter => "demazure-character",
            Family::QuasiGrothendieck => "quasi-grothendieck",
            Family::QuasiSchur => "quasi-schur",
            Family::SymmetricGrothendieck => "symmetric-grothendieck",
            Family::Schur => "schur",
        }
    }

    /// Looks a family up by name.
    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }

    /// True for the classical specializations obtained by setting b = 0.
    pub fn sets_beta_zero(self) -> bool {
        matches!(
            self,
            Family::Slide
                | Family::Particle
                | Family::DemazureAtom
                | Family::Quasikey
                | Family::DemazureCharacter
                | Family::QuasiSchur
                | Family::Schur
        )
    }

    /// The family constructed the same way with b kept.
    pub fn unspecialized(self) -> Family {
        match self {
            Family::Slide => Family::Glide,
            Family::Particle => Family::Kaon,
            Family::DemazureAtom => Family::LascouxAtom,
            Family::Quasikey => Family::QuasiLascoux,
            Family::DemazureCharacter => Family::Lascoux,
            Family::QuasiSchur => Family::QuasiGrothendieck,
            Family::Schur => Family::SymmetricGrothendieck,
            other => other,
        }
    }

    /// True for the families indexed independently of the variable count.
    pub fn is_stable(self) -> bool {
        matches!(
            self,
            Family::QuasiGrothendieck
                | Family::QuasiSchur
                | Family::SymmetricGrothendieck
                | Family::Schur
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The member of `family` indexed by `a`, in `n` variables.
///
/// For the ten unstable families `n` defaults to the index length and may
/// only pad it with trailing zeros; for the stable four it defaults to the
/// index length but is otherwise unconstrained.
pub fn family_poly(family: Family, a: &WeakComposition, n: Option<usize>) -> Result<BetaPolynomial> {
    let n = n.unwrap_or(a.len());
    let full = match family.unspecialized() {
        Family::Glide => glide_poly(&a.pad_to(n)?),
        Family::Kaon => kaon_poly(&a.pad_to(n)?),
        Family::LascouxAtom => filling_poly(&a.pad_to(n)?, SkylineVariant::Atom),
        Family::QuasiLascoux => filling_poly(&a.pad_to(n)?, SkylineVariant::Quasi),
        Family::Lascoux => filling_poly(&a.pad_to(n)?, SkylineVariant::Key),
        Family::QuasiGrothendieck => quasi_grothendieck_poly(a, n)?,
        Family::SymmetricGrothendieck => symmetric_grothendieck_poly(a, n)?,
        _ => unreachable!("unspecialized always lands on a constructor"),
    };
    Ok(if family.sets_beta_zero() { full.specialize_beta(0) } else { full })
}

/// The quasisymmetric sum of atom-type polynomials over all placements of
/// the zero-free composition `alpha` into `n` positions.
pub fn quasi_grothendieck_poly(alpha: &WeakComposition, n: usize) -> Result<BetaPolynomial> {
    if alpha.0.iter().any(|&v| v == 0) {
        return Err(Error::InvalidIndex(format!(
            "index {} has zero entries; this family wants a composition without them",
            alpha
        )));
    }
    let k = alpha.len();
    let mut total = BetaPolynomial::zero(n);
    if k > n {
        return Ok(total);
    }
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        let mut b = vec![0u32; n];
        for (j, &p) in positions.iter().enumerate() {
            b[p] = alpha.0[j];
        }
        total = total.add(&filling_poly(&WeakComposition(b), SkylineVariant::Atom))?;
        // advance to the next increasing position list
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(total);
            }
            j -= 1;
            if positions[j] < n - k + j {
                positions[j] += 1;
                for jj in j + 1..k {
                    positions[jj] = positions[jj - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The symmetric sum of atom-type polynomials over all distinct
/// rearrangements of the partition `lambda` padded to `n` entries.
pub fn symmetric_grothendieck_poly(lambda: &WeakComposition, n: usize) -> Result<BetaPolynomial> {
    if lambda.0.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidIndex(format!(
            "index {} is not weakly decreasing; this family wants a partition",
            lambda
        )));
    }
    let k = lambda.positive_len();
    let mut total = BetaPolynomial::zero(n);
    if k > n {
        return Ok(total);
    }
    let mut pool: Vec<u32> = lambda.0.iter().copied().filter(|&v| v > 0).collect();
    pool.resize(n, 0);
    pool.sort_unstable();
    let mut current = Vec::with_capacity(n);
    distinct_rearrangements(&mut pool, &mut current, &mut |b| {
        total = total.add(&filling_poly(&WeakComposition(b.to_vec()), SkylineVariant::Atom))?;
        Ok(())
    })?;
    Ok(total)
}

/// Checks that prepending `m` zeros to `a` and keeping the first `m`
/// variables of its quasi-type polynomial recovers the stable family at the
/// positive part of `a`.
pub fn stable_limit_check(a: &WeakComposition, m: usize) -> Result<bool> {
    let mut padded = vec![0u32; m];
    padded.extend_from_slice(&a.0);
    let shifted = filling_poly(&WeakComposition(padded), SkylineVariant::Quasi).restrict_vars(m)?;
    let stable = quasi_grothendieck_poly(&WeakComposition(a.positive_part()), m)?;
    Ok(shifted == stable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn wc(v: &[u32]) -> WeakComposition {
        WeakComposition(v.to_vec())
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()).unwrap(), f);
            assert_eq!(f.unspecialized().sets_beta_zero(), false);
        }
        assert!(Family::parse("grothendieck").is_err());
    }

    #[test]
    fn beta_zero_families_forget_the_higher_terms() {
        let a = wc(&[1, 0, 2]);
        let atom = family_poly(Family::DemazureAtom, &a, None).unwrap();
        // x1*x3^2 + x1*x2*x3 and nothing else
        assert_eq!(atom.num_terms(), 2);
        assert_eq!(atom.coeff(&[1, 0, 2], 0), BigInt::from(1));
        assert_eq!(atom.coeff(&[1, 1, 1], 0), BigInt::from(1));
        let full = family_poly(Family::LascouxAtom, &a, None).unwrap();
        assert_eq!(full.specialize_beta(0), atom);
        assert_eq!(full.num_terms(), 8);
    }

    #[test]
    fn padding_with_trailing_zeros() {
        let a = wc(&[0, 2]);
        let padded = family_poly(Family::Glide, &a, Some(4)).unwrap();
        assert_eq!(padded.num_vars(), 4);
        assert!(family_poly(Family::Glide, &a, Some(1)).is_err());
    }

    #[test]
    fn schur_in_three_variables() {
        let s = family_poly(Family::Schur, &wc(&[2, 1]), Some(3)).unwrap();
        assert!(s.is_symmetric());
        assert_eq!(s.coeff(&[2, 1, 0], 0), BigInt::from(1));
        assert_eq!(s.coeff(&[1, 1, 1], 0), BigInt::from(2));
        assert_eq!(s.num_terms(), 7);
    }

    #[test]
    fn stable_families_are_as_symmetric_as_promised() {
        let j = family_poly(Family::QuasiGrothendieck, &wc(&[2, 1]), Some(3)).unwrap();
        assert!(j.is_quasisymmetric());
        assert!(!j.is_symmetric());
        let g = family_poly(Family::SymmetricGrothendieck, &wc(&[2, 1]), Some(3)).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.specialize_beta(0), family_poly(Family::Schur, &wc(&[2, 1]), Some(3)).unwrap());
    }

    #[test]
    fn stable_indices_are_validated() {
        assert!(quasi_grothendieck_poly(&wc(&[1, 0, 2]), 3).is_err());
        assert!(symmetric_grothendieck_poly(&wc(&[1, 2]), 3).is_err());
        // too few variables leaves nothing to sum
        assert!(family_poly(Family::Schur, &wc(&[2, 1]), Some(1)).unwrap().is_zero());
    }

    #[test]
    fn a_small_stable_limit() {
        assert!(stable_limit_check(&wc(&[1]), 1).unwrap());
        assert!(stable_limit_check(&wc(&[2]), 2).unwrap());
    }
}
