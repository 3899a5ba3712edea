//! Exact arithmetic for deformation polynomial families built from colored
//! compositions, set-valued skyline fillings, and box diagram moves, together
//! with combinatorial expansion of one family in another and conjecture scans.

pub mod composition;
pub mod error;
pub mod expand;
pub mod family;
pub mod glide;
pub mod kohnert;
pub mod polynomial;
pub mod scan;
pub mod skyline;
pub mod verify;

pub use composition::{
    bruhat_leq, parse_composition, parse_weak, sort_and_w, Komposition, Parsed, Partition,
    Permutation, WeakComposition,
};
pub use error::{Error, Result};
pub use polynomial::{BetaPolynomial, PolyDto, Term, TermDto, ZBeta};
