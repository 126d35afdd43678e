//! Continued fractions of formal Laurent series in `T^-1` over Q, F_p and
//! simple number fields, with exact arithmetic throughout.
//!
//! Everything is generic over a [`Field`] context; the aliases below name the
//! three concrete instantiations.

pub mod algebra;
pub mod contfrac;
pub mod error;
pub mod laurent;
pub mod mcmullen;
pub mod reduction;
pub mod surd;
pub mod zaremba;

pub use algebra::{Field, NumberField, Poly, PrimeField, Rationals};
pub use error::{Error, Result};

pub type QPoly = Poly<Rationals>;
pub type FpPoly = Poly<PrimeField>;
pub type NfPoly = Poly<NumberField>;
