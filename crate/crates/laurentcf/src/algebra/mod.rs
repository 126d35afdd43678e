//! Exact fields and polynomials.

pub mod field;
pub mod numfield;
pub mod parse;
pub mod poly;

pub use field::{int_valuation, is_prime_u64, rational_sqrt, rational_valuation, Field, PrimeField, Rationals};
pub use numfield::{Irreducibility, NfElem, NumberField};
pub use parse::{
    eval_poly, eval_quad, parse_elem, parse_expr, parse_field, parse_poly, parse_quad, AnyField, Expr,
    QuadValue,
};
pub use poly::Poly;
