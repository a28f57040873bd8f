//! Prime fields, monomials, orders, sparse polynomials and the input grammar.

pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use field::{check_prime, FpElement};
pub use monomial::{compare_monomials, Monomial, MonomialOrder, OrderKind, MAX_VARS};
pub use parse::{parse_in, parse_poly};
pub use poly::{frobenius_power, poly_arith, Poly, PolyOp};
pub use ring::{Ring, RingBuilder, RingRef};
