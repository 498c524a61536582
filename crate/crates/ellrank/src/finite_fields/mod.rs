//! Finite fields F_q, q = p^k: prime-field polynomial arithmetic with
//! deterministic factorization, extension fields with a canonical
//! deterministic modulus, and character/enumeration utilities sized for
//! exhaustive point counting (q <= 10^8).

pub mod field;
pub mod fp_poly;

pub use field::{find_irreducible, is_prime_u64, FieldDescriptor, FieldElement};
pub use fp_poly::FpPoly;
