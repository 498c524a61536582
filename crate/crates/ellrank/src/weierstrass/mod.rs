//! Weierstrass models of elliptic surfaces over Q(t) and the geometric
//! operations on them: standard invariants, valuations at places of P^1,
//! minimalization, isomorphism testing, quadratic twists, and base changes.

pub mod families;
pub mod model;
pub mod parse;

pub use families::{auxiliary_e_prime_c, double_cover_branched_at, f_ab_map, family_e_abc};
pub use model::{Place, PlaceValuations, WeierstrassModel};
pub use parse::{parse_model, render_model};
