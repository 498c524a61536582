//! Exact-arithmetic certification of Mordell-Weil rank bounds for elliptic
//! surfaces over Q(t).
//!
//! The crate builds Weierstrass models `y^2 = x^3 + A(t) x + B(t)` with
//! integer polynomial coefficients, classifies their singular fibers,
//! manipulates them (quadratic twists, base changes, minimalization), counts
//! points on their reductions over small finite fields, reconstructs
//! characteristic polynomials of Frobenius on H^2, and combines
//! Shioda–Tate lower bounds with two-prime Artin–Tate/van-Luijk upper bounds
//! into machine-checkable rank certificates.
//!
//! Everything is exact: integers and rationals are arbitrary precision, all
//! divisions are checked, and floating point appears only inside one
//! conservative root-magnitude filter (backed by exact pre-filters).
//!
//! The `examples/` directory is the guided tour: each example runs one major
//! capability end to end. The thin `ellrank` binary exposes the same
//! functionality as `fibers`, `construct`, `count`, and `certify` subcommands.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod finite_fields;
pub mod kodaira;
pub mod picard;
pub mod ranks;
pub mod report;
pub mod weierstrass;
pub mod zeta;

pub use error::{Error, Result};
