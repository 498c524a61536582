//! Exact commutative algebra: arbitrary-precision integer polynomials,
//! rational functions, integer and polynomial factorization, square classes,
//! cyclotomic polynomials, and root-power transports.

pub mod cyclotomic;
pub mod expr;
pub mod factor_int;
pub mod factor_poly;
pub mod poly;
pub mod ratfunc;
pub mod square_class;

pub use cyclotomic::{cyclotomic, euler_phi, power_sums, roots_power_poly};
pub use expr::parse_poly;
pub use factor_int::{factor_integer, FactorBudget, IntFactorization};
pub use factor_poly::{factor_over_q, PolyFactorization};
pub use poly::IntPoly;
pub use ratfunc::RatFunc;
pub use square_class::SquareClass;
