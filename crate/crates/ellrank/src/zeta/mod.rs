//! Frobenius data of elliptic surfaces over finite fields: good reduction,
//! exhaustive exact point counting, and reconstruction of the
//! characteristic polynomial of Frobenius acting on H^2.

pub mod counting;
pub mod reconstruct;
pub mod reduction;

pub use counting::{
    count_smooth_points, count_weierstrass_points, trace_data, trace_of_frobenius_h2,
    FieldTables, TraceData, MAX_COUNTING_FIELD,
};
pub use reconstruct::{algebraic_factor, charpoly_from_traces, full_charpoly, CharPolyH2};
pub use reduction::{reduce_mod_p, ReducedFiber, ReducedSurface};
