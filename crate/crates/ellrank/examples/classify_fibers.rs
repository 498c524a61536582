//! Classify the singular fibers of a Weierstrass model over Q(t).
//!
//! The classification minimalizes the model, factors the discriminant into
//! places (irreducible polynomials plus the point at infinity), reads the
//! Kodaira type off the valuations of A, B, and the discriminant at each
//! place, and sums local Euler numbers to decide what surface the fibration
//! lives on (12 = rational, 24 = K3).
//!
//! Run with: cargo run -p ellrank --example classify_fibers

use ellrank::kodaira::{fiber_configuration, SurfaceKind};
use ellrank::ranks::rational_mw_rank;
use ellrank::weierstrass::families::{auxiliary_e_prime_c, certified_k3};
use ellrank::weierstrass::parse::parse_model;
use num_rational::BigRational;

fn main() {
    // A rational elliptic surface: the auxiliary family member E'_2 with
    // one III* fiber at t = 0 and three nodal fibers. On a rational
    // elliptic surface the Shioda-Tate identity is an equality, so the
    // Mordell-Weil rank is exact: 8 - sum deg(P) (m(P) - 1).
    let aux = auxiliary_e_prime_c(&BigRational::from_integer(2.into()));
    let config = fiber_configuration(&aux).expect("E'_2 is nondegenerate");
    println!("E'_2: {aux}");
    println!("{config}");
    assert_eq!(config.surface_kind, SurfaceKind::Rational);
    let mw = rational_mw_rank(&config).expect("the surface is rational");
    println!("Mordell-Weil rank (exact, rational surface) = {mw}\n");
    assert_eq!(mw, 1);

    // A K3: the certified twist companion. Its five singular places
    // contribute a rank-15 sublattice; with the zero section and a general
    // fiber, Shioda-Tate gives rho >= 17.
    let k3 = certified_k3();
    let config = fiber_configuration(&k3).expect("the preset is nondegenerate");
    println!("certified K3: {k3}");
    println!("{config}");
    assert_eq!(config.surface_kind, SurfaceKind::K3);
    println!(
        "Shioda-Tate: rho >= 2 + {} = {}\n",
        config.fiber_rank_contribution(),
        2 + config.fiber_rank_contribution()
    );
    assert_eq!(config.fiber_rank_contribution(), 15);

    // Models also come from the two-line file format the CLI reads.
    // Non-minimal input is fine: classification minimalizes first.
    let scaled = parse_model("A = t^4 (t - 1)\nB = t^6 (t^2 + 1)\n").expect("parses");
    let config = fiber_configuration(&scaled).expect("nondegenerate");
    println!("from a file, minimalized: {}", config.minimal_model);
    println!("{config}");
}
