//! Build the rank-15 family member E_{a,b,c} and identify a named member.
//!
//! The family arises by pulling an auxiliary rational surface back through
//! two quadratic base changes. For (a, b, c) = (2, 4, 2) the minimalized
//! result is exactly
//!
//!     y^2 = x^3 + 2 (t^8 + 14 t^4 + 1) x + 4 t^2 (t^8 + 6 t^4 + 1),
//!
//! and the identification is certified by an explicit scaling witness u
//! with (A, B) -> (u^4 A, u^6 B).
//!
//! Run with: cargo run -p ellrank --example construct_family

use ellrank::algebra::expr::parse_poly;
use ellrank::weierstrass::families::family_e_abc;
use ellrank::weierstrass::model::WeierstrassModel;
use num_rational::BigRational;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn main() {
    let family = family_e_abc(&rat(2), &rat(4), &rat(2)).expect("valid parameters");
    println!("E_{{2,4,2}} as constructed: {family}");

    let min = family.minimalize();
    println!("minimalized:               {}", min.model);
    println!("minimalization scale u = {}", min.scale);

    // The displayed form of the same surface.
    let a = parse_poly("2(t^8 + 14t^4 + 1)", "t").unwrap();
    let b = parse_poly("4t^2(t^8 + 6t^4 + 1)", "t").unwrap();
    let displayed = WeierstrassModel::new(a, b).expect("nondegenerate");

    assert_eq!(min.model, displayed);
    assert_eq!(min.scale.to_string(), "8");

    // The same certificate as a rescaling witness: the constructed model is
    // the displayed one with (A, B) -> (8^4 A, 8^6 B).
    let witness = family
        .is_isomorphic(&displayed)
        .expect("the construction is the displayed surface up to rescaling");
    println!("isomorphism witness u = {witness}");
    assert_eq!(witness.to_string(), "8");

    // Degenerate parameters are rejected, not silently accepted: a = b
    // collapses the two critical values of the base map.
    let err = family_e_abc(&rat(1), &rat(1), &rat(1)).unwrap_err();
    println!("\n(1,1,1) is rejected: {err}");
}
