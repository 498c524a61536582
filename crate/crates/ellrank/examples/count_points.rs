//! Count points on a reduced elliptic surface over small finite fields.
//!
//! Reduction mod p is accepted only when it is demonstrably good: the
//! mod-p fiber configuration must reproduce the characteristic-0 one.
//! Counting runs on the smooth model: the Weierstrass chart is counted
//! fiberwise with quadratic-character sums, then each singular fiber
//! receives its blow-up correction (I1 adds nothing; I0* adds q(1 + r)
//! with r the number of rational outer components; III* adds 7q).
//!
//! Run with: cargo run -p ellrank --example count_points

use ellrank::weierstrass::families::certified_k3;
use ellrank::zeta::{reduce_mod_p, trace_data};

fn main() {
    let model = certified_k3();
    println!("counting on: {model}\n");

    for p in [17u64, 19] {
        let surface = reduce_mod_p(&model, p).expect("good reduction");
        println!("p = {p}: reduction is good (same fiber multiset as char 0)");
        for k in 1..=2 {
            let data = trace_data(&surface, k).expect("within the counting bound");
            println!(
                "  F_{{{p}^{k}}}: q = {:>4}, #X(F_q) = {:>9}, t2 = #X - 1 - q^2 = {:>6}",
                data.q, data.point_count, data.t2
            );
            // Weil: every H^2 eigenvalue has absolute value q, so |t2| <= 22q.
            assert!(data.t2.unsigned_abs() <= 22 * data.q);
        }
    }

    // Bad primes are rejected, not mis-counted: at p = 5 the I0* place
    // 4t - 1 collides with both roots of the quadratic I1 place and
    // degenerates to I2*.
    let err = reduce_mod_p(&model, 5).unwrap_err();
    println!("\np = 5 is rejected: {err}");

    // Wild small primes are out of scope for short Weierstrass models.
    let err = reduce_mod_p(&model, 2).unwrap_err();
    println!("p = 2 is rejected: {err}");
}
