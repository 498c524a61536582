//! Cyclotomic polynomials and the "n-th power of the roots" transform.
//!
//! Both are used to analyse characteristic polynomials of Frobenius: counting
//! root-of-unity eigenvalues means dividing by cyclotomic polynomials, and
//! passing to a base-field extension of degree n replaces every inverse root
//! alpha of the polynomial by alpha^n, which is computed exactly through
//! Newton power sums.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::poly::IntPoly;

static CYCLO_CACHE: LazyLock<Mutex<HashMap<usize, IntPoly>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// The n-th cyclotomic polynomial, by exact division of x^n - 1 by all
/// proper-divisor cyclotomics. Memoized.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be >= 1");
    if let Some(f) = CYCLO_CACHE.lock().unwrap().get(&n) {
        return f.clone();
    }
    let mut num = IntPoly::monomial(BigInt::one(), n).sub(&IntPoly::one());
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d);
            num = num
                .div_exact(&phi_d)
                .expect("x^n - 1 is divisible by every proper-divisor cyclotomic");
        }
    }
    CYCLO_CACHE.lock().unwrap().insert(n, num.clone());
    num
}

/// Euler's totient (used to cap cyclotomic search degrees).
pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Power sums of the inverse roots of f, where f(0) = 1 so that
/// f(x) = prod_i (1 - a_i x). Returns [p_0, p_1, ..., p_kmax] with
/// p_k = sum_i a_i^k, computed by the Newton recurrence
/// p_k = -(k c_k + sum_{j=1}^{k-1} c_j p_{k-j}) in exact integers.
pub fn power_sums(f: &IntPoly, kmax: usize) -> Vec<BigInt> {
    assert!(
        f.coeff(0).is_one(),
        "power_sums requires constant term 1, got {}",
        f.coeff(0)
    );
    let d = f.deg();
    let c: Vec<BigInt> = (1..=d).map(|k| f.coeff(k)).collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(kmax + 1);
    p.push(BigInt::from(d as i64)); // p_0 = number of roots
    for k in 1..=kmax {
        let mut sum = BigInt::zero();
        for j in 1..=(k - 1).min(d) {
            sum += &c[j - 1] * &p[k - j];
        }
        if k <= d {
            sum += BigInt::from(k as i64) * &c[k - 1];
        }
        p.push(-sum);
    }
    p
}

/// Given f with f(0) = 1, viewed as f(x) = prod_i (1 - a_i x), returns
/// g(x) = prod_i (1 - a_i^n x), exactly.
///
/// The inverse roots a_i are algebraic integers (the reversal of f is monic),
/// so all power sums and the output coefficients are rational integers; the
/// Newton recurrences below stay in exact integer arithmetic and every
/// division is checked.
pub fn roots_power_poly(f: &IntPoly, n: usize) -> IntPoly {
    assert!(n >= 1, "power must be >= 1");
    assert!(
        f.coeff(0).is_one(),
        "roots_power_poly requires constant term 1, got {}",
        f.coeff(0)
    );
    let d = f.deg();
    if d == 0 || n == 1 {
        return f.clone();
    }

    // Power sums p_k of the inverse roots, for k = 1..=n*d.
    let p = power_sums(f, n * d);

    // Transported power sums p'_k = p_{n k}, rebuilt into coefficients.
    let mut cp: Vec<BigInt> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut sum = p[n * k].clone();
        for j in 1..k {
            sum += &cp[j - 1] * &p[n * (k - j)];
        }
        let k_big = BigInt::from(k as i64);
        let (q, r) = num_integer::Integer::div_rem(&(-sum), &k_big);
        assert!(
            r.is_zero(),
            "Newton reconstruction divided inexactly; input was not of the stated form"
        );
        cp.push(q);
    }

    let mut coeffs = vec![BigInt::one()];
    coeffs.extend(cp);
    IntPoly::from_coeffs(coeffs)
}
