//! Extension fields F_{p^k} with a canonical deterministic modulus.
//!
//! A [`FieldDescriptor`] owns the modulus (a monic irreducible of degree k
//! over F_p, chosen by [`find_irreducible`], which is deterministic), and all
//! element arithmetic goes through descriptor methods. Elements carry their
//! (p, k) tag; every operation asserts tags match the descriptor, so elements
//! of different fields can never be mixed silently. Because the modulus
//! choice is deterministic, equal (p, k) implies the identical field.
//!
//! Field sizes are capped at q <= 10^8: the crate only ever enumerates small
//! fields exhaustively, and the cap turns runaway requests into a clean
//! resource-bound error.

use crate::error::{Error, Result};
use crate::finite_fields::fp_poly::FpPoly;

/// Exhaustive-enumeration guard: largest permitted field size.
pub const MAX_FIELD_SIZE: u64 = 100_000_000;

/// Deterministic Miller-Rabin, valid for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    // This base set is proven sufficient for n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Canonical monic irreducible of degree `k` over F_p: binomials `x^k - a`
/// for a = 1, 2, ... are tried first, then all monic polynomials in
/// ascending lexicographic coefficient order. Deterministic.
pub fn find_irreducible(p: u64, k: usize) -> Result<FpPoly> {
    if !is_prime_u64(p) {
        return Err(Error::BadParameters(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::BadParameters("extension degree must be >= 1".into()));
    }
    if k == 1 {
        return Ok(FpPoly::x(p));
    }
    // Binomials x^k - a.
    for a in 1..p {
        let mut coeffs = vec![0u64; k + 1];
        coeffs[0] = p - a;
        coeffs[k] = 1;
        let f = FpPoly::from_coeffs(p, coeffs);
        if f.is_irreducible() {
            return Ok(f);
        }
    }
    // Fallback: monic x^k + (lower part), lower parts in ascending base-p
    // counter order (constant digit least significant).
    let total = num_traits::pow::pow(p as u128, k);
    let mut idx: u128 = 0;
    while idx < total {
        let mut coeffs = vec![0u64; k + 1];
        let mut n = idx;
        for c in coeffs.iter_mut().take(k) {
            *c = (n % p as u128) as u64;
            n /= p as u128;
        }
        coeffs[k] = 1;
        let f = FpPoly::from_coeffs(p, coeffs);
        if f.is_irreducible() {
            return Ok(f);
        }
        idx += 1;
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {k} over F_{p} found"
    )))
}

/// An element of F_{p^k}: coefficients of length k over the canonical basis
/// 1, x, ..., x^{k-1}, tagged with (p, k).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct FieldElement {
    p: u64,
    k: usize,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Index in the canonical enumeration: sum of c_i p^i.
    pub fn index(&self) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }
}

/// A finite field F_{p^k} with its canonical modulus.
#[derive(Clone, Debug)]
pub struct FieldDescriptor {
    p: u64,
    k: usize,
    q: u64,
    modulus: FpPoly,
}

impl FieldDescriptor {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::BadParameters("extension degree must be >= 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q
                .checked_mul(p)
                .filter(|&v| v <= MAX_FIELD_SIZE)
                .ok_or_else(|| {
                    Error::ResourceBound(format!(
                        "field F_{{{p}^{k}}} exceeds the enumeration cap of {MAX_FIELD_SIZE} elements"
                    ))
                })?;
        }
        let modulus = find_irreducible(p, k)?;
        Ok(FieldDescriptor { p, k, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Field size q = p^k.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The canonical monic irreducible modulus.
    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    fn check(&self, a: &FieldElement) {
        assert_eq!(
            (a.p, a.k),
            (self.p, self.k),
            "element of F_{{{}^{}}} used with descriptor of F_{{{}^{}}}",
            a.p,
            a.k,
            self.p,
            self.k
        );
    }

    fn make(&self, mut coeffs: Vec<u64>) -> FieldElement {
        debug_assert!(coeffs.len() <= self.k);
        coeffs.resize(self.k, 0);
        FieldElement { p: self.p, k: self.k, coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.make(Vec::new())
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// Embeds an integer via reduction mod p.
    pub fn from_u64(&self, n: u64) -> FieldElement {
        self.make(vec![n % self.p])
    }

    /// Builds an element from basis coefficients (length <= k, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.k, "too many coefficients for F_{{{}^{}}}", self.p, self.k);
        self.make(coeffs.iter().map(|&c| c % self.p).collect())
    }

    /// Inverse of [`FieldElement::index`].
    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        assert!(idx < self.q, "index {idx} out of range for field of size {}", self.q);
        let mut coeffs = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            coeffs.push(idx % self.p);
            idx /= self.p;
        }
        self.make(coeffs)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.make(coeffs)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.check(a);
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        self.make(coeffs)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let fa = FpPoly::from_coeffs(self.p, a.coeffs.clone());
        let fb = FpPoly::from_coeffs(self.p, b.coeffs.clone());
        let prod = fa.mul(&fb).rem(&self.modulus);
        let mut coeffs = prod.coeffs().to_vec();
        coeffs.resize(self.k, 0);
        self.make(coeffs)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        self.check(a);
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &FieldElement) -> FieldElement {
        self.check(a);
        assert!(!a.is_zero(), "inverse of zero in F_{{{}^{}}}", self.p, self.k);
        self.pow(a, self.q - 2)
    }

    /// The p-power Frobenius a -> a^p.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    /// Requires odd q.
    pub fn quadratic_character(&self, a: &FieldElement) -> i8 {
        self.check(a);
        assert!(self.p != 2, "quadratic character requires odd characteristic");
        if a.is_zero() {
            return 0;
        }
        let s = self.pow(a, (self.q - 1) / 2);
        if s == self.one() {
            1
        } else {
            debug_assert_eq!(s, self.neg(&self.one()));
            -1
        }
    }

    /// Iterates over all q elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    /// Multiplicative order of a nonzero element (test/diagnostic use).
    pub fn multiplicative_order(&self, a: &FieldElement) -> u64 {
        self.check(a);
        assert!(!a.is_zero());
        let mut n = self.q - 1;
        // Reduce n by removing prime factors while the power stays 1.
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2u64;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        for f in factors {
            while n % f == 0 && self.pow(a, n / f) == self.one() {
                n /= f;
            }
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_irreducibles() {
        // Degree 1 convention: x itself.
        assert_eq!(find_irreducible(5, 1).unwrap(), FpPoly::x(5));
        // Binomial-first: x^2 - 3 over F_17 (x^2-1, x^2-2 are reducible).
        assert_eq!(
            find_irreducible(17, 2).unwrap(),
            FpPoly::from_coeffs(17, vec![14, 0, 1])
        );
        // F_25: x^2 - 2.
        assert_eq!(
            find_irreducible(5, 2).unwrap(),
            FpPoly::from_coeffs(5, vec![3, 0, 1])
        );
        // F_4 has no irreducible binomial; lex fallback finds x^2 + x + 1.
        assert_eq!(
            find_irreducible(2, 2).unwrap(),
            FpPoly::from_coeffs(2, vec![1, 1, 1])
        );
        assert!(find_irreducible(6, 2).is_err());
    }

    #[test]
    fn size_guard() {
        assert!(FieldDescriptor::new(100_003, 3).is_err());
        assert!(FieldDescriptor::new(5, 40).is_err());
        assert!(FieldDescriptor::new(19, 3).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f17 = FieldDescriptor::new(17, 1).unwrap();
        let five = f17.from_u64(5);
        let seven = f17.from_u64(7);
        // 5 * 7 = 35 = 1 in F_17.
        assert_eq!(f17.mul(&five, &seven), f17.one());
        assert_eq!(f17.inv(&five), seven);
        assert_eq!(f17.add(&f17.from_u64(9), &f17.from_u64(8)), f17.zero());
    }

    #[test]
    fn frobenius_fixes_after_k_applications() {
        let f25 = FieldDescriptor::new(5, 2).unwrap();
        for a in f25.elements() {
            let fr = f25.frobenius(&a);
            let fr2 = f25.frobenius(&fr);
            assert_eq!(fr2, a, "Frobenius^2 must fix F_25 pointwise");
        }
        // Frobenius must NOT be the identity (F_25 is a proper extension).
        assert!(f25.elements().any(|a| f25.frobenius(&a) != a));
    }

    #[test]
    fn quadratic_character_sums_to_zero() {
        for (p, k) in [(5u64, 2usize), (7, 1), (17, 1)] {
            let f = FieldDescriptor::new(p, k).unwrap();
            let sum: i64 = f.elements().map(|a| f.quadratic_character(&a) as i64).sum();
            assert_eq!(sum, 0, "character sum over F_{{{p}^{k}}}");
            // Exactly (q-1)/2 nonzero squares.
            let squares = f
                .elements()
                .filter(|a| f.quadratic_character(a) == 1)
                .count() as u64;
            assert_eq!(squares, (f.q() - 1) / 2);
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        let f9 = FieldDescriptor::new(3, 2).unwrap();
        let orders: Vec<u64> = f9
            .elements()
            .filter(|a| !a.is_zero())
            .map(|a| f9.multiplicative_order(&a))
            .collect();
        assert!(orders.iter().all(|&o| (f9.q() - 1) % o == 0));
        assert!(orders.iter().any(|&o| o == f9.q() - 1));
    }

    #[test]
    fn frobenius_polynomial_factors_have_degree_dividing_k() {
        // x^{25} - x over F_5 factors into irreducibles of degree 1 and 2 only.
        let p = 5u64;
        let mut coeffs = vec![0u64; 26];
        coeffs[1] = p - 1;
        coeffs[25] = 1;
        let f = FpPoly::from_coeffs(p, coeffs);
        let (_, factors) = f.factor();
        let mut total = 0usize;
        for (g, m) in &factors {
            assert!(2 % g.deg() == 0, "degree {} must divide 2", g.deg());
            assert_eq!(*m, 1);
            total += g.deg();
        }
        assert_eq!(total, 25);
    }

    #[test]
    fn index_round_trip() {
        let f49 = FieldDescriptor::new(7, 2).unwrap();
        for i in 0..f49.q() {
            let a = f49.from_index(i);
            assert_eq!(a.index(), i);
        }
    }

    #[test]
    #[should_panic(expected = "used with descriptor")]
    fn descriptor_mismatch_is_detected() {
        let f25 = FieldDescriptor::new(5, 2).unwrap();
        let f7 = FieldDescriptor::new(7, 1).unwrap();
        let a = f25.one();
        let _ = f7.add(&a, &f7.one());
    }
}
