//! Dense univariate polynomials over a prime field F_p (p an odd or even
//! machine-word prime), with deterministic factorization.
//!
//! Representation invariant: coefficients lowest degree first, reduced into
//! [0, p), no trailing zeros; zero is the empty vector. Every binary
//! operation asserts both operands share the same p.
//!
//! Factorization is fully deterministic: distinct-degree factorization
//! followed by equal-degree splitting that enumerates candidate polynomials
//! in a fixed order (x, x+1, ..., x^2, x^2+1, ...) instead of sampling.

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    powmod_u64(a, p - 2, p)
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::constant(p, 1)
    }

    pub fn x(p: u64) -> Self {
        FpPoly::from_coeffs(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::from_coeffs(p, vec![c])
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<u64>) -> Self {
        let mut v: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        FpPoly { p, coeffs: v }
    }

    /// Reduces an integer polynomial mod p.
    pub fn from_intpoly(p: u64, f: &IntPoly) -> Self {
        let bp = BigInt::from(p);
        let v = f
            .coeffs()
            .iter()
            .map(|c| {
                let m = c.mod_floor(&bp);
                let (_, digits) = m.to_u64_digits();
                digits.first().copied().unwrap_or(0)
            })
            .collect();
        FpPoly::from_coeffs(p, v)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed prime fields {} vs {}", self.p, other.p);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        FpPoly::from_coeffs(self.p, v)
    }

    pub fn neg(&self) -> Self {
        let v = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        FpPoly::from_coeffs(self.p, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut v = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                v[idx] = (v[idx] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::from_coeffs(self.p, v)
    }

    pub fn mul_scalar(&self, c: u64) -> Self {
        let c = c % self.p;
        let v = self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect();
        FpPoly::from_coeffs(self.p, v)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.mul_scalar(invmod(self.leading(), self.p))
    }

    /// Division with remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        self.assert_same_field(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        if self.degree().map(|n| n < dd).unwrap_or(true) {
            return (FpPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let lc_inv = invmod(d.leading(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + dd] % p;
            if top == 0 {
                continue;
            }
            let c = mulmod(top, lc_inv, p);
            q[k] = c;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let sub = mulmod(c, dc, p);
                let idx = k + i;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        (FpPoly::from_coeffs(p, q), FpPoly::from_coeffs(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, (i as u64) % self.p, self.p))
            .collect();
        FpPoly::from_coeffs(self.p, v)
    }

    pub fn evaluate(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    /// `self^e mod m`, square-and-multiply over the bits of `e`.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        self.assert_same_field(m);
        assert!(m.degree().map(|d| d >= 1).unwrap_or(false), "modulus must be non-constant");
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.deg() == 0 {
            return true;
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).deg() == 0
    }

    /// True if monic-normalized `self` is irreducible over F_p.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let p = BigUint::from(self.p);
        let x = FpPoly::x(self.p);
        // x^{p^n} == x mod f
        let q_n = num_traits::pow::pow(p.clone(), n);
        if x.powmod(&q_n, &f) != x.rem(&f) {
            return false;
        }
        // gcd(x^{p^{n/l}} - x, f) == 1 for every prime l | n
        let mut m = n;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for l in primes {
            let q_nl = num_traits::pow::pow(p.clone(), n / l);
            let h = x.powmod(&q_nl, &f).sub(&x);
            if f.gcd(&h).deg() != 0 {
                return false;
            }
        }
        true
    }

    /// Full factorization: returns `(leading unit, [(monic irreducible, multiplicity)])`
    /// sorted by (degree, coefficient vector). Deterministic.
    ///
    /// Panics on the zero polynomial.
    pub fn factor(&self) -> (u64, Vec<(FpPoly, u32)>) {
        assert!(!self.is_zero(), "factorization of zero polynomial");
        let unit = self.leading();
        let f = self.monic();
        if f.deg() == 0 {
            return (unit, Vec::new());
        }
        let mut result: Vec<(FpPoly, u32)> = Vec::new();
        let irreducibles = distinct_irreducible_factors(&f);
        for g in irreducibles {
            // Multiplicity by repeated division of the original.
            let mut m = 0u32;
            let mut cur = f.clone();
            loop {
                let (q, r) = cur.divrem(&g);
                if r.is_zero() {
                    m += 1;
                    cur = q;
                } else {
                    break;
                }
            }
            debug_assert!(m >= 1);
            result.push((g, m));
        }
        result.sort_by(|a, b| {
            (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs()))
        });
        let check: usize = result.iter().map(|(g, m)| g.deg() * *m as usize).sum();
        assert_eq!(check, f.deg(), "factor degrees must sum to the input degree");
        (unit, result)
    }
}

impl std::fmt::Display for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    if c != 1 {
                        write!(f, "{c}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// All distinct monic irreducible factors of a monic polynomial.
fn distinct_irreducible_factors(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.prime();
    if f.deg() == 0 {
        return Vec::new();
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p); over F_p the pth root re-strides coefficients.
        let strided: Vec<u64> = f.coeffs().iter().step_by(p as usize).copied().collect();
        let g = FpPoly::from_coeffs(p, strided);
        return distinct_irreducible_factors(&g.monic());
    }
    let radical = {
        let g = f.gcd(&d);
        f.divrem(&g).0.monic()
    };
    // The radical can still miss factors whose multiplicity is divisible by p;
    // recover them from the cofactor.
    let mut out = factor_squarefree(&radical);
    let mut cofactor = f.clone();
    for g in &out {
        loop {
            let (q, r) = cofactor.divrem(g);
            if r.is_zero() {
                cofactor = q;
            } else {
                break;
            }
        }
    }
    if cofactor.deg() > 0 {
        for g in distinct_irreducible_factors(&cofactor.monic()) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Distinct-degree then equal-degree factorization of a monic squarefree input.
fn factor_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.prime();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let x = FpPoly::x(p);
    let mut rest = f.clone();
    let mut h = x.rem(&rest); // x^{p^d} mod rest, updated per degree d
    let mut d = 0usize;
    while rest.deg() >= 1 {
        d += 1;
        if rest.deg() < 2 * d {
            // rest itself is irreducible.
            out.push(rest.monic());
            break;
        }
        h = h.powmod(&BigUint::from(p), &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.deg() > 0 {
            for piece in equal_degree_factor(&g, d) {
                out.push(piece);
            }
            rest = rest.divrem(&g).0.monic();
            h = h.rem(&rest);
        }
    }
    out
}

/// Deterministic equal-degree factorization: every irreducible factor of `f`
/// has degree `d`.
fn equal_degree_factor(f: &FpPoly, d: usize) -> Vec<FpPoly> {
    let p = f.prime();
    if f.deg() == d {
        return vec![f.monic()];
    }
    // Enumerate candidate polynomials in a fixed order: index i >= p encodes
    // base-p digits as coefficients, so x, x+1, ..., x^2, x^2+1, ... in turn.
    let mut idx: u64 = p;
    loop {
        let mut coeffs = Vec::new();
        let mut n = idx;
        while n > 0 {
            coeffs.push(n % p);
            n /= p;
        }
        let cand = FpPoly::from_coeffs(p, coeffs);
        idx += 1;
        if cand.degree().map(|n| n == 0).unwrap_or(true) {
            continue;
        }
        let split = if p == 2 {
            // Trace splitting over F_2: T(c) = c + c^2 + ... + c^{2^{d-1}}.
            let mut t = cand.rem(f);
            let mut c = cand.rem(f);
            for _ in 1..d {
                c = c.mul(&c).rem(f);
                t = t.add(&c);
            }
            f.gcd(&t)
        } else {
            // gcd(cand^{(p^d-1)/2} - 1, f)
            let e = (num_traits::pow::pow(BigUint::from(p), d) - BigUint::one()) / BigUint::from(2u32);
            let g = cand.powmod(&e, f).sub(&FpPoly::one(p));
            f.gcd(&g)
        };
        if !split.is_zero() && split.deg() > 0 && split.deg() < f.deg() {
            let rest = f.divrem(&split).0.monic();
            let mut out = equal_degree_factor(&split.monic(), d);
            out.extend(equal_degree_factor(&rest, d));
            return out;
        }
        assert!(
            idx < p.saturating_mul(p).saturating_mul(p).saturating_mul(p).max(1 << 20),
            "equal-degree splitting failed to find a splitter (p={p}, d={d})"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::from_coeffs(p, c.to_vec())
    }

    #[test]
    fn arithmetic_mod_5() {
        let a = fp(5, &[1, 1]);
        let b = fp(5, &[4, 1]); // t + 4 = t - 1
        assert_eq!(a.mul(&b), fp(5, &[4, 0, 1])); // t^2 - 1
        assert_eq!(a.add(&b), fp(5, &[0, 2]));
        assert_eq!(a.sub(&a), FpPoly::zero(5));
    }

    #[test]
    fn divrem_identity() {
        let f = fp(7, &[3, 0, 2, 5, 1]);
        let d = fp(7, &[1, 2, 3]);
        let (q, r) = f.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), f);
        assert!(r.degree().map(|n| n < 2).unwrap_or(true));
    }

    #[test]
    fn gcd_is_monic() {
        // (t-1)(t-2) and (t-1)(t-3) over F_7 share t-1.
        let a = fp(7, &[6, 1]).mul(&fp(7, &[5, 1]));
        let b = fp(7, &[6, 1]).mul(&fp(7, &[4, 1]));
        assert_eq!(a.gcd(&b), fp(7, &[6, 1]));
    }

    #[test]
    fn powmod_frobenius() {
        // x^p == x mod (x^2 - x) trivially; check a nontrivial case:
        // x^5 mod (x^2+1) over F_5: x^2 = -1 => x^5 = x.
        let m = fp(5, &[1, 0, 1]);
        let x = FpPoly::x(5);
        assert_eq!(x.powmod(&BigUint::from(5u32), &m), x);
    }

    #[test]
    fn irreducibility() {
        // x^2 + 1 over F_5: -1 = 4 = 2^2 is a square => reducible.
        assert!(!fp(5, &[1, 0, 1]).is_irreducible());
        // x^2 - 3 over F_17: 3 is a non-residue mod 17 => irreducible.
        assert!(fp(17, &[14, 0, 1]).is_irreducible());
        // x^3 + x + 1 over F_5 has no roots and degree 3 => irreducible.
        assert!(fp(5, &[1, 1, 0, 1]).is_irreducible());
        assert!(fp(5, &[0, 1]).is_irreducible());
        assert!(!fp(5, &[3]).is_irreducible());
        // x^2 over F_2 is reducible; x^2 + x + 1 over F_2 irreducible.
        assert!(!fp(2, &[0, 0, 1]).is_irreducible());
        assert!(fp(2, &[1, 1, 1]).is_irreducible());
    }

    #[test]
    fn factor_recomposes_and_sorts() {
        // 3 (t-1)^2 (t^2+2) over F_5; t^2+2: -2 = 3 non-square mod 5 => irreducible.
        let f = fp(5, &[4, 1]).mul(&fp(5, &[4, 1])).mul(&fp(5, &[2, 0, 1])).mul_scalar(3);
        let (unit, factors) = f.factor();
        assert_eq!(unit, 3);
        assert_eq!(
            factors,
            vec![(fp(5, &[4, 1]), 2), (fp(5, &[2, 0, 1]), 1)]
        );
        let mut acc = FpPoly::constant(5, unit);
        for (g, m) in &factors {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        assert_eq!(acc, f);
    }

    #[test]
    fn factor_splits_equal_degree_parts() {
        // x^2 - 2 = (x-6)(x+6) over F_17 (6^2 = 36 = 2).
        let f = fp(17, &[15, 0, 1]);
        let (_, factors) = f.factor();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|(g, m)| g.deg() == 1 && *m == 1));
        // x^4 + 1 factors into two quadratics over F_7.
        let f = fp(7, &[1, 0, 0, 0, 1]);
        let (_, factors) = f.factor();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|(g, m)| g.deg() == 2 && *m == 1));
    }

    #[test]
    fn factor_handles_p_th_power_multiplicities() {
        // (t+1)^5 over F_5 has zero derivative chain.
        let f = fp(5, &[1, 1]).powmulti(5);
        let (_, factors) = f.factor();
        assert_eq!(factors, vec![(fp(5, &[1, 1]), 5)]);
        // x^10 + ... : (t^2+2)^5 over F_5.
        let g = fp(5, &[2, 0, 1]).powmulti(5);
        let (_, factors) = g.factor();
        assert_eq!(factors, vec![(fp(5, &[2, 0, 1]), 5)]);
    }

    #[test]
    fn factor_over_f2() {
        // x^4 + x = x (x+1) (x^2+x+1) over F_2.
        let f = fp(2, &[0, 1, 0, 0, 1]);
        let (unit, factors) = f.factor();
        assert_eq!(unit, 1);
        assert_eq!(
            factors,
            vec![
                (fp(2, &[0, 1]), 1),
                (fp(2, &[1, 1]), 1),
                (fp(2, &[1, 1, 1]), 1)
            ]
        );
    }

    impl FpPoly {
        fn powmulti(&self, e: u32) -> FpPoly {
            let mut acc = FpPoly::one(self.prime());
            for _ in 0..e {
                acc = acc.mul(self);
            }
            acc
        }
    }
}
