//! Factorization in Q[t] by the classical modular method: squarefree
//! decomposition (Yun), factorization modulo a good small prime, quadratic
//! Hensel lifting to a modulus beyond the Mignotte bound, and subset
//! recombination. Everything is exact and deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::poly::IntPoly;
use crate::error::{Error, Result};
use crate::finite_fields::is_prime_u64;
use crate::finite_fields::FpPoly;

/// Largest degree we factor; the surfaces handled by this crate keep
/// discriminants well below this.
pub const MAX_FACTOR_DEGREE: usize = 64;

/// Largest number of modular factors we will recombine (subset search is
/// exponential in this count).
const MAX_MODULAR_FACTORS: usize = 20;

/// Factorization of a nonzero integer polynomial over Q, normalized as
/// content * product of primitive irreducible factors with positive leading
/// coefficients. `content` carries the sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFactorization {
    pub content: BigInt,
    /// (primitive positive-leading irreducible, multiplicity), sorted by
    /// (degree, coefficient sequence).
    pub factors: Vec<(IntPoly, u32)>,
}

impl PolyFactorization {
    pub fn recompose(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }
}

/// Factors a nonzero polynomial over Q into irreducibles.
pub fn factor_over_q(f: &IntPoly) -> Result<PolyFactorization> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    if let Some(d) = f.degree() {
        if d > MAX_FACTOR_DEGREE {
            return Err(Error::ResourceBound(format!(
                "polynomial degree {d} exceeds the factorization limit {MAX_FACTOR_DEGREE}"
            )));
        }
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let prim = f.normalized();
    if prim.deg() == 0 {
        return Ok(PolyFactorization { content, factors: Vec::new() });
    }

    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in prim.squarefree_decomposition() {
        let part = part.normalized();
        if part.deg() == 0 {
            continue;
        }
        for irr in factor_squarefree_primitive(&part)? {
            factors.push((irr, mult as u32));
        }
    }
    factors.sort_by(|a, b| {
        let key = |f: &IntPoly| (f.deg(), f.coeffs().iter().rev().cloned().collect::<Vec<_>>());
        key(&a.0).cmp(&key(&b.0))
    });

    let out = PolyFactorization { content, factors };
    debug_assert_eq!(out.recompose(), *f);
    Ok(out)
}

/// Zassenhaus on a primitive, squarefree, positive-leading polynomial of
/// degree >= 1.
fn factor_squarefree_primitive(g: &IntPoly) -> Result<Vec<IntPoly>> {
    let n = g.deg();
    if n == 1 {
        return Ok(vec![g.clone()]);
    }
    let lc = g.leading();

    // Choose a good prime: among the first three odd primes >= 5 for which g
    // stays squarefree of full degree, take the one with the fewest modular
    // factors (ties to the smaller prime).
    let mut candidates: Vec<(u64, Vec<FpPoly>)> = Vec::new();
    let mut p = 5u64;
    while candidates.len() < 3 {
        if is_prime_u64(p) && !(&lc % BigInt::from(p)).is_zero() {
            let gp = FpPoly::from_intpoly(p, g);
            if gp.deg() == n && gp.is_squarefree() {
                let (_, fac) = gp.factor();
                debug_assert!(fac.iter().all(|(_, m)| *m == 1));
                candidates.push((p, fac.into_iter().map(|(f, _)| f).collect()));
            }
        }
        p += 2;
        assert!(p < 100_000, "no usable prime found for modular factorization");
    }
    candidates.sort_by_key(|(p, fac)| (fac.len(), *p));
    let (p, modular) = candidates.into_iter().next().unwrap();
    let r = modular.len();
    if r == 1 {
        return Ok(vec![g.clone()]);
    }
    if r > MAX_MODULAR_FACTORS {
        return Err(Error::ResourceBound(format!(
            "{r} modular factors exceed the recombination limit {MAX_MODULAR_FACTORS}"
        )));
    }

    // Mignotte bound: any divisor h of g satisfies
    //   height(lc/lc(h) * h) <= |lc| * 2^n * sqrt(n+1) * height(g).
    let bound = ceil_sqrt(&BigInt::from(n as u64 + 1))
        * (BigInt::one() << n)
        * g.height()
        * lc.abs();
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
    }

    // Lift the monic factorization of lc^{-1} g from mod p to mod modulus.
    let f_monic = ModPoly::from_intpoly(&modulus, g).monicize();
    let lifted = hensel_tree(&f_monic, &modular, p, &modulus);
    debug_assert_eq!(
        ModPoly::product(&modulus, &lifted),
        f_monic,
        "lifted factors must multiply back to the input mod p^k"
    );

    // Subset recombination.
    let mut result: Vec<IntPoly> = Vec::new();
    let mut remaining: Vec<ModPoly> = lifted;
    let mut current = g.clone();
    let mut d = 1usize;
    'outer: while 2 * d <= remaining.len() {
        let indices: Vec<usize> = (0..remaining.len()).collect();
        for subset in combinations(&indices, d) {
            // When splitting exactly in half, fix index 0 in the subset to
            // avoid testing complements twice.
            if 2 * d == remaining.len() && subset[0] != 0 {
                continue;
            }
            let mut prod = ModPoly::constant(&modulus, current.leading());
            for &i in &subset {
                prod = prod.mul(&remaining[i]);
            }
            let candidate = prod.centered_lift().primitive_part().normalized();
            if candidate.deg() == 0 {
                continue;
            }
            if let Some(quot) = current.div_exact(&candidate) {
                result.push(candidate);
                current = quot.normalized();
                let keep: Vec<ModPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, f)| f.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        d += 1;
    }
    if current.deg() > 0 {
        result.push(current);
    }
    Ok(result)
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &(&s * &s) < x {
        s + 1
    } else {
        s
    }
}

/// All d-element subsets of `items`, lexicographic.
fn combinations(items: &[usize], d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((cur, start)) = stack.pop() {
        if cur.len() == d {
            out.push(cur);
            continue;
        }
        // Push in reverse so the output is lexicographic.
        let need = d - cur.len();
        for i in (start..=items.len().saturating_sub(need)).rev() {
            let mut next = cur.clone();
            next.push(items[i]);
            stack.push((next, i + 1));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Polynomials over Z/m with big moduli (for Hensel lifting).
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
struct ModPoly {
    m: BigInt,
    coeffs: Vec<BigInt>,
}

impl ModPoly {
    fn new(m: &BigInt, mut coeffs: Vec<BigInt>) -> Self {
        for c in &mut coeffs {
            *c = c.mod_floor(m);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ModPoly { m: m.clone(), coeffs }
    }

    fn constant(m: &BigInt, c: BigInt) -> Self {
        ModPoly::new(m, vec![c])
    }

    fn one(m: &BigInt) -> Self {
        ModPoly::constant(m, BigInt::one())
    }

    fn from_intpoly(m: &BigInt, f: &IntPoly) -> Self {
        ModPoly::new(m, f.coeffs().to_vec())
    }

    fn from_fp(m: &BigInt, f: &FpPoly) -> Self {
        ModPoly::new(m, f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading of zero")
    }

    fn reduce(&self, m: &BigInt) -> Self {
        ModPoly::new(m, self.coeffs.clone())
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        ModPoly::new(&self.m, coeffs)
    }

    fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        ModPoly::new(&self.m, coeffs)
    }

    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        if self.is_zero() || other.is_zero() {
            return ModPoly::new(&self.m, Vec::new());
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ModPoly::new(&self.m, coeffs)
    }

    fn product(m: &BigInt, factors: &[ModPoly]) -> ModPoly {
        let mut acc = ModPoly::one(m);
        for f in factors {
            acc = acc.mul(f);
        }
        acc
    }

    /// Division by a monic divisor (exact in Z/m).
    fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        assert_eq!(self.m, d.m);
        assert!(!d.is_zero() && d.leading().is_one(), "divisor must be monic");
        let dd = d.deg();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (ModPoly::new(&self.m, Vec::new()), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone().mod_floor(&self.m);
            if !c.is_zero() {
                quot[i - dd] = c.clone();
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let v = (&rem[i - dd + j] - &c * dc).mod_floor(&self.m);
                    rem[i - dd + j] = v;
                }
            } else {
                rem[i] = BigInt::zero();
            }
        }
        rem.truncate(dd);
        (ModPoly::new(&self.m, quot), ModPoly::new(&self.m, rem))
    }

    /// Scales by the inverse of the leading coefficient (must be a unit).
    fn monicize(&self) -> Self {
        let inv = mod_inverse(self.leading(), &self.m);
        let coeffs = self.coeffs.iter().map(|c| c * &inv).collect();
        ModPoly::new(&self.m, coeffs)
    }

    /// Representative with coefficients in (-m/2, m/2].
    fn centered_lift(&self) -> IntPoly {
        let half = &self.m >> 1;
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| if c > &half { c - &self.m } else { c.clone() })
            .collect();
        IntPoly::from_coeffs(coeffs)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not a unit mod m");
    e.x.mod_floor(m)
}

/// Extended Euclid over F_p: returns (s, t) with s*a + t*b = 1. Requires
/// gcd(a, b) = 1.
fn fp_bezout(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
    let p = a.prime();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0.deg(), 0, "inputs must be coprime");
    // Scale so the combination equals 1 (inverse of the constant by Fermat).
    let c = r0.coeff(0);
    let mut acc = 1u64;
    let mut base = c % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    let cinv = FpPoly::constant(p, acc);
    (s0.mul(&cinv), t0.mul(&cinv))
}

/// One quadratic Hensel step: given f = g*h (mod m) with h monic,
/// s*g + t*h = 1 (mod m), deg s < deg h, deg t < deg g, returns
/// (g', h', s', t') satisfying the same relations mod m^2 (with all values
/// reduced mod `m2`, which may be m^2 or the final target modulus).
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &ModPoly,
    g: &ModPoly,
    h: &ModPoly,
    s: &ModPoly,
    t: &ModPoly,
    m2: &BigInt,
) -> (ModPoly, ModPoly, ModPoly, ModPoly) {
    let f = f.reduce(m2);
    let g = g.reduce(m2);
    let h = h.reduce(m2);
    let s = s.reduce(m2);
    let t = t.reduce(m2);

    let e = f.sub(&g.mul(&h));
    let (q, r) = s.mul(&e).divrem_monic(&h);
    let g1 = g.add(&t.mul(&e)).add(&q.mul(&g));
    let h1 = h.add(&r);

    let b = s.mul(&g1).add(&t.mul(&h1)).sub(&ModPoly::one(m2));
    let (c, d) = s.mul(&b).divrem_monic(&h1);
    let s1 = s.sub(&d);
    let t1 = t.sub(&t.mul(&b)).sub(&c.mul(&g1));
    (g1, h1, s1, t1)
}

/// Lifts the monic factorization `f = prod(modular)` from mod p to mod
/// `target` by recursive pair splitting. `f` is monic mod `target`.
fn hensel_tree(f: &ModPoly, modular: &[FpPoly], p: u64, target: &BigInt) -> Vec<ModPoly> {
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let (left, right) = modular.split_at(modular.len() / 2);
    let pm = BigInt::from(p);
    let g0: FpPoly = left.iter().fold(FpPoly::one(p), |acc, f| acc.mul(f));
    let h0: FpPoly = right.iter().fold(FpPoly::one(p), |acc, f| acc.mul(f));
    let (s0, t0) = fp_bezout(&g0, &h0);

    let mut m = pm.clone();
    let mut g = ModPoly::from_fp(&m, &g0);
    let mut h = ModPoly::from_fp(&m, &h0);
    let mut s = ModPoly::from_fp(&m, &s0);
    let mut t = ModPoly::from_fp(&m, &t0);
    while &m < target {
        let m2 = (&m * &m).min(target.clone());
        let (g1, h1, s1, t1) = hensel_step(&f.reduce(&m2), &g, &h, &s, &t, &m2);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = m2;
    }
    let g = g.reduce(target);
    let h = h.reduce(target);
    let mut out = hensel_tree(&g, left, p, target);
    out.extend(hensel_tree(&h, right, p, target));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_poly;

    fn parse(s: &str) -> IntPoly {
        parse_poly(s, "t").unwrap()
    }

    fn factor(s: &str) -> PolyFactorization {
        factor_over_q(&parse(s)).unwrap()
    }

    #[test]
    fn linear_and_constant() {
        let f = factor("6");
        assert_eq!(f.content, BigInt::from(6));
        assert!(f.factors.is_empty());

        let f = factor("-4t + 2");
        assert_eq!(f.content, BigInt::from(-2));
        assert_eq!(f.factors, vec![(parse("2t - 1"), 1)]);
    }

    #[test]
    fn repeated_roots() {
        // (t-1)^3 (t+2), scaled by -6.
        let f = factor("-6(t-1)^3(t+2)");
        assert_eq!(f.content, BigInt::from(-6));
        assert_eq!(
            f.factors,
            vec![(parse("t - 1"), 3), (parse("t + 2"), 1)]
        );
        assert_eq!(f.recompose(), parse("-6(t-1)^3(t+2)"));
    }

    #[test]
    fn cyclotomic_style_split() {
        // t^4 - 1 = (t-1)(t+1)(t^2+1).
        let f = factor("t^4 - 1");
        assert_eq!(f.content, BigInt::one());
        assert_eq!(
            f.factors,
            vec![
                (parse("t - 1"), 1),
                (parse("t + 1"), 1),
                (parse("t^2 + 1"), 1)
            ]
        );
    }

    #[test]
    fn quartic_pair_from_the_k3_discriminant() {
        // t^8 + 14t^4 + 1 splits into two quartics over Q.
        let f = factor("t^8 + 14t^4 + 1");
        assert_eq!(f.content, BigInt::one());
        assert_eq!(
            f.factors,
            vec![
                (parse("t^4 - 2t^3 + 2t^2 + 2t + 1"), 1),
                (parse("t^4 + 2t^3 + 2t^2 - 2t + 1"), 1)
            ]
        );
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = factor("t^6 + t + 1");
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0], (parse("t^6 + t + 1"), 1));

        // Eisenstein at 2.
        let f = factor("t^5 + 2t + 2");
        assert_eq!(f.factors, vec![(parse("t^5 + 2t + 2"), 1)]);
    }

    #[test]
    fn non_monic_inputs() {
        let f = factor("(2t - 1)(3t + 5)");
        assert_eq!(f.content, BigInt::one());
        assert_eq!(
            f.factors,
            vec![(parse("2t - 1"), 1), (parse("3t + 5"), 1)]
        );

        let f = factor("4t^2 - 1");
        assert_eq!(
            f.factors,
            vec![(parse("2t - 1"), 1), (parse("2t + 1"), 1)]
        );
    }

    #[test]
    fn mixed_multiplicities_recompose() {
        let input = "12(2t - 1)^2 (t^2 + t + 1)^3 (t - 4)";
        let f = factor(input);
        assert_eq!(f.content, BigInt::from(12));
        assert_eq!(f.recompose(), parse(input));
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn pipeline_discriminant_shapes() {
        // Discriminant of the auxiliary rational surface (c = 2):
        // -16 t^9 (2t - 1)(2t^2 - 11t + 32) up to content.
        let f = factor("t^9 (2t - 1)(2t^2 - 11t + 32)");
        assert_eq!(
            f.factors,
            vec![
                (parse("t"), 9),
                (parse("2t - 1"), 1),
                (parse("2t^2 - 11t + 32"), 1)
            ]
        );
    }

    #[test]
    fn degree_guard() {
        let mut coeffs = vec![BigInt::zero(); 66];
        coeffs[0] = BigInt::one();
        coeffs[65] = BigInt::one();
        let f = IntPoly::from_coeffs(coeffs);
        assert!(matches!(
            factor_over_q(&f),
            Err(Error::ResourceBound(_))
        ));
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // (t^2 - 2)(t^2 - 3)(t^2 - 6): every prime sees splits that do not
        // match the rational factorization, forcing real recombination work.
        let input = "(t^2 - 2)(t^2 - 3)(t^2 - 6)";
        let f = factor(input);
        assert_eq!(
            f.factors,
            vec![
                (parse("t^2 - 6"), 1),
                (parse("t^2 - 3"), 1),
                (parse("t^2 - 2"), 1)
            ]
        );
        assert_eq!(f.recompose(), parse(input));
    }

    #[test]
    fn large_coefficients() {
        let input = "(t - 123456789)(t + 987654321)(100000007t - 3)";
        let f = factor(input);
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.recompose(), parse(input));
    }
}
