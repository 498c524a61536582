//! Deterministic integer factorization: trial division by a sieved prime
//! table, then Brent's cycle-finding rho with a deterministic parameter
//! schedule, with primality certified by Miller-Rabin over the fixed witness
//! set that is proven correct below 3.3 * 10^24 (and used as a strong
//! probable-prime test beyond).
//!
//! Factorization respects a wall-clock [`FactorBudget`]; work that cannot be
//! completed in time lands in `unresolved` instead of failing, so callers can
//! degrade gracefully (e.g. report a square class as undetermined).

use std::sync::LazyLock;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

static SMALL_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| {
    let n = TRIAL_LIMIT as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
});

/// Wall-clock limit for a factorization call.
#[derive(Clone, Copy, Debug)]
pub struct FactorBudget {
    deadline: Option<Instant>,
}

impl FactorBudget {
    /// No time limit.
    pub fn unlimited() -> Self {
        FactorBudget { deadline: None }
    }

    pub fn from_secs(secs: u64) -> Self {
        FactorBudget {
            deadline: Some(Instant::now() + Duration::from_secs(secs)),
        }
    }

    pub fn from_duration(d: Duration) -> Self {
        FactorBudget {
            deadline: Some(Instant::now() + d),
        }
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

impl Default for FactorBudget {
    /// Default: 30 seconds.
    fn default() -> Self {
        FactorBudget::from_secs(30)
    }
}

/// Result of factoring a nonzero integer: sign * product(factors) *
/// product(unresolved). `factors` are certified primes with multiplicity,
/// sorted ascending; `unresolved` are composite (or unproven) leftovers that
/// exceeded the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
    pub unresolved: Vec<BigInt>,
}

impl IntFactorization {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Recomposes the integer (for invariant checks).
    pub fn recompose(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        for u in &self.unresolved {
            acc *= u;
        }
        acc
    }
}

/// Deterministic Miller-Rabin. Certified correct for n < 3.3 * 10^24; for
/// larger n it is a strong probable-prime test over the same witnesses plus
/// 28 further fixed witnesses (no randomness anywhere).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let small: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in small {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let certified_limit: BigUint = "3317044064679887385961981".parse().unwrap();
    let mut witnesses: Vec<BigUint> = small.iter().map(|&p| BigUint::from(p)).collect();
    if *n >= certified_limit {
        // Extra fixed witnesses: the next 28 primes.
        for p in [
            41u32, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127,
            131, 137, 139, 149, 151, 157, 163, 167, 173,
        ] {
            witnesses.push(BigUint::from(p));
        }
    }

    'witness: for a in witnesses {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho with a deterministic schedule of the
/// polynomial constant c = 1, 2, 3, ... Returns a nontrivial factor of the
/// odd composite `n`, or `None` if the budget expires first.
fn brent_rho(n: &BigUint, budget: &FactorBudget) -> Option<BigUint> {
    debug_assert!(!is_probable_prime(n));
    debug_assert!(n.is_odd());
    let one = BigUint::one();
    for c in 1u64.. {
        if budget.expired() {
            return None;
        }
        let c = BigUint::from(c);
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let m: u64 = 128;
        let mut g = BigUint::one();
        let mut q = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                if budget.expired() {
                    return None;
                }
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n && g > one {
            return Some(g);
        }
        // Cycle degenerated for this c; move to the next constant.
    }
    unreachable!()
}

fn factor_inner(
    n: BigUint,
    budget: &FactorBudget,
    primes: &mut Vec<BigUint>,
    unresolved: &mut Vec<BigUint>,
) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        primes.push(n);
        return;
    }
    // Perfect powers fall out of rho naturally; just split recursively.
    if budget.expired() {
        unresolved.push(n);
        return;
    }
    match brent_rho(&n, budget) {
        Some(d) => {
            let q = &n / &d;
            factor_inner(d, budget, primes, unresolved);
            factor_inner(q, budget, primes, unresolved);
        }
        None => unresolved.push(n),
    }
}

/// Factors a nonzero integer within the budget. Panics on zero.
pub fn factor_integer(n: &BigInt, budget: &FactorBudget) -> IntFactorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();

    let mut primes: Vec<BigUint> = Vec::new();
    let mut unresolved: Vec<BigUint> = Vec::new();

    // Trial division.
    for &p in SMALL_PRIMES.iter() {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
            primes.push(pb.clone());
        }
    }
    if !m.is_one() {
        if m < BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT) {
            // Below the square of the trial bound, the leftover is prime.
            primes.push(m);
        } else {
            factor_inner(m, budget, &mut primes, &mut unresolved);
        }
    }

    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        let p = BigInt::from(p);
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let mut unresolved: Vec<BigInt> = unresolved.into_iter().map(BigInt::from).collect();
    unresolved.sort();

    let out = IntFactorization { sign, factors, unresolved };
    debug_assert!(!out.is_complete() || out.recompose() == *n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor_u(n: i64) -> IntFactorization {
        factor_integer(&BigInt::from(n), &FactorBudget::unlimited())
    }

    #[test]
    fn small_factorizations() {
        let f = factor_u(50);
        assert_eq!(f.sign, 1);
        assert_eq!(
            f.factors,
            vec![(BigInt::from(2), 1), (BigInt::from(5), 2)]
        );
        assert!(f.is_complete());

        let f = factor_u(-12);
        assert_eq!(f.sign, -1);
        assert_eq!(
            f.factors,
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]
        );

        let f = factor_u(1);
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());

        let f = factor_u(-1);
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
    }

    #[test]
    fn prime_power_17_pow_4() {
        let f = factor_u(83521);
        assert_eq!(f.factors, vec![(BigInt::from(17), 4)]);
    }

    #[test]
    fn recompose_round_trip() {
        for n in [2i64, 97, 1 << 20, 600851475143, -987654321987654321] {
            let f = factor_u(n);
            assert!(f.is_complete(), "factoring {n}");
            assert_eq!(f.recompose(), BigInt::from(n));
        }
    }

    #[test]
    fn large_prime_is_certified() {
        // A 20-digit prime.
        let p: BigInt = "95814202607062823339".parse().unwrap();
        let f = factor_integer(&p, &FactorBudget::unlimited());
        assert_eq!(f.factors, vec![(p, 1)]);
        assert!(f.is_complete());
    }

    #[test]
    fn semiprime_beyond_trial_range() {
        // Two primes just above the trial-division bound.
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factor_integer(&(&p * &q), &FactorBudget::unlimited());
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn artin_tate_style_value() {
        // 2^13 * 13^2 * 19 shows up as a numerator in discriminant work.
        let n = BigInt::from(8192i64 * 169 * 19);
        let f = factor_integer(&n, &FactorBudget::unlimited());
        assert_eq!(
            f.factors,
            vec![
                (BigInt::from(2), 13),
                (BigInt::from(13), 2),
                (BigInt::from(19), 1)
            ]
        );
    }

    #[test]
    fn expired_budget_reports_unresolved() {
        // A product of two 30-digit primes cannot be split in zero time.
        let p: BigInt = "671998030559713968361666935769".parse().unwrap();
        let q: BigInt = "282174488599599500573849980909".parse().unwrap();
        let n = &p * &q;
        let budget = FactorBudget::from_duration(Duration::from_millis(0));
        let f = factor_integer(&n, &budget);
        assert!(!f.is_complete());
        assert_eq!(f.recompose(), n, "recompose must hold even when unresolved");
    }

    #[test]
    fn primality_test_agrees_with_known_values() {
        assert!(is_probable_prime(&BigUint::from(2u32)));
        assert!(is_probable_prime(&BigUint::from(3u32)));
        assert!(!is_probable_prime(&BigUint::from(1u32)));
        assert!(!is_probable_prime(&BigUint::from(0u32)));
        // Carmichael number 561 = 3 * 11 * 17.
        assert!(!is_probable_prime(&BigUint::from(561u32)));
        // Strong pseudoprime to base 2: 2047 = 23 * 89.
        assert!(!is_probable_prime(&BigUint::from(2047u32)));
        assert!(is_probable_prime(&BigUint::from(1_000_003u32)));
    }
}
