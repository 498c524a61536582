//! Square classes of nonzero rationals: Q* / (Q*)^2.
//!
//! A class is stored canonically as a sign together with the set of primes
//! appearing to odd exponent. Factoring is budgeted; leftovers that could not
//! be factored in time are carried verbatim in `unresolved`, and any
//! comparison involving an unresolved class is reported as indeterminate
//! rather than guessed.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::factor_int::{factor_integer, FactorBudget};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClass {
    /// +1 or -1.
    pub sign: i8,
    /// Primes with odd exponent, ascending.
    pub primes: BTreeSet<BigInt>,
    /// Unfactored leftovers (composite or unproven), sorted. Nonempty means
    /// the class is only partially determined.
    pub unresolved: Vec<BigInt>,
}

impl SquareClass {
    pub fn from_integer(n: &BigInt, budget: &FactorBudget) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::BadParameters(
                "the square class of zero is undefined".into(),
            ));
        }
        let f = factor_integer(n, budget);
        let mut primes = BTreeSet::new();
        for (p, e) in f.factors {
            if e % 2 == 1 {
                primes.insert(p);
            }
        }
        Ok(SquareClass {
            sign: f.sign,
            primes,
            unresolved: f.unresolved,
        })
    }

    /// Square class of a nonzero rational: num * den is in the same class as
    /// num / den, so both parts contribute by symmetric difference.
    pub fn from_rational(r: &BigRational, budget: &FactorBudget) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::BadParameters(
                "the square class of zero is undefined".into(),
            ));
        }
        let num = Self::from_integer(r.numer(), budget)?;
        let den = Self::from_integer(r.denom(), budget)?;
        Ok(num.mul(&den))
    }

    /// Group law in Q*/(Q*)^2: signs multiply, odd-exponent prime sets take
    /// the symmetric difference. Unresolved parts accumulate.
    pub fn mul(&self, other: &Self) -> Self {
        let primes: BTreeSet<BigInt> = self
            .primes
            .symmetric_difference(&other.primes)
            .cloned()
            .collect();
        let mut unresolved = self.unresolved.clone();
        unresolved.extend(other.unresolved.iter().cloned());
        unresolved.sort();
        SquareClass {
            sign: self.sign * other.sign,
            primes,
            unresolved,
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Whether the class is the trivial class (a nonzero square). Only
    /// meaningful when resolved.
    pub fn is_trivial(&self) -> bool {
        self.is_resolved() && self.sign == 1 && self.primes.is_empty()
    }

    /// Three-way comparison: `Some(true)` / `Some(false)` when both classes
    /// are fully factored, `None` when either side has unresolved parts.
    pub fn same_class(&self, other: &Self) -> Option<bool> {
        if !self.is_resolved() || !other.is_resolved() {
            return None;
        }
        Some(self.sign == other.sign && self.primes == other.primes)
    }

    /// Canonical squarefree representative sign * product(primes). Only
    /// meaningful when resolved.
    pub fn representative(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for p in &self.primes {
            acc *= p;
        }
        acc
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_resolved() {
            write!(f, "{}", self.representative())
        } else {
            write!(f, "{}", self.representative())?;
            for u in &self.unresolved {
                write!(f, " * [{u}?]")?;
            }
            Ok(())
        }
    }
}
