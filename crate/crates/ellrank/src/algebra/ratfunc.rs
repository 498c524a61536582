//! Rational functions over Q as reduced fractions of integer polynomials.
//!
//! Representation invariant: the denominator is nonzero with positive leading
//! coefficient, the polynomial gcd of numerator and denominator is 1, and the
//! integer contents of numerator and denominator are coprime. Zero is 0/1.

use crate::algebra::poly::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// A reduced rational function `num/den` over Q.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    /// Builds and reduces `num/den`. Errors if `den` is zero.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::BadParameters(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RatFunc { num: IntPoly::zero(), den: IntPoly::one() });
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let mut d = den.div_exact(&g).expect("gcd divides denominator");
        let cn = n.content();
        let cd = d.content();
        let c = cn.gcd(&cd);
        n = IntPoly::from_coeffs(n.coeffs().iter().map(|a| a / &c).collect());
        d = IntPoly::from_coeffs(d.coeffs().iter().map(|a| a / &c).collect());
        if d.leading().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(IntPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(IntPoly::one())
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    /// Division; errors if `other` is zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::BadParameters("division by zero rational function".into()));
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Substitutes the polynomial `g` for the variable.
    pub fn compose_poly(&self, g: &IntPoly) -> Self {
        RatFunc::new(self.num.compose(g), self.den.compose(g))
            .expect("denominator composition of nonzero denominator is nonzero")
    }

    /// Evaluates at a rational point; `None` at a pole.
    pub fn evaluate(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.evaluate_rat(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate_rat(x) / d)
    }

    /// The squarefree monic-normalized polynomial of finite poles.
    pub fn pole_support(&self) -> IntPoly {
        self.den.squarefree_part()
    }

    /// Degree as a morphism P^1 -> P^1: max(deg num, deg den).
    ///
    /// Panics on the zero function.
    pub fn map_degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// Valuation at a finite place (an irreducible polynomial):
    /// v_P(num) - v_P(den). Panics on the zero function.
    pub fn valuation_at(&self, place: &IntPoly) -> i64 {
        self.num.valuation(place) as i64 - self.den.valuation(place) as i64
    }

    /// Valuation at the place at infinity: deg(den) - deg(num).
    /// Panics on the zero function.
    pub fn valuation_at_infinity(&self) -> i64 {
        self.den.deg() as i64 - self.num.deg() as i64
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            let c = self.den.constant_term();
            if c == BigInt::from(1) {
                return write!(f, "{}", self.num);
            }
            return write!(f, "({}) / {}", self.num, c);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::big;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn reduction_cancels_polynomial_and_content() {
        // (2t^2 - 2) / (4t - 4) = (t+1)/2
        let f = RatFunc::new(ip(&[-2, 0, 2]), ip(&[-4, 4])).unwrap();
        assert_eq!(f.numerator(), &ip(&[1, 1]));
        assert_eq!(f.denominator(), &ip(&[2]));
    }

    #[test]
    fn valuations_at_places() {
        // t^3: v_t = 3, v_infinity = -3.
        let f = RatFunc::from_poly(ip(&[0, 0, 0, 1]));
        assert_eq!(f.valuation_at(&IntPoly::x()), 3);
        assert_eq!(f.valuation_at_infinity(), -3);
        // t / (t - 1)^2: v_t = 1, v_{t-1} = -2, v_infinity = 1.
        let g = RatFunc::new(ip(&[0, 1]), ip(&[1, -2, 1])).unwrap();
        assert_eq!(g.valuation_at(&IntPoly::x()), 1);
        assert_eq!(g.valuation_at(&ip(&[-1, 1])), -2);
        assert_eq!(g.valuation_at_infinity(), 1);
    }

    #[test]
    fn denominator_sign_is_normalized() {
        let f = RatFunc::new(ip(&[1]), ip(&[1, -1])).unwrap();
        assert_eq!(f.denominator(), &ip(&[-1, 1]));
        assert_eq!(f.numerator(), &ip(&[-1]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatFunc::new(ip(&[1]), IntPoly::zero()).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = RatFunc::from_poly(IntPoly::x());
        let one = RatFunc::one();
        // 1/t + t = (t^2+1)/t
        let inv = one.div(&x).unwrap();
        let s = inv.add(&x);
        assert_eq!(s.numerator(), &ip(&[1, 0, 1]));
        assert_eq!(s.denominator(), &ip(&[0, 1]));
        // t * 1/t = 1
        assert_eq!(x.mul(&inv), RatFunc::one());
        assert!(x.sub(&x).is_zero());
        assert_eq!(inv.pow(2).denominator(), &ip(&[0, 0, 1]));
    }

    #[test]
    fn compose_and_evaluate() {
        // f = 16 t / (t^2 + 6t + 1); f(s^4) has denominator s^8 + 6 s^4 + 1.
        let f = RatFunc::new(ip(&[0, 16]), ip(&[1, 6, 1])).unwrap();
        let g = IntPoly::monomial(1, 4);
        let fs4 = f.compose_poly(&g);
        assert_eq!(fs4.numerator(), &IntPoly::monomial(16, 4));
        let mut den = vec![0i64; 9];
        den[0] = 1;
        den[4] = 6;
        den[8] = 1;
        assert_eq!(fs4.denominator(), &ip(&den));

        let at1 = f.evaluate(&BigRational::from_integer(big(1))).unwrap();
        assert_eq!(at1, BigRational::from_integer(big(2)));
        // Pole of 1/t at 0.
        let inv = RatFunc::one().div(&RatFunc::from_poly(IntPoly::x())).unwrap();
        assert!(inv.evaluate(&BigRational::zero()).is_none());
    }
}
