//! The central object: a Weierstrass model y^2 = x^3 + A(t) x + B(t) with
//! A, B integer polynomials and nonzero discriminant.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::factor_int::{factor_integer, FactorBudget};
use crate::algebra::factor_poly::factor_over_q;
use crate::algebra::poly::IntPoly;
use crate::algebra::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// A place of the projective t-line over Q: either a primitive irreducible
/// polynomial with positive leading coefficient (closed point of the affine
/// line), or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(IntPoly),
    Infinity,
}

impl Place {
    /// Degree of the place (1 for infinity).
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg(),
            Place::Infinity => 1,
        }
    }

    /// Canonical finite place from a nonconstant polynomial (normalized to
    /// primitive positive-leading form; irreducibility is the caller's
    /// contract and is revalidated where it matters).
    pub fn finite(p: &IntPoly) -> Place {
        assert!(
            p.degree().map_or(false, |d| d >= 1),
            "place polynomial must be nonconstant"
        );
        Place::Finite(p.normalized())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

/// Valuations of the model data at one place. `None` means +infinity (the
/// polynomial is identically zero). The discriminant is never zero, so its
/// valuation is always finite. Over Q(t) the constants -48 and -864 are
/// units, so v(c4) = v(A) and v(c6) = v(B) at every place; at infinity the
/// valuations are the s-adic ones on the infinity chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaceValuations {
    pub v_c4: Option<usize>,
    pub v_c6: Option<usize>,
    pub v_delta: usize,
}

/// One step of the minimalization log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalizationStep {
    /// Divided (A, B) by (P^4, P^6) `times` times at a finite place P.
    Place { place: IntPoly, times: usize },
    /// Divided (A, B) by (p^4, p^6) `times` times for a constant prime p.
    Constant { prime: BigInt, times: usize },
}

impl fmt::Display for MinimalizationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalizationStep::Place { place, times } => {
                write!(f, "divided (A, B) by (({place})^4, ({place})^6) x{times}")
            }
            MinimalizationStep::Constant { prime, times } => {
                write!(f, "divided (A, B) by ({prime}^4, {prime}^6) x{times}")
            }
        }
    }
}

/// Result of minimalization: the minimal model, the log of divisions, and
/// the polynomial u with A_min = A / u^4, B_min = B / u^6.
#[derive(Clone, Debug)]
pub struct Minimalization {
    pub model: WeierstrassModel,
    pub steps: Vec<MinimalizationStep>,
    pub scale: IntPoly,
}

/// y^2 = x^3 + A(t) x + B(t), A, B in Z[t], discriminant nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: IntPoly,
    b: IntPoly,
}

impl WeierstrassModel {
    /// Builds a model, rejecting degenerate (singular) equations.
    pub fn new(a: IntPoly, b: IntPoly) -> Result<Self> {
        let disc = discriminant_of(&a, &b);
        if disc.is_zero() {
            return Err(Error::Degenerate(format!(
                "discriminant vanishes identically for A = {a}, B = {b}"
            )));
        }
        Ok(WeierstrassModel { a, b })
    }

    /// Convenience constructor from low-to-high i64 coefficient slices.
    pub fn from_i64(a: &[i64], b: &[i64]) -> Result<Self> {
        WeierstrassModel::new(IntPoly::from_i64(a), IntPoly::from_i64(b))
    }

    pub fn a(&self) -> &IntPoly {
        &self.a
    }

    pub fn b(&self) -> &IntPoly {
        &self.b
    }

    pub fn c4(&self) -> IntPoly {
        self.a.mul_i64(-48)
    }

    pub fn c6(&self) -> IntPoly {
        self.b.mul_i64(-864)
    }

    /// Delta = -16 (4 A^3 + 27 B^2); never zero by the constructor guard.
    pub fn discriminant(&self) -> IntPoly {
        discriminant_of(&self.a, &self.b)
    }

    /// j = c4^3 / Delta as a reduced fraction.
    pub fn j_invariant(&self) -> RatFunc {
        RatFunc::new(self.c4().pow(3), self.discriminant())
            .expect("discriminant is nonzero by construction")
    }

    /// Chart degree m = max(ceil(deg A / 4), ceil(deg B / 6)): the smallest m
    /// for which t = 1/s, (x, y) -> (x/s^{2m}, y/s^{3m}) yields polynomial
    /// coefficients. The chart is then automatically minimal at s = 0. The
    /// Euler number of the (minimal) surface is 12m; m = 0 means a product
    /// surface, m = 1 a rational elliptic surface, m = 2 a K3.
    pub fn chart_degree(&self) -> usize {
        let da = self.a.degree().map_or(0, |d| d.div_ceil(4));
        let db = self.b.degree().map_or(0, |d| d.div_ceil(6));
        da.max(db)
    }

    /// The model at infinity: A*(s) = s^{4m} A(1/s), B*(s) = s^{6m} B(1/s),
    /// with m the chart degree. Returns the chart model and m.
    pub fn infinity_chart(&self) -> (WeierstrassModel, usize) {
        let m = self.chart_degree();
        let a = if self.a.is_zero() {
            IntPoly::zero()
        } else {
            self.a.reversed(4 * m)
        };
        let b = if self.b.is_zero() {
            IntPoly::zero()
        } else {
            self.b.reversed(6 * m)
        };
        let model = WeierstrassModel::new(a, b)
            .expect("the infinity chart of a nondegenerate model is nondegenerate");
        (model, m)
    }

    /// Valuations of (c4, c6, Delta) at a place (s-adic on the infinity
    /// chart for the place at infinity).
    pub fn valuations(&self, place: &Place) -> PlaceValuations {
        match place {
            Place::Finite(p) => PlaceValuations {
                v_c4: valuation_opt(&self.a, p),
                v_c6: valuation_opt(&self.b, p),
                v_delta: self.discriminant().valuation(p),
            },
            Place::Infinity => {
                let (chart, _) = self.infinity_chart();
                let s = IntPoly::x();
                PlaceValuations {
                    v_c4: valuation_opt(&chart.a, &s),
                    v_c6: valuation_opt(&chart.b, &s),
                    v_delta: chart.discriminant().valuation(&s),
                }
            }
        }
    }

    /// Minimalizes at every finite place (dividing (A, B) by (P^4, P^6)
    /// wherever v_P(A) >= 4 and v_P(B) >= 6) and at constant primes.
    /// Minimality at infinity then holds automatically on the infinity
    /// chart. The j-invariant is unchanged.
    pub fn minimalize(&self) -> Minimalization {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut steps = Vec::new();
        let mut scale = IntPoly::one();

        // Finite places: candidates must divide both A and B (or divide the
        // single nonzero one when the other vanishes).
        let candidates: Vec<IntPoly> = {
            let target = if a.is_zero() {
                b.clone()
            } else if b.is_zero() {
                a.clone()
            } else {
                a.gcd(&b)
            };
            if target.degree().map_or(true, |d| d == 0) {
                Vec::new()
            } else {
                factor_over_q(&target)
                    .map(|f| f.factors.into_iter().map(|(p, _)| p).collect())
                    .unwrap_or_default()
            }
        };
        for p in candidates {
            let va = if a.is_zero() { usize::MAX } else { a.valuation(&p) };
            let vb = if b.is_zero() { usize::MAX } else { b.valuation(&p) };
            let k = (va / 4).min(vb / 6);
            if k > 0 {
                let p4k = p.pow(4 * k as u32);
                let p6k = p.pow(6 * k as u32);
                a = a.div_exact(&p4k).expect("valuation guarantees divisibility");
                b = b.div_exact(&p6k).expect("valuation guarantees divisibility");
                scale = scale.mul(&p.pow(k as u32));
                steps.push(MinimalizationStep::Place { place: p, times: k });
            }
        }

        // Constant primes: p with p^4 | content(A) and p^6 | content(B).
        let ca = a.content();
        let cb = b.content();
        let g = if a.is_zero() {
            cb.clone()
        } else if b.is_zero() {
            ca.clone()
        } else {
            num_integer::Integer::gcd(&ca, &cb)
        };
        if g.abs() > BigInt::one() {
            let fac = factor_integer(&g, &FactorBudget::default());
            for (p, _) in fac.factors {
                let va = if a.is_zero() { usize::MAX } else { int_valuation(&ca, &p) };
                let vb = if b.is_zero() { usize::MAX } else { int_valuation(&cb, &p) };
                let k = (va / 4).min(vb / 6);
                if k > 0 {
                    let p4k = p.pow(4 * k as u32);
                    let p6k = p.pow(6 * k as u32);
                    a = a
                        .div_exact(&IntPoly::constant(p4k))
                        .expect("content valuation guarantees divisibility");
                    b = b
                        .div_exact(&IntPoly::constant(p6k))
                        .expect("content valuation guarantees divisibility");
                    scale = scale.mul_big(&p.pow(k as u32));
                    steps.push(MinimalizationStep::Constant { prime: p, times: k });
                }
            }
        }

        let model = WeierstrassModel::new(a, b)
            .expect("minimalization scales the discriminant by a nonzero factor");
        Minimalization { model, steps, scale }
    }

    /// Tests Q(t)-isomorphism (same base coordinate t, no Moebius search):
    /// minimalizes both sides and looks for a rational constant between the
    /// minimal models. On success returns the total witness u in Q(t)* with
    ///
    ///   A_self = u^4 * A_other,   B_self = u^6 * B_other
    ///
    /// holding exactly on the raw inputs.
    pub fn is_isomorphic(&self, other: &WeierstrassModel) -> Option<RatFunc> {
        let min1 = self.minimalize();
        let min2 = other.minimalize();
        let (m1, m2) = (&min1.model, &min2.model);

        // Constant v with A_1min = v^4 A_2min, B_1min = v^6 B_2min.
        let v = if !m1.a.is_zero() && !m1.b.is_zero() {
            if m2.a.is_zero() || m2.b.is_zero() {
                return None;
            }
            // v^2 = (B1 A2) / (B2 A1) must be a positive rational square.
            let num = m1.b.mul(&m2.a);
            let den = m2.b.mul(&m1.a);
            let w = constant_ratio(&num, &den)?;
            if !w.is_positive() {
                return None;
            }
            rational_nth_root(&w, 2)?
        } else if m1.a.is_zero() {
            if !m2.a.is_zero() {
                return None;
            }
            // j = 0: v^6 = B1 / B2.
            let w = constant_ratio(&m1.b, &m2.b)?;
            rational_nth_root(&w, 6)?
        } else {
            if !m2.b.is_zero() {
                return None;
            }
            // j = 1728: v^4 = A1 / A2.
            let w = constant_ratio(&m1.a, &m2.a)?;
            rational_nth_root(&w, 4)?
        };

        // Total witness: A_self = s1^4 A_1min = s1^4 v^4 A_2min
        //                       = (s1 v / s2)^4 A_other.
        let u_num = min1.scale.mul_big(v.numer());
        let u_den = min2.scale.mul_big(v.denom());
        let u = RatFunc::new(u_num, u_den).ok()?;

        // Exact verification on the raw inputs by cross-multiplication.
        let p = u.numerator();
        let q = u.denominator();
        let p4 = p.pow(4);
        let q4 = q.pow(4);
        let p6 = p.pow(6);
        let q6 = q.pow(6);
        if self.a.mul(&q4) == other.a.mul(&p4) && self.b.mul(&q6) == other.b.mul(&p6) {
            Some(u)
        } else {
            None
        }
    }

    /// Quadratic twist by a nonzero polynomial f: f is first replaced by its
    /// squarefree part (repeated irreducible factors dropped, the integer
    /// content and sign kept), then the raw model (f^2 A, f^3 B) is returned
    /// together with the f actually used. No minimalization is performed, so
    /// twisting twice by the same f and minimalizing recovers the input.
    pub fn quadratic_twist(&self, f: &IntPoly) -> Result<(WeierstrassModel, IntPoly)> {
        if f.is_zero() {
            return Err(Error::BadParameters("cannot twist by zero".into()));
        }
        let fsf = signed_squarefree(f);
        let f2 = fsf.mul(&fsf);
        let f3 = f2.mul(&fsf);
        let model = WeierstrassModel::new(self.a.mul(&f2), self.b.mul(&f3))
            .expect("twisting scales the discriminant by f^6 != 0");
        Ok((model, fsf))
    }

    /// Quadratic twist branched exactly at the given places. The branch
    /// locus of the associated double cover must have even total degree
    /// (infinity counts once); the twisting polynomial f = product of the
    /// finite place polynomials then has even degree when infinity is
    /// unramified and odd degree (odd valuation at infinity) when it
    /// ramifies. The result is minimalized.
    pub fn twist_by_points(&self, places: &[Place]) -> Result<(WeierstrassModel, IntPoly)> {
        let mut f = IntPoly::one();
        let mut finite_degree = 0usize;
        let mut at_infinity = false;
        for (i, place) in places.iter().enumerate() {
            if places[..i].contains(place) {
                return Err(Error::BadParameters(format!(
                    "duplicate branch place {place}"
                )));
            }
            match place {
                Place::Finite(p) => {
                    if factor_over_q(p)?.factors.len() != 1 {
                        return Err(Error::BadParameters(format!(
                            "branch place ({p}) is not irreducible"
                        )));
                    }
                    finite_degree += p.deg();
                    f = f.mul(p);
                }
                Place::Infinity => at_infinity = true,
            }
        }
        let total = finite_degree + usize::from(at_infinity);
        if total % 2 != 0 {
            return Err(Error::BadParameters(format!(
                "branch locus has odd total degree {total}; a double cover needs an even one"
            )));
        }
        let (twisted, fnorm) = self.quadratic_twist(&f)?;
        Ok((twisted.minimalize().model, fnorm))
    }

    /// Pulls the model back along a nonconstant rational map t = g(s): the
    /// coefficients A(g), B(g) are cleared with u = den(g)^k (smallest k with
    /// 4k >= deg A and 6k >= deg B) and the result is minimalized.
    pub fn base_change(&self, g: &RatFunc) -> Result<WeierstrassModel> {
        let n = g.numerator();
        let d = g.denominator();
        let deg_map = n.degree().map_or(0, |x| x).max(d.deg());
        if deg_map == 0 {
            return Err(Error::BadParameters(
                "base change requires a nonconstant map".into(),
            ));
        }
        let da = self.a.degree().map_or(0, |x| x);
        let db = self.b.degree().map_or(0, |x| x);
        let k = da.div_ceil(4).max(db.div_ceil(6));

        // A' = d^{4k} A(n/d) = sum_i a_i n^i d^{4k - i}, and similarly for B.
        let a_new = substitute_cleared(&self.a, n, d, 4 * k);
        let b_new = substitute_cleared(&self.b, n, d, 6 * k);
        let model = WeierstrassModel::new(a_new, b_new).map_err(|_| {
            Error::Degenerate(
                "base change produced a degenerate model".into(),
            )
        })?;
        Ok(model.minimalize().model)
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({}) x + ({})", self.a, self.b)
    }
}

fn discriminant_of(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let four_a3 = a.pow(3).mul_i64(4);
    let twenty_seven_b2 = b.mul(b).mul_i64(27);
    four_a3.add(&twenty_seven_b2).mul_i64(-16)
}

fn valuation_opt(f: &IntPoly, place: &IntPoly) -> Option<usize> {
    if f.is_zero() {
        None
    } else {
        Some(f.valuation(place))
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> usize {
    assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

/// Squarefree part keeping the integer content and overall sign:
/// content(f) * sign * product of the distinct irreducible factors.
fn signed_squarefree(f: &IntPoly) -> IntPoly {
    assert!(!f.is_zero());
    let mut c = f.content();
    if f.leading().is_negative() {
        c = -c;
    }
    f.squarefree_part().mul_big(&c)
}

/// If num = c * den for a rational constant c, returns c.
fn constant_ratio(num: &IntPoly, den: &IntPoly) -> Option<BigRational> {
    if num.is_zero() || den.is_zero() {
        return None;
    }
    if num.deg() != den.deg() {
        return None;
    }
    let c = BigRational::new(num.leading(), den.leading());
    for k in 0..=den.deg() {
        if BigRational::from(num.coeff(k)) != &c * BigRational::from(den.coeff(k)) {
            return None;
        }
    }
    Some(c)
}

/// Exact rational n-th root, if it exists. For even n the input must be
/// nonnegative and the nonnegative root is returned.
pub fn rational_nth_root(r: &BigRational, n: u32) -> Option<BigRational> {
    assert!(n >= 1);
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    if n % 2 == 0 && r.is_negative() {
        return None;
    }
    let num = int_nth_root(r.numer(), n)?;
    let den = int_nth_root(r.denom(), n)?;
    Some(BigRational::new(num, den))
}

fn int_nth_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let mag: BigUint = x.magnitude().nth_root(n);
    let candidate = if x.is_negative() {
        -BigInt::from(mag)
    } else {
        BigInt::from(mag)
    };
    if candidate.pow(n) == *x {
        Some(candidate)
    } else {
        None
    }
}

/// sum_i f_i n^i d^{target - i}; requires target >= deg f.
fn substitute_cleared(f: &IntPoly, n: &IntPoly, d: &IntPoly, target: usize) -> IntPoly {
    if f.is_zero() {
        return IntPoly::zero();
    }
    let deg = f.deg();
    assert!(target >= deg);
    let mut acc = IntPoly::constant(f.coeff(deg));
    for i in (0..deg).rev() {
        acc = acc.mul(n).add(&d.pow((deg - i) as u32).mul_big(&f.coeff(i)));
    }
    acc.mul(&d.pow((target - deg) as u32))
}
