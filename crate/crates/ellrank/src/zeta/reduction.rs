//! Good reduction of an elliptic surface modulo a prime.
//!
//! A prime p gives good reduction of the *configuration* when the reduced
//! discriminant is nonzero and every fiber of the reduced surface has the
//! same Kodaira type, with places of the same degrees, as in characteristic
//! zero. This is the hypothesis under which mod-p point counts compute the
//! characteristic-zero Picard data, so any mismatch is reported as a
//! bad-reduction error rather than silently absorbed.

use crate::error::{Error, Result};
use crate::finite_fields::FpPoly;
use crate::kodaira::{classify_from_valuations, fiber_configuration, KodairaType};
use crate::weierstrass::{PlaceValuations, WeierstrassModel};

/// One singular fiber of the reduced surface, at a monic irreducible place.
#[derive(Debug, Clone)]
pub struct ReducedFiber {
    /// Monic irreducible polynomial in F_p[t] cutting out the place.
    pub place: FpPoly,
    /// Kodaira type of the fiber over that place.
    pub kodaira: KodairaType,
    /// Degree of the place (= degree of `place`).
    pub degree: usize,
}

/// A minimal Weierstrass model reduced modulo a good prime, with its
/// singular fibers classified over F_p.
#[derive(Debug, Clone)]
pub struct ReducedSurface {
    /// The (good) prime of reduction.
    pub p: u64,
    /// Reduction of the minimal A(t).
    pub a: FpPoly,
    /// Reduction of the minimal B(t).
    pub b: FpPoly,
    /// Reduction of the infinity-chart A*(s) = s^{4m} A(1/s).
    pub a_star: FpPoly,
    /// Reduction of the infinity-chart B*(s) = s^{6m} B(1/s).
    pub b_star: FpPoly,
    /// Chart degree m of the characteristic-zero model (Euler number 12m).
    pub chart_degree: usize,
    /// Singular fibers at finite places, in factorization order.
    pub finite_fibers: Vec<ReducedFiber>,
    /// Kodaira type at the place at infinity, if singular there.
    pub infinity_fiber: Option<KodairaType>,
    /// Type multiset with degrees aggregated, sorted; equals the
    /// characteristic-zero multiset by construction.
    pub multiset: Vec<(KodairaType, usize)>,
}

/// Valuation of f at a monic irreducible place poly; None for f = 0.
fn fp_valuation(f: &FpPoly, place: &FpPoly) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let mut v = 0usize;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.divrem(place);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = q;
    }
}

/// s-adic valuation at s = 0, i.e. index of the first nonzero coefficient.
fn fp_valuation_at_zero(f: &FpPoly) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    f.coeffs().iter().position(|&c| c != 0)
}

/// Delta = -16 (4 A^3 + 27 B^2) over F_p.
fn fp_discriminant(a: &FpPoly, b: &FpPoly) -> FpPoly {
    let p = a.prime();
    let four_a3 = a.mul(a).mul(a).mul_scalar(4 % p);
    let twenty_seven_b2 = b.mul(b).mul_scalar(27 % p);
    let minus_16 = (p - 16 % p) % p;
    four_a3.add(&twenty_seven_b2).mul_scalar(minus_16)
}

fn classify_reduced(
    p: u64,
    v: &PlaceValuations,
    where_: &str,
) -> Result<KodairaType> {
    classify_from_valuations(v).map_err(|e| Error::BadReduction {
        prime: p,
        message: format!("fiber at {where_} does not classify over F_{p}: {e}"),
    })
}

fn multiset_text(ms: &[(KodairaType, usize)]) -> String {
    if ms.is_empty() {
        return "(none)".into();
    }
    ms.iter()
        .map(|(k, d)| format!("{k}:{d}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Reduces a model modulo p and certifies good reduction of the fiber
/// configuration.
///
/// Fails with a bad-reduction error when p < 5 (wild primes are out of
/// scope), when the reduced discriminant vanishes, when some reduced fiber
/// fails to classify (e.g. the model stops being minimal mod p), or when the
/// reduced type multiset differs from the characteristic-zero one.
pub fn reduce_mod_p(m: &WeierstrassModel, p: u64) -> Result<ReducedSurface> {
    if !crate::finite_fields::is_prime_u64(p) {
        return Err(Error::BadParameters(format!(
            "reduction modulus {p} is not prime"
        )));
    }
    if p < 5 {
        return Err(Error::BadReduction {
            prime: p,
            message: "primes 2 and 3 are wild for short Weierstrass models and are not \
                      supported"
                .into(),
        });
    }

    // Characteristic-zero reference data, on the minimal model.
    let char0 = fiber_configuration(m)?;
    let minimal = &char0.minimal_model;
    let char0_multiset = char0.type_multiset();
    let chart_degree = minimal.chart_degree();

    let a = FpPoly::from_intpoly(p, minimal.a());
    let b = FpPoly::from_intpoly(p, minimal.b());
    let delta = fp_discriminant(&a, &b);
    if delta.is_zero() {
        return Err(Error::BadReduction {
            prime: p,
            message: "the discriminant vanishes identically mod p".into(),
        });
    }

    // Finite places: factor the reduced discriminant and classify each.
    let mut finite_fibers = Vec::new();
    let (_, factors) = delta.factor();
    for (place, _) in &factors {
        let v = PlaceValuations {
            v_c4: fp_valuation(&a, place),
            v_c6: fp_valuation(&b, place),
            v_delta: fp_valuation(&delta, place)
                .expect("nonzero discriminant has finite valuations"),
        };
        let kodaira = classify_reduced(p, &v, &format!("({place})"))?;
        if kodaira.is_singular() {
            finite_fibers.push(ReducedFiber {
                degree: place.deg(),
                place: place.clone(),
                kodaira,
            });
        }
    }

    // The place at infinity, on the reduced infinity chart.
    let (chart, _) = minimal.infinity_chart();
    let a_star = FpPoly::from_intpoly(p, chart.a());
    let b_star = FpPoly::from_intpoly(p, chart.b());
    let delta_star = fp_discriminant(&a_star, &b_star);
    let v_delta_inf = match fp_valuation_at_zero(&delta_star) {
        Some(v) => v,
        None => {
            return Err(Error::BadReduction {
                prime: p,
                message: "the discriminant of the infinity chart vanishes identically mod p"
                    .into(),
            })
        }
    };
    let v_inf = PlaceValuations {
        v_c4: fp_valuation_at_zero(&a_star),
        v_c6: fp_valuation_at_zero(&b_star),
        v_delta: v_delta_inf,
    };
    let kodaira_inf = classify_reduced(p, &v_inf, "infinity")?;
    let infinity_fiber = kodaira_inf.is_singular().then_some(kodaira_inf);

    // Aggregate the reduced multiset and compare with characteristic zero.
    let mut multiset: Vec<(KodairaType, usize)> = Vec::new();
    let mut push = |k: &KodairaType, d: usize| {
        match multiset.iter_mut().find(|(t, _)| t == k) {
            Some((_, total)) => *total += d,
            None => multiset.push((k.clone(), d)),
        }
    };
    for f in &finite_fibers {
        push(&f.kodaira, f.degree);
    }
    if let Some(k) = &infinity_fiber {
        push(k, 1);
    }
    multiset.sort();

    if multiset != char0_multiset {
        return Err(Error::BadReduction {
            prime: p,
            message: format!(
                "the singular-fiber multiset changes under reduction: characteristic zero \
                 has {} but F_{p} has {}",
                multiset_text(&char0_multiset),
                multiset_text(&multiset)
            ),
        });
    }

    Ok(ReducedSurface {
        p,
        a,
        b,
        a_star,
        b_star,
        chart_degree,
        finite_fibers,
        infinity_fiber,
        multiset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weierstrass::parse::parse_model;

    fn model(a: &str, b: &str) -> WeierstrassModel {
        let src = format!("A = {a}\nB = {b}\n");
        parse_model(&src).unwrap()
    }

    /// The certified K3: III* at infinity, I0* at (2t-1) and (4t-1), 3 I1.
    fn certified_k3() -> WeierstrassModel {
        model(
            "-(2*t - 1)^3 * (4*t - 1)^2",
            "t * (2*t - 1)^3 * (4*t - 1)^3",
        )
    }

    #[test]
    fn wild_primes_are_rejected() {
        let m = certified_k3();
        for p in [2u64, 3] {
            let err = reduce_mod_p(&m, p).unwrap_err();
            assert_eq!(err.exit_code(), 5, "p = {p}: {err}");
        }
        let err = reduce_mod_p(&m, 6).unwrap_err();
        assert_eq!(err.exit_code(), 4, "composite modulus: {err}");
    }

    #[test]
    fn good_reduction_of_the_certified_k3_at_17_and_19() {
        let m = certified_k3();
        for p in [17u64, 19] {
            let red = reduce_mod_p(&m, p).unwrap();
            assert_eq!(red.p, p);
            assert_eq!(red.chart_degree, 2);
            assert_eq!(red.infinity_fiber, Some(KodairaType::IIIStar));
            // 3 I1 places (one degree-2 + one degree-1 from the cubic
            // factor of Delta away from the starred places, or three
            // linear ones, depending on p) and 2 I0* places.
            let mut istar_places: Vec<String> = red
                .finite_fibers
                .iter()
                .filter(|f| f.kodaira == KodairaType::IStar(0))
                .map(|f| f.place.to_string())
                .collect();
            istar_places.sort();
            let inv2 = (p + 1) / 2; // -(p+1)/2 * 2 = -(p+1) = -1 mod p => t - inv2 = 2t-1 up to scale
            let inv4 = match p {
                17 => 13, // 4 * 13 = 52 = 51 + 1 = 1 mod 17
                19 => 5,  // 4 * 5 = 20 = 1 mod 19
                _ => unreachable!(),
            };
            let mut expect = vec![format!("t + {}", p - inv2), format!("t + {}", p - inv4)];
            expect.sort();
            assert_eq!(istar_places, expect, "p = {p}");
            let i1_total: usize = red
                .finite_fibers
                .iter()
                .filter(|f| f.kodaira == KodairaType::I(1))
                .map(|f| f.degree)
                .sum();
            assert_eq!(i1_total, 3, "p = {p}");
        }
    }

    #[test]
    fn reduced_multiset_matches_characteristic_zero_for_the_rational_seed() {
        // y^2 = x^3 + t^3(t-2) x + t^5: III* at t=0 plus 3 I1.
        let m = model("t^3*(t - 2)", "t^5");
        let red = reduce_mod_p(&m, 17).unwrap();
        assert_eq!(red.chart_degree, 1);
        let iii_star: Vec<_> = red
            .finite_fibers
            .iter()
            .filter(|f| f.kodaira == KodairaType::IIIStar)
            .collect();
        assert_eq!(iii_star.len(), 1);
        assert_eq!(iii_star[0].place.to_string(), "t");
        assert_eq!(red.infinity_fiber, None);
    }

    #[test]
    fn fibers_that_collide_mod_p_are_rejected() {
        // y^2 = x^3 + 5x + t: Delta = -16(500 + 27t^2). In characteristic
        // zero the quadratic is irreducible, giving a conjugate pair of I1
        // fibers. Mod 5 it degenerates to a unit times t^2, so the two I1
        // collide into one type-II fiber: the multiset changes.
        let m = model("5", "t");
        let char0 = fiber_configuration(&m).unwrap();
        // Characteristic zero: Delta = -16(27t^2 + 500), two I1 places
        // aggregated as one degree-2 conjugate pair (t^2 + 500/27 is
        // irreducible over Q), plus the fiber at infinity.
        assert!(char0
            .type_multiset()
            .iter()
            .any(|(k, d)| *k == KodairaType::I(1) && *d == 2));
        let err = reduce_mod_p(&m, 5).unwrap_err();
        match &err {
            Error::BadReduction { prime: 5, message } => {
                assert!(
                    message.contains("multiset") || message.contains("classify"),
                    "unexpected message: {message}"
                );
            }
            other => panic!("expected bad reduction, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_discriminant_mod_p_is_rejected() {
        // A = -3*7^2, B = 2*7^3 + 7t: then 4A^3 + 27B^2 =
        // -108*7^6 + 27(4*7^6 + 4*7^4 t + 7^2 t^2) = 108*7^4 t + 27*7^2 t^2,
        // which is nonzero in characteristic zero but identically 0 mod 7.
        let m = model("-147", "7*t + 686");
        let err = reduce_mod_p(&m, 7).unwrap_err();
        match &err {
            Error::BadReduction { prime: 7, message } => {
                assert!(message.contains("discriminant"), "{message}");
            }
            other => panic!("expected bad reduction, got {other:?}"),
        }
    }

    #[test]
    fn starred_fiber_that_degenerates_mod_p_is_rejected() {
        // A = 5t^2, B = t^3(t+5): characteristic zero has I0* at t = 0
        // (v = (2, 3, 6)), a conjugate I1 pair, and IV at infinity.
        // Mod 5 the model becomes (0, t^4), so t = 0 has v = (inf, 4, 8),
        // which is IV*: the multiset changes and reduction must fail.
        let m = model("5*t^2", "t^3*(t + 5)");
        let char0 = fiber_configuration(&m).unwrap();
        assert!(char0
            .type_multiset()
            .iter()
            .any(|(k, _)| *k == KodairaType::IStar(0)));
        match reduce_mod_p(&m, 5) {
            Err(Error::BadReduction { prime: 5, message }) => {
                assert!(message.contains("multiset"), "{message}");
            }
            other => panic!("expected bad reduction, got {other:?}"),
        }
    }
}
