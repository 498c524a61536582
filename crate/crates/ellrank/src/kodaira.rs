//! Kodaira classification of singular fibers from valuations, component and
//! Euler-number bookkeeping, surface-kind detection, and the symbolic fiber
//! transformation tables for quadratic twists and base changes.

use std::fmt;

use crate::error::{Error, Result};
use crate::weierstrass::model::{Place, PlaceValuations, WeierstrassModel};

/// A Kodaira fiber type (characteristic 0 / residue characteristic >= 5).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    /// I_nu; I(0) is the smooth fiber.
    I(usize),
    /// I*_nu.
    IStar(usize),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components m(P). These are the standard
    /// Kodaira counts (I_nu: nu for nu >= 1, I*_nu: nu+5, III*: 8, ...),
    /// which are the ones the Shioda-Tate arithmetic needs: the rank-17
    /// lattice of the certified K3 decomposes as 2 + 4 + 4 + 7 with
    /// m(I0*) = 5 and m(III*) = 8.
    pub fn components(&self) -> usize {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(nu) => *nu,
            KodairaType::IStar(nu) => nu + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Local Euler number e(P); always equals v(Delta) in this scope.
    pub fn euler(&self) -> usize {
        match self {
            KodairaType::I(nu) => *nu,
            KodairaType::IStar(nu) => nu + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    pub fn is_singular(&self) -> bool {
        *self != KodairaType::I(0)
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(nu) => write!(f, "I{nu}"),
            KodairaType::IStar(nu) => write!(f, "I{nu}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// One classified fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDescriptor {
    pub place: Place,
    pub kodaira: KodairaType,
    pub v_delta: usize,
    /// Component count m(P) of the type.
    pub components: usize,
    /// Local Euler number of the type.
    pub euler: usize,
    /// Degree of the place: a degree-d place stands for d geometric fibers.
    pub degree: usize,
}

impl fmt::Display for FiberDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {} (v(Delta) = {}, m = {}, e = {}, degree {})",
            self.kodaira, self.place, self.v_delta, self.components, self.euler, self.degree
        )
    }
}

/// What the total Euler number says about the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Euler number 12: rational elliptic surface.
    Rational,
    /// Euler number 24: K3.
    K3,
    /// Anything else (0 = product, 36, 48, ... = higher Euler number).
    Other(usize),
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::Rational => write!(f, "rational"),
            SurfaceKind::K3 => write!(f, "K3"),
            SurfaceKind::Other(e) => write!(f, "other (Euler number {e})"),
        }
    }
}

/// The classified singular fibers of a (minimalized) model.
#[derive(Clone, Debug)]
pub struct FiberConfiguration {
    /// Singular fibers only, finite places first (in the deterministic
    /// factor order), the place at infinity last.
    pub fibers: Vec<FiberDescriptor>,
    /// Sum of degree(P) * e(P) = 12 * (chart degree of the minimal model).
    pub total_euler: usize,
    pub surface_kind: SurfaceKind,
    /// The minimal model the classification was computed on.
    pub minimal_model: WeierstrassModel,
}

impl FiberConfiguration {
    /// Shioda-Tate fiber contribution: sum of degree(P) * (m(P) - 1).
    pub fn fiber_rank_contribution(&self) -> usize {
        self.fibers
            .iter()
            .map(|f| f.degree * (f.components - 1))
            .sum()
    }

    /// Total geometric number of fibers of the given type (degree-weighted).
    pub fn count_of(&self, k: &KodairaType) -> usize {
        self.fibers
            .iter()
            .filter(|f| &f.kodaira == k)
            .map(|f| f.degree)
            .sum()
    }

    /// The degree-weighted multiset of types, e.g. [(III*, 1), (I1, 3)],
    /// sorted for comparison.
    pub fn type_multiset(&self) -> Vec<(KodairaType, usize)> {
        let mut seen: Vec<(KodairaType, usize)> = Vec::new();
        for f in &self.fibers {
            match seen.iter_mut().find(|(k, _)| k == &f.kodaira) {
                Some((_, d)) => *d += f.degree,
                None => seen.push((f.kodaira.clone(), f.degree)),
            }
        }
        seen.sort();
        seen
    }
}

impl fmt::Display for FiberConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "singular fibers:")?;
        for fiber in &self.fibers {
            writeln!(f, "  {fiber}")?;
        }
        write!(
            f,
            "total Euler number {} => {}",
            self.total_euler, self.surface_kind
        )
    }
}

/// Classifies one fiber from its valuation triple. This is the standard
/// char-0 table; the model must be minimal at the place.
pub fn classify_from_valuations(v: &PlaceValuations) -> Result<KodairaType> {
    let vd = v.v_delta;
    let vc4 = v.v_c4;
    let vc6 = v.v_c6;
    let c4_at_least = |k: usize| vc4.map_or(true, |x| x >= k);
    let c6_at_least = |k: usize| vc6.map_or(true, |x| x >= k);
    if c4_at_least(4) && c6_at_least(6) {
        return Err(Error::Internal(
            "model is not minimal at the place (v(c4) >= 4 and v(c6) >= 6)".into(),
        ));
    }
    if vd == 0 {
        return Ok(KodairaType::I(0));
    }
    if vc4 == Some(0) {
        return Ok(KodairaType::I(vd));
    }
    let t = match vd {
        2 => KodairaType::II,
        3 if vc4 == Some(1) => KodairaType::III,
        4 if c4_at_least(2) && vc6 == Some(2) => KodairaType::IV,
        6 if c4_at_least(2) && c6_at_least(3) => KodairaType::IStar(0),
        n if n > 6 && vc4 == Some(2) && vc6 == Some(3) => KodairaType::IStar(n - 6),
        8 if c4_at_least(3) && vc6 == Some(4) => KodairaType::IVStar,
        9 if vc4 == Some(3) && c6_at_least(5) => KodairaType::IIIStar,
        10 if c4_at_least(4) && vc6 == Some(5) => KodairaType::IIStar,
        _ => {
            return Err(Error::Internal(format!(
                "valuation pattern (v(c4), v(c6), v(Delta)) = ({:?}, {:?}, {}) matches no \
                 Kodaira row",
                vc4, vc6, vd
            )))
        }
    };
    Ok(t)
}

/// Classifies the fiber of a minimal model at one place.
pub fn classify_place(m: &WeierstrassModel, place: &Place) -> Result<FiberDescriptor> {
    let v = m.valuations(place);
    let kodaira = classify_from_valuations(&v)?;
    Ok(FiberDescriptor {
        components: kodaira.components(),
        euler: kodaira.euler(),
        degree: place.degree(),
        v_delta: v.v_delta,
        kodaira,
        place: place.clone(),
    })
}

/// Minimalizes the model, factors its discriminant, and classifies every
/// singular fiber (including the place at infinity).
pub fn fiber_configuration(m: &WeierstrassModel) -> Result<FiberConfiguration> {
    let minimal = m.minimalize().model;
    let delta = minimal.discriminant();
    let chart_degree = minimal.chart_degree();

    let mut fibers = Vec::new();
    if delta.degree().map_or(false, |d| d >= 1) {
        let factored = crate::algebra::factor_poly::factor_over_q(&delta)?;
        for (p, _) in &factored.factors {
            let desc = classify_place(&minimal, &Place::Finite(p.clone()))?;
            if desc.kodaira.is_singular() {
                fibers.push(desc);
            }
        }
    }
    let at_infinity = classify_place(&minimal, &Place::Infinity)?;
    if at_infinity.kodaira.is_singular() {
        fibers.push(at_infinity);
    }

    let total_euler: usize = fibers.iter().map(|f| f.degree * f.euler).sum();
    if total_euler != 12 * chart_degree {
        return Err(Error::Internal(format!(
            "Euler bookkeeping failed: fibers sum to {total_euler}, the chart degree {chart_degree} \
             demands {}",
            12 * chart_degree
        )));
    }
    let surface_kind = match total_euler {
        12 => SurfaceKind::Rational,
        24 => SurfaceKind::K3,
        e => SurfaceKind::Other(e),
    };
    Ok(FiberConfiguration {
        fibers,
        total_euler,
        surface_kind,
        minimal_model: minimal,
    })
}

/// The quadratic-twist exchange at a branch place:
/// I_nu <-> I*_nu, II <-> IV*, III <-> III*, IV <-> II*.
pub fn twist_transform(k: &KodairaType) -> KodairaType {
    match k {
        KodairaType::I(nu) => KodairaType::IStar(*nu),
        KodairaType::IStar(nu) => KodairaType::I(*nu),
        KodairaType::II => KodairaType::IVStar,
        KodairaType::IVStar => KodairaType::II,
        KodairaType::III => KodairaType::IIIStar,
        KodairaType::IIIStar => KodairaType::III,
        KodairaType::IV => KodairaType::IIStar,
        KodairaType::IIStar => KodairaType::IV,
    }
}

/// The fiber type above a branch point of a double cover:
/// I_nu or I*_nu -> I_{2nu}, II or IV* -> IV, III or III* -> I0*,
/// IV or II* -> IV*.
pub fn ramified_double_cover_transform(k: &KodairaType) -> KodairaType {
    match k {
        KodairaType::I(nu) | KodairaType::IStar(nu) => KodairaType::I(2 * nu),
        KodairaType::II | KodairaType::IVStar => KodairaType::IV,
        KodairaType::III | KodairaType::IIIStar => KodairaType::IStar(0),
        KodairaType::IV | KodairaType::IIStar => KodairaType::IVStar,
    }
}

/// The fiber type above a point with ramification index e: multiplicative
/// fibers scale (I_nu -> I_{e*nu}); additive fibers are supported for
/// e = 1 (unchanged) and e = 2 (the double-cover table).
pub fn ramification_expand(k: &KodairaType, e: usize) -> Result<KodairaType> {
    match (k, e) {
        (_, 0) => Err(Error::BadParameters(
            "ramification index must be positive".into(),
        )),
        (_, 1) => Ok(k.clone()),
        (KodairaType::I(nu), _) => Ok(KodairaType::I(e * nu)),
        (_, 2) => Ok(ramified_double_cover_transform(k)),
        _ => Err(Error::BadParameters(format!(
            "ramification index {e} over an additive fiber ({k}) is outside the supported \
             transformation tables"
        ))),
    }
}

/// Fiber pullback at an unramified point: the descriptor replicates once per
/// preimage point.
pub fn unramified_base_change_expand(
    desc: &FiberDescriptor,
    preimages: usize,
) -> Vec<FiberDescriptor> {
    vec![desc.clone(); preimages]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_poly;
    use crate::algebra::poly::IntPoly;
    use crate::algebra::ratfunc::RatFunc;
    use crate::weierstrass::families::{auxiliary_e_prime_c, f_ab_map, family_e_abc};
    use num_rational::BigRational;

    fn parse(s: &str) -> IntPoly {
        parse_poly(s, "t").unwrap()
    }

    fn model(a: &str, b: &str) -> WeierstrassModel {
        WeierstrassModel::new(parse(a), parse(b)).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn section5_model() -> WeierstrassModel {
        model(
            "-(2t - 1)^3 (4t - 1)^2",
            "t (2t - 1)^3 (4t - 1)^3",
        )
    }

    #[test]
    fn component_and_euler_table() {
        let rows: [(KodairaType, usize, usize); 10] = [
            (KodairaType::I(1), 1, 1),
            (KodairaType::I(5), 5, 5),
            (KodairaType::IStar(0), 5, 6),
            (KodairaType::IStar(2), 7, 8),
            (KodairaType::II, 1, 2),
            (KodairaType::III, 2, 3),
            (KodairaType::IV, 3, 4),
            (KodairaType::IVStar, 7, 8),
            (KodairaType::IIIStar, 8, 9),
            (KodairaType::IIStar, 9, 10),
        ];
        for (k, m, e) in rows {
            assert_eq!(k.components(), m, "components of {k}");
            assert_eq!(k.euler(), e, "euler of {k}");
        }
        assert_eq!(KodairaType::I(0).components(), 1);
        assert_eq!(KodairaType::I(0).euler(), 0);
    }

    #[test]
    fn classification_of_the_auxiliary_surface() {
        let m = auxiliary_e_prime_c(&rat(2));
        // At t = 0: (v(c4), v(c6), v(Delta)) = (3, 5, 9) -> III*.
        let d = classify_place(&m, &Place::finite(&parse("t"))).unwrap();
        assert_eq!(d.kodaira, KodairaType::IIIStar);
        assert_eq!((d.v_delta, d.components, d.euler), (9, 8, 9));
        // At 2t - 1: I1.
        let d = classify_place(&m, &Place::finite(&parse("2t - 1"))).unwrap();
        assert_eq!(d.kodaira, KodairaType::I(1));
        // At the irreducible quadratic: one descriptor of degree 2.
        let d = classify_place(&m, &Place::finite(&parse("2t^2 - 11t + 32"))).unwrap();
        assert_eq!(d.kodaira, KodairaType::I(1));
        assert_eq!(d.degree, 2);
        // Smooth at infinity.
        let d = classify_place(&m, &Place::Infinity).unwrap();
        assert_eq!(d.kodaira, KodairaType::I(0));
    }

    #[test]
    fn full_configuration_of_the_auxiliary_surface() {
        let config = fiber_configuration(&auxiliary_e_prime_c(&rat(2))).unwrap();
        assert_eq!(config.total_euler, 12);
        assert_eq!(config.surface_kind, SurfaceKind::Rational);
        assert_eq!(
            config.type_multiset(),
            vec![(KodairaType::I(1), 3), (KodairaType::IIIStar, 1)]
        );
        assert_eq!(config.fiber_rank_contribution(), 7);
    }

    #[test]
    fn full_configuration_of_the_certified_k3() {
        let config = fiber_configuration(&section5_model()).unwrap();
        assert_eq!(config.total_euler, 24);
        assert_eq!(config.surface_kind, SurfaceKind::K3);
        assert_eq!(
            config.type_multiset(),
            vec![
                (KodairaType::I(1), 3),
                (KodairaType::IStar(0), 2),
                (KodairaType::IIIStar, 1),
            ]
        );
        // I0* at 2t-1 and 4t-1, III* at infinity.
        let istar_places: Vec<String> = config
            .fibers
            .iter()
            .filter(|f| f.kodaira == KodairaType::IStar(0))
            .map(|f| f.place.to_string())
            .collect();
        assert_eq!(istar_places, vec!["(2*t - 1)", "(4*t - 1)"]);
        let iiistar = config
            .fibers
            .iter()
            .find(|f| f.kodaira == KodairaType::IIIStar)
            .unwrap();
        assert_eq!(iiistar.place, Place::Infinity);
        // Shioda-Tate: 2 + (4 + 4 + 7) = 17 from fibers alone.
        assert_eq!(config.fiber_rank_contribution(), 15);
    }

    #[test]
    fn generic_family_member_has_24_nodal_fibers() {
        let m = family_e_abc(&rat(3), &rat(5), &rat(7)).unwrap();
        let config = fiber_configuration(&m).unwrap();
        assert_eq!(config.surface_kind, SurfaceKind::K3);
        assert_eq!(config.type_multiset(), vec![(KodairaType::I(1), 24)]);
    }

    #[test]
    fn nonminimal_input_is_reported() {
        let m = auxiliary_e_prime_c(&rat(2));
        let big = WeierstrassModel::new(
            m.a().mul(&parse("t^4")),
            m.b().mul(&parse("t^6")),
        )
        .unwrap();
        assert!(matches!(
            classify_place(&big, &Place::finite(&parse("t"))),
            Err(Error::Internal(_))
        ));
        // fiber_configuration minimalizes first, so the same input is fine.
        let config = fiber_configuration(&big).unwrap();
        assert_eq!(config.total_euler, 12);
    }

    #[test]
    fn twist_table_is_the_paper_involution() {
        let pairs = [
            (KodairaType::I(0), KodairaType::IStar(0)),
            (KodairaType::I(3), KodairaType::IStar(3)),
            (KodairaType::II, KodairaType::IVStar),
            (KodairaType::III, KodairaType::IIIStar),
            (KodairaType::IV, KodairaType::IIStar),
        ];
        for (a, b) in pairs {
            assert_eq!(twist_transform(&a), b);
            assert_eq!(twist_transform(&b), a);
            assert_eq!(twist_transform(&twist_transform(&a)), a);
        }
    }

    #[test]
    fn twist_transform_matches_actual_twists() {
        // Twist the auxiliary surface at {t, infinity} and compare the
        // classification at t with the symbolic table.
        let m = auxiliary_e_prime_c(&rat(2));
        let place = Place::finite(&parse("t"));
        let before = classify_place(&m, &place).unwrap().kodaira;
        let (tw, _) = m.twist_by_points(&[place.clone(), Place::Infinity]).unwrap();
        let after = classify_place(&tw, &place).unwrap().kodaira;
        assert_eq!(after, twist_transform(&before));
        // III* -> III, and at infinity I0 -> I0*.
        assert_eq!(after, KodairaType::III);
        let at_inf = classify_place(&tw, &Place::Infinity).unwrap().kodaira;
        assert_eq!(at_inf, KodairaType::IStar(0));

        // Untouched places keep their types.
        let nodal = Place::finite(&parse("2t - 1"));
        assert_eq!(
            classify_place(&tw, &nodal).unwrap().kodaira,
            KodairaType::I(1)
        );
    }

    #[test]
    fn double_cover_table_matches_actual_base_change() {
        // Pull the auxiliary surface back along t = s^2 (branched at 0 and
        // infinity) and compare classifications above the branch points.
        let m = auxiliary_e_prime_c(&rat(2));
        let sq = RatFunc::from_poly(parse("t^2"));
        let pulled = m.base_change(&sq).unwrap();

        let before = classify_place(&m, &Place::finite(&parse("t"))).unwrap();
        let after = classify_place(&pulled, &Place::finite(&parse("t"))).unwrap();
        assert_eq!(after.kodaira, ramified_double_cover_transform(&before.kodaira));
        assert_eq!(after.kodaira, KodairaType::IStar(0));

        // Above infinity (also a branch point): I0 stays I0.
        assert_eq!(
            classify_place(&pulled, &Place::Infinity).unwrap().kodaira,
            KodairaType::I(0)
        );

        // A nodal fiber at a totally ramified point of index 4 becomes I4:
        // Delta of y^2 = x^3 - 3x + (2 + t) is -432 t (t + 4).
        let nodal = WeierstrassModel::new(parse("-3"), parse("2 + t")).unwrap();
        assert_eq!(
            classify_place(&nodal, &Place::finite(&parse("t"))).unwrap().kodaira,
            KodairaType::I(1)
        );
        let quartic = nodal
            .base_change(&RatFunc::from_poly(parse("t^4")))
            .unwrap();
        assert_eq!(
            classify_place(&quartic, &Place::finite(&parse("t"))).unwrap().kodaira,
            KodairaType::I(4)
        );
        assert_eq!(
            ramification_expand(&KodairaType::I(1), 4).unwrap(),
            KodairaType::I(4)
        );
        assert!(ramification_expand(&KodairaType::II, 4).is_err());
        assert_eq!(
            ramification_expand(&KodairaType::IIIStar, 2).unwrap(),
            KodairaType::IStar(0)
        );
    }

    #[test]
    fn unramified_pullback_replicates_fibers() {
        // pi_1 = base change of the auxiliary surface along f_{2,4}: the
        // III* at t=0 has two unramified preimages {0, infinity}.
        let m = auxiliary_e_prime_c(&rat(2));
        let f = f_ab_map(&rat(2), &rat(4)).unwrap();
        let pulled = m.base_change(&f).unwrap();
        let config = fiber_configuration(&pulled).unwrap();
        assert_eq!(config.surface_kind, SurfaceKind::K3);
        assert_eq!(
            config.type_multiset(),
            vec![(KodairaType::I(1), 6), (KodairaType::IIIStar, 2)]
        );
        let desc = classify_place(&m, &Place::finite(&parse("t"))).unwrap();
        assert_eq!(unramified_base_change_expand(&desc, 2).len(), 2);
    }

    #[test]
    fn classification_rejects_unmatched_patterns() {
        // (1, 1, 2) is II; (1, 1, 5) matches no row.
        let ok = PlaceValuations { v_c4: Some(1), v_c6: Some(1), v_delta: 2 };
        assert_eq!(classify_from_valuations(&ok).unwrap(), KodairaType::II);
        let bad = PlaceValuations { v_c4: Some(1), v_c6: Some(1), v_delta: 5 };
        assert!(matches!(
            classify_from_valuations(&bad),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn surface_kinds_cover_products_and_bigger_surfaces() {
        // Constant coefficients: product surface, Euler number 0.
        let c = model("1", "1");
        let config = fiber_configuration(&c).unwrap();
        assert_eq!(config.total_euler, 0);
        assert_eq!(config.surface_kind, SurfaceKind::Other(0));
        assert!(config.fibers.is_empty());

        // Pulling the K3 back along t = s^2 (branched at the smooth fiber
        // t = 0 and at the III* at infinity) gives Euler number 36:
        // the III* becomes I0*, everything else doubles.
        let x = section5_model();
        let pulled = x
            .base_change(&RatFunc::from_poly(parse("t^2")))
            .unwrap();
        let config = fiber_configuration(&pulled).unwrap();
        assert_eq!(config.total_euler, 36);
        assert_eq!(config.surface_kind, SurfaceKind::Other(36));
        assert_eq!(
            classify_place(&pulled, &Place::Infinity).unwrap().kodaira,
            KodairaType::IStar(0)
        );
    }
}
