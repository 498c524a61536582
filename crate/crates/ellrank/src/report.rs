//! Machine-readable reports: the JSON schemas for fiber classifications,
//! point counts, construction ledgers, and rank certificates, plus the
//! offline re-verification of a certificate's internal arithmetic.
//!
//! Schema conventions: every document carries a `format` tag; big integers
//! are decimal strings; polynomials in the base parameter t are rendered as
//! parseable text; Weil polynomials are arrays of decimal coefficient
//! strings, constant term first. Field order is fixed by declaration order,
//! so serialized output is stable across runs.

use std::collections::BTreeSet;
use std::fmt::Display;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::expr::parse_poly;
use crate::algebra::factor_int::FactorBudget;
use crate::algebra::poly::IntPoly;
use crate::algebra::square_class::SquareClass;
use crate::error::{Error, Result};
use crate::kodaira::{fiber_configuration, FiberConfiguration};
use crate::picard::{
    count_tate_roots, extend_base_field, parity_check, van_luijk_compare, ComparisonVerdict,
    MwRank, PicardReport, RankCertificate,
};
use crate::picard::artin_tate_square_class;
use crate::ranks::{construction_pipeline, RankLedger, RankValue};
use crate::weierstrass::model::WeierstrassModel;
use crate::zeta::{CharPolyH2, TraceData};

pub const FIBERS_FORMAT: &str = "ellrank-fibers-v1";
pub const COUNT_FORMAT: &str = "ellrank-count-v1";
pub const LEDGER_FORMAT: &str = "ellrank-ledger-v1";
pub const CERTIFICATE_FORMAT: &str = "ellrank-certificate-v1";

/// A Weierstrass model as two parseable polynomial strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub a: String,
    pub b: String,
}

impl ModelJson {
    pub fn from_model(m: &WeierstrassModel) -> Self {
        ModelJson {
            a: m.a().to_string(),
            b: m.b().to_string(),
        }
    }

    pub fn to_model(&self) -> Result<WeierstrassModel> {
        let a = parse_poly(&self.a, "t")?;
        let b = parse_poly(&self.b, "t")?;
        WeierstrassModel::new(a, b)
    }
}

/// One classified singular fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberJson {
    /// The place, as a polynomial in parentheses or "infinity".
    pub place: String,
    /// Degree of the place (number of geometric fibers it stands for).
    pub degree: usize,
    /// Kodaira type label.
    pub kodaira: String,
    /// Valuation of the minimal discriminant at the place.
    pub v_delta: usize,
    /// Component count m(P).
    pub components: usize,
    /// Local Euler number.
    pub euler: usize,
}

/// JSON payload of the fiber-classification command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibersReport {
    pub format: String,
    /// The model as given.
    pub model: ModelJson,
    /// The minimal model the classification ran on.
    pub minimal_model: ModelJson,
    pub fibers: Vec<FiberJson>,
    /// Sum of degree * local Euler number over the singular fibers.
    pub total_euler: usize,
    pub surface_kind: String,
    /// Shioda-Tate fiber contribution: sum of degree * (components - 1).
    pub fiber_rank_contribution: usize,
}

fn fiber_json_list(config: &FiberConfiguration) -> Vec<FiberJson> {
    config
        .fibers
        .iter()
        .map(|f| FiberJson {
            place: f.place.to_string(),
            degree: f.degree,
            kodaira: f.kodaira.to_string(),
            v_delta: f.v_delta,
            components: f.components,
            euler: f.euler,
        })
        .collect()
}

pub fn fibers_report(input: &WeierstrassModel, config: &FiberConfiguration) -> FibersReport {
    FibersReport {
        format: FIBERS_FORMAT.into(),
        model: ModelJson::from_model(input),
        minimal_model: ModelJson::from_model(&config.minimal_model),
        fibers: fiber_json_list(config),
        total_euler: config.total_euler,
        surface_kind: config.surface_kind.to_string(),
        fiber_rank_contribution: config.fiber_rank_contribution(),
    }
}

/// JSON payload of the point-count command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub format: String,
    pub model: ModelJson,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub point_count: u64,
    /// Lefschetz trace on H^2: point_count - 1 - q^2.
    pub t2: i64,
}

pub fn count_report(model: &WeierstrassModel, p: u64, k: u32, data: &TraceData) -> CountReport {
    CountReport {
        format: COUNT_FORMAT.into(),
        model: ModelJson::from_model(model),
        p,
        k,
        q: data.q,
        point_count: data.point_count,
        t2: data.t2,
    }
}

/// One step of the construction ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub label: String,
    pub description: String,
    pub configuration: String,
    pub rank: String,
    pub justifications: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// JSON payload of the construction ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerJson {
    pub format: String,
    /// The family parameters (a, b, c), as exact rationals.
    pub parameters: [String; 3],
    pub steps: Vec<StepJson>,
    /// Display form of the final rank, e.g. "15 + rank(MW(pi-tilde))".
    pub final_rank: String,
    /// The known part of the final rank when it carries a symbolic summand.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symbolic_base: Option<u32>,
    /// The twisted K3 companion whose rank is the symbolic unknown.
    pub pi_twist: ModelJson,
    /// The final K3 of the tower.
    pub phi: ModelJson,
    /// The requested family member.
    pub family_member: ModelJson,
    /// Scaling witness u identifying phi with the family member.
    pub family_witness: String,
}

pub fn ledger_json(ledger: &RankLedger) -> LedgerJson {
    let (a, b, c) = &ledger.parameters;
    LedgerJson {
        format: LEDGER_FORMAT.into(),
        parameters: [a.to_string(), b.to_string(), c.to_string()],
        steps: ledger
            .steps
            .iter()
            .map(|s| StepJson {
                label: s.label.clone(),
                description: s.description.clone(),
                configuration: s.configuration.clone(),
                rank: s.rank.to_string(),
                justifications: s.justifications.iter().map(|j| j.to_string()).collect(),
                note: s.note.clone(),
            })
            .collect(),
        final_rank: ledger.final_rank.to_string(),
        symbolic_base: match ledger.final_rank {
            RankValue::Known(_) => None,
            RankValue::WithUnknown { base } => Some(base),
        },
        pi_twist: ModelJson::from_model(&ledger.pi_twist),
        phi: ModelJson::from_model(&ledger.phi),
        family_member: ModelJson::from_model(&ledger.family_member),
        family_witness: ledger.family_witness.to_string(),
    }
}

/// A square class as sign, odd-exponent primes, and unfactored leftovers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassJson {
    pub sign: i8,
    pub primes: Vec<String>,
    pub unresolved: Vec<String>,
}

impl SquareClassJson {
    fn from_class(c: &SquareClass) -> Self {
        SquareClassJson {
            sign: c.sign,
            primes: c.primes.iter().map(|p| p.to_string()).collect(),
            unresolved: c.unresolved.iter().map(|u| u.to_string()).collect(),
        }
    }

    fn to_class(&self) -> Result<SquareClass> {
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Parse(format!(
                "square-class sign must be +1 or -1, got {}",
                self.sign
            )));
        }
        let primes: BTreeSet<BigInt> = self
            .primes
            .iter()
            .map(|s| parse_bigint(s))
            .collect::<Result<_>>()?;
        let unresolved: Vec<BigInt> = self
            .unresolved
            .iter()
            .map(|s| parse_bigint(s))
            .collect::<Result<_>>()?;
        Ok(SquareClass {
            sign: self.sign,
            primes,
            unresolved,
        })
    }
}

/// A recorded Frobenius trace over F_{p^k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub k: u32,
    pub t2: i64,
}

/// The per-prime half of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReportJson {
    pub p: u64,
    /// Traces the reconstruction consumed.
    pub traces: Vec<TraceJson>,
    /// Whether the F_{p^3} sign tiebreak was needed.
    pub tiebreak_used: bool,
    /// Degree-17 fiber-visible factor, constant term first.
    pub algebraic_factor: Vec<String>,
    /// Sign of the 18th algebraic eigenvalue: the factor (1 - epsilon p x).
    pub epsilon: i8,
    /// Functional-equation sign of the transcendental quartic.
    pub eta: i8,
    /// Degree-4 transcendental factor.
    pub transcendental_factor: Vec<String>,
    /// Full degree-22 characteristic polynomial of Frobenius on H^2.
    pub charpoly: Vec<String>,
    /// Tate root count = geometric Picard number of the reduction.
    pub rho_bar: usize,
    pub parity_ok: bool,
    /// Even extension degree rationalizing every Tate root.
    pub stabilizing_degree: usize,
    /// p^stabilizing_degree.
    pub q_extended: String,
    /// The characteristic polynomial over the extension field.
    pub extended_charpoly: Vec<String>,
    /// Square class of -R(1/q") over the extension: the Neron-Severi
    /// discriminant modulo squares.
    pub square_class: SquareClassJson,
}

/// A Mordell-Weil rank conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MwRankJson {
    Exact(usize),
    Between(usize, usize),
}

impl MwRankJson {
    fn from_rank(r: &MwRank) -> Self {
        match r {
            MwRank::Exact(n) => MwRankJson::Exact(*n),
            MwRank::Between(lo, hi) => MwRankJson::Between(*lo, *hi),
        }
    }

    fn to_rank(&self) -> MwRank {
        match self {
            MwRankJson::Exact(n) => MwRank::Exact(*n),
            MwRankJson::Between(lo, hi) => MwRank::Between(*lo, *hi),
        }
    }
}

/// JSON payload of the rank certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub format: String,
    /// The model the certification was asked about.
    pub input: ModelJson,
    /// The surface the point counting ran on.
    pub counted: ModelJson,
    /// Classified configuration of the counted surface.
    pub configuration: FibersReport,
    /// Shioda-Tate lower bound for the counted surface.
    pub rho_lower: usize,
    pub reports: Vec<PrimeReportJson>,
    /// "classes-differ" | "classes-equal" | "unresolved" | "rho-bar-mismatch".
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
    pub rho_upper: usize,
    /// The pinned Picard number, when the bounds meet.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<usize>,
    /// Mordell-Weil rank of the counted fibration.
    pub counted_mw: MwRankJson,
    /// Mordell-Weil rank conclusion for the input fibration (geometric when
    /// the identification with the counted surface is geometric).
    pub mw_rank: MwRankJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ledger: Option<LedgerJson>,
    pub conclusion: String,
}

fn verdict_tag(v: ComparisonVerdict) -> &'static str {
    match v {
        ComparisonVerdict::ClassesDiffer => "classes-differ",
        ComparisonVerdict::ClassesEqual => "classes-equal",
        ComparisonVerdict::Unresolved => "unresolved",
        ComparisonVerdict::RhoBarMismatch => "rho-bar-mismatch",
    }
}

fn poly_strings(f: &IntPoly) -> Vec<String> {
    f.coeffs().iter().map(|c| c.to_string()).collect()
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

fn parse_poly_strings(coeffs: &[String]) -> Result<IntPoly> {
    let parsed: Vec<BigInt> = coeffs
        .iter()
        .map(|s| parse_bigint(s))
        .collect::<Result<_>>()?;
    Ok(IntPoly::from_coeffs(parsed))
}

fn prime_report_json(r: &PicardReport) -> PrimeReportJson {
    let cp: &CharPolyH2 = &r.charpoly;
    PrimeReportJson {
        p: r.p,
        traces: cp.traces.iter().map(|&(k, t2)| TraceJson { k, t2 }).collect(),
        tiebreak_used: cp.tiebreak_used,
        algebraic_factor: poly_strings(&cp.algebraic_factor),
        epsilon: cp.epsilon,
        eta: cp.eta,
        transcendental_factor: poly_strings(&cp.transcendental_factor),
        charpoly: poly_strings(&cp.poly),
        rho_bar: r.rho_bar,
        parity_ok: r.parity_ok,
        stabilizing_degree: r.stabilizing_degree,
        q_extended: r.q_extended.to_string(),
        extended_charpoly: poly_strings(&r.extended_charpoly),
        square_class: SquareClassJson::from_class(&r.square_class),
    }
}

/// Builds the JSON form of a certificate. The counted surface's
/// configuration is re-derived (deterministically) so the document carries
/// the full fiber data the offline verification needs.
pub fn certificate_json(cert: &RankCertificate) -> Result<CertificateJson> {
    let config = fiber_configuration(&cert.counted)?;
    Ok(CertificateJson {
        format: CERTIFICATE_FORMAT.into(),
        input: ModelJson::from_model(&cert.input),
        counted: ModelJson::from_model(&cert.counted),
        configuration: fibers_report(&cert.counted, &config),
        rho_lower: cert.rho_lower,
        reports: cert.reports.iter().map(prime_report_json).collect(),
        verdict: verdict_tag(cert.verdict).into(),
        warning: cert.warning.clone(),
        rho_upper: cert.rho_upper,
        rho: cert.rho,
        counted_mw: MwRankJson::from_rank(&cert.counted_mw),
        mw_rank: MwRankJson::from_rank(&cert.mw_rank),
        ledger: cert.ledger.as_ref().map(ledger_json),
        conclusion: cert.conclusion.clone(),
    })
}

/// Serializes any of the report documents with stable formatting.
pub fn to_json_string<T: Serialize>(doc: &T) -> Result<String> {
    serde_json::to_string_pretty(doc)
        .map_err(|e| Error::Internal(format!("JSON serialization failed: {e}")))
}

fn fail(what: impl Display) -> Error {
    Error::Internal(format!("certificate inconsistent: {what}"))
}

fn check(cond: bool, what: impl Display) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(what))
    }
}

/// Re-verifies one prime report's arithmetic and reassembles it as a
/// [`PicardReport`] for the comparison re-check.
fn verify_prime_report(r: &PrimeReportJson, budget: &FactorBudget) -> Result<PicardReport> {
    let p = r.p;
    let algebraic = parse_poly_strings(&r.algebraic_factor)?;
    let transcendental = parse_poly_strings(&r.transcendental_factor)?;
    let charpoly = parse_poly_strings(&r.charpoly)?;
    let extended = parse_poly_strings(&r.extended_charpoly)?;
    let q_extended = parse_bigint(&r.q_extended)?;

    check(
        r.epsilon == 1 || r.epsilon == -1,
        format!("epsilon at p = {p} must be +1 or -1"),
    )?;
    check(
        r.eta == 1 || r.eta == -1,
        format!("eta at p = {p} must be +1 or -1"),
    )?;

    // The factorization identity: charpoly = algebraic * (1 - eps p x) * quartic.
    let eps_block = IntPoly::from_coeffs(vec![
        BigInt::from(1),
        BigInt::from(-i64::from(r.epsilon) * p as i64),
    ]);
    let product = algebraic.mul(&eps_block).mul(&transcendental);
    check(
        product == charpoly,
        format!("the recorded factors at p = {p} do not multiply to the charpoly"),
    )?;
    check(
        charpoly.deg() == 22 && algebraic.deg() == 17 && transcendental.deg() == 4,
        format!("factor degrees at p = {p} are not 17 + 1 + 4 = 22"),
    )?;

    // Functional equation on the quartic: a3 = eta p^2 a1, a4 = eta p^4.
    let eta = BigInt::from(i64::from(r.eta));
    let p_big = BigInt::from(p);
    let p2 = &p_big * &p_big;
    let p4 = &p2 * &p2;
    check(
        transcendental.coeff(3) == &eta * &p2 * transcendental.coeff(1)
            && transcendental.coeff(4) == &eta * &p4,
        format!("the quartic at p = {p} violates its functional equation"),
    )?;

    // Recorded traces must be the Newton power sums of the charpoly.
    let kmax = r.traces.iter().map(|t| t.k).max().unwrap_or(0) as usize;
    let sums = crate::algebra::cyclotomic::power_sums(&charpoly, kmax);
    for t in &r.traces {
        check(
            t.k >= 1 && sums[t.k as usize] == BigInt::from(t.t2),
            format!(
                "the recorded trace over F_{{{p}^{}}} disagrees with the charpoly",
                t.k
            ),
        )?;
    }

    // Tate count, parity, stabilization.
    let (rho_bar, raw_lcm) = count_tate_roots(&charpoly, &p_big)?;
    check(
        rho_bar == r.rho_bar,
        format!("the Tate root count at p = {p} is {rho_bar}, not {}", r.rho_bar),
    )?;
    check(
        r.parity_ok && parity_check(rho_bar, charpoly.deg()),
        format!("the parity check at p = {p} fails"),
    )?;
    check(
        r.stabilizing_degree == raw_lcm.lcm(&2),
        format!("the stabilizing degree at p = {p} is not lcm({raw_lcm}, 2)"),
    )?;
    check(
        q_extended == p_big.pow(r.stabilizing_degree as u32),
        format!("q_extended at p = {p} is not p^{}", r.stabilizing_degree),
    )?;
    check(
        extended == extend_base_field(&charpoly, r.stabilizing_degree)?,
        format!("the extended charpoly at p = {p} is not the transported one"),
    )?;

    // Square class, recomputed from scratch under the given budget.
    let stored = r.square_class.to_class()?;
    let recomputed = artin_tate_square_class(&extended, &q_extended, rho_bar, budget)?;
    match stored.same_class(&recomputed) {
        Some(true) => {}
        Some(false) => {
            return Err(fail(format!(
                "the recorded square class at p = {p} is {stored}, but recomputation \
                 gives {recomputed}"
            )));
        }
        None => {
            return Err(Error::ResourceBound(format!(
                "the square class at p = {p} could not be resolved within the factoring \
                 budget; rerun verification with a larger --factor-timeout"
            )));
        }
    }

    Ok(PicardReport {
        p,
        charpoly: CharPolyH2 {
            p,
            poly: charpoly,
            algebraic_factor: algebraic,
            transcendental_factor: transcendental,
            epsilon: r.epsilon,
            eta: r.eta,
            traces: r.traces.iter().map(|t| (t.k, t.t2)).collect(),
            tiebreak_used: r.tiebreak_used,
        },
        rho_bar,
        stabilizing_degree: r.stabilizing_degree,
        q_extended,
        extended_charpoly: extended,
        square_class: stored,
        parity_ok: r.parity_ok,
    })
}

fn verify_configuration(doc: &CertificateJson) -> Result<FiberConfiguration> {
    let counted = doc.counted.to_model()?;
    let config = fiber_configuration(&counted)?;
    let expected = fibers_report(&counted, &config);
    check(
        expected.fibers == doc.configuration.fibers
            && expected.total_euler == doc.configuration.total_euler
            && expected.surface_kind == doc.configuration.surface_kind
            && expected.fiber_rank_contribution == doc.configuration.fiber_rank_contribution,
        "the recorded fiber configuration does not match reclassification",
    )?;

    // Shioda-Tate sums, from the recorded fiber list itself.
    let euler_sum: usize = doc
        .configuration
        .fibers
        .iter()
        .map(|f| f.degree * f.euler)
        .sum();
    check(
        euler_sum == doc.configuration.total_euler,
        "the fiber Euler numbers do not sum to the recorded total",
    )?;
    let contribution: usize = doc
        .configuration
        .fibers
        .iter()
        .map(|f| f.degree * (f.components - 1))
        .sum();
    check(
        contribution == doc.configuration.fiber_rank_contribution,
        "the fiber component counts do not sum to the recorded contribution",
    )?;
    check(
        doc.configuration.surface_kind == "K3" && doc.configuration.total_euler == 24,
        "a rank certificate must be about a K3 (Euler number 24)",
    )?;
    check(
        doc.rho_lower == 2 + contribution,
        format!(
            "the Shioda-Tate lower bound should be 2 + {contribution}, not {}",
            doc.rho_lower
        ),
    )?;
    Ok(config)
}

fn verify_ledger(doc: &CertificateJson) -> Result<()> {
    let Some(ledger) = &doc.ledger else {
        return Ok(());
    };
    check(
        ledger.format == LEDGER_FORMAT,
        format!("unknown ledger format tag {:?}", ledger.format),
    )?;
    let params: Vec<BigRational> = ledger
        .parameters
        .iter()
        .map(|s| {
            s.parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("bad ledger parameter {s:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let rebuilt = construction_pipeline(&params[0], &params[1], &params[2])
        .map_err(|e| e.with_context("ledger re-verification"))?;
    let expected = ledger_json(&rebuilt);
    check(
        expected == *ledger,
        "the construction ledger does not match a rebuild from its parameters",
    )
}

/// Re-verifies every internal arithmetic claim of a certificate document:
/// the fiber classification and Shioda-Tate sums, each prime's polynomial
/// factorizations, traces, Tate count, extension, and square class, the
/// two-prime comparison, and the rank bookkeeping. Point counts themselves
/// are not repeated; the traces are instead checked for consistency with
/// the recorded characteristic polynomial, which the Weil bounds and the
/// functional equation pin down.
pub fn verify_certificate(doc: &CertificateJson, budget: &FactorBudget) -> Result<()> {
    check(
        doc.format == CERTIFICATE_FORMAT,
        format!("unknown certificate format tag {:?}", doc.format),
    )?;
    let config = verify_configuration(doc)?;
    let contribution = config.fiber_rank_contribution();

    check(
        doc.reports.len() == 2,
        format!("expected two prime reports, found {}", doc.reports.len()),
    )?;
    let r1 = verify_prime_report(&doc.reports[0], budget)?;
    let r2 = verify_prime_report(&doc.reports[1], budget)?;

    let outcome = van_luijk_compare(&r1, &r2);
    check(
        verdict_tag(outcome.verdict) == doc.verdict,
        format!(
            "the comparison verdict should be {:?}, not {:?}",
            verdict_tag(outcome.verdict),
            doc.verdict
        ),
    )?;
    check(
        outcome.rho_upper == doc.rho_upper,
        format!(
            "the comparison bounds rho by {}, not {}",
            outcome.rho_upper, doc.rho_upper
        ),
    )?;
    check(
        outcome.warning.is_some() == doc.warning.is_some(),
        "warning presence does not match the comparison outcome",
    )?;

    check(
        doc.rho_lower <= doc.rho_upper,
        format!(
            "the bounds cross: rho >= {} but rho <= {}",
            doc.rho_lower, doc.rho_upper
        ),
    )?;
    let expected_rho = (doc.rho_lower == doc.rho_upper).then_some(doc.rho_lower);
    check(
        doc.rho == expected_rho,
        format!("rho should be {expected_rho:?}, not {:?}", doc.rho),
    )?;

    let expected_counted_mw = if let Some(rho) = doc.rho {
        MwRank::Exact(rho - 2 - contribution)
    } else {
        MwRank::Between(
            doc.rho_lower - 2 - contribution,
            doc.rho_upper - 2 - contribution,
        )
    };
    check(
        doc.counted_mw.to_rank() == expected_counted_mw,
        format!(
            "the counted Mordell-Weil rank should be {expected_counted_mw}, not {}",
            doc.counted_mw.to_rank()
        ),
    )?;

    // The input's conclusion: identical to the counted one on the direct
    // path, shifted by the ledger's base on the companion path.
    let direct = doc.input == doc.counted;
    let expected_mw = if direct {
        expected_counted_mw
    } else {
        let Some(ledger) = &doc.ledger else {
            return Err(fail(
                "a certificate counting a different surface must carry the ledger \
                 linking the input to it",
            ));
        };
        let base = ledger.symbolic_base.ok_or_else(|| {
            fail("the linking ledger carries no symbolic summand to upgrade")
        })? as usize;
        match expected_counted_mw {
            MwRank::Exact(r) => MwRank::Exact(base + r),
            MwRank::Between(lo, hi) => MwRank::Between(base + lo, base + hi),
        }
    };
    check(
        doc.mw_rank.to_rank() == expected_mw,
        format!(
            "the input's Mordell-Weil conclusion should be {expected_mw}, not {}",
            doc.mw_rank.to_rank()
        ),
    )?;

    verify_ledger(doc)
}

/// Parses a certificate document and re-verifies it; see
/// [`verify_certificate`].
pub fn verify_certificate_json(json: &str, budget: &FactorBudget) -> Result<CertificateJson> {
    let doc: CertificateJson = serde_json::from_str(json)
        .map_err(|e| Error::Parse(format!("bad certificate JSON: {e}")))?;
    verify_certificate(&doc, budget)?;
    Ok(doc)
}
