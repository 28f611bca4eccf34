//! Products of subfield integers, diagonal `±1` forms and six-square
//! compositions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::DecompError;
use crate::field::{
    CaseLabel, Field, FieldElement, FieldParams, Radical, RationalElement, RationalQuartic, SubfieldTag,
};
use crate::sos::{decompose_sos, SearchConfig, SosCertificate};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn ser_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_q3<S: Serializer>(x: &Option<[Q; 3]>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(|v| v.clone().map(|c| c.to_string())).serialize(s)
}

fn ser_rational_element<S: Serializer>(x: &RationalElement, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn check_integral(alpha: &FieldElement) -> Result<(), DecompError> {
    if alpha.is_integral() {
        Ok(())
    } else {
        Err(DecompError::NotIntegral(alpha.to_string()))
    }
}

fn check_positive(alpha: &FieldElement) -> Result<(), DecompError> {
    if alpha.is_totally_positive() {
        Ok(())
    } else {
        Err(DecompError::NotTotallyPositive(alpha.to_string()))
    }
}

// ---------------------------------------------------------------------------
// quadratic factors

/// `x + y*sqrt(D)` in the quadratic subfield of `radical`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticFactor {
    pub radical: Radical,
    pub radicand: i64,
    #[serde(serialize_with = "ser_q")]
    pub rational: Q,
    #[serde(serialize_with = "ser_q")]
    pub surd: Q,
}

impl QuadraticFactor {
    pub fn new(field: &FieldParams, radical: Radical, rational: Q, surd: Q) -> Self {
        QuadraticFactor {
            radical,
            radicand: field.radicand(radical),
            rational,
            surd,
        }
    }

    pub fn to_element(&self, field: &Field) -> RationalElement {
        RationalElement::quadratic(field, self.radical, self.rational.clone(), self.surd.clone())
    }

    /// Integrality in `Q(sqrt D)`: half-integer coordinates of equal parity
    /// only when `D = 1 (mod 4)`.
    pub fn is_integral(&self) -> bool {
        if self.radicand.rem_euclid(4) == 1 {
            let x2 = &self.rational * q(2);
            let y2 = &self.surd * q(2);
            x2.is_integer() && y2.is_integer() && (x2.to_integer() - y2.to_integer()).is_even()
        } else {
            self.rational.is_integer() && self.surd.is_integer()
        }
    }

    pub fn is_totally_positive(&self) -> bool {
        self.rational.is_positive()
            && &self.rational * &self.rational > &self.surd * &self.surd * q(self.radicand)
    }

    fn is_totally_negative(&self) -> bool {
        self.rational.is_negative()
            && &self.rational * &self.rational > &self.surd * &self.surd * q(self.radicand)
    }

    fn scale(&self, t: &Q) -> Self {
        QuadraticFactor {
            radical: self.radical,
            radicand: self.radicand,
            rational: &self.rational * t,
            surd: &self.surd * t,
        }
    }

    /// `(g / den) * (a', b')` with `(a', b')` a primitive integer vector.
    fn content(&self) -> (BigInt, BigInt) {
        let den = self.rational.denom().lcm(self.surd.denom());
        let a = (&self.rational * Q::from_integer(den.clone())).to_integer();
        let b = (&self.surd * Q::from_integer(den.clone())).to_integer();
        (a.gcd(&b), den)
    }
}

impl fmt::Display for QuadraticFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.surd.is_negative() { '-' } else { '+' };
        let y = self.surd.abs();
        if y.is_zero() {
            write!(f, "{}", self.rational)
        } else if y.is_one() {
            write!(f, "{} {sign} sqrt({})", self.rational, self.radicand)
        } else {
            write!(f, "{} {sign} {}*sqrt({})", self.rational, y, self.radicand)
        }
    }
}

// ---------------------------------------------------------------------------
// product decompositions

const PAIRINGS: [(Radical, Radical, Radical); 3] = [
    (Radical::M, Radical::N, Radical::R),
    (Radical::M, Radical::R, Radical::N),
    (Radical::N, Radical::R, Radical::M),
];

/// `alpha = factor1 * factor2` with the factors in two distinct quadratic
/// subfields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDecomposition {
    pub alpha: FieldElement,
    pub factor1: QuadraticFactor,
    pub factor2: QuadraticFactor,
    pub pairing: [Radical; 2],
    pub integral: bool,
    /// `alpha` lies in a proper subfield; the second factor is 1.
    pub degenerate: bool,
    /// `(b d, a / b, c / d)` for `(a + b sqrt p)(c + d sqrt q)`.
    #[serde(serialize_with = "ser_opt_q3")]
    pub kappa: Option<[Q; 3]>,
}

impl ProductDecomposition {
    /// Exact re-multiplication of the factors.
    pub fn verify(&self) -> bool {
        let field = self.alpha.field();
        let prod = &self.factor1.to_element(field) * &self.factor2.to_element(field);
        prod == RationalElement::from(&self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductClass {
    Integral,
    RationalOnly,
    NotAProduct,
    Degenerate,
}

fn real_coords(alpha: &FieldElement) -> [Q; 4] {
    alpha.to_rational_coords()
}

/// `kappa` read off the coordinates for the pairing `(P, Q)` with third
/// radical `T`: `(W/lambda, Z lambda/W, Y lambda/W)`.
fn kappa_from_coords(c: &[Q; 4], p: Radical, qr: Radical, t: Radical, lambda: i64) -> Option<[Q; 3]> {
    let (y, z, w) = (&c[p.coord_index()], &c[qr.coord_index()], &c[t.coord_index()]);
    if w.is_zero() {
        return None;
    }
    let l = q(lambda);
    Some([w / &l, z * &l / w, y * &l / w])
}

fn degenerate_decomposition(alpha: &FieldElement) -> Option<ProductDecomposition> {
    let proj = alpha.subfield_project()?;
    let field = alpha.field();
    let (first, second) = match proj.tag {
        SubfieldTag::Rational | SubfieldTag::SqrtM => (Radical::M, Radical::N),
        SubfieldTag::SqrtN => (Radical::N, Radical::M),
        SubfieldTag::SqrtR => (Radical::R, Radical::M),
    };
    Some(ProductDecomposition {
        alpha: alpha.clone(),
        factor1: QuadraticFactor::new(field, first, proj.rational, proj.surd),
        factor2: QuadraticFactor::new(field, second, Q::one(), Q::zero()),
        pairing: [first, second],
        integral: true,
        degenerate: true,
        kappa: None,
    })
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All factorizations of `alpha`, without sign requirements: every
/// integral one per consistent pairing, or one rational representative when
/// a pairing admits no integral scaling.
pub fn product_factorizations(alpha: &FieldElement) -> Result<Vec<ProductDecomposition>, DecompError> {
    check_integral(alpha)?;
    if let Some(d) = degenerate_decomposition(alpha) {
        return Ok(vec![d]);
    }
    let field = alpha.field();
    let c = real_coords(alpha);
    let mut integral = Vec::new();
    let mut rational = Vec::new();
    for (p, qr, t) in PAIRINGS {
        let lambda = field.cross_factor(p, qr);
        let (x, y, z, w) = (&c[0], &c[p.coord_index()], &c[qr.coord_index()], &c[t.coord_index()]);
        // (a + b sqrt P)(c + d sqrt Q) = ac + bc sqrt P + ad sqrt Q + lambda bd sqrt T
        if x * w != q(lambda) * y * z {
            continue;
        }
        let Some(kappa) = kappa_from_coords(&c, p, qr, t, lambda) else {
            continue;
        };
        let f1 = QuadraticFactor::new(field, p, z.clone(), w / q(lambda));
        let f2 = QuadraticFactor::new(field, qr, q(lambda) * y / w, Q::one());
        let make = |t: &Q| {
            let mut a = f1.scale(t);
            let mut b = f2.scale(&t.recip());
            if a.is_totally_negative() && b.is_totally_negative() {
                a = a.scale(&q(-1));
                b = b.scale(&q(-1));
            }
            ProductDecomposition {
                alpha: alpha.clone(),
                factor1: a,
                factor2: b,
                pairing: [p, qr],
                integral: false,
                degenerate: false,
                kappa: Some(kappa.clone()),
            }
        };
        // t f1 half-integral <=> t = j D1 / (2 g1); f2 / t half-integral <=>
        // t = 2 g2 / (D2 i); so i j = 4 g1 g2 / (D1 D2) must be an integer.
        let (g1, d1) = f1.content();
        let (g2, d2) = f2.content();
        let r = Q::new(BigInt::from(4) * &g1 * &g2, &d1 * &d2);
        let mut found = false;
        if r.is_integer() {
            let r = r.to_integer();
            // smallest first factor first
            for i in positive_divisors(&r).into_iter().rev() {
                let j = &r / &i;
                let t = Q::new(j * &d1, BigInt::from(2) * &g1);
                let cand = make(&t);
                if cand.factor1.is_integral() && cand.factor2.is_integral() {
                    let mut cand = cand;
                    cand.integral = true;
                    if !integral.contains(&cand) {
                        integral.push(cand);
                    }
                    found = true;
                }
            }
        }
        if !found {
            rational.push(make(&Q::new(d1, g1)));
        }
    }
    integral.extend(rational);
    Ok(integral)
}

/// Decompositions of a totally positive integer into totally positive
/// subfield factors, integral ones first.
pub fn find_product_decomposition(alpha: &FieldElement) -> Result<Vec<ProductDecomposition>, DecompError> {
    check_integral(alpha)?;
    check_positive(alpha)?;
    let all = product_factorizations(alpha)?;
    debug_assert!(all
        .iter()
        .all(|d| d.degenerate || (d.factor1.is_totally_positive() && d.factor2.is_totally_positive())));
    Ok(all)
}

pub fn classify_product(alpha: &FieldElement) -> Result<ProductClass, DecompError> {
    let all = product_factorizations(alpha)?;
    Ok(match all.first() {
        None => ProductClass::NotAProduct,
        Some(d) if d.degenerate => ProductClass::Degenerate,
        Some(d) if d.integral => ProductClass::Integral,
        Some(_) => ProductClass::RationalOnly,
    })
}

// ---------------------------------------------------------------------------
// quartic criterion

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionMatch {
    /// `(p, q)` in the order of `kappa_1 (kappa_2 + sqrt p)(kappa_3 + sqrt q)`.
    pub pairing: [Radical; 2],
    #[serde(serialize_with = "ser_q3")]
    pub kappa: [Q; 3],
    /// `kappa_3 > sqrt q`; the criterion itself only asks `kappa_2 > sqrt p`.
    pub kappa3_exceeds: bool,
    pub printed: PrintedRelations,
}

fn ser_q3<S: Serializer>(x: &[Q; 3], s: S) -> Result<S::Ok, S::Error> {
    x.clone().map(|c| c.to_string()).serialize(s)
}

/// The coefficient relations as printed, evaluated at a matching `kappa`,
/// next to the minimal polynomial's coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedRelations {
    pub a: [String; 4],
    pub actual: [String; 4],
    pub agrees: [bool; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossVerdict {
    /// Criterion and factor search agree, with integral factors.
    Agree,
    /// Criterion matches but only non-integral factors exist.
    IntegralityGap,
    /// Criterion matched a conjugate of `alpha` rather than `alpha`.
    ConjugateMatch,
    /// An integral product whose `kappa` leaves the half-integers.
    KappaNotHalfIntegral,
    Unexplained,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub pairing: [Radical; 2],
    #[serde(serialize_with = "ser_opt_q3")]
    pub criterion: Option<[Q; 3]>,
    /// `Some(integral)` when a factorization exists for the pairing.
    pub factorization: Option<bool>,
    pub verdict: CrossVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub alpha: FieldElement,
    pub min_poly: RationalQuartic,
    pub totally_positive: bool,
    /// The minimal polynomial has degree below 4; no criterion applied.
    pub degenerate: bool,
    pub matches: Vec<CriterionMatch>,
    pub cross_checks: Vec<CrossCheck>,
}

impl CriterionReport {
    pub fn unexplained(&self) -> usize {
        self.cross_checks
            .iter()
            .filter(|c| c.verdict == CrossVerdict::Unexplained)
            .count()
    }
}

fn is_half_integer(x: &Q) -> bool {
    (x * q(2)).is_integer()
}

/// Searches `kappa` with `kappa_1, kappa_1 kappa_2, kappa_1 kappa_3` positive
/// half-integers and `kappa_2 > sqrt p` such that `beta = kappa_1 (kappa_2 +
/// sqrt p)(kappa_3 + sqrt q)` has the given minimal polynomial. With
/// `T = kappa_1 kappa_2 kappa_3`, `A = kappa_1 kappa_2`, `B = kappa_1 kappa_3`,
/// `k = kappa_1`, expansion gives
///
/// ```text
/// c3 = -4T
/// c2 = 6T^2 - 2(A^2 q + p B^2 + k^2 p q)
/// c1 = -4T (A^2 - k^2 p)(B^2 - k^2 q) / k^2
/// c0 = ((A^2 - k^2 p)(B^2 - k^2 q) / k^2)^2
/// ```
fn criterion_search(mp: &RationalQuartic, p: i64, qq: i64) -> Vec<[Q; 3]> {
    let (c0, c1, c2, c3) = (mp.coeff(0), mp.coeff(1), mp.coeff(2), mp.coeff(3));
    let t = -&c3 / q(4);
    if !t.is_positive() {
        return vec![];
    }
    let s = q(3) * &t * &t - &c2 / q(2);
    let m = -&c1 / (q(4) * &t);
    if &m * &m != c0 {
        return vec![];
    }
    let (pq, pp, qq) = (q(p * qq), q(p), q(qq));
    let mut out = Vec::new();
    let mut j = 1i64;
    loop {
        let k = frac(j, 2);
        let k2 = &k * &k;
        if &k2 * &pq >= s {
            break;
        }
        j += 1;
        let n = q(4) * &k * &t;
        if !n.is_integer() {
            continue;
        }
        let n = n.to_integer();
        for x in positive_divisors(&n) {
            let a = Q::new(x.clone(), BigInt::from(2));
            let b = Q::new(&n / &x, BigInt::from(2));
            if &a * &a <= &k2 * &pp {
                continue;
            }
            if &a * &a * &qq + &pp * &b * &b + &k2 * &pq != s {
                continue;
            }
            if (&a * &a - &k2 * &pp) * (&b * &b - &k2 * &qq) != &k2 * &m {
                continue;
            }
            out.push([k.clone(), &a / &k, &b / &k]);
        }
    }
    out
}

fn printed_relations(mp: &RationalQuartic, kappa: &[Q; 3], p: i64, qq: i64) -> PrintedRelations {
    let [k1, k2, k3] = kappa;
    let a0 = k1 * k1 * (k2 * k2 - q(p)) * (k3 * k3 - q(qq));
    let a3 = q(4) * k1 * k2 * k3;
    let a1 = (&a3 / q(2)) * (&a3 / q(2)) + q(2) * &a0;
    let a2 = &a0 * &a3;
    let printed = [a0, a1, a2, a3];
    let actual = [mp.coeff(0), mp.coeff(1), mp.coeff(2), mp.coeff(3)];
    PrintedRelations {
        a: printed.clone().map(|x| x.to_string()),
        actual: actual.clone().map(|x| x.to_string()),
        agrees: [0, 1, 2, 3].map(|i| printed[i] == actual[i]),
    }
}

/// Minimal-polynomial criterion for being a product of subfield integers,
/// cross-checked against the coordinate-level factor search. Total
/// positivity is reported rather than required.
pub fn quartic_criterion(alpha: &FieldElement) -> Result<CriterionReport, DecompError> {
    check_integral(alpha)?;
    let field = alpha.field();
    let mp = alpha.min_poly();
    let totally_positive = alpha.is_totally_positive();
    if mp.degree() < 4 {
        return Ok(CriterionReport {
            alpha: alpha.clone(),
            min_poly: mp,
            totally_positive,
            degenerate: true,
            matches: vec![],
            cross_checks: vec![],
        });
    }
    let mut matches = Vec::new();
    for (p, qr, _) in PAIRINGS {
        for (x, y) in [(p, qr), (qr, p)] {
            let (dx, dy) = (field.radicand(x), field.radicand(y));
            for kappa in criterion_search(&mp, dx, dy) {
                let exceeds = &kappa[2] * &kappa[2] > q(dy);
                let printed = printed_relations(&mp, &kappa, dx, dy);
                matches.push(CriterionMatch {
                    pairing: [x, y],
                    kappa,
                    kappa3_exceeds: exceeds,
                    printed,
                });
            }
        }
    }
    let factors = product_factorizations(alpha)?;
    let c = real_coords(alpha);
    let mut cross_checks = Vec::new();
    for (p, qr, t) in PAIRINGS {
        let lambda = field.cross_factor(p, qr);
        // criterion matches normalized to the (p, qr) order
        let found: Vec<[Q; 3]> = matches
            .iter()
            .filter_map(|mt| {
                let [k1, k2, k3] = mt.kappa.clone();
                if mt.pairing == [p, qr] {
                    Some([k1, k2, k3])
                } else if mt.pairing == [qr, p] {
                    Some([k1, k3, k2])
                } else {
                    None
                }
            })
            .collect();
        let fact = factors.iter().find(|d| d.pairing == [p, qr]);
        let own = kappa_from_coords(&c, p, qr, t, lambda).filter(|_| fact.is_some());
        let criterion = found.first().cloned();
        if criterion.is_none() && fact.is_none() {
            continue;
        }
        let verdict = match (&criterion, fact) {
            (Some(k), Some(d)) if Some(k) == own.as_ref() => {
                if d.integral {
                    CrossVerdict::Agree
                } else {
                    CrossVerdict::IntegralityGap
                }
            }
            (Some(k), _) => {
                // conjugates flip the signs of the surd coordinates
                let conj = crate::field::EmbeddingSigns::ALL.iter().any(|s| {
                    let ce = alpha.conjugate(*s);
                    kappa_from_coords(&real_coords(&ce), p, qr, t, lambda).as_ref() == Some(k)
                });
                if conj {
                    CrossVerdict::ConjugateMatch
                } else {
                    CrossVerdict::Unexplained
                }
            }
            (None, Some(d)) => {
                let k = own.clone().expect("factorization has kappa");
                let positive = k.iter().all(|x| x.is_positive());
                let half = is_half_integer(&k[0])
                    && is_half_integer(&(&k[0] * &k[1]))
                    && is_half_integer(&(&k[0] * &k[2]));
                let dx = q(field.radicand(p));
                let dy = q(field.radicand(qr));
                let exceeds = &k[1] * &k[1] > dx || &k[2] * &k[2] > dy;
                if positive && exceeds && !half && d.integral {
                    CrossVerdict::KappaNotHalfIntegral
                } else if !(positive && exceeds && half) {
                    // the criterion's positivity conditions exclude this product
                    CrossVerdict::Agree
                } else {
                    CrossVerdict::Unexplained
                }
            }
            (None, None) => unreachable!(),
        };
        cross_checks.push(CrossCheck {
            pairing: [p, qr],
            criterion,
            factorization: fact.map(|d| d.integral),
            verdict,
        });
    }
    Ok(CriterionReport {
        alpha: alpha.clone(),
        min_poly: mp,
        totally_positive,
        degenerate: false,
        matches,
        cross_checks,
    })
}

// ---------------------------------------------------------------------------
// squares of rational integers and subfield searches

/// `n = a^2 + b^2 + c^2 + d^2` with `a >= b >= c >= d >= 0`, taking the
/// largest possible `a`, then `b`, then `c`.
pub fn four_squares(n: u64) -> [u64; 4] {
    fn rest(n: u64, cap: u64, terms: u32) -> Option<Vec<u64>> {
        if terms == 0 {
            return (n == 0).then(Vec::new);
        }
        let top = n.sqrt().min(cap);
        for a in (0..=top).rev() {
            let left = n - a * a;
            // terms - 1 squares of size at most a^2 must cover the rest
            if left > a * a * u64::from(terms - 1) {
                break;
            }
            if let Some(mut tail) = rest(left, a, terms - 1) {
                tail.insert(0, a);
                return Some(tail);
            }
        }
        None
    }
    let v = rest(n, u64::MAX, 4).expect("Lagrange: every nonnegative integer is a sum of four squares");
    [v[0], v[1], v[2], v[3]]
}

/// Sum of at most `limit` squares of integers of the quadratic subfield
/// containing `beta`.
pub fn sos_in_subfield(beta: &FieldElement, limit: u32) -> Result<Option<SosCertificate>, DecompError> {
    let proj = beta
        .subfield_project()
        .ok_or_else(|| DecompError::NotIntegral(format!("{beta} does not lie in a quadratic subfield")))?;
    check_integral(beta)?;
    check_positive(beta)?;
    let cfg = SearchConfig::capped(limit).in_subfield(proj.tag);
    Ok(decompose_sos(beta, cfg)?.certificate().cloned())
}

// ---------------------------------------------------------------------------
// diagonal forms

/// The case bound on `s`, read from the ordered triple `(p, q, t)`.
pub fn theorem2_bound(field: &FieldParams) -> Q {
    let (p, qq, t) = field.ordered_triple();
    let v = match field.case_label() {
        CaseLabel::C1 => [q(p), q(qq), q(t)],
        CaseLabel::C2 | CaseLabel::C3 => [q(p), frac(qq, 2), q(t)],
        CaseLabel::C41 | CaseLabel::C42 => [frac(p, 2), frac(qq, 2), frac(t, 2)],
    };
    v.into_iter().max().expect("three entries")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPart {
    pub radical: Radical,
    /// `A/4 + (coordinate/4) sqrt D`, before scaling by `s`.
    #[serde(serialize_with = "ser_rational_element")]
    pub part: RationalElement,
    pub scaled: FieldElement,
    /// `A/4 > |coordinate/4| sqrt D`.
    pub dominates: bool,
    pub squares: Vec<FieldElement>,
}

/// `s * alpha = sum(plus^2) - sum(minus^2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalFormCert {
    pub alpha: FieldElement,
    pub s: u64,
    pub plus_squares: Vec<FieldElement>,
    pub minus_squares: Vec<u64>,
    /// Square removed from `s * alpha` before splitting, when the direct
    /// split has a part that is not a subfield sum of squares.
    pub correction: Option<FieldElement>,
    pub parts: Vec<SplitPart>,
    /// `2 * A / 4` of the split element, divided by `s`.
    #[serde(serialize_with = "ser_q")]
    pub rational: Q,
}

impl DiagonalFormCert {
    /// Recomputes both sides in rational arithmetic.
    pub fn verify(&self) -> bool {
        let field = self.alpha.field();
        let mut acc = RationalElement::zero(field);
        for x in &self.plus_squares {
            if x.field() != field || !x.is_integral() {
                return false;
            }
            let r = RationalElement::from(x);
            acc = &acc + &(&r * &r);
        }
        for &y in &self.minus_squares {
            let y = Q::from_integer(BigInt::from(y));
            acc = &acc - &RationalElement::from_rational(field, &y * &y);
        }
        let target = RationalElement::from(&self.alpha).scale(&Q::from_integer(self.s.into()));
        acc == target
    }
}

fn nonzero_squares(v: [u64; 4]) -> Vec<u64> {
    v.into_iter().filter(|&x| x != 0).collect()
}

struct Split {
    parts: Vec<SplitPart>,
    plus: Vec<FieldElement>,
    minus: Vec<u64>,
}

/// Splits `beta` into `A/4 + (coordinate/4) sqrt D` for each radical, each
/// written as at most five subfield squares, less the rational excess.
fn split(beta: &FieldElement, s: u64) -> Result<Split, DecompError> {
    let field = beta.field();
    let coords = *beta.coords();
    let fail = |part: String, value: String| DecompError::PartDecompositionFailed { part, value };
    // the three parts add up to beta + 2 * A/4
    if coords[0] < 0 || coords[0] % 2 != 0 {
        return Err(fail("rational".into(), format!("{}/2", coords[0])));
    }
    let mut pieces = Vec::new();
    for rad in Radical::ALL {
        let i = rad.coord_index();
        let mut pc = [0i64; 4];
        pc[0] = coords[0];
        pc[i] = coords[i];
        let scaled = FieldElement::new(field, pc);
        if !scaled.is_integral() || !scaled.is_totally_positive() {
            return Err(fail(format!("sqrt({})", field.radicand(rad)), scaled.to_string()));
        }
        pieces.push((rad, scaled));
    }
    let mut parts = Vec::new();
    let mut plus = Vec::new();
    for (rad, scaled) in pieces {
        let Some(cert) = sos_in_subfield(&scaled, 5)? else {
            return Err(fail(format!("sqrt({})", field.radicand(rad)), scaled.to_string()));
        };
        let part = RationalElement::from(&scaled).scale(&Q::new(BigInt::one(), BigInt::from(s)));
        plus.extend(cert.parts.iter().cloned());
        parts.push(SplitPart {
            radical: rad,
            dominates: scaled.is_totally_positive(),
            part,
            scaled,
            squares: cert.parts,
        });
    }
    Ok(Split {
        parts,
        plus,
        minus: nonzero_squares(four_squares((coords[0] / 2) as u64)),
    })
}

/// Candidates tried for the correcting square.
const CORRECTION_LIMIT: usize = 2000;

/// Writes `s * alpha` as a difference of a sum of squares of integers and a
/// sum of squares of rational integers, by splitting `s * alpha` into three
/// totally positive subfield parts. When a part is not a subfield sum of
/// squares, the smallest square `gamma^2` whose removal repairs the split is
/// taken out first.
pub fn diagonal_form(alpha: &FieldElement, s: u64) -> Result<DiagonalFormCert, DecompError> {
    check_integral(alpha)?;
    check_positive(alpha)?;
    let field = alpha.field();
    let coords = *alpha.coords();
    if coords[1..] == [0, 0, 0] {
        let n = (coords[0] / 4) as u64 * s;
        let plus = nonzero_squares(four_squares(n))
            .into_iter()
            .map(|x| FieldElement::from_int(field, x as i64))
            .collect();
        return Ok(DiagonalFormCert {
            alpha: alpha.clone(),
            s,
            plus_squares: plus,
            minus_squares: vec![],
            correction: None,
            parts: vec![],
            rational: Q::zero(),
        });
    }
    let target = alpha.scale(s as i64);
    let (correction, found) = match split(&target, s) {
        Ok(sp) => (None, sp),
        Err(first) => {
            let cands = crate::sos::enumerate_dominated_squares(&target)?;
            let mut hit = None;
            for gamma in cands.squares.iter().rev().take(CORRECTION_LIMIT) {
                let rest = &target - &gamma.square();
                if let Ok(sp) = split(&rest, s) {
                    hit = Some((Some(gamma.canonical_sign()), sp));
                    break;
                }
            }
            hit.ok_or(first)?
        }
    };
    let split_coord = found
        .parts
        .first()
        .map(|p| p.scaled.coords()[0])
        .unwrap_or_default();
    let mut plus = found.plus;
    plus.extend(correction.iter().cloned());
    plus.sort_by(|a, b| a.canonical_cmp(b));
    let cert = DiagonalFormCert {
        alpha: alpha.clone(),
        s,
        plus_squares: plus,
        minus_squares: found.minus,
        correction,
        parts: found.parts,
        rational: Q::new(BigInt::from(split_coord), BigInt::from(2 * s as i64)),
    };
    debug_assert!(cert.verify());
    Ok(cert)
}

// ---------------------------------------------------------------------------
// six squares

/// Minimal ring interface for evaluating the printed bilinear forms.
pub trait FormRing: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl FormRing for i128 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl FormRing for FieldElement {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

/// The six bilinear forms of the printed composition.
pub fn printed_forms<T: FormRing>(x: &[T; 5], y: &[T; 5]) -> [T; 6] {
    let p = |i: usize, j: usize| x[i].mul(&y[j]);
    let t1 = p(0, 0).add(&p(1, 1)).add(&p(2, 2)).add(&p(3, 3)).add(&p(4, 4));
    let t2 = p(0, 1).sub(&p(1, 0)).add(&p(2, 4)).sub(&p(4, 2));
    let t3 = p(0, 2).sub(&p(2, 0)).add(&p(1, 3)).sub(&p(3, 1));
    let t4 = p(0, 3).sub(&p(3, 0)).add(&p(1, 4)).sub(&p(4, 1));
    let t5 = p(0, 4).sub(&p(4, 1)).add(&p(2, 3)).sub(&p(3, 2));
    let t6 = p(2, 1).sub(&p(1, 2)).add(&p(3, 4)).sub(&p(4, 3));
    [t1, t2, t3, t4, t5, t6]
}

/// Integer polynomial in `x1..x5, y1..y5`, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly(BTreeMap<[u8; 10], i64>);

impl MultiPoly {
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; 10];
        e[i] = 1;
        MultiPoly(BTreeMap::from([(e, 1)]))
    }

    fn insert(&mut self, e: [u8; 10], c: i64) {
        let v = self.0.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<[u8; 10], i64> {
        &self.0
    }

    pub fn eval(&self, x: &[i64; 5], y: &[i64; 5]) -> i128 {
        let vals: Vec<i128> = x.iter().chain(y.iter()).map(|&v| v as i128).collect();
        self.0
            .iter()
            .map(|(e, &c)| {
                e.iter()
                    .zip(&vals)
                    .fold(c as i128, |acc, (&k, &v)| acc * v.pow(k as u32))
            })
            .sum()
    }
}

impl FormRing for MultiPoly {
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &o.0 {
            out.insert(*e, c);
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &o.0 {
            out.insert(*e, -c);
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = MultiPoly::default();
        for (e1, &c1) in &self.0 {
            for (e2, &c2) in &o.0 {
                let mut e = *e1;
                for k in 0..10 {
                    e[k] += e2[k];
                }
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let names = ["x1", "x2", "x3", "x4", "x5", "y1", "y2", "y3", "y4", "y5"];
        for (n, (e, c)) in self.0.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if n > 0 { "+" } else { "" };
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}")?;
            if n > 0 {
                write!(f, " ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
                .collect();
            if c.abs() != 1 || mono.is_empty() {
                write!(f, "{}", c.abs())?;
                if !mono.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", mono.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCounterexample {
    pub x: [i64; 5],
    pub y: [i64; 5],
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub is_identity: bool,
    /// `sum(T_k^2) - (sum x_i^2)(sum y_i^2)`.
    pub difference: String,
    pub difference_terms: usize,
    /// Smallest left side over `{0,1}`-vectors, ties broken lexicographically.
    pub minimal_counterexample: Option<IdentityCounterexample>,
}

pub fn evaluate_identity(x: &[i64; 5], y: &[i64; 5]) -> IdentityCounterexample {
    let xs = x.map(|v| v as i128);
    let ys = y.map(|v| v as i128);
    let lhs: i128 = xs.iter().map(|v| v * v).sum::<i128>() * ys.iter().map(|v| v * v).sum::<i128>();
    let rhs: i128 = printed_forms(&xs, &ys).iter().map(|t| t * t).sum();
    IdentityCounterexample {
        x: *x,
        y: *y,
        lhs: lhs as i64,
        rhs: rhs as i64,
    }
}

pub fn identity_difference() -> MultiPoly {
    let x: [MultiPoly; 5] = std::array::from_fn(MultiPoly::var);
    let y: [MultiPoly; 5] = std::array::from_fn(|i| MultiPoly::var(i + 5));
    let sum_sq = |v: &[MultiPoly; 5]| {
        v.iter()
            .fold(MultiPoly::default(), |acc, t| acc.add(&t.mul(t)))
    };
    let lhs = sum_sq(&x).mul(&sum_sq(&y));
    let rhs = printed_forms(&x, &y)
        .iter()
        .fold(MultiPoly::default(), |acc, t| acc.add(&t.mul(t)));
    rhs.sub(&lhs)
}

/// Expands the printed six-square composition symbolically.
pub fn identity_check() -> IdentityReport {
    let diff = identity_difference();
    let mut best: Option<IdentityCounterexample> = None;
    if !diff.is_zero() {
        for bits in 0u32..1 << 10 {
            let v: [i64; 10] = std::array::from_fn(|i| ((bits >> (9 - i)) & 1) as i64);
            let x = [v[0], v[1], v[2], v[3], v[4]];
            let y = [v[5], v[6], v[7], v[8], v[9]];
            let e = evaluate_identity(&x, &y);
            if e.lhs != e.rhs && best.as_ref().is_none_or(|b| e.lhs < b.lhs) {
                best = Some(e);
            }
        }
    }
    IdentityReport {
        is_identity: diff.is_zero(),
        difference: diff.to_string(),
        difference_terms: diff.terms().len(),
        minimal_counterexample: best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SixRoute {
    /// The printed forms sum exactly to the product.
    Identity,
    /// The forms fail; the squares come from a search.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SixSquareCert<T> {
    pub x_parts: [T; 5],
    pub y_parts: [T; 5],
    pub product: T,
    pub six: Vec<T>,
    pub route: SixRoute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SixSquareOutcome<T> {
    Certificate(SixSquareCert<T>),
    /// No six-square representation of the product was found.
    Failed { product: T, forms_sum: T },
}

impl SixSquareCert<i64> {
    pub fn verify(&self) -> bool {
        let sx: i128 = self.x_parts.iter().map(|&v| (v as i128).pow(2)).sum();
        let sy: i128 = self.y_parts.iter().map(|&v| (v as i128).pow(2)).sum();
        let s: i128 = self.six.iter().map(|&v| (v as i128).pow(2)).sum();
        self.six.len() <= 6 && sx * sy == self.product as i128 && s == self.product as i128
    }
}

impl SixSquareCert<FieldElement> {
    pub fn verify(&self) -> bool {
        let sq = |v: &[FieldElement]| {
            v.iter().fold(RationalElement::zero(self.product.field()), |acc, t| {
                let r = RationalElement::from(t);
                &acc + &(&r * &r)
            })
        };
        let prod = RationalElement::from(&self.product);
        self.six.len() <= 6
            && self.six.iter().all(FieldElement::is_integral)
            && &sq(&self.x_parts) * &sq(&self.y_parts) == prod
            && sq(&self.six) == prod
    }
}

/// Composes two five-square integers; falls back to [`four_squares`] when the
/// printed forms do not add up.
pub fn six_square_compose_int(x: [i64; 5], y: [i64; 5]) -> SixSquareCert<i64> {
    let xs = x.map(|v| v as i128);
    let ys = y.map(|v| v as i128);
    let product: i128 = xs.iter().map(|v| v * v).sum::<i128>() * ys.iter().map(|v| v * v).sum::<i128>();
    let forms = printed_forms(&xs, &ys);
    let total: i128 = forms.iter().map(|t| t * t).sum();
    let (six, route) = if total == product {
        (
            forms.iter().filter(|t| **t != 0).map(|t| t.abs() as i64).collect(),
            SixRoute::Identity,
        )
    } else {
        let v = four_squares(product as u64);
        (
            v.into_iter().filter(|&t| t != 0).map(|t| t as i64).collect(),
            SixRoute::Search,
        )
    };
    SixSquareCert {
        x_parts: x,
        y_parts: y,
        product: product as i64,
        six,
        route,
    }
}

/// Composes two sums of five squares of integers of one field.
pub fn six_square_compose(
    x: &[FieldElement; 5],
    y: &[FieldElement; 5],
) -> Result<SixSquareOutcome<FieldElement>, DecompError> {
    let field = x[0].field().clone();
    if x.iter().chain(y.iter()).any(|e| *e.field() != field) {
        return Err(DecompError::MixedFields);
    }
    for e in x.iter().chain(y.iter()) {
        check_integral(e)?;
    }
    let sum_sq = |v: &[FieldElement; 5]| {
        v.iter()
            .fold(FieldElement::zero(&field), |acc, t| &acc + &t.square())
    };
    let product = &sum_sq(x) * &sum_sq(y);
    let forms = printed_forms(x, y);
    let forms_sum = forms
        .iter()
        .fold(FieldElement::zero(&field), |acc, t| &acc + &t.square());
    if forms_sum == product {
        let mut six: Vec<FieldElement> = forms
            .iter()
            .filter(|t| !t.is_zero())
            .map(FieldElement::canonical_sign)
            .collect();
        six.sort_by(|a, b| a.canonical_cmp(b));
        return Ok(SixSquareOutcome::Certificate(SixSquareCert {
            x_parts: x.clone(),
            y_parts: y.clone(),
            product,
            six,
            route: SixRoute::Identity,
        }));
    }
    let six = if product.subfield_project().is_some_and(|p| p.tag == SubfieldTag::Rational) {
        let n = (product.coords()[0] / 4) as u64;
        Some(
            nonzero_squares(four_squares(n))
                .into_iter()
                .map(|v| FieldElement::from_int(&field, v as i64))
                .collect(),
        )
    } else {
        decompose_sos(&product, SearchConfig::capped(6))?
            .certificate()
            .map(|c| c.parts.clone())
    };
    Ok(match six {
        Some(six) => SixSquareOutcome::Certificate(SixSquareCert {
            x_parts: x.clone(),
            y_parts: y.clone(),
            product,
            six,
            route: SixRoute::Search,
        }),
        None => SixSquareOutcome::Failed { product, forms_sum },
    })
}

/// Pads a certificate's parts with zeros to five entries.
pub fn five_parts(cert: &SosCertificate) -> Option<[FieldElement; 5]> {
    if cert.parts.len() > 5 {
        return None;
    }
    let field = cert.target.field();
    Some(std::array::from_fn(|i| {
        cert.parts.get(i).cloned().unwrap_or_else(|| FieldElement::zero(field))
    }))
}
