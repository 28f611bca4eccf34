//! Real biquadratic fields `K = Q(sqrt(m), sqrt(n))`.
//!
//! Elements are stored as integer coordinates `(a, b, c, d)` meaning
//! `(a + b*sqrt(m) + c*sqrt(n) + d*sqrt(r)) / 4`, where `r = m*n / gcd(m, n)^2`.
//! The denominator is fixed, so every algebraic integer of every basis case
//! has integer coordinates and the five integral bases only differ in a
//! congruence predicate (see [`FieldParams::is_integral_coords`]).

mod element;
mod poly;
mod rational;
mod sign;

pub use element::{FieldElement, SubfieldProjection};
pub use poly::RationalQuartic;
pub use rational::RationalElement;
pub use sign::{
    set_start_precision, start_precision, Enclosure, EmbeddingSigns, Sign, DEFAULT_START_BITS,
};

use std::fmt;
use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::FieldError;

/// Largest accepted radicand. Keeps every coordinate product inside `i128`.
pub const MAX_RADICAND: i64 = 1 << 31;

/// One of the three square roots spanning `K` over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Radical {
    M,
    N,
    R,
}

impl Radical {
    pub const ALL: [Radical; 3] = [Radical::M, Radical::N, Radical::R];

    /// Position of the radical in the coordinate vector `(a, b, c, d)`.
    pub fn coord_index(self) -> usize {
        match self {
            Radical::M => 1,
            Radical::N => 2,
            Radical::R => 3,
        }
    }
}

/// The residue case of the ordered triple `(p, q, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    /// p = 2, q = 3 (mod 4)
    C1,
    /// p = 2, q = 1 (mod 4)
    C2,
    /// p = 3, q = 1 (mod 4)
    C3,
    /// p = q = 1 (mod 4), p/g = q/g = 1 (mod 4)
    C41,
    /// p = q = 1 (mod 4), p/g = q/g = 3 (mod 4)
    C42,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisId {
    B1,
    B2,
    B3,
    B41,
    B42,
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Quadratic subfields of `K`, plus the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SubfieldTag {
    Rational,
    SqrtM,
    SqrtN,
    SqrtR,
}

impl SubfieldTag {
    pub fn radical(self) -> Option<Radical> {
        match self {
            SubfieldTag::Rational => None,
            SubfieldTag::SqrtM => Some(Radical::M),
            SubfieldTag::SqrtN => Some(Radical::N),
            SubfieldTag::SqrtR => Some(Radical::R),
        }
    }

    pub fn of(radical: Radical) -> Self {
        match radical {
            Radical::M => SubfieldTag::SqrtM,
            Radical::N => SubfieldTag::SqrtN,
            Radical::R => SubfieldTag::SqrtR,
        }
    }
}

/// Data describing `K = Q(sqrt(m), sqrt(n))`.
#[derive(Debug)]
pub struct FieldParams {
    m: i64,
    n: i64,
    g: i64,
    m1: i64,
    n1: i64,
    r: i64,
    case_label: CaseLabel,
    basis_id: BasisId,
    roles: [Radical; 3],
    sqrt_f64: [f64; 3],
    base_roots: OnceLock<[BigInt; 3]>,
}

/// Cheaply clonable handle to a field. Two handles are equal when they
/// describe the same `(m, n)`.
#[derive(Clone)]
pub struct Field(Arc<FieldParams>);

impl Deref for Field {
    type Target = FieldParams;

    fn deref(&self) -> &FieldParams {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.m == other.m && self.n == other.n)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}), sqrt({}))", self.m, self.n)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Field", 6)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("g", &self.g)?;
        s.serialize_field("case", &self.case_label)?;
        s.serialize_field("basis", &self.basis_id)?;
        s.end()
    }
}

pub fn is_square_free(x: i64) -> bool {
    if x < 1 {
        return false;
    }
    let mut x = x;
    let mut p = 2i64;
    while p * p <= x {
        if x % p == 0 {
            x /= p;
            if x % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn check_radicand(name: &'static str, value: i64) -> Result<(), FieldError> {
    if value <= 1 || value > MAX_RADICAND {
        return Err(FieldError::OutOfRange {
            name,
            value,
            max: MAX_RADICAND,
        });
    }
    if !is_square_free(value) {
        return Err(FieldError::NotSquareFree { name, value });
    }
    Ok(())
}

/// Role assignments tried in order. The first that lands in one of the
/// residue cases wins: keep `(m, n)`, then swap them, then exchange with `r`.
const ROLE_ORDER: [[Radical; 3]; 6] = [
    [Radical::M, Radical::N, Radical::R],
    [Radical::N, Radical::M, Radical::R],
    [Radical::R, Radical::N, Radical::M],
    [Radical::M, Radical::R, Radical::N],
    [Radical::N, Radical::R, Radical::M],
    [Radical::R, Radical::M, Radical::N],
];

fn classify(p: i64, q: i64) -> Option<CaseLabel> {
    match (p % 4, q % 4) {
        (2, 3) => Some(CaseLabel::C1),
        (2, 1) => Some(CaseLabel::C2),
        (3, 1) => Some(CaseLabel::C3),
        (1, 1) => {
            let h = p.gcd(&q);
            match ((p / h) % 4, (q / h) % 4) {
                (1, 1) => Some(CaseLabel::C41),
                (3, 3) => Some(CaseLabel::C42),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Builds `Q(sqrt(m), sqrt(n))`, classifying it into one of the residue cases.
pub fn make_field(m: i64, n: i64) -> Result<Field, FieldError> {
    check_radicand("m", m)?;
    check_radicand("n", n)?;
    if m == n {
        return Err(FieldError::NotDistinct(m));
    }
    let g = m.gcd(&n);
    let m1 = m / g;
    let n1 = n / g;
    let r = m1 * n1;
    debug_assert!(r != m && r != n && is_square_free(r));

    let value = |rad: Radical| match rad {
        Radical::M => m,
        Radical::N => n,
        Radical::R => r,
    };
    let (roles, case_label) = ROLE_ORDER
        .iter()
        .find_map(|roles| classify(value(roles[0]), value(roles[1])).map(|c| (*roles, c)))
        .expect("every real biquadratic field falls into one of the residue cases");
    let basis_id = match case_label {
        CaseLabel::C1 => BasisId::B1,
        CaseLabel::C2 => BasisId::B2,
        CaseLabel::C3 => BasisId::B3,
        CaseLabel::C41 => BasisId::B41,
        CaseLabel::C42 => BasisId::B42,
    };

    Ok(Field(Arc::new(FieldParams {
        m,
        n,
        g,
        m1,
        n1,
        r,
        case_label,
        basis_id,
        roles,
        sqrt_f64: [(m as f64).sqrt(), (n as f64).sqrt(), (r as f64).sqrt()],
        base_roots: OnceLock::new(),
    })))
}

impl FieldParams {
    pub fn m(&self) -> i64 {
        self.m
    }
    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn g(&self) -> i64 {
        self.g
    }
    pub fn m1(&self) -> i64 {
        self.m1
    }
    pub fn n1(&self) -> i64 {
        self.n1
    }
    pub fn case_label(&self) -> CaseLabel {
        self.case_label
    }
    pub fn basis_id(&self) -> BasisId {
        self.basis_id
    }

    /// The radicals playing the roles `(p, q, t)` of the residue case.
    pub fn roles(&self) -> [Radical; 3] {
        self.roles
    }

    pub fn ordered_triple(&self) -> (i64, i64, i64) {
        let [p, q, t] = self.roles;
        (self.radicand(p), self.radicand(q), self.radicand(t))
    }

    pub fn radicand(&self, rad: Radical) -> i64 {
        match rad {
            Radical::M => self.m,
            Radical::N => self.n,
            Radical::R => self.r,
        }
    }

    /// `lambda` with `sqrt(x) * sqrt(y) = lambda * sqrt(z)` for distinct radicals.
    pub fn cross_factor(&self, x: Radical, y: Radical) -> i64 {
        use Radical::*;
        match (x, y) {
            (M, N) | (N, M) => self.g,
            (M, R) | (R, M) => self.m1,
            (N, R) | (R, N) => self.n1,
            _ => panic!("cross_factor needs two distinct radicals"),
        }
    }

    pub(crate) fn sqrt_f64(&self) -> &[f64; 3] {
        &self.sqrt_f64
    }

    pub(crate) fn base_roots(&self, bits: u32) -> &[BigInt; 3] {
        debug_assert_eq!(bits, DEFAULT_START_BITS);
        self.base_roots
            .get_or_init(|| sign::fixed_roots([self.m, self.n, self.r], bits))
    }

    /// Integrality of `(x0 + x1*sqrt(m) + x2*sqrt(n) + x3*sqrt(r)) / 4`.
    ///
    /// With coordinates permuted into role order `(x0, xp, xq, xt)` the lattice
    /// spanned by each basis, scaled by 4, is:
    ///
    /// * B1 `{1, √p, √q, (√p+√t)/2}`: `x0 = xq = 0 (mod 4)`, `xt` even, `xp = xt (mod 4)`.
    /// * B2, B3 `{1, √p, (1+√q)/2, (√p+√t)/2}`: all even, `x0 = xq` and `xp = xt (mod 4)`.
    /// * B41 `{1, (1+√p)/2, (1+√q)/2, (1+√p+√q+√t)/4}`: equal parities,
    ///   `x0 + xt = xp + xq (mod 4)`.
    /// * B42 `{1, (1+√p)/2, (1+√q)/2, (1-√p+√q+√t)/4}`: equal parities,
    ///   `x0 = xp + xq + xt (mod 4)`.
    pub fn is_integral_coords(&self, coords: &[i64; 4]) -> bool {
        let x0 = coords[0];
        let [p, q, t] = self.roles.map(|rad| coords[rad.coord_index()]);
        let m4 = |v: i64| v.rem_euclid(4);
        let m2 = |v: i64| v.rem_euclid(2);
        match self.basis_id {
            BasisId::B1 => m4(x0) == 0 && m4(q) == 0 && m2(t) == 0 && m4(p - t) == 0,
            BasisId::B2 | BasisId::B3 => {
                [x0, p, q, t].iter().all(|&v| m2(v) == 0) && m4(x0 - q) == 0 && m4(p - t) == 0
            }
            BasisId::B41 => {
                m2(x0 - p) == 0 && m2(p - q) == 0 && m2(q - t) == 0 && m4(x0 + t - p - q) == 0
            }
            BasisId::B42 => {
                m2(x0 - p) == 0 && m2(p - q) == 0 && m2(q - t) == 0 && m4(x0 - p - q - t) == 0
            }
        }
    }

    /// The integral basis, as coordinate vectors over denominator 4 in
    /// `(1, √m, √n, √r)` order.
    pub fn integral_basis(&self) -> [[i64; 4]; 4] {
        let [p, q, t] = self.roles.map(Radical::coord_index);
        let mut basis = [[0i64; 4]; 4];
        basis[0][0] = 4;
        match self.basis_id {
            BasisId::B1 => {
                basis[1][p] = 4;
                basis[2][q] = 4;
                basis[3][p] = 2;
                basis[3][t] = 2;
            }
            BasisId::B2 | BasisId::B3 => {
                basis[1][p] = 4;
                basis[2][0] = 2;
                basis[2][q] = 2;
                basis[3][p] = 2;
                basis[3][t] = 2;
            }
            BasisId::B41 | BasisId::B42 => {
                basis[1][0] = 2;
                basis[1][p] = 2;
                basis[2][0] = 2;
                basis[2][q] = 2;
                basis[3] = [1, 1, 1, 1];
                basis[3][p] = if self.basis_id == BasisId::B42 { -1 } else { 1 };
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_fields_classify() {
        let k = make_field(66, 31).unwrap();
        assert_eq!(k.case_label(), CaseLabel::C1);
        assert_eq!(k.r(), 2046);
        assert_eq!(k.basis_id(), BasisId::B1);
        assert_eq!(k.ordered_triple(), (66, 31, 2046));

        let k = make_field(71, 37).unwrap();
        assert_eq!(k.case_label(), CaseLabel::C3);
        assert_eq!(k.r(), 2627);

        let k = make_field(85, 89).unwrap();
        assert_eq!(k.case_label(), CaseLabel::C41);
        assert_eq!(k.r(), 7565);
        assert_eq!(k.basis_id(), BasisId::B41);
    }

    #[test]
    fn role_interchange_with_common_factor() {
        let k = make_field(6, 10).unwrap();
        assert_eq!((k.g(), k.m1(), k.n1(), k.r()), (2, 3, 5, 15));
        assert_eq!(k.case_label(), CaseLabel::C1);
        assert_eq!(k.ordered_triple(), (6, 15, 10));
    }

    #[test]
    fn swapped_arguments_still_classify() {
        let k = make_field(31, 66).unwrap();
        assert_eq!(k.case_label(), CaseLabel::C1);
        assert_eq!(k.ordered_triple(), (66, 31, 2046));
    }

    #[test]
    fn c42_field() {
        let k = make_field(21, 33).unwrap();
        assert_eq!(k.case_label(), CaseLabel::C42);
        assert_eq!(k.r(), 77);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            make_field(12, 5).unwrap_err(),
            FieldError::NotSquareFree { name: "m", value: 12 }
        );
        assert_eq!(
            make_field(5, 18).unwrap_err(),
            FieldError::NotSquareFree { name: "n", value: 18 }
        );
        assert_eq!(make_field(7, 7).unwrap_err(), FieldError::NotDistinct(7));
        assert!(matches!(
            make_field(1, 7),
            Err(FieldError::OutOfRange { name: "m", .. })
        ));
        assert!(matches!(
            make_field(7, -3),
            Err(FieldError::OutOfRange { name: "n", .. })
        ));
    }

    #[test]
    fn every_small_field_classifies() {
        let sf: Vec<i64> = (2..60).filter(|&x| is_square_free(x)).collect();
        for &m in &sf {
            for &n in &sf {
                if m != n {
                    let k = make_field(m, n).unwrap();
                    let (p, q, t) = k.ordered_triple();
                    assert_eq!(p % 4, t % 4, "p = t (mod 4) in Q(√{m},√{n})");
                    let mut triple = [p, q, t];
                    triple.sort();
                    let mut expect = [m, n, k.r()];
                    expect.sort();
                    assert_eq!(triple, expect);
                }
            }
        }
    }

    #[test]
    fn basis_vectors_are_integral() {
        for (m, n) in [(66, 31), (2, 5), (71, 37), (85, 89), (21, 33), (6, 10)] {
            let k = make_field(m, n).unwrap();
            for v in k.integral_basis() {
                assert!(k.is_integral_coords(&v), "{v:?} in {k}");
            }
            assert!(!k.is_integral_coords(&[2, 0, 0, 0]));
        }
    }
}
