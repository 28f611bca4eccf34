use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::poly::{self, RationalQuartic};
use super::rational::RationalElement;
use super::sign::{self, Enclosure, EmbeddingSigns, Sign};
use super::{Field, FieldParams, Radical, SubfieldTag};
use crate::error::FieldError;

/// `(a + b*sqrt(m) + c*sqrt(n) + d*sqrt(r)) / 4` in a fixed field.
///
/// Coordinates are `i64`; arithmetic is carried out in `i128` and panics if a
/// result no longer fits. Use the `checked_*` methods to observe that instead.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coords: [i64; 4],
}

/// Result of [`FieldElement::subfield_project`]: the element written as
/// `x + y*sqrt(D)` (with `y = 0` for rationals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldProjection {
    pub tag: SubfieldTag,
    pub rational: BigRational,
    pub surd: BigRational,
}

pub(crate) fn narrow(x: i128) -> Option<i64> {
    i64::try_from(x).ok()
}

fn overflow() -> ! {
    panic!("field element coordinate overflow")
}

/// Product of raw coordinate vectors, scaled by 16.
pub(crate) fn mul_raw(field: &FieldParams, x: &[i64; 4], y: &[i64; 4]) -> [i128; 4] {
    let [a1, b1, c1, d1] = x.map(i128::from);
    let [a2, b2, c2, d2] = y.map(i128::from);
    let (m, n, r) = (field.m() as i128, field.n() as i128, field.r() as i128);
    let (g, m1, n1) = (field.g() as i128, field.m1() as i128, field.n1() as i128);
    [
        a1 * a2 + m * b1 * b2 + n * c1 * c2 + r * d1 * d2,
        a1 * b2 + b1 * a2 + n1 * (c1 * d2 + d1 * c2),
        a1 * c2 + c1 * a2 + m1 * (b1 * d2 + d1 * b2),
        a1 * d2 + d1 * a2 + g * (b1 * c2 + c1 * b2),
    ]
}

impl FieldElement {
    pub fn new(field: &Field, coords: [i64; 4]) -> Self {
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_int(field: &Field, value: i64) -> Self {
        let a = value.checked_mul(4).unwrap_or_else(|| overflow());
        Self::new(field, [a, 0, 0, 0])
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, [0; 4])
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    /// `sqrt(D)` for a radical `D` of the field.
    pub fn sqrt(field: &Field, radical: Radical) -> Self {
        let mut coords = [0; 4];
        coords[radical.coord_index()] = 4;
        Self::new(field, coords)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[i64; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }

    fn check_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(
                self.field.m(),
                self.field.n(),
                other.field.m(),
                other.field.n(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let mut coords = [0; 4];
        for i in 0..4 {
            coords[i] = self.coords[i]
                .checked_add(other.coords[i])
                .unwrap_or_else(|| overflow());
        }
        Ok(Self::new(&self.field, coords))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&-other)
    }

    /// Exact product. Fails with [`FieldError::Denominator`] when the product of
    /// two non-integral elements needs a denominator larger than 4; the product
    /// of two algebraic integers never does.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let raw = mul_raw(&self.field, &self.coords, &other.coords);
        if raw.iter().any(|v| v % 4 != 0) {
            debug_assert!(!(self.is_integral() && other.is_integral()));
            return Err(FieldError::Denominator);
        }
        let coords = raw.map(|v| narrow(v / 4).unwrap_or_else(|| overflow()));
        Ok(Self::new(&self.field, coords))
    }

    pub fn scale(&self, k: i64) -> Self {
        let coords = self
            .coords
            .map(|c| c.checked_mul(k).unwrap_or_else(|| overflow()));
        Self::new(&self.field, coords)
    }

    pub fn square(&self) -> Self {
        self.checked_mul(self)
            .expect("square of an element with denominator 4")
    }

    /// The conjugate `sigma_s(self)`, as an element of the same field.
    pub fn conjugate(&self, s: EmbeddingSigns) -> Self {
        let mult = s.multipliers();
        let mut coords = self.coords;
        for i in 0..4 {
            coords[i] *= mult[i];
        }
        Self::new(&self.field, coords)
    }

    pub fn is_integral(&self) -> bool {
        self.field.is_integral_coords(&self.coords)
    }

    /// Exact sign of `sigma_s(self)`.
    pub fn sign_at_embedding(&self, s: EmbeddingSigns) -> Sign {
        sign::sign_of_coords(&self.field, &self.coords, s)
    }

    pub fn is_totally_positive(&self) -> bool {
        EmbeddingSigns::ALL
            .iter()
            .all(|&s| self.sign_at_embedding(s) == Sign::Positive)
    }

    pub fn is_totally_nonnegative(&self) -> bool {
        EmbeddingSigns::ALL
            .iter()
            .all(|&s| self.sign_at_embedding(s) != Sign::Negative)
    }

    /// Rigorous enclosure of `sigma_s(self)` with `bits` fractional bits.
    pub fn enclosure(&self, s: EmbeddingSigns, bits: u32) -> Enclosure {
        let mut enc = sign::enclose(&self.field, &self.coords, s, bits);
        enc.bits += 2;
        enc
    }

    /// Double-precision approximation of `sigma_s(self)`.
    pub fn approx(&self, s: EmbeddingSigns) -> f64 {
        let roots = self.field.sqrt_f64();
        let mult = s.multipliers();
        let mut v = self.coords[0] as f64;
        for i in 1..4 {
            v += (self.coords[i] * mult[i]) as f64 * roots[i - 1];
        }
        v / 4.0
    }

    pub fn approx_embeddings(&self) -> [f64; 4] {
        EmbeddingSigns::ALL.map(|s| self.approx(s))
    }

    /// Trace to the rationals. The surd parts of the four conjugates cancel,
    /// leaving `4 * (a / 4) = a`.
    pub fn trace(&self) -> i64 {
        self.coords[0]
    }

    pub fn norm(&self) -> BigRational {
        RationalElement::from(self).norm()
    }

    pub fn trace_and_norm(&self) -> (BigRational, BigRational) {
        (BigRational::from_integer(self.trace().into()), self.norm())
    }

    pub fn min_poly(&self) -> RationalQuartic {
        poly::min_poly(&RationalElement::from(self))
    }

    /// Identifies the smallest subfield containing the element, unless that
    /// is `K` itself.
    pub fn subfield_project(&self) -> Option<SubfieldProjection> {
        let [a, b, c, d] = self.coords;
        let quarter = |v: i64| BigRational::new(BigInt::from(v), BigInt::from(4));
        let (tag, surd) = match (b != 0, c != 0, d != 0) {
            (false, false, false) => (SubfieldTag::Rational, 0),
            (true, false, false) => (SubfieldTag::SqrtM, b),
            (false, true, false) => (SubfieldTag::SqrtN, c),
            (false, false, true) => (SubfieldTag::SqrtR, d),
            _ => return None,
        };
        Some(SubfieldProjection {
            tag,
            rational: quarter(a),
            surd: quarter(surd),
        })
    }

    /// Parses the canonical form `(a + b*sqrt(m) + c*sqrt(n) + d*sqrt(r))/4`
    /// and reduced variants: any sum of integer terms, `k*sqrt(D)` terms and
    /// parenthesised groups divided by 1, 2 or 4.
    pub fn parse(field: &Field, text: &str) -> Result<Self, FieldError> {
        let q = crate::field::rational::parse_rational_element(field, text)?;
        q.to_field_element().ok_or_else(|| {
            FieldError::Parse(format!("`{text}` needs a denominator other than 1, 2 or 4"))
        })
    }

    /// Ordering on coordinate vectors, used to make outputs deterministic.
    /// Text with reduced fractions and zero terms dropped, e.g. `3 + sqrt(5)`.
    pub fn reduced_string(&self) -> String {
        RationalElement::from(self).to_string()
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }

    /// Negates the element if its first nonzero coordinate is negative.
    pub fn canonical_sign(&self) -> Self {
        match self.coords.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => -self,
            _ => self.clone(),
        }
    }

    pub fn to_rational_coords(&self) -> [BigRational; 4] {
        self.coords
            .map(|c| BigRational::new(BigInt::from(c), BigInt::from(4)))
    }

    pub(crate) fn from_coords_checked(field: &Field, coords: [BigInt; 4]) -> Option<Self> {
        let mut out = [0i64; 4];
        for i in 0..4 {
            out[i] = coords[i].to_i64()?;
        }
        Some(Self::new(field, out))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m().hash(state);
        self.field.n().hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

/// Canonical text form `(a + b*sqrt(m) + c*sqrt(n) + d*sqrt(r))/4`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coords;
        write!(
            f,
            "({} + {}*sqrt({}) + {}*sqrt({}) + {}*sqrt({}))/4",
            a,
            b,
            self.field.m(),
            c,
            self.field.n(),
            d,
            self.field.r()
        )
    }
}

/// Serialized as the four coordinate integers (denominator 4) in decimal strings.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strs = self.coords.map(|c| c.to_string());
        strs.serialize(serializer)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement::new(
            &self.field,
            self.coords
                .map(|c| c.checked_neg().unwrap_or_else(|| overflow())),
        )
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }

        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn el(field: &Field, text: &str) -> FieldElement {
        FieldElement::parse(field, text).unwrap()
    }

    #[test]
    fn integrality_examples() {
        let k = make_field(66, 31).unwrap();
        assert!(FieldElement::new(&k, [0, 2, 0, 2]).is_integral());
        assert!(!FieldElement::new(&k, [0, 2, 0, 0]).is_integral());
        let k = make_field(85, 89).unwrap();
        assert!(FieldElement::new(&k, [1, 1, 1, 1]).is_integral());
        let k = make_field(71, 37).unwrap();
        assert!(el(&k, "(129 + sqrt(37))/2 + sqrt(71) + sqrt(2627)").is_integral());
    }

    #[test]
    fn multiplication_examples() {
        let k = make_field(6, 10).unwrap();
        let x = el(&k, "1 + sqrt(6)");
        let y = el(&k, "1 + sqrt(10)");
        assert_eq!(&x * &y, el(&k, "1 + sqrt(6) + sqrt(10) + 2*sqrt(15)"));
        assert_eq!(&x * &FieldElement::one(&k), x);

        let k = make_field(2, 5).unwrap();
        let x = el(&k, "1 + sqrt(2)");
        assert_eq!(x.square(), el(&k, "3 + 2*sqrt(2)"));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let k1 = make_field(2, 5).unwrap();
        let k2 = make_field(2, 3).unwrap();
        let err = FieldElement::one(&k1)
            .checked_mul(&FieldElement::one(&k2))
            .unwrap_err();
        assert!(matches!(err, FieldError::FieldMismatch(2, 5, 2, 3)));
    }

    #[test]
    fn non_integral_product_may_leave_denominator_four() {
        let k = make_field(2, 3).unwrap();
        let quarter = FieldElement::new(&k, [1, 0, 0, 0]);
        assert_eq!(quarter.checked_mul(&quarter), Err(FieldError::Denominator));
        let half = FieldElement::new(&k, [2, 0, 0, 0]);
        assert_eq!(half.checked_mul(&half).unwrap().coords(), &[1, 0, 0, 0]);
    }

    #[test]
    fn signs_and_positivity() {
        let k = make_field(6, 10).unwrap();
        let e = el(&k, "1 + sqrt(6) + sqrt(10) - 2*sqrt(15)");
        assert_eq!(e.sign_at_embedding(EmbeddingSigns::ALL[0]), Sign::Negative);
        assert_eq!(
            FieldElement::zero(&k).sign_at_embedding(EmbeddingSigns::ALL[2]),
            Sign::Zero
        );

        let k = make_field(66, 31).unwrap();
        let row1 = el(&k, "61 + sqrt(31) + sqrt(66) + sqrt(2046)");
        let approx = row1.approx_embeddings();
        for (got, want) in approx.iter().zip([119.9, 13.2, 18.3, 92.5]) {
            assert!((got - want).abs() < 0.1, "{approx:?}");
        }
        assert!(row1.is_totally_positive());
        assert!(el(&k, "9 + sqrt(66)").is_totally_positive());
        assert!(!el(&k, "sqrt(66)").is_totally_positive());

        let k = make_field(85, 89).unwrap();
        assert!(el(&k, "(109 + sqrt(85) + sqrt(89) + sqrt(7565))/2").is_totally_positive());
    }

    #[test]
    fn trace_and_norm_examples() {
        let k = make_field(66, 31).unwrap();
        assert_eq!(el(&k, "61 + sqrt(31) + sqrt(66) + sqrt(2046)").trace(), 244);
        assert_eq!(el(&k, "9 + sqrt(66)").norm(), BigRational::from_integer(225.into()));
    }

    #[test]
    fn subfield_projection() {
        let k = make_field(66, 31).unwrap();
        let p = el(&k, "9 + sqrt(66)").subfield_project().unwrap();
        assert_eq!(p.tag, SubfieldTag::SqrtM);
        assert_eq!(p.rational, BigRational::from_integer(9.into()));
        assert_eq!(p.surd, BigRational::from_integer(1.into()));
        assert!(el(&k, "61 + sqrt(31) + sqrt(66) + sqrt(2046)")
            .subfield_project()
            .is_none());
        let p = el(&k, "7").subfield_project().unwrap();
        assert_eq!(p.tag, SubfieldTag::Rational);
        assert_eq!(p.rational, BigRational::from_integer(7.into()));
    }

    #[test]
    fn canonical_text_round_trips() {
        let k = make_field(71, 37).unwrap();
        let e = FieldElement::new(&k, [258, -4, 2, 4]);
        let text = e.to_string();
        assert_eq!(text, "(258 + -4*sqrt(71) + 2*sqrt(37) + 4*sqrt(2627))/4");
        assert_eq!(el(&k, &text), e);
    }

    #[test]
    fn canonical_sign() {
        let k = make_field(2, 3).unwrap();
        let e = FieldElement::new(&k, [0, -4, 4, 0]);
        assert_eq!(e.canonical_sign().coords(), &[0, 4, -4, 0]);
    }
}
