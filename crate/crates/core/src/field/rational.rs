use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::FieldElement;
use super::sign::EmbeddingSigns;
use super::{Field, Radical};
use crate::error::FieldError;

/// An element of `K` with arbitrary rational coordinates over
/// `(1, sqrt(m), sqrt(n), sqrt(r))`. Used where denominators are not bounded:
/// norms, characteristic polynomials, product factors.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalElement {
    field: Field,
    coords: [BigRational; 4],
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl RationalElement {
    pub fn new(field: &Field, coords: [BigRational; 4]) -> Self {
        RationalElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_rational(field: &Field, x: BigRational) -> Self {
        Self::new(field, [x, BigRational::zero(), BigRational::zero(), BigRational::zero()])
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_rational(field, BigRational::zero())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    /// `x + y*sqrt(D)` inside the quadratic subfield of `radical`.
    pub fn quadratic(field: &Field, radical: Radical, x: BigRational, y: BigRational) -> Self {
        let mut coords = [x, BigRational::zero(), BigRational::zero(), BigRational::zero()];
        coords[radical.coord_index()] = y;
        Self::new(field, coords)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn conjugate(&self, s: EmbeddingSigns) -> Self {
        let mult = s.multipliers();
        let mut coords = self.coords.clone();
        for i in 1..4 {
            if mult[i] < 0 {
                coords[i] = -&coords[i];
            }
        }
        Self::new(&self.field, coords)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.field, self.coords.clone().map(|c| c * k))
    }

    /// Norm to the rationals, computed as `N_{Q(√n)}(x * sigma_2(x))`.
    pub fn norm(&self) -> BigRational {
        let y = self * &self.conjugate(EmbeddingSigns::ALL[1]);
        debug_assert!(y.coords[1].is_zero() && y.coords[3].is_zero());
        let z = &y * &y.conjugate(EmbeddingSigns::ALL[2]);
        debug_assert!(z.is_rational());
        z.coords[0].clone()
    }

    pub fn trace(&self) -> BigRational {
        &self.coords[0] * q(4)
    }

    /// Converts to denominator-4 integer coordinates when possible.
    pub fn to_field_element(&self) -> Option<FieldElement> {
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for i in 0..4 {
            let v = &self.coords[i] * q(4);
            if !v.is_integer() {
                return None;
            }
            out[i] = v.to_integer();
        }
        FieldElement::from_coords_checked(&self.field, out)
    }

    pub fn approx(&self, s: EmbeddingSigns) -> f64 {
        use num_traits::ToPrimitive;
        let mult = s.multipliers();
        let roots = [self.field.m(), self.field.n(), self.field.r()].map(|x| (x as f64).sqrt());
        let mut v = self.coords[0].to_f64().unwrap_or(f64::NAN);
        for i in 1..4 {
            v += mult[i] as f64 * self.coords[i].to_f64().unwrap_or(f64::NAN) * roots[i - 1];
        }
        v
    }
}

impl From<&FieldElement> for RationalElement {
    fn from(e: &FieldElement) -> Self {
        RationalElement::new(e.field(), e.to_rational_coords())
    }
}

impl fmt::Debug for RationalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rads = [self.field.m(), self.field.n(), self.field.r()];
        let mut first = true;
        for i in 0..4 {
            let c = &self.coords[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "sqrt({})", rads[i - 1])?;
            } else {
                write!(f, "{a}*sqrt({})", rads[i - 1])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &RationalElement {
    type Output = RationalElement;

    fn add(self, rhs: &RationalElement) -> RationalElement {
        let mut coords = self.coords.clone();
        for i in 0..4 {
            coords[i] += &rhs.coords[i];
        }
        RationalElement::new(&self.field, coords)
    }
}

impl Sub for &RationalElement {
    type Output = RationalElement;

    fn sub(self, rhs: &RationalElement) -> RationalElement {
        self + &(-rhs)
    }
}

impl Neg for &RationalElement {
    type Output = RationalElement;

    fn neg(self) -> RationalElement {
        RationalElement::new(&self.field, self.coords.clone().map(|c| -c))
    }
}

impl Mul for &RationalElement {
    type Output = RationalElement;

    fn mul(self, rhs: &RationalElement) -> RationalElement {
        assert!(self.field == rhs.field, "field mismatch");
        let k = &self.field;
        let [a1, b1, c1, d1] = &self.coords;
        let [a2, b2, c2, d2] = &rhs.coords;
        let (m, n, r) = (q(k.m()), q(k.n()), q(k.r()));
        let (g, m1, n1) = (q(k.g()), q(k.m1()), q(k.n1()));
        let coords = [
            a1 * a2 + m * b1 * b2 + n * c1 * c2 + r * d1 * d2,
            a1 * b2 + b1 * a2 + n1 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + m1 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + g * (b1 * c2 + c1 * b2),
        ];
        RationalElement::new(k, coords)
    }
}

// --- parsing -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FieldError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '(' => {
                out.push(Token::Open);
                i += 1
            }
            ')' => {
                out.push(Token::Close);
                i += 1
            }
            '√' => {
                out.push(Token::Sqrt);
                i += 1
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token::Int(digits.parse().expect("ascii digits")));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "sqrt" {
                    out.push(Token::Sqrt);
                } else {
                    return Err(FieldError::Parse(format!("unknown word `{word}`")));
                }
            }
            c => return Err(FieldError::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Field,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), FieldError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(FieldError::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<RationalElement, FieldError> {
        let mut acc = RationalElement::zero(self.field);
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                negate = true;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    negate = false;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor ('*' factor)* ('/' int)*
    fn term(&mut self) -> Result<RationalElement, FieldError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        while self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(d)) if !d.is_zero() => {
                    acc = acc.scale(&BigRational::new(BigInt::one(), d));
                }
                other => {
                    return Err(FieldError::Parse(format!(
                        "expected a nonzero integer denominator, found {other:?}"
                    )))
                }
            }
        }
        Ok(acc)
    }

    // factor := '-' factor | int | sqrt '(' int ')' | '(' expr ')'
    fn factor(&mut self) -> Result<RationalElement, FieldError> {
        match self.next() {
            Some(Token::Minus) => Ok(-&self.factor()?),
            Some(Token::Int(v)) => Ok(RationalElement::from_rational(
                self.field,
                BigRational::from_integer(v),
            )),
            Some(Token::Sqrt) => {
                let d = match self.next() {
                    Some(Token::Open) => {
                        let d = self.next();
                        self.expect(Token::Close)?;
                        d
                    }
                    d => d,
                };
                let d = match d {
                    Some(Token::Int(d)) => d,
                    other => {
                        return Err(FieldError::Parse(format!(
                            "expected a radicand, found {other:?}"
                        )))
                    }
                };
                let radical = Radical::ALL
                    .into_iter()
                    .find(|&rad| BigInt::from(self.field.radicand(rad)) == d)
                    .ok_or_else(|| {
                        FieldError::Parse(format!("sqrt({d}) is not one of the field's radicals"))
                    })?;
                Ok(RationalElement::quadratic(
                    self.field,
                    radical,
                    BigRational::zero(),
                    BigRational::one(),
                ))
            }
            Some(Token::Open) => {
                let e = self.expr()?;
                self.expect(Token::Close)?;
                Ok(e)
            }
            other => Err(FieldError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(crate) fn parse_rational_element(
    field: &Field,
    text: &str,
) -> Result<RationalElement, FieldError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(FieldError::Parse("empty input".into()));
    }
    let mut parser = Parser {
        field,
        tokens,
        pos: 0,
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(FieldError::Parse(format!(
            "trailing input starting at token {}",
            parser.pos
        )));
    }
    Ok(e)
}

impl RationalElement {
    pub fn parse(field: &Field, text: &str) -> Result<Self, FieldError> {
        parse_rational_element(field, text)
    }
}
