use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::element::FieldElement;
use super::rational::RationalElement;
use super::sign::EmbeddingSigns;

/// A monic rational polynomial of degree at most 4, coefficients stored from
/// the constant term upwards. Returned by [`min_poly`] as the minimal
/// polynomial of degree 1, 2 or 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalQuartic {
    coeffs: Vec<BigRational>,
}

impl RationalQuartic {
    /// Builds a monic polynomial from its lower coefficients `c0, c1, ...`.
    pub fn monic(lower: Vec<BigRational>) -> Self {
        let mut coeffs = lower;
        coeffs.push(BigRational::one());
        assert!(coeffs.len() <= 5, "degree at most 4");
        RationalQuartic { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Horner evaluation inside the field.
    pub fn eval(&self, x: &RationalElement) -> RationalElement {
        let field = x.field();
        let mut acc = RationalElement::zero(field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &RationalElement::from_rational(field, c.clone());
        }
        acc
    }

    pub fn annihilates(&self, e: &FieldElement) -> bool {
        self.eval(&RationalElement::from(e)).is_zero()
    }

    /// Product with another polynomial (used to compare against characteristic
    /// polynomials). Panics if the degree would exceed 4.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        assert!(out.len() <= 5);
        RationalQuartic { coeffs: out }
    }
}

impl fmt::Display for RationalQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalQuartic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(serializer)
    }
}

/// Characteristic polynomial `prod (x - sigma_i(e))` from the elementary
/// symmetric functions of the four conjugates.
pub fn char_poly(e: &RationalElement) -> RationalQuartic {
    let conj: Vec<RationalElement> = EmbeddingSigns::ALL.iter().map(|&s| e.conjugate(s)).collect();
    let field = e.field();
    // esym[k] = e_k(conj), built incrementally: e_k <- e_k + x * e_{k-1}
    let mut esym = vec![RationalElement::one(field)];
    for x in &conj {
        let mut next = esym.clone();
        next.push(RationalElement::zero(field));
        for k in 1..next.len() {
            next[k] = &esym.get(k).cloned().unwrap_or_else(|| RationalElement::zero(field))
                + &(x * &esym[k - 1]);
        }
        esym = next;
    }
    let rational = |x: &RationalElement| {
        assert!(x.is_rational(), "symmetric function must be rational");
        x.coords()[0].clone()
    };
    // x^4 - e1 x^3 + e2 x^2 - e3 x + e4
    let lower = vec![
        rational(&esym[4]),
        -rational(&esym[3]),
        rational(&esym[2]),
        -rational(&esym[1]),
    ];
    RationalQuartic::monic(lower)
}

/// Minimal polynomial over the rationals. `K/Q` has exactly the subfields
/// `Q`, `Q(√m)`, `Q(√n)`, `Q(√r)` and `K`, so the degree is read off from
/// which coordinates vanish.
pub fn min_poly(e: &RationalElement) -> RationalQuartic {
    let c = e.coords();
    let nonzero_surds: Vec<usize> = (1..4).filter(|&i| !c[i].is_zero()).collect();
    match nonzero_surds.as_slice() {
        [] => RationalQuartic::monic(vec![-c[0].clone()]),
        [i] => {
            let rad = [e.field().m(), e.field().n(), e.field().r()][i - 1];
            let rad = BigRational::from_integer(rad.into());
            // (x - a)^2 - b^2 D
            let a = &c[0];
            let b = &c[*i];
            RationalQuartic::monic(vec![a * a - b * b * rad, -(a + a)])
        }
        _ => char_poly(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn qi(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn quadratic_and_rational_minimal_polynomials() {
        let k = make_field(66, 31).unwrap();
        let e = FieldElement::parse(&k, "9 + sqrt(66)").unwrap();
        let p = e.min_poly();
        assert_eq!(p.coeffs(), &[qi(15), qi(-18), qi(1)]);
        assert!(p.annihilates(&e));

        let e = FieldElement::from_int(&k, 5);
        let p = e.min_poly();
        assert_eq!(p.coeffs(), &[qi(-5), qi(1)]);
        assert_eq!(p.to_string(), "x - 5");
    }

    #[test]
    fn char_poly_of_subfield_element_is_a_square() {
        let k = make_field(2, 5).unwrap();
        let e = RationalElement::parse(&k, "3 + sqrt(5)").unwrap();
        let mp = min_poly(&e);
        assert_eq!(char_poly(&e), mp.mul(&mp));
    }
}
