//! Exact sign of `a + b*sqrt(m) + c*sqrt(n) + d*sqrt(r)` under an embedding.
//!
//! The value is enclosed in a fixed-point interval whose endpoints come from
//! integer square roots rounded down and up, so every enclosure is rigorous.
//! Precision doubles until the enclosure excludes zero. Since the integer
//! coordinate vector describes an algebraic integer `x`, a nonzero `x` has
//! `|N(x)| >= 1`, hence `|sigma(x)| >= 1 / U^3` where `U` bounds every
//! conjugate. An enclosure narrower than that bound which still contains zero
//! is impossible, so the loop terminates.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::FieldParams;

pub const DEFAULT_START_BITS: u32 = 128;

static START_BITS: AtomicU32 = AtomicU32::new(DEFAULT_START_BITS);

/// Raises the starting precision of the rigorous ladder. Values below the
/// default are ignored.
pub fn set_start_precision(bits: u32) {
    START_BITS.store(bits.max(DEFAULT_START_BITS), AtomicOrdering::Relaxed);
}

pub fn start_precision() -> u32 {
    START_BITS.load(AtomicOrdering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// An embedding `K -> R`, given by the signs applied to `sqrt(m)` and
/// `sqrt(n)`; `sqrt(r)` receives their product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmbeddingSigns {
    pub sm: i8,
    pub sn: i8,
}

impl EmbeddingSigns {
    /// sigma_1..sigma_4 in repository order: (+,+), (-,+), (+,-), (-,-).
    pub const ALL: [EmbeddingSigns; 4] = [
        EmbeddingSigns { sm: 1, sn: 1 },
        EmbeddingSigns { sm: -1, sn: 1 },
        EmbeddingSigns { sm: 1, sn: -1 },
        EmbeddingSigns { sm: -1, sn: -1 },
    ];

    pub fn sr(self) -> i8 {
        self.sm * self.sn
    }

    /// Sign multipliers for the coordinates `(1, √m, √n, √r)`.
    pub fn multipliers(self) -> [i64; 4] {
        [1, self.sm as i64, self.sn as i64, self.sr() as i64]
    }
}

impl fmt::Display for EmbeddingSigns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: i8| if s > 0 { '+' } else { '-' };
        write!(f, "({},{})", c(self.sm), c(self.sn))
    }
}

/// Rigorous enclosure `[lo, hi] / 2^bits` of a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Enclosure {
    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo_rational() <= x && x <= &self.hi_rational()
    }
}

pub(crate) fn fixed_roots(radicands: [i64; 3], bits: u32) -> [BigInt; 3] {
    radicands.map(|x| (BigInt::from(x) << (2 * bits)).sqrt())
}

/// Enclosure of `a + sm*b*sqrt(m) + sn*c*sqrt(n) + sm*sn*d*sqrt(r)`.
pub(crate) fn enclose(
    field: &FieldParams,
    coords: &[i64; 4],
    s: EmbeddingSigns,
    bits: u32,
) -> Enclosure {
    let owned;
    let roots = if bits == DEFAULT_START_BITS {
        field.base_roots(bits)
    } else {
        owned = fixed_roots([field.m(), field.n(), field.r()], bits);
        &owned
    };
    let mult = s.multipliers();
    let base = BigInt::from(coords[0]) << bits;
    let mut lo = base.clone();
    let mut hi = base;
    for i in 1..4 {
        let k = coords[i] * mult[i];
        if k == 0 {
            continue;
        }
        let k = BigInt::from(k);
        // sqrt lies in [root, root + 1] / 2^bits
        let a = &k * &roots[i - 1];
        let b = &a + &k;
        if k.is_positive() {
            lo += a;
            hi += b;
        } else {
            lo += b;
            hi += a;
        }
    }
    Enclosure { lo, hi, bits }
}

/// Upper bound on every conjugate of the integer-coordinate vector.
fn conjugate_bound(field: &FieldParams, coords: &[i64; 4]) -> BigInt {
    let rads = [field.m(), field.n(), field.r()];
    let mut u = BigInt::from(coords[0].unsigned_abs());
    for i in 1..4 {
        if coords[i] != 0 {
            let sq = BigInt::from(coords[i]) * BigInt::from(coords[i]) * BigInt::from(rads[i - 1]);
            u += sq.sqrt() + 1u32;
        }
    }
    u
}

/// Tries to decide the sign in double precision with a generous rigorous
/// error bound. Returns `None` when the value is too close to zero.
fn fast_sign(field: &FieldParams, coords: &[i64; 4], s: EmbeddingSigns) -> Option<Sign> {
    const EXACT: i64 = 1 << 52;
    if coords.iter().any(|&c| c.abs() >= EXACT) {
        return None;
    }
    let mult = s.multipliers();
    let roots = field.sqrt_f64();
    let mut value = coords[0] as f64;
    let mut magnitude = (coords[0] as f64).abs();
    for i in 1..4 {
        let term = (coords[i] * mult[i]) as f64 * roots[i - 1];
        value += term;
        magnitude += term.abs();
    }
    // Each term carries a relative error below 2^-51; the sum adds at most
    // four more roundings. 2^-40 of the magnitude dominates all of them.
    let err = magnitude * (1.0 / (1u64 << 40) as f64);
    if value > err {
        Some(Sign::Positive)
    } else if value < -err {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Exact sign of the conjugate `sigma_s` of `(a + b√m + c√n + d√r)`.
pub(crate) fn sign_of_coords(field: &FieldParams, coords: &[i64; 4], s: EmbeddingSigns) -> Sign {
    if coords.iter().all(|&c| c == 0) {
        return Sign::Zero;
    }
    if let Some(sign) = fast_sign(field, coords, s) {
        return sign;
    }
    rigorous_sign(field, coords, s)
}

pub(crate) fn rigorous_sign(field: &FieldParams, coords: &[i64; 4], s: EmbeddingSigns) -> Sign {
    if coords.iter().all(|&c| c == 0) {
        return Sign::Zero;
    }
    let u = conjugate_bound(field, coords);
    let u3 = &u * &u * &u;
    let mut bits = start_precision();
    loop {
        let enc = enclose(field, coords, s, bits);
        if enc.lo.sign() == BigSign::Plus {
            return Sign::Positive;
        }
        if enc.hi.sign() == BigSign::Minus {
            return Sign::Negative;
        }
        let width = &enc.hi - &enc.lo;
        // width / 2^bits < 1 / U^3 with zero inside contradicts |N| >= 1
        assert!(
            width * &u3 >= (BigInt::one() << bits) || enc.lo.is_zero() && enc.hi.is_zero(),
            "separation bound violated for {coords:?} under {s}"
        );
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn fast_path_declines_near_zero() {
        let k = make_field(2, 3).unwrap();
        // 1 + sqrt(2) - sqrt(3) - ... chosen so the f64 path can decide
        assert_eq!(fast_sign(&k, &[1, 1, 0, 0], EmbeddingSigns::ALL[0]), Some(Sign::Positive));
        // 665857^2 - 2 * 470832^2 = 1, so 665857 - 470832*sqrt(2) is about 7.5e-7
        let near = [665857, -470832, 0, 0];
        let s = sign_of_coords(&k, &near, EmbeddingSigns::ALL[0]);
        assert_eq!(s, Sign::Positive);
        assert_eq!(rigorous_sign(&k, &near, EmbeddingSigns::ALL[0]), Sign::Positive);
        assert_eq!(rigorous_sign(&k, &near, EmbeddingSigns::ALL[1]), Sign::Positive);
        let neg = near.map(|c| -c);
        assert_eq!(rigorous_sign(&k, &neg, EmbeddingSigns::ALL[0]), Sign::Negative);
    }

    #[test]
    fn pell_unit_power_needs_refinement() {
        // (1 + sqrt(2))^-40 = a - b sqrt(2) with a, b around 1e15: far below f64 resolution.
        let k = make_field(2, 5).unwrap();
        let (mut a, mut b) = (1i128, 0i128);
        for _ in 0..40 {
            (a, b) = (a + 2 * b, a + b);
        }
        let coords = [a as i64, -(b as i64), 0, 0];
        assert_eq!(fast_sign(&k, &coords, EmbeddingSigns::ALL[0]), None);
        assert_eq!(sign_of_coords(&k, &coords, EmbeddingSigns::ALL[0]), Sign::Positive);
        assert_eq!(sign_of_coords(&k, &coords, EmbeddingSigns::ALL[1]), Sign::Positive);
    }

    #[test]
    fn enclosure_brackets_value() {
        let k = make_field(6, 10).unwrap();
        let enc = enclose(&k, &[4, 4, 4, -8], EmbeddingSigns::ALL[0], 64);
        assert!(enc.lo <= enc.hi);
        let lo = enc.lo_rational();
        let hi = enc.hi_rational();
        // 4(1 + √6 + √10 − 2√15) ≈ −4.536797
        assert!(lo < BigRational::new((-453679).into(), 100000.into()));
        assert!(hi > BigRational::new((-453680).into(), 100000.into()));
    }
}
