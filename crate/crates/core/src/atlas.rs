//! Interval families on which `sqrt(D)` forces non-representability,
//! witness elements, and brute-force checks of the tuple inequalities behind
//! them.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::AtlasError;
use crate::field::{CaseLabel, Field, FieldElement, Radical};
use crate::sos::{decompose_sos, SearchConfig, SosOutcome};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn is_square(c: u64) -> Option<u64> {
    let s = c.sqrt();
    (s * s == c).then_some(s)
}

/// Sign of `r + s*sqrt(c)`.
fn sign2(r: &Q, s: &Q, c: u64) -> Ordering {
    let sr = r.cmp(&Q::zero());
    let ss = if c == 0 { Ordering::Equal } else { s.cmp(&Q::zero()) };
    if ss == Ordering::Equal {
        return sr;
    }
    if sr == Ordering::Equal || sr == ss {
        return ss;
    }
    // opposite signs: the larger magnitude wins
    let lhs = r * r;
    let rhs = s * s * q(c as i64);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sr,
        Ordering::Less => ss,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `p + q1*sqrt(c1) + q2*sqrt(c2)`, by repeated squaring.
pub fn surd_sign(p: &Q, q1: &Q, c1: u64, q2: &Q, c2: u64) -> Ordering {
    // sign of u = q1 sqrt(c1) + q2 sqrt(c2)
    let a = if c1 == 0 { Ordering::Equal } else { q1.cmp(&Q::zero()) };
    let b = if c2 == 0 { Ordering::Equal } else { q2.cmp(&Q::zero()) };
    let su = if a == Ordering::Equal {
        b
    } else if b == Ordering::Equal || a == b {
        a
    } else {
        match (q1 * q1 * q(c1 as i64)).cmp(&(q2 * q2 * q(c2 as i64))) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => Ordering::Equal,
        }
    };
    let sp = p.cmp(&Q::zero());
    if su == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == su {
        return su;
    }
    // p^2 - u^2 = (p^2 - q1^2 c1 - q2^2 c2) - 2 q1 q2 sqrt(c1 c2)
    let r = p * p - q1 * q1 * q(c1 as i64) - q2 * q2 * q(c2 as i64);
    let s = -(q1 * q2 * q(2));
    match sign2(&r, &s, c1 * c2) {
        Ordering::Greater => sp,
        Ordering::Less => su,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `p + q*sqrt(c)`, or `+infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdBound {
    pub p: Q,
    pub q: Q,
    pub c: u64,
    pub infinite: bool,
}

impl SurdBound {
    pub fn rational(p: Q) -> Self {
        SurdBound {
            p,
            q: Q::zero(),
            c: 0,
            infinite: false,
        }
    }

    pub fn new(p: Q, q: Q, c: u64) -> Self {
        if q.is_zero() || c == 0 {
            return Self::rational(p);
        }
        if let Some(s) = is_square(c) {
            return Self::rational(p + q * self::q(s as i64));
        }
        SurdBound {
            p,
            q,
            c,
            infinite: false,
        }
    }

    pub fn infinity() -> Self {
        SurdBound {
            p: Q::zero(),
            q: Q::zero(),
            c: 0,
            infinite: true,
        }
    }

    /// Sign of `self - other`.
    pub fn cmp_bound(&self, other: &SurdBound) -> Ordering {
        match (self.infinite, other.infinite) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => surd_sign(&(&self.p - &other.p), &self.q, self.c, &(-&other.q), other.c),
        }
    }

    /// Sign of `self - (x + y*sqrt(d))`.
    fn cmp_surd(&self, x: &Q, y: &Q, d: u64) -> Ordering {
        if self.infinite {
            return Ordering::Greater;
        }
        surd_sign(&(&self.p - x), &self.q, self.c, &(-y), d)
    }

    pub fn approx(&self) -> f64 {
        if self.infinite {
            return f64::INFINITY;
        }
        let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
        f(&self.p) + f(&self.q) * (self.c as f64).sqrt()
    }
}

impl fmt::Display for SurdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.infinite {
            return write!(f, "inf");
        }
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        let coeff = self.q.abs();
        let surd = if coeff.is_one() {
            format!("sqrt({})", self.c)
        } else {
            format!("{}*sqrt({})", coeff, self.c)
        };
        if self.p.is_zero() {
            let lead = if sign == '-' { "-" } else { "" };
            write!(f, "{lead}{surd}")
        } else {
            write!(f, "{} {sign} {surd}", self.p)
        }
    }
}

impl Serialize for SurdBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SurdBound", 6)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("infinite", &self.infinite)?;
        st.serialize_field("rational", &self.p.to_string())?;
        st.serialize_field("surd_coeff", &self.q.to_string())?;
        st.serialize_field("radicand", &self.c.to_string())?;
        let approx = if self.infinite {
            "inf".to_string()
        } else {
            format!("{:.6}", self.approx())
        };
        st.serialize_field("approx", &approx)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub lo: SurdBound,
    pub hi: SurdBound,
}

impl Piece {
    fn is_empty(&self) -> bool {
        self.lo.cmp_bound(&self.hi) == Ordering::Greater
    }

    fn contains_surd(&self, x: &Q, y: &Q, d: u64) -> bool {
        self.lo.cmp_surd(x, y, d) != Ordering::Greater && self.hi.cmp_surd(x, y, d) != Ordering::Less
    }

    pub fn contains_piece(&self, other: &Piece) -> bool {
        self.lo.cmp_bound(&other.lo) != Ordering::Greater
            && self.hi.cmp_bound(&other.hi) != Ordering::Less
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IntervalKind {
    H,
    #[serde(rename = "Hprime")]
    HPrime,
    I1,
    I2,
    J,
    E,
    L1,
    L2,
    L3,
    L4,
}

impl std::str::FromStr for IntervalKind {
    type Err = AtlasError;
    fn from_str(s: &str) -> Result<Self, AtlasError> {
        use IntervalKind::*;
        Ok(match s.to_ascii_lowercase().as_str() {
            "h" => H,
            "hprime" | "h'" => HPrime,
            "i1" => I1,
            "i2" => I2,
            "j" => J,
            "e" => E,
            "l1" => L1,
            "l2" => L2,
            "l3" => L3,
            "l4" => L4,
            _ => return Err(AtlasError::InvalidCase(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub s0: u64,
    pub l: Option<u64>,
    pub k: Option<u64>,
    /// Last index `i` tried for the L families (the first empty piece).
    pub last_index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    pub kind: IntervalKind,
    pub pieces: Vec<Piece>,
    pub params: FamilyParams,
}

impl IntervalFamily {
    /// Exact membership of the rational `x`.
    pub fn contains_value(&self, x: &Q) -> bool {
        self.pieces.iter().any(|p| p.contains_surd(x, &Q::zero(), 0))
    }

    /// Exact membership of `sqrt(d)`.
    pub fn contains_sqrt(&self, d: u64) -> bool {
        self.pieces.iter().any(|p| p.contains_surd(&Q::zero(), &Q::one(), d))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

fn family(kind: IntervalKind, lo: SurdBound, hi: SurdBound, params: FamilyParams) -> IntervalFamily {
    let piece = Piece { lo, hi };
    let pieces = if piece.is_empty() { vec![] } else { vec![piece] };
    IntervalFamily { kind, pieces, params }
}

/// `[A/j + c*sqrt(s0*j)/j, A/(j') - c*sqrt(s0*j')/j']` for the I, J and E shapes,
/// with `A = num * s0 * k / den`.
fn sqrt_shape(s0: u64, k: u64, num: i64, den: i64, coeff: Q, l: u64, right: Option<u64>) -> (SurdBound, SurdBound) {
    let base = |j: u64| frac(num * (s0 * k) as i64, den * j as i64);
    let lo = SurdBound::new(base(l), &coeff / q(l as i64), s0 * l);
    let hi = match right {
        Some(j) => SurdBound::new(base(j), -(&coeff / q(j as i64)), s0 * j),
        None => SurdBound::infinity(),
    };
    (lo, hi)
}

/// The single-interval families with explicit endpoints.
pub fn interval(kind: IntervalKind, s0: u64, l: u64, k: u64) -> Result<IntervalFamily, AtlasError> {
    use IntervalKind::*;
    if s0 == 0 || l == 0 {
        return Err(AtlasError::InvalidParams("s0 and l must be positive".into()));
    }
    let needs_k = matches!(kind, I1 | I2 | J | E);
    if needs_k && k == 0 {
        return Err(AtlasError::InvalidParams("k must be positive".into()));
    }
    let params = FamilyParams {
        s0,
        l: Some(l),
        k: needs_k.then_some(k),
        last_index: None,
    };
    let sq = (s0 * s0) as i64;
    let li = l as i64;
    let (lo, hi) = match kind {
        H if l == 1 => (SurdBound::rational(frac(sq, 2)), SurdBound::infinity()),
        H => (
            SurdBound::rational(frac(sq, li * (li + 1))),
            SurdBound::rational(frac(sq, li * (li - 1))),
        ),
        HPrime if l <= 2 => (SurdBound::rational(frac(sq, li * (li + 2))), SurdBound::infinity()),
        HPrime => (
            SurdBound::rational(frac(sq, li * (li + 2))),
            SurdBound::rational(frac(sq, li * (li - 2))),
        ),
        I1 | E => sqrt_shape(s0, k, 2, 1, q(2), l, (l > 1).then(|| l - 1)),
        I2 => sqrt_shape(s0, k, 1, 2, q(1), l, (l > 1).then(|| l - 1)),
        J => sqrt_shape(s0, k, 1, 1, q(2), l, (l > 2).then(|| l - 2)),
        L1 | L2 | L3 | L4 => {
            return Err(AtlasError::InvalidParams(
                "L families are built by l_family".into(),
            ))
        }
    };
    Ok(family(kind, lo, hi, params))
}

const MAX_UNION_INDEX: u64 = 1_000_000;

/// `[ray, inf)` together with the pieces `i = 2, 3, ...` of an L family,
/// stopping at the first empty piece. The piece widths decrease strictly in
/// `i`, so no later piece is nonempty.
pub fn l_family(kind: IntervalKind, s0: u64) -> Result<IntervalFamily, AtlasError> {
    use IntervalKind::*;
    if s0 == 0 {
        return Err(AtlasError::InvalidParams("s0 must be positive".into()));
    }
    let s = s0 as i64;
    match kind {
        L3 if s0 % 2 != 0 => {
            return Err(AtlasError::ParityMismatch {
                family: "L3",
                expected: "even",
                s0,
            })
        }
        L4 if s0 % 2 == 0 => {
            return Err(AtlasError::ParityMismatch {
                family: "L4",
                expected: "odd",
                s0,
            })
        }
        L1 | L2 | L3 | L4 => {}
        other => return Err(AtlasError::InvalidCase(format!("{other:?} is not an L family"))),
    }
    let ray = match kind {
        L1 => q(2 * s + 4),
        L2 => frac(s, 2) + q(4),
        L3 => frac(s, 2) + q(8),
        _ => q(s + 4),
    };
    // (lo rational, lo surd coeff of sqrt 40, hi rational, hi coeff of sqrt 70)
    let piece = |i: i64| -> Piece {
        let (lr, lc, hr, hc) = match kind {
            L1 => (frac(2 * s, i), q(i), frac(2 * s, i - 1), q(i - 1)),
            L2 => (frac(s, 2 * i), q(i), frac(s, 2 * (i - 1)), q(i - 1)),
            L3 => (frac(s, 2 * i), q(2 * i), frac(s, 2 * (i - 1)), q(2 * (i - 1))),
            _ => (frac(s, 2 * i + 1), q(4 * i + 2), frac(s, 2 * (i - 1)), q(4 * i - 2)),
        };
        Piece {
            lo: SurdBound::new(lr, lc, 40),
            hi: SurdBound::new(hr, -hc, 70),
        }
    };
    let mut pieces = vec![Piece {
        lo: SurdBound::rational(ray),
        hi: SurdBound::infinity(),
    }];
    let mut i = 2u64;
    loop {
        if i > MAX_UNION_INDEX {
            return Err(AtlasError::UnionDidNotTerminate(MAX_UNION_INDEX));
        }
        let p = piece(i as i64);
        if p.is_empty() {
            debug_assert!(piece(i as i64 + 1).is_empty());
            break;
        }
        pieces.push(p);
        i += 1;
    }
    Ok(IntervalFamily {
        kind,
        pieces,
        params: FamilyParams {
            s0,
            l: None,
            k: None,
            last_index: Some(i),
        },
    })
}

/// Which of the five alternatives applies to the field and whether its
/// membership conditions hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Check {
    pub alternative: u8,
    pub memberships: Vec<(i64, IntervalKind, bool)>,
    pub holds: bool,
}

pub fn theorem1_check(field: &Field, s0: u64) -> Result<Theorem1Check, AtlasError> {
    use IntervalKind::*;
    let (p, qq, t) = field.ordered_triple();
    let even = s0 % 2 == 0;
    let (alternative, plan): (u8, Vec<(i64, IntervalKind)>) = match field.case_label() {
        CaseLabel::C1 => (1, vec![(p, L1), (t, L1), (qq, L2)]),
        CaseLabel::C2 | CaseLabel::C3 if even => (2, vec![(p, L1), (t, L1), (qq, L3)]),
        CaseLabel::C2 | CaseLabel::C3 => (3, vec![(p, L1), (t, L1), (qq, L4)]),
        CaseLabel::C41 | CaseLabel::C42 if even => (4, vec![(p, L3), (qq, L3), (t, L3)]),
        CaseLabel::C41 | CaseLabel::C42 => (5, vec![(p, L4), (qq, L4), (t, L4)]),
    };
    let mut memberships = Vec::new();
    for (d, kind) in plan {
        let fam = l_family(kind, s0)?;
        memberships.push((d, kind, fam.contains_sqrt(d as u64)));
    }
    let holds = memberships.iter().all(|m| m.2);
    Ok(Theorem1Check {
        alternative,
        memberships,
        holds,
    })
}

/// Outcome of the closed-form sufficient conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sufficiency {
    pub sufficient: bool,
    /// Condition number 1..=5 applicable to the field's residue case.
    pub condition: u8,
    pub thresholds: Vec<(i64, String)>,
}

/// The five closed-form conditions, evaluated on the ordered triple.
pub fn nonrep_sufficient(field: &Field, s0: u64) -> Sufficiency {
    let s = s0 as i64;
    let (p, qq, t) = field.ordered_triple();
    let sqr = |x: Q| &x * &x;
    let wide = sqr(q(2 * s + 4));
    let odd = s0 % 2 == 1;
    let (condition, reqs): (u8, Vec<(i64, Q)>) = match field.case_label() {
        CaseLabel::C1 => (1, vec![(p, wide.clone()), (t, wide), (qq, sqr(frac(s, 2) + q(4)))]),
        CaseLabel::C2 | CaseLabel::C3 if odd => (2, vec![(p, wide.clone()), (t, wide), (qq, sqr(q(s + 4)))]),
        CaseLabel::C2 | CaseLabel::C3 => (3, vec![(p, wide.clone()), (t, wide), (qq, sqr(frac(s, 2) + q(8)))]),
        CaseLabel::C41 | CaseLabel::C42 => {
            let th = if odd { sqr(q(s + 4)) } else { sqr(frac(s, 2) + q(8)) };
            (if odd { 4 } else { 5 }, vec![(p, th.clone()), (qq, th.clone()), (t, th)])
        }
    };
    let sufficient = reqs.iter().all(|(d, th)| q(*d) >= *th);
    Sufficiency {
        sufficient,
        condition,
        thresholds: reqs.into_iter().map(|(d, th)| (d, th.to_string())).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessForm {
    /// `floor(k sqrt D) + 1 + k sqrt D`, for `D = 2, 3 (mod 4)`.
    Floor,
    /// `floor((k sqrt D + k)/2) + 1 + (k sqrt D - k)/2`, for `D = 1 (mod 4)`.
    /// Its conjugate lies in `(0, 1]`.
    HalfInteger,
    /// `floor((k sqrt D - k)/2) + 1 + (k sqrt D - k)/2`. The conjugate is
    /// close to `-k`, so this form is rejected as not totally positive.
    HalfIntegerPrinted,
}

impl WitnessForm {
    pub fn for_radicand(d: i64) -> Self {
        if d.rem_euclid(4) == 1 {
            WitnessForm::HalfInteger
        } else {
            WitnessForm::Floor
        }
    }
}

pub fn make_witness(field: &Field, form: WitnessForm, radical: Radical, k: u64) -> Result<FieldElement, AtlasError> {
    if k == 0 {
        return Err(AtlasError::InvalidParams("k must be positive".into()));
    }
    let d = field.radicand(radical);
    let residue = d.rem_euclid(4);
    let ok = match form {
        WitnessForm::Floor => residue == 2 || residue == 3,
        WitnessForm::HalfInteger | WitnessForm::HalfIntegerPrinted => residue == 1,
    };
    if !ok {
        return Err(AtlasError::ResidueMismatch {
            case: match form {
                WitnessForm::Floor => "floor",
                WitnessForm::HalfInteger | WitnessForm::HalfIntegerPrinted => "half-integer",
            },
            d,
            residue,
        });
    }
    let k = k as i64;
    let floor_root = ((k as i128 * k as i128) * d as i128).sqrt() as i64;
    let mut coords = [0i64; 4];
    match form {
        WitnessForm::Floor => {
            coords[0] = 4 * (floor_root + 1);
            coords[radical.coord_index()] = 4 * k;
        }
        WitnessForm::HalfInteger | WitnessForm::HalfIntegerPrinted => {
            // floor(y / 2) = floor(floor(y) / 2)
            let shift = if form == WitnessForm::HalfInteger { k } else { -k };
            let f = (floor_root + shift).div_euclid(2);
            coords[0] = 4 * (f + 1) - 2 * k;
            coords[radical.coord_index()] = 2 * k;
        }
    }
    let w = FieldElement::new(field, coords);
    debug_assert!(w.is_integral());
    if !w.is_totally_positive() {
        return Err(AtlasError::WitnessNotTotallyPositive(w.to_string()));
    }
    Ok(w)
}

/// Runs the uncapped engine on `s0 * w`.
pub fn verify_witness(field: &Field, s0: u64, w: &FieldElement) -> Result<SosOutcome, AtlasError> {
    if w.field() != field {
        return Err(AtlasError::InvalidParams("witness lies in another field".into()));
    }
    if !w.is_integral() || !w.is_totally_positive() {
        return Err(AtlasError::InvalidParams(format!(
            "witness {w} must be integral and totally positive"
        )));
    }
    Ok(decompose_sos(&w.scale(s0 as i64), SearchConfig::uncapped())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaKind {
    /// `sum a^2 + D b^2 >= s0^2/l + l D` on `H_l(s0)`.
    Lemma1,
    /// `sum a^2 + D b^2/4 >= s0^2/l + l D/4` on `H_l(2 s0)`.
    Lemma1Quarter,
    /// Pairs with `a = b (mod 2)`, on `H'_l(s0)`.
    Lemma2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleOracleReport {
    pub which: LemmaKind,
    pub s0: u64,
    pub l: u64,
    pub d: Q,
    pub interval: IntervalFamily,
    pub in_interval: bool,
    pub bound: Q,
    pub min_found: Q,
    pub witness_tuple: Vec<(u64, u64)>,
    pub holds: bool,
}

impl Serialize for TupleOracleReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TupleOracleReport", 10)?;
        st.serialize_field("which", &self.which)?;
        st.serialize_field("s0", &self.s0.to_string())?;
        st.serialize_field("l", &self.l.to_string())?;
        st.serialize_field("D", &self.d.to_string())?;
        st.serialize_field("interval", &self.interval)?;
        st.serialize_field("in_interval", &self.in_interval)?;
        st.serialize_field("bound", &self.bound.to_string())?;
        st.serialize_field("min_found", &self.min_found.to_string())?;
        let tuple: Vec<[String; 2]> = self
            .witness_tuple
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        st.serialize_field("witness_tuple", &tuple)?;
        st.serialize_field("holds", &self.holds)?;
        st.end()
    }
}

/// Minimum of `sum a_i^2 + w * b_i^2` over multisets of pairs with
/// `a_i, b_i >= 1` and `sum a_i b_i = s0`. Pairs with a zero entry only add
/// a nonnegative amount, so they never lower the minimum.
fn tuple_minimum(s0: u64, w: &Q, parity: bool) -> (Q, Vec<(u64, u64)>) {
    let n = s0 as usize;
    let mut best: Vec<Option<(Q, (u64, u64))>> = vec![None; n + 1];
    best[0] = Some((Q::zero(), (0, 0)));
    for s in 1..=n {
        let mut cur: Option<(Q, (u64, u64))> = None;
        for a in 1..=s {
            for b in 1..=s / a {
                if parity && (a + b) % 2 == 1 {
                    continue;
                }
                let Some((prev, _)) = &best[s - a * b] else { continue };
                let cost = prev + q((a * a) as i64) + w * q((b * b) as i64);
                if cur.as_ref().is_none_or(|(c, _)| cost < *c) {
                    cur = Some((cost, (a as u64, b as u64)));
                }
            }
        }
        best[s] = cur;
    }
    let (min, _) = best[n].clone().expect("s0 = s0 * 1 with a = s0, b = 1 or a = b = 1 repeated");
    let mut tuple = Vec::new();
    let mut s = n;
    while s > 0 {
        let (_, (a, b)) = best[s].clone().unwrap();
        tuple.push((a, b));
        s -= (a * b) as usize;
    }
    tuple.sort_unstable_by(|x, y| y.cmp(x));
    (min, tuple)
}

/// Exhaustive minimization against the claimed lower bound. `D` outside the
/// interval is reported, not rejected.
pub fn lemma_oracle(which: LemmaKind, s0: u64, l: u64, d: &Q) -> Result<TupleOracleReport, AtlasError> {
    if s0 == 0 || l == 0 {
        return Err(AtlasError::InvalidParams("s0 and l must be positive".into()));
    }
    let s = q(s0 as i64);
    let lq = q(l as i64);
    let (interval, weight, bound) = match which {
        LemmaKind::Lemma1 => (interval(IntervalKind::H, s0, l, 1)?, d.clone(), &s * &s / &lq + &lq * d),
        LemmaKind::Lemma1Quarter => {
            let w = d / q(4);
            (interval(IntervalKind::H, 2 * s0, l, 1)?, w.clone(), &s * &s / &lq + &lq * &w)
        }
        LemmaKind::Lemma2 => {
            let fam = interval(IntervalKind::HPrime, s0, l, 1)?;
            let bound = if (l + s0) % 2 == 0 {
                &s * &s / &lq + &lq * d
            } else if l == 1 {
                return Err(AtlasError::InvalidParams(
                    "the mixed-parity bound divides by l - 1 = 0".into(),
                ));
            } else {
                let j = q(l as i64 - 1);
                &s * &s / &j + &j * d
            };
            (fam, d.clone(), bound)
        }
    };
    let in_interval = interval.contains_value(d);
    let (min_found, witness_tuple) = tuple_minimum(s0, &weight, which == LemmaKind::Lemma2);
    let holds = min_found >= bound;
    Ok(TupleOracleReport {
        which,
        s0,
        l,
        d: d.clone(),
        interval,
        in_interval,
        bound,
        min_found,
        witness_tuple,
        holds,
    })
}

/// Five rationals spread through the interior of a piece; a ray `[lo, inf)`
/// is sampled on `[lo, 2 lo]`.
pub fn interior_samples(piece: &Piece) -> Vec<Q> {
    assert!(piece.lo.q.is_zero() && (piece.hi.infinite || piece.hi.q.is_zero()));
    let lo = piece.lo.p.clone();
    let hi = if piece.hi.infinite { &lo * q(2) } else { piece.hi.p.clone() };
    (1..=5).map(|j| &lo + (&hi - &lo) * frac(j, 6)).collect()
}

/// One nesting diagnostic `E(l, l+i) ⊆ E(l, l+i-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestingRecord {
    pub s0: u64,
    pub l: u64,
    pub i: u64,
    pub outer_empty: bool,
    pub inner_empty: bool,
    pub contained: bool,
}

pub fn e_nesting_diagnostics(s0_max: u64, l_max: u64, i_max: u64) -> Vec<NestingRecord> {
    let mut out = Vec::new();
    for s0 in 1..=s0_max {
        for l in 1..=l_max {
            for i in 1..=i_max {
                let inner = interval(IntervalKind::E, s0, l, l + i).expect("valid");
                let outer = interval(IntervalKind::E, s0, l, l + i - 1).expect("valid");
                let contained = match (inner.pieces.first(), outer.pieces.first()) {
                    (None, _) => true,
                    (Some(_), None) => false,
                    (Some(a), Some(b)) => b.contains_piece(a),
                };
                out.push(NestingRecord {
                    s0,
                    l,
                    i,
                    outer_empty: outer.is_empty(),
                    inner_empty: inner.is_empty(),
                    contained,
                });
            }
        }
    }
    out
}

/// Whether the upper end of `E(l+1, l+1)` exceeds the lower end of `E(l, l)`.
pub fn e_chain_overlaps(s0: u64, l: u64) -> bool {
    let lower = sqrt_shape(s0, l, 2, 1, q(2), l, None).0;
    let upper = sqrt_shape(s0, l + 1, 2, 1, q(2), l + 1, Some(l)).1;
    upper.cmp_bound(&lower) == Ordering::Greater
}
