//! Exhaustive decision procedure for sums of integral squares.
//!
//! Any square `gamma^2` occurring in a representation of `beta` satisfies
//! `sigma_j(gamma^2) <= sigma_j(beta)` at every embedding, since the other
//! squares are totally nonnegative. Those dominated squares are finitely many;
//! they are enumerated once and the search runs depth-first over multisets of
//! them in non-increasing trace order.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::EngineError;
use crate::field::{EmbeddingSigns, Field, FieldElement, RationalElement, SubfieldTag};

/// Cap matching the Pythagoras number of these rings; completeness is lost
/// whenever any cap is in force.
pub const PYTHAGORAS_PRESET: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchConfig {
    pub max_terms: Option<u32>,
    pub subfield_restriction: Option<SubfieldTag>,
}

impl SearchConfig {
    pub fn uncapped() -> Self {
        Self::default()
    }

    pub fn capped(max_terms: u32) -> Self {
        SearchConfig {
            max_terms: Some(max_terms),
            subfield_restriction: None,
        }
    }

    pub fn pythagoras_preset() -> Self {
        Self::capped(PYTHAGORAS_PRESET)
    }

    pub fn in_subfield(mut self, tag: SubfieldTag) -> Self {
        self.subfield_restriction = Some(tag);
        self
    }

    fn validate(&self) -> Result<(), EngineError> {
        match self.max_terms {
            Some(0) => Err(EngineError::InvalidConfig("max_terms must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

/// `target = sum(parts[i]^2)`. Parts are canonically signed and sorted by
/// coordinates. A zero target has no parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosCertificate {
    pub target: FieldElement,
    pub parts: Vec<FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRepReport {
    pub target: FieldElement,
    pub candidates_enumerated: usize,
    pub nodes_visited: u64,
    pub max_terms_in_effect: Option<u32>,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SosOutcome {
    Certificate(SosCertificate),
    NotRepresented(NonRepReport),
}

impl SosOutcome {
    pub fn certificate(&self) -> Option<&SosCertificate> {
        match self {
            SosOutcome::Certificate(c) => Some(c),
            SosOutcome::NotRepresented(_) => None,
        }
    }

    pub fn report(&self) -> Option<&NonRepReport> {
        match self {
            SosOutcome::Certificate(_) => None,
            SosOutcome::NotRepresented(r) => Some(r),
        }
    }

    pub fn is_representation(&self) -> bool {
        self.certificate().is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatedSquareSet {
    pub base: FieldElement,
    /// Sorted by `Tr(gamma^2)` descending, then by coordinates.
    pub squares: Vec<FieldElement>,
}

impl DominatedSquareSet {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn contains(&self, gamma: &FieldElement) -> bool {
        let c = gamma.canonical_sign();
        self.squares.iter().any(|s| *s == c)
    }
}

fn check_integral(beta: &FieldElement) -> Result<(), EngineError> {
    if beta.is_integral() {
        Ok(())
    } else {
        Err(EngineError::NotIntegral(beta.to_string()))
    }
}

fn outward(x: f64) -> f64 {
    x + x.abs() * 1e-9 + 1e-9
}

fn in_subfield(coords: &[i64; 4], tag: SubfieldTag) -> bool {
    let keep = tag.radical().map(|r| r.coord_index());
    (1..4).all(|i| coords[i] == 0 || Some(i) == keep)
}

/// Every integral `gamma`, up to sign, with `beta - gamma^2` totally
/// nonnegative.
pub fn enumerate_dominated_squares(beta: &FieldElement) -> Result<DominatedSquareSet, EngineError> {
    check_integral(beta)?;
    if !beta.is_totally_positive() {
        return Err(EngineError::NotTotallyPositive(beta.to_string()));
    }
    Ok(DominatedSquareSet {
        base: beta.clone(),
        squares: dominated(beta, None),
    })
}

fn dominated(beta: &FieldElement, tag: Option<SubfieldTag>) -> Vec<FieldElement> {
    let field = beta.field();
    let roots = [field.m(), field.n(), field.r()].map(|x| (x as f64).sqrt());
    // |sigma_j(4 gamma)| <= 4 v[j]
    let v: Vec<f64> = beta
        .approx_embeddings()
        .iter()
        .map(|&x| outward(outward(x.max(0.0)).sqrt()))
        .collect();
    let total: f64 = v.iter().sum();
    let bound = |root: f64| outward(total / root).floor() as i64;
    let (bb, cb, db) = (bound(roots[0]), bound(roots[1]), bound(roots[2]));
    let mut out = Vec::new();
    for d in -db..=db {
        for c in -cb..=cb {
            for b in -bb..=bb {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for (j, s) in EmbeddingSigns::ALL.iter().enumerate() {
                    let mult = s.multipliers();
                    let surd = (b * mult[1]) as f64 * roots[0]
                        + (c * mult[2]) as f64 * roots[1]
                        + (d * mult[3]) as f64 * roots[2];
                    lo = lo.max(-4.0 * v[j] - surd);
                    hi = hi.min(4.0 * v[j] - surd);
                }
                if lo > hi + 1e-6 {
                    continue;
                }
                let slack = 1e-7 * (lo.abs().max(hi.abs()) + 1.0);
                let a_lo = (lo - slack).ceil() as i64;
                let a_hi = (hi + slack).floor() as i64;
                for a in a_lo..=a_hi {
                    let coords = [a, b, c, d];
                    if coords == [0; 4] || !field.is_integral_coords(&coords) {
                        continue;
                    }
                    if let Some(t) = tag {
                        if !in_subfield(&coords, t) {
                            continue;
                        }
                    }
                    let gamma = FieldElement::new(field, coords);
                    if gamma.canonical_sign() != gamma {
                        continue;
                    }
                    let rest = beta
                        .checked_sub(&gamma.square())
                        .expect("same field");
                    if rest.is_totally_nonnegative() {
                        out.push(gamma);
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| {
        y.square()
            .trace()
            .cmp(&x.square().trace())
            .then_with(|| x.canonical_cmp(y))
    });
    out
}

struct Search<'a> {
    field: Field,
    count: usize,
    squares: Vec<[i64; 4]>,
    traces: Vec<i64>,
    by_square: HashMap<[i64; 4], usize>,
    // (remainder, terms left) -> smallest start index known to fail
    failed: HashMap<([i64; 4], u32), usize>,
    nodes: u64,
    observer: Option<&'a mut dyn FnMut(&FieldElement)>,
}

const UNLIMITED: u32 = u32::MAX;

impl Search<'_> {
    fn first_fitting(&self, trace: i64) -> usize {
        self.traces.partition_point(|&t| t > trace)
    }

    fn run(&mut self, rem: [i64; 4], start: usize, left: u32, chosen: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if let Some(obs) = self.observer.as_mut() {
            obs(&FieldElement::new(&self.field, rem));
        }
        if rem == [0; 4] {
            return true;
        }
        if left == 0 {
            return false;
        }
        if let Some(&s) = self.failed.get(&(rem, left)) {
            if start >= s {
                return false;
            }
        }
        if left == 1 {
            if let Some(&i) = self.by_square.get(&rem) {
                if i >= start {
                    chosen.push(i);
                    return true;
                }
            }
            self.record_failure(rem, left, start);
            return false;
        }
        let from = start.max(self.first_fitting(rem[0]));
        for i in from..self.count {
            // the remaining terms each have trace at most traces[i]
            if left != UNLIMITED && rem[0] > i64::from(left) * self.traces[i] {
                break;
            }
            let sq = &self.squares[i];
            let next = [rem[0] - sq[0], rem[1] - sq[1], rem[2] - sq[2], rem[3] - sq[3]];
            let next_el = FieldElement::new(&self.field, next);
            // a nonzero sum of nonzero squares is totally positive
            if next != [0; 4] && !next_el.is_totally_positive() {
                continue;
            }
            chosen.push(i);
            let left_next = if left == UNLIMITED { left } else { left - 1 };
            if self.run(next, i, left_next, chosen) {
                return true;
            }
            chosen.pop();
        }
        self.record_failure(rem, left, start);
        false
    }

    fn record_failure(&mut self, rem: [i64; 4], left: u32, start: usize) {
        let e = self.failed.entry((rem, left)).or_insert(start);
        *e = (*e).min(start);
    }
}

/// Decides whether `beta` is a sum of squares of integral elements.
///
/// Without a term cap the answer is exact: every representation uses only
/// dominated squares, and each step lowers the trace by at least one.
pub fn decompose_sos(beta: &FieldElement, cfg: SearchConfig) -> Result<SosOutcome, EngineError> {
    decompose_sos_observed(beta, cfg, None)
}

/// [`decompose_sos`], calling `observer` on every remainder the search visits.
pub fn decompose_sos_observed(
    beta: &FieldElement,
    cfg: SearchConfig,
    observer: Option<&mut dyn FnMut(&FieldElement)>,
) -> Result<SosOutcome, EngineError> {
    cfg.validate()?;
    check_integral(beta)?;
    if beta.is_zero() {
        return Ok(SosOutcome::Certificate(SosCertificate {
            target: beta.clone(),
            parts: Vec::new(),
        }));
    }
    let not_represented = |candidates, nodes| {
        SosOutcome::NotRepresented(NonRepReport {
            target: beta.clone(),
            candidates_enumerated: candidates,
            nodes_visited: nodes,
            max_terms_in_effect: cfg.max_terms,
            exhaustive: cfg.max_terms.is_none(),
        })
    };
    if !beta.is_totally_positive() {
        return Ok(not_represented(0, 0));
    }
    if let Some(tag) = cfg.subfield_restriction {
        if !in_subfield(beta.coords(), tag) {
            return Ok(not_represented(0, 0));
        }
    }
    let cands = dominated(beta, cfg.subfield_restriction);
    let squares: Vec<[i64; 4]> = cands.iter().map(|g| *g.square().coords()).collect();
    let traces = squares.iter().map(|s| s[0]).collect();
    let mut by_square = HashMap::new();
    for (i, s) in squares.iter().enumerate() {
        by_square.entry(*s).or_insert(i);
    }
    let mut search = Search {
        field: beta.field().clone(),
        count: cands.len(),
        squares,
        traces,
        by_square,
        failed: HashMap::new(),
        nodes: 0,
        observer,
    };
    let mut chosen = Vec::new();
    let left = cfg.max_terms.unwrap_or(UNLIMITED);
    if search.run(*beta.coords(), 0, left, &mut chosen) {
        let mut parts: Vec<FieldElement> = chosen.into_iter().map(|i| cands[i].clone()).collect();
        parts.sort_by(|x, y| x.canonical_cmp(y));
        Ok(SosOutcome::Certificate(SosCertificate {
            target: beta.clone(),
            parts,
        }))
    } else {
        let nodes = search.nodes;
        Ok(not_represented(cands.len(), nodes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyFailure {
    FieldMismatch,
    NotIntegral,
    ZeroPart,
    SumMismatch,
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerifyFailure::FieldMismatch => "field-mismatch",
            VerifyFailure::NotIntegral => "not-integral",
            VerifyFailure::ZeroPart => "zero-part",
            VerifyFailure::SumMismatch => "sum-mismatch",
        };
        f.write_str(s)
    }
}

/// Re-sums the certificate in rational arithmetic.
pub fn check_certificate(c: &SosCertificate) -> Result<(), VerifyFailure> {
    let field = c.target.field();
    let mut sum = RationalElement::zero(field);
    for p in &c.parts {
        if p.field() != field {
            return Err(VerifyFailure::FieldMismatch);
        }
        if !p.is_integral() {
            return Err(VerifyFailure::NotIntegral);
        }
        if p.coords().iter().all(|&x| x == 0) {
            return Err(VerifyFailure::ZeroPart);
        }
        let q = RationalElement::from(p);
        sum = &sum + &(&q * &q);
    }
    let diff = &sum - &RationalElement::from(&c.target);
    if diff.coords().iter().all(BigRational::is_zero) {
        Ok(())
    } else {
        Err(VerifyFailure::SumMismatch)
    }
}

pub fn verify_certificate(c: &SosCertificate) -> bool {
    check_certificate(c).is_ok()
}

#[derive(Serialize)]
struct FieldRef {
    m: i64,
    n: i64,
}

impl Serialize for SosCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let f = self.target.field();
        let mut st = serializer.serialize_struct("SosCertificate", 6)?;
        st.serialize_field("verdict", "sum_of_squares")?;
        st.serialize_field("field", &FieldRef { m: f.m(), n: f.n() })?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("parts", &self.parts)?;
        st.serialize_field("target_display", &self.target.reduced_string())?;
        let shown: Vec<String> = self.parts.iter().map(FieldElement::reduced_string).collect();
        st.serialize_field("parts_display", &shown)?;
        st.end()
    }
}

impl Serialize for NonRepReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let f = self.target.field();
        let mut st = serializer.serialize_struct("NonRepReport", 8)?;
        st.serialize_field("verdict", "not_sum_of_squares")?;
        st.serialize_field("field", &FieldRef { m: f.m(), n: f.n() })?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("target_display", &self.target.reduced_string())?;
        st.serialize_field("candidates", &self.candidates_enumerated.to_string())?;
        st.serialize_field("nodes", &self.nodes_visited.to_string())?;
        st.serialize_field("max_terms", &self.max_terms_in_effect)?;
        st.serialize_field("exhaustive", &self.exhaustive)?;
        st.end()
    }
}

impl Serialize for SosOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SosOutcome::Certificate(c) => c.serialize(serializer),
            SosOutcome::NotRepresented(r) => r.serialize(serializer),
        }
    }
}
