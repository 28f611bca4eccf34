//! End-to-end acceptance checks. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr so it shows up even when output is captured.

use std::io::Write;

use biquad_cli::{check_report, verify_table, TABLE};
use biquad_core::atlas::{
    interior_samples, interval, l_family, lemma_oracle, make_witness, theorem1_check, verify_witness,
    IntervalKind, LemmaKind, SurdBound, WitnessForm,
};
use biquad_core::decomp::{
    classify_product, diagonal_form, evaluate_identity, find_product_decomposition, five_parts,
    identity_check, quartic_criterion, six_square_compose, six_square_compose_int, sos_in_subfield,
    theorem2_bound, ProductClass, SixSquareOutcome,
};
use biquad_core::sos::{decompose_sos, SearchConfig, SosOutcome};
use biquad_core::{make_field, EmbeddingSigns, Field, FieldElement, Radical, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

fn report(n: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {verdict} {detail}");
}

fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Independent arithmetic on `x0 + x1 sqrt m + x2 sqrt n + x3 sqrt r` with
/// rational coordinates.
#[derive(Clone, PartialEq, Debug)]
struct Ex {
    m: i64,
    n: i64,
    r: i64,
    c: [Q; 4],
}

impl Ex {
    fn of(e: &FieldElement) -> Ex {
        let k = e.field();
        Ex {
            m: k.m(),
            n: k.n(),
            r: k.r(),
            c: e.coords().map(|v| Q::new(BigInt::from(v), BigInt::from(4))),
        }
    }

    fn constant(&self, v: Q) -> Ex {
        let mut c: [Q; 4] = std::array::from_fn(|_| Q::zero());
        c[0] = v;
        Ex { c, ..self.clone() }
    }

    fn add(&self, o: &Ex) -> Ex {
        Ex {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
            ..self.clone()
        }
    }

    fn sub(&self, o: &Ex) -> Ex {
        Ex {
            c: std::array::from_fn(|i| &self.c[i] - &o.c[i]),
            ..self.clone()
        }
    }

    fn mul(&self, o: &Ex) -> Ex {
        let g = gcd(self.m, self.n);
        let (m, n, r) = (qi(self.m), qi(self.n), qi(self.r));
        let (a, b) = (&self.c, &o.c);
        // sqrt m sqrt n = g sqrt r, sqrt m sqrt r = (m/g) sqrt n, sqrt n sqrt r = (n/g) sqrt m
        let (gq, mg, ng) = (qi(g), qi(self.m / g), qi(self.n / g));
        let c0 = &a[0] * &b[0] + &m * &a[1] * &b[1] + &n * &a[2] * &b[2] + &r * &a[3] * &b[3];
        let c1 = &a[0] * &b[1] + &a[1] * &b[0] + &ng * (&a[2] * &b[3] + &a[3] * &b[2]);
        let c2 = &a[0] * &b[2] + &a[2] * &b[0] + &mg * (&a[1] * &b[3] + &a[3] * &b[1]);
        let c3 = &a[0] * &b[3] + &a[3] * &b[0] + &gq * (&a[1] * &b[2] + &a[2] * &b[1]);
        Ex {
            c: [c0, c1, c2, c3],
            ..self.clone()
        }
    }

    fn conj(&self, sm: i64, sn: i64) -> Ex {
        let f = [1, sm, sn, sm * sn];
        Ex {
            c: std::array::from_fn(|i| &self.c[i] * qi(f[i])),
            ..self.clone()
        }
    }

    fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

const CONJ: [(i64, i64); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

fn sum_squares(parts: &[FieldElement], zero: &Ex) -> Ex {
    parts.iter().fold(zero.clone(), |acc, p| {
        let e = Ex::of(p);
        acc.add(&e.mul(&e))
    })
}

/// Characteristic polynomial over the four conjugates, lowest degree first.
fn char_poly(x: &Ex) -> [Q; 5] {
    let one = x.constant(Q::one());
    let mut poly = vec![one];
    for &(sm, sn) in &CONJ {
        let root = x.conj(sm, sn);
        // multiply poly by (X - root)
        let mut next = vec![x.constant(Q::zero()); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&root));
        }
        poly = next;
    }
    std::array::from_fn(|i| {
        assert!(poly[i].is_rational());
        poly[i].c[0].clone()
    })
}

fn integral(e: &FieldElement) -> bool {
    char_poly(&Ex::of(e)).iter().all(|c| c.is_integer())
}

/// Sign of a conjugate from a 300-bit evaluation; `None` inside the error bound.
fn sign_300(e: &FieldElement, sm: i64, sn: i64) -> Option<Sign> {
    let bits = 300u32;
    let k = e.field();
    let rads = [k.m(), k.n(), k.r()];
    let mult = [sm, sn, sm * sn];
    let c = e.coords();
    let mut v = BigInt::from(c[0]) << bits;
    let mut err = BigInt::zero();
    for i in 1..4 {
        let root = (BigInt::from(rads[i - 1]) << (2 * bits)).sqrt();
        v += BigInt::from(c[i] * mult[i - 1]) * root;
        err += BigInt::from(c[i].abs());
    }
    if v.abs() <= err {
        None
    } else if v.is_positive() {
        Some(Sign::Positive)
    } else {
        Some(Sign::Negative)
    }
}

fn totally_positive(e: &FieldElement) -> bool {
    CONJ.iter().all(|&(sm, sn)| sign_300(e, sm, sn) == Some(Sign::Positive))
}

/// `parts` squared and summed equals `target`, recomputed independently.
fn certifies(target: &FieldElement, parts: &[FieldElement]) -> bool {
    let t = Ex::of(target);
    parts.iter().all(integral) && sum_squares(parts, &t.constant(Q::zero())) == t
}

fn random_combination(k: &Field, rng: &mut ChaCha8Rng, bound: i64) -> FieldElement {
    let basis = k.integral_basis();
    let mut c = [0i64; 4];
    for b in basis {
        let t = rng.gen_range(-bound..=bound);
        for i in 0..4 {
            c[i] += t * b[i];
        }
    }
    FieldElement::new(k, c)
}

#[test]
fn criterion_1_table_rows_are_not_sums_of_squares() {
    let rows = verify_table();
    let mut ok = rows.len() == TABLE.len();
    let mut notes = Vec::new();
    for (row, &((m, n), text)) in rows.iter().zip(&TABLE) {
        let k = make_field(m, n).unwrap();
        let alpha = FieldElement::parse(&k, text).unwrap();
        let shape = row.element == alpha && integral(&alpha) && totally_positive(&alpha);
        let verdict = match &row.outcome {
            SosOutcome::NotRepresented(r) => {
                notes.push(format!("({m},{n}) not a sum of squares, {} dominated", r.candidates_enumerated));
                r.exhaustive && r.max_terms_in_effect.is_none() && check_report(r)
            }
            SosOutcome::Certificate(c) => {
                notes.push(format!("({m},{n}) DISCREPANCY: decomposed into {} squares", c.parts.len()));
                certifies(&alpha, &c.parts)
            }
        };
        ok &= shape && verdict && row.integral && row.totally_positive && row.verified();
    }
    report(1, ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_2_table_field_memberships() {
    let k = make_field(66, 31).unwrap();
    let check = theorem1_check(&k, 2).unwrap();
    let expected = [(66, IntervalKind::L1), (2046, IntervalKind::L1), (31, IntervalKind::L2)];
    let mut ok = check.holds && check.memberships.len() == 3;
    for &(d, kind) in &expected {
        let claimed = check.memberships.iter().any(|&(x, kk, inside)| x == d && kk == kind && inside);
        // numeric cross-check against the exact endpoints
        let fam = l_family(kind, 2).unwrap();
        let x = (d as f64).sqrt();
        let numeric = fam.pieces.iter().any(|p| {
            let lo = approx(&p.lo);
            let hi = approx(&p.hi);
            assert!((x - lo).abs() > 1e-9 && (x - hi).abs() > 1e-9);
            lo <= x && x <= hi
        });
        ok &= claimed && numeric && fam.contains_sqrt(d as u64);
    }
    report(2, ok, "sqrt(66), sqrt(2046) in L1(2); sqrt(31) in L2(2)");
    assert!(ok);
}

fn approx(b: &SurdBound) -> f64 {
    if b.infinite {
        return f64::INFINITY;
    }
    let f = |x: &Q| x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap();
    f(&b.p) + f(&b.q) * (b.c as f64).sqrt()
}

#[test]
fn criterion_3_witness_pipeline() {
    let k = make_field(66, 31).unwrap();
    let rad = Radical::ALL.into_iter().find(|&r| k.radicand(r) == 66).unwrap();
    let w = make_witness(&k, WitnessForm::Floor, rad, 1).unwrap();
    let expected = FieldElement::parse(&k, "9 + sqrt(66)").unwrap();
    let out = verify_witness(&k, 2, &w).unwrap();
    let ok = w == expected
        && integral(&w)
        && totally_positive(&w)
        && match &out {
            SosOutcome::NotRepresented(r) => r.exhaustive && check_report(r),
            SosOutcome::Certificate(_) => false,
        };
    report(3, ok, &format!("2({}) exhaustively not a sum of squares", w.reduced_string()));
    assert!(ok);
}

/// Minimum of `sum a^2 + w b^2` over multisets of pairs `a, b >= 1` with
/// `sum a b = s`, by recursion over nonincreasing pairs.
fn brute_minimum(s: u64, w: &Q, parity: bool) -> Q {
    fn go(left: u64, max: (u64, u64), w: &Q, parity: bool) -> Option<Q> {
        if left == 0 {
            return Some(Q::zero());
        }
        let mut best: Option<Q> = None;
        for a in 1..=left {
            for b in 1..=left / a {
                if (a, b) > max || (parity && (a + b) % 2 == 1) {
                    continue;
                }
                if let Some(rest) = go(left - a * b, (a, b), w, parity) {
                    let v = rest + qi((a * a) as i64) + w * qi((b * b) as i64);
                    if best.as_ref().is_none_or(|x| v < *x) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }
    go(s, (u64::MAX, u64::MAX), w, parity).expect("a = b = 1 repeated")
}

#[test]
fn criterion_4_lemma_oracles() {
    let mut checked = 0;
    let mut violations: Vec<String> = Vec::new();
    let mut disagreements = 0;
    for s0 in 2..=6u64 {
        for l in 1..=3u64 {
            let lemmas = [
                (LemmaKind::Lemma1, interval(IntervalKind::H, s0, l, 1).unwrap()),
                (LemmaKind::Lemma1Quarter, interval(IntervalKind::H, 2 * s0, l, 1).unwrap()),
                (LemmaKind::Lemma2, interval(IntervalKind::HPrime, s0, l, 1).unwrap()),
            ];
            for (which, fam) in lemmas {
                let matched = (s0 + l) % 2 == 0;
                if which == LemmaKind::Lemma2 && l == 1 && !matched {
                    continue;
                }
                for piece in &fam.pieces {
                    for d in interior_samples(piece) {
                        let rep = lemma_oracle(which, s0, l, &d).unwrap();
                        let (s, lq) = (qi(s0 as i64), qi(l as i64));
                        let (w, bound, parity) = match which {
                            LemmaKind::Lemma1 => (d.clone(), &s * &s / &lq + &lq * &d, false),
                            LemmaKind::Lemma1Quarter => {
                                let w = &d / qi(4);
                                (w.clone(), &s * &s / &lq + &lq * &w, false)
                            }
                            LemmaKind::Lemma2 if matched => (d.clone(), &s * &s / &lq + &lq * &d, true),
                            LemmaKind::Lemma2 => {
                                let j = qi(l as i64 - 1);
                                (d.clone(), &s * &s / &j + &j * &d, true)
                            }
                        };
                        let min = brute_minimum(s0, &w, parity);
                        if rep.min_found != min || rep.bound != bound || !rep.in_interval || rep.holds != (min >= bound) {
                            disagreements += 1;
                        }
                        if min < bound {
                            violations.push(format!("{which:?} s0={s0} l={l} D={d}: {min} < {bound}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    let ok = violations.is_empty() && disagreements == 0;
    let first = violations.first().cloned().unwrap_or_default();
    report(
        4,
        ok,
        &format!(
            "{checked} samples, {} violations, {disagreements} oracle disagreements {first}",
            violations.len()
        ),
    );
    assert_eq!(disagreements, 0);
    assert!(violations.is_empty(), "{violations:#?}");
}

#[test]
fn criterion_5_engine_completeness() {
    let ks = [make_field(2, 3).unwrap(), make_field(2, 5).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut failures = Vec::new();
    for i in 0..100 {
        let k = &ks[i % 2];
        let terms = rng.gen_range(1..=6);
        let squares: Vec<FieldElement> = (0..terms)
            .map(|_| loop {
                let e = random_combination(k, &mut rng, 2);
                if !e.is_zero() {
                    break e;
                }
            })
            .collect();
        let beta = squares.iter().fold(FieldElement::zero(k), |acc, x| &acc + &x.square());
        assert!(certifies(&beta, &squares));
        match decompose_sos(&beta, SearchConfig::uncapped()).unwrap() {
            SosOutcome::Certificate(c) if c.target == beta && certifies(&beta, &c.parts) => {}
            _ => failures.push(beta.reduced_string()),
        }
    }
    let ok = failures.is_empty();
    report(5, ok, &format!("100 random sums, {} failures", failures.len()));
    assert!(ok, "{failures:?}");
}

/// `floor(N^(1/4) * 2^bits)`.
fn fourth_root_floor(n: &BigInt, bits: u32) -> BigInt {
    (n << (4 * bits)).nth_root(4)
}

#[test]
fn criterion_6_arithmetic_suite() {
    let ks: Vec<Field> = [(2, 3), (2, 5), (3, 5), (6, 10), (66, 31), (71, 37), (85, 89), (5, 13)]
        .iter()
        .map(|&(m, n)| make_field(m, n).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut failures = 0;
    let norm = |x: &FieldElement| {
        let e = Ex::of(x);
        let p = CONJ.iter().fold(e.constant(Q::one()), |acc, &(a, b)| acc.mul(&e.conj(a, b)));
        assert!(p.is_rational());
        p.c[0].clone()
    };
    let bits = 200;
    let scale = BigInt::one() << (4 * bits);
    let mut holder = 0;
    for i in 0..1000 {
        let k = &ks[i % ks.len()];
        let x = random_combination(k, &mut rng, 40);
        let y = random_combination(k, &mut rng, 40);
        let ex = Ex::of(&x);
        failures += usize::from((&x * &y).norm() != norm(&x) * norm(&y) || x.norm() != norm(&x));
        failures += usize::from((&x + &y).trace() != x.trace() + y.trace() || qi(x.trace()) != &ex.c[0] * qi(4));
        // p(x) = 0 for the minimal polynomial
        let mp = x.min_poly();
        let val = mp
            .coeffs()
            .iter()
            .rev()
            .fold(ex.constant(Q::zero()), |acc, c| acc.mul(&ex).add(&ex.constant(c.clone())));
        failures += usize::from(val != ex.constant(Q::zero()));
        // Hoelder on a totally positive, non-proportional pair
        let shift = |e: &FieldElement| {
            let lift = e.approx_embeddings().iter().map(|v| -v).fold(0.0, f64::max).ceil() as i64 + 1;
            e + &FieldElement::from_int(k, lift)
        };
        let (px, py) = (shift(&x), shift(&y));
        if totally_positive(&px) && totally_positive(&py) {
            let (cx, cy) = (Ex::of(&px).c, Ex::of(&py).c);
            let proportional = (0..4).all(|a| (0..4).all(|b| &cx[a] * &cy[b] == &cx[b] * &cy[a]));
            if !proportional {
                let ux = fourth_root_floor(&norm(&px).to_integer(), bits) + 1;
                let uy = fourth_root_floor(&norm(&py).to_integer(), bits) + 1;
                let upper = Q::new(num_traits::pow(ux + uy, 4), scale.clone());
                failures += usize::from(norm(&(&px + &py)) <= upper);
                holder += 1;
            }
        }
    }
    let mut sign_failures = 0;
    let mut signs = 0;
    while signs < 10_000 {
        let k = &ks[signs % ks.len()];
        let bound = [3, 50, 5000, 1 << 40][rng.gen_range(0..4)];
        let x = random_combination(k, &mut rng, bound);
        if x.is_zero() {
            continue;
        }
        for (s, &(sm, sn)) in EmbeddingSigns::ALL.iter().zip(&CONJ) {
            let oracle = sign_300(&x, sm, sn).expect("300 bits separate these from zero");
            sign_failures += usize::from(x.sign_at_embedding(*s) != oracle);
        }
        signs += 1;
    }
    let ok = failures == 0 && sign_failures == 0 && holder >= 900;
    report(
        6,
        ok,
        &format!("1000 pairs ({holder} strict Hoelder checks), {failures} failures; 10000 signs, {sign_failures} mismatches"),
    );
    assert!(ok);
}

/// The six forms of the composition, transcribed term by term.
fn forms(x: &[i128; 5], y: &[i128; 5]) -> [i128; 6] {
    let [x1, x2, x3, x4, x5] = *x;
    let [y1, y2, y3, y4, y5] = *y;
    [
        x1 * y1 + x2 * y2 + x3 * y3 + x4 * y4 + x5 * y5,
        x1 * y2 - x2 * y1 + x3 * y5 - x5 * y3,
        x1 * y3 - x3 * y1 + x2 * y4 - x4 * y2,
        x1 * y4 - x4 * y1 + x2 * y5 - x5 * y2,
        x1 * y5 - x5 * y2 + x3 * y4 - x4 * y3,
        x3 * y2 - x2 * y3 + x4 * y5 - x5 * y4,
    ]
}

#[test]
fn criterion_7_six_square_audit() {
    let audit = identity_check();
    let (x, y) = ([0, 1, 0, 0, 1], [0, 0, 1, 1, 0]);
    let point = evaluate_identity(&x, &y);
    let (xi, yi) = (x.map(i128::from), y.map(i128::from));
    let lhs: i128 = xi.iter().map(|v| v * v).sum::<i128>() * yi.iter().map(|v| v * v).sum::<i128>();
    let rhs: i128 = forms(&xi, &yi).iter().map(|t| t * t).sum();
    let counterexample_ok = audit.minimal_counterexample.as_ref().is_some_and(|c| {
        let (cx, cy) = (c.x.map(i128::from), c.y.map(i128::from));
        let l: i128 = cx.iter().map(|v| v * v).sum::<i128>() * cy.iter().map(|v| v * v).sum::<i128>();
        let r: i128 = forms(&cx, &cy).iter().map(|t| t * t).sum();
        l == c.lhs as i128 && r == c.rhs as i128 && l != r
    });
    let mut ok = !audit.is_identity
        && counterexample_ok
        && (point.lhs, point.rhs) == (4, 6)
        && (lhs, rhs) == (4, 6);

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let x: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let y: [i64; 5] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        let c = six_square_compose_int(x, y);
        let product: i128 = x.iter().map(|&v| (v as i128).pow(2)).sum::<i128>()
            * y.iter().map(|&v| (v as i128).pow(2)).sum::<i128>();
        let six: i128 = c.six.iter().map(|&v| (v as i128).pow(2)).sum();
        ok &= c.six.len() <= 6 && six == product && c.verify();
    }

    // (2 + sqrt 2)(3 + sqrt 5) with s1 = s2 = 10
    let k = make_field(2, 5).unwrap();
    let b1 = FieldElement::parse(&k, "20 + 10*sqrt(2)").unwrap();
    let b2 = FieldElement::parse(&k, "30 + 10*sqrt(5)").unwrap();
    let p1 = five_parts(&sos_in_subfield(&b1, 5).unwrap().expect("five squares"));
    let p2 = five_parts(&sos_in_subfield(&b2, 5).unwrap().expect("five squares"));
    let desk = match (p1, p2) {
        (Some(p1), Some(p2)) => match six_square_compose(&p1, &p2).unwrap() {
            SixSquareOutcome::Certificate(c) => {
                let alpha = FieldElement::parse(&k, "6 + 3*sqrt(2) + 2*sqrt(5) + sqrt(10)").unwrap();
                let target = alpha.scale(100);
                c.product == target && c.six.len() <= 6 && certifies(&target, &c.six)
            }
            SixSquareOutcome::Failed { .. } => false,
        },
        _ => false,
    };
    ok &= desk;
    report(
        7,
        ok,
        &format!(
            "not an identity; (0,1,0,0,1)x(0,0,1,1,0) gives {lhs} vs {rhs}; 20 products and 100(2+sqrt2)(3+sqrt5) certified: {desk}"
        ),
    );
    assert!(ok);
}

fn random_positive_integral(k: &Field, rng: &mut ChaCha8Rng, max_trace: i64) -> FieldElement {
    loop {
        let c = [
            rng.gen_range(1..=max_trace),
            rng.gen_range(-max_trace..=max_trace),
            rng.gen_range(-max_trace..=max_trace),
            rng.gen_range(-max_trace..=max_trace),
        ];
        let e = FieldElement::new(k, c);
        if integral(&e) && totally_positive(&e) {
            return e;
        }
    }
}

#[test]
fn criterion_8_diagonal_forms() {
    let k = make_field(2, 5).unwrap();
    let s = theorem2_bound(&k);
    let mut ok = s == qi(10);
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut failures = Vec::new();
    for _ in 0..25 {
        let alpha = random_positive_integral(&k, &mut rng, 60);
        match diagonal_form(&alpha, 10) {
            Ok(cert) => {
                let zero = Ex::of(&alpha).constant(Q::zero());
                let plus = sum_squares(&cert.plus_squares, &zero);
                let minus: i64 = cert.minus_squares.iter().map(|&v| (v * v) as i64).sum();
                let target = Ex::of(&alpha.scale(10));
                let exact = cert.plus_squares.iter().all(integral) && plus.sub(&zero.constant(qi(minus))) == target;
                if !(exact && cert.verify()) {
                    failures.push(alpha.reduced_string());
                }
            }
            Err(e) => failures.push(format!("{}: {e}", alpha.reduced_string())),
        }
    }
    ok &= failures.is_empty();
    report(8, ok, &format!("s = {s}, 25 elements, {} failures", failures.len()));
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_9_product_roundtrip() {
    let fields = [make_field(2, 5).unwrap(), make_field(2, 3).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = Vec::new();
    let mut unexplained = 0;
    for n in 0..200 {
        let k = &fields[n % 2];
        let (i, j) = [(1, 2), (1, 3), (2, 3)][rng.gen_range(0..3)];
        let mut factor = |idx: usize| loop {
            let mut c = [0i64; 4];
            c[0] = rng.gen_range(1..=40);
            c[idx] = rng.gen_range(-20..=20);
            let e = FieldElement::new(k, c);
            if c[idx] != 0 && integral(&e) && totally_positive(&e) {
                break e;
            }
        };
        let (a, b) = (factor(i), factor(j));
        let alpha = &a * &b;
        let ds = find_product_decomposition(&alpha).unwrap();
        let recovered = ds.first().is_some_and(|d| {
            let f1 = Ex::of(&alpha).constant(Q::zero()).add(&rational_ex(&alpha, &d.factor1.to_element(k).coords_q()));
            let f2 = Ex::of(&alpha).constant(Q::zero()).add(&rational_ex(&alpha, &d.factor2.to_element(k).coords_q()));
            d.integral && f1.mul(&f2) == Ex::of(&alpha)
        });
        let rep = quartic_criterion(&alpha).unwrap();
        unexplained += rep.unexplained();
        if !recovered || rep.matches.is_empty() {
            failures.push(format!("({}) ({})", a.reduced_string(), b.reduced_string()));
        }
    }
    let k = &fields[0];
    let odd = FieldElement::parse(k, "2 + sqrt(2) + sqrt(5) + sqrt(10)").unwrap();
    let class = classify_product(&odd).unwrap();
    let ok = failures.is_empty() && unexplained == 0 && class == ProductClass::RationalOnly;
    report(
        9,
        ok,
        &format!("200 products, {} failures, {unexplained} unexplained; 2+sqrt2+sqrt5+sqrt10 is {class:?}", failures.len()),
    );
    assert!(ok, "{failures:?}");
}

trait CoordsQ {
    fn coords_q(&self) -> [Q; 4];
}

impl CoordsQ for biquad_core::RationalElement {
    fn coords_q(&self) -> [Q; 4] {
        self.coords().clone()
    }
}

fn rational_ex(like: &FieldElement, c: &[Q; 4]) -> Ex {
    Ex {
        c: c.clone(),
        ..Ex::of(like)
    }
}
