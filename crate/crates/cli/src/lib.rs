//! Command-line workflows over `biquad-core`.
//!
//! Every command prints one JSON document (or CSV for `scan`) and exits with
//! 0 when the claim checked by the command holds, 1 when it is refuted or no
//! decomposition exists, and 2 on invalid input.

use std::io::Write;
use std::time::Instant;

use biquad_core::atlas::{
    interval, l_family, lemma_oracle, make_witness, nonrep_sufficient, theorem1_check, verify_witness,
    IntervalFamily, IntervalKind, LemmaKind, TupleOracleReport, WitnessForm,
};
use biquad_core::decomp::{
    diagonal_form, find_product_decomposition, identity_check, product_factorizations, six_square_compose,
    six_square_compose_int, theorem2_bound, DiagonalFormCert, ProductClass, SixSquareOutcome,
};
use biquad_core::field::set_start_precision;
use biquad_core::sos::{check_certificate, decompose_sos, enumerate_dominated_squares, NonRepReport, SearchConfig, SosOutcome};
use biquad_core::{make_field, DecompError, Field, FieldElement, Radical};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "biquad", version, about = "Sums of squares in real biquadratic fields")]
pub struct Cli {
    /// Include elapsed_ms in the output.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Case label, basis and bounds of Q(sqrt m, sqrt n).
    FieldInfo { m: i64, n: i64 },
    /// Decide whether an element is a sum of squares of integers.
    CheckSos {
        #[arg(long, value_parser = parse_pair)]
        field: (i64, i64),
        element: String,
        #[arg(long)]
        max_terms: Option<u32>,
    },
    /// Build a witness element and test s0 times it.
    Witness {
        #[arg(long, value_parser = parse_pair)]
        field: (i64, i64),
        #[arg(long)]
        s0: u64,
        #[arg(long, value_enum, default_value = "m")]
        radical: RadicalArg,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
    },
    /// Interval families with exact endpoints.
    Intervals {
        #[arg(long)]
        family: String,
        #[arg(long)]
        s0: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Also evaluate the L-family memberships for this field.
        #[arg(long, value_parser = parse_pair)]
        field: Option<(i64, i64)>,
    },
    /// Re-run the three table elements.
    VerifyTable,
    /// Factor an element into two quadratic-subfield factors.
    DecomposeProduct {
        #[arg(long, value_parser = parse_pair)]
        field: (i64, i64),
        element: String,
    },
    /// s * alpha as a difference of sums of squares.
    DiagonalForm {
        #[arg(long, value_parser = parse_pair)]
        field: (i64, i64),
        #[arg(long)]
        s: u64,
        element: String,
    },
    /// Compose two sums of five squares, or audit the composition identity.
    SixSquares {
        /// Five comma-separated integers, or five ';'-separated elements with --field.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, value_parser = parse_pair)]
        field: Option<(i64, i64)>,
    },
    /// Brute-force minimum of a tuple inequality.
    LemmaOracle {
        #[arg(long, value_enum)]
        lemma: LemmaArg,
        #[arg(long)]
        s0: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        d: String,
    },
    /// Sufficient conditions and witnesses over a range of fields, as CSV.
    Scan {
        #[arg(long, value_parser = parse_range)]
        m: (i64, i64),
        #[arg(long, value_parser = parse_range)]
        n: (i64, i64),
        #[arg(long)]
        s0: u64,
        #[arg(long, value_enum, default_value = "sufficient")]
        mode: ScanMode,
        #[arg(long, default_value_t = 100_000)]
        max_pairs: u64,
        /// Dominated-square count above which witness checks are skipped.
        #[arg(long, default_value_t = 20_000)]
        cost_ceiling: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalArg {
    M,
    N,
    R,
}

impl From<RadicalArg> for Radical {
    fn from(r: RadicalArg) -> Radical {
        match r {
            RadicalArg::M => Radical::M,
            RadicalArg::N => Radical::N,
            RadicalArg::R => Radical::R,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Floor,
    Half,
    HalfPrinted,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaArg {
    Lemma1,
    Lemma1Quarter,
    Lemma2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Sufficient,
    Witness,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected m,n but got {s:?}"))?;
    Ok((
        a.trim().parse().map_err(|e| format!("{a}: {e}"))?,
        b.trim().parse().map_err(|e| format!("{b}: {e}"))?,
    ))
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once(','))
        .ok_or_else(|| format!("expected lo..hi but got {s:?}"))?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// The shared JSON envelope.
#[derive(Debug, Clone, Serialize)]
pub struct CommandResult {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub outcome: Value,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Output of one command: printable payload plus exit code.
pub struct Output {
    pub code: i32,
    pub text: String,
}

/// Input errors, mapped to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = Result<T, InputError>;

fn field_of((m, n): (i64, i64)) -> Res<Field> {
    Ok(make_field(m, n)?)
}

fn element(field: &Field, text: &str) -> Res<FieldElement> {
    Ok(FieldElement::parse(field, text)?)
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

// ---------------------------------------------------------------------------
// independent checks

/// Re-derives a non-representation report from scratch: the target must be
/// integral and totally positive and the dominated-square count must match.
pub fn check_report(r: &NonRepReport) -> bool {
    if !r.target.is_integral() || !r.target.is_totally_positive() {
        return false;
    }
    enumerate_dominated_squares(&r.target).is_ok_and(|d| d.len() == r.candidates_enumerated)
}

pub fn check_outcome(o: &SosOutcome) -> bool {
    match o {
        SosOutcome::Certificate(c) => check_certificate(c).is_ok(),
        SosOutcome::NotRepresented(r) => check_report(r),
    }
}

/// Recomputes the tuple value and the comparison.
pub fn check_oracle(r: &TupleOracleReport) -> bool {
    let w = match r.which {
        LemmaKind::Lemma1Quarter => &r.d / BigRational::from_integer(4.into()),
        _ => r.d.clone(),
    };
    let mut total = BigRational::from_integer(0.into());
    let mut weight = 0u64;
    for &(a, b) in &r.witness_tuple {
        if r.which == LemmaKind::Lemma2 && (a + b) % 2 == 1 {
            return false;
        }
        total += BigRational::from_integer((a * a).into()) + &w * BigRational::from_integer((b * b).into());
        weight += a * b;
    }
    weight == r.s0 && total == r.min_found && r.holds == (r.min_found >= r.bound)
}

fn check_family(f: &IntervalFamily) -> bool {
    f.pieces
        .iter()
        .all(|p| p.lo.cmp_bound(&p.hi) != std::cmp::Ordering::Greater && !p.lo.infinite)
}

// ---------------------------------------------------------------------------
// table

pub const TABLE: [((i64, i64), &str); 3] = [
    ((66, 31), "61 + sqrt(31) + sqrt(66) + sqrt(2046)"),
    ((71, 37), "(129 + sqrt(37))/2 + sqrt(71) + sqrt(2627)"),
    ((85, 89), "(109 + sqrt(85) + sqrt(89) + sqrt(7565))/2"),
];

/// One table row: the printed element and, for comparison, its double.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub field: Field,
    pub element: FieldElement,
    pub integral: bool,
    pub totally_positive: bool,
    pub outcome: SosOutcome,
    pub doubled: SosOutcome,
}

impl TableRow {
    /// The row's claim: not a sum of squares.
    pub fn matches_claim(&self) -> bool {
        matches!(&self.outcome, SosOutcome::NotRepresented(r) if r.exhaustive)
    }

    pub fn verified(&self) -> bool {
        self.integral && self.totally_positive && check_outcome(&self.outcome) && check_outcome(&self.doubled)
    }

    pub fn to_result(&self, elapsed_ms: Option<u64>) -> CommandResult {
        CommandResult {
            schema: SCHEMA,
            command: "verify-table".into(),
            inputs: json!({ "field": [self.field.m(), self.field.n()], "element": self.element.reduced_string() }),
            outcome: json!({
                "integral": self.integral,
                "totally_positive": self.totally_positive,
                "claim": "not_sum_of_squares",
                "matches_claim": self.matches_claim(),
                "discrepancy": !self.matches_claim(),
                "result": to_json(&self.outcome),
                "doubled": to_json(&self.doubled),
            }),
            verified: self.verified(),
            elapsed_ms,
        }
    }
}

pub fn verify_table_row(i: usize) -> TableRow {
    let ((m, n), text) = TABLE[i];
    let field = make_field(m, n).expect("table fields are valid");
    let element = FieldElement::parse(&field, text).expect("table elements parse");
    let integral = element.is_integral();
    let totally_positive = element.is_totally_positive();
    let outcome = decompose_sos(&element, SearchConfig::uncapped()).expect("integral and totally positive");
    let doubled = decompose_sos(&element.scale(2), SearchConfig::uncapped()).expect("integral and totally positive");
    TableRow {
        field,
        element,
        integral,
        totally_positive,
        outcome,
        doubled,
    }
}

pub fn verify_table() -> Vec<TableRow> {
    (0..TABLE.len()).map(verify_table_row).collect()
}

// ---------------------------------------------------------------------------
// scan

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub m: i64,
    pub n: i64,
    pub r: i64,
    pub case: String,
    pub s0: u64,
    pub sufficient: bool,
    pub witness: String,
    pub verdict: String,
}

fn is_square_free(x: i64) -> bool {
    x > 1 && (2..).take_while(|p| p * p <= x).all(|p| x % (p * p) != 0)
}

pub fn scan(
    m_range: (i64, i64),
    n_range: (i64, i64),
    s0: u64,
    mode: ScanMode,
    max_pairs: u64,
    cost_ceiling: usize,
) -> Res<Vec<ScanRow>> {
    let pairs = (m_range.1 - m_range.0 + 1) as u64 * (n_range.1 - n_range.0 + 1) as u64;
    if pairs > max_pairs {
        return Err(InputError(format!("RangeTooLarge: {pairs} pairs exceed the ceiling {max_pairs}")));
    }
    if s0 == 0 {
        return Err(InputError("s0 must be positive".into()));
    }
    let mut rows = Vec::new();
    for m in m_range.0..=m_range.1 {
        for n in n_range.0..=n_range.1 {
            if m == n || !is_square_free(m) || !is_square_free(n) {
                continue;
            }
            let Ok(field) = make_field(m, n) else { continue };
            let suff = nonrep_sufficient(&field, s0);
            let (mut witness, mut verdict) = (String::new(), String::new());
            if mode == ScanMode::Witness {
                let rad = field.roles()[0];
                let form = WitnessForm::for_radicand(field.radicand(rad));
                match make_witness(&field, form, rad, 1) {
                    Ok(w) => {
                        witness = w.reduced_string();
                        let target = w.scale(s0 as i64);
                        let cost = enumerate_dominated_squares(&target).map(|d| d.len()).unwrap_or(usize::MAX);
                        verdict = if cost > cost_ceiling {
                            "skipped".into()
                        } else {
                            match verify_witness(&field, s0, &w)? {
                                SosOutcome::Certificate(_) => "sum_of_squares".into(),
                                SosOutcome::NotRepresented(_) => "not_sum_of_squares".into(),
                            }
                        };
                    }
                    Err(e) => verdict = format!("error: {e}"),
                }
            }
            rows.push(ScanRow {
                m,
                n,
                r: field.r(),
                case: format!("{:?}", field.case_label()),
                s0,
                sufficient: suff.sufficient,
                witness,
                verdict,
            });
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["m", "n", "r", "case", "s0", "sufficient", "witness", "verdict"])
            .expect("in-memory write");
    }
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

// ---------------------------------------------------------------------------
// dispatch

fn parse_elements(field: &Field, text: &str) -> Res<[FieldElement; 5]> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 5 {
        return Err(InputError(format!("expected five ';'-separated elements, got {}", parts.len())));
    }
    let v: Vec<FieldElement> = parts.iter().map(|p| element(field, p)).collect::<Res<_>>()?;
    Ok(v.try_into().expect("five entries"))
}

fn parse_ints(text: &str) -> Res<[i64; 5]> {
    let v: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(InputError::from))
        .collect::<Res<_>>()?;
    v.try_into()
        .map_err(|v: Vec<i64>| InputError(format!("expected five integers, got {}", v.len())))
}

fn result(command: &str, inputs: Value, outcome: Value, verified: bool) -> CommandResult {
    CommandResult {
        schema: SCHEMA,
        command: command.into(),
        inputs,
        outcome,
        verified,
        elapsed_ms: None,
    }
}

fn outcome_code(o: &SosOutcome) -> i32 {
    i32::from(!o.is_representation())
}

/// Runs one parsed command, returning the results and the exit code.
pub fn execute(cmd: &Command) -> Res<(Vec<CommandResult>, i32)> {
    let one = |r: CommandResult, code: i32| Ok((vec![r], code));
    match cmd {
        Command::FieldInfo { m, n } => {
            let k = field_of((*m, *n))?;
            let basis: Vec<String> = k
                .integral_basis()
                .iter()
                .map(|c| FieldElement::new(&k, *c).reduced_string())
                .collect();
            let (p, q, t) = k.ordered_triple();
            let g = k.g();
            let verified = k.r() * g * g == k.m() * k.n()
                && k.integral_basis().iter().all(|c| FieldElement::new(&k, *c).is_integral());
            let outcome = json!({
                "field": to_json(&k),
                "ordered_triple": [p, q, t],
                "integral_basis": basis,
                "theorem2_bound": theorem2_bound(&k).to_string(),
            });
            one(result("field-info", json!({ "m": m, "n": n }), outcome, verified), 0)
        }
        Command::CheckSos { field, element: text, max_terms } => {
            let k = field_of(*field)?;
            let e = element(&k, text)?;
            let cfg = match max_terms {
                Some(t) => SearchConfig::capped(*t),
                None => SearchConfig::uncapped(),
            };
            let out = decompose_sos(&e, cfg)?;
            let inputs = json!({ "field": [field.0, field.1], "element": text, "max_terms": max_terms });
            one(result("check-sos", inputs, to_json(&out), check_outcome(&out)), outcome_code(&out))
        }
        Command::Witness { field, s0, radical, k, form } => {
            let f = field_of(*field)?;
            let rad = Radical::from(*radical);
            let form = match form {
                Some(FormArg::Floor) => WitnessForm::Floor,
                Some(FormArg::Half) => WitnessForm::HalfInteger,
                Some(FormArg::HalfPrinted) => WitnessForm::HalfIntegerPrinted,
                None => WitnessForm::for_radicand(f.radicand(rad)),
            };
            let w = make_witness(&f, form, rad, *k)?;
            let out = verify_witness(&f, *s0, &w)?;
            let inputs = json!({ "field": [field.0, field.1], "s0": s0, "radical": format!("{rad:?}"), "k": k });
            let outcome = json!({
                "witness": w.reduced_string(),
                "witness_coords": to_json(&w),
                "sufficient": to_json(&nonrep_sufficient(&f, *s0)),
                "result": to_json(&out),
            });
            let verified = w.is_integral() && w.is_totally_positive() && check_outcome(&out);
            one(result("witness", inputs, outcome, verified), 1 - outcome_code(&out))
        }
        Command::Intervals { family, s0, l, k, field } => {
            let kind: IntervalKind = family.parse()?;
            let fam = match kind {
                IntervalKind::L1 | IntervalKind::L2 | IntervalKind::L3 | IntervalKind::L4 => l_family(kind, *s0)?,
                _ => interval(kind, *s0, *l, *k)?,
            };
            let mut outcome = json!({ "family": to_json(&fam) });
            if let Some(pair) = field {
                let f = field_of(*pair)?;
                outcome["theorem1"] = to_json(&theorem1_check(&f, *s0)?);
            }
            let inputs = json!({ "family": family, "s0": s0, "l": l, "k": k });
            one(result("intervals", inputs, outcome, check_family(&fam)), 0)
        }
        Command::VerifyTable => {
            let rows = verify_table();
            let code = i32::from(!rows.iter().all(TableRow::matches_claim));
            Ok((rows.iter().map(|r| r.to_result(None)).collect(), code))
        }
        Command::DecomposeProduct { field, element: text } => {
            let k = field_of(*field)?;
            let e = element(&k, text)?;
            let found = match find_product_decomposition(&e) {
                Ok(d) => d,
                Err(DecompError::NotTotallyPositive(_)) => product_factorizations(&e)?,
                Err(err) => return Err(err.into()),
            };
            let class = match found.first() {
                None => ProductClass::NotAProduct,
                Some(d) if d.degenerate => ProductClass::Degenerate,
                Some(d) if d.integral => ProductClass::Integral,
                Some(_) => ProductClass::RationalOnly,
            };
            let criterion = biquad_core::decomp::quartic_criterion(&e)?;
            let outcome = json!({
                "class": to_json(&class),
                "totally_positive": e.is_totally_positive(),
                "decompositions": to_json(&found),
                "criterion": to_json(&criterion),
            });
            let verified = found.iter().all(|d| d.verify());
            let inputs = json!({ "field": [field.0, field.1], "element": text });
            let code = i32::from(!matches!(class, ProductClass::Integral | ProductClass::Degenerate));
            one(result("decompose-product", inputs, outcome, verified), code)
        }
        Command::DiagonalForm { field, s, element: text } => {
            let k = field_of(*field)?;
            let e = element(&k, text)?;
            let inputs = json!({ "field": [field.0, field.1], "s": s, "element": text });
            let bound = theorem2_bound(&k);
            match diagonal_form(&e, *s) {
                Ok(cert) => {
                    let outcome = json!({
                        "bound": bound.to_string(),
                        "meets_bound": BigRational::from_integer((*s).into()) >= bound,
                        "certificate": to_json(&cert),
                    });
                    one(result("diagonal-form", inputs, outcome, DiagonalFormCert::verify(&cert)), 0)
                }
                Err(DecompError::PartDecompositionFailed { part, value }) => {
                    let outcome = json!({ "bound": bound.to_string(), "failed_part": part, "value": value });
                    one(result("diagonal-form", inputs, outcome, false), 1)
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::SixSquares { x, y, field } => match (x, y) {
            (None, None) => {
                let rep = identity_check();
                let at = biquad_core::decomp::evaluate_identity(&[0, 1, 0, 0, 1], &[0, 0, 1, 1, 0]);
                let verified = rep
                    .minimal_counterexample
                    .as_ref()
                    .is_none_or(|c| biquad_core::decomp::evaluate_identity(&c.x, &c.y) == *c && c.lhs != c.rhs);
                let outcome = json!({ "identity": to_json(&rep), "documented_point": to_json(&at) });
                one(result("six-squares", json!({}), outcome, verified), i32::from(!rep.is_identity))
            }
            (Some(xs), Some(ys)) => {
                let inputs = json!({ "x": xs, "y": ys, "field": field.map(|(a, b)| [a, b]) });
                match field {
                    None => {
                        let cert = six_square_compose_int(parse_ints(xs)?, parse_ints(ys)?);
                        let verified = cert.verify();
                        one(result("six-squares", inputs, to_json(&cert), verified), 0)
                    }
                    Some(pair) => {
                        let k = field_of(*pair)?;
                        let out = six_square_compose(&parse_elements(&k, xs)?, &parse_elements(&k, ys)?)?;
                        let (verified, code) = match &out {
                            SixSquareOutcome::Certificate(c) => (c.verify(), 0),
                            SixSquareOutcome::Failed { .. } => (true, 1),
                        };
                        one(result("six-squares", inputs, to_json(&out), verified), code)
                    }
                }
            }
            _ => Err(InputError("--x and --y go together".into())),
        },
        Command::LemmaOracle { lemma, s0, l, d } => {
            let d: BigRational = d.trim().parse().map_err(|_| InputError(format!("not a rational: {d}")))?;
            let which = match lemma {
                LemmaArg::Lemma1 => LemmaKind::Lemma1,
                LemmaArg::Lemma1Quarter => LemmaKind::Lemma1Quarter,
                LemmaArg::Lemma2 => LemmaKind::Lemma2,
            };
            let rep = lemma_oracle(which, *s0, *l, &d)?;
            let inputs = json!({ "lemma": format!("{which:?}"), "s0": s0, "l": l, "D": d.to_string() });
            let code = i32::from(!rep.holds);
            one(result("lemma-oracle", inputs, to_json(&rep), check_oracle(&rep)), code)
        }
        Command::Scan { .. } => unreachable!("scan writes CSV"),
    }
}

fn apply_precision_env() -> Res<()> {
    if let Ok(v) = std::env::var("BIQUAD_PRECISION_BITS") {
        let bits: u32 = v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("BIQUAD_PRECISION_BITS must be an integer, got {v:?}")))?;
        set_start_precision(bits);
    }
    Ok(())
}

fn usage_error(msg: &str) -> Output {
    let doc = json!({ "schema": SCHEMA, "error": msg });
    Output {
        code: 2,
        text: serde_json::to_string_pretty(&doc).expect("json") + "\n",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_to_string<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Output { code: 0, text: e.to_string() };
            }
            return usage_error(&e.to_string());
        }
    };
    if let Err(e) = apply_precision_env() {
        return usage_error(&e.0);
    }
    let start = Instant::now();
    if let Command::Scan { m, n, s0, mode, max_pairs, cost_ceiling } = &cli.command {
        return match scan(*m, *n, *s0, *mode, *max_pairs, *cost_ceiling) {
            Ok(rows) => Output { code: 0, text: scan_csv(&rows) },
            Err(e) => usage_error(&e.0),
        };
    }
    match execute(&cli.command) {
        Ok((mut results, code)) => {
            let elapsed = start.elapsed().as_millis() as u64;
            if cli.timings {
                for r in &mut results {
                    r.elapsed_ms = Some(elapsed);
                }
            }
            let doc = if results.len() == 1 {
                to_json(&results[0])
            } else {
                to_json(&results)
            };
            Output {
                code,
                text: serde_json::to_string_pretty(&doc).expect("json") + "\n",
            }
        }
        Err(e) => usage_error(&e.0),
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let out = run_to_string(argv);
    let stream: &mut dyn Write = if out.code == 2 { &mut std::io::stderr() } else { &mut std::io::stdout() };
    let _ = stream.write_all(out.text.as_bytes());
    out.code
}
