//! Batch front end: parse form descriptions from a JSON document, run
//! invariant computations and deciders, and emit canonical machine-readable
//! reports.
//!
//! The wire format is a single JSON object:
//!
//! ```json
//! {
//!   "field":   {"kind": "Q"} | {"kind": "GF", "p": 3, "k": 2, "modulus": [1, 0, 1]},
//!   "algebra": {"kind": "split"}
//!            | {"kind": "quad_etale", "c": "2"}
//!            | {"kind": "quaternion", "a": "-1", "b": "-1"},
//!   "form":    {"type": "quadratic", "diag": ["1", "-1/2"]}
//!            | {"type": "quadratic2", "upper": [[1, 1], [0, 1]]}
//!            | {"type": "hermitian", "epsilon": 1, "gram": [[...]]}
//!            | {"type": "skew_hermitian", "epsilon": -1, "gram": [[...]]}
//!            | {"type": "pair", "gram": [[...]], "l": [[...]]},
//!   "form2":   optional second form for two-argument commands
//! }
//! ```
//!
//! Rationals are written as integers or exact strings ("3/7"). Elements of
//! GF(p^k) with k > 1 are arrays of k prime-field coefficients. Etale and
//! quaternion algebra entries are 2- and 4-element arrays of scalars.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::algebras::{AlgElem, AlgKind, AlgMat, InvAlgebra};
use crate::cohomology::{CohClass, Payload};
use crate::error::{Error, Result};
use crate::hermitian::HermForm;
use crate::oracle;
use crate::pairs::HermPair;
use crate::quadforms::{e_chain_bound, QuadForm, WittData};
use crate::scalars::{BaseField, FieldElem, Place};

#[derive(Clone, Debug, PartialEq)]
pub enum FormObject {
    Quadratic(QuadForm),
    Hermitian(HermForm),
    Pair(HermPair),
}

#[derive(Clone, Debug)]
pub struct ParsedInput {
    pub field: BaseField,
    pub algebra: InvAlgebra,
    pub form: Option<FormObject>,
    pub form2: Option<FormObject>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    IsHyperbolic,
    IsIsotropic,
    WittDecompose,
    TraceForm,
    Equivalent,
    RelativeE3,
    OracleCheck,
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Command> {
        Ok(match s {
            "invariants" => Command::Invariants,
            "is-hyperbolic" => Command::IsHyperbolic,
            "is-isotropic" => Command::IsIsotropic,
            "witt-decompose" => Command::WittDecompose,
            "trace-form" => Command::TraceForm,
            "equivalent" => Command::Equivalent,
            "relative-e3" => Command::RelativeE3,
            "oracle-check" => Command::OracleCheck,
            other => {
                return Err(Error::SchemaError(format!("unknown command `{other}`")));
            }
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Run the dual-route assertion layer (closed formulas vs trace forms).
    pub assert_layer: bool,
    /// Vector cap for oracle scans.
    pub oracle_bound: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            assert_layer: false,
            oracle_bound: oracle::DEFAULT_SEARCH_BOUND,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn schema_err(path: &str, msg: &str) -> Error {
    Error::SchemaError(format!("{path}: {msg}"))
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema_err(path, "expected an object"))
}

fn get<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| schema_err(path, &format!("missing field `{key}`")))
}

fn parse_bigint(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(schema_err(path, "non-integer number; use a string for exactness"))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| schema_err(path, "malformed integer string")),
        _ => Err(schema_err(path, "expected an integer")),
    }
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(_) => Ok(BigRational::from_integer(parse_bigint(v, path)?)),
        Value::String(s) => {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let num = BigInt::from_str(n.trim())
                    .map_err(|_| schema_err(path, "malformed numerator"))?;
                let den = BigInt::from_str(d.trim())
                    .map_err(|_| schema_err(path, "malformed denominator"))?;
                if den.is_zero() {
                    return Err(schema_err(path, "zero denominator"));
                }
                Ok(BigRational::new(num, den))
            } else {
                Ok(BigRational::from_integer(BigInt::from_str(s).map_err(
                    |_| schema_err(path, "malformed rational string"),
                )?))
            }
        }
        _ => Err(schema_err(path, "expected a rational (integer or string)")),
    }
}

fn parse_scalar(field: &BaseField, v: &Value, path: &str) -> Result<FieldElem> {
    match field {
        BaseField::Rationals => field
            .from_rational(parse_rational(v, path)?)
            .map_err(|e| schema_err(path, &e.to_string())),
        BaseField::Finite(ctx) => match v {
            Value::Array(items) => {
                if items.len() > ctx.degree() as usize {
                    return Err(schema_err(path, "too many coefficients"));
                }
                let mut coeffs = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    let n = parse_bigint(item, &format!("{path}[{i}]"))?;
                    let p = BigInt::from(ctx.characteristic());
                    let r = ((&n % &p) + &p) % &p;
                    coeffs.push(r.to_i64().unwrap());
                }
                field
                    .from_coeffs(&coeffs)
                    .map_err(|e| schema_err(path, &e.to_string()))
            }
            _ => {
                let n = parse_bigint(v, path)?;
                let p = BigInt::from(ctx.characteristic());
                let r = ((&n % &p) + &p) % &p;
                Ok(field.from_int(r.to_i64().unwrap()))
            }
        },
    }
}

fn parse_field(v: &Value) -> Result<BaseField> {
    let obj = as_object(v, "field")?;
    let kind = get(obj, "kind", "field")?
        .as_str()
        .ok_or_else(|| schema_err("field.kind", "expected a string"))?;
    match kind {
        "Q" => Ok(BaseField::rationals()),
        "GF" => {
            let p = parse_bigint(get(obj, "p", "field")?, "field.p")?
                .to_u64()
                .ok_or_else(|| schema_err("field.p", "characteristic out of range"))?;
            let k = parse_bigint(get(obj, "k", "field")?, "field.k")?
                .to_u32()
                .ok_or_else(|| schema_err("field.k", "degree out of range"))?;
            let modulus = match obj.get("modulus") {
                None => None,
                Some(Value::Array(items)) => {
                    let mut coeffs = Vec::with_capacity(items.len());
                    for (i, item) in items.iter().enumerate() {
                        coeffs.push(
                            parse_bigint(item, &format!("field.modulus[{i}]"))?
                                .to_i64()
                                .ok_or_else(|| {
                                    schema_err("field.modulus", "coefficient out of range")
                                })?,
                        );
                    }
                    Some(coeffs)
                }
                Some(_) => return Err(schema_err("field.modulus", "expected an array")),
            };
            BaseField::finite(p, k, modulus)
        }
        other => Err(schema_err("field.kind", &format!("unknown kind `{other}`"))),
    }
}

fn parse_algebra(field: &BaseField, v: Option<&Value>) -> Result<InvAlgebra> {
    let Some(v) = v else {
        return Ok(InvAlgebra::split(field.clone()));
    };
    let obj = as_object(v, "algebra")?;
    let kind = get(obj, "kind", "algebra")?
        .as_str()
        .ok_or_else(|| schema_err("algebra.kind", "expected a string"))?;
    match kind {
        "split" => Ok(InvAlgebra::split(field.clone())),
        "quad_etale" => {
            let c = parse_scalar(field, get(obj, "c", "algebra")?, "algebra.c")?;
            InvAlgebra::quad_etale(c)
        }
        "quaternion" => {
            let a = parse_scalar(field, get(obj, "a", "algebra")?, "algebra.a")?;
            let b = parse_scalar(field, get(obj, "b", "algebra")?, "algebra.b")?;
            InvAlgebra::quaternion(a, b)
        }
        other => Err(schema_err("algebra.kind", &format!("unknown kind `{other}`"))),
    }
}

fn parse_entry(alg: &InvAlgebra, v: &Value, path: &str) -> Result<AlgElem> {
    let field = alg.field();
    let want = alg.dim_over_base();
    match v {
        Value::Array(items) if want > 1 && items.len() == want => {
            let mut coords = Vec::with_capacity(want);
            for (i, item) in items.iter().enumerate() {
                coords.push(parse_scalar(field, item, &format!("{path}[{i}]"))?);
            }
            alg.from_coords(&coords)
        }
        Value::Array(_) if want > 1 => Err(schema_err(
            path,
            &format!("expected {want} coordinates for this algebra"),
        )),
        _ => Ok(alg.from_base(parse_scalar(field, v, path)?)),
    }
}

fn parse_matrix(alg: &InvAlgebra, v: &Value, path: &str) -> Result<AlgMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema_err(path, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| schema_err(&format!("{path}[{i}]"), "expected a row array"))?;
        if cells.len() != rows.len() {
            return Err(schema_err(path, "matrix must be square"));
        }
        let mut out_row = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            out_row.push(parse_entry(alg, cell, &format!("{path}[{i}][{j}]"))?);
        }
        out.push(out_row);
    }
    Ok(out)
}

fn parse_form(
    field: &BaseField,
    alg: &InvAlgebra,
    v: &Value,
    path: &str,
) -> Result<FormObject> {
    let obj = as_object(v, path)?;
    let ty = get(obj, "type", path)?
        .as_str()
        .ok_or_else(|| schema_err(&format!("{path}.type"), "expected a string"))?;
    match ty {
        "quadratic" => {
            let diag = get(obj, "diag", path)?
                .as_array()
                .ok_or_else(|| schema_err(&format!("{path}.diag"), "expected an array"))?;
            let entries = diag
                .iter()
                .enumerate()
                .map(|(i, e)| parse_scalar(field, e, &format!("{path}.diag[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(FormObject::Quadratic(QuadForm::diagonal(
                field.clone(),
                entries,
            )?))
        }
        "quadratic2" => {
            let rows = get(obj, "upper", path)?
                .as_array()
                .ok_or_else(|| schema_err(&format!("{path}.upper"), "expected an array"))?;
            let mut coeffs = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let cells = row.as_array().ok_or_else(|| {
                    schema_err(&format!("{path}.upper[{i}]"), "expected a row array")
                })?;
                if cells.len() != rows.len() {
                    return Err(schema_err(&format!("{path}.upper"), "matrix must be square"));
                }
                let mut out_row = Vec::with_capacity(cells.len());
                for (j, cell) in cells.iter().enumerate() {
                    out_row.push(parse_scalar(
                        field,
                        cell,
                        &format!("{path}.upper[{i}][{j}]"),
                    )?);
                }
                coeffs.push(out_row);
            }
            Ok(FormObject::Quadratic(QuadForm::char2(field.clone(), coeffs)?))
        }
        "hermitian" | "skew_hermitian" => {
            let expected_eps: i8 = if ty == "hermitian" { 1 } else { -1 };
            if let Some(eps) = obj.get("epsilon") {
                let eps = parse_bigint(eps, &format!("{path}.epsilon"))?;
                if eps != BigInt::from(expected_eps) {
                    return Err(schema_err(
                        &format!("{path}.epsilon"),
                        "epsilon contradicts the form type",
                    ));
                }
            }
            let gram = parse_matrix(alg, get(obj, "gram", path)?, &format!("{path}.gram"))?;
            Ok(FormObject::Hermitian(HermForm::new(
                alg.clone(),
                expected_eps,
                gram,
            )?))
        }
        "pair" => {
            let gram = parse_matrix(alg, get(obj, "gram", path)?, &format!("{path}.gram"))?;
            let l = match obj.get("l") {
                Some(lv) => Some(parse_matrix(alg, lv, &format!("{path}.l"))?),
                None => None,
            };
            let eps = match alg.kind() {
                AlgKind::Quaternion { .. } => -1,
                _ => 1,
            };
            let h = HermForm::new(alg.clone(), eps, gram)?;
            Ok(FormObject::Pair(HermPair::new(h, l)?))
        }
        other => Err(schema_err(
            &format!("{path}.type"),
            &format!("unknown form type `{other}`"),
        )),
    }
}

/// Parse and validate a document against the input schema.
pub fn parse_document(text: &str) -> Result<ParsedInput> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::SchemaError(format!("line {}: {e}", e.line())))?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<ParsedInput> {
    let obj = as_object(v, "document")?;
    let field = parse_field(get(obj, "field", "document")?)?;
    let algebra = parse_algebra(&field, obj.get("algebra"))?;
    let form = match obj.get("form") {
        Some(fv) => Some(parse_form(&field, &algebra, fv, "form")?),
        None => None,
    };
    let form2 = match obj.get("form2") {
        Some(fv) => Some(parse_form(&field, &algebra, fv, "form2")?),
        None => None,
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "field" | "algebra" | "form" | "form2") {
            return Err(schema_err("document", &format!("unknown field `{key}`")));
        }
    }
    Ok(ParsedInput { field, algebra, form, form2 })
}

// ---------------------------------------------------------------------------
// Canonical emission
// ---------------------------------------------------------------------------

fn emit_rational(r: &BigRational) -> Value {
    if r.denom() == &BigInt::from(1) {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn emit_scalar(x: &FieldElem) -> Value {
    match x.field() {
        BaseField::Rationals => emit_rational(x.as_rational().unwrap()),
        BaseField::Finite(ctx) => {
            let coeffs = x.as_fq().unwrap();
            if ctx.degree() == 1 {
                json!(coeffs[0])
            } else {
                Value::Array(coeffs.iter().map(|&c| json!(c)).collect())
            }
        }
    }
}

fn emit_entry(alg: &InvAlgebra, e: &AlgElem) -> Value {
    let coords = alg.coords(e).unwrap();
    if coords.len() == 1 {
        emit_scalar(&coords[0])
    } else {
        Value::Array(coords.iter().map(emit_scalar).collect())
    }
}

fn emit_matrix(alg: &InvAlgebra, m: &AlgMat) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|e| emit_entry(alg, e)).collect()))
            .collect(),
    )
}

fn emit_field(field: &BaseField) -> Value {
    match field {
        BaseField::Rationals => json!({"kind": "Q"}),
        BaseField::Finite(ctx) => json!({
            "kind": "GF",
            "p": ctx.characteristic(),
            "k": ctx.degree(),
            "modulus": ctx.modulus(),
        }),
    }
}

fn emit_algebra(alg: &InvAlgebra) -> Value {
    match alg.kind() {
        AlgKind::Split => json!({"kind": "split"}),
        AlgKind::QuadEtale { c } => json!({"kind": "quad_etale", "c": emit_scalar(c)}),
        AlgKind::Quaternion { a, b } => {
            json!({"kind": "quaternion", "a": emit_scalar(a), "b": emit_scalar(b)})
        }
    }
}

pub fn emit_form(alg: &InvAlgebra, form: &FormObject) -> Value {
    match form {
        FormObject::Quadratic(q) => match q {
            QuadForm::Diagonal { entries, .. } => json!({
                "type": "quadratic",
                "diag": entries.iter().map(emit_scalar).collect::<Vec<_>>(),
            }),
            QuadForm::Char2 { upper, .. } => json!({
                "type": "quadratic2",
                "upper": upper
                    .iter()
                    .map(|row| row.iter().map(emit_scalar).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
        },
        FormObject::Hermitian(h) => json!({
            "type": if h.eps() == 1 { "hermitian" } else { "skew_hermitian" },
            "epsilon": h.eps(),
            "gram": emit_matrix(alg, h.gram()),
        }),
        FormObject::Pair(p) => json!({
            "type": "pair",
            "gram": emit_matrix(alg, p.form().gram()),
            "l": emit_matrix(alg, p.semi_trace()),
        }),
    }
}

/// Canonical re-emission of a parsed document; parse(emit(x)) == x.
pub fn emit_document(input: &ParsedInput) -> Value {
    let mut obj = Map::new();
    obj.insert("field".into(), emit_field(&input.field));
    obj.insert("algebra".into(), emit_algebra(&input.algebra));
    if let Some(form) = &input.form {
        obj.insert("form".into(), emit_form(&input.algebra, form));
    }
    if let Some(form) = &input.form2 {
        obj.insert("form2".into(), emit_form(&input.algebra, form));
    }
    Value::Object(obj)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

fn emit_place(p: &Place) -> Value {
    match p {
        Place::Finite(n) => match n.to_u64() {
            Some(small) => json!(small),
            None => Value::String(n.to_string()),
        },
        Place::Infinity => Value::String("inf".into()),
    }
}

fn emit_coh_class(c: &CohClass) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(c.degree()));
    match c.payload() {
        Payload::SquareClass(n) => {
            obj.insert("square_class".into(), Value::String(n.to_string()));
        }
        Payload::Bit(b) => {
            obj.insert("bit".into(), json!(u8::from(*b)));
        }
        Payload::Places(set) => {
            obj.insert(
                "places".into(),
                Value::Array(set.iter().map(emit_place).collect()),
            );
        }
        Payload::RealBit(b) => {
            obj.insert("real_bit".into(), json!(u8::from(*b)));
        }
        Payload::Zero => {
            obj.insert("zero".into(), json!(true));
        }
    }
    Value::Object(obj)
}

#[derive(Debug)]
pub struct Report {
    pub input_canonical: Value,
    pub results: Value,
    pub errors: Vec<(String, String)>,
    pub version: String,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
            && self
                .results
                .get("routes_agree")
                .map(|v| v != &json!(false))
                .unwrap_or(true)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "input_canonical": self.input_canonical,
            "results": self.results,
            "errors": self
                .errors
                .iter()
                .map(|(code, msg)| json!({"code": code, "message": msg}))
                .collect::<Vec<_>>(),
            "version": self.version,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "results: {}\n",
            serde_json::to_string_pretty(&self.results).unwrap()
        ));
        for (code, msg) in &self.errors {
            out.push_str(&format!("error [{code}]: {msg}\n"));
        }
        out
    }
}

fn report(input_canonical: Value, results: Value, errors: Vec<(String, String)>) -> Report {
    Report {
        input_canonical,
        results,
        errors,
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// e_n chain of a quadratic form, stopping after the first nonzero value.
fn e_chain_values(q: &QuadForm) -> Result<Vec<CohClass>> {
    let mut out = Vec::new();
    if q.dim() % 2 != 0 {
        return Err(Error::OddDimension);
    }
    for n in 1..=e_chain_bound(q.dim()) {
        let c = q.e_n(n)?;
        let zero = c.is_zero();
        out.push(c);
        if !zero {
            break;
        }
    }
    Ok(out)
}

fn run_invariants(input: &ParsedInput, opts: &RunOptions) -> Result<Value> {
    let mut results = Map::new();
    let chain: Vec<CohClass> = match input.form.as_ref().ok_or(Error::SchemaError(
        "command needs a `form`".into(),
    ))? {
        FormObject::Quadratic(q) => e_chain_values(q)?,
        FormObject::Hermitian(h) => {
            let mut out = Vec::new();
            let q = h.trace_form()?;
            let mut routes_agree = true;
            for n in 1..=e_chain_bound(q.dim()) {
                let c = if opts.assert_layer {
                    match h.e_n_checked(n) {
                        Ok(c) => c,
                        Err(Error::InvariantViolation(_)) => {
                            routes_agree = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    h.e_n(n)?
                };
                let zero = c.is_zero();
                out.push(c);
                if !zero {
                    break;
                }
            }
            if opts.assert_layer {
                results.insert("routes_agree".into(), json!(routes_agree));
            }
            out
        }
        FormObject::Pair(p) => {
            let mut out = Vec::new();
            loop {
                let n = out.len() as u32 + 1;
                match p.e_n(n) {
                    Ok(c) => {
                        let zero = c.is_zero();
                        out.push(c);
                        if !zero || n >= 8 {
                            break;
                        }
                    }
                    Err(Error::UnsupportedAlgebra) if n > 1 => break,
                    Err(e) => return Err(e),
                }
            }
            out
        }
    };
    results.insert(
        "e".into(),
        Value::Array(chain.iter().map(emit_coh_class).collect()),
    );
    Ok(Value::Object(results))
}

fn run_single(cmd: Command, input: &ParsedInput, opts: &RunOptions) -> Result<Value> {
    let form = || {
        input
            .form
            .as_ref()
            .ok_or(Error::SchemaError("command needs a `form`".into()))
    };
    match cmd {
        Command::Invariants => run_invariants(input, opts),
        Command::IsHyperbolic => {
            let hyp = match form()? {
                FormObject::Quadratic(q) => q.is_hyperbolic()?,
                FormObject::Hermitian(h) => h.is_hyperbolic()?,
                FormObject::Pair(p) => p.is_hyperbolic()?,
            };
            Ok(json!({"hyperbolic": hyp, "routes_agree": true}))
        }
        Command::IsIsotropic => {
            let iso = match form()? {
                FormObject::Quadratic(q) => q.is_isotropic()?,
                FormObject::Hermitian(h) => h.trace_form()?.is_isotropic()?,
                FormObject::Pair(p) => p.is_isotropic()?,
            };
            Ok(json!({"isotropic": iso}))
        }
        Command::WittDecompose => {
            let q = match form()? {
                FormObject::Quadratic(q) => q.clone(),
                FormObject::Hermitian(h) => h.trace_form()?,
                FormObject::Pair(p) => {
                    p.associated_quadratic_form()?
                }
            };
            let (index, class) = q.witt_decompose()?;
            let mut results = Map::new();
            results.insert("witt_index".into(), json!(index));
            results.insert("aniso_dim".into(), json!(class.aniso_dim()));
            results.insert(
                "class".into(),
                match class.data() {
                    WittData::Q { delta, witt_set, signature } => json!({
                        "signed_disc": delta.to_string(),
                        "witt_set": witt_set.iter().map(emit_place).collect::<Vec<_>>(),
                        "signature": signature,
                    }),
                    WittData::FqOdd { disc_nonsquare } => {
                        json!({"disc_nonsquare": disc_nonsquare})
                    }
                    WittData::FqEven { arf } => json!({"arf": arf}),
                },
            );
            results.insert(
                "representative".into(),
                match class.representative() {
                    Some(rep) => {
                        emit_form(&input.algebra, &FormObject::Quadratic(rep.clone()))
                    }
                    None => Value::Null,
                },
            );
            Ok(Value::Object(results))
        }
        Command::TraceForm => {
            let q = match form()? {
                FormObject::Hermitian(h) => h.trace_form()?,
                FormObject::Pair(p) => p.associated_quadratic_form()?,
                FormObject::Quadratic(_) => {
                    return Err(Error::SchemaError(
                        "trace-form expects a hermitian form or a pair".into(),
                    ))
                }
            };
            Ok(json!({
                "trace_form": emit_form(&input.algebra, &FormObject::Quadratic(q)),
            }))
        }
        Command::Equivalent => {
            let f2 = input.form2.as_ref().ok_or(Error::SchemaError(
                "equivalent needs `form2`".into(),
            ))?;
            let eq = match (form()?, f2) {
                (FormObject::Quadratic(a), FormObject::Quadratic(b)) => a.equivalent_to(b)?,
                (FormObject::Hermitian(a), FormObject::Hermitian(b)) => a.equivalent_to(b)?,
                _ => return Err(Error::SchemaError("forms have different types".into())),
            };
            Ok(json!({"equivalent": eq}))
        }
        Command::RelativeE3 => {
            let f2 = input.form2.as_ref().ok_or(Error::SchemaError(
                "relative-e3 needs `form2`".into(),
            ))?;
            let (h, g) = match (form()?, f2) {
                (FormObject::Hermitian(a), FormObject::Hermitian(b)) => (a, b),
                _ => {
                    return Err(Error::SchemaError(
                        "relative-e3 expects two hermitian forms".into(),
                    ))
                }
            };
            Ok(json!({"relative_e3": emit_coh_class(&h.relative_e3(g)?)}))
        }
        Command::OracleCheck => run_oracle_check(input, opts),
    }
}

/// Sweep small forms over a finite field and compare the classifier against
/// the exhaustive oracle. When full enumeration of a dimension exceeds 10^5
/// forms, a deterministic sample of 1000 forms is checked instead.
fn run_oracle_check(input: &ParsedInput, opts: &RunOptions) -> Result<Value> {
    const ENUMERATION_CAP: u64 = 100_000;
    const SAMPLE_SIZE: u64 = 1000;
    let field = input.field.clone();
    let ctx = field.fq().ok_or(Error::SearchSpaceTooLarge)?.clone();
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    // shared scan tables: built once for the whole sweep
    let scan = oracle::FqScan::new(&ctx);
    let scan_isotropy = |form: &QuadForm| -> Result<bool> {
        match &scan {
            Some(s) => {
                let d = form.dim() as u32;
                let mut total: u64 = 1;
                for _ in 0..d {
                    total = total
                        .checked_mul(ctx.order())
                        .filter(|&t| t <= opts.oracle_bound)
                        .ok_or(Error::SearchSpaceTooLarge)?;
                }
                let terms = s.terms_of(&ctx, form);
                Ok(s.find_isotropic(&terms, form.dim(), total).is_some())
            }
            None => Ok(oracle::exhaustive_isotropy(form, opts.oracle_bound)?.is_some()),
        }
    };
    // deterministic linear congruential stream for the sampled regime
    let mut lcg_state: u64 = 0x2545_F491_4F6C_DD1D;
    let mut lcg = move |bound: u64| -> u64 {
        lcg_state = lcg_state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (lcg_state >> 17) % bound
    };
    let elem = |i: u64| -> FieldElem {
        field
            .from_coeffs(&ctx.from_index(i).iter().map(|&c| c as i64).collect::<Vec<_>>())
            .unwrap()
    };
    if ctx.characteristic() != 2 {
        let units = ctx.order() - 1;
        for d in 1..=3usize {
            let total = units.pow(d as u32);
            let exhaustive = total <= ENUMERATION_CAP;
            let count = if exhaustive { total } else { SAMPLE_SIZE };
            for i in 0..count {
                let mut idx = if exhaustive { i } else { 0 };
                let entries: Vec<FieldElem> = (0..d)
                    .map(|_| {
                        let pick = if exhaustive {
                            let v = idx % units;
                            idx /= units;
                            v
                        } else {
                            lcg(units)
                        };
                        elem(pick + 1)
                    })
                    .collect();
                let form = QuadForm::diagonal(field.clone(), entries)?;
                let decided = form.is_isotropic()?;
                let scanned = scan_isotropy(&form)?;
                checked += 1;
                if decided != scanned {
                    mismatches += 1;
                }
            }
        }
    } else {
        // characteristic 2: binary coefficient matrices (a, b, c)
        let q = ctx.order();
        let total = q.pow(3);
        let exhaustive = total <= ENUMERATION_CAP;
        let count = if exhaustive { total } else { SAMPLE_SIZE };
        for i in 0..count {
            let (a, b, c) = if exhaustive {
                (i % q, (i / q) % q, i / (q * q))
            } else {
                (lcg(q), lcg(q), lcg(q))
            };
            let coeffs = vec![vec![elem(a), elem(b)], vec![field.zero(), elem(c)]];
            let form = match QuadForm::char2(field.clone(), coeffs) {
                Ok(f) => f,
                Err(_) => continue, // degenerate
            };
            let decided = form.is_isotropic()?;
            let scanned = scan_isotropy(&form)?;
            checked += 1;
            if decided != scanned {
                mismatches += 1;
            }
        }
    }
    Ok(json!({"checked": checked, "mismatches": mismatches}))
}

/// Run a command on a parsed document, producing the canonical report.
pub fn run_command(cmd: Command, text: &str, opts: &RunOptions) -> Report {
    let parsed = match parse_document(text) {
        Ok(p) => p,
        Err(e) => {
            return report(
                Value::Null,
                Value::Object(Map::new()),
                vec![(e.code().to_string(), e.to_string())],
            )
        }
    };
    let canonical = emit_document(&parsed);
    match run_single(cmd, &parsed, opts) {
        Ok(results) => report(canonical, results, vec![]),
        Err(e) => report(
            canonical,
            Value::Object(Map::new()),
            vec![(e.code().to_string(), e.to_string())],
        ),
    }
}
