//! Instance documents: JSON with exact string numerics and sorted keys.
//!
//! ```json
//! {
//!   "format": 1,
//!   "nvars": 4,
//!   "variables": ["x", "y", "z", "w"],
//!   "polynomials": [{"name": "Q1", "terms": [{"coeff": "1", "exp": [1, 1, 0, 0]}]}],
//!   "colored_sets": [["A"], ["B"], ["C"]],
//!   "point_sets": [{"color": 1, "points": [["1", "0"], ["0", {"re": "0", "im": "1"}]]}],
//!   "delta": "1/4",
//!   "seed": 7,
//!   "budget": {"kmax": 4, "planes": 50}
//! }
//! ```
//!
//! Only `format` and `nvars` are required.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use quadsg::{MultiPoly, QuadraticForm, Scalar};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: inexact literal `{literal}`; use an integer, a \"p/q\" string or {{\"re\", \"im\"}}")]
    Inexact { path: String, literal: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

type Result<T> = std::result::Result<T, InstanceError>;

fn invalid<T>(path: &str, message: impl Into<String>) -> Result<T> {
    Err(InstanceError::Invalid { path: path.to_string(), message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPoly {
    pub name: String,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSetDoc {
    pub color: Option<u8>,
    pub points: Vec<Vec<Scalar>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BudgetDoc {
    pub kmax: Option<u32>,
    pub planes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub nvars: usize,
    pub variables: Option<Vec<String>>,
    pub polynomials: Vec<NamedPoly>,
    pub colored_sets: Option<[Vec<String>; 3]>,
    pub point_sets: Vec<PointSetDoc>,
    pub delta: Option<BigRational>,
    pub seed: Option<u64>,
    pub budget: BudgetDoc,
}

impl Instance {
    pub fn new(nvars: usize) -> Self {
        Instance {
            nvars,
            variables: None,
            polynomials: Vec::new(),
            colored_sets: None,
            point_sets: Vec::new(),
            delta: None,
            seed: None,
            budget: BudgetDoc::default(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, poly: MultiPoly) {
        self.polynomials.push(NamedPoly { name: name.into(), poly });
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.clone().unwrap_or_else(|| MultiPoly::default_names(self.nvars))
    }

    pub fn poly(&self, name: &str) -> Option<&MultiPoly> {
        self.polynomials.iter().find(|p| p.name == name).map(|p| &p.poly)
    }

    /// A named polynomial, or a `*`-separated product of named polynomials.
    pub fn product(&self, spec: &str) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.nvars);
        for name in spec.split('*').map(str::trim) {
            match self.poly(name) {
                Some(p) => acc = acc.mul(p),
                None => return invalid("polynomials", format!("no polynomial named `{name}`")),
            }
        }
        Ok(acc)
    }

    pub fn quadratic(&self, name: &str) -> Result<QuadraticForm> {
        let p = self.poly(name).ok_or_else(|| InstanceError::Invalid {
            path: "polynomials".into(),
            message: format!("no polynomial named `{name}`"),
        })?;
        as_quadratic(p, &format!("polynomials[{name}]"))
    }

    pub fn quadratics(&self) -> Result<Vec<QuadraticForm>> {
        self.polynomials.iter().map(|p| as_quadratic(&p.poly, &format!("polynomials[{}]", p.name))).collect()
    }
}

fn as_quadratic(p: &MultiPoly, path: &str) -> Result<QuadraticForm> {
    QuadraticForm::from_poly(p).or_else(|_| invalid(path, "not a homogeneous quadratic"))
}

// ---------------------------------------------------------------------------
// parsing

pub fn parse_str(text: &str) -> Result<Instance> {
    let v: Value = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_value(&v)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    match v.as_u64() {
        Some(x) => Ok(x),
        None => invalid(path, "expected a non-negative integer"),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) => Ok(a),
        None => invalid(path, "expected an array"),
    }
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    match v.as_str() {
        Some(s) => Ok(s),
        None => invalid(path, "expected a string"),
    }
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => Scalar::parse_rational(s).map_err(|e| match e {
            quadsg::scalar::ParseScalarError::Inexact(lit) => {
                InstanceError::Inexact { path: path.into(), literal: lit }
            }
            e => InstanceError::Invalid { path: path.into(), message: e.to_string() },
        }),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Scalar::parse_rational(&n.to_string()).or_else(|e| invalid(path, e.to_string()))
        }
        Value::Number(n) => Err(InstanceError::Inexact { path: path.into(), literal: n.to_string() }),
        _ => invalid(path, "expected a number string"),
    }
}

pub fn parse_scalar(v: &Value, path: &str) -> Result<Scalar> {
    if let Value::Object(o) = v {
        if let Some(k) = o.keys().find(|k| *k != "re" && *k != "im") {
            return invalid(path, format!("unexpected key `{k}` in complex number"));
        }
        let part = |k: &str| match field(o, k) {
            Some(x) => rational(x, &format!("{path}.{k}")),
            None => Ok(BigRational::zero()),
        };
        return Ok(Scalar::new(part("re")?, part("im")?));
    }
    rational(v, path).map(Scalar::from_rational)
}

const TOP_KEYS: [&str; 9] =
    ["budget", "colored_sets", "delta", "format", "nvars", "point_sets", "polynomials", "seed", "variables"];

pub fn parse_value(v: &Value) -> Result<Instance> {
    let Value::Object(top) = v else { return invalid("$", "expected an object") };
    if let Some(k) = top.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
        return invalid("$", format!("unknown key `{k}`"));
    }
    let format = field(top, "format").map(|f| as_u64(f, "format")).transpose()?;
    if format != Some(FORMAT_VERSION) {
        return invalid("format", format!("expected format {FORMAT_VERSION}"));
    }
    let Some(nv) = field(top, "nvars") else { return invalid("nvars", "missing") };
    let nvars = as_u64(nv, "nvars")? as usize;
    if nvars == 0 || nvars > 64 {
        return invalid("nvars", "must lie in 1..=64");
    }
    let mut inst = Instance::new(nvars);

    if let Some(vs) = field(top, "variables") {
        let names: Vec<String> = as_array(vs, "variables")?
            .iter()
            .enumerate()
            .map(|(i, s)| as_str(s, &format!("variables[{i}]")).map(str::to_string))
            .collect::<Result<_>>()?;
        if names.len() != nvars {
            return invalid("variables", format!("expected {nvars} names"));
        }
        if names.iter().collect::<BTreeSet<_>>().len() != names.len() {
            return invalid("variables", "duplicate name");
        }
        inst.variables = Some(names);
    }

    if let Some(ps) = field(top, "polynomials") {
        for (i, p) in as_array(ps, "polynomials")?.iter().enumerate() {
            let path = format!("polynomials[{i}]");
            let Value::Object(o) = p else { return invalid(&path, "expected an object") };
            let name = as_str(field(o, "name").unwrap_or(&Value::Null), &format!("{path}.name"))?.to_string();
            if name.is_empty() || name.contains(['*', ',']) {
                return invalid(&format!("{path}.name"), "names must be nonempty and free of `*` and `,`");
            }
            if inst.poly(&name).is_some() {
                return invalid(&format!("{path}.name"), format!("duplicate polynomial `{name}`"));
            }
            let terms = as_array(field(o, "terms").unwrap_or(&Value::Null), &format!("{path}.terms"))?;
            let mut poly = MultiPoly::zero(nvars);
            for (j, t) in terms.iter().enumerate() {
                let tp = format!("{path}.terms[{j}]");
                let Value::Object(to) = t else { return invalid(&tp, "expected an object") };
                let exp = as_array(field(to, "exp").unwrap_or(&Value::Null), &format!("{tp}.exp"))?;
                if exp.len() != nvars {
                    return invalid(&format!("{tp}.exp"), format!("expected {nvars} exponents"));
                }
                let exps = exp
                    .iter()
                    .map(|e| {
                        as_u64(e, &format!("{tp}.exp")).and_then(|x| {
                            u16::try_from(x).or_else(|_| invalid(&format!("{tp}.exp"), "exponent too large"))
                        })
                    })
                    .collect::<Result<Vec<u16>>>()?;
                let c = parse_scalar(field(to, "coeff").unwrap_or(&Value::Null), &format!("{tp}.coeff"))?;
                poly.add_term(quadsg::Monomial::from_exps(exps), c);
            }
            inst.push(name, poly);
        }
    }

    if let Some(cs) = field(top, "colored_sets") {
        let sets = as_array(cs, "colored_sets")?;
        if sets.len() != 3 {
            return invalid("colored_sets", "expected three sets");
        }
        let mut out: Vec<Vec<String>> = Vec::new();
        for (s, set) in sets.iter().enumerate() {
            let mut names = Vec::new();
            for (j, n) in as_array(set, &format!("colored_sets[{s}]"))?.iter().enumerate() {
                let path = format!("colored_sets[{s}][{j}]");
                let n = as_str(n, &path)?;
                if inst.poly(n).is_none() {
                    return invalid(&path, format!("no polynomial named `{n}`"));
                }
                names.push(n.to_string());
            }
            out.push(names);
        }
        inst.colored_sets = Some(out.try_into().unwrap());
    }

    if let Some(ps) = field(top, "point_sets") {
        for (i, s) in as_array(ps, "point_sets")?.iter().enumerate() {
            let path = format!("point_sets[{i}]");
            let Value::Object(o) = s else { return invalid(&path, "expected an object") };
            let color = match field(o, "color") {
                Some(c) => {
                    let c = as_u64(c, &format!("{path}.color"))?;
                    if !(1..=3).contains(&c) {
                        return invalid(&format!("{path}.color"), "color must lie in 1..=3");
                    }
                    Some(c as u8)
                }
                None => None,
            };
            let mut points = Vec::new();
            for (j, p) in
                as_array(field(o, "points").unwrap_or(&Value::Null), &format!("{path}.points"))?.iter().enumerate()
            {
                let pp = format!("{path}.points[{j}]");
                let coords = as_array(p, &pp)?;
                if coords.len() != nvars {
                    return invalid(&pp, format!("expected {nvars} coordinates"));
                }
                points.push(
                    coords
                        .iter()
                        .enumerate()
                        .map(|(k, c)| parse_scalar(c, &format!("{pp}[{k}]")))
                        .collect::<Result<_>>()?,
                );
            }
            inst.point_sets.push(PointSetDoc { color, points });
        }
    }

    if let Some(d) = field(top, "delta") {
        inst.delta = Some(rational(d, "delta")?);
    }
    if let Some(s) = field(top, "seed") {
        inst.seed = Some(as_u64(s, "seed")?);
    }
    if let Some(b) = field(top, "budget") {
        let Value::Object(o) = b else { return invalid("budget", "expected an object") };
        if let Some(k) = field(o, "kmax") {
            inst.budget.kmax =
                Some(as_u64(k, "budget.kmax")?.try_into().or_else(|_| invalid("budget.kmax", "too large"))?);
        }
        if let Some(p) = field(o, "planes") {
            inst.budget.planes = Some(as_u64(p, "budget.planes")? as usize);
        }
    }
    Ok(inst)
}

// ---------------------------------------------------------------------------
// emission

pub fn rational_value(r: &BigRational) -> Value {
    Value::String(Scalar::format_rational(r))
}

pub fn scalar_value(s: &Scalar) -> Value {
    if s.is_real() {
        rational_value(s.re())
    } else {
        json!({ "re": rational_value(s.re()), "im": rational_value(s.im()) })
    }
}

pub fn poly_terms(p: &MultiPoly) -> Value {
    Value::Array(p.terms().rev().map(|(m, c)| json!({ "coeff": scalar_value(c), "exp": m.exps() })).collect())
}

pub fn to_value(inst: &Instance) -> Value {
    let mut top = Map::new();
    top.insert("format".into(), json!(FORMAT_VERSION));
    top.insert("nvars".into(), json!(inst.nvars));
    if let Some(v) = &inst.variables {
        top.insert("variables".into(), json!(v));
    }
    top.insert(
        "polynomials".into(),
        Value::Array(
            inst.polynomials.iter().map(|p| json!({ "name": p.name, "terms": poly_terms(&p.poly) })).collect(),
        ),
    );
    if let Some(cs) = &inst.colored_sets {
        top.insert("colored_sets".into(), json!(cs));
    }
    if !inst.point_sets.is_empty() {
        let sets = inst
            .point_sets
            .iter()
            .map(|s| {
                let pts: Vec<Value> =
                    s.points.iter().map(|p| Value::Array(p.iter().map(scalar_value).collect())).collect();
                let mut o = Map::new();
                if let Some(c) = s.color {
                    o.insert("color".into(), json!(c));
                }
                o.insert("points".into(), Value::Array(pts));
                Value::Object(o)
            })
            .collect();
        top.insert("point_sets".into(), Value::Array(sets));
    }
    if let Some(d) = &inst.delta {
        top.insert("delta".into(), rational_value(d));
    }
    if let Some(s) = inst.seed {
        top.insert("seed".into(), json!(s));
    }
    if inst.budget != BudgetDoc::default() {
        let mut o = Map::new();
        if let Some(k) = inst.budget.kmax {
            o.insert("kmax".into(), json!(k));
        }
        if let Some(p) = inst.budget.planes {
            o.insert("planes".into(), json!(p));
        }
        top.insert("budget".into(), Value::Object(o));
    }
    Value::Object(top)
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn emit(inst: &Instance) -> String {
    render(&to_value(inst))
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rejected_with_location() {
        let doc =
            r#"{"format": 1, "nvars": 1, "polynomials": [{"name": "p", "terms": [{"coeff": "0.5", "exp": [2]}]}]}"#;
        let e = parse_str(doc).unwrap_err();
        assert_eq!(e, InstanceError::Inexact { path: "polynomials[0].terms[0].coeff".into(), literal: "0.5".into() });
        let doc = r#"{"format": 1, "nvars": 1, "point_sets": [{"points": [[0.25]]}]}"#;
        assert!(matches!(parse_str(doc), Err(InstanceError::Inexact { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_str("{\n  \"format\": 1,\n  nvars: 2\n}").unwrap_err();
        assert!(matches!(e, InstanceError::Syntax { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn empty_polynomial_list_is_valid() {
        let inst = parse_str(r#"{"format": 1, "nvars": 3, "polynomials": []}"#).unwrap();
        assert!(inst.polynomials.is_empty());
        assert_eq!(parse_str(&emit(&inst)).unwrap(), inst);
    }

    #[test]
    fn complex_coefficients_round_trip() {
        let doc = r#"{"format": 1, "nvars": 2, "polynomials": [{"name": "p", "terms": [
            {"coeff": {"re": "1/2", "im": "-3"}, "exp": [1, 1]}, {"coeff": 4, "exp": [0, 2]}]}]}"#;
        let inst = parse_str(doc).unwrap();
        let text = emit(&inst);
        assert_eq!(parse_str(&text).unwrap(), inst);
        assert_eq!(emit(&parse_str(&text).unwrap()), text);
    }
}
