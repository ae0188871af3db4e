//! Input documents: a complete fan, the boundary divisors and the
//! coefficient polytope, read from JSON or TOML and checked against the
//! shipped schema before typed decoding.

use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::fan::Fan;
use crate::geometry::polyhedron::{Inequality, RationalPolyhedron};
use crate::toric::ToricCouple;
use crate::{Integer, Rational};

/// The schema every document is validated against.
pub const SCHEMA: &str = include_str!("../../../schema/input.v1.json");

/// A rational carried as the string `"p/q"` (or `"p"`); integers are also
/// accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub Rational);

/// Parses `p`, `p/q` or `-p/q` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.strip_prefix('-').unwrap_or(t).split('/').count() <= 2
        && t
            .strip_prefix('-')
            .unwrap_or(t)
            .split('/')
            .all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
    if !ok {
        return Err(Error::InvalidInput(format!("`{s}` is not a rational of the form p/q")));
    }
    Rational::from_str(t).map_err(|_| Error::InvalidInput(format!("`{s}` has a zero denominator")))
}

/// Parses a comma-separated rational vector such as `1/2,0` or `[-1, -1]`.
pub fn parse_rational_vector(s: &str) -> Result<Vec<Rational>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_rational).collect()
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExactRational;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExactRational(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExactRational(Rational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v).map(ExactRational).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    pub name: String,
    pub coeffs: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffPolytopeSpec {
    /// Rows `(b, a_1, ..., a_k)` meaning `b + Σ a_j x_j ≥ 0`.
    pub ineqs: Vec<Vec<ExactRational>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<ExactRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement_width: Option<ExactRational>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }

    pub fn tau(&self) -> Rational {
        self.tau.as_ref().map_or_else(|| Rational::from_integer(1.into()), |t| t.0.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub divisors: Vec<DivisorSpec>,
    pub coeff_polytope: CoeffPolytopeSpec,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Toml,
}

impl Format {
    /// `.toml` files are TOML; everything else is read as JSON.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("toml") => Format::Toml,
            _ => Format::Json,
        }
    }
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("bundled schema is JSON");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Seg {
    Key(String),
    Index(usize),
}

fn path_string(path: &[Seg]) -> String {
    let mut out = String::new();
    for s in path {
        match s {
            Seg::Key(k) if out.is_empty() => out.push_str(k),
            Seg::Key(k) => {
                out.push('.');
                out.push_str(k);
            }
            Seg::Index(i) => out.push_str(&format!("[{i}]")),
        }
    }
    if out.is_empty() {
        out.push_str("(root)");
    }
    out
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Byte offset of the value at `path` in a JSON text, or of the deepest
/// ancestor that exists.
fn locate_json(text: &str, path: &[Seg]) -> usize {
    let b = text.as_bytes();
    let skip_ws = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };
    fn skip_string(b: &[u8], mut i: usize) -> usize {
        i += 1;
        while i < b.len() && b[i] != b'"' {
            i += if b[i] == b'\\' { 2 } else { 1 };
        }
        i + 1
    }
    fn skip_value(b: &[u8], i: usize) -> usize {
        let mut depth = 0usize;
        let mut j = i;
        while j < b.len() {
            match b[j] {
                b'"' => {
                    j = skip_string(b, j);
                    if depth == 0 {
                        return j;
                    }
                    continue;
                }
                b'{' | b'[' => depth += 1,
                b'}' | b']' => {
                    if depth == 0 {
                        return j;
                    }
                    depth -= 1;
                    if depth == 0 {
                        return j + 1;
                    }
                }
                b',' if depth == 0 => return j,
                _ => {}
            }
            j += 1;
        }
        j
    }
    let mut pos = skip_ws(0);
    for seg in path {
        let start = pos;
        match (seg, b.get(pos)) {
            (Seg::Key(k), Some(b'{')) => {
                let mut i = skip_ws(pos + 1);
                let mut found = None;
                while i < b.len() && b[i] == b'"' {
                    let end = skip_string(b, i);
                    let key = &text[i + 1..end - 1];
                    let colon = skip_ws(end);
                    let v = skip_ws(colon + 1);
                    if key == k {
                        found = Some(v);
                        break;
                    }
                    i = skip_ws(skip_value(b, v));
                    if b.get(i) == Some(&b',') {
                        i = skip_ws(i + 1);
                    }
                }
                match found {
                    Some(v) => pos = v,
                    None => return start,
                }
            }
            (Seg::Index(n), Some(b'[')) => {
                let mut i = skip_ws(pos + 1);
                for _ in 0..*n {
                    i = skip_ws(skip_value(b, i));
                    if b.get(i) != Some(&b',') {
                        return start;
                    }
                    i = skip_ws(i + 1);
                }
                pos = i;
            }
            _ => return start,
        }
    }
    pos
}

#[derive(Clone, Copy)]
enum TomlNode<'a> {
    Item(&'a toml_edit::Item),
    Table(&'a toml_edit::Table),
    Value(&'a toml_edit::Value),
}

impl<'a> TomlNode<'a> {
    fn child(self, seg: &Seg) -> Option<(TomlNode<'a>, Option<std::ops::Range<usize>>)> {
        use toml_edit::{Item, Value as TValue};
        let from_item = |key: &toml_edit::Key, it: &'a Item| {
            let node = match it {
                Item::Value(v) => TomlNode::Value(v),
                other => TomlNode::Item(other),
            };
            (node, key.span().or_else(|| it.span()))
        };
        match (seg, self) {
            (Seg::Key(k), TomlNode::Table(t)) => t.get_key_value(k).map(|(key, it)| from_item(key, it)),
            (Seg::Key(k), TomlNode::Item(it)) => {
                it.as_table_like()?.get_key_value(k).map(|(key, it)| from_item(key, it))
            }
            (Seg::Key(k), TomlNode::Value(TValue::InlineTable(t))) => {
                t.get_key_value(k).map(|(key, it)| from_item(key, it))
            }
            (Seg::Index(n), TomlNode::Item(Item::ArrayOfTables(a))) => {
                a.get(*n).map(|t| (TomlNode::Table(t), t.span()))
            }
            (Seg::Index(n), TomlNode::Value(TValue::Array(a))) => a.get(*n).map(|v| (TomlNode::Value(v), v.span())),
            _ => None,
        }
    }
}

fn locate_toml(text: &str, path: &[Seg]) -> usize {
    let Ok(doc) = toml_edit::ImDocument::parse(text) else {
        return 0;
    };
    let mut node = TomlNode::Table(doc.as_table());
    let mut best = 0;
    for seg in path {
        let Some((next, span)) = node.child(seg) else { break };
        if let Some(s) = span {
            best = s.start;
        }
        node = next;
    }
    best
}

fn schema_error(text: &str, format: Format, path: &[Seg], message: impl Into<String>) -> Error {
    let offset = match format {
        Format::Json => locate_json(text, path),
        Format::Toml => locate_toml(text, path),
    };
    Error::Schema {
        line: line_at(text, offset),
        field: path_string(path),
        message: message.into(),
    }
}

fn to_value(text: &str, format: Format) -> Result<Value> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Schema {
            line: e.line(),
            field: "(document)".into(),
            message: e.to_string(),
        }),
        Format::Toml => toml::from_str::<Value>(text).map_err(|e| Error::Schema {
            line: e.span().map_or(1, |s| line_at(text, s.start)),
            field: "(document)".into(),
            message: e.message().to_string(),
        }),
    }
}

fn segs_from_pointer(loc: &jsonschema::paths::Location) -> Vec<Seg> {
    loc.iter()
        .map(|s| match s {
            jsonschema::paths::LocationSegment::Property(p) => Seg::Key(p.to_string()),
            jsonschema::paths::LocationSegment::Index(i) => Seg::Index(i),
        })
        .collect()
}

impl InputDocument {
    /// Reads `path`, choosing the format from its extension.
    pub fn parse_file(path: &std::path::Path) -> Result<InputDocument> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        InputDocument::parse_str(&text, Format::from_path(path))
    }

    /// Schema validation, typed decoding and the structural checks on the
    /// fan, the divisors and the coefficient polytope.
    pub fn parse_str(text: &str, format: Format) -> Result<InputDocument> {
        let value = to_value(text, format)?;
        if let Some(err) = validator().iter_errors(&value).next() {
            let mut path = segs_from_pointer(err.instance_path());
            if let jsonschema::error::ValidationErrorKind::AdditionalProperties { unexpected } = err.kind() {
                path.extend(unexpected.first().map(|k| Seg::Key(k.clone())));
            }
            return Err(schema_error(text, format, &path, err.to_string()));
        }
        let doc: InputDocument = serde_path_to_error::deserialize(&value).map_err(|e| {
            let path: Vec<Seg> = e
                .path()
                .iter()
                .filter_map(|s| match s {
                    serde_path_to_error::Segment::Map { key } | serde_path_to_error::Segment::Enum { variant: key } => {
                        Some(Seg::Key(key.clone()))
                    }
                    serde_path_to_error::Segment::Seq { index } => Some(Seg::Index(*index)),
                    serde_path_to_error::Segment::Unknown => None,
                })
                .collect();
            schema_error(text, format, &path, e.inner().to_string())
        })?;
        doc.check_shape(text, format)?;
        doc.to_couple()?;
        Ok(doc)
    }

    fn check_shape(&self, text: &str, format: Format) -> Result<()> {
        let key = |k: &str| Seg::Key(k.into());
        let n = self.rays.len();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dim {
                let p = [key("rays"), Seg::Index(i)];
                return Err(schema_error(text, format, &p, format!("ray has {} entries, expected dim = {}", r.len(), self.dim)));
            }
        }
        for (i, d) in self.divisors.iter().enumerate() {
            let p = [key("divisors"), Seg::Index(i), key("coeffs")];
            if d.coeffs.len() != n {
                return Err(schema_error(text, format, &p, format!("{} coefficients for {n} rays", d.coeffs.len())));
            }
            if d.coeffs.iter().all(|c| *c == 0) {
                return Err(schema_error(text, format, &p, "divisor has all coefficients zero"));
            }
        }
        let k = self.divisors.len();
        for (i, row) in self.coeff_polytope.ineqs.iter().enumerate() {
            if row.len() != k + 1 {
                let p = [key("coeff_polytope"), key("ineqs"), Seg::Index(i)];
                return Err(schema_error(text, format, &p, format!("row has {} entries, expected 1 + k = {}", row.len(), k + 1)));
            }
        }
        Ok(())
    }

    pub fn fan(&self) -> Result<Fan> {
        let rays = self.rays.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect();
        Fan::new(self.dim, rays, self.max_cones.clone())
    }

    pub fn coeff_polytope(&self) -> RationalPolyhedron {
        let k = self.divisors.len();
        let rows = self
            .coeff_polytope
            .ineqs
            .iter()
            .map(|r| Inequality::new(r[0].0.clone(), r[1..].iter().map(|v| v.0.clone()).collect()))
            .collect();
        RationalPolyhedron::from_inequalities(k, rows)
    }

    pub fn to_couple(&self) -> Result<ToricCouple> {
        let fan = self.fan()?;
        let divisors = self
            .divisors
            .iter()
            .map(|d| d.coeffs.iter().map(|&c| Integer::from(c)).collect())
            .collect();
        let names = self.divisors.iter().map(|d| d.name.clone()).collect();
        let p = self.coeff_polytope();
        if p.dualize_or_empty()?.is_empty() {
            return Err(Error::EmptyCoeffPolytope);
        }
        ToricCouple::new(fan, divisors, names, p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Fails only for seeds beyond the TOML integer range.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn tau(&self) -> Rational {
        self.options.tau()
    }

    pub fn refinement_width(&self) -> Option<Rational> {
        self.options.refinement_width.as_ref().map(|w| w.0.clone()).filter(|w| !w.is_zero())
    }
}
