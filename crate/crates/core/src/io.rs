//! File formats.
//!
//! * Text magma: `order n` on the first line, then `n` lines of `n`
//!   space-separated entries. Blank lines and `#` comments are ignored.
//! * JSON magma ([`MagmaFile`]): `format_version`, `order`, `table` as
//!   nested rows, optional `labels` and `metadata`.
//! * JSON factors ([`FactorsFile`]): tagged by `kind` (`smash` or `skew`),
//!   tables as nested arrays indexed in argument order.
//!
//! JSON is written canonically: two-space indentation, keys in schema
//! order, arrays of scalars on one line. Canonical files round-trip byte
//! for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::products::{SkewFactors, SmashFactors};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagmaFile {
    pub format_version: u32,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl MagmaFile {
    pub fn new(m: &FiniteMagma, metadata: Option<Value>) -> Self {
        MagmaFile {
            format_version: FORMAT_VERSION,
            order: m.order(),
            table: m.rows(),
            labels: None,
            metadata,
        }
    }

    pub fn to_magma(&self) -> Result<FiniteMagma> {
        check_version(self.format_version)?;
        if let Some(labels) = &self.labels {
            if labels.len() != self.order {
                return Err(QgError::Parse(format!(
                    "{} labels for order {}",
                    labels.len(),
                    self.order
                )));
            }
        }
        FiniteMagma::from_table(self.order, &self.table)
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(QgError::Parse(format!("unsupported format_version {v}")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MagmaRepr {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl Serialize for FiniteMagma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MagmaRepr {
            order: self.order(),
            table: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMagma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MagmaRepr::deserialize(d)?;
        FiniteMagma::from_table(r.order, &r.table).map_err(D::Error::custom)
    }
}

fn nest(flat: &[usize], dims: &[usize]) -> Value {
    if dims.len() == 1 {
        return Value::from(flat.to_vec());
    }
    let stride = flat.len() / dims[0];
    Value::Array(
        flat.chunks(stride.max(1))
            .take(dims[0])
            .map(|c| nest(c, &dims[1..]))
            .collect(),
    )
}

fn flatten(name: &str, v: &Value, dims: &[usize], out: &mut Vec<usize>) -> Result<()> {
    let bad = |msg: String| QgError::shape(name, msg);
    let arr = v.as_array().ok_or_else(|| bad("expected an array".into()))?;
    if arr.len() != dims[0] {
        return Err(bad(format!("expected length {}, found {}", dims[0], arr.len())));
    }
    for x in arr {
        if dims.len() == 1 {
            let n = x
                .as_u64()
                .ok_or_else(|| bad(format!("{x} is not a nonnegative integer")))?;
            out.push(n as usize);
        } else {
            flatten(name, x, &dims[1..], out)?;
        }
    }
    Ok(())
}

fn unnest(name: &str, v: &Value, dims: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    flatten(name, v, dims, &mut out)?;
    Ok(out)
}

/// Smashing factors as nested arrays: `xi1[a][b][a']`, `phi1[a]` a
/// permutation of `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmashFile {
    pub order_a: usize,
    pub order_b: usize,
    pub xi1: Value,
    pub xi2: Value,
    pub phi1: Value,
    pub phi2: Value,
    pub phi3: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

impl SmashFile {
    pub fn new(f: &SmashFactors, provenance: Option<Value>) -> Self {
        let (na, nb) = (f.order_a(), f.order_b());
        SmashFile {
            order_a: na,
            order_b: nb,
            xi1: nest(f.xi1_table(), &[na, nb, na]),
            xi2: nest(f.xi2_table(), &[na, nb, na]),
            phi1: nest(f.phi_table(1), &[na, nb]),
            phi2: nest(f.phi_table(2), &[na, nb]),
            phi3: nest(f.phi_table(3), &[na, nb]),
            provenance,
        }
    }

    pub fn to_factors(&self) -> Result<SmashFactors> {
        let (na, nb) = (self.order_a, self.order_b);
        SmashFactors::new(
            na,
            nb,
            unnest("xi1", &self.xi1, &[na, nb, na])?,
            unnest("xi2", &self.xi2, &[na, nb, na])?,
            [
                unnest("phi1", &self.phi1, &[na, nb])?,
                unnest("phi2", &self.phi2, &[na, nb])?,
                unnest("phi3", &self.phi3, &[na, nb])?,
            ],
        )
    }
}

/// Skew factors as nested arrays: `n_table` the Cayley table of `N`,
/// `phi[a]` a permutation of `B`, `eta[v][u][b]`, `kappa[u][c][b]`,
/// `xi[u][c][v][b]` with values in `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewFile {
    pub order_a: usize,
    pub order_b: usize,
    pub order_n: usize,
    pub n_table: Value,
    pub embed_a: Vec<usize>,
    pub embed_b: Vec<usize>,
    pub phi: Value,
    pub eta: Value,
    pub kappa: Value,
    pub xi: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

impl SkewFile {
    pub fn new(f: &SkewFactors, provenance: Option<Value>) -> Self {
        let (na, nb, nn) = (f.order_a(), f.order_b(), f.n_group().order());
        SkewFile {
            order_a: na,
            order_b: nb,
            order_n: nn,
            n_table: nest(f.n_group().table(), &[nn, nn]),
            embed_a: f.embed_a().to_vec(),
            embed_b: f.embed_b().to_vec(),
            phi: nest(f.phi_table(), &[na, nb]),
            eta: nest(f.eta_table(), &[na, na, nb]),
            kappa: nest(f.kappa_table(), &[na, nb, nb]),
            xi: nest(f.xi_table(), &[na, nb, na, nb]),
            provenance,
        }
    }

    pub fn to_factors(&self) -> Result<SkewFactors> {
        let (na, nb, nn) = (self.order_a, self.order_b, self.order_n);
        let n_group = FiniteMagma::from_flat(nn, unnest("n_table", &self.n_table, &[nn, nn])?)?;
        SkewFactors::new(
            na,
            nb,
            n_group,
            self.embed_a.clone(),
            self.embed_b.clone(),
            unnest("phi", &self.phi, &[na, nb])?,
            unnest("eta", &self.eta, &[na, na, nb])?,
            unnest("kappa", &self.kappa, &[na, nb, nb])?,
            unnest("xi", &self.xi, &[na, nb, na, nb])?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorsFile {
    Smash(SmashFile),
    Skew(SkewFile),
}

impl Serialize for SmashFactors {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SmashFile::new(self, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SmashFactors {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SmashFile::deserialize(d)?.to_factors().map_err(D::Error::custom)
    }
}

impl Serialize for SkewFactors {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SkewFile::new(self, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewFactors {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SkewFile::deserialize(d)?.to_factors().map_err(D::Error::custom)
    }
}

/// Parses the text format.
pub fn parse_text(src: &str) -> Result<FiniteMagma> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| QgError::Parse("empty input".into()))?;
    let order = header
        .strip_prefix("order")
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .ok_or_else(|| QgError::Parse(format!("line {ln}: expected 'order <n>'")))?;
    let mut rows = Vec::with_capacity(order);
    for (ln, line) in lines {
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| QgError::Parse(format!("line {ln}: '{t}' is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    FiniteMagma::from_table(order, &rows)
}

pub fn to_text(m: &FiniteMagma) -> String {
    let mut s = format!("order {}\n", m.order());
    for a in 0..m.order() {
        let row: Vec<String> = m.row(a).iter().map(usize::to_string).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Parses either format, deciding by the first non-blank character.
pub fn parse_magma(src: &str) -> Result<FiniteMagma> {
    if src.trim_start().starts_with('{') {
        serde_json::from_str::<MagmaFile>(src)?.to_magma()
    } else {
        parse_text(src)
    }
}

pub fn read_magma(path: &Path) -> Result<FiniteMagma> {
    let src = std::fs::read_to_string(path)?;
    parse_magma(&src).map_err(|e| match e {
        QgError::Parse(msg) => QgError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_factors(path: &Path) -> Result<FactorsFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Canonical JSON for any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(depth));
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(depth + 1), Value::from(k.as_str()));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(depth));
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn magma_to_json(m: &FiniteMagma, metadata: Option<Value>) -> String {
    to_canonical_json(&MagmaFile::new(m, metadata)).expect("magma files serialize")
}
