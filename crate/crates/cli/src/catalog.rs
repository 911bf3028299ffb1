//! Named inputs loaded from a JSON catalog file.
//!
//! ```json
//! {"entries": {
//!   "f": {"type": "function", "num": [[2, 0], [-1, 0]], "den": [[1, 0]], "cyclicity": "NonCyclic"},
//!   "h": {"type": "sampled", "coeffs": [...], "cyclicity": "CyclicDeclared", "label": "..."},
//!   "G": {"type": "symbol", "rows": [[{"num": ..., "den": ...}, {"samples": [...]}], ...]},
//!   "v": {"type": "vector", "items": [{"num": ..., "den": ...}, {"coeffs": ..., "cyclicity": ...}]}
//! }}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use toepkern::boundary::DEFAULT_GRID;
use toepkern::json::{
    complex, complex_from, cyclicity_str, hardy_from_json, hardy_to_json, sampled_from_json, symbol_entry_to_json,
    symbol_from_json, to_string,
};
use toepkern::{AnalyticFn, BoundaryGrid, Cyclicity, Error, HardyFunction, MatrixSymbol, Result, SampledFunction, SymbolEntry};

/// Taylor coefficients of a sampled function, kept verbatim so that
/// saving reproduces the file.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    pub coeffs: Vec<Complex64>,
    pub cyclicity: Cyclicity,
    pub label: String,
}

impl Sampled {
    pub fn at(&self, n: usize) -> Result<SampledFunction> {
        Ok(SampledFunction::new(BoundaryGrid::from_laurent(n, 0, &self.coeffs)?, self.cyclicity, self.label.as_str()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Function(HardyFunction),
    Sampled(Sampled),
}

impl Item {
    /// The coordinate on an `n`-point grid.
    pub fn to_analytic(&self, n: usize) -> Result<AnalyticFn> {
        match self {
            Item::Function(h) => Ok(AnalyticFn::Rational(h.value().clone())),
            Item::Sampled(s) => Ok(AnalyticFn::Sampled(s.at(n)?)),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Item::Function(h) => hardy_to_json(h),
            Item::Sampled(s) => json!({
                "coeffs": s.coeffs.iter().copied().map(complex).collect::<Vec<_>>(),
                "cyclicity": cyclicity_str(s.cyclicity),
                "label": s.label,
            }),
        }
    }

    fn from_json(v: &Value, pointer: &str) -> Result<Self> {
        if v.get("coeffs").is_some() {
            // Validates the coefficients and the flag.
            let f = sampled_from_json(v, pointer, DEFAULT_GRID)?;
            let coeffs = v["coeffs"]
                .as_array()
                .into_iter()
                .flatten()
                .enumerate()
                .map(|(i, c)| complex_from(c, &format!("{pointer}/coeffs/{i}")))
                .collect::<Result<_>>()?;
            Ok(Item::Sampled(Sampled { coeffs, cyclicity: f.cyclicity(), label: f.label().to_string() }))
        } else {
            Ok(Item::Function(hardy_from_json(v, pointer)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Item(Item),
    Symbol(MatrixSymbol),
    Vector(Vec<Item>),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Provenance {
    pub source: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Catalog {
    entries: Vec<(String, Entry)>,
    pub provenance: Provenance,
}

fn schema_err(pointer: &str, msg: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.to_string(), msg: msg.into() }
}

fn escape(name: &str) -> String {
    name.replace('~', "~0").replace('/', "~1")
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    /// Adds an entry; names must be unique.
    pub fn insert(&mut self, name: impl Into<String>, entry: Entry) -> Result<()> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(schema_err(&format!("/entries/{}", escape(&name)), "duplicate entry name"));
        }
        self.entries.push((name, entry));
        Ok(())
    }

    pub fn from_str(text: &str, source: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| schema_err("", format!("line {} column {}: {e}", e.line(), e.column())))?;
        let entries = doc
            .get("entries")
            .and_then(Value::as_object)
            .ok_or_else(|| schema_err("/entries", "expected an object"))?;
        let mut cat = Catalog::new();
        for (name, v) in entries {
            let pointer = format!("/entries/{}", escape(name));
            let ty = v.get("type").and_then(Value::as_str).ok_or_else(|| schema_err(&pointer, "missing 'type'"))?;
            let entry = match ty {
                "function" => Entry::Item(Item::Function(hardy_from_json(v, &pointer)?)),
                "sampled" => Entry::Item(Item::from_json(v, &pointer)?),
                "symbol" => {
                    let rows = v.get("rows").ok_or_else(|| schema_err(&pointer, "missing field 'rows'"))?;
                    let grid = symbol_grid_size(rows);
                    Entry::Symbol(symbol_from_json(rows, &format!("{pointer}/rows"), grid)?)
                }
                "vector" => {
                    let items = v
                        .get("items")
                        .and_then(Value::as_array)
                        .ok_or_else(|| schema_err(&pointer, "missing array 'items'"))?;
                    Entry::Vector(
                        items
                            .iter()
                            .enumerate()
                            .map(|(i, x)| Item::from_json(x, &format!("{pointer}/items/{i}")))
                            .collect::<Result<_>>()?,
                    )
                }
                other => return Err(schema_err(&format!("{pointer}/type"), format!("unknown type '{other}'"))),
            };
            cat.insert(name.clone(), entry)?;
        }
        cat.provenance = Provenance { source: source.to_string(), sha256: format!("{:x}", Sha256::digest(text.as_bytes())) };
        Ok(cat)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| schema_err("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (name, entry) in &self.entries {
            let v = match entry {
                Entry::Item(item) => tagged(if matches!(item, Item::Function(_)) { "function" } else { "sampled" }, item.to_json()),
                Entry::Symbol(g) => {
                    let n = g.dim();
                    let rows: Vec<Value> = (0..n)
                        .map(|i| Value::Array((0..n).map(|j| symbol_entry_to_json(g.entry(i, j))).collect()))
                        .collect();
                    json!({"type": "symbol", "rows": rows})
                }
                Entry::Vector(items) => {
                    json!({"type": "vector", "items": items.iter().map(Item::to_json).collect::<Vec<_>>()})
                }
            };
            m.insert(name.clone(), v);
        }
        json!({ "entries": m })
    }

    /// Deterministic file contents.
    pub fn to_text(&self) -> String {
        to_string(&self.to_json())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| schema_err("", format!("cannot write {}: {e}", path.display())))
    }
}

fn tagged(ty: &str, v: Value) -> Value {
    let mut m = Map::new();
    m.insert("type".into(), Value::from(ty));
    if let Value::Object(rest) = v {
        m.extend(rest);
    }
    Value::Object(m)
}

/// Grid size of the first sampled entry, or the default.
fn symbol_grid_size(rows: &Value) -> usize {
    rows.as_array()
        .into_iter()
        .flatten()
        .filter_map(Value::as_array)
        .flatten()
        .find_map(|e| e.get("samples").and_then(Value::as_array).map(Vec::len))
        .unwrap_or(DEFAULT_GRID)
}

/// Entry symbol rebuilt on an `n`-point grid; sampled entries must
/// already have that size.
pub fn symbol_at(g: &MatrixSymbol, n: usize) -> Result<MatrixSymbol> {
    if g.grid_size() == n {
        return Ok(g.clone());
    }
    let entries: Vec<SymbolEntry> = g.entries().to_vec();
    MatrixSymbol::new(g.dim(), entries, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_catalog() {
        let c = Catalog::from_str(r#"{"entries":{}}"#, "mem").unwrap();
        assert!(c.is_empty());
        assert_eq!(c.provenance.sha256.len(), 64);
    }

    #[test]
    fn circle_pole_names_entry() {
        let text = r#"{"entries":{"bad":{"type":"function","num":[[1,0]],"den":[[1,0],[-1,0]]}}}"#;
        match Catalog::from_str(text, "mem") {
            Err(Error::Schema { pointer, msg }) => {
                assert_eq!(pointer, "/entries/bad");
                assert!(msg.contains("NotHardy"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_type_and_bad_json() {
        let e = Catalog::from_str(r#"{"entries":{"x":{"type":"blob"}}}"#, "mem").unwrap_err();
        assert_eq!(e, Error::Schema { pointer: "/entries/x/type".into(), msg: "unknown type 'blob'".into() });
        assert!(matches!(Catalog::from_str("{\n  \"entries\": [", "mem"), Err(Error::Schema { msg, .. }) if msg.starts_with("line 2")));
    }

    #[test]
    fn duplicate_insert_fails() {
        let mut c = Catalog::new();
        let f = toepkern::hardy::classify_and_factor(&toepkern::RationalFn::one()).unwrap();
        c.insert("a", Entry::Item(Item::Function(f.clone()))).unwrap();
        assert!(c.insert("a", Entry::Item(Item::Function(f))).is_err());
    }
}
