//! JSON encodings with a fixed float format.
//!
//! Every finite float is written with 17 significant digits, so encoding
//! is deterministic and decoding recovers the exact bits. Non-finite
//! floats become `null`.

use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::boundary::{BoundaryGrid, SampledFunction};
use crate::error::{Error, Result};
use crate::hardy::{classify_and_factor, Cyclicity, FiniteBlaschke, HardyClass, HardyFunction};
use crate::maximal::MaximalityVerdict;
use crate::minimal::KminResult;
use crate::rational::{Polynomial, RationalFn};
use crate::toeplitz::{KernelBasis, MatrixSymbol, SymbolEntry};

/// Pretty printer that writes floats as `{:.16e}`.
pub struct FixedFloat<'a> {
    pretty: PrettyFormatter<'a>,
}

impl Default for FixedFloat<'_> {
    fn default() -> Self {
        FixedFloat { pretty: PrettyFormatter::with_indent(b"  ") }
    }
}

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

/// Deterministic text form, newline-terminated.
pub fn to_string<T: Serialize + ?Sized>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat::default());
    v.serialize(&mut ser).expect("serializing to memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn schema<T>(pointer: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Schema { pointer: pointer.to_string(), msg: msg.into() })
}

fn field<'a>(v: &'a Value, key: &str, pointer: &str) -> Result<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => schema(pointer, format!("missing field '{key}'")),
    }
}

fn array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) => Ok(a),
        None => schema(pointer, "expected an array"),
    }
}

/// Signed zeros are written as `+0`.
pub fn float(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex(c: Complex64) -> Value {
    Value::Array(vec![float(c.re), float(c.im)])
}

pub fn complex_from(v: &Value, pointer: &str) -> Result<Complex64> {
    let a = array(v, pointer)?;
    match (a.len(), a.first().and_then(Value::as_f64), a.get(1).and_then(Value::as_f64)) {
        (2, Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => schema(pointer, "expected [re, im]"),
    }
}

fn complex_list(v: &Value, pointer: &str) -> Result<Vec<Complex64>> {
    array(v, pointer)?
        .iter()
        .enumerate()
        .map(|(i, c)| complex_from(c, &format!("{pointer}/{i}")))
        .collect()
}

pub fn poly_to_json(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().copied().map(complex).collect())
}

pub fn poly_from_json(v: &Value, pointer: &str) -> Result<Polynomial> {
    Ok(Polynomial::new(complex_list(v, pointer)?))
}

pub fn rational_to_json(f: &RationalFn) -> Value {
    json!({ "num": poly_to_json(f.num()), "den": poly_to_json(f.den()) })
}

pub fn rational_from_json(v: &Value, pointer: &str) -> Result<RationalFn> {
    let num = poly_from_json(field(v, "num", pointer)?, &format!("{pointer}/num"))?;
    let den = poly_from_json(field(v, "den", pointer)?, &format!("{pointer}/den"))?;
    RationalFn::new(num, den).map_err(|e| Error::Schema { pointer: format!("{pointer}/den"), msg: e.to_string() })
}

pub fn blaschke_to_json(b: &FiniteBlaschke) -> Value {
    json!({
        "zeros": Value::Array(b.zeros().iter().copied().map(complex).collect()),
        "const": complex(b.constant()),
    })
}

pub fn blaschke_from_json(v: &Value, pointer: &str) -> Result<FiniteBlaschke> {
    let zeros = complex_list(field(v, "zeros", pointer)?, &format!("{pointer}/zeros"))?;
    let c = match v.get("const") {
        Some(c) => complex_from(c, &format!("{pointer}/const"))?,
        None => Complex64::new(1.0, 0.0),
    };
    FiniteBlaschke::new(zeros, c).map_err(|e| Error::Schema { pointer: pointer.to_string(), msg: e.to_string() })
}

pub fn cyclicity_str(c: Cyclicity) -> &'static str {
    match c {
        Cyclicity::NonCyclic => "NonCyclic",
        Cyclicity::CyclicDeclared => "CyclicDeclared",
        Cyclicity::Unknown => "Unknown",
    }
}

pub fn cyclicity_from(v: &Value, pointer: &str) -> Result<Cyclicity> {
    match v.as_str() {
        Some("NonCyclic") => Ok(Cyclicity::NonCyclic),
        Some("CyclicDeclared") => Ok(Cyclicity::CyclicDeclared),
        Some("Unknown") => Ok(Cyclicity::Unknown),
        _ => schema(pointer, "cyclicity must be NonCyclic, CyclicDeclared or Unknown"),
    }
}

/// `{"num", "den", "cyclicity"}`.
pub fn hardy_to_json(h: &HardyFunction) -> Value {
    let mut m = match rational_to_json(h.value()) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    m.insert("cyclicity".into(), Value::from(cyclicity_str(h.cyclicity())));
    Value::Object(m)
}

/// Decodes a Hardy-space function; poles in the closed disc and a
/// cyclicity tag that contradicts the rational class are schema errors.
pub fn hardy_from_json(v: &Value, pointer: &str) -> Result<HardyFunction> {
    let f = rational_from_json(v, pointer)?;
    let h = classify_and_factor(&f).map_err(|e| Error::Schema { pointer: pointer.to_string(), msg: e.to_string() })?;
    if h.class() != HardyClass::HpAll {
        return schema(pointer, "NotHardy: pole in the closed disc");
    }
    if let Some(c) = v.get("cyclicity") {
        let declared = cyclicity_from(c, &format!("{pointer}/cyclicity"))?;
        if declared != h.cyclicity() {
            return schema(&format!("{pointer}/cyclicity"), "rational functions are NonCyclic");
        }
    }
    Ok(h)
}

/// `{"samples": [[re, im], ...]}` on the grid points `e^{2πik/N}`.
pub fn grid_to_json(g: &BoundaryGrid) -> Value {
    json!({ "samples": Value::Array(g.samples().iter().copied().map(complex).collect()) })
}

pub fn grid_from_json(v: &Value, pointer: &str) -> Result<BoundaryGrid> {
    let samples = complex_list(field(v, "samples", pointer)?, &format!("{pointer}/samples"))?;
    BoundaryGrid::from_samples(samples).map_err(|e| Error::Schema { pointer: pointer.to_string(), msg: e.to_string() })
}

/// `{"coeffs": [[re, im], ...], "cyclicity", "label"}` with Taylor
/// coefficients from degree 0.
pub fn sampled_to_json(s: &SampledFunction) -> Value {
    let g = s.grid();
    let top = (0..(g.n() / 2) as i64).rev().find(|&k| g.coeff(k).norm() != 0.0).unwrap_or(0);
    json!({
        "coeffs": Value::Array((0..=top).map(|k| complex(g.coeff(k))).collect()),
        "cyclicity": cyclicity_str(s.cyclicity()),
        "label": s.label(),
    })
}

pub fn sampled_from_json(v: &Value, pointer: &str, grid: usize) -> Result<SampledFunction> {
    let coeffs = complex_list(field(v, "coeffs", pointer)?, &format!("{pointer}/coeffs"))?;
    let cyclicity = cyclicity_from(field(v, "cyclicity", pointer)?, &format!("{pointer}/cyclicity"))?;
    let label = v.get("label").and_then(Value::as_str).unwrap_or("sampled");
    let g = BoundaryGrid::from_laurent(grid, 0, &coeffs)
        .map_err(|e| Error::Schema { pointer: format!("{pointer}/coeffs"), msg: e.to_string() })?;
    Ok(SampledFunction::new(g, cyclicity, label))
}

pub fn symbol_entry_to_json(e: &SymbolEntry) -> Value {
    match e {
        SymbolEntry::Rational(f) => rational_to_json(f),
        SymbolEntry::Grid(g) => grid_to_json(g),
    }
}

/// Rows of rational-or-grid encodings.
pub fn symbol_to_json(g: &MatrixSymbol) -> Value {
    let n = g.dim();
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| symbol_entry_to_json(g.entry(i, j))).collect()))
            .collect(),
    )
}

pub fn symbol_from_json(v: &Value, pointer: &str, grid: usize) -> Result<MatrixSymbol> {
    let rows = array(v, pointer)?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{pointer}/{i}");
        let row = array(row, &rp)?;
        if row.len() != n {
            return schema(&rp, "symbol must be square");
        }
        for (j, e) in row.iter().enumerate() {
            let ep = format!("{rp}/{j}");
            entries.push(if e.get("samples").is_some() {
                SymbolEntry::Grid(grid_from_json(e, &ep)?)
            } else {
                SymbolEntry::Rational(rational_from_json(e, &ep)?)
            });
        }
    }
    MatrixSymbol::new(n, entries, grid).map_err(|e| Error::Schema { pointer: pointer.to_string(), msg: e.to_string() })
}

pub fn kmin_to_json(r: &KminResult) -> Value {
    json!({
        "kind": match r.kind {
            crate::minimal::KminKind::Symbol => "Symbol",
            crate::minimal::KminKind::WholeSpace => "WholeSpace",
        },
        "branch": r.branch.as_str(),
        "symbol": r.symbol.as_ref().map(symbol_to_json).unwrap_or(Value::Null),
        "theta": r.theta.as_ref().map(blaschke_to_json).unwrap_or(Value::Null),
        "warnings": r.warnings,
        "residuals": Value::Array(r.residuals.iter().copied().map(float).collect()),
    })
}

pub fn kernel_to_json(b: &KernelBasis) -> Value {
    json!({
        "dim": b.dim(),
        "truncation": b.order(),
        "tol": float(b.tol()),
        "gap": float(b.gap()),
        "singular_values": Value::Array(b.singular_values().iter().copied().map(float).collect()),
        "residuals": Value::Array(b.residuals().iter().copied().map(float).collect()),
    })
}

pub fn verdict_to_json(v: &MaximalityVerdict) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), serde_json::to_value(v.status).expect("enum serializes"));
    m.insert("dim_at_zero".into(), Value::from(v.dim_at_zero));
    m.insert("evidence".into(), serde_json::to_value(&v.evidence).expect("evidence serializes"));
    m.insert(
        "witness".into(),
        match &v.witness {
            Some(w) => Value::Array(w.iter().map(grid_to_json).collect()),
            None => Value::Null,
        },
    );
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_digits() {
        let s = to_string(&json!([0.1, 1.0, -2.5e-300]));
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("1.0000000000000000e0"));
        assert!(s.contains("-2.5000000000000000e-300"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0].as_f64().unwrap().to_bits(), 0.1f64.to_bits());
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(float(f64::INFINITY), Value::Null);
    }

    #[test]
    fn rational_round_trip_is_bit_exact() {
        let f = &RationalFn::from_poly(Polynomial::new(vec![Complex64::new(0.1, 0.7), Complex64::new(1.0 / 3.0, 0.0)]))
            / &RationalFn::from_poly(Polynomial::from_real(&[3.0, -1.0]));
        let text = to_string(&rational_to_json(&f));
        let back = rational_from_json(&serde_json::from_str(&text).unwrap(), "").unwrap();
        assert_eq!(back, f);
        assert_eq!(to_string(&rational_to_json(&back)), text);
    }

    #[test]
    fn blaschke_and_hardy() {
        let b = FiniteBlaschke::from_zeros(vec![Complex64::new(0.5, 0.0)]).unwrap();
        let v = blaschke_to_json(&b);
        assert_eq!(blaschke_from_json(&v, "").unwrap(), b);
        let bad = json!({"num": [[1.0, 0.0]], "den": [[1.0, 0.0], [-1.0, 0.0]]});
        match hardy_from_json(&bad, "/entries/f") {
            Err(Error::Schema { pointer, msg }) => {
                assert_eq!(pointer, "/entries/f");
                assert!(msg.contains("NotHardy"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symbol_with_grid_entry() {
        let g = MatrixSymbol::new(
            1,
            vec![SymbolEntry::Grid(BoundaryGrid::sample_fn(256, |z| z.conj()).unwrap())],
            256,
        )
        .unwrap();
        let v = symbol_to_json(&g);
        assert_eq!(symbol_from_json(&v, "", 256).unwrap(), g);
        assert!(matches!(symbol_from_json(&json!([[1]]), "/s", 256), Err(Error::Schema { .. })));
    }
}
