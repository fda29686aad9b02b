//! Text formats: real formatting, serde helpers, and the curve TSV.

use std::fmt;
use std::path::Path;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{format_rational, parse_rational, ArithError, Rational};
use crate::elliptic::{EllipticError, Point, WeierstrassModel};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats a real with 12 significant digits, `%g` style.
pub fn format_real(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

/// A real that serializes as a 12-significant-digit decimal string.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Real(pub f64);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_real(self.0))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_point<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format_point(p))
}

pub fn format_point(p: &Point) -> String {
    match p {
        Point::Infinity => "inf".into(),
        Point::Affine { x, y } => format!("({}, {})", format_rational(x), format_rational(y)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: expected 6 or 8 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: {source}")]
    Rational { line: usize, source: ArithError },
    #[error("line {line}: {source}")]
    Curve { line: usize, source: EllipticError },
    #[error("line {line}: generator ({x}, {y}) is not on the curve")]
    OffCurve { line: usize, x: String, y: String },
    #[error("line {line}: empty label")]
    EmptyLabel { line: usize },
    #[error("{path}: {message}")]
    Read { path: String, message: String },
}

/// One curve from a TSV file:
/// `label<TAB>a1<TAB>a2<TAB>a3<TAB>a4<TAB>a6[<TAB>gx<TAB>gy]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRecord {
    pub label: String,
    pub model: WeierstrassModel,
    pub generator: Option<Point>,
}

impl CurveRecord {
    pub fn to_tsv_line(&self) -> String {
        let mut fields = vec![self.label.clone()];
        fields.extend(self.model.coefficients().iter().map(format_rational));
        if let Some(Point::Affine { x, y }) = &self.generator {
            fields.push(format_rational(x));
            fields.push(format_rational(y));
        }
        fields.join("\t")
    }
}

/// Parses curve TSV text. Blank lines and `#` comments are skipped; CRLF
/// line endings are accepted.
pub fn parse_curves(text: &str) -> Result<Vec<CurveRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        if content.trim().is_empty() || content.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split('\t').map(str::trim).collect();
        if fields.len() != 6 && fields.len() != 8 {
            return Err(IngestError::FieldCount { line, found: fields.len() });
        }
        if fields[0].is_empty() {
            return Err(IngestError::EmptyLabel { line });
        }
        let rats = fields[1..]
            .iter()
            .map(|f| parse_rational(f))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| IngestError::Rational { line, source })?;
        let [a1, a2, a3, a4, a6] = <[Rational; 5]>::try_from(rats[..5].to_vec()).expect("five coefficients");
        let model = WeierstrassModel::new(a1, a2, a3, a4, a6).map_err(|source| IngestError::Curve { line, source })?;
        let generator = if rats.len() == 7 {
            let p = Point::affine(rats[5].clone(), rats[6].clone());
            if !model.contains(&p) {
                return Err(IngestError::OffCurve { line, x: fields[6].into(), y: fields[7].into() });
            }
            Some(p)
        } else {
            None
        };
        out.push(CurveRecord { label: fields[0].to_string(), model, generator });
    }
    Ok(out)
}

pub fn ingest_curves(path: &Path) -> Result<Vec<CurveRecord>, IngestError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IngestError::Read { path: path.display().to_string(), message: e.to_string() })?;
    parse_curves(&text)
}

pub fn serialize_curves(records: &[CurveRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_tsv_line());
        s.push('\n');
    }
    s
}

/// Maps a row in the common `[a1,a2,a3,a4,a6]` bracket layout of public
/// curve tables (label, coefficient list, optional generator list) onto a
/// TSV line, e.g. `37.a1 [0,0,1,-1,0] [0,0]`.
pub fn convert_bracket_row(row: &str) -> Option<String> {
    let mut parts = row.split_whitespace();
    let label = parts.next()?;
    let list = |s: &str| -> Option<Vec<String>> {
        let inner = s.strip_prefix('[')?.strip_suffix(']')?;
        Some(inner.split(',').map(|t| t.trim().to_string()).collect())
    };
    let coeffs = list(parts.next()?)?;
    if coeffs.len() != 5 {
        return None;
    }
    let mut fields = vec![label.to_string()];
    fields.extend(coeffs);
    if let Some(g) = parts.next() {
        let g = list(g)?;
        if g.len() != 2 {
            return None;
        }
        fields.extend(g);
    }
    Some(fields.join("\t"))
}
