//! Validation and check reports, and the JSON writer used for every report.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

/// Version stamped on every JSON document the crate emits.
pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Which axiom or table rule an instance violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    LeftUnit,
    RightUnit,
    Equivariance,
    /// A table entry refers to unknown labels or has mismatched colors.
    MalformedTable,
    /// A structure matrix has the wrong shape or an operation is unassigned.
    Shape,
    /// An algebra structure map disagrees with a recorded composite.
    Compatibility,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub instance: String,
    /// Coefficient or matrix-norm discrepancy; infinite when the instance
    /// could not be evaluated at all.
    #[serde(with = "lossless_f64")]
    pub discrepancy: f64,
}

/// Outcome of validating an operad or algebra. An empty violation list
/// means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub violations: Vec<Violation>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// Number of axiom instances that were evaluated.
    #[serde(default)]
    pub instances_checked: usize,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            ..Self::default()
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: Axiom, instance: impl Into<String>, discrepancy: f64) {
        self.violations.push(Violation {
            axiom,
            instance: instance.into(),
            discrepancy,
        });
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }

    pub fn absorb(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
        self.instances_checked += other.instances_checked;
    }
}

/// Outcome of one compatibility check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub check: String,
    pub pass: bool,
    pub dimensions: BTreeMap<String, usize>,
    #[serde(with = "lossless_f64")]
    pub max_deviation: f64,
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            check: check.into(),
            pass: true,
            dimensions: BTreeMap::new(),
            max_deviation: 0.0,
            details: Vec::new(),
        }
    }

    pub fn dim(&mut self, key: impl Into<String>, value: usize) {
        self.dimensions.insert(key.into(), value);
    }

    /// Records a deviation; fails the report when it reaches `bound` or is
    /// not finite.
    pub fn deviation(&mut self, what: impl AsRef<str>, value: f64, bound: f64) {
        if !value.is_finite() || value >= bound {
            self.fail(format!("{}: deviation {value:e} exceeds {bound:e}", what.as_ref()));
        }
        if value.is_nan() || value > self.max_deviation {
            self.max_deviation = if value.is_nan() { f64::INFINITY } else { value };
        }
    }

    pub fn fail(&mut self, detail: impl Into<String>) {
        self.pass = false;
        self.details.push(detail.into());
    }

    pub fn note(&mut self, detail: impl Into<String>) {
        self.details.push(detail.into());
    }

    /// Requires two dimensions to agree.
    pub fn expect_equal(&mut self, what: &str, left: usize, right: usize) {
        if left != right {
            self.fail(format!("{what}: {left} != {right}"));
        }
    }
}

/// Infinite and NaN deviations are written as strings so the JSON stays
/// valid.
mod lossless_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad float `{other}`"))),
            },
        }
    }
}

/// Formatter that prints every float with 17 significant digits.
struct PreciseFormatter<F> {
    inner: F,
}

impl<F: serde_json::ser::Formatter> serde_json::ser::Formatter for PreciseFormatter<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            return w.write_all(if value.is_sign_negative() { b"-0.0" } else { b"0.0" });
        }
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_key(w)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Pretty-printed JSON with 17 significant digits per float.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = PreciseFormatter {
        inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .expect("report types always serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let xs = vec![0.1, 1.0 / 3.0, -2.5e-300, 6.0, 1e22, -0.0];
        let s = to_json(&xs);
        assert!(s.contains("1.0000000000000001e-1"));
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, xs);
    }

    #[test]
    fn check_report_round_trip() {
        let mut r = CheckReport::new("demo");
        r.dim("left", 2);
        r.deviation("x", 1e-12, 1e-9);
        assert!(r.pass);
        r.deviation("y", f64::INFINITY, 1e-9);
        assert!(!r.pass);
        let back: CheckReport = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(back.max_deviation, f64::INFINITY);
        assert_eq!(back.check, "demo");
    }
}
