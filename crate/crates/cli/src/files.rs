//! JSON problem and report files.
//!
//! Reals are written with 17 significant digits so that every `f64`
//! survives a write and read unchanged.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::{Map, Value};

use t2soco::solver::StartPoint;
use t2soco::{BlockShape, ConeVector, ProblemData};

/// An input problem that cannot be used, with a diagnostic naming the
/// offending line or field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

/// Text of a real with 17 significant digits; `null` for non-finite values.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn serialize_real<S: Serializer>(v: f64, ser: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_real(v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(ser)
}

mod sig17 {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn real<S: Serializer>(v: &f64, ser: S) -> Result<S::Ok, S::Error> {
        super::serialize_real(*v, ser)
    }

    struct Real(f64);

    impl serde::Serialize for Real {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            super::serialize_real(self.0, ser)
        }
    }

    pub fn reals<S: Serializer>(v: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for &t in v {
            seq.serialize_element(&Real(t))?;
        }
        seq.end()
    }

    #[allow(clippy::ref_option)]
    pub fn opt_reals<S: Serializer>(v: &Option<Vec<f64>>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => reals(v, ser),
            None => ser.serialize_none(),
        }
    }
}

/// A type-2 (or, after transformation, tagged) conic problem
/// `min c'x  s.t.  Ax = b`, `x` in the product of cones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemFile {
    pub m: usize,
    pub blocks: Vec<usize>,
    /// Row-major `m x n` matrix.
    #[serde(rename = "A", serialize_with = "sig17::reals")]
    pub a: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub b: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub c: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig17::opt_reals")]
    pub x0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig17::opt_reals")]
    pub y0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig17::opt_reals")]
    pub s0: Option<Vec<f64>>,
    /// One tag per block; absent means every block is `"type2"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<String>>,
}

pub const TYPE2_TAG: &str = "type2";

fn take_field<T: DeserializeOwned>(obj: &mut Map<String, Value>, key: &str) -> Result<Option<T>, InputError> {
    match obj.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v).map(Some).map_err(|e| InputError(format!("field \"{key}\": {e}"))),
    }
}

fn require<T>(v: Option<T>, key: &str) -> Result<T, InputError> {
    v.ok_or_else(|| InputError(format!("missing required key \"{key}\"")))
}

impl ProblemFile {
    /// Parses and validates a problem document.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| InputError(format!("malformed JSON at line {} column {}: {e}", e.line(), e.column())))?;
        let Value::Object(mut obj) = value else {
            return input_err("problem file must be a JSON object");
        };
        let m = require(take_field(&mut obj, "m")?, "m")?;
        let blocks = require(take_field(&mut obj, "blocks")?, "blocks")?;
        let a = require(take_field(&mut obj, "A")?, "A")?;
        let b = require(take_field(&mut obj, "b")?, "b")?;
        let c = require(take_field(&mut obj, "c")?, "c")?;
        let x0 = take_field(&mut obj, "x0")?;
        let y0 = take_field(&mut obj, "y0")?;
        let s0 = take_field(&mut obj, "s0")?;
        let cones = take_field(&mut obj, "cones")?;
        if let Some(key) = obj.keys().next() {
            return input_err(format!("unknown key \"{key}\""));
        }
        let p = Self { m, blocks, a, b, c, x0, y0, s0, cones };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Dimensional consistency, block sizes and start completeness.
    pub fn validate(&self) -> Result<(), InputError> {
        let n = self.n();
        if self.m == 0 {
            return input_err("field \"m\": must be at least 1");
        }
        if self.blocks.is_empty() {
            return input_err("field \"blocks\": needs at least one block");
        }
        if let Some(tags) = &self.cones {
            if tags.len() != self.blocks.len() {
                return input_err(format!("field \"cones\": {} tags for {} blocks", tags.len(), self.blocks.len()));
            }
        }
        for (j, &nj) in self.blocks.iter().enumerate() {
            if self.block_is_type2(j) && nj < 2 {
                return input_err(format!("field \"blocks\": type2 block {j} has size {nj}, need at least 2"));
            }
            if nj == 0 {
                return input_err(format!("field \"blocks\": block {j} is empty"));
            }
        }
        let expect = |key: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                input_err(format!("field \"{key}\": expected {want} entries, got {got}"))
            }
        };
        expect("A", self.a.len(), self.m * n)?;
        expect("b", self.b.len(), self.m)?;
        expect("c", self.c.len(), n)?;
        match (&self.x0, &self.y0, &self.s0) {
            (None, None, None) => {}
            (Some(x), Some(y), Some(s)) => {
                expect("x0", x.len(), n)?;
                expect("y0", y.len(), self.m)?;
                expect("s0", s.len(), n)?;
            }
            _ => {
                let missing: Vec<&str> = [("x0", self.x0.is_none()), ("y0", self.y0.is_none()), ("s0", self.s0.is_none())]
                    .iter()
                    .filter(|(_, absent)| *absent)
                    .map(|(k, _)| *k)
                    .collect();
                return input_err(format!("start is incomplete: missing {missing:?}; give all of x0, y0, s0 or none"));
            }
        }
        let finite = |key: &str, v: &[f64]| {
            if v.iter().all(|t| t.is_finite()) {
                Ok(())
            } else {
                input_err(format!("field \"{key}\": entries must be finite"))
            }
        };
        finite("A", &self.a)?;
        finite("b", &self.b)?;
        finite("c", &self.c)?;
        Ok(())
    }

    fn block_is_type2(&self, j: usize) -> bool {
        self.cones.as_ref().is_none_or(|t| t[j] == TYPE2_TAG)
    }

    /// Whether every block is a type-2 cone.
    pub fn all_type2(&self) -> bool {
        (0..self.blocks.len()).all(|j| self.block_is_type2(j))
    }

    fn ensure_type2(&self) -> Result<(), InputError> {
        if let Some(tags) = &self.cones {
            if let Some(t) = tags.iter().find(|t| t.as_str() != TYPE2_TAG) {
                return input_err(format!("field \"cones\": only \"type2\" blocks are supported here, found \"{t}\""));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<BlockShape, InputError> {
        BlockShape::new(self.blocks.clone()).map_err(|e| InputError(format!("field \"blocks\": {e}")))
    }

    /// The problem in solver form. Rejects non-type-2 tags and rank
    /// deficient `A`.
    pub fn to_problem(&self) -> Result<ProblemData, InputError> {
        self.ensure_type2()?;
        let n = self.n();
        let a = DMatrix::from_row_slice(self.m, n, &self.a);
        ProblemData::new(a, DVector::from_column_slice(&self.b), DVector::from_column_slice(&self.c), self.shape()?)
            .map_err(|e| InputError(format!("problem data: {e}")))
    }

    /// The start given in the file, if any.
    pub fn start(&self) -> Result<Option<StartPoint>, InputError> {
        let (Some(x), Some(y), Some(s)) = (&self.x0, &self.y0, &self.s0) else {
            return Ok(None);
        };
        let shape = self.shape()?;
        let x = ConeVector::new(shape.clone(), x.clone()).map_err(|e| InputError(format!("field \"x0\": {e}")))?;
        let s = ConeVector::new(shape, s.clone()).map_err(|e| InputError(format!("field \"s0\": {e}")))?;
        Ok(Some(StartPoint { x, y: DVector::from_column_slice(y), s }))
    }

    /// Builds a file from solver data, optionally with a start.
    pub fn from_problem(p: &ProblemData, start: Option<&StartPoint>) -> Self {
        let (m, n) = (p.m(), p.n());
        let a = (0..m).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| p.a[(i, k)]).collect();
        Self {
            m,
            blocks: p.shape.sizes().to_vec(),
            a,
            b: p.b.iter().copied().collect(),
            c: p.c.iter().copied().collect(),
            x0: start.map(|s| s.x.data().to_vec()),
            y0: start.map(|s| s.y.iter().copied().collect()),
            s0: start.map(|s| s.s.data().to_vec()),
            cones: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }
}

/// Linear residuals and measured gap of the returned point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualsOut {
    #[serde(serialize_with = "sig17::real")]
    pub primal: f64,
    #[serde(serialize_with = "sig17::real")]
    pub dual: f64,
    #[serde(serialize_with = "sig17::real")]
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationsOut {
    pub outer: usize,
    pub inner_total: usize,
    /// Inner iterations spent centering the start.
    pub initial_centering: usize,
    pub inner_per_outer: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsOut {
    #[serde(serialize_with = "sig17::real")]
    pub kappa: f64,
    #[serde(serialize_with = "sig17::real")]
    pub gamma: f64,
}

/// Theoretical iteration bound for the run's parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundOut {
    #[serde(rename = "L", serialize_with = "sig17::real")]
    pub l: f64,
    /// Bound on the total number of inner iterations.
    #[serde(serialize_with = "sig17::real")]
    pub value: f64,
    /// Bound on the inner iterations of one outer pass.
    #[serde(serialize_with = "sig17::real")]
    pub per_outer: f64,
    pub constants: ConstantsOut,
}

/// The result document of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub status: String,
    #[serde(serialize_with = "sig17::real")]
    pub objective: f64,
    #[serde(serialize_with = "sig17::real")]
    pub dual_objective: f64,
    #[serde(serialize_with = "sig17::reals")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub y: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub s: Vec<f64>,
    #[serde(serialize_with = "sig17::real")]
    pub mu: f64,
    /// `3Nμ`, the quantity the stopping rule compares with `ε`.
    #[serde(serialize_with = "sig17::real")]
    pub gap: f64,
    pub residuals: ResidualsOut,
    pub iterations: IterationsOut,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(serialize_with = "sig17::real")]
    pub wall_time_seconds: f64,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError(format!("report at line {} column {}: {e}", e.line(), e.column())))
    }
}

/// Optimal triple written next to a generated problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    #[serde(serialize_with = "sig17::reals")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub y: Vec<f64>,
    #[serde(serialize_with = "sig17::reals")]
    pub s: Vec<f64>,
    #[serde(serialize_with = "sig17::real")]
    pub objective: f64,
}

impl SolutionFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution files always serialize")
    }
}

/// A point for `transform --check-point`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PointFile {
    pub x: Vec<f64>,
}
