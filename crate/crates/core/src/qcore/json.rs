//! JSON encoding. Complex entries are `[re, im]` pairs; floats are written with 17 significant digits.

use std::io;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use super::linalg::{c64, CMat};
use super::{CompositeSpace, Observable, QError, State};

/// Compact formatter that prints every `f64` as `d.dddddddddddddddde[+-]x`.
#[derive(Default)]
pub struct FullPrecision(CompactFormatter);

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        // JSON has no infinities or NaN.
        if value.is_finite() {
            write!(writer, "{}", format_f64(value))
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision::default());
    value.serialize(&mut ser).expect("serialising to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn from_str<T: DeserializeOwned>(s: &str) -> Result<T, QError> {
    serde_json::from_str(s).map_err(|e| QError::Malformed(e.to_string()))
}

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMat, QError> {
    let n = rows.len();
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(QError::Malformed("ragged matrix".into()));
    }
    let mut m = CMat::zeros(n, cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            m[(i, j)] = c64(z[0], z[1]);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dims: Vec<usize>,
    pub matrix: JsonMatrix,
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson { dims: self.space().factor_dims.clone(), matrix: matrix_to_json(self.matrix()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = OperatorJson::deserialize(d)?;
        let space = CompositeSpace::new(raw.dims).map_err(serde::de::Error::custom)?;
        let m = matrix_from_json(&raw.matrix).map_err(serde::de::Error::custom)?;
        State::new(space, m).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson { dims: self.space().factor_dims.clone(), matrix: matrix_to_json(self.matrix()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = OperatorJson::deserialize(d)?;
        let space = CompositeSpace::new(raw.dims).map_err(serde::de::Error::custom)?;
        let m = matrix_from_json(&raw.matrix).map_err(serde::de::Error::custom)?;
        Observable::new(space, m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{max_abs, CVec};

    #[test]
    fn state_round_trip_is_exact() {
        let v = CVec::from_vec(vec![c64(0.3, 0.1), c64(-0.2, 0.7), c64(0.11, 0.0)]);
        let s = State::pure_normalized(CompositeSpace::single(3), &v).unwrap();
        let text = to_string(&s);
        assert!(text.starts_with("{\"dims\":[3],\"matrix\":"));
        let back: State = from_str(&text).unwrap();
        assert_eq!(max_abs(&(back.matrix() - s.matrix())), 0.0);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(1.0), "1.0000000000000000e0");
        assert_eq!(format_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_string(&vec![f64::INFINITY, f64::NAN, 2.0]), "[null,null,2.0000000000000000e0]");
    }

    #[test]
    fn rejects_non_state() {
        let bad = r#"{"dims":[2],"matrix":[[[2,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(from_str::<State>(bad).is_err());
    }
}
