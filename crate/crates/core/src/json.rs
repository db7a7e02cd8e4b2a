//! Matrix and conjugation JSON.
//!
//! Matrix: `{"dim": n, "entries": [["p/q", "p/q+r/si", ...], ...]}`.
//! Conjugation: `{"u": <matrix>}`.

use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationJson {
    pub u: MatrixJson,
}

impl From<&QMatrix> for MatrixJson {
    fn from(m: &QMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m.rows().map(|r| r.iter().map(GaussianRational::to_wire).collect()).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for QMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        if j.entries.len() != j.dim {
            return Err(Error::Parse(format!("dim {} but {} rows", j.dim, j.entries.len())));
        }
        let rows = j
            .entries
            .iter()
            .map(|row| row.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QMatrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn matrix_to_json(m: &QMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix JSON serialization")
}

pub fn matrix_from_json(s: &str) -> Result<QMatrix> {
    let j: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    QMatrix::try_from(&j)
}

pub fn conjugation_to_json(c: &Conjugation) -> String {
    serde_json::to_string(&ConjugationJson { u: c.u().into() }).expect("conjugation JSON serialization")
}

pub fn conjugation_from_json(s: &str) -> Result<Conjugation> {
    let j: ConjugationJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Conjugation::new(QMatrix::try_from(&j.u)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unreduced_and_complex_entries() {
        let m = matrix_from_json(r#"{"dim": 2, "entries": [["2/4", "0/1+1/1i"], ["3", "-6/3-1/2i"]]}"#).unwrap();
        assert_eq!(m.get(0, 0), &GaussianRational::ratio(1, 2));
        assert_eq!(m.get(0, 1), &GaussianRational::i());
        assert_eq!(m.get(1, 1), &GaussianRational::complex(-2, 1, -1, 2));
        assert_eq!(
            matrix_to_json(&m),
            r#"{"dim":2,"entries":[["1/2","0/1+1/1i"],["3/1","-2/1-1/2i"]]}"#
        );
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(matrix_from_json(r#"{"dim": 2, "entries": [["1"]]}"#).is_err());
        assert!(matrix_from_json(r#"{"dim": 1, "entries": [["1", "2"]]}"#).is_err());
        assert!(matrix_from_json(r#"{"dim": 1, "entries": [["x"]]}"#).is_err());
        assert!(matrix_from_json(r#"{"entries": [["1"]]}"#).is_err());
    }

    #[test]
    fn conjugation_round_trip() {
        let c = Conjugation::flip(3);
        assert_eq!(conjugation_from_json(&conjugation_to_json(&c)).unwrap(), c);
        assert!(conjugation_from_json(r#"{"u": {"dim": 1, "entries": [["2"]]}}"#).is_err());
    }
}
