//! JSON encodings for matrices and isometries.
//!
//! Matrices are `{"rows", "cols", "re", "im"}` with row-major real and
//! imaginary parts. Isometries are `{"d", "k", "kraus": [matrix, ...]}`.

use serde::{Deserialize, Serialize};

use crate::core::isometry::Isometry;
use crate::core::linalg::*;
use crate::error::{QmcError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut re = Vec::with_capacity(m.len());
        let mut im = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), re, im }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(QmcError::DimensionMismatch(format!(
                "matrix payload has {} / {} entries, expected {n}",
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let t = i * self.cols + j;
            c(self.re[t], self.im[t])
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryJson {
    pub d: usize,
    pub k: usize,
    pub kraus: Vec<MatrixJson>,
}

impl IsometryJson {
    pub fn from_isometry(v: &Isometry) -> Self {
        IsometryJson {
            d: v.d(),
            k: v.k(),
            kraus: v.kraus().iter().map(MatrixJson::from_matrix).collect(),
        }
    }

    pub fn to_isometry(&self) -> Result<Isometry> {
        if self.kraus.len() != self.k {
            return Err(QmcError::UnitDimMismatch(format!(
                "k = {} but {} Kraus operators given",
                self.k,
                self.kraus.len()
            )));
        }
        let kraus = self
            .kraus
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        if kraus.iter().any(|m| m.nrows() != self.d || m.ncols() != self.d) {
            return Err(QmcError::DimensionMismatch(format!(
                "Kraus operators must be {0}x{0}",
                self.d
            )));
        }
        Isometry::from_kraus(kraus)
    }
}

/// `[re, im]` pair used for scalars in reports.
pub fn complex_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn matrix_to_value(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("serialisable")
}

pub fn isometry_from_str(s: &str) -> Result<Isometry> {
    let j: IsometryJson = serde_json::from_str(s)?;
    j.to_isometry()
}

pub fn matrix_from_str(s: &str) -> Result<ComplexMatrix> {
    let j: MatrixJson = serde_json::from_str(s)?;
    j.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = complex_matrix(2, 3, &[c(0.1, -1e-17), c(1.0 / 3.0, 2.0), cr(-7.25), c(0.0, 1e300), cr(1e-15), c(3.0, 0.5)]);
        let s = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
        assert_eq!(matrix_from_str(&s).unwrap(), m);
    }

    #[test]
    fn isometry_round_trip() {
        let v = Isometry::from_kraus(vec![
            real_matrix(2, 2, &[0.0, 0.6, 0.0, 0.0]),
            complex_matrix(2, 2, &[cr(0.0), c(0.0, 0.8), cr(1.0), cr(0.0)]),
        ])
        .unwrap();
        let s = serde_json::to_string(&IsometryJson::from_isometry(&v)).unwrap();
        assert_eq!(isometry_from_str(&s).unwrap(), v);
    }

    #[test]
    fn malformed_payload_rejected() {
        let bad = r#"{"rows":2,"cols":2,"re":[1,0,0],"im":[0,0,0,0]}"#;
        assert_eq!(matrix_from_str(bad).unwrap_err().kind(), "DimensionMismatch");
    }
}
