//! JSON encodings shared by every report: complex numbers are `[re, im]`
//! pairs, vectors are arrays of pairs, matrices are arrays of rows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Version stamped into every JSON document the crate emits.
pub const SCHEMA_VERSION: u32 = 1;

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn vector_pairs(v: &DVector<Complex64>) -> Vec<[f64; 2]> {
    v.iter().copied().map(pair).collect()
}

pub fn matrix_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

pub fn vector_from_pairs(pairs: &[[f64; 2]]) -> DVector<Complex64> {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|p| Complex64::new(p[0], p[1])))
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Option<DMatrix<Complex64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return None;
    }
    Some(DMatrix::from_fn(n, m, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

/// `#[serde(with = "serial::cvec")]`
pub mod cvec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        vector_pairs(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(vector_from_pairs(&pairs))
    }
}

/// `#[serde(with = "serial::cmat")]`
pub mod cmat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        matrix_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        matrix_from_rows(&rows).ok_or_else(|| serde::de::Error::custom("ragged matrix rows"))
    }
}
