//! Dense complex square matrices and the shared JSON interchange format.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A validated dense complex square matrix, the substrate for all operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Validates squareness and finiteness of all entries. Dim 0 is allowed
    /// here (degenerate blocks of decompositions are legitimately empty);
    /// the JSON boundary rejects it.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare);
        }
        if !inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    /// Builds a matrix from real entries in row-major order.
    pub fn from_real_rows(dim: usize, rows: &[&[f64]]) -> Result<Self> {
        let mut m = DMatrix::zeros(dim, dim);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_ref(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.inner
    }
}

/// Frobenius norm; dominates the operator norm, so tolerances stated for the
/// operator norm are checked conservatively.
pub fn fro_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn adjoint_defect(m: &DMatrix<Complex64>) -> f64 {
    fro_norm(&(m - m.adjoint()))
}

/// (M + M^dagger)/2.
pub fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

pub fn trace_re(m: &DMatrix<Complex64>) -> f64 {
    m.trace().re
}

pub fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| [self.inner[(i, j)].re, self.inner[(i, j)].im]).collect())
            .collect();
        MatrixJson { dim: n, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.dim == 0 {
            return Err(D::Error::custom("dim must be at least 1"));
        }
        if raw.entries.len() != raw.dim || raw.entries.iter().any(|r| r.len() != raw.dim) {
            return Err(D::Error::custom("entries do not form a dim x dim array"));
        }
        let m = DMatrix::from_fn(raw.dim, raw.dim, |i, j| {
            Complex64::new(raw.entries[i][j][0], raw.entries[i][j][1])
        });
        ComplexMatrix::new(m).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(ComplexMatrix::new(m), Err(Error::NotSquare)));
    }

    #[test]
    fn rejects_nan() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(ComplexMatrix::new(m), Err(Error::NonFinite)));
    }

    #[test]
    fn json_round_trip_preserves_values() {
        let m = ComplexMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.25, -0.5),
                Complex64::new(0.25, 0.5),
                Complex64::new(0.0, 0.0),
            ],
        ))
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_ragged_entries() {
        let text = r#"{"dim": 2, "entries": [[[1,0]], [[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }
}
