//! Frames as invertible matrices, their induced action on exterior powers,
//! and the `ψ` maps: matrices of minors with column 0 always selected.
//!
//! Row and column indices of a [`GroupElement`] both run from 0. Minors are
//! taken at rows `R` and columns `C` of `g`.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{binomial, minor, subsets, subsets_in};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Invertible `m × m` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::SizeMismatch(format!(
                "frame must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let det = matrix.det()?;
        if det.is_negligible(matrix.max_abs().powi(matrix.rows() as i32)) {
            return Err(Error::Singular);
        }
        Ok(GroupElement { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        GroupElement {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }

    pub fn det(&self) -> S {
        self.matrix.det().expect("square by construction")
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            matrix: self.matrix.inverse().expect("invertible by construction"),
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(GroupElement {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<GroupElement<T>> {
        GroupElement::new(self.matrix.map(f))
    }

    /// Random invertible matrix with integer entries in `[-range, range]`.
    pub fn random(dim: usize, range: i64, rng: &mut impl Rng) -> Self {
        loop {
            let m = Matrix::from_fn(dim, dim, |_, _| S::from_i64(rng.random_range(-range..=range)));
            if let Ok(g) = Self::new(m) {
                return g;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        matrix_to_json(&self.matrix)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::new(matrix_from_json(v)?)
    }
}

pub(crate) fn matrix_from_json<S: Scalar>(v: &Value) -> Result<Matrix<S>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Json("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Json("matrix row must be an array".into()))?
                .iter()
                .map(S::from_json)
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub(crate) fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|row| row.iter().map(Scalar::to_json).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// Induced action of `g` on `Λ^{p+1}`: entry `(R, C)` is `minor(g, R, C)`
/// over lexicographic `(p+1)`-subsets.
pub fn compound_matrix<S: Scalar>(g: &Matrix<S>, p: usize) -> Result<Matrix<S>> {
    compound(g, p + 1)
}

/// `k`-th compound of an arbitrary square matrix.
pub(crate) fn compound<S: Scalar>(g: &Matrix<S>, k: usize) -> Result<Matrix<S>> {
    let m = g.rows();
    if k > m || !g.is_square() {
        return Err(Error::OutOfRange(format!("compound of order {k} in dimension {m}")));
    }
    let idx = subsets(m, k);
    let mut out = Matrix::zeros(idx.len(), idx.len());
    for (i, r) in idx.iter().enumerate() {
        for (j, c) in idx.iter().enumerate() {
            out[(i, j)] = minor(g, r, c)?;
        }
    }
    Ok(out)
}

/// Matrix of `ψ_p(g)`: rows are `(p+1)`-subsets of `0..m`, columns are
/// `p`-subsets of `1..m`, entry `minor(g, R, {0} ∪ J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiMatrix<S> {
    dim: usize,
    degree: usize,
    entries: Matrix<S>,
}

impl<S: Scalar> PsiMatrix<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &Matrix<S> {
        &self.entries
    }

    pub fn row_labels(&self) -> Vec<Vec<usize>> {
        subsets(self.dim, self.degree + 1)
    }

    pub fn col_labels(&self) -> Vec<Vec<usize>> {
        subsets_in(1, self.dim, self.degree)
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[(row, col)]
    }
}

pub fn psi<S: Scalar>(g: &GroupElement<S>, p: usize) -> Result<PsiMatrix<S>> {
    let m = g.dim();
    if p >= m {
        return Err(Error::OutOfRange(format!("psi degree {p} in dimension {m}")));
    }
    let rows = subsets(m, p + 1);
    let cols = subsets_in(1, m, p);
    let mut entries = Matrix::zeros(binomial(m, p + 1), binomial(m - 1, p));
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in cols.iter().enumerate() {
            let mut full = Vec::with_capacity(p + 1);
            full.push(0);
            full.extend_from_slice(c);
            entries[(i, j)] = minor(g.matrix(), r, &full)?;
        }
    }
    Ok(PsiMatrix {
        dim: m,
        degree: p,
        entries,
    })
}
