//! Multi-focal tensors: contract `⊗ᵢ ψ(gᵢ, pᵢ)` against an invariant.
//!
//! Axis `i` of a [`FocalTensor`] is indexed by the `pᵢ`-subsets of the
//! tangent indices `1..m`, lexicographic. Tangent multivectors are stored
//! with dimension `m - 1`, where index `i` stands for `ẽ_{i+1}`.

use serde_json::{json, Value};

use crate::coaction::{compound_matrix, psi, GroupElement, PsiMatrix};
use crate::error::{Error, Result};
use crate::exterior::{binomial, subset_rank, subsets, Multivector};
use crate::invariants::{for_each_tuple, Invariant};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FocalTensor<S> {
    dim: usize,
    signature: Vec<usize>,
    shape: Vec<usize>,
    data: Vec<S>,
}

impl<S: Scalar> FocalTensor<S> {
    pub fn zeros(dim: usize, signature: Vec<usize>) -> Self {
        let shape: Vec<usize> = signature.iter().map(|&p| binomial(dim - 1, p)).collect();
        let len = shape.iter().product();
        FocalTensor {
            dim,
            signature,
            shape,
            data: vec![S::zero(); len],
        }
    }

    pub fn from_data(dim: usize, signature: Vec<usize>, data: Vec<S>) -> Result<Self> {
        let mut t = Self::zeros(dim, signature);
        if data.len() != t.data.len() {
            return Err(Error::SizeMismatch(format!(
                "{} entries for shape {:?}",
                data.len(),
                t.shape
            )));
        }
        t.data = data;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[usize] {
        &self.signature
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Entries flattened with the last axis fastest.
    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn offset(&self, pos: &[usize]) -> usize {
        pos.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&p, &n)| acc * n + p)
    }

    pub fn get(&self, pos: &[usize]) -> &S {
        &self.data[self.offset(pos)]
    }

    pub fn set(&mut self, pos: &[usize], value: S) {
        let o = self.offset(pos);
        self.data[o] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        crate::scalar::max_magnitude(&self.data)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.clone() * s.clone();
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FocalTensor<T> {
        FocalTensor {
            dim: self.dim,
            signature: self.signature.clone(),
            shape: self.shape.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `Some(λ)` with `self = λ · other` when the tensors are proportional
    /// (exact in rational mode, relative tolerance in float mode).
    pub fn proportionality(&self, other: &Self) -> Option<S> {
        if self.shape != other.shape {
            return None;
        }
        let pivot = (0..other.data.len()).max_by(|&a, &b| {
            other.data[a]
                .magnitude()
                .partial_cmp(&other.data[b].magnitude())
                .expect("finite")
        })?;
        if other.data[pivot].is_zero() {
            return self.is_zero().then(S::zero);
        }
        let lambda = self.data[pivot].clone() / other.data[pivot].clone();
        let scale = self.max_abs().max(other.max_abs() * lambda.magnitude());
        let ok = self
            .data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a.clone() - lambda.clone() * b.clone()).is_negligible(scale));
        ok.then_some(lambda)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "signature": self.signature,
            "shape": self.shape,
            "data": self.nested(0, 0).1,
        })
    }

    fn nested(&self, axis: usize, start: usize) -> (usize, Value) {
        if axis == self.shape.len() {
            return (start + 1, self.data[start].to_json());
        }
        let stride: usize = self.shape[axis + 1..].iter().product();
        let items = (0..self.shape[axis])
            .map(|i| self.nested(axis + 1, start + i * stride).1)
            .collect();
        (start + self.shape[axis] * stride, Value::Array(items))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("tensor needs integer dim".into()))? as usize;
        if dim == 0 {
            return Err(Error::Json("tensor dim must be positive".into()));
        }
        let signature: Vec<usize> = v
            .get("signature")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("tensor needs signature".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Json("bad signature".into())))
            .collect::<Result<_>>()?;
        if signature.iter().any(|&p| p >= dim) {
            return Err(Error::Json(format!("signature {signature:?} too large for dim {dim}")));
        }
        let mut flat = Vec::new();
        let shape: Vec<usize> = signature.iter().map(|&p| binomial(dim - 1, p)).collect();
        flatten(v.get("data").ok_or_else(|| Error::Json("tensor needs data".into()))?, &shape, &mut flat)?;
        Self::from_data(dim, signature, flat)
    }
}

fn flatten<S: Scalar>(v: &Value, shape: &[usize], out: &mut Vec<S>) -> Result<()> {
    match shape.split_first() {
        None => {
            out.push(S::from_json(v)?);
            Ok(())
        }
        Some((&n, rest)) => {
            let items = v
                .as_array()
                .filter(|a| a.len() == n)
                .ok_or_else(|| Error::Json(format!("tensor data does not match axis length {n}")))?;
            items.iter().try_for_each(|item| flatten(item, rest, out))
        }
    }
}

/// An `n`-tuple of frames of common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTuple<S> {
    frames: Vec<GroupElement<S>>,
}

impl<S: Scalar> FrameTuple<S> {
    pub fn new(frames: Vec<GroupElement<S>>) -> Result<Self> {
        if let Some(first) = frames.first() {
            if let Some(bad) = frames.iter().find(|g| g.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: bad.dim(),
                });
            }
        }
        Ok(FrameTuple { frames })
    }

    pub fn frames(&self) -> &[GroupElement<S>] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// `data[J₁..Jₙ] = Σ_R I(R) Πᵢ ψ(gᵢ, pᵢ)[Rᵢ][Jᵢ]`.
pub fn multifocal<S: Scalar>(inv: &Invariant, frames: &FrameTuple<S>) -> Result<FocalTensor<S>> {
    if frames.len() != inv.arity() {
        return Err(Error::ArityMismatch {
            expected: inv.arity(),
            found: frames.len(),
        });
    }
    let m = inv.dim();
    if let Some(bad) = frames.frames().iter().find(|g| g.dim() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.dim(),
        });
    }
    let degrees = inv.tangent_degrees();
    let psis: Vec<PsiMatrix<S>> = frames
        .frames()
        .iter()
        .zip(&degrees)
        .map(|(g, &p)| psi(g, p))
        .collect::<Result<_>>()?;
    let mut out = FocalTensor::zeros(m, degrees.clone());
    let axes: Vec<Vec<usize>> = out.shape.iter().map(|&n| (0..n).collect()).collect();
    let terms: Vec<(Vec<usize>, S)> = inv
        .terms()
        .map(|(key, &c)| (key.iter().map(|r| subset_rank(m, r)).collect(), S::from_i64(c)))
        .collect();
    let mut cells = Vec::with_capacity(out.data.len());
    for_each_tuple(&axes, &mut |pos: &[usize]| {
        let mut total = S::zero();
        for (rows, c) in &terms {
            let mut term = c.clone();
            for (i, &r) in rows.iter().enumerate() {
                term = term * psis[i].get(r, pos[i]).clone();
                if term.is_zero() {
                    break;
                }
            }
            total = total + term;
        }
        cells.push(total);
    });
    out.data = cells;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    /// `(b₁, …, b_{n-1}) ↦ (b_{n-1}⋯b₁, b_{n-1}⋯b₂, …, b_{n-1}, id)`.
    Chain,
    /// `(g₁, g₂) ↦ (g₁⁻¹, id, g₂⁻¹)`.
    TrifocalInverse,
    /// `(g₁, g₂) ↦ (g₁, id, g₂)`; not bilinear in the Euclidean parameters.
    Naive,
}

pub fn apply_section<S: Scalar>(relative: &[GroupElement<S>], section: Section) -> Result<FrameTuple<S>> {
    let dim = relative
        .first()
        .map(GroupElement::dim)
        .ok_or_else(|| Error::ArityMismatch { expected: 1, found: 0 })?;
    let id = GroupElement::identity(dim);
    match section {
        Section::Chain => {
            let mut frames = vec![id];
            let mut acc = GroupElement::identity(dim);
            for b in relative.iter().rev() {
                acc = acc.compose(b)?;
                frames.push(acc.clone());
            }
            frames.reverse();
            FrameTuple::new(frames)
        }
        Section::TrifocalInverse | Section::Naive => {
            let [g1, g2] = relative else {
                return Err(Error::ArityMismatch {
                    expected: 2,
                    found: relative.len(),
                });
            };
            if section == Section::Naive {
                FrameTuple::new(vec![g1.clone(), id, g2.clone()])
            } else {
                FrameTuple::new(vec![g1.inverse(), id, g2.inverse()])
            }
        }
    }
}

/// `Σ t[J₁..Jₙ] Π cᵢ[Jᵢ]` for tangent multivectors `cᵢ`.
pub fn contract<S: Scalar>(t: &FocalTensor<S>, c: &[Multivector<S>]) -> Result<S> {
    if c.len() != t.signature.len() {
        return Err(Error::ArityMismatch {
            expected: t.signature.len(),
            found: c.len(),
        });
    }
    for (ci, &p) in c.iter().zip(&t.signature) {
        if ci.dim() != t.dim - 1 || ci.degree() != p {
            return Err(Error::SizeMismatch(format!(
                "tangent factor (dim {}, degree {}) where (dim {}, degree {p}) is required",
                ci.dim(),
                ci.degree(),
                t.dim - 1
            )));
        }
    }
    let row = tensor_row(c);
    Ok(row
        .into_iter()
        .zip(&t.data)
        .fold(S::zero(), |acc, (a, b)| acc + a * b.clone()))
}

/// Flattened `⊗ᵢ cᵢ` in the focal-tensor layout.
pub fn tensor_row<S: Scalar>(c: &[Multivector<S>]) -> Vec<S> {
    c.iter().fold(vec![S::one()], |acc, ci| {
        let dense = ci.to_dense();
        acc.iter()
            .flat_map(|a| dense.iter().map(move |b| a.clone() * b.clone()))
            .collect()
    })
}

/// Tangent multivector `c` (indices `0..m-1` for `ẽ₁..ẽ_{m-1}`) as `e₀ ∧ c̃` in `Λ^{p+1}V`.
pub fn prepend_basepoint<S: Scalar>(c: &Multivector<S>) -> Multivector<S> {
    let m = c.dim() + 1;
    let mut dense = vec![S::zero(); binomial(m, c.degree() + 1)];
    for (k, v) in c.terms() {
        let mut idx = vec![0];
        idx.extend(k.as_slice().iter().map(|i| i + 1));
        dense[subset_rank(m, &idx)] = v.clone();
    }
    Multivector::from_dense(m, c.degree() + 1, &dense).expect("consistent shape")
}

/// `Λ^{p+1}(g) · (e₀ ∧ c̃)`: the subspace of `V` the frame transports `c` to.
pub fn lift<S: Scalar>(g: &GroupElement<S>, c: &Multivector<S>) -> Result<Multivector<S>> {
    if c.dim() + 1 != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim() - 1,
            found: c.dim(),
        });
    }
    let p = c.degree();
    let lifted = prepend_basepoint(c).to_dense();
    let comp = compound_matrix(g.matrix(), p)?;
    Multivector::from_dense(g.dim(), p + 1, &comp.mul_vec(&lifted))
}

/// Image under `g` of a multivector of `V`.
pub fn push_forward<S: Scalar>(g: &Matrix<S>, d: &Multivector<S>) -> Result<Multivector<S>> {
    if d.degree() == 0 {
        return Ok(d.clone());
    }
    let comp = compound_matrix(g, d.degree() - 1)?;
    Multivector::from_dense(d.dim(), d.degree(), &comp.mul_vec(&d.to_dense()))
}

/// `new[J] = Σ_K t[K] Πᵢ mᵢ[Kᵢ][Jᵢ]`, one square matrix per axis.
pub fn transform_axes<S: Scalar>(t: &FocalTensor<S>, mats: &[Matrix<S>]) -> Result<FocalTensor<S>> {
    if mats.len() != t.shape.len() {
        return Err(Error::ArityMismatch {
            expected: t.shape.len(),
            found: mats.len(),
        });
    }
    let mut cur = t.clone();
    for (axis, mat) in mats.iter().enumerate() {
        let n = cur.shape[axis];
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::SizeMismatch(format!("axis {axis} has length {n}")));
        }
        let inner: usize = cur.shape[axis + 1..].iter().product();
        let outer: usize = cur.shape[..axis].iter().product();
        let mut next = vec![S::zero(); cur.data.len()];
        for o in 0..outer {
            for j in 0..n {
                for k in 0..n {
                    let w = &mat[(k, j)];
                    if w.is_zero() {
                        continue;
                    }
                    for i in 0..inner {
                        let src = (o * n + k) * inner + i;
                        let dst = (o * n + j) * inner + i;
                        next[dst] = next[dst].clone() + cur.data[src].clone() * w.clone();
                    }
                }
            }
        }
        cur.data = next;
    }
    Ok(cur)
}

/// `I(d₁ ⊗ … ⊗ dₙ)`.
pub fn incidence<S: Scalar>(inv: &Invariant, d: &[Multivector<S>]) -> Result<S> {
    inv.evaluate(d)
}

/// Lexicographic labels of one focal-tensor axis, in tangent indexing.
pub fn axis_labels(dim: usize, p: usize) -> Vec<Vec<usize>> {
    subsets(dim - 1, p)
}
