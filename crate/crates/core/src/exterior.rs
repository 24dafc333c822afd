//! Exterior algebra over `k^m`: index subsets, multivectors, wedge products and minors.
//!
//! Basis elements of `Λ^p` are sorted index tuples, ordered lexicographically
//! (`e0e1, e0e2, e0e3, e1e2, e1e3, e2e3` for `m = 4, p = 2`). Every table in
//! the crate uses this order.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{max_magnitude, Scalar};

/// A strictly increasing tuple of indices in `[0, dim)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    dim: usize,
    indices: Vec<usize>,
}

impl MultiIndex {
    pub fn new(dim: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMultiIndex(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidMultiIndex(format!(
                "index {bad} out of range for dimension {dim}"
            )));
        }
        Ok(MultiIndex { dim, indices })
    }

    pub fn empty(dim: usize) -> Self {
        MultiIndex {
            dim,
            indices: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Indices of `0..dim` not in this tuple.
    pub fn complement(&self) -> MultiIndex {
        MultiIndex {
            dim: self.dim,
            indices: (0..self.dim).filter(|&i| !self.contains(i)).collect(),
        }
    }

    /// Comma-joined form used as a JSON key, e.g. `"0,2"`.
    pub fn key(&self) -> String {
        self.indices
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_key(dim: usize, key: &str) -> Result<Self> {
        let key = key.trim();
        let indices = if key.is_empty() {
            Vec::new()
        } else {
            key.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidMultiIndex(format!("bad key {key:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(dim, indices)
    }

    /// Position of this tuple in the lexicographic list of same-size subsets.
    pub fn rank(&self) -> usize {
        subset_rank(self.dim, &self.indices)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for i in &self.indices {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `lo..hi`, lexicographic.
pub fn subsets_in(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(lo: usize, hi: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in lo..hi {
            if hi - i < k {
                break;
            }
            cur.push(i);
            rec(i + 1, hi, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= hi.saturating_sub(lo) {
        rec(lo, hi, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets_in(0, n, k)
}

/// Lexicographic rank of a sorted subset of `0..n`.
pub fn subset_rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &v) in subset.iter().enumerate() {
        for skipped in prev..v {
            rank += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = v + 1;
    }
    rank
}

/// Sign of the permutation sorting `seq`; `None` if an entry repeats.
pub fn permutation_sign(seq: &[usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            match seq[i].cmp(&seq[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(sign)
}

/// Sign of sorting `a ⧺ b` together with the sorted union; `None` when the
/// tuples share an index.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut joined = Vec::with_capacity(a.len() + b.len());
    joined.extend_from_slice(a);
    joined.extend_from_slice(b);
    let sign = permutation_sign(&joined)?;
    joined.sort_unstable();
    Some((sign, joined))
}

/// Element of `Λ^p(k^m)` stored sparsely by basis tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(Multivector {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// The basis element `e_{i1} ∧ … ∧ e_{ip}` for a sorted tuple.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let idx = MultiIndex::new(dim, indices.to_vec())?;
        let mut mv = Self::zero(dim, indices.len())?;
        mv.coeffs.insert(idx, S::one());
        Ok(mv)
    }

    /// Degree-1 element from coordinates.
    pub fn from_vector(coords: &[S]) -> Self {
        Self::from_dense(coords.len(), 1, coords).expect("degree 1 always fits")
    }

    /// From coefficients listed in lexicographic basis order.
    pub fn from_dense(dim: usize, degree: usize, values: &[S]) -> Result<Self> {
        let basis = subsets(dim, degree);
        if values.len() != basis.len() {
            return Err(Error::SizeMismatch(format!(
                "Λ^{degree}(k^{dim}) has {} coordinates, got {}",
                basis.len(),
                values.len()
            )));
        }
        let mut mv = Self::zero(dim, degree)?;
        for (idx, v) in basis.into_iter().zip(values) {
            mv.set(idx, v.clone());
        }
        Ok(mv)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, indices: &[usize]) -> S {
        self.coeffs
            .iter()
            .find(|(k, _)| k.as_slice() == indices)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(S::zero)
    }

    fn set(&mut self, indices: Vec<usize>, value: S) {
        let key = MultiIndex {
            dim: self.dim,
            indices,
        };
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    fn accumulate(&mut self, indices: Vec<usize>, value: S) {
        let key = MultiIndex {
            dim: self.dim,
            indices,
        };
        let next = match self.coeffs.remove(&key) {
            Some(old) => old + value,
            None => value,
        };
        if !next.is_zero() {
            self.coeffs.insert(key, next);
        }
    }

    /// Coefficients in lexicographic basis order.
    pub fn to_dense(&self) -> Vec<S> {
        let mut out = vec![S::zero(); binomial(self.dim, self.degree)];
        for (k, v) in &self.coeffs {
            out[k.rank()] = v.clone();
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.dim, self.degree).expect("same shape");
        for (k, v) in &self.coeffs {
            out.set(k.indices.clone(), v.clone() * s.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(k.indices.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::SizeMismatch(format!(
                "degree {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// Exterior product; errors when `p + q > m`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim, degree)?;
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                if let Some((sign, merged)) = merge_sign(&ka.indices, &kb.indices) {
                    let prod = va.clone() * vb.clone();
                    out.accumulate(merged, if sign < 0 { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// Plücker-style decomposability test. Degrees `0, 1, m-1, m` are always
    /// decomposable; degree 2 checks `a ∧ a = 0`.
    pub fn is_decomposable(&self) -> Result<bool> {
        let (p, m) = (self.degree, self.dim);
        if p <= 1 || p + 1 >= m {
            return Ok(true);
        }
        if p != 2 {
            return Err(Error::UnsupportedDegree { degree: p, dim: m });
        }
        let sq = self.wedge(self)?;
        let scale = max_magnitude(&self.to_dense()).powi(2).max(f64::MIN_POSITIVE);
        Ok(sq.coeffs.values().all(|v| v.is_negligible(scale)))
    }

    /// Change of field, through `f64` for float targets and exactly otherwise.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::<T>::zero(self.dim, self.degree).expect("same shape");
        for (k, v) in &self.coeffs {
            out.set(k.indices.clone(), f(v));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.key(), v.to_json()))
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "degree": self.degree,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Json(format!("multivector missing {name:?}")))
        };
        let dim = field("dim")?
            .as_u64()
            .ok_or_else(|| Error::Json("dim must be an integer".into()))? as usize;
        let degree = field("degree")?
            .as_u64()
            .ok_or_else(|| Error::Json("degree must be an integer".into()))?
            as usize;
        let coeffs = field("coeffs")?
            .as_object()
            .ok_or_else(|| Error::Json("coeffs must be an object".into()))?;
        let mut mv = Self::zero(dim, degree)?;
        for (key, val) in coeffs {
            let idx = MultiIndex::parse_key(dim, key)?;
            if idx.len() != degree {
                return Err(Error::InvalidMultiIndex(format!(
                    "key {key:?} does not have degree {degree}"
                )));
            }
            mv.accumulate(idx.indices, S::from_json(val)?);
        }
        Ok(mv)
    }
}

/// Determinant of the submatrix of `g` at the given rows and columns.
pub fn minor<S: Scalar>(g: &Matrix<S>, rows: &[usize], cols: &[usize]) -> Result<S> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(format!(
            "minor with {} rows and {} columns",
            rows.len(),
            cols.len()
        )));
    }
    if let Some(&bad) = rows
        .iter()
        .find(|&&r| r >= g.rows())
        .or_else(|| cols.iter().find(|&&c| c >= g.cols()))
    {
        return Err(Error::OutOfRange(format!("minor index {bad}")));
    }
    g.submatrix(rows, cols).det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Q = Rational;

    fn e(dim: usize, idx: &[usize]) -> Multivector<Q> {
        Multivector::basis(dim, idx).unwrap()
    }

    #[test]
    fn basis_wedges() {
        assert_eq!(e(3, &[0]).wedge(&e(3, &[1])).unwrap(), e(3, &[0, 1]));
        assert_eq!(
            e(3, &[1]).wedge(&e(3, &[0])).unwrap(),
            e(3, &[0, 1]).scale(&Q::from_i64(-1))
        );
    }

    #[test]
    fn bilinear_expansion_matches_oracle() {
        let a = e(3, &[0]).add(&e(3, &[1])).unwrap();
        let b = e(3, &[0]).add(&e(3, &[2])).unwrap();
        let w = a.wedge(&b).unwrap();
        // basis-pair expansion: e0e0 + e0e2 + e1e0 + e1e2
        assert_eq!(w.coeff(&[0, 1]), Q::from_i64(-1));
        assert_eq!(w.coeff(&[0, 2]), Q::from_i64(1));
        assert_eq!(w.coeff(&[1, 2]), Q::from_i64(1));
    }

    #[test]
    fn overflow_is_an_error() {
        let err = e(2, &[0, 1]).wedge(&e(2, &[0])).unwrap_err();
        assert_eq!(err, Error::DegreeOverflow { degree: 3, dim: 2 });
        assert!(matches!(
            e(3, &[0]).wedge(&e(4, &[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multi_index_validation() {
        assert!(MultiIndex::new(4, vec![1, 1]).is_err());
        assert!(MultiIndex::new(4, vec![2, 1]).is_err());
        assert!(MultiIndex::new(4, vec![0, 4]).is_err());
        assert!(MultiIndex::new(4, vec![]).unwrap().is_empty());
    }

    #[test]
    fn subset_ranks_follow_listing() {
        for (n, k) in [(4, 2), (5, 3), (4, 0), (3, 3)] {
            for (i, s) in subsets(n, k).iter().enumerate() {
                assert_eq!(subset_rank(n, s), i);
            }
            assert_eq!(subsets(n, k).len(), binomial(n, k));
        }
        assert_eq!(
            subsets(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn minors_of_identity_and_cofactor() {
        let id = Matrix::<Q>::identity(4);
        assert_eq!(minor(&id, &[0, 1], &[0, 1]).unwrap(), Q::from_i64(1));
        assert_eq!(minor(&id, &[0, 1], &[0, 2]).unwrap(), Q::from_i64(0));
        let g = Matrix::<Q>::from_i64_rows(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let expected = g[(1, 0)].clone() * g[(2, 1)].clone() - g[(1, 1)].clone() * g[(2, 0)].clone();
        assert_eq!(minor(&g, &[1, 2], &[0, 1]).unwrap(), expected);
        assert!(matches!(minor(&g, &[0], &[0, 1]), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn decomposability() {
        assert!(e(4, &[0, 1]).is_decomposable().unwrap());
        let sum = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        assert_eq!(sum.wedge(&sum).unwrap().coeff(&[0, 1, 2, 3]), Q::from_i64(2));
        assert!(!sum.is_decomposable().unwrap());
        let plane = Multivector::<Q>::from_dense(4, 3, &[1, -2, 3, 5].map(Q::from_i64)).unwrap();
        assert!(plane.is_decomposable().unwrap());
        assert!(matches!(
            e(6, &[0, 1, 2]).is_decomposable(),
            Err(Error::UnsupportedDegree { degree: 3, dim: 6 })
        ));
    }

    #[test]
    fn json_form() {
        let mv = e(4, &[0, 2]).scale(&Q::from_ratio(3, 4));
        let v = mv.to_json();
        assert_eq!(v["coeffs"]["0,2"], Value::String("3/4".into()));
        assert_eq!(Multivector::<Q>::from_json(&v).unwrap(), mv);
        let bad = serde_json::json!({"dim": 4, "degree": 2, "coeffs": {"2,1": "1"}});
        assert!(Multivector::<Q>::from_json(&bad).is_err());
    }

    fn rational_mv(dim: usize, degree: usize) -> impl Strategy<Value = Multivector<Q>> {
        prop::collection::vec(-5i64..=5, binomial(dim, degree)).prop_map(move |v| {
            let vals: Vec<Q> = v.into_iter().map(Q::from_i64).collect();
            Multivector::from_dense(dim, degree, &vals).unwrap()
        })
    }

    fn wedge_operands() -> impl Strategy<Value = (Multivector<Q>, Multivector<Q>)> {
        (2usize..=5)
            .prop_flat_map(|m| (Just(m), 0..=m))
            .prop_flat_map(|(m, p)| (Just(m), Just(p), 0..=m - p))
            .prop_flat_map(|(m, p, q)| (rational_mv(m, p), rational_mv(m, q)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn graded_anticommutative((a, b) in wedge_operands()) {
            let (p, q) = (a.degree(), b.degree());
            let sign = if (p * q) % 2 == 0 { Q::from_i64(1) } else { Q::from_i64(-1) };
            prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
        }

        #[test]
        fn associative(a in rational_mv(5, 1), b in rational_mv(5, 2), c in rational_mv(5, 2)) {
            let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn wedge_of_vectors_is_decomposable(a in rational_mv(4, 1), b in rational_mv(4, 1)) {
            prop_assert!(a.wedge(&b).unwrap().is_decomposable().unwrap());
        }
    }
}
