//! Relative `GL(V)`-invariant tensors in `Λ^{p₁+1}V∨ ⊗ … ⊗ Λ^{pₙ+1}V∨`.
//!
//! Coefficients are stored sparsely against tuples of basis subsets. All
//! catalog entries have integer coefficients. `Λ^m V∨` is identified with
//! the scalars through `e₀e₁…e_{m-1} ↦ 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::coaction::{compound, GroupElement};
use crate::error::{Error, Result};
use crate::exterior::{merge_sign, permutation_sign, subset_rank, MultiIndex, Multivector};
use crate::scalar::{Rational, Scalar};

/// Named catalog entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantName {
    Bifocal,
    Trifocal,
    Quadrifocal,
    Wedge { m: usize, p1: usize, p2: usize },
}

impl FromStr for InvariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bifocal" => Ok(InvariantName::Bifocal),
            "trifocal" => Ok(InvariantName::Trifocal),
            "quadrifocal" => Ok(InvariantName::Quadrifocal),
            other => {
                let bad = || Error::Json(format!("unknown invariant {other:?}"));
                let args = other.strip_prefix("wedge:").ok_or_else(bad)?;
                let parts: Vec<usize> = args
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                match parts[..] {
                    [m, p1, p2] => Ok(InvariantName::Wedge { m, p1, p2 }),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantName::Bifocal => f.write_str("bifocal"),
            InvariantName::Trifocal => f.write_str("trifocal"),
            InvariantName::Quadrifocal => f.write_str("quadrifocal"),
            InvariantName::Wedge { m, p1, p2 } => write!(f, "wedge:{m},{p1},{p2}"),
        }
    }
}

impl InvariantName {
    pub fn build(self) -> Result<Invariant> {
        let mut inv = match self {
            InvariantName::Bifocal => wedge_pair(4, 1, 1)?,
            InvariantName::Trifocal => trifocal(),
            InvariantName::Quadrifocal => quadrifocal(),
            InvariantName::Wedge { m, p1, p2 } => wedge_pair(m, p1, p2)?,
        };
        inv.name = self.to_string();
        Ok(inv)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invariant {
    name: String,
    dim: usize,
    signature: Vec<usize>,
    coeffs: BTreeMap<Vec<Vec<usize>>, i64>,
}

impl Invariant {
    /// `signature[i]` is the exterior degree `pᵢ + 1` of factor `i`.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        signature: Vec<usize>,
        coeffs: BTreeMap<Vec<Vec<usize>>, i64>,
    ) -> Result<Self> {
        if signature.iter().any(|&d| d == 0 || d > dim) {
            return Err(Error::OutOfRange(format!(
                "signature {signature:?} in dimension {dim}"
            )));
        }
        for key in coeffs.keys() {
            if key.len() != signature.len() {
                return Err(Error::ArityMismatch {
                    expected: signature.len(),
                    found: key.len(),
                });
            }
            for (r, &d) in key.iter().zip(&signature) {
                let idx = MultiIndex::new(dim, r.clone())?;
                if idx.len() != d {
                    return Err(Error::InvalidMultiIndex(format!(
                        "factor {r:?} should have length {d}"
                    )));
                }
            }
        }
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, v)| *v != 0).collect();
        if coeffs.is_empty() {
            return Err(Error::NotInvariant("all coefficients vanish".into()));
        }
        Ok(Invariant {
            name: name.into(),
            dim,
            signature,
            coeffs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exterior degrees `pᵢ + 1`.
    pub fn signature(&self) -> &[usize] {
        &self.signature
    }

    /// Tangent degrees `pᵢ`, the signature of the resulting focal tensor.
    pub fn tangent_degrees(&self) -> Vec<usize> {
        self.signature.iter().map(|d| d - 1).collect()
    }

    pub fn arity(&self) -> usize {
        self.signature.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Vec<usize>>, &i64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, key: &[Vec<usize>]) -> i64 {
        self.coeffs.get(key).copied().unwrap_or(0)
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// `I(d₁ ⊗ … ⊗ dₙ)` by coefficient contraction.
    pub fn evaluate<S: Scalar>(&self, d: &[Multivector<S>]) -> Result<S> {
        if d.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: d.len(),
            });
        }
        for (mv, &deg) in d.iter().zip(&self.signature) {
            if mv.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: mv.dim(),
                });
            }
            if mv.degree() != deg {
                return Err(Error::SizeMismatch(format!(
                    "factor of degree {} where {deg} is required",
                    mv.degree()
                )));
            }
        }
        let dense: Vec<Vec<S>> = d.iter().map(Multivector::to_dense).collect();
        let mut total = S::zero();
        for (key, &c) in &self.coeffs {
            let mut term = S::from_i64(c);
            for (r, col) in key.iter().zip(&dense) {
                term = term * col[subset_rank(self.dim, r)].clone();
                if term.is_zero() {
                    break;
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    pub fn to_json(&self, weight: Option<i64>) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(key, v)| {
                let idx: Vec<String> = key
                    .iter()
                    .map(|r| MultiIndex::new(self.dim, r.clone()).expect("validated").key())
                    .collect();
                json!({ "index": idx, "value": v })
            })
            .collect();
        json!({
            "name": self.name,
            "dim": self.dim,
            "signature": self.signature,
            "weight": weight,
            "nonzero": self.coeffs.len(),
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("invariant needs integer dim".into()))? as usize;
        let signature: Vec<usize> = v
            .get("signature")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("invariant needs signature".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Json("bad signature".into())))
            .collect::<Result<_>>()?;
        let mut coeffs = BTreeMap::new();
        for entry in v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("invariant needs coeffs".into()))?
        {
            let idx = entry
                .get("index")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Json("coefficient needs index".into()))?;
            let key = idx
                .iter()
                .map(|k| {
                    let k = k.as_str().ok_or_else(|| Error::Json("index keys are strings".into()))?;
                    Ok(MultiIndex::parse_key(dim, k)?.as_slice().to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            let value = entry
                .get("value")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Json("coefficient value must be an integer".into()))?;
            coeffs.insert(key, value);
        }
        Invariant::new(name, dim, signature, coeffs)
    }
}

/// Exterior pairing `Λ^{p₁+1}V∨ ⊗ Λ^{p₂+1}V∨ → Λ^m V∨ ≅ k`.
pub fn wedge_pair(m: usize, p1: usize, p2: usize) -> Result<Invariant> {
    if p1 + p2 + 2 != m {
        return Err(Error::SizeMismatch(format!(
            "wedge pair needs p1 + p2 + 2 = m, got {p1} + {p2} + 2 vs {m}"
        )));
    }
    let mut coeffs = BTreeMap::new();
    for r in crate::exterior::subsets(m, p1 + 1) {
        let s = MultiIndex::new(m, r.clone())?.complement();
        let (sign, _) = merge_sign(&r, s.as_slice()).expect("disjoint");
        coeffs.insert(vec![r, s.as_slice().to_vec()], sign);
    }
    Invariant::new(format!("wedge:{m},{p1},{p2}"), m, vec![p1 + 1, p2 + 1], coeffs)
}

fn complement3(a: usize) -> Vec<usize> {
    (0..4).filter(|&i| i != a).collect()
}

/// The `(3, 2, 3)` invariant `v · M · v` with `v = (e₁₂₃, −e₀₂₃, e₀₁₃, −e₀₁₂)`
/// and `M` the antisymmetric matrix of `e′_{ab}`.
pub fn trifocal() -> Invariant {
    let mut coeffs = BTreeMap::new();
    let sgn = |a: usize| if a % 2 == 0 { 1 } else { -1 };
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            let (lo, hi) = (a.min(b), a.max(b));
            let orient = if a < b { 1 } else { -1 };
            coeffs.insert(
                vec![complement3(a), vec![lo, hi], complement3(b)],
                sgn(a) * sgn(b) * orient,
            );
        }
    }
    Invariant::new("trifocal", 4, vec![3, 2, 3], coeffs).expect("catalog entry")
}

/// Four-fold exterior product on `Λ³V∨`, through `e_R ↦ ε(R)·e_{c(R)}` with
/// `ε(R)` the sign of `R ⧺ c(R)`.
pub fn quadrifocal() -> Invariant {
    let mut coeffs = BTreeMap::new();
    let eps = |a: usize| {
        let r = complement3(a);
        merge_sign(&r, &[a]).expect("disjoint").0
    };
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if let Some(sign) = permutation_sign(&[a, b, c, d]) {
                        coeffs.insert(
                            vec![complement3(a), complement3(b), complement3(c), complement3(d)],
                            sign * eps(a) * eps(b) * eps(c) * eps(d),
                        );
                    }
                }
            }
        }
    }
    Invariant::new("quadrifocal", 4, vec![3, 3, 3, 3], coeffs).expect("catalog entry")
}

/// Dense coefficient tensor of `g·I` under the contragredient action:
/// `(g·I)(C) = Σ_R I(R) Π compound(g⁻¹)[Rᵢ][Cᵢ]`.
pub fn act<S: Scalar>(inv: &Invariant, g: &GroupElement<S>) -> Result<BTreeMap<Vec<Vec<usize>>, S>> {
    if g.dim() != inv.dim {
        return Err(Error::DimensionMismatch {
            expected: inv.dim,
            found: g.dim(),
        });
    }
    let ginv = g.inverse();
    let comps = inv
        .signature
        .iter()
        .map(|&d| compound(ginv.matrix(), d))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<Vec<Vec<usize>>> = inv
        .signature
        .iter()
        .map(|&d| crate::exterior::subsets(inv.dim, d))
        .collect();
    let mut out = BTreeMap::new();
    for_each_tuple(&labels, &mut |pos: &[usize]| {
        let mut total = S::zero();
        for (key, &c) in &inv.coeffs {
            let mut term = S::from_i64(c);
            for (i, r) in key.iter().enumerate() {
                term = term * comps[i][(subset_rank(inv.dim, r), pos[i])].clone();
                if term.is_zero() {
                    break;
                }
            }
            total = total + term;
        }
        if !total.is_zero() {
            let key = pos.iter().enumerate().map(|(i, &p)| labels[i][p].clone()).collect();
            out.insert(key, total);
        }
    });
    Ok(out)
}

/// Calls `f` on every multi-position of a product of label lists, last axis fastest.
pub(crate) fn for_each_tuple<T>(axes: &[Vec<T>], f: &mut impl FnMut(&[usize])) {
    let n = axes.len();
    if axes.iter().any(Vec::is_empty) {
        return;
    }
    let mut pos = vec![0; n];
    loop {
        f(&pos);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < axes[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// Measures the integer `k` with `g·I = det(g)^k · I` over random rational
/// frames, failing if any frame breaks the relation.
pub fn check_weight(inv: &Invariant, trials: usize, rng: &mut impl Rng) -> Result<i64> {
    if trials == 0 {
        return Err(Error::OutOfRange("check_weight needs at least one trial".into()));
    }
    let total: usize = inv.signature.iter().sum();
    let bound = total as i64;
    let mut weight: Option<i64> = None;
    for _ in 0..trials {
        let g = loop {
            let g = GroupElement::<Rational>::random(inv.dim, 5, rng);
            let d = g.det();
            if d != Rational::from_i64(1) && d != Rational::from_i64(-1) {
                break g;
            }
        };
        let moved = act(inv, &g)?;
        let det = g.det();
        let fits = |k: i64| {
            let factor = pow(&det, k);
            moved.len() == inv.coeffs.len()
                && inv.coeffs.iter().all(|(key, &c)| {
                    moved.get(key).is_some_and(|v| *v == Rational::from_i64(c) * factor.clone())
                })
        };
        let k = match weight {
            Some(k) if fits(k) => k,
            Some(_) => return Err(not_invariant(&g)),
            None => (-bound..=bound).find(|&k| fits(k)).ok_or_else(|| not_invariant(&g))?,
        };
        weight = Some(k);
    }
    Ok(weight.expect("at least one trial"))
}

fn not_invariant(g: &GroupElement<Rational>) -> Error {
    Error::NotInvariant(format!("no integer weight fits frame {}", g.to_json()))
}

fn pow(x: &Rational, k: i64) -> Rational {
    let base = if k < 0 { Rational::from_i64(1) / x.clone() } else { x.clone() };
    (0..k.unsigned_abs()).fold(Rational::from_i64(1), |acc, _| acc * base.clone())
}
