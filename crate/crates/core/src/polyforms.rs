//! Polynomial differential forms `Λ^p ⊗ S^q` on `k^m` with the Koszul
//! differential `δ` (bidegree `(-1, +1)`) and the de Rham differential `d`
//! (bidegree `(+1, -1)`).
//!
//! Desk-scale only: `m <= 5` and `p + q <= 5`.
//!
//! Basis keys pair a strictly increasing exterior tuple with a sorted
//! (non-decreasing) monomial exponent list, so `e1e2 ⊗ x0x0x3` is stored as
//! `([1, 2], [0, 0, 3])`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{merge_sign, subsets};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 5;
pub const MAX_TOTAL_DEGREE: usize = 5;

type FormKey = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm<S> {
    dim: usize,
    p: usize,
    q: usize,
    coeffs: BTreeMap<FormKey, S>,
}

/// Sorted multisets of size `q` drawn from `0..m`.
pub fn multisets(m: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(lo: usize, m: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if q == 0 {
            out.push(cur.clone());
            return;
        }
        for i in lo..m {
            cur.push(i);
            rec(i, m, q - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, q, &mut Vec::new(), &mut out);
    out
}

impl<S: Scalar> PolyForm<S> {
    pub fn zero(dim: usize, p: usize, q: usize) -> Result<Self> {
        if dim > MAX_DIM || p + q > MAX_TOTAL_DEGREE {
            return Err(Error::CapExceeded(format!(
                "polynomial forms limited to m <= {MAX_DIM}, p + q <= {MAX_TOTAL_DEGREE} (got m={dim}, p={p}, q={q})"
            )));
        }
        Ok(PolyForm {
            dim,
            p,
            q,
            coeffs: BTreeMap::new(),
        })
    }

    /// `e_I ⊗ x^M` for a sorted exterior tuple and a monomial exponent list.
    pub fn monomial(dim: usize, exterior: &[usize], symmetric: &[usize]) -> Result<Self> {
        let mut f = Self::zero(dim, exterior.len(), symmetric.len())?;
        f.add_term(exterior.to_vec(), symmetric.to_vec(), S::one())?;
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exterior: &[usize], symmetric: &[usize]) -> S {
        let mut sym = symmetric.to_vec();
        sym.sort_unstable();
        self.coeffs
            .get(&(exterior.to_vec(), sym))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Adds `value · e_I ⊗ x^M`; `exterior` must be strictly increasing.
    pub fn add_term(&mut self, exterior: Vec<usize>, mut symmetric: Vec<usize>, value: S) -> Result<()> {
        if exterior.len() != self.p || symmetric.len() != self.q {
            return Err(Error::SizeMismatch(format!(
                "term of bidegree ({}, {}) in a ({}, {}) form",
                exterior.len(),
                symmetric.len(),
                self.p,
                self.q
            )));
        }
        if exterior.windows(2).any(|w| w[0] >= w[1])
            || exterior.iter().chain(&symmetric).any(|&i| i >= self.dim)
        {
            return Err(Error::InvalidMultiIndex(format!(
                "bad form key {exterior:?} ⊗ {symmetric:?}"
            )));
        }
        symmetric.sort_unstable();
        self.accumulate((exterior, symmetric), value);
        Ok(())
    }

    fn accumulate(&mut self, key: FormKey, value: S) {
        let next = match self.coeffs.remove(&key) {
            Some(old) => old + value,
            None => value,
        };
        if !next.is_zero() {
            self.coeffs.insert(key, next);
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.accumulate(k.clone(), v.clone() * s.clone());
        }
        out
    }

    /// Sum of two forms. A zero summand is absorbed regardless of its bidegree label.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.bidegree() != other.bidegree() {
            return Err(Error::SizeMismatch(format!(
                "bidegree {:?} vs {:?}",
                self.bidegree(),
                other.bidegree()
            )));
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Random form with integer coefficients in `[-range, range]` on every basis key.
    pub fn random(dim: usize, p: usize, q: usize, range: i64, rng: &mut impl Rng) -> Result<Self> {
        let mut f = Self::zero(dim, p, q)?;
        for ext in subsets(dim, p) {
            for sym in multisets(dim, q) {
                let v = rng.random_range(-range..=range);
                f.accumulate((ext.clone(), sym), S::from_i64(v));
            }
        }
        Ok(f)
    }
}

/// Koszul differential: contraction with the Euler field,
/// `δ(ξ1..ξp ⊗ f) = Σ_k (-1)^(k-1) ξ1..ξ̂k..ξp ⊗ ξk f`. Zero on `p = 0`.
pub fn koszul_delta<S: Scalar>(f: &PolyForm<S>) -> PolyForm<S> {
    let (p, q) = f.bidegree();
    let mut out = PolyForm {
        dim: f.dim,
        p: p.saturating_sub(1),
        q: q + 1,
        coeffs: BTreeMap::new(),
    };
    if p == 0 {
        return out;
    }
    for ((ext, sym), v) in &f.coeffs {
        for k in 0..ext.len() {
            let mut rest = ext.clone();
            let moved = rest.remove(k);
            let mut mono = sym.clone();
            mono.push(moved);
            mono.sort_unstable();
            let term = if k % 2 == 0 { v.clone() } else { -v.clone() };
            out.accumulate((rest, mono), term);
        }
    }
    out
}

/// de Rham differential: `d(ξ_I ⊗ f1..fq) = Σ_k fk ∧ ξ_I ⊗ f1..f̂k..fq`,
/// no signs from the symmetric factors. Zero on `q = 0`.
pub fn derham_d<S: Scalar>(f: &PolyForm<S>) -> PolyForm<S> {
    let (p, q) = f.bidegree();
    let mut out = PolyForm {
        dim: f.dim,
        p: p + 1,
        q: q.saturating_sub(1),
        coeffs: BTreeMap::new(),
    };
    if q == 0 {
        return out;
    }
    for ((ext, sym), v) in &f.coeffs {
        for k in 0..sym.len() {
            let Some((sign, merged)) = merge_sign(&[sym[k]], ext) else {
                continue;
            };
            let mut rest = sym.clone();
            rest.remove(k);
            let term = if sign < 0 { -v.clone() } else { v.clone() };
            out.accumulate((merged, rest), term);
        }
    }
    out
}

/// `dδf + δdf - (p+q) f`; identically zero.
pub fn cartan_residual<S: Scalar>(f: &PolyForm<S>) -> Result<PolyForm<S>> {
    let (p, q) = f.bidegree();
    let lhs = derham_d(&koszul_delta(f)).add(&koszul_delta(&derham_d(f)))?;
    lhs.sub(&f.scale(&S::from_i64((p + q) as i64)))
}
