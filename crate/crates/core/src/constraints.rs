//! Polynomial constraints on bifocal and trifocal tensors, evaluated as residuals.
//!
//! Intrinsic families need only the tensor. Ground-truth families compare
//! against closed forms in the motions. All residuals are computed on the
//! tensor scaled to unit max-abs entry, so a family of degree `d` is divided
//! by `scale^d`.

use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euclidean::{EuclideanMotion, HODGE};
use crate::exterior::subsets;
use crate::focal::FocalTensor;
use crate::matrix::Matrix;
use crate::scalar::{max_abs_element, Rational, Scalar, FLOAT_TOLERANCE};

/// Classical adjoint of a 3×3 matrix.
pub fn adjugate<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let a = |i: usize, j: usize| m[(i % 3, j % 3)].clone();
    // cofactor of (j, i), cyclic index form
    Matrix::from_fn(3, 3, |i, j| {
        a(j + 1, i + 1) * a(j + 2, i + 2) - a(j + 1, i + 2) * a(j + 2, i + 1)
    })
}

pub fn cross<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    vec![
        x[1].clone() * y[2].clone() - x[2].clone() * y[1].clone(),
        x[2].clone() * y[0].clone() - x[0].clone() * y[2].clone(),
        x[0].clone() * y[1].clone() - x[1].clone() * y[0].clone(),
    ]
}

pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn half<S: Scalar>() -> S {
    S::from_ratio(1, 2)
}

/// `½ tr(mmᵗ) m − mmᵗm`.
pub fn demazure_c<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let mmt = m * &m.transpose();
    &m.scale(&(half::<S>() * mmt.trace())) - &(&mmt * m)
}

/// `½ (tr mmᵗ)² − tr[(mmᵗ)²]`.
pub fn bifocal_q<S: Scalar>(m: &Matrix<S>) -> S {
    let mmt = m * &m.transpose();
    let t = mmt.trace();
    half::<S>() * t.clone() * t - (&mmt * &mmt).trace()
}

/// `tr(ccᵗ) + ½ tr(mmᵗ) q(m) − 3 (det m)²`; vanishes on every 3×3 matrix.
pub fn frobenius_identity_residual<S: Scalar>(m: &Matrix<S>) -> S {
    let c = demazure_c(m);
    let cct = (&c * &c.transpose()).trace();
    let mmt = (m * &m.transpose()).trace();
    let det = m.det().expect("3x3");
    cct + half::<S>() * mmt * bifocal_q(m) - S::from_i64(3) * det.clone() * det
}

/// Middle-axis slices of a `(2, 1, 2)` tensor in the Hodge basis, with adjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct TrifocalSlices<S> {
    t: [Matrix<S>; 3],
    a: [Matrix<S>; 3],
}

impl<S: Scalar> TrifocalSlices<S> {
    pub fn new(t: [Matrix<S>; 3]) -> Self {
        let a = [adjugate(&t[0]), adjugate(&t[1]), adjugate(&t[2])];
        TrifocalSlices { t, a }
    }

    pub fn from_tensor(tensor: &FocalTensor<S>) -> Result<Self> {
        if tensor.dim() != 4 || tensor.signature() != [2, 1, 2] {
            return Err(Error::SizeMismatch(format!(
                "trifocal constraints need a dim-4 (2, 1, 2) tensor, got dim {} signature {:?}",
                tensor.dim(),
                tensor.signature()
            )));
        }
        let slice = |j: usize| {
            let mut m = Matrix::zeros(3, 3);
            for (la, &(ha, sa)) in HODGE.iter().enumerate() {
                for (lc, &(hc, sc)) in HODGE.iter().enumerate() {
                    m[(ha, hc)] = S::from_i64(sa * sc) * tensor.get(&[la, j, lc]).clone();
                }
            }
            m
        };
        Ok(Self::new([slice(0), slice(1), slice(2)]))
    }

    pub fn t(&self, i: usize) -> &Matrix<S> {
        &self.t[i]
    }

    pub fn a(&self, i: usize) -> &Matrix<S> {
        &self.a[i]
    }

    /// `x₁t₁ + x₂t₂ + x₃t₃`.
    pub fn combination(&self, x: &[S]) -> Matrix<S> {
        (0..3).fold(Matrix::zeros(3, 3), |acc, i| &acc + &self.t[i].scale(&x[i]))
    }

    pub fn slice_ranks(&self) -> [usize; 3] {
        [self.t[0].rank(), self.t[1].rank(), self.t[2].rank()]
    }

    pub fn max_abs(&self) -> f64 {
        self.t.iter().map(Matrix::max_abs).fold(0.0, f64::max)
    }

    fn scaled(&self, s: &S) -> Self {
        Self::new([self.t[0].scale(s), self.t[1].scale(s), self.t[2].scale(s)])
    }

    fn tat(&self, i: usize, j: usize, k: usize) -> Matrix<S> {
        &(&self.t[i] * &self.a[j]) * &self.t[k]
    }

    /// The 3×3 block matrix of products `t a t` whose entries form an 81-entry
    /// 4-tensor, indexed `[P][Q][a][b]` (block row, block column, entry row, entry column).
    pub fn block_tensor(&self) -> Vec<S> {
        // (sign, i, j, k) for block (P, Q): sign · t_i a_j t_k, zero-based
        const BLOCKS: [[(i64, usize, usize, usize); 3]; 3] = [
            [(-1, 2, 1, 2), (1, 1, 2, 0), (1, 2, 1, 0)],
            [(1, 0, 2, 1), (-1, 2, 0, 2), (1, 2, 0, 1)],
            [(1, 0, 1, 2), (1, 1, 0, 2), (-1, 1, 0, 1)],
        ];
        let mut out = Vec::with_capacity(81);
        for row in BLOCKS {
            for (sign, i, j, k) in row {
                let m = self.tat(i, j, k).scale(&S::from_i64(sign));
                out.extend_from_slice(m.as_slice());
            }
        }
        out
    }
}

/// Monomial exponents of the homogeneous cubic in `x`, in reporting order.
pub const CUBIC_MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// Exact inverse of the evaluation matrix of the ten cubic monomials at the
/// lattice points `x = m` for `m` in [`CUBIC_MONOMIALS`], as `(num, den)` pairs.
fn cubic_solver() -> &'static Vec<(i64, i64)> {
    static SOLVER: OnceLock<Vec<(i64, i64)>> = OnceLock::new();
    SOLVER.get_or_init(|| {
        let eval = Matrix::<Rational>::from_fn(10, 10, |p, k| {
            let x = CUBIC_MONOMIALS[p];
            let e = CUBIC_MONOMIALS[k];
            Rational::from_i64((0..3).map(|i| (x[i] as i64).pow(e[i])).product())
        });
        let inv = eval.inverse().expect("lattice points are unisolvent for cubics");
        inv.as_slice()
            .iter()
            .map(|r| (r.numer().to_i64().expect("small"), r.denom().to_i64().expect("small")))
            .collect()
    })
}

/// Coefficients of `det(x₁t₁ + x₂t₂ + x₃t₃)` in [`CUBIC_MONOMIALS`] order.
pub fn trifocal_det_cubics<S: Scalar>(ts: &TrifocalSlices<S>) -> Vec<S> {
    let values: Vec<S> = CUBIC_MONOMIALS
        .iter()
        .map(|x| {
            let x: Vec<S> = x.iter().map(|&v| S::from_i64(v as i64)).collect();
            ts.combination(&x).det().expect("3x3")
        })
        .collect();
    let solver = cubic_solver();
    (0..10)
        .map(|k| {
            (0..10).fold(S::zero(), |acc, p| {
                let (n, d) = solver[k * 10 + p];
                acc + S::from_ratio(n, d) * values[p].clone()
            })
        })
        .collect()
}

/// The 27 row-chirality sextics `det(a¹[i,:], a²[j,:], a³[k,:])` followed by
/// the 27 column-chirality sextics `det(a¹[:,i], a²[:,j], a³[:,k])`.
pub fn epipolar_sextics<S: Scalar>(ts: &TrifocalSlices<S>) -> (Vec<S>, Vec<S>) {
    let mut rows = Vec::with_capacity(27);
    let mut cols = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let r = Matrix::from_rows(vec![ts.a[0].row(i), ts.a[1].row(j), ts.a[2].row(k)]).expect("3x3");
                let c = Matrix::from_rows(vec![ts.a[0].col(i), ts.a[1].col(j), ts.a[2].col(k)]).expect("3x3");
                rows.push(r.det().expect("3x3"));
                cols.push(c.det().expect("3x3"));
            }
        }
    }
    (rows, cols)
}

/// Entries of `t_i a_j t_i − t_j a_i t_j` over the three unordered pairs.
pub fn braid_entries<S: Scalar>(ts: &TrifocalSlices<S>) -> Vec<S> {
    let mut out = Vec::with_capacity(27);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = &ts.tat(i, j, i) - &ts.tat(j, i, j);
        out.extend_from_slice(d.as_slice());
    }
    out
}

/// Max-abs braid residual on unit-normalized input.
pub fn braid_residual<S: Scalar>(ts: &TrifocalSlices<S>) -> f64 {
    let (norm, _) = normalize_slices(ts);
    crate::scalar::max_magnitude(&braid_entries(&norm))
}

/// All 2×2 minors of a `rows × cols` matrix given row-major.
fn two_by_two_minors<S: Scalar>(data: &[S], rows: usize, cols: usize, out: &mut Vec<S>) {
    for r in subsets(rows, 2) {
        for c in subsets(cols, 2) {
            let v = |i: usize, j: usize| data[r[i] * cols + c[j]].clone();
            out.push(v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0));
        }
    }
}

/// 2×2 minors of `adj(a₁ + a₂ + a₃)`.
pub fn adjugate_sum_minors<S: Scalar>(ts: &TrifocalSlices<S>) -> Vec<S> {
    let sum = &(&ts.a[0] + &ts.a[1]) + &ts.a[2];
    let adj = adjugate(&sum);
    let mut out = Vec::new();
    two_by_two_minors(adj.as_slice(), 3, 3, &mut out);
    out
}

/// 2×2 minors of the seven flattenings of the block 4-tensor.
pub fn block_flattening_minors<S: Scalar>(ts: &TrifocalSlices<S>) -> Vec<S> {
    let b = ts.block_tensor();
    let at = |idx: [usize; 4]| b[((idx[0] * 3 + idx[1]) * 3 + idx[2]) * 3 + idx[3]].clone();
    let mut out = Vec::new();
    let splits: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    for left in splits {
        let right: Vec<usize> = (0..4).filter(|a| !left.contains(a)).collect();
        let nr = 3usize.pow(left.len() as u32);
        let nc = 3usize.pow(right.len() as u32);
        let mut flat = Vec::with_capacity(81);
        for r in 0..nr {
            for c in 0..nc {
                let mut idx = [0; 4];
                let mut rr = r;
                for &ax in left.iter().rev() {
                    idx[ax] = rr % 3;
                    rr /= 3;
                }
                let mut cc = c;
                for &ax in right.iter().rev() {
                    idx[ax] = cc % 3;
                    cc /= 3;
                }
                flat.push(at(idx));
            }
        }
        two_by_two_minors(&flat, nr, nc, &mut out);
    }
    out
}

/// Summary of one residual family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyResidual {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
    pub exact_zero: bool,
    pub pass: bool,
}

impl FamilyResidual {
    pub fn from_values<S: Scalar>(name: &str, values: &[S], tolerance: f64) -> Self {
        let mags: Vec<f64> = values.iter().map(Scalar::magnitude).collect();
        let max = mags.iter().copied().fold(0.0, f64::max);
        let mean = if mags.is_empty() { 0.0 } else { mags.iter().sum::<f64>() / mags.len() as f64 };
        let exact_zero = values.iter().all(|v| v.is_zero());
        let pass = if S::is_exact() { exact_zero } else { max <= tolerance };
        FamilyResidual {
            name: name.to_string(),
            max,
            mean,
            count: values.len(),
            exact_zero,
            pass,
        }
    }

    pub fn to_json(&self) -> Value {
        let num = |x: f64| if self.exact_zero { json!("0") } else { json!(x) };
        json!({
            "name": self.name,
            "max": num(self.max),
            "mean": num(self.mean),
            "count": self.count,
            "pass": self.pass,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    pub families: Vec<FamilyResidual>,
    pub tolerance: f64,
    pub exact: bool,
    pub rank_deficient: bool,
}

impl ConstraintReport {
    pub fn pass(&self) -> bool {
        self.families.iter().all(|f| f.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.families.iter().map(|f| f.max).fold(0.0, f64::max)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResidual> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "families": self.families.iter().map(FamilyResidual::to_json).collect::<Vec<_>>(),
            "normalized": true,
            "mode": if self.exact { "rational" } else { "float" },
            "tolerance": self.tolerance,
            "rank_deficient": self.rank_deficient,
            "pass": self.pass(),
        })
    }
}

/// Slices scaled to unit max-abs entry, and the scale that was divided out.
fn normalize_slices<S: Scalar>(ts: &TrifocalSlices<S>) -> (TrifocalSlices<S>, S) {
    let all: Vec<S> = ts.t.iter().flat_map(|m| m.as_slice().to_vec()).collect();
    match max_abs_element(&all) {
        Some(scale) => (ts.scaled(&(S::one() / scale.clone())), scale),
        None => (ts.clone(), S::one()),
    }
}

fn intrinsic_families<S: Scalar>(ts: &TrifocalSlices<S>, tolerance: f64) -> Vec<FamilyResidual> {
    let (rows, cols) = epipolar_sextics(ts);
    vec![
        FamilyResidual::from_values("det_cubics", &trifocal_det_cubics(ts), tolerance),
        FamilyResidual::from_values("epipolar_sextics_rows", &rows, tolerance),
        FamilyResidual::from_values("epipolar_sextics_cols", &cols, tolerance),
        FamilyResidual::from_values("braid", &braid_entries(ts), tolerance),
        FamilyResidual::from_values("adjugate_sum_rank_one", &adjugate_sum_minors(ts), tolerance),
        FamilyResidual::from_values("block_tensor_rank_one", &block_flattening_minors(ts), tolerance),
    ]
}

fn rank_deficient<S: Scalar>(ts: &TrifocalSlices<S>) -> bool {
    ts.slice_ranks().iter().any(|&r| r < 2)
}

/// Every intrinsic family on a `(2, 1, 2)` tensor; passes iff each is within `tolerance`
/// (exactly zero in rational mode).
pub fn check_all<S: Scalar>(t: &FocalTensor<S>, tolerance: f64) -> Result<ConstraintReport> {
    let ts = TrifocalSlices::from_tensor(t)?;
    let (norm, _) = normalize_slices(&ts);
    Ok(ConstraintReport {
        families: intrinsic_families(&norm, tolerance),
        tolerance,
        exact: S::is_exact(),
        rank_deficient: rank_deficient(&norm),
    })
}

/// [`check_all`] at the default tolerance.
pub fn check_all_default<S: Scalar>(t: &FocalTensor<S>) -> Result<ConstraintReport> {
    check_all(t, FLOAT_TOLERANCE)
}

/// Demazure cubics, the determinant and the Faugeras quartic on a `(1, 1)` tensor.
pub fn check_bifocal<S: Scalar>(t: &FocalTensor<S>, tolerance: f64) -> Result<ConstraintReport> {
    if t.dim() != 4 || t.signature() != [1, 1] {
        return Err(Error::SizeMismatch(format!(
            "bifocal constraints need a dim-4 (1, 1) tensor, got dim {} signature {:?}",
            t.dim(),
            t.signature()
        )));
    }
    let m = Matrix::from_fn(3, 3, |i, j| t.get(&[i, j]).clone());
    let m = match max_abs_element(m.as_slice()) {
        Some(s) => m.scale(&(S::one() / s)),
        None => m,
    };
    let det = m.det()?;
    Ok(ConstraintReport {
        families: vec![
            FamilyResidual::from_values("det", std::slice::from_ref(&det), tolerance),
            FamilyResidual::from_values("demazure_cubics", demazure_c(&m).as_slice(), tolerance),
            FamilyResidual::from_values("faugeras_quartic", &[bifocal_q(&m)], tolerance),
        ],
        tolerance,
        exact: S::is_exact(),
        rank_deficient: m.rank() < 2,
    })
}

fn pow<S: Scalar>(x: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

fn scaled_residual<S: Scalar>(lhs: &Matrix<S>, rhs: &Matrix<S>, inv_scale_pow: &S, out: &mut Vec<S>) {
    for (a, b) in lhs.as_slice().iter().zip(rhs.as_slice()) {
        out.push((a.clone() - b.clone()) * inv_scale_pow.clone());
    }
}

/// Ground-truth identities for slices of the Euclidean trifocal tensor of
/// `(a, b) = ((r, u), (s, w))`, with `r_{ij} = r_i × r_j` and `s_{ij} = s_i × s_j`.
pub fn euclidean_identity_suite<S: Scalar>(
    ts: &TrifocalSlices<S>,
    a: &EuclideanMotion<S>,
    b: &EuclideanMotion<S>,
    tolerance: f64,
) -> ConstraintReport {
    let (u, w) = (a.u().to_vec(), b.u().to_vec());
    let r: Vec<Vec<S>> = (0..3).map(|i| a.r().col(i)).collect();
    let s: Vec<Vec<S>> = (0..3).map(|i| b.r().col(i)).collect();
    let rc = |i: usize, j: usize| cross(&r[i], &r[j]);
    let sc = |i: usize, j: usize| cross(&s[i], &s[j]);
    let inv = {
        let all: Vec<S> = ts.t.iter().flat_map(|m| m.as_slice().to_vec()).collect();
        max_abs_element(&all).map_or_else(S::one, |m| S::one() / m)
    };
    let invp = |d: u32| pow(&inv, d);
    let uw = Matrix::outer(&u, &w);
    let zero = Matrix::<S>::zeros(3, 3);
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let triples = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];

    let mut families = Vec::new();
    let mut push = |name: &str, vals: Vec<S>| families.push(FamilyResidual::from_values(name, &vals, tolerance));

    let mut v = Vec::new();
    for i in 0..3 {
        let rhs = Matrix::outer(&cross(&s[i], &w), &cross(&r[i], &u));
        scaled_residual(&ts.a[i], &rhs, &invp(2), &mut v);
    }
    push("f1_adjugate_factorization", v);

    let mut v = Vec::new();
    for i in 0..3 {
        scaled_residual(&(&ts.t[i] * &ts.a[i]), &zero, &invp(3), &mut v);
    }
    push("f2_slice_annihilates_adjugate", v);

    let mut v = Vec::new();
    for &(i, j) in &pairs {
        let rhs = Matrix::outer(&u, &cross(&r[j], &u)).scale(&dot(&sc(i, j), &w));
        scaled_residual(&(&ts.t[i] * &ts.a[j]), &rhs, &invp(3), &mut v);
    }
    push("f3_slice_times_adjugate", v);

    let mut v = Vec::new();
    for &(i, j) in &pairs {
        let rhs = Matrix::outer(&cross(&s[j], &w), &w).scale(&-dot(&rc(i, j), &u));
        scaled_residual(&(&ts.a[j] * &ts.t[i]), &rhs, &invp(3), &mut v);
    }
    push("f4_adjugate_times_slice", v);

    let mut v = Vec::new();
    for &(i, j) in &pairs {
        let rhs = uw.scale(&(dot(&sc(i, j), &w) * dot(&rc(j, i), &u)));
        scaled_residual(&ts.tat(i, j, i), &rhs, &invp(4), &mut v);
    }
    push("f5_sandwich_repeated", v);

    let mut v = Vec::new();
    for &(i, j, k) in &triples {
        let rhs = uw.scale(&(dot(&sc(i, j), &w) * dot(&rc(j, k), &u)));
        scaled_residual(&ts.tat(i, j, k), &rhs, &invp(4), &mut v);
    }
    push("f7_sandwich_distinct", v);

    let mut v = Vec::new();
    for &(i, j, k) in &triples {
        let lhs = &(&ts.a[i] * &ts.t[j]) * &ts.a[k];
        scaled_residual(&lhs, &zero, &invp(5), &mut v);
    }
    push("f8_adjugate_sandwich", v);

    let mut v = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        scaled_residual(&ts.tat(i, j, i), &ts.tat(j, i, j), &invp(4), &mut v);
    }
    push("braid", v);

    let ubar: Vec<S> = a.invert().u().to_vec();
    let wbar: Vec<S> = b.invert().u().to_vec();
    let sum = &(&ts.a[0] + &ts.a[1]) + &ts.a[2];
    let mut v = Vec::new();
    scaled_residual(&adjugate(&sum), &uw.scale(&dot(&ubar, &wbar)), &invp(8), &mut v);
    push("adjugate_sum", v);

    let block = ts.block_tensor();
    let mut v = Vec::with_capacity(81);
    let inv4 = invp(4);
    for p in 0..3 {
        for qq in 0..3 {
            for x in 0..3 {
                for y in 0..3 {
                    let lhs = block[((p * 3 + qq) * 3 + x) * 3 + y].clone();
                    let rhs = u[x].clone() * w[y].clone() * wbar[p].clone() * ubar[qq].clone();
                    v.push((lhs - rhs) * inv4.clone());
                }
            }
        }
    }
    push("block_tensor", v);

    ConstraintReport {
        families,
        tolerance,
        exact: S::is_exact(),
        rank_deficient: rank_deficient(ts),
    }
}

/// Ground-truth rank-one identities: `adj(a₁+a₂+a₃) = (u⊗w)⟨ū, w̄⟩` and the
/// block tensor `= u⊗w⊗w̄⊗ū`, with the intrinsic minors always included.
pub fn rank_one_certificates<S: Scalar>(
    ts: &TrifocalSlices<S>,
    motions: Option<(&EuclideanMotion<S>, &EuclideanMotion<S>)>,
    tolerance: f64,
) -> ConstraintReport {
    let (norm, _) = normalize_slices(ts);
    let mut families = vec![
        FamilyResidual::from_values("adjugate_sum_rank_one", &adjugate_sum_minors(&norm), tolerance),
        FamilyResidual::from_values("block_tensor_rank_one", &block_flattening_minors(&norm), tolerance),
    ];
    if let Some((a, b)) = motions {
        let suite = euclidean_identity_suite(ts, a, b, tolerance);
        families.extend(
            suite
                .families
                .into_iter()
                .filter(|f| f.name == "adjugate_sum" || f.name == "block_tensor"),
        );
    }
    ConstraintReport {
        families,
        tolerance,
        exact: S::is_exact(),
        rank_deficient: rank_deficient(&norm),
    }
}

/// True when every family evaluated to exactly zero.
pub fn all_exact_zero(report: &ConstraintReport) -> bool {
    report.families.iter().all(|f| f.exact_zero)
}
