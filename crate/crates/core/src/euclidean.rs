//! Rigid motions `(r, u)` of `ℝ³` in the block form
//! `[[1, 0], [u, r]]`, and the closed-form Euclidean bifocal and trifocal maps.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use crate::coaction::{matrix_from_json, matrix_to_json, GroupElement};
use crate::error::{Error, Result};
use crate::focal::FocalTensor;
use crate::matrix::Matrix;
use crate::scalar::{Mode, Scalar};

/// Float tolerance on `‖rᵗr − I‖∞` and `|det r − 1|`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanMotion<S> {
    r: Matrix<S>,
    u: Vec<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotionSampler {
    /// Uniform rotation via a normalized Gaussian quaternion, Gaussian `u`. Float only.
    FloatHaar,
    /// `r = (I − S)(I + S)⁻¹` for a small rational skew `S`, small rational `u`.
    CayleyRational,
}

impl MotionSampler {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Float => MotionSampler::FloatHaar,
            Mode::Rational => MotionSampler::CayleyRational,
        }
    }
}

impl<S: Scalar> EuclideanMotion<S> {
    pub fn new(r: Matrix<S>, u: Vec<S>) -> Result<Self> {
        if r.rows() != 3 || r.cols() != 3 || u.len() != 3 {
            return Err(Error::SizeMismatch("motion needs a 3x3 rotation and a 3-vector".into()));
        }
        let gram = &(&r.transpose() * &r) - &Matrix::identity(3);
        let det = r.det()? - S::one();
        let deviation = gram.max_abs().max(det.magnitude());
        let ok = if S::is_exact() {
            gram.is_zero() && det.is_zero()
        } else {
            deviation <= ORTHOGONALITY_TOLERANCE
        };
        if !ok {
            return Err(Error::NotOrthogonal(deviation));
        }
        Ok(EuclideanMotion { r, u })
    }

    pub fn identity() -> Self {
        EuclideanMotion {
            r: Matrix::identity(3),
            u: vec![S::zero(); 3],
        }
    }

    /// Pure translation.
    pub fn translation(u: Vec<S>) -> Result<Self> {
        Self::new(Matrix::identity(3), u)
    }

    pub fn r(&self) -> &Matrix<S> {
        &self.r
    }

    pub fn u(&self) -> &[S] {
        &self.u
    }

    pub fn embed(&self) -> GroupElement<S> {
        let g = Matrix::from_fn(4, 4, |i, j| match (i, j) {
            (0, 0) => S::one(),
            (0, _) => S::zero(),
            (_, 0) => self.u[i - 1].clone(),
            _ => self.r[(i - 1, j - 1)].clone(),
        });
        GroupElement::new(g).expect("rotations are invertible")
    }

    /// Motion whose embedding is `embed(self) · embed(other)`.
    pub fn compose(&self, other: &Self) -> Self {
        let ru = self.r.mul_vec(&other.u);
        EuclideanMotion {
            r: &self.r * &other.r,
            u: self.u.iter().zip(ru).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    /// `(rᵗ, −rᵗu)`.
    pub fn invert(&self) -> Self {
        let rt = self.r.transpose();
        let u = rt.mul_vec(&self.u).into_iter().map(|v| -v).collect();
        EuclideanMotion { r: rt, u }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<EuclideanMotion<T>> {
        EuclideanMotion::new(self.r.map(&f), self.u.iter().map(&f).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": matrix_to_json(&self.r),
            "u": self.u.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "repr": S::MODE.as_str(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let r = matrix_from_json(v.get("r").ok_or_else(|| Error::Json("motion needs r".into()))?)?;
        let u = v
            .get("u")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("motion needs u".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, u)
    }

    pub fn random(sampler: MotionSampler, rng: &mut impl Rng) -> Result<Self> {
        match sampler {
            MotionSampler::CayleyRational => {
                let mut small = || S::from_ratio(rng.random_range(-9..=9), rng.random_range(1..=9));
                let (a, b, c) = (small(), small(), small());
                let skew = Matrix::from_rows(vec![
                    vec![S::zero(), -c.clone(), b.clone()],
                    vec![c, S::zero(), -a.clone()],
                    vec![-b, a, S::zero()],
                ])?;
                let id = Matrix::identity(3);
                // det(I + S) = 1 + a² + b² + c² never vanishes
                let r = &(&id - &skew) * &(&id + &skew).inverse()?;
                let u = vec![small(), small(), small()];
                Self::new(r, u)
            }
            MotionSampler::FloatHaar => {
                if S::is_exact() {
                    return Err(Error::OutOfRange("Haar sampling needs float mode".into()));
                }
                let mut q = [0.0f64; 4];
                loop {
                    for x in &mut q {
                        *x = StandardNormal.sample(rng);
                    }
                    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if n > 1e-6 {
                        q.iter_mut().for_each(|x| *x /= n);
                        break;
                    }
                }
                let [w, x, y, z] = q;
                let rot = [
                    [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                    [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                    [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
                ];
                let r = Matrix::from_fn(3, 3, |i, j| S::from_f64(rot[i][j]));
                let u = (0..3)
                    .map(|_| S::from_f64(StandardNormal.sample(rng)))
                    .collect();
                Self::new(r, u)
            }
        }
    }
}

/// `[[0, u₃, −u₂], [−u₃, 0, u₁], [u₂, −u₁, 0]]`, the transpose of `[u]ₓ`.
pub fn skew<S: Scalar>(u: &[S]) -> Matrix<S> {
    let z = S::zero;
    Matrix::from_rows(vec![
        vec![z(), u[2].clone(), -u[1].clone()],
        vec![-u[2].clone(), z(), u[0].clone()],
        vec![u[1].clone(), -u[0].clone(), z()],
    ])
    .expect("3x3")
}

/// `rᵗ · skew(u)`.
pub fn essential<S: Scalar>(mo: &EuclideanMotion<S>) -> Matrix<S> {
    &mo.r.transpose() * &skew(&mo.u)
}

/// Hodge index and sign of each lexicographic `Λ²` basis element
/// `(ẽ₁ẽ₂, ẽ₁ẽ₃, ẽ₂ẽ₃) ↦ (+e₃, −e₂, +e₁)`.
pub const HODGE: [(usize, i64); 3] = [(2, 1), (1, -1), (0, 1)];

/// The `(2, 1, 2)` tensor with middle-axis slices `t_j = −r_j wᵗ + u s_jᵗ`
/// (`r_j`, `s_j` the `j`-th columns), laid out so that it coincides with the
/// general construction under the `(g₁⁻¹, id, g₂⁻¹)` section.
pub fn trifocal_euclidean<S: Scalar>(a: &EuclideanMotion<S>, b: &EuclideanMotion<S>) -> FocalTensor<S> {
    let mut t = FocalTensor::zeros(4, vec![2, 1, 2]);
    for j in 0..3 {
        let slice = hodge_slice(a, b, j);
        for (la, &(ha, sa)) in HODGE.iter().enumerate() {
            for (lc, &(hc, sc)) in HODGE.iter().enumerate() {
                t.set(&[la, j, lc], S::from_i64(sa * sc) * slice[(ha, hc)].clone());
            }
        }
    }
    t
}

/// `−r_j wᵗ + u s_jᵗ` in the Hodge basis.
pub fn hodge_slice<S: Scalar>(a: &EuclideanMotion<S>, b: &EuclideanMotion<S>, j: usize) -> Matrix<S> {
    let rj = a.r.col(j);
    let sj = b.r.col(j);
    &Matrix::outer(&a.u, &sj) - &Matrix::outer(&rj, &b.u)
}
