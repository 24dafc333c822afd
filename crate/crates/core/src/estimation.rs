//! Synthetic scenes, projection into frames, and linear recovery of focal tensors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::{json, Value};

use crate::coaction::{compound_matrix, GroupElement};
use crate::error::{Error, Result};
use crate::euclidean::{EuclideanMotion, MotionSampler};
use crate::exterior::Multivector;
use crate::focal::{tensor_row, FocalTensor};
use crate::invariants::Invariant;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Relative size below which a projected feature counts as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Relative singular-value cutoff for numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

const MAX_RESAMPLES: usize = 100;

/// Tangent part of `g⁻¹ · L`: the coefficients of index sets avoiding `0`,
/// reindexed so that `i` becomes `i − 1`.
pub fn project<S: Scalar>(g: &GroupElement<S>, l: &Multivector<S>) -> Result<Multivector<S>> {
    let m = g.dim();
    if l.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: l.dim() });
    }
    let k = l.degree();
    if k == 0 || k >= m {
        return Err(Error::OutOfRange(format!("cannot project a degree-{k} element in dimension {m}")));
    }
    let inv = g.inverse();
    let pulled = Multivector::from_dense(m, k, &compound_matrix(inv.matrix(), k - 1)?.mul_vec(&l.to_dense()))?;
    let mut tangent = Multivector::zero(m - 1, k)?;
    for (idx, v) in pulled.terms() {
        if idx.contains(0) {
            continue;
        }
        let shifted: Vec<usize> = idx.as_slice().iter().map(|i| i - 1).collect();
        tangent = tangent.add(&Multivector::basis(m - 1, &shifted)?.scale(v))?;
    }
    let scale = pulled.to_dense().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let size = tangent.to_dense().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let degenerate = if S::is_exact() { tangent.is_zero() } else { size <= DEGENERACY_THRESHOLD * scale };
    if degenerate {
        return Err(Error::DegenerateProjection(format!(
            "degree-{k} subspace passes through the frame basepoint"
        )));
    }
    Ok(tangent)
}

/// Image point of the world point `x` (homogeneous coordinates) in frame `g`.
pub fn project_point<S: Scalar>(g: &GroupElement<S>, x: &[S]) -> Result<Multivector<S>> {
    project(g, &Multivector::from_vector(x))
}

/// Image line of the world line `l` (a decomposable bivector) in frame `g`.
pub fn project_line<S: Scalar>(g: &GroupElement<S>, l: &Multivector<S>) -> Result<Multivector<S>> {
    if l.degree() != 2 {
        return Err(Error::SizeMismatch(format!("expected a bivector, got degree {}", l.degree())));
    }
    project(g, l)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameGroup {
    Euclidean,
    General,
}

impl std::str::FromStr for FrameGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(FrameGroup::Euclidean),
            "general" => Ok(FrameGroup::General),
            other => Err(Error::OutOfRange(format!("unknown group {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SceneSpec {
    pub n_frames: usize,
    pub n_points: usize,
    pub n_lines: usize,
    pub seed: u64,
    pub group: FrameGroup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene<S> {
    pub frames: Vec<GroupElement<S>>,
    pub points: Vec<Vec<S>>,
    pub lines: Vec<Multivector<S>>,
}

fn small_rational<S: Scalar>(rng: &mut impl Rng) -> S {
    S::from_ratio(rng.random_range(-12..=12), rng.random_range(1..=4))
}

fn random_vector<S: Scalar>(dim: usize, rng: &mut impl Rng) -> Vec<S> {
    (0..dim).map(|_| small_rational(rng)).collect()
}

fn resample<T>(mut f: impl FnMut() -> Option<T>) -> Result<T> {
    (0..MAX_RESAMPLES).find_map(|_| f()).ok_or(Error::ResampleExhausted(MAX_RESAMPLES))
}

fn visible_everywhere<S: Scalar>(frames: &[GroupElement<S>], l: &Multivector<S>) -> bool {
    frames.iter().all(|g| project(g, l).is_ok())
}

/// Random scene in dimension 4, deterministic in `spec.seed`.
pub fn random_scene<S: Scalar>(spec: &SceneSpec) -> Result<Scene<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let frames = (0..spec.n_frames)
        .map(|_| match spec.group {
            FrameGroup::Euclidean => {
                Ok(EuclideanMotion::<S>::random(MotionSampler::for_mode(S::MODE), &mut rng)?.embed())
            }
            FrameGroup::General => Ok(GroupElement::random(4, 5, &mut rng)),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::with_capacity(spec.n_points);
    for _ in 0..spec.n_points {
        points.push(resample(|| {
            let x = random_vector::<S>(4, &mut rng);
            visible_everywhere(&frames, &Multivector::from_vector(&x)).then_some(x)
        })?);
    }
    let mut lines = Vec::with_capacity(spec.n_lines);
    for _ in 0..spec.n_lines {
        lines.push(resample(|| {
            let a = Multivector::from_vector(&random_vector::<S>(4, &mut rng));
            let b = Multivector::from_vector(&random_vector::<S>(4, &mut rng));
            let l = a.wedge(&b).ok()?;
            (l.is_decomposable().ok()? && visible_everywhere(&frames, &l)).then_some(l)
        })?);
    }
    Ok(Scene { frames, points, lines })
}

impl<S: Scalar> Scene<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "frames": self.frames.iter().map(GroupElement::to_json).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| p.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "lines": self.lines.iter().map(Multivector::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let list = |key: &str| {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Json(format!("scene needs an array {key:?}")))
        };
        let frames = list("frames")?.iter().map(GroupElement::from_json).collect::<Result<Vec<_>>>()?;
        let points = list("points")?
            .iter()
            .map(|p| {
                p.as_array()
                    .ok_or_else(|| Error::Json("point must be an array".into()))?
                    .iter()
                    .map(S::from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let lines = list("lines")?.iter().map(Multivector::from_json).collect::<Result<Vec<_>>>()?;
        if let Some(g) = frames.iter().find(|g| g.dim() != 4) {
            return Err(Error::DimensionMismatch { expected: 4, found: g.dim() });
        }
        if let Some(p) = points.iter().find(|p| p.len() != 4) {
            return Err(Error::DimensionMismatch { expected: 4, found: p.len() });
        }
        for l in &lines {
            if l.degree() != 2 || !l.is_decomposable()? {
                return Err(Error::Json("scene lines must be decomposable bivectors".into()));
            }
        }
        Ok(Scene { frames, points, lines })
    }

    /// Noiseless correspondences for `inv` from the first `count` points, viewed
    /// in frames `0..arity`. A degree-`p` slot observes a random `p`-dimensional
    /// world subspace through the point, so every feature is incident with it.
    pub fn correspondences(&self, inv: &Invariant, count: usize, seed: u64) -> Result<Vec<Correspondence<S>>> {
        let degrees = inv.tangent_degrees();
        if self.frames.len() < degrees.len() {
            return Err(Error::ArityMismatch { expected: degrees.len(), found: self.frames.len() });
        }
        if self.points.len() < count {
            return Err(Error::OutOfRange(format!("scene has {} points, {count} requested", self.points.len())));
        }
        let dim = inv.dim();
        if dim != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: dim });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.points[..count]
            .iter()
            .map(|x| {
                let base = Multivector::from_vector(x);
                let features = degrees
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| {
                        let g = &self.frames[i];
                        if p == 0 {
                            return Multivector::basis(dim - 1, &[]);
                        }
                        resample(|| {
                            let mut sub = base.clone();
                            for _ in 1..p {
                                sub = sub.wedge(&Multivector::from_vector(&random_vector::<S>(dim, &mut rng))).ok()?;
                            }
                            project(g, &sub).ok()
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Correspondence { views: (0..degrees.len()).collect(), features })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence<S> {
    pub views: Vec<usize>,
    pub features: Vec<Multivector<S>>,
}

impl<S: Scalar> Correspondence<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "views": self.views,
            "features": self.features.iter().map(Multivector::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let views = v
            .get("views")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("correspondence needs \"views\"".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Json("view index".into())))
            .collect::<Result<Vec<_>>>()?;
        let features = v
            .get("features")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("correspondence needs \"features\"".into()))?
            .iter()
            .map(Multivector::from_json)
            .collect::<Result<Vec<_>>>()?;
        if views.len() != features.len() {
            return Err(Error::ArityMismatch { expected: views.len(), found: features.len() });
        }
        Ok(Correspondence { views, features })
    }
}

/// One row `⊗ᵢ cᵢ` per correspondence, so that `row · vec(t) = contract(t, c)`.
pub fn linear_rows<S: Scalar>(inv: &Invariant, corrs: &[Correspondence<S>]) -> Result<Matrix<S>> {
    let degrees = inv.tangent_degrees();
    let mut rows = Vec::with_capacity(corrs.len());
    for c in corrs {
        if c.features.len() != degrees.len() {
            return Err(Error::ArityMismatch { expected: degrees.len(), found: c.features.len() });
        }
        for (f, &p) in c.features.iter().zip(&degrees) {
            if f.dim() != inv.dim() - 1 || f.degree() != p {
                return Err(Error::SizeMismatch(format!(
                    "feature of degree {} in dimension {}, expected degree {p} in dimension {}",
                    f.degree(),
                    f.dim(),
                    inv.dim() - 1
                )));
            }
        }
        rows.push(tensor_row(&c.features));
    }
    if rows.is_empty() {
        return Err(Error::SizeMismatch("no correspondences".into()));
    }
    Matrix::from_rows(rows)
}

/// SVD of `a` with each nonzero row scaled to unit length, zero-padded to at
/// least square.
fn svd_of(a: &Matrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.cols();
    let rows = a.rows().max(n);
    let norms: Vec<f64> = (0..a.rows())
        .map(|i| {
            let norm = (0..n).map(|j| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
            if norm > 0.0 { norm } else { 1.0 }
        })
        .collect();
    let padded = DMatrix::from_fn(rows, n, |i, j| if i < a.rows() { a[(i, j)] / norms[i] } else { 0.0 });
    let svd = padded.svd(false, true);
    (svd.singular_values.iter().copied().collect(), svd.v_t.expect("requested"))
}

/// Numerical rank: singular values above `RANK_TOLERANCE` times the largest.
pub fn numerical_rank(a: &Matrix<f64>) -> usize {
    let (sv, _) = svd_of(a);
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * top).count()
}

/// Rank of a constraint matrix: exact in rational mode, numerical in float mode.
pub fn constraint_rank<S: Scalar>(a: &Matrix<S>) -> usize {
    if S::is_exact() {
        a.rank()
    } else {
        numerical_rank(&a.map(Scalar::to_f64))
    }
}

fn sign_normalize(v: &mut [f64]) {
    if v.iter().find(|x| **x != 0.0).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Unit right singular vector of the smallest singular value, first nonzero entry positive.
pub fn solve_nullspace(a: &Matrix<f64>) -> Result<Vec<f64>> {
    let (sv, vt) = svd_of(a);
    let top = sv.iter().copied().fold(0.0, f64::max);
    let nullity = sv.iter().filter(|&&s| s <= RANK_TOLERANCE * top).count();
    if nullity > 1 {
        return Err(Error::AmbiguousSolution { nullity });
    }
    let (k, _) = sv
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best });
    let mut v: Vec<f64> = vt.row(k).iter().copied().collect();
    sign_normalize(&mut v);
    Ok(v)
}

/// Exact kernel vector, scaled so its first nonzero entry is 1.
pub fn solve_nullspace_exact<S: Scalar>(a: &Matrix<S>) -> Result<Vec<S>> {
    let kernel = a.nullspace();
    match kernel.len() {
        0 => Err(Error::TrivialKernel),
        1 => {
            let v = kernel.into_iter().next().expect("one vector");
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("kernel vectors are nonzero");
            Ok(v.into_iter().map(|x| x / lead.clone()).collect())
        }
        nullity => Err(Error::AmbiguousSolution { nullity }),
    }
}

/// Focal tensor spanning the kernel of the correspondence rows.
pub fn estimate<S: Scalar>(inv: &Invariant, corrs: &[Correspondence<S>]) -> Result<FocalTensor<S>> {
    let a = linear_rows(inv, corrs)?;
    let v = if S::is_exact() {
        solve_nullspace_exact(&a)?
    } else {
        solve_nullspace(&a.map(Scalar::to_f64))?.into_iter().map(S::from_f64).collect()
    };
    FocalTensor::from_data(inv.dim(), inv.tangent_degrees(), v)
}

/// `min_λ ‖λe − t‖ / ‖t‖`, Frobenius norms; 1 for a zero estimate.
pub fn align_scale<S: Scalar>(estimate: &FocalTensor<S>, truth: &FocalTensor<S>) -> Result<f64> {
    if estimate.shape() != truth.shape() {
        return Err(Error::SizeMismatch(format!(
            "shapes {:?} and {:?} differ",
            estimate.shape(),
            truth.shape()
        )));
    }
    let e: Vec<f64> = estimate.data().iter().map(Scalar::to_f64).collect();
    let t: Vec<f64> = truth.data().iter().map(Scalar::to_f64).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let tt = dot(&t, &t);
    if tt == 0.0 {
        return Err(Error::OutOfRange("reference tensor is zero".into()));
    }
    let ee = dot(&e, &e);
    if ee == 0.0 {
        return Ok(1.0);
    }
    let lambda = dot(&e, &t) / ee;
    let resid: f64 = e.iter().zip(&t).map(|(a, b)| (lambda * a - b).powi(2)).sum();
    Ok((resid / tt).sqrt())
}

/// Adds independent Gaussian noise of deviation `sigma` to every feature coordinate.
pub fn add_noise(corrs: &mut [Correspondence<f64>], sigma: f64, seed: u64) -> Result<()> {
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::OutOfRange(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in corrs {
        for f in &mut c.features {
            let noisy: Vec<f64> = f.to_dense().iter().map(|x| x + normal.sample(&mut rng)).collect();
            *f = Multivector::from_dense(f.dim(), f.degree(), &noisy)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focal::{contract, multifocal, FrameTuple};
    use crate::invariants::{quadrifocal, trifocal, wedge_pair, InvariantName};
    use crate::scalar::Rational;
    use num_traits::Zero;

    type Q = Rational;

    fn spec(n_frames: usize, n_points: usize, seed: u64, group: FrameGroup) -> SceneSpec {
        SceneSpec { n_frames, n_points, n_lines: 3, seed, group }
    }

    fn truth<S: Scalar>(inv: &Invariant, scene: &Scene<S>) -> FocalTensor<S> {
        let frames = FrameTuple::new(scene.frames[..inv.arity()].to_vec()).unwrap();
        multifocal(inv, &frames).unwrap()
    }

    #[test]
    fn projection_examples() {
        let id = GroupElement::<Q>::identity(4);
        let x: Vec<Q> = [1, 1, 0, 0].iter().map(|&v| Q::from_i64(v)).collect();
        assert_eq!(project_point(&id, &x).unwrap(), Multivector::basis(3, &[0]).unwrap());
        let ray: Vec<Q> = [1, 0, 0, 0].iter().map(|&v| Q::from_i64(v)).collect();
        assert!(matches!(project_point(&id, &ray), Err(Error::DegenerateProjection(_))));
        let l = Multivector::<Q>::basis(4, &[2, 3]).unwrap();
        assert_eq!(project_line(&id, &l).unwrap(), Multivector::basis(3, &[1, 2]).unwrap());
        let through = Multivector::<Q>::basis(4, &[0, 1]).unwrap();
        assert!(project_line(&id, &through).is_err());
    }

    #[test]
    fn vanishing_oracle_pins_the_convention() {
        let invs = [
            InvariantName::Bifocal.build().unwrap(),
            trifocal(),
            quadrifocal(),
            wedge_pair(4, 1, 1).unwrap(),
        ];
        for (k, inv) in invs.iter().enumerate() {
            let scene = random_scene::<Q>(&spec(4, 6, k as u64, FrameGroup::General)).unwrap();
            let t = truth(inv, &scene);
            assert!(!t.is_zero());
            for c in scene.correspondences(inv, 6, 7).unwrap() {
                assert!(contract(&t, &c.features).unwrap().is_zero(), "{}", inv.name());
            }
        }
    }

    #[test]
    fn other_conventions_fail_the_oracle() {
        let inv = InvariantName::Bifocal.build().unwrap();
        let scene = random_scene::<Q>(&spec(2, 4, 3, FrameGroup::General)).unwrap();
        let t = truth(&inv, &scene);
        let tangent = |v: Vec<Q>| Multivector::from_vector(&v[1..]);
        let candidates: [fn(&GroupElement<Q>) -> Matrix<Q>; 3] = [
            |g| g.matrix().clone(),
            |g| g.matrix().transpose(),
            |g| g.inverse().matrix().transpose(),
        ];
        for conv in candidates {
            let vanishes = scene.points.iter().all(|x| {
                let c: Vec<_> = scene.frames.iter().map(|g| tangent(conv(g).mul_vec(x))).collect();
                contract(&t, &c).unwrap().is_zero()
            });
            assert!(!vanishes);
        }
    }

    #[test]
    fn trifocal_line_point_line_incidence() {
        let inv = trifocal();
        let scene = random_scene::<Q>(&spec(3, 0, 11, FrameGroup::Euclidean)).unwrap();
        let t = truth(&inv, &scene);
        let x: Vec<Q> = [2, 1, -3, 5].iter().map(|&v| Q::from_i64(v)).collect();
        let y: Vec<Q> = [1, 4, 1, -2].iter().map(|&v| Q::from_i64(v)).collect();
        let z: Vec<Q> = [-1, 2, 3, 1].iter().map(|&v| Q::from_i64(v)).collect();
        let px = Multivector::from_vector(&x);
        let l1 = px.wedge(&Multivector::from_vector(&y)).unwrap();
        let l3 = px.wedge(&Multivector::from_vector(&z)).unwrap();
        let c = [
            project_line(&scene.frames[0], &l1).unwrap(),
            project_point(&scene.frames[1], &x).unwrap(),
            project_line(&scene.frames[2], &l3).unwrap(),
        ];
        assert!(contract(&t, &c).unwrap().is_zero());
        let off: Vec<Q> = [3, 0, 1, 1].iter().map(|&v| Q::from_i64(v)).collect();
        let c = [c[0].clone(), project_point(&scene.frames[1], &off).unwrap(), c[2].clone()];
        assert!(!contract(&t, &c).unwrap().is_zero());
    }

    #[test]
    fn rows_match_contraction() {
        let inv = InvariantName::Bifocal.build().unwrap();
        let c = Correspondence {
            views: vec![0, 1],
            features: vec![Multivector::<Q>::basis(3, &[0]).unwrap(), Multivector::basis(3, &[1]).unwrap()],
        };
        let a = linear_rows(&inv, &[c.clone()]).unwrap();
        let mut expected = vec![Q::zero(); 9];
        expected[1] = Q::from_i64(1);
        assert_eq!(a.row(0), expected);
        assert_eq!(linear_rows(&inv, &[c.clone(), c]).unwrap().rank(), 1);
        let short = Correspondence { views: vec![0], features: vec![Multivector::<Q>::basis(3, &[0]).unwrap()] };
        assert!(matches!(linear_rows(&inv, &[short]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn nullspace_examples() {
        let a = Matrix::<f64>::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        let v = solve_nullspace(&a).unwrap();
        assert!((v[2] - 1.0).abs() < 1e-12 && v[0].abs() < 1e-12 && v[1].abs() < 1e-12);
        let b = Matrix::<f64>::from_i64_rows(&[&[1, 0, 0]]);
        assert_eq!(solve_nullspace(&b), Err(Error::AmbiguousSolution { nullity: 2 }));
        let q = Matrix::<Q>::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(solve_nullspace_exact(&q).unwrap(), vec![Q::zero(), Q::zero(), Q::from_i64(1)]);
        assert_eq!(solve_nullspace_exact(&Matrix::<Q>::identity(2)), Err(Error::TrivialKernel));
    }

    #[test]
    fn rank_ignores_row_scale() {
        let a = Matrix::from_fn(2, 3, |i, j| match (i, j) {
            (0, 0) => 1e12,
            (1, 1) => 1.0,
            _ => 0.0,
        });
        assert_eq!(numerical_rank(&a), 2);
        assert!((solve_nullspace(&a).unwrap()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrifocal_recovery_with_wide_row_scales() {
        let inv = InvariantName::Quadrifocal.build().unwrap();
        let scene = random_scene::<f64>(&spec(4, 80, 7, FrameGroup::Euclidean)).unwrap();
        let corrs = scene.correspondences(&inv, 80, 7).unwrap();
        assert_eq!(numerical_rank(&linear_rows(&inv, &corrs).unwrap()), 80);
        let est = estimate(&inv, &corrs).unwrap();
        assert!(align_scale(&est, &truth(&inv, &scene)).unwrap() <= 1e-6);
    }

    #[test]
    fn align_scale_examples() {
        let t = FocalTensor::from_data(4, vec![1, 1], (1..=9).map(f64::from).collect()).unwrap();
        assert!(align_scale(&t.scale(&3.0), &t).unwrap() < 1e-15);
        let mut e = FocalTensor::zeros(4, vec![1, 1]);
        assert_eq!(align_scale(&e, &t).unwrap(), 1.0);
        // orthogonal to t: (2, -1, 0, ...)
        e.set(&[0, 0], 2.0);
        e.set(&[0, 1], -1.0);
        assert!((align_scale(&e, &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recovery_round_trips() {
        for (inv, n) in [(InvariantName::Bifocal.build().unwrap(), 8), (trifocal(), 26)] {
            let scene = random_scene::<f64>(&spec(inv.arity(), n, 21, FrameGroup::Euclidean)).unwrap();
            let corrs = scene.correspondences(&inv, n, 5).unwrap();
            let a = linear_rows(&inv, &corrs).unwrap();
            assert_eq!(numerical_rank(&a), n);
            let est = estimate(&inv, &corrs).unwrap();
            assert!(align_scale(&est, &truth(&inv, &scene)).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn exact_recovery() {
        let inv = InvariantName::Bifocal.build().unwrap();
        let scene = random_scene::<Q>(&spec(2, 8, 4, FrameGroup::General)).unwrap();
        let corrs = scene.correspondences(&inv, 8, 1).unwrap();
        let est = estimate(&inv, &corrs).unwrap();
        assert!(est.proportionality(&truth(&inv, &scene)).is_some());
    }

    #[test]
    fn scenes_are_reproducible_and_general() {
        let s = spec(3, 50, 9, FrameGroup::General);
        let a = random_scene::<Q>(&s).unwrap();
        assert_eq!(a, random_scene::<Q>(&s).unwrap());
        assert!(a.frames.iter().all(|g| !g.det().is_zero()));
        for x in &a.points {
            assert!(a.frames.iter().all(|g| project_point(g, x).is_ok()));
        }
        assert!(a.lines.iter().all(|l| l.is_decomposable().unwrap()));
        let back = Scene::<Q>::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
        let f = random_scene::<f64>(&SceneSpec { group: FrameGroup::Euclidean, ..s }).unwrap();
        assert_eq!(f, random_scene::<f64>(&SceneSpec { group: FrameGroup::Euclidean, ..s }).unwrap());
    }

    #[test]
    fn noise_moves_features() {
        let inv = InvariantName::Bifocal.build().unwrap();
        let scene = random_scene::<f64>(&spec(2, 10, 2, FrameGroup::Euclidean)).unwrap();
        let clean = scene.correspondences(&inv, 10, 3).unwrap();
        let mut noisy = clean.clone();
        add_noise(&mut noisy, 1e-3, 4).unwrap();
        assert_ne!(noisy, clean);
        let est = estimate(&inv, &noisy).unwrap();
        let err = align_scale(&est, &truth(&inv, &scene)).unwrap();
        assert!(err > 0.0 && err < 0.5, "{err}");
        let json = Correspondence::<f64>::from_json(&noisy[0].to_json()).unwrap();
        assert_eq!(json, noisy[0]);
    }
}
