use std::time::{Duration, Instant};

use multifocal::coaction::{psi, GroupElement};
use multifocal::constraints::{check_all, euclidean_identity_suite, frobenius_identity_residual, TrifocalSlices};
use multifocal::estimation::{align_scale, estimate, linear_rows, numerical_rank, random_scene, FrameGroup, SceneSpec};
use multifocal::euclidean::{essential, trifocal_euclidean, EuclideanMotion, MotionSampler};
use multifocal::exterior::{permutation_sign, subsets};
use multifocal::focal::{apply_section, incidence, multifocal, FocalTensor, FrameTuple, Section};
use multifocal::invariants::{check_weight, quadrifocal, trifocal, wedge_pair, Invariant, InvariantName};
use multifocal::polyforms::{cartan_residual, PolyForm};
use multifocal::scalar::FLOAT_TOLERANCE;
use multifocal::{Matrix, Multivector, Rational, Scalar};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

type Q = Rational;
type Outcome = Result<String, String>;

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const PRIMES: [i64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn leibniz(g: &Matrix<Q>, rows: &[usize], cols: &[usize]) -> Q {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut next = p.clone();
                next.insert(pos, n - 1);
                out.push(next);
            }
        }
        out
    }
    perms(rows.len()).iter().fold(q(0), |acc, p| {
        let term = p
            .iter()
            .enumerate()
            .fold(q(permutation_sign(p).unwrap()), |t, (k, &pk)| t * g[(rows[k], cols[pk])].clone());
        acc + term
    })
}

fn psi_anchor_suite() -> Outcome {
    let mut checked = 0;
    for (m, p) in [(2, 0), (3, 0), (3, 1), (4, 1), (4, 2)] {
        let g = GroupElement::new(Matrix::from_fn(m, m, |i, j| q(PRIMES[i * m + j]))).unwrap();
        let s = psi(&g, p).map_err(|e| e.to_string())?;
        for (i, r) in subsets(m, p + 1).iter().enumerate() {
            for (j, jj) in subsets(m - 1, p).iter().enumerate() {
                let mut cols = vec![0];
                cols.extend(jj.iter().map(|x| x + 1));
                let want = leibniz(g.matrix(), r, &cols);
                ensure(*s.get(i, j) == want, || format!("(m={m}, p={p}) entry R={r:?} J={jj:?}"))?;
                checked += 1;
            }
        }
    }
    // the 3x3, p = 1 table written out: rows {01},{02},{12}; columns {01},{02}
    let g = GroupElement::new(Matrix::from_fn(3, 3, |i, j| q(PRIMES[i * 3 + j]))).unwrap();
    let s = psi(&g, 1).unwrap();
    let explicit = [[2 * 11 - 3 * 7, 2 * 13 - 5 * 7], [2 * 19 - 3 * 17, 2 * 23 - 5 * 17], [7 * 19 - 11 * 17, 7 * 23 - 13 * 17]];
    for (i, row) in explicit.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            ensure(*s.get(i, j) == q(v), || format!("explicit 3x3 table entry ({i},{j})"))?;
        }
    }
    Ok(format!("{checked} entries over 5 tables, exact"))
}

fn cartan_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut forms = 0;
    for m in 1..=4 {
        for total in 0..=4 {
            for p in 0..=total.min(m) {
                for _ in 0..50 {
                    let f = PolyForm::<Q>::random(m, p, total - p, 9, &mut rng).map_err(|e| e.to_string())?;
                    let r = cartan_residual(&f).map_err(|e| e.to_string())?;
                    ensure(r.is_zero(), || format!("nonzero residual at m={m}, p={p}, q={}", total - p))?;
                    forms += 1;
                }
            }
        }
    }
    Ok(format!("{forms} random forms, exact"))
}

fn euclidean_bifocal() -> Outcome {
    let i2 = InvariantName::Bifocal.build().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let mo = EuclideanMotion::<Q>::random(MotionSampler::CayleyRational, &mut rng).unwrap();
        let t = multifocal(&i2, &apply_section(&[mo.embed()], Section::Chain).unwrap()).unwrap();
        let e = FocalTensor::from_data(4, vec![1, 1], essential(&mo).as_slice().to_vec()).unwrap();
        ensure(t.proportionality(&e).is_some(), || format!("rational motion {k} not proportional"))?;
    }
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let mo = EuclideanMotion::<f64>::random(MotionSampler::FloatHaar, &mut rng).unwrap();
        let t = multifocal(&i2, &apply_section(&[mo.embed()], Section::Chain).unwrap()).unwrap();
        let e = FocalTensor::from_data(4, vec![1, 1], essential(&mo).as_slice().to_vec()).unwrap();
        let err = align_scale(&t, &e).map_err(|e| e.to_string())?;
        ensure(err <= 1e-9, || format!("float motion {k}: relative error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("100 exact + 100 float, worst float error {worst:.1e}"))
}

fn euclidean_trifocal() -> Outcome {
    let i3 = trifocal();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let a = EuclideanMotion::<Q>::random(MotionSampler::CayleyRational, &mut rng).unwrap();
        let b = EuclideanMotion::<Q>::random(MotionSampler::CayleyRational, &mut rng).unwrap();
        let frames = apply_section(&[a.embed(), b.embed()], Section::TrifocalInverse).unwrap();
        let t = multifocal(&i3, &frames).unwrap();
        ensure(t.proportionality(&trifocal_euclidean(&a, &b)).is_some(), || format!("pair {k} not proportional"))?;
    }
    Ok("100 exact pairs".into())
}

fn low_dimension_anchors() -> Outcome {
    let i = wedge_pair(2, 0, 0).unwrap();
    let frame = |rows: Vec<Vec<Q>>| GroupElement::new(Matrix::from_rows(rows).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (c, c2) = (q(rng.random_range(-50..=50)), q(rng.random_range(-50..=50)));
        let f = FrameTuple::new(vec![
            frame(vec![vec![q(1), q(0)], vec![c.clone(), q(1)]]),
            frame(vec![vec![q(1), q(0)], vec![c2.clone(), q(1)]]),
        ])
        .unwrap();
        let t = multifocal(&i, &f).unwrap();
        ensure(t.data() == [c2.clone() - c.clone()], || format!("translation ({c}, {c2})"))?;
    }
    // rational points on the circle from Pythagorean parameters
    let rot = |s: i64, t: i64| {
        let d = q(s * s + t * t);
        let (a, b) = (q(s * s - t * t) / d.clone(), q(2 * s * t) / d);
        (a.clone(), b.clone(), frame(vec![vec![a.clone(), -b.clone()], vec![b, a]]))
    };
    for (s, t, s2, t2) in [(2, 1, 3, 2), (4, 1, 5, 2), (1, 3, 7, 4)] {
        let (a, b, g) = rot(s, t);
        let (a2, b2, g2) = rot(s2, t2);
        let f = multifocal(&i, &FrameTuple::new(vec![g, g2]).unwrap()).unwrap();
        let want = a * b2 - b * a2;
        ensure(f.data() == [want], || format!("rotation pair ({s},{t}) ({s2},{t2})"))?;
    }
    Ok("20 translations c'-c, 3 rotations ab'-ba', exact".into())
}

fn gaussian_tensor(rng: &mut ChaCha8Rng) -> FocalTensor<f64> {
    let data: Vec<f64> = (0..27).map(|_| StandardNormal.sample(rng)).collect();
    FocalTensor::from_data(4, vec![2, 1, 2], data).unwrap()
}

fn constraint_necessity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let a = EuclideanMotion::<Q>::random(MotionSampler::CayleyRational, &mut rng).unwrap();
        let b = EuclideanMotion::<Q>::random(MotionSampler::CayleyRational, &mut rng).unwrap();
        let t = trifocal_euclidean(&a, &b);
        let intrinsic = check_all(&t, FLOAT_TOLERANCE).map_err(|e| e.to_string())?;
        let ts = TrifocalSlices::from_tensor(&t).unwrap();
        let truth = euclidean_identity_suite(&ts, &a, &b, FLOAT_TOLERANCE);
        for f in intrinsic.families.iter().chain(&truth.families) {
            ensure(f.exact_zero, || format!("rational tensor {k}: {} max {:e}", f.name, f.max))?;
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let a = EuclideanMotion::<f64>::random(MotionSampler::FloatHaar, &mut rng).unwrap();
        let b = EuclideanMotion::<f64>::random(MotionSampler::FloatHaar, &mut rng).unwrap();
        let t = trifocal_euclidean(&a, &b);
        let intrinsic = check_all(&t, FLOAT_TOLERANCE).map_err(|e| e.to_string())?;
        let ts = TrifocalSlices::from_tensor(&t).unwrap();
        let truth = euclidean_identity_suite(&ts, &a, &b, FLOAT_TOLERANCE);
        for f in intrinsic.families.iter().chain(&truth.families) {
            ensure(f.pass, || format!("float tensor {k}: {} max {:e}", f.name, f.max))?;
            worst = worst.max(f.max);
        }
    }
    let mut rejected = 0;
    let mut minimum = f64::INFINITY;
    for _ in 0..1000 {
        let report = check_all(&gaussian_tensor(&mut rng), FLOAT_TOLERANCE).unwrap();
        let max = report.max_residual();
        minimum = minimum.min(max);
        if !report.pass() && max >= 1e-3 {
            rejected += 1;
        }
    }
    ensure(rejected >= 999, || format!("only {rejected}/1000 Gaussian tensors rejected"))?;
    Ok(format!(
        "100 exact + 100 float (worst {worst:.1e}); Gaussian rejected {rejected}/1000, minimum max-residual {minimum:.3e}"
    ))
}

fn frobenius_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let m = Matrix::from_fn(3, 3, |_, _| Q::from_ratio(rng.random_range(-30..=30), rng.random_range(1..=9)));
        ensure(frobenius_identity_residual(&m).is_zero(), || format!("matrix {k}"))?;
    }
    Ok("100 random rational matrices, exact".into())
}

fn random_vec(rng: &mut ChaCha8Rng) -> Vec<Q> {
    (0..4).map(|_| q(rng.random_range(-5..=5))).collect()
}

fn span(vectors: &[Vec<Q>]) -> Multivector<Q> {
    vectors[1..].iter().fold(Multivector::from_vector(&vectors[0]), |acc, v| {
        acc.wedge(&Multivector::from_vector(v)).unwrap()
    })
}

/// Spanning vectors of a subspace of the given dimension, all through `through` if supplied.
fn random_subspace(dim: usize, through: Option<&[Q]>, rng: &mut ChaCha8Rng) -> Vec<Vec<Q>> {
    loop {
        let mut vs: Vec<Vec<Q>> = (0..dim).map(|_| random_vec(rng)).collect();
        if let Some(x) = through {
            vs[0] = x.to_vec();
        }
        if Matrix::from_rows(vs.clone()).unwrap().rank() == dim {
            return vs;
        }
    }
}

/// Normal covector of a plane from its spanning vectors.
fn normal(plane: &[Vec<Q>]) -> Vec<Q> {
    let kernel = Matrix::from_rows(plane.to_vec()).unwrap().nullspace();
    assert_eq!(kernel.len(), 1);
    kernel.into_iter().next().unwrap()
}

fn lines_meet(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    Matrix::from_rows([a, b].concat()).unwrap().rank() < 4
}

fn planes_meet_line(p: &[Vec<Q>], l: &[Vec<Q>], r: &[Vec<Q>]) -> bool {
    let (np, nr) = (normal(p), normal(r));
    let dot = |n: &[Q], v: &[Q]| n.iter().zip(v).fold(q(0), |acc, (x, y)| acc + x.clone() * y.clone());
    let m = Matrix::from_rows(vec![vec![dot(&np, &l[0]), dot(&np, &l[1])], vec![dot(&nr, &l[0]), dot(&nr, &l[1])]]).unwrap();
    m.det().unwrap().is_zero()
}

fn planes_share_point(planes: &[Vec<Vec<Q>>]) -> bool {
    Matrix::from_rows(planes.iter().map(|p| normal(p)).collect()).unwrap().rank() < 4
}

fn incidence_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut summary = Vec::new();
    let cases: [(&str, Invariant, &[usize]); 3] = [
        ("I2", InvariantName::Bifocal.build().unwrap(), &[2, 2]),
        ("I3", trifocal(), &[3, 2, 3]),
        ("I4", quadrifocal(), &[3, 3, 3, 3]),
    ];
    for (name, inv, dims) in cases {
        let mut incident = 0;
        for k in 0..200 {
            let forced = k % 2 == 0;
            let x = random_vec(&mut rng);
            let subs: Vec<Vec<Vec<Q>>> = dims
                .iter()
                .map(|&d| random_subspace(d, forced.then_some(x.as_slice()), &mut rng))
                .collect();
            let oracle = match name {
                "I2" => lines_meet(&subs[0], &subs[1]),
                "I3" => planes_meet_line(&subs[0], &subs[1], &subs[2]),
                _ => planes_share_point(&subs),
            };
            ensure(!forced || oracle, || format!("{name} config {k}: oracle missed a forced incidence"))?;
            let value = incidence(&inv, &subs.iter().map(|s| span(s)).collect::<Vec<_>>()).unwrap();
            ensure(value.is_zero() == oracle, || format!("{name} config {k}: invariant {value}, oracle {oracle}"))?;
            incident += oracle as usize;
        }
        summary.push(format!("{name} 200 ({incident} incident)"));
    }
    Ok(summary.join(", "))
}

fn estimation_round_trip() -> Outcome {
    let mut out = Vec::new();
    for (inv, n, seed) in [
        (InvariantName::Bifocal.build().unwrap(), 8, 90),
        (trifocal(), 26, 91),
        (quadrifocal(), 80, 92),
    ] {
        let spec = SceneSpec { n_frames: inv.arity(), n_points: n, n_lines: 0, seed, group: FrameGroup::Euclidean };
        let scene = random_scene::<f64>(&spec).map_err(|e| e.to_string())?;
        let corrs = scene.correspondences(&inv, n, seed + 100).map_err(|e| e.to_string())?;
        let rank = numerical_rank(&linear_rows(&inv, &corrs).unwrap());
        ensure(rank == n, || format!("{}: rank {rank}, expected {n}", inv.name()))?;
        let truth = multifocal(&inv, &FrameTuple::new(scene.frames.clone()).unwrap()).unwrap();
        let est = estimate(&inv, &corrs).map_err(|e| e.to_string())?;
        let err = align_scale(&est, &truth).unwrap();
        ensure(err <= 1e-6, || format!("{}: align error {err:e}", inv.name()))?;
        out.push(format!("{} rank {rank} err {err:.1e}", inv.name()));
    }
    Ok(out.join(", "))
}

fn invariance_weights() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cases = [
        (InvariantName::Bifocal.build().unwrap(), -1),
        (trifocal(), -2),
        (quadrifocal(), -3),
        (wedge_pair(2, 0, 0).unwrap(), -1),
        (wedge_pair(3, 0, 1).unwrap(), -1),
    ];
    let mut out = Vec::new();
    for (inv, expected) in cases {
        let k = check_weight(&inv, 20, &mut rng).map_err(|e| format!("{}: {e}", inv.name()))?;
        ensure(k == expected, || format!("{}: weight {k}, expected {expected}", inv.name()))?;
        out.push(format!("{} {k}", inv.name()));
    }
    Ok(out.join(", "))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "psi anchor tables", 1, psi_anchor_suite),
        (2, "Cartan identity", 5, cartan_identity),
        (3, "Euclidean bifocal cross-check", 5, euclidean_bifocal),
        (4, "Euclidean trifocal cross-check", 10, euclidean_trifocal),
        (5, "low-dimension anchors", 1, low_dimension_anchors),
        (6, "constraint necessity", 60, constraint_necessity),
        (7, "Frobenius identity", 2, frobenius_identity),
        (8, "incidence oracles", 10, incidence_oracles),
        (9, "estimation round-trip", 30, estimation_round_trip),
        (10, "invariance weights", 5, invariance_weights),
    ];
    let mut failures = Vec::new();
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; exceeded time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("{status} criterion {id:>2} {title}: {detail} [{:.2} s, limit {limit} s]", elapsed.as_secs_f64());
        if status == "FAIL" {
            failures.push(id);
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
