//! The `mft` command line: JSON in, JSON out.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use multifocal::constraints::{
    check_all, check_bifocal, euclidean_identity_suite, frobenius_identity_residual, ConstraintReport,
    FamilyResidual, TrifocalSlices,
};
use multifocal::estimation::{
    add_noise, align_scale, constraint_rank, estimate, linear_rows, random_scene, FrameGroup, Scene, SceneSpec,
};
use multifocal::euclidean::{essential, trifocal_euclidean, EuclideanMotion, MotionSampler};
use multifocal::focal::{apply_section, multifocal, FocalTensor, FrameTuple, Section};
use multifocal::invariants::{check_weight, Invariant, InvariantName};
use multifocal::polyforms::{cartan_residual, PolyForm};
use multifocal::scalar::{max_abs_element, FLOAT_TOLERANCE};
use multifocal::{Matrix, Mode, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const SCHEMA: &str = "mft/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONSTRAINT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] multifocal::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Core(multifocal::Error::Json(_)) => "input",
            CliError::Core(_) => "computation",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "mft", version, about = "Multi-focal tensors: construction, constraint checks and estimation")]
pub struct Cli {
    /// Scalar field for every computation in this invocation.
    #[arg(long, global = true, env = "MFT_MODE", default_value = "float")]
    pub mode: Mode,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random synthetic scene: frames, points and lines.
    GenScene(GenSceneArgs),
    /// Focal tensor from Euclidean motions or from scene frames.
    Tensor(TensorArgs),
    /// Constraint report for a bifocal (1,1) or trifocal (2,1,2) tensor.
    Check(CheckArgs),
    /// Linear recovery of a focal tensor from noiseless scene correspondences.
    Estimate(EstimateArgs),
    /// Every trifocal and bifocal identity on random Euclidean motions.
    VerifyIdentities(VerifyArgs),
    /// The Cartan identity on random polynomial forms.
    VerifyCartan(CartanArgs),
    /// Invariant catalog access.
    Invariant {
        #[command(subcommand)]
        action: InvariantAction,
    },
}

#[derive(Debug, Args)]
pub struct GenSceneArgs {
    #[arg(long, default_value_t = 4)]
    pub frames: usize,
    #[arg(long, default_value_t = 80)]
    pub points: usize,
    #[arg(long, default_value_t = 3)]
    pub lines: usize,
    #[arg(long, default_value = "euclidean")]
    pub group: FrameGroup,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long, default_value = "trifocal")]
    pub invariant: InvariantName,
    /// Motions file (`{"motions": [...]}` or a bare array); uses the closed forms where they exist.
    #[arg(long, conflicts_with = "scene")]
    pub motions: Option<PathBuf>,
    /// Scene file, `-` for stdin (the default when no motions are given).
    #[arg(long)]
    pub scene: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Tensor file, `-` for stdin.
    #[arg(long, default_value = "-")]
    pub tensor: PathBuf,
    #[arg(long, default_value_t = FLOAT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, default_value = "trifocal")]
    pub invariant: InvariantName,
    /// Scene file, `-` for stdin.
    #[arg(long, default_value = "-")]
    pub scene: PathBuf,
    /// Number of correspondences; defaults to one less than the tensor size.
    #[arg(long)]
    pub correspondences: Option<usize>,
    /// Gaussian noise on feature coordinates (float mode only).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Largest accepted alignment error.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = FLOAT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct CartanArgs {
    /// Random forms per bidegree.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 4)]
    pub max_dim: usize,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    #[arg(long, default_value_t = FLOAT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Subcommand)]
pub enum InvariantAction {
    /// Coefficients, signature and measured weight of a catalog invariant.
    Dump {
        #[arg(long)]
        name: InvariantName,
        /// Random group elements used to measure the weight.
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

/// Exit code and the JSON document for stdout.
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn new(pass: bool, output: Value) -> Self {
        Outcome {
            code: if pass { EXIT_OK } else { EXIT_CONSTRAINT_FAILURE },
            output,
        }
    }
}

fn envelope(command: &str, mode: Mode, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    obj.insert("mode".into(), json!(mode.as_str()));
    body
}

fn read_json(path: &PathBuf) -> CliResult<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed JSON in {}: {e}", path.display())))
}

/// Accepts either an `mft` output document carrying `key` or the bare object.
fn unwrap_key<'a>(v: &'a Value, key: &str) -> &'a Value {
    v.get(key).unwrap_or(v)
}

/// Parses argv and runs the command; usage errors become JSON error objects with exit 2.
pub fn run<I, T>(args: I) -> (i32, String, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (EXIT_OK, e.to_string(), None);
            }
            let err = CliError::Usage(e.kind().to_string());
            return (EXIT_USAGE, err.to_json().to_string(), Some(e.to_string()));
        }
    };
    match execute(&cli) {
        Ok(out) => (out.code, serde_json::to_string_pretty(&out.output).expect("serializable"), None),
        Err(e) => (EXIT_USAGE, e.to_json().to_string(), Some(e.to_string())),
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    match cli.mode {
        Mode::Float => execute_in::<f64>(cli),
        Mode::Rational => execute_in::<Rational>(cli),
    }
}

fn execute_in<S: Scalar>(cli: &Cli) -> CliResult<Outcome> {
    let mode = cli.mode;
    match &cli.command {
        Command::GenScene(a) => {
            let spec = SceneSpec {
                n_frames: a.frames,
                n_points: a.points,
                n_lines: a.lines,
                seed: cli.seed,
                group: a.group,
            };
            let scene = random_scene::<S>(&spec)?;
            let group = match a.group {
                FrameGroup::Euclidean => "euclidean",
                FrameGroup::General => "general",
            };
            Ok(Outcome::new(
                true,
                envelope("gen-scene", mode, json!({ "seed": cli.seed, "group": group, "scene": scene.to_json() })),
            ))
        }
        Command::Tensor(a) => tensor_command::<S>(a, mode),
        Command::Check(a) => {
            let doc = read_json(&a.tensor)?;
            let t = FocalTensor::<S>::from_json(unwrap_key(&doc, "tensor"))?;
            let report = match t.signature() {
                [2, 1, 2] => check_all(&t, a.tolerance)?,
                [1, 1] => check_bifocal(&t, a.tolerance)?,
                other => {
                    return Err(CliError::Usage(format!(
                        "no constraint families for signature {other:?}; expected [1, 1] or [2, 1, 2]"
                    )))
                }
            };
            Ok(Outcome::new(report.pass(), envelope("check", mode, json!({ "report": report.to_json() }))))
        }
        Command::Estimate(a) => estimate_command::<S>(a, mode, cli.seed),
        Command::VerifyIdentities(a) => {
            let report = verify_identities::<S>(a.trials, a.tolerance, cli.seed)?;
            Ok(Outcome::new(
                report.pass(),
                envelope("verify-identities", mode, json!({ "trials": a.trials, "report": report.to_json() })),
            ))
        }
        Command::VerifyCartan(a) => verify_cartan::<S>(a, mode, cli.seed),
        Command::Invariant { action: InvariantAction::Dump { name, trials } } => {
            let inv = name.build()?;
            let weight = check_weight(&inv, *trials, &mut ChaCha8Rng::seed_from_u64(cli.seed))?;
            Ok(Outcome::new(true, envelope("invariant dump", mode, json!({ "invariant": inv.to_json(Some(weight)) }))))
        }
    }
}

fn read_motions<S: Scalar>(path: &PathBuf) -> CliResult<Vec<EuclideanMotion<S>>> {
    let doc = read_json(path)?;
    unwrap_key(&doc, "motions")
        .as_array()
        .ok_or_else(|| CliError::Input("motions must be an array".into()))?
        .iter()
        .map(|m| EuclideanMotion::from_json(m).map_err(CliError::from))
        .collect()
}

fn read_scene<S: Scalar>(path: &PathBuf) -> CliResult<Scene<S>> {
    let doc = read_json(path)?;
    Ok(Scene::from_json(unwrap_key(&doc, "scene"))?)
}

fn tensor_command<S: Scalar>(a: &TensorArgs, mode: Mode) -> CliResult<Outcome> {
    let inv = a.invariant.build()?;
    let (source, t) = if let Some(path) = &a.motions {
        let motions = read_motions::<S>(path)?;
        let need = inv.arity() - 1;
        if motions.len() != need {
            return Err(CliError::Usage(format!("{} needs {need} relative motions, got {}", inv.name(), motions.len())));
        }
        match a.invariant {
            InvariantName::Bifocal => {
                let e = essential(&motions[0]);
                ("closed-form", FocalTensor::from_data(4, vec![1, 1], e.as_slice().to_vec())?)
            }
            InvariantName::Trifocal => ("closed-form", trifocal_euclidean(&motions[0], &motions[1])),
            _ => {
                let rel: Vec<_> = motions.iter().map(EuclideanMotion::embed).collect();
                ("general", multifocal(&inv, &apply_section(&rel, Section::Chain)?)?)
            }
        }
    } else {
        let scene = read_scene::<S>(a.scene.as_ref().unwrap_or(&PathBuf::from("-")))?;
        ("general", multifocal(&inv, &scene_frames(&inv, &scene)?)?)
    };
    Ok(Outcome::new(
        true,
        envelope("tensor", mode, json!({ "invariant": inv.name(), "source": source, "tensor": t.to_json() })),
    ))
}

fn scene_frames<S: Scalar>(inv: &Invariant, scene: &Scene<S>) -> CliResult<FrameTuple<S>> {
    if scene.frames.len() < inv.arity() {
        return Err(CliError::Usage(format!(
            "{} needs {} frames, scene has {}",
            inv.name(),
            inv.arity(),
            scene.frames.len()
        )));
    }
    Ok(FrameTuple::new(scene.frames[..inv.arity()].to_vec())?)
}

fn estimate_command<S: Scalar>(a: &EstimateArgs, mode: Mode, seed: u64) -> CliResult<Outcome> {
    let inv = a.invariant.build()?;
    let scene = read_scene::<S>(&a.scene)?;
    let truth = multifocal(&inv, &scene_frames(&inv, &scene)?)?;
    let n = a.correspondences.unwrap_or(truth.len() - 1);
    let mut corrs = scene.correspondences(&inv, n, seed)?;
    if a.noise > 0.0 {
        if S::is_exact() {
            return Err(CliError::Usage("--noise needs float mode".into()));
        }
        let mut float: Vec<_> = corrs
            .iter()
            .map(|c| multifocal::estimation::Correspondence {
                views: c.views.clone(),
                features: c.features.iter().map(|f| f.map(Scalar::to_f64)).collect(),
            })
            .collect();
        add_noise(&mut float, a.noise, seed)?;
        corrs = float
            .into_iter()
            .map(|c| multifocal::estimation::Correspondence {
                views: c.views,
                features: c.features.iter().map(|f| f.map(|x| S::from_f64(*x))).collect(),
            })
            .collect();
    }
    let rank = constraint_rank(&linear_rows(&inv, &corrs)?);
    let est = estimate(&inv, &corrs)?;
    let err = align_scale(&est, &truth)?;
    let pass = err <= a.tolerance;
    Ok(Outcome::new(
        pass,
        envelope(
            "estimate",
            mode,
            json!({
                "invariant": inv.name(),
                "correspondences": n,
                "unknowns": truth.len(),
                "rank": rank,
                "noise": a.noise,
                "align_error": err,
                "tolerance": a.tolerance,
                "pass": pass,
                "estimate": est.to_json(),
            }),
        ),
    ))
}

fn merge_family(acc: &mut BTreeMap<String, (usize, FamilyResidual)>, order: &mut Vec<String>, f: FamilyResidual) {
    match acc.get_mut(&f.name) {
        Some((n, a)) => {
            a.max = a.max.max(f.max);
            a.mean = (a.mean * *n as f64 + f.mean) / (*n + 1) as f64;
            a.count += f.count;
            a.exact_zero &= f.exact_zero;
            a.pass &= f.pass;
            *n += 1;
        }
        None => {
            order.push(f.name.clone());
            acc.insert(f.name.clone(), (1, f));
        }
    }
}

fn verify_identities<S: Scalar>(trials: usize, tolerance: f64, seed: u64) -> CliResult<ConstraintReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = MotionSampler::for_mode(S::MODE);
    let mut acc = BTreeMap::new();
    let mut order = Vec::new();
    let mut rank_deficient = false;
    for _ in 0..trials {
        let a = EuclideanMotion::<S>::random(sampler, &mut rng)?;
        let b = EuclideanMotion::<S>::random(sampler, &mut rng)?;
        let t = trifocal_euclidean(&a, &b);
        let intrinsic = check_all(&t, tolerance)?;
        let truth = euclidean_identity_suite(&TrifocalSlices::from_tensor(&t)?, &a, &b, tolerance);
        let e = essential(&a);
        let bif = check_bifocal(&FocalTensor::from_data(4, vec![1, 1], e.as_slice().to_vec())?, tolerance)?;
        rank_deficient |= intrinsic.rank_deficient;
        let m = Matrix::from_fn(3, 3, |_, _| S::from_ratio(rng.random_range(-30..=30), rng.random_range(1..=9)));
        let m = match max_abs_element(m.as_slice()) {
            Some(s) => m.scale(&(S::one() / s)),
            None => m,
        };
        let frob = FamilyResidual::from_values("frobenius_identity", &[frobenius_identity_residual(&m)], tolerance);
        let prefixed = bif.families.into_iter().map(|mut f| {
            f.name = format!("bifocal_{}", f.name);
            f
        });
        for f in intrinsic
            .families
            .into_iter()
            .chain(truth.families.into_iter().filter(|f| f.name != "braid"))
            .chain(prefixed)
            .chain(std::iter::once(frob))
        {
            merge_family(&mut acc, &mut order, f);
        }
    }
    let families = order.iter().map(|k| acc.remove(k).expect("recorded").1).collect();
    Ok(ConstraintReport {
        families,
        tolerance,
        exact: S::is_exact(),
        rank_deficient,
    })
}

fn verify_cartan<S: Scalar>(a: &CartanArgs, mode: Mode, seed: u64) -> CliResult<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut all = true;
    for m in 1..=a.max_dim {
        for total in 0..=a.max_degree {
            for p in 0..=total.min(m) {
                let mut worst = 0.0f64;
                let mut pass = true;
                for _ in 0..a.trials {
                    let f = PolyForm::<S>::random(m, p, total - p, 9, &mut rng)?;
                    let r = cartan_residual(&f)?;
                    let size = r.terms().map(|(_, v)| v.magnitude()).fold(0.0, f64::max);
                    worst = worst.max(size);
                    pass &= if S::is_exact() { r.is_zero() } else { size <= a.tolerance };
                }
                all &= pass;
                rows.push(json!({ "dim": m, "p": p, "q": total - p, "trials": a.trials, "max": worst, "pass": pass }));
            }
        }
    }
    Ok(Outcome::new(all, envelope("verify-cartan", mode, json!({ "bidegrees": rows, "pass": all }))))
}
