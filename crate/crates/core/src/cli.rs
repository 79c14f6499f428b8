//! Command-line front end: `describe`, `polytope`, `classify` and `verify`.
//!
//! Every command produces a typed report that is rendered either as JSON
//! (schema `orbitope-lab/1`, exact rationals as `"p/q"` strings, floats with
//! 17 significant digits) or as a plain-text table.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::facelab::{
    check_descriptors, classify_faces, x_connected_subsets, BijectionReport, FaceDescriptor,
    FaceLabError, Status, WitnessCone,
};
use crate::matmodel::{
    argmax_height, ascend_height, distance_to_hull, ext_face_dim_check, hessian_check,
    kostant_check, local_max_test, norm, sample_orbit, HessianReport, KostantReport,
    LocalMaxVerdict, MatrixModel, ModelError, ModelKind, MATCH_TOL, VIOLATION_TOL,
};
use crate::polytope::{PolytopeError, RationalPolytope, DEFAULT_FACE_BUDGET};
use crate::rational::{
    self, fmt_qvector, fmt_rational, parse_rational, ser, to_f64, to_f64_vec, QVector, Rat,
};
use crate::rootsys::{
    build_root_system, multiplicity_table, RootSystem, RootSystemError, SimpleSet,
};
use crate::weyl::{WeylError, WeylGroup, DEFAULT_ORDER_CAP};

pub const SCHEMA: &str = "orbitope-lab/1";

/// Relative error allowed between finite-difference and closed-form
/// second derivatives.
pub const HESSIAN_TOL: f64 = 1e-5;
/// Directions per Hessian comparison.
pub const HESSIAN_TRIALS: usize = 100;
/// Random `β` drawn for the local-maximum stage, on top of the descriptors'.
pub const RANDOM_LOCAL_MAX_PAIRS: usize = 20;
/// Gradient-ascent iterations used to refine argmax points.
pub const ASCENT_ITERATIONS: usize = 20_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid coordinate list {input:?}: {message}")]
    BadVector { input: String, message: String },
    #[error("model {model} has root system {model_system}, which does not match {system}")]
    ModelMismatch {
        model: String,
        model_system: String,
        system: String,
    },
    #[error("either --system or --model is required")]
    MissingSystem,
    #[error("descriptor index {index} out of range ({count} descriptors)")]
    BadDescriptorIndex { index: usize, count: usize },
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    FaceLab(#[from] FaceLabError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Coords {
    #[default]
    Ambient,
    Weights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "orbitope-lab",
    version,
    about = "Face classification of polar orbitopes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root count, Weyl group order, dominant representative and walls of x.
    Describe(RunArgs),
    /// Vertices, facets and face orbits of conv(W·x).
    Polytope(RunArgs),
    /// One descriptor per conjugacy class of proper faces.
    Classify(RunArgs),
    /// Check the descriptors against the polytope oracle and, with --model,
    /// against a sampled matrix model.
    Verify(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Root system label (A2, B3, BC2, G2, A1xA1, ...) or path to a root system file.
    #[arg(long)]
    pub system: Option<String>,
    /// Coordinates of x, comma separated; fractions and decimals allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Whether --x is given in ambient or fundamental-weight coordinates.
    #[arg(long, value_enum, default_value_t = Coords::Ambient)]
    pub coords: Coords,
    /// Matrix model such as sym3 or skew5.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub n_samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    pub face_budget: usize,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub corrupt_descriptor: Option<usize>,
}

/// Everything a command needs, with the root system and `x` resolved.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system_source: String,
    pub root_system: RootSystem,
    pub model: Option<MatrixModel>,
    /// `x` in ambient coordinates.
    pub x: QVector,
    pub n_samples: usize,
    pub seed: u64,
    pub face_budget: usize,
    pub order_cap: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Test hook: negate the witness of this descriptor before verifying.
    pub corrupt_descriptor: Option<usize>,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let model = args.model.as_deref().map(MatrixModel::parse).transpose()?;
        let (system_source, root_system) = match (&args.system, &model) {
            (None, None) => return Err(CliError::MissingSystem),
            (None, Some(m)) => (m.root_system().label().to_string(), m.root_system().clone()),
            (Some(source), None) => (source.clone(), build_root_system(source)?),
            (Some(source), Some(m)) => {
                let rs = build_root_system(source)?;
                if !same_roots(&rs, m.root_system()) {
                    return Err(CliError::ModelMismatch {
                        model: m.name(),
                        model_system: m.root_system().label().to_string(),
                        system: source.clone(),
                    });
                }
                // the model fixes the multiplicities
                (source.clone(), m.root_system().clone())
            }
        };
        let raw = parse_vector(&args.x)?;
        let x = match args.coords {
            Coords::Ambient => {
                root_system.check_vector(&raw)?;
                raw
            }
            Coords::Weights => root_system.from_weight_coordinates(&raw)?,
        };
        Ok(RunConfig {
            system_source,
            root_system,
            model,
            x,
            n_samples: args.n_samples,
            seed: args.seed,
            face_budget: args.face_budget,
            order_cap: args.order_cap,
            format: args.format,
            output: args.out.clone(),
            corrupt_descriptor: args.corrupt_descriptor,
        })
    }

    /// Configuration with defaults for the given system label and `x`.
    pub fn new(system: &str, x: QVector) -> Result<Self, CliError> {
        let root_system = build_root_system(system)?;
        root_system.check_vector(&x)?;
        Ok(RunConfig {
            system_source: system.to_string(),
            root_system,
            model: None,
            x,
            n_samples: 10_000,
            seed: 42,
            face_budget: DEFAULT_FACE_BUDGET,
            order_cap: DEFAULT_ORDER_CAP,
            format: Format::Json,
            output: None,
            corrupt_descriptor: None,
        })
    }

    /// Attaches a matrix model, which must realize the same roots.
    pub fn with_model(mut self, name: &str) -> Result<Self, CliError> {
        let m = MatrixModel::parse(name)?;
        if !same_roots(&self.root_system, m.root_system()) {
            return Err(CliError::ModelMismatch {
                model: m.name(),
                model_system: m.root_system().label().to_string(),
                system: self.system_source,
            });
        }
        self.root_system = m.root_system().clone();
        self.model = Some(m);
        Ok(self)
    }

    fn weyl_group(&self) -> Result<WeylGroup, CliError> {
        Ok(WeylGroup::generate_with_cap(
            &self.root_system,
            self.order_cap,
        )?)
    }
}

fn same_roots(a: &RootSystem, b: &RootSystem) -> bool {
    let mut ra = a.roots().to_vec();
    let mut rb = b.roots().to_vec();
    ra.sort();
    rb.sort();
    a.ambient_dim() == b.ambient_dim() && a.gram_matrix() == b.gram_matrix() && ra == rb
}

fn parse_vector(input: &str) -> Result<QVector, CliError> {
    input
        .split(',')
        .map(|s| {
            parse_rational(s).map_err(|e| CliError::BadVector {
                input: input.to_string(),
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub system: String,
    pub realization: String,
    /// How witnesses are normalized: they are sums of fundamental coweights.
    pub witness_normalization: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelMetadata>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelMetadata {
    pub name: String,
    pub kind: ModelKind,
    pub n: usize,
    /// `⟨X, Y⟩ = form_scale · tr(XᵀY)`
    pub form_scale: f64,
}

fn metadata(cfg: &RunConfig) -> Metadata {
    Metadata {
        system: cfg.root_system.label().to_string(),
        realization: cfg.root_system.realization(),
        witness_normalization:
            "beta = sum of fundamental coweights dual to the simple roots outside J",
        model: cfg.model.as_ref().map(|m| ModelMetadata {
            name: m.name(),
            kind: m.kind(),
            n: m.n(),
            form_scale: m.form_scale(),
        }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DescribeReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub metadata: Metadata,
    pub rank: usize,
    pub ambient_dim: usize,
    pub root_count: usize,
    pub positive_root_count: usize,
    pub multiplicities: BTreeMap<String, u32>,
    pub non_reduced: bool,
    pub dim_g: usize,
    pub weyl_order: usize,
    #[serde(serialize_with = "ser::qvec")]
    pub x: QVector,
    #[serde(serialize_with = "ser::qvec")]
    pub x_dominant: QVector,
    pub walls: SimpleSet,
    pub regular: bool,
    pub x_connected_count: usize,
    pub x_connected_subsets: Vec<SimpleSet>,
}

pub fn cmd_describe(cfg: &RunConfig) -> Result<DescribeReport, CliError> {
    let rs = &cfg.root_system;
    let w = cfg.weyl_group()?;
    let (xd, _) = w.to_dominant(&cfg.x)?;
    let walls = rs.wall_set(&xd)?;
    let subsets = x_connected_subsets(rs, &xd)?;
    Ok(DescribeReport {
        schema: SCHEMA,
        command: "describe",
        metadata: metadata(cfg),
        rank: rs.rank(),
        ambient_dim: rs.ambient_dim(),
        root_count: rs.roots().len(),
        positive_root_count: rs.positive_roots().len(),
        multiplicities: multiplicity_table(rs),
        non_reduced: rs.is_non_reduced(),
        dim_g: rs.dim_g(),
        weyl_order: w.order(),
        x: cfg.x.clone(),
        x_dominant: xd,
        walls,
        regular: walls.is_empty(),
        x_connected_count: subsets.len(),
        x_connected_subsets: subsets,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetRecord {
    #[serde(serialize_with = "ser::qvec")]
    pub normal: QVector,
    #[serde(serialize_with = "ser::rat")]
    pub offset: Rat,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceOrbitRecord {
    pub dim: usize,
    pub orbit_size: usize,
    pub representative: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub metadata: Metadata,
    #[serde(serialize_with = "ser::qvec")]
    pub x_dominant: QVector,
    pub dim: usize,
    #[serde(serialize_with = "ser::qvecs")]
    pub vertices: Vec<QVector>,
    pub facets: Vec<FacetRecord>,
    pub f_vector: Vec<usize>,
    pub face_orbits: Vec<FaceOrbitRecord>,
}

pub fn cmd_polytope(cfg: &RunConfig) -> Result<PolytopeReport, CliError> {
    let w = cfg.weyl_group()?;
    let (xd, _) = w.to_dominant(&cfg.x)?;
    let p = RationalPolytope::hull(&w.orbit(&xd)?)?;
    let orbits = p.faces_up_to_group_with_budget(&w, cfg.face_budget)?;
    let f_vector = p.f_vector()?;
    Ok(PolytopeReport {
        schema: SCHEMA,
        command: "polytope",
        metadata: metadata(cfg),
        x_dominant: xd,
        dim: p.dim(),
        vertices: p.vertices().to_vec(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetRecord {
                normal: f.normal.clone(),
                offset: f.offset.clone(),
                vertices: f.vertices.clone(),
            })
            .collect(),
        f_vector,
        face_orbits: orbits
            .iter()
            .map(|o| FaceOrbitRecord {
                dim: o.representative.dim,
                orbit_size: o.orbit_size,
                representative: o.representative.vertex_indices.clone(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedFace {
    #[serde(flatten)]
    pub descriptor: FaceDescriptor,
    pub witness_cone: WitnessCone,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub metadata: Metadata,
    #[serde(serialize_with = "ser::qvec")]
    pub x_dominant: QVector,
    pub walls: SimpleSet,
    /// Number of strata of the boundary, one per class of proper faces.
    pub stratum_count: usize,
    pub descriptors: Vec<ClassifiedFace>,
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<ClassifyReport, CliError> {
    let rs = &cfg.root_system;
    let w = cfg.weyl_group()?;
    let (xd, _) = w.to_dominant(&cfg.x)?;
    let descriptors = classify_faces(rs, &w, &xd)?;
    Ok(ClassifyReport {
        schema: SCHEMA,
        command: "classify",
        metadata: metadata(cfg),
        walls: rs.wall_set(&xd)?,
        x_dominant: xd,
        stratum_count: descriptors.len(),
        descriptors: descriptors
            .into_iter()
            .map(|d| ClassifiedFace {
                witness_cone: WitnessCone::new(rs, d.j),
                descriptor: d,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KostantStage {
    #[serde(flatten)]
    pub report: KostantReport,
    pub violation_tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArgmaxCheck {
    pub descriptor: usize,
    #[serde(rename = "I")]
    pub i: SimpleSet,
    pub best_value: f64,
    #[serde(serialize_with = "ser::rat")]
    pub support_value: Rat,
    pub top_points: usize,
    /// Distance of the raw sampled maximizers to `conv(sigma_vertices)`.
    pub raw_distance: f64,
    /// Distance after gradient ascent along the orbit.
    pub refined_distance: f64,
    pub tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMaxCheck {
    #[serde(serialize_with = "ser::qvec")]
    pub beta: QVector,
    #[serde(flatten)]
    pub verdict: LocalMaxVerdict,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianCheck {
    #[serde(serialize_with = "ser::qvec")]
    pub beta: QVector,
    #[serde(flatten)]
    pub report: HessianReport,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtDimCheck {
    pub descriptor: usize,
    #[serde(rename = "I")]
    pub i: SimpleSet,
    pub numeric_dim: usize,
    pub predicted_dim: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelStage {
    pub model: String,
    pub samples: usize,
    pub seed: u64,
    pub kostant: KostantStage,
    pub argmax: Vec<ArgmaxCheck>,
    pub local_max: Vec<LocalMaxCheck>,
    pub hessian: Vec<HessianCheck>,
    pub ext_dims: Vec<ExtDimCheck>,
    pub status: Status,
}

impl ModelStage {
    fn first_counterexample(&self) -> Option<serde_json::Value> {
        if !self.kostant.status.is_pass() {
            return serde_json::to_value(&self.kostant).ok();
        }
        fn first<T: Serialize>(items: &[T], ok: impl Fn(&T) -> bool) -> Option<serde_json::Value> {
            items
                .iter()
                .find(|c| !ok(c))
                .and_then(|c| serde_json::to_value(c).ok())
        }
        first(&self.argmax, |c| c.status.is_pass())
            .or_else(|| first(&self.local_max, |c| c.status.is_pass()))
            .or_else(|| first(&self.hessian, |c| c.status.is_pass()))
            .or_else(|| first(&self.ext_dims, |c| c.status.is_pass()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub metadata: Metadata,
    #[serde(serialize_with = "ser::qvec")]
    pub x_dominant: QVector,
    pub bijection: BijectionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_stage: Option<ModelStage>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<serde_json::Value>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let rs = &cfg.root_system;
    let w = cfg.weyl_group()?;
    let (xd, _) = w.to_dominant(&cfg.x)?;
    let mut descriptors = classify_faces(rs, &w, &xd)?;
    if let Some(k) = cfg.corrupt_descriptor {
        let count = descriptors.len();
        let d = descriptors
            .get_mut(k)
            .ok_or(CliError::BadDescriptorIndex { index: k, count })?;
        d.beta = rational::neg(&d.beta);
    }
    let polytope = RationalPolytope::hull(&w.orbit(&xd)?)?;
    let orbits = polytope.faces_up_to_group_with_budget(&w, cfg.face_budget)?;
    let bijection = check_descriptors(rs, &xd, &polytope, &orbits, &descriptors);
    let model_stage = match &cfg.model {
        Some(m) => Some(model_stage(cfg, m, &xd, &polytope, &descriptors)?),
        None => None,
    };
    let passed = bijection.passed() && model_stage.as_ref().is_none_or(|s| s.status.is_pass());
    let first_counterexample = bijection
        .first_counterexample()
        .or_else(|| model_stage.as_ref().and_then(|s| s.first_counterexample()));
    Ok(VerifyReport {
        schema: SCHEMA,
        command: "verify",
        metadata: metadata(cfg),
        x_dominant: xd,
        bijection,
        model_stage,
        status: Status::from_bool(passed),
        first_counterexample,
    })
}

fn model_stage(
    cfg: &RunConfig,
    model: &MatrixModel,
    xd: &[Rat],
    polytope: &RationalPolytope,
    descriptors: &[FaceDescriptor],
) -> Result<ModelStage, CliError> {
    let sample = sample_orbit(model, xd, cfg.n_samples, cfg.seed)?;
    let x_norm = sample.x_norm();

    let report = kostant_check(&sample, polytope)?;
    let violation_tolerance = VIOLATION_TOL * x_norm;
    let kostant_ok = report.max_violation <= violation_tolerance
        && report.max_invariant_error <= violation_tolerance;
    let kostant = KostantStage {
        report,
        violation_tolerance,
        status: Status::from_bool(kostant_ok),
    };

    let mut argmax = Vec::new();
    for (k, d) in descriptors.iter().enumerate() {
        let beta = to_f64_vec(&d.beta);
        let tolerance = MATCH_TOL * x_norm * norm(&beta);
        let (best, top) = argmax_height(&sample, &d.beta)?;
        let (support_value, _) = polytope.support(&d.beta)?;
        let sigma: Vec<Vec<f64>> = d.sigma_vertices.iter().map(|v| to_f64_vec(v)).collect();
        let mut raw: f64 = 0.0;
        let mut refined: f64 = 0.0;
        for &t in &top {
            raw = raw.max(distance_to_hull(&sample.projections[t], &sigma));
            let y = ascend_height(model, &sample.points[t], &beta, ASCENT_ITERATIONS);
            refined = refined.max(distance_to_hull(&model.project(&y), &sigma));
        }
        let ok = best <= to_f64(&support_value) + tolerance && refined <= tolerance;
        argmax.push(ArgmaxCheck {
            descriptor: k,
            i: d.i,
            best_value: best,
            support_value,
            top_points: top.len(),
            raw_distance: raw,
            refined_distance: refined,
            tolerance,
            status: Status::from_bool(ok),
        });
    }

    let mut betas: Vec<QVector> = Vec::new();
    for d in descriptors {
        betas.push(d.beta.clone());
        betas.push(rational::neg(&d.beta));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..RANDOM_LOCAL_MAX_PAIRS {
        let b: QVector = (0..model.cartan_dim())
            .map(|_| Rat::from_integer(rng.random_range(-4i64..=4).into()))
            .collect();
        betas.push(b);
    }
    let mut local_max = Vec::new();
    for (k, b) in betas.iter().enumerate() {
        let verdict = local_max_test(model, xd, b, cfg.seed.wrapping_add(k as u64))?;
        let status = Status::from_bool(verdict.agree());
        local_max.push(LocalMaxCheck {
            beta: b.clone(),
            verdict,
            status,
        });
    }

    let mut hessian = Vec::new();
    let mut hessian_betas: Vec<QVector> = vec![xd.to_vec()];
    hessian_betas.extend(descriptors.iter().map(|d| d.beta.clone()));
    for (k, b) in hessian_betas.iter().enumerate() {
        let report = hessian_check(
            model,
            xd,
            b,
            HESSIAN_TRIALS,
            cfg.seed.wrapping_add(k as u64),
        )?;
        let ok = report.max_abs_error <= HESSIAN_TOL * report.scale;
        hessian.push(HessianCheck {
            beta: b.clone(),
            report,
            status: Status::from_bool(ok),
        });
    }

    let mut ext_dims = Vec::new();
    for (k, d) in descriptors.iter().enumerate() {
        let (numeric_dim, predicted_dim) = ext_face_dim_check(model, xd, d)?;
        ext_dims.push(ExtDimCheck {
            descriptor: k,
            i: d.i,
            numeric_dim,
            predicted_dim,
            status: Status::from_bool(numeric_dim == predicted_dim),
        });
    }

    let ok = kostant.status.is_pass()
        && argmax.iter().all(|c| c.status.is_pass())
        && local_max.iter().all(|c| c.status.is_pass())
        && hessian.iter().all(|c| c.status.is_pass())
        && ext_dims.iter().all(|c| c.status.is_pass());
    Ok(ModelStage {
        model: model.name(),
        samples: sample.len(),
        seed: cfg.seed,
        kostant,
        argmax,
        local_max,
        hessian,
        ext_dims,
        status: Status::from_bool(ok),
    })
}

/// JSON formatter writing every float with 17 significant digits.
struct FixedFloatFormatter<'a>(serde_json::ser::PrettyFormatter<'a>);

impl serde_json::ser::Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Deterministic pretty JSON with fixed-width floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let fmt = FixedFloatFormatter(serde_json::ser::PrettyFormatter::with_indent(b"  "));
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn status_word(s: Status) -> &'static str {
    if s.is_pass() {
        "pass"
    } else {
        "FAIL"
    }
}

fn table_describe(r: &DescribeReport) -> String {
    let mut out = String::new();
    out += &format!("system            {}\n", r.metadata.realization);
    out += &format!("rank              {}\n", r.rank);
    out += &format!(
        "roots             {} ({} positive)\n",
        r.root_count, r.positive_root_count
    );
    out += &format!("non-reduced       {}\n", r.non_reduced);
    out += &format!("dim g             {}\n", r.dim_g);
    out += &format!("|W|               {}\n", r.weyl_order);
    out += &format!("x                 {}\n", fmt_qvector(&r.x));
    out += &format!("x+                {}\n", fmt_qvector(&r.x_dominant));
    out += &format!("walls             {}\n", r.walls);
    out += &format!("x-connected sets  {}\n", r.x_connected_count);
    for s in &r.x_connected_subsets {
        out += &format!("  {s}\n");
    }
    out += "multiplicities\n";
    for (root, m) in &r.multiplicities {
        out += &format!("  {root}  {m}\n");
    }
    out
}

fn table_polytope(r: &PolytopeReport) -> String {
    let mut out = String::new();
    out += &format!(
        "polytope conv(W.x), x+ = {}, dim {}\n",
        fmt_qvector(&r.x_dominant),
        r.dim
    );
    out += &format!("f-vector {:?}\n", r.f_vector);
    out += "vertices\n";
    for (k, v) in r.vertices.iter().enumerate() {
        out += &format!("  {k:>4}  {}\n", fmt_qvector(v));
    }
    out += "facets (normal . y <= offset)\n";
    for f in &r.facets {
        out += &format!(
            "  {}  <= {}  on {:?}\n",
            fmt_qvector(&f.normal),
            fmt_rational(&f.offset),
            f.vertices
        );
    }
    out += "face orbits (dim, size, representative)\n";
    for o in &r.face_orbits {
        out += &format!(
            "  {:>3}  {:>5}  {:?}\n",
            o.dim, o.orbit_size, o.representative
        );
    }
    out
}

fn table_classify(r: &ClassifyReport) -> String {
    let mut out = String::new();
    out += &format!(
        "{}  x+ = {}  walls {}  strata {}\n",
        r.metadata.system,
        fmt_qvector(&r.x_dominant),
        r.walls,
        r.stratum_count
    );
    out += &format!(
        "{:<14} {:<14} {:>5} {:>6} {:>6} {:>6} {:>6}  beta\n",
        "I", "J", "dim", "|W_Jx|", "extF", "q_J", "n_J"
    );
    for c in &r.descriptors {
        let d = &c.descriptor;
        out += &format!(
            "{:<14} {:<14} {:>5} {:>6} {:>6} {:>6} {:>6}  {}\n",
            d.i.to_string(),
            d.j.to_string(),
            d.dim_sigma,
            d.sigma_vertices.len(),
            d.dim_ext_f,
            d.dim_q_j,
            d.dim_n_j,
            fmt_qvector(&d.beta)
        );
    }
    out
}

fn table_verify(r: &VerifyReport) -> String {
    let b = &r.bijection;
    let mut out = String::new();
    out += &format!(
        "{}  x+ = {}\n",
        r.metadata.system,
        fmt_qvector(&r.x_dominant)
    );
    out += &format!(
        "bijection         {}  ({} face orbits, {} descriptors)\n",
        status_word(b.status),
        b.face_orbits,
        b.descriptors
    );
    for c in &b.witness_checks {
        out += &format!(
            "  witness I={:<12} J={:<12} {}\n",
            c.i.to_string(),
            c.j.to_string(),
            status_word(c.status)
        );
    }
    if let Some(m) = &r.model_stage {
        out += &format!(
            "model {} ({} samples, seed {})\n",
            m.model, m.samples, m.seed
        );
        out += &format!(
            "  kostant         {}  violation {:.3e}  coverage {:.3}\n",
            status_word(m.kostant.status),
            m.kostant.report.max_violation,
            m.kostant.report.coverage
        );
        for a in &m.argmax {
            out += &format!(
                "  argmax I={:<10} {}  best {:.9}  support {}  raw {:.3e}  refined {:.3e}\n",
                a.i.to_string(),
                status_word(a.status),
                a.best_value,
                fmt_rational(&a.support_value),
                a.raw_distance,
                a.refined_distance
            );
        }
        let agree = m.local_max.iter().filter(|c| c.status.is_pass()).count();
        out += &format!("  local max       {agree}/{} agree\n", m.local_max.len());
        let worst = m
            .hessian
            .iter()
            .map(|h| h.report.max_abs_error)
            .fold(0.0, f64::max);
        let hok = m.hessian.iter().all(|h| h.status.is_pass());
        out += &format!(
            "  hessian         {}  max error {worst:.3e}\n",
            status_word(Status::from_bool(hok))
        );
        for e in &m.ext_dims {
            out += &format!(
                "  ext dim I={:<9} {}  numeric {} predicted {}\n",
                e.i.to_string(),
                status_word(e.status),
                e.numeric_dim,
                e.predicted_dim
            );
        }
    }
    out += &format!("overall           {}\n", status_word(r.status));
    out
}

/// Rendered report and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn render<T: Serialize>(
    cfg: &RunConfig,
    report: &T,
    table: impl Fn(&T) -> String,
) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => to_json(report),
        Format::Table => Ok(table(report)),
    }
}

pub fn run(command: &Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let (args, outcome) = match command {
        Command::Describe(a) => {
            let cfg = RunConfig::from_args(a)?;
            let text = render(&cfg, &cmd_describe(&cfg)?, table_describe)?;
            (a, Outcome { text, passed: true })
        }
        Command::Polytope(a) => {
            let cfg = RunConfig::from_args(a)?;
            let text = render(&cfg, &cmd_polytope(&cfg)?, table_polytope)?;
            (a, Outcome { text, passed: true })
        }
        Command::Classify(a) => {
            let cfg = RunConfig::from_args(a)?;
            let text = render(&cfg, &cmd_classify(&cfg)?, table_classify)?;
            (a, Outcome { text, passed: true })
        }
        Command::Verify(a) => {
            let cfg = RunConfig::from_args(a)?;
            let report = cmd_verify(&cfg)?;
            let text = render(&cfg, &report, table_verify)?;
            (
                a,
                Outcome {
                    text,
                    passed: report.passed(),
                },
            )
        }
    };
    Ok((outcome, args.out.clone()))
}

/// Parses `args`, runs the command and writes its report. Returns the
/// process exit code: 0 on success, 1 when a verification check fails, 2 on
/// errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok((outcome, out)) => {
            let written = match out {
                Some(path) => std::fs::write(&path, &outcome.text),
                None => io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    #[test]
    fn parses_vectors() {
        assert_eq!(parse_vector("2,0,-2").unwrap(), qvec(&[2, 0, -2]));
        assert!(parse_vector("2,,1").is_err());
    }

    #[test]
    fn describe_a2() {
        let cfg = RunConfig::new("A2", qvec(&[0, 2, -2])).unwrap();
        let r = cmd_describe(&cfg).unwrap();
        assert_eq!(r.x_dominant, qvec(&[2, 0, -2]));
        assert!(r.walls.is_empty());
        assert_eq!(r.x_connected_count, 4);
        assert_eq!(r.weyl_order, 6);
    }

    #[test]
    fn describe_b2_and_a1() {
        let r = cmd_describe(&RunConfig::new("B2", qvec(&[1, 1])).unwrap()).unwrap();
        assert_eq!(r.walls, SimpleSet::from_indices([0]));
        let r = cmd_describe(&RunConfig::new("A1", qvec(&[1, -1])).unwrap()).unwrap();
        assert_eq!(r.weyl_order, 2);
    }

    #[test]
    fn classify_counts() {
        let count = |x: &[i64]| {
            cmd_classify(&RunConfig::new(if x.len() == 3 { "A2" } else { "A1" }, qvec(x)).unwrap())
                .unwrap()
                .stratum_count
        };
        assert_eq!(count(&[2, 0, -2]), 3);
        assert_eq!(count(&[1, 1, -2]), 2);
        assert_eq!(count(&[1, -1]), 1);
    }

    #[test]
    fn zero_x_cannot_be_classified() {
        let cfg = RunConfig::new("A2", qvec(&[0, 0, 0])).unwrap();
        assert!(matches!(
            cmd_classify(&cfg),
            Err(CliError::FaceLab(FaceLabError::ZeroVector))
        ));
    }

    #[test]
    fn model_must_match_system() {
        let cfg = RunConfig::new("B2", qvec(&[2, 1])).unwrap();
        assert!(matches!(
            cfg.with_model("sym3"),
            Err(CliError::ModelMismatch { .. })
        ));
        let cfg = RunConfig::new("D2", qvec(&[2, 1]))
            .unwrap()
            .with_model("skew4")
            .unwrap();
        assert_eq!(cfg.root_system.multiplicity(0), 2);
    }

    #[test]
    fn weight_coordinates() {
        let args = Cli::try_parse_from([
            "orbitope-lab",
            "describe",
            "--system",
            "A2",
            "--x",
            "1,1",
            "--coords",
            "weights",
        ])
        .unwrap();
        let Command::Describe(a) = &args.command else {
            panic!("wrong subcommand")
        };
        let cfg = RunConfig::from_args(a).unwrap();
        assert_eq!(cfg.x, qvec(&[1, 0, -1]));
    }

    #[test]
    fn json_floats_have_fixed_width() {
        #[derive(Serialize)]
        struct T {
            a: f64,
            b: Vec<f64>,
        }
        let s = to_json(&T {
            a: 0.1,
            b: vec![-8.0],
        })
        .unwrap();
        assert!(s.contains("\"a\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-8.0000000000000000e0"), "{s}");
    }

    #[test]
    fn corrupted_descriptor_fails() {
        let mut cfg = RunConfig::new("A2", qvec(&[2, 0, -2])).unwrap();
        assert!(cmd_verify(&cfg).unwrap().passed());
        cfg.corrupt_descriptor = Some(1);
        let r = cmd_verify(&cfg).unwrap();
        assert!(!r.passed());
        assert!(r.first_counterexample.is_some());
        cfg.corrupt_descriptor = Some(9);
        assert!(matches!(
            cmd_verify(&cfg),
            Err(CliError::BadDescriptorIndex { .. })
        ));
    }
}
