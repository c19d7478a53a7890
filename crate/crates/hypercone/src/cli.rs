//! The `hypercone` command line.
//!
//! Every command produces one JSON value. Reports carry the command name,
//! the arithmetic mode and the seed; commands that emit a file format print
//! the file itself unless `-o` redirects it. Exit codes: 0 success or true,
//! 1 property false or violations found, 2 usage or parse error, 3 numerical
//! failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercone_core::amenability::{
    amenability_estimate, amenability_proof_path_check, linear_regularity_estimate, LinRegOptions,
};
use hypercone_core::faces::{
    discover_span, face_as_cone, face_cone_agreement, intersect, intersection_agreement, make_face,
    mult_constancy_check, verify_face_representation, verify_face_representation_at,
    AgreementReport,
};
use hypercone_core::fixtures::{self, Fixture};
use hypercone_core::{
    AmenabilityOptions, Error, FaceDescriptor, HyperbolicityCone, Membership, Metric, Projector,
    Projectors, Rational, Scalar, Tolerances,
};
use serde_json::{json, Map, Value};

use crate::formats::{
    self, BasisFile, ConeFile, FaceFile, FixtureFile, FormatError, PolynomialFile, PolynomialSource,
};

#[derive(Parser, Debug)]
#[command(
    name = "hypercone",
    version,
    about = "Hyperbolic polynomials, their cones and faces"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Coefficient arithmetic.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Imaginary-part tolerance for float real-rootedness.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative threshold for a vanishing derivative value (float mode).
    #[arg(long, global = true)]
    pub zero_tol: Option<f64>,
    /// Width of the ambiguous band, in multiples of the zero threshold.
    #[arg(long, global = true)]
    pub band: Option<f64>,
    /// Relative half-width of the ambiguous band around a zero eigenvalue.
    #[arg(long, global = true)]
    pub eig_band: Option<f64>,
}

impl RunConfig {
    fn tolerances(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            root: self.tol.unwrap_or(base.root),
            zero: self.zero_tol.unwrap_or(base.zero),
            band: self.band.unwrap_or(base.band),
            eig_band: self.eig_band.unwrap_or(base.eig_band),
        }
    }

    fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct ConeArgs {
    /// Polynomial or cone file, or `fixture:NAME` (e.g. `fixture:psd:3`).
    #[arg(short = 'p', long = "poly")]
    pub poly: String,
    /// Hyperbolic direction; required for bare polynomial files.
    #[arg(short = 'e', long = "direction", allow_hyphen_values = true)]
    pub direction: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Randomized hyperbolicity check along Gaussian lines.
    Check {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'N', long, default_value_t = 1000)]
        samples: usize,
    },
    /// Hyperbolic eigenvalues of a point.
    Eig {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x: String,
    },
    /// Membership in the cone or in its derivative relaxation of order `--order`.
    Member {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Interior membership.
    Interior {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Multiplicity and the derivative sign signature of a point.
    Mult {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x: String,
    },
    /// The derivative relaxation polynomial `D_e^m p`.
    Derive {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'm', long)]
        m: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Faces of a cone: construction, verification and span discovery
    #[command(subcommand)]
    Face(FaceCommand),
    /// The cone `K1 ∩ K2` over the intersection of two face spans.
    Intersect {
        #[arg(long)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        e1: Option<String>,
        #[arg(long)]
        p2: String,
        #[arg(long, allow_hyphen_values = true)]
        e2: Option<String>,
        /// A point in the relative interior of the intersection.
        #[arg(short = 'z', long, allow_hyphen_values = true)]
        z: String,
        #[arg(short = 'N', long, default_value_t = 1000)]
        samples: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Empirical amenability constant of a face.
    Amen {
        #[arg(long)]
        face: PathBuf,
        #[arg(short = 'N', long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value = "0.1,1,10")]
        radii: String,
        /// Write per-sample ratios as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also check the relaxation sandwich on the same number of samples.
        #[arg(long)]
        proof_path: bool,
    },
    /// Empirical linear-regularity constant of a subspace and a cone.
    Linreg {
        /// Basis file or inline rows such as `1,0,0;0,1,1`.
        #[arg(short = 'L', long)]
        subspace: String,
        #[command(flatten)]
        cone: ConeArgs,
        /// A point of the subspace in the interior of the cone.
        #[arg(short = 'w', long, allow_hyphen_values = true)]
        witness: String,
        #[arg(short = 'N', long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 5000)]
        max_iterations: usize,
    },
    /// The built-in catalog of cones and faces
    #[command(subcommand)]
    Fixture(FixtureCommand),
}

#[derive(Subcommand, Debug)]
pub enum FaceCommand {
    /// Builds a face from a relative-interior point and its span.
    Make {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'z', long, allow_hyphen_values = true)]
        z: String,
        /// Span basis; discovered from `z` when omitted.
        #[arg(long)]
        span: Option<String>,
        #[arg(long)]
        label: Option<String>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Samples the span and compares face membership with the relaxation.
    Verify {
        #[arg(long)]
        face: PathBuf,
        #[arg(short = 'N', long, default_value_t = 10_000)]
        samples: usize,
        /// Relaxation order to test instead of the face multiplicity.
        #[arg(long)]
        m_test: Option<usize>,
    },
    /// Recovers the span of the face containing `z` in its relative interior.
    Discover {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short = 'z', long, allow_hyphen_values = true)]
        z: String,
    },
    /// The face as a hyperbolicity cone in span coordinates.
    AsCone {
        #[arg(long)]
        face: PathBuf,
        #[arg(short = 'N', long, default_value_t = 1000)]
        samples: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixtureCommand {
    /// Names, sizes and faces of every fixture.
    List,
    /// Writes the polynomial, cone and face catalog of a fixture.
    Emit {
        name: String,
        /// Output directory; the fixture is printed when omitted.
        #[arg(short = 'o', long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Property(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Property(_) => 1,
            CliError::Format(FormatError::Core(e)) | CliError::Core(e) => core_exit_code(e),
            CliError::Format(_) => 2,
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::NotHyperbolic { .. }
        | Error::NotRealRooted
        | Error::NotInCone
        | Error::NotInterior
        | Error::NotInSubspace { .. }
        | Error::DerivativeDoesNotVanish { .. }
        | Error::NotRelativeInterior { .. } => 1,
        Error::InconclusiveRealness { .. }
        | Error::NumericalInconsistency(_)
        | Error::NoRelativeInteriorSamples
        | Error::SpanDiscovery(_)
        | Error::NotConverged { .. } => 3,
        _ => 2,
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished command: its exit code and the value to print.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub value: Value,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { code: 0, value }
    }

    fn verdict(holds: bool, value: Value) -> Self {
        Outcome {
            code: if holds { 0 } else { 1 },
            value,
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the exit code, standard output and standard error.
pub fn run_from_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => (
            outcome.code,
            render(&outcome.value, cli.config.output),
            String::new(),
        ),
        Err(e) => {
            let code = e.exit_code();
            let mut report = header(&cli.config, command_name(&cli.command));
            report.insert("error".into(), Value::String(e.to_string()));
            report.insert("exit_code".into(), json!(code));
            (
                code,
                render(&Value::Object(report), cli.config.output),
                format!("error: {e}\n"),
            )
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match cli.config.mode {
        Mode::Exact => run_with::<Rational>(&cli.config, &cli.command),
        Mode::Float => run_with::<f64>(&cli.config, &cli.command),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Check { .. } => "check",
        Command::Eig { .. } => "eig",
        Command::Member { .. } => "member",
        Command::Interior { .. } => "interior",
        Command::Mult { .. } => "mult",
        Command::Derive { .. } => "derive",
        Command::Face(FaceCommand::Make { .. }) => "face make",
        Command::Face(FaceCommand::Verify { .. }) => "face verify",
        Command::Face(FaceCommand::Discover { .. }) => "face discover",
        Command::Face(FaceCommand::AsCone { .. }) => "face as-cone",
        Command::Intersect { .. } => "intersect",
        Command::Amen { .. } => "amen",
        Command::Linreg { .. } => "linreg",
        Command::Fixture(FixtureCommand::List) => "fixture list",
        Command::Fixture(FixtureCommand::Emit { .. }) => "fixture emit",
    }
}

fn header(cfg: &RunConfig, command: &str) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    map.insert("mode".into(), json!(cfg.mode_name()));
    map.insert("seed".into(), json!(cfg.seed));
    map
}

fn report(cfg: &RunConfig, command: &str, fields: Value) -> Value {
    let mut map = header(cfg, command);
    if let Value::Object(extra) = fields {
        map.extend(extra);
    }
    Value::Object(map)
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("JSON value")
}

fn scalars<S: Scalar>(values: &[S]) -> Value {
    to_value(&formats::scalars_to_values(values))
}

fn membership_name(m: Membership) -> &'static str {
    match m {
        Membership::Inside => "inside",
        Membership::Outside => "outside",
        Membership::Band => "band",
    }
}

fn agreement_json(r: &AgreementReport) -> Value {
    json!({
        "samples": r.samples,
        "violations": r.violations,
        "band": r.band,
        "witnesses": r.witnesses,
    })
}

fn metric_json(metric: &Metric) -> Value {
    if metric.is_euclidean() {
        json!({"kind": "euclidean"})
    } else {
        json!({"kind": "weighted", "weights": metric.weights()})
    }
}

fn projector_name(p: Option<&Projector>) -> &'static str {
    if p.is_some() {
        "closed-form"
    } else {
        "cutting-plane"
    }
}

fn write_output(path: &Path, value: &impl serde::Serialize) -> CliResult<()> {
    Ok(formats::write_json(path, value)?)
}

struct LoadedCone<S> {
    cone: HyperbolicityCone<S>,
    fixture: Option<Fixture<S>>,
}

impl<S: Scalar> LoadedCone<S> {
    fn fixture_name(&self) -> Option<&str> {
        self.fixture.as_ref().map(|f| f.name.as_str())
    }

    fn metric(&self) -> Metric {
        match &self.fixture {
            Some(f) => f.metric.clone(),
            None => Metric::euclidean(self.cone.num_vars()),
        }
    }

    fn projector(&self) -> Option<&Projector> {
        self.fixture.as_ref().and_then(|f| f.projector.as_ref())
    }
}

fn load_fixture<S: Scalar>(cfg: &RunConfig, name: &str) -> CliResult<Fixture<S>> {
    let mut f = fixtures::by_name::<S>(name).map_err(|e| CliError::Usage(e.to_string()))?;
    f.cone.set_tolerances(cfg.tolerances(f.cone.tolerances()));
    Ok(f)
}

fn build_cone<S: Scalar>(
    cfg: &RunConfig,
    file: &ConeFile,
    direction: Option<&str>,
) -> CliResult<LoadedCone<S>> {
    let p = file.polynomial.to_polynomial::<S>()?;
    let fixture = match &file.fixture {
        Some(name) => {
            let fixture = load_fixture::<S>(cfg, name)?;
            if p != *fixture.cone.polynomial() {
                return Err(CliError::Usage(format!(
                    "polynomial does not match fixture {name}"
                )));
            }
            Some(fixture)
        }
        None => None,
    };
    let e = match direction {
        Some(arg) => formats::parse_vector(arg)?,
        None => formats::values_to_scalars(&file.e)?,
    };
    let mut cone = HyperbolicityCone::with_tolerances(
        p,
        e,
        hypercone_core::HyperbolicityCheck::Skip,
        Tolerances::default(),
    )?;
    cone.set_tolerances(cfg.tolerances(cone.tolerances()));
    Ok(LoadedCone { cone, fixture })
}

fn load_cone<S: Scalar>(
    cfg: &RunConfig,
    poly: &str,
    direction: Option<&str>,
) -> CliResult<LoadedCone<S>> {
    if let Some(name) = poly.strip_prefix("fixture:") {
        let fixture = load_fixture::<S>(cfg, name)?;
        let cone = match direction {
            Some(arg) => {
                let mut cone = fixture.cone.with_direction(formats::parse_vector(arg)?)?;
                cone.set_tolerances(fixture.cone.tolerances());
                cone
            }
            None => fixture.cone.clone(),
        };
        return Ok(LoadedCone {
            cone,
            fixture: Some(fixture),
        });
    }
    match formats::read_json::<PolynomialSource>(Path::new(poly))? {
        PolynomialSource::Cone(file) => build_cone(cfg, &file, direction),
        PolynomialSource::Polynomial(file) => {
            let Some(direction) = direction else {
                return Err(CliError::Usage(format!("{poly} has no direction; pass -e")));
            };
            let cone_file = ConeFile {
                polynomial: file,
                e: Vec::new(),
                certification: formats::CertificationRecord::Unchecked,
                fixture: None,
            };
            build_cone(cfg, &cone_file, Some(direction))
        }
    }
}

fn cone_args<S: Scalar>(cfg: &RunConfig, args: &ConeArgs) -> CliResult<LoadedCone<S>> {
    load_cone(cfg, &args.poly, args.direction.as_deref())
}

struct LoadedFace<S> {
    face: FaceDescriptor<S>,
    loaded: LoadedCone<S>,
    label: Option<String>,
}

impl<S: Scalar> LoadedFace<S> {
    /// The catalog projector of this face, matched by span.
    fn projector(&self) -> Option<Projector> {
        let fixture = self.loaded.fixture.as_ref()?;
        fixture
            .faces
            .iter()
            .find(|f| f.span.same_span(self.face.span()))
            .and_then(|f| f.projector.clone())
    }
}

fn load_face<S: Scalar>(cfg: &RunConfig, path: &Path) -> CliResult<LoadedFace<S>> {
    let file: FaceFile = formats::read_json(path)?;
    let loaded = build_cone::<S>(cfg, &file.cone, None)?;
    let z = formats::values_to_scalars(&file.z)?;
    let span = file.span.to_subspace::<S>()?;
    let face = make_face(&loaded.cone, &z, &span)?;
    if face.m() != file.m {
        return Err(CliError::Property(format!(
            "face file records m = {} but the multiplicity of z is {}",
            file.m,
            face.m()
        )));
    }
    Ok(LoadedFace {
        face,
        loaded,
        label: file.label,
    })
}

fn run_with<S: Scalar>(cfg: &RunConfig, command: &Command) -> CliResult<Outcome> {
    let name = command_name(command);
    match command {
        Command::Check { cone, samples } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let verdict = loaded.cone.validate(*samples, cfg.seed);
            let (hyperbolic, code, witness, inconclusive) = match &verdict {
                Ok(()) => (true, 0, None, false),
                Err(Error::NotHyperbolic { witness }) => (false, 1, Some(witness.clone()), false),
                Err(Error::InconclusiveRealness { witness }) => {
                    (false, 3, Some(witness.clone()), true)
                }
                Err(e) => return Err(e.clone().into()),
            };
            let value = report(
                cfg,
                name,
                json!({
                    "fixture": loaded.fixture_name(),
                    "vars": loaded.cone.num_vars(),
                    "degree": loaded.cone.degree(),
                    "samples": samples,
                    "hyperbolic": hyperbolic,
                    "inconclusive": inconclusive,
                    "witness": witness,
                }),
            );
            Ok(Outcome { code, value })
        }
        Command::Eig { cone, x } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let x: Vec<S> = formats::parse_vector(x)?;
            let roots = loaded.cone.eigenvalues(&x)?;
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({
                    "eigenvalues": scalars(&roots.expanded()),
                    "roots": scalars(&roots.roots),
                    "multiplicities": roots.multiplicities,
                    "exact": roots.exact,
                }),
            )))
        }
        Command::Member { cone, x, order } | Command::Interior { cone, x, order } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let relaxation = loaded.cone.derivative_cone(*order)?;
            let x: Vec<S> = formats::parse_vector(x)?;
            let interior = matches!(command, Command::Interior { .. });
            let holds = if interior {
                relaxation.in_interior(&x)?
            } else {
                relaxation.member(&x)?
            };
            let by_signs = relaxation.classify(&x)?;
            let by_eigenvalues = relaxation.member_by_eigenvalues(&x)?;
            Ok(Outcome::verdict(
                holds,
                report(
                    cfg,
                    name,
                    json!({
                        "order": order,
                        (if interior { "interior" } else { "member" }): holds,
                        "sign_route": membership_name(by_signs),
                        "eigenvalue_route": membership_name(by_eigenvalues),
                        "routes_agree": !by_signs.conflicts(by_eigenvalues),
                        "derivative_values": scalars(&relaxation.derivative_values(&x)?),
                    }),
                ),
            ))
        }
        Command::Mult { cone, x } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let x: Vec<S> = formats::parse_vector(x)?;
            let member = loaded.cone.member(&x)?;
            let sig = loaded.cone.multiplicity(&x)?;
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({
                    "member": member,
                    "m": sig.m,
                    "zero_block": scalars(&sig.zero_block),
                    "positive_block": scalars(&sig.positive_block),
                }),
            )))
        }
        Command::Derive { cone, m, out } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let relaxation = loaded.cone.derivative_cone(*m)?;
            let file = PolynomialFile::from_polynomial(relaxation.polynomial());
            match out {
                Some(path) => {
                    write_output(path, &file)?;
                    Ok(Outcome::ok(report(
                        cfg,
                        name,
                        json!({"order": m, "degree": file.degree, "terms": file.terms.len(), "written": path}),
                    )))
                }
                None => Ok(Outcome::ok(to_value(&file))),
            }
        }
        Command::Face(sub) => run_face::<S>(cfg, name, sub),
        Command::Intersect {
            p1,
            e1,
            p2,
            e2,
            z,
            samples,
            out,
        } => {
            let k1 = load_cone::<S>(cfg, p1, e1.as_deref())?;
            let k2 = load_cone::<S>(cfg, p2, e2.as_deref())?;
            let z: Vec<S> = formats::parse_vector(z)?;
            let inter = intersect(&k1.cone, &k2.cone, &z, *samples, cfg.seed)?;
            let agreement = intersection_agreement(&inter, &k1.cone, &k2.cone, *samples, cfg.seed)?;
            let cone_file = ConeFile::from_cone(&inter.cone, None);
            if let Some(path) = out {
                write_output(path, &cone_file)?;
            }
            Ok(Outcome::verdict(
                agreement.violations == 0,
                report(
                    cfg,
                    name,
                    json!({
                        "cone": to_value(&cone_file),
                        "subspace": to_value(&BasisFile::from_subspace(&inter.subspace)),
                        "m": [inter.faces[0].m(), inter.faces[1].m()],
                        "spans": [
                            to_value(&BasisFile::from_subspace(inter.faces[0].span())),
                            to_value(&BasisFile::from_subspace(inter.faces[1].span())),
                        ],
                        "agreement": agreement_json(&agreement),
                        "written": out,
                    }),
                ),
            ))
        }
        Command::Amen {
            face,
            samples,
            radii,
            csv,
            proof_path,
        } => {
            let lf = load_face::<S>(cfg, face)?;
            let metric = lf.loaded.metric();
            let projectors = Projectors {
                cone: lf.loaded.projector().cloned(),
                face: lf.projector(),
            };
            let opts = AmenabilityOptions {
                samples: *samples,
                seed: cfg.seed,
                radii: formats::parse_f64_list(radii)?,
                keep_ratios: csv.is_some(),
                ..Default::default()
            };
            let est = amenability_estimate(&lf.face, projectors.clone(), &metric, &opts)?;
            if let (Some(path), Some(ratios)) = (csv, &est.ratios) {
                let mut text = String::from("index,radius,dist_face,dist_cone,ratio\n");
                for r in ratios {
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{}",
                        r.index, r.radius, r.dist_face, r.dist_cone, r.ratio
                    );
                }
                fs::write(path, text).map_err(|source| FormatError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            let per_radius: Vec<Value> = est
                .per_radius
                .iter()
                .map(|r| {
                    json!({
                        "radius": r.radius,
                        "kappa_hat": r.kappa_hat,
                        "retained": r.retained,
                        "worst_point": r.worst_point,
                    })
                })
                .collect();
            let mut fields = json!({
                "fixture": lf.loaded.fixture_name(),
                "label": lf.label,
                "m": lf.face.m(),
                "span_dim": lf.face.span().dim(),
                "N": est.samples,
                "radius_set": opts.radii,
                "metric": metric_json(&metric),
                "projectors": {
                    "cone": projector_name(projectors.cone.as_ref()),
                    "face": projector_name(projectors.face.as_ref()),
                },
                "kappa_hat": est.kappa_hat,
                "retained": est.retained,
                "discarded": est.discarded,
                "worst_point": est.worst_point,
                "per_radius": per_radius,
                "radius_spread": est.radius_spread(),
                "non_converged": est.non_converged,
                "csv": csv,
            });
            let mut code = if est.non_converged > 0 { 3 } else { 0 };
            if *proof_path {
                let pp = amenability_proof_path_check(
                    &lf.face,
                    projectors,
                    &metric,
                    *samples,
                    cfg.seed,
                    opts.cutting_plane,
                )?;
                if !pp.consistent && code == 0 {
                    code = 1;
                }
                fields["proof_path"] = json!({
                    "z_interior": pp.z_interior,
                    "samples": pp.samples,
                    "sandwich_violations": pp.sandwich_violations,
                    "worst_gap": pp.worst_gap,
                    "kappa_relaxation": pp.kappa_relaxation,
                    "kappa_parent": pp.kappa_parent,
                    "consistent": pp.consistent,
                    "witnesses": pp.witnesses,
                    "non_converged": pp.non_converged,
                });
            }
            Ok(Outcome {
                code,
                value: report(cfg, name, fields),
            })
        }
        Command::Linreg {
            subspace,
            cone,
            witness,
            samples,
            max_iterations,
        } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let l = formats::parse_basis::<S>(subspace, loaded.cone.num_vars())?;
            let w: Vec<S> = formats::parse_vector(witness)?;
            let metric = loaded.metric();
            let opts = LinRegOptions {
                samples: *samples,
                seed: cfg.seed,
                max_iterations: *max_iterations,
                ..Default::default()
            };
            let est = linear_regularity_estimate(
                &l,
                &loaded.cone,
                loaded.projector(),
                &metric,
                &w,
                &opts,
            )?;
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({
                    "fixture": loaded.fixture_name(),
                    "subspace_dim": l.dim(),
                    "N": est.samples,
                    "metric": metric_json(&metric),
                    "projector": projector_name(loaded.projector()),
                    "kappa_hat": est.kappa_hat,
                    "retained": est.retained,
                    "discarded": est.discarded,
                    "worst_point": est.worst_point,
                    "max_certificate_shift": est.max_certificate_shift,
                }),
            )))
        }
        Command::Fixture(FixtureCommand::List) => {
            let mut entries = Vec::new();
            for fname in fixtures::catalog_names() {
                let f = load_fixture::<S>(cfg, fname)?;
                entries.push(json!({
                    "name": f.name,
                    "vars": f.num_vars(),
                    "degree": f.cone.degree(),
                    "projector": projector_name(f.projector.as_ref()),
                    "faces": f.faces.iter().map(|c| json!({"label": c.label, "m": c.m})).collect::<Vec<_>>(),
                }));
            }
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({ "fixtures": entries }),
            )))
        }
        Command::Fixture(FixtureCommand::Emit {
            name: fname,
            out_dir,
        }) => {
            let f = load_fixture::<S>(cfg, fname)?;
            let mut faces = Vec::new();
            for c in &f.faces {
                let face = make_face(&f.cone, &c.z, &c.span)?;
                faces.push(FaceFile::from_face(&face, Some(&f.name), Some(&c.label)));
            }
            let file = FixtureFile {
                name: f.name.clone(),
                cone: ConeFile::from_cone(&f.cone, Some(&f.name)),
                faces,
            };
            let Some(dir) = out_dir else {
                return Ok(Outcome::ok(to_value(&file)));
            };
            let io = |path: &Path, source| FormatError::Io {
                path: path.to_path_buf(),
                source,
            };
            let face_dir = dir.join("faces");
            fs::create_dir_all(&face_dir).map_err(|e| io(&face_dir, e))?;
            let mut written = vec![dir.join("polynomial.json"), dir.join("cone.json")];
            write_output(&written[0], &file.cone.polynomial)?;
            write_output(&written[1], &file.cone)?;
            for face in &file.faces {
                let label = face.label.as_deref().unwrap_or("face");
                let path = face_dir.join(format!("{}.json", slug(label)));
                write_output(&path, face)?;
                written.push(path);
            }
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({"fixture": f.name, "written": written}),
            )))
        }
    }
}

fn run_face<S: Scalar>(cfg: &RunConfig, name: &str, sub: &FaceCommand) -> CliResult<Outcome> {
    match sub {
        FaceCommand::Make {
            cone,
            z,
            span,
            label,
            out,
        } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let z: Vec<S> = formats::parse_vector(z)?;
            let span = match span {
                Some(arg) => formats::parse_basis::<S>(arg, loaded.cone.num_vars())?,
                None => discover_span(&loaded.cone, &z)?.span,
            };
            let face = make_face(&loaded.cone, &z, &span)?;
            let file = FaceFile::from_face(&face, loaded.fixture_name(), label.as_deref());
            match out {
                Some(path) => {
                    write_output(path, &file)?;
                    Ok(Outcome::ok(report(
                        cfg,
                        name,
                        json!({
                            "m": face.m(),
                            "span_dim": face.span().dim(),
                            "nontrivial": face.is_nontrivial(),
                            "written": path,
                        }),
                    )))
                }
                None => Ok(Outcome::ok(to_value(&file))),
            }
        }
        FaceCommand::Verify {
            face,
            samples,
            m_test,
        } => {
            let lf = load_face::<S>(cfg, face)?;
            let v = match m_test {
                Some(m) => verify_face_representation_at(&lf.face, *m, *samples, cfg.seed)?,
                None => verify_face_representation(&lf.face, *samples, cfg.seed)?,
            };
            let mc = mult_constancy_check(&lf.face, 50, cfg.seed)?;
            Ok(Outcome::verdict(
                v.passed() && mc.constant,
                report(
                    cfg,
                    name,
                    json!({
                        "label": lf.label,
                        "m": lf.face.m(),
                        "m_tested": v.m_tested,
                        "interior_ok": v.interior_ok,
                        "violations": v.violations,
                        "sampled": agreement_json(&v.sampled),
                        "passed": v.passed(),
                        "mult_constant": mc.constant,
                        "mult_checked": mc.checked,
                        "mult_witness": mc.witness,
                    }),
                ),
            ))
        }
        FaceCommand::Discover { cone, z } => {
            let loaded = cone_args::<S>(cfg, cone)?;
            let z: Vec<S> = formats::parse_vector(z)?;
            let found = discover_span(&loaded.cone, &z)?;
            Ok(Outcome::ok(report(
                cfg,
                name,
                json!({
                    "span": to_value(&BasisFile::from_subspace(&found.span)),
                    "m": found.m,
                    "kernel_dim": found.kernel_dim,
                    "refined_dim": found.refined_dim,
                    "epsilon": found.epsilon,
                    "directions_tested": found.directions_tested,
                }),
            )))
        }
        FaceCommand::AsCone { face, samples, out } => {
            let lf = load_face::<S>(cfg, face)?;
            let cone = face_as_cone(&lf.face, *samples, cfg.seed)?;
            let agreement = face_cone_agreement(&lf.face, &cone, *samples, cfg.seed)?;
            let file = ConeFile::from_cone(&cone, None);
            if let Some(path) = out {
                write_output(path, &file)?;
            }
            Ok(Outcome::verdict(
                agreement.violations == 0,
                report(
                    cfg,
                    name,
                    json!({
                        "label": lf.label,
                        "cone": to_value(&file),
                        "agreement": agreement_json(&agreement),
                        "written": out,
                    }),
                ),
            ))
        }
    }
}

fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

/// JSON (pretty, newline-terminated) or `key: value` lines.
pub fn render(value: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => formats::to_json_string(value),
        OutputFormat::Text => {
            let mut out = String::new();
            match value {
                Value::Object(map) => {
                    for (k, v) in map {
                        let _ = writeln!(out, "{k}: {}", inline(v));
                    }
                }
                other => {
                    let _ = writeln!(out, "{}", inline(other));
                }
            }
            out
        }
    }
}

fn inline(value: &Value) -> String {
    match value {
        Value::Null => "none".into(),
        Value::String(s) => s.strip_suffix("/1").unwrap_or(s).to_string(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => value.to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let (code, out, _) =
            run_from_args(std::iter::once("hypercone").chain(args.iter().copied()));
        (code, out)
    }

    #[test]
    fn orthant_eigenvalues() {
        let (code, out) = run_args(&[
            "eig",
            "-p",
            "fixture:orthant:3",
            "-x",
            "3,1,2",
            "--output",
            "text",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("eigenvalues: [1, 2, 3]"), "{out}");
    }

    #[test]
    fn lorentz_membership_exit_codes() {
        assert_eq!(
            run_args(&["member", "-p", "fixture:lorentz:3", "-x", "1,2,0"]).0,
            1
        );
        assert_eq!(
            run_args(&["member", "-p", "fixture:lorentz:3", "-x", "2,1,0"]).0,
            0
        );
        assert_eq!(
            run_args(&["interior", "-p", "fixture:lorentz:3", "-x", "1,1,0"]).0,
            1
        );
        assert_eq!(
            run_args(&["member", "-p", "fixture:lorentz:3", "-x", "1,x,0"]).0,
            2
        );
        assert_eq!(
            run_args(&["member", "-p", "fixture:nothing:3", "-x", "1"]).0,
            2
        );
        assert_eq!(run_args(&["frobnicate"]).0, 2);
    }

    #[test]
    fn multiplicity_report() {
        let (code, out) = run_args(&["mult", "-p", "fixture:psd:2", "-x", "1,0,0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["m"], json!(1));
        assert_eq!(v["seed"], json!(0));
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("support[0, 1]"), "support_0_1");
        assert_eq!(slug("block2"), "block2");
    }
}
