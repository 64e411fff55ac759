//! Command-line front end. Every command prints one JSON document; exit code
//! 0 means success, 2 a rejected verification, 1 a usage or data error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::e8::{self, DiagonalClass, E8Model, GOrbit, PeriodicTriangulation};
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_decimal, parse_rational, SymMatrix};
use crate::leech;
use crate::maxdet::{self, OptimizationProblem};
use crate::qform::Verdict;
use crate::rigidity;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "covering", version, about = "Exact verification of lattice sphere coverings in dimensions 8 and 24")]
pub struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run manifest path (default: `<out>.manifest.json` when `--out` is given).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// E8 combinatorics.
    #[command(subcommand)]
    E8(E8Command),
    /// Maximize the determinant over a secondary cone and rationalize the optimum.
    Optimize(OptimizeArgs),
    /// Exact three-stage certificate for a rational form.
    Certify(CertifyArgs),
    /// Leech lattice checks.
    #[command(subcommand)]
    Leech(LeechCommand),
    /// Rigidity system of E8 (d = 8) or the Leech lattice (d = 24).
    Rigidity {
        #[arg(long)]
        dim: usize,
    },
    /// Packing-covering constants of E8 and the Leech lattice.
    Gamma,
    /// Moment-form lower bounds for E8 and the Leech lattice.
    Bounds,
}

#[derive(Subcommand, Debug)]
pub enum E8Command {
    Info,
    Classes,
    Orbits,
    /// The G-invariant candidate triangulations and their feasibility.
    Triangulations,
    Regulators {
        #[arg(long, default_value = "I1")]
        triangulation: String,
        /// Include every regulator with its terms.
        #[arg(long)]
        full: bool,
    },
    /// Exactly certified facets of the closed secondary cone.
    Facets {
        #[arg(long, default_value = "I1")]
        triangulation: String,
    },
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long, default_value = "I1")]
    pub triangulation: String,
    /// Denominator bound for rounding the float optimum.
    #[arg(long, default_value = "1000000000000")]
    pub denominator_bound: String,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// JSON file with a matrix of rational strings, or an object with a `q` field.
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long, default_value = "I1")]
    pub triangulation: String,
    #[arg(long, default_value = maxdet::THETA_THRESHOLD)]
    pub threshold: String,
}

#[derive(Subcommand, Debug)]
pub enum LeechCommand {
    /// Moment-form bound and its tightness.
    Bound,
    /// Second-moment identity of a shell by direct summation.
    DesignCheck {
        #[arg(long, default_value = "4")]
        norm: String,
        /// Required for shells above norm 4 (the norm-6 shell has 16,773,120 vectors).
        #[arg(long)]
        long_running: bool,
    },
}

/// Outcome of one command: the JSON body and whether it verified.
pub struct Outcome {
    pub body: Value,
    pub verified: bool,
    pub inputs: Vec<PathBuf>,
}

impl Outcome {
    fn ok(body: impl Serialize) -> Result<Outcome> {
        Ok(Outcome {
            body: serde_json::to_value(body)?,
            verified: true,
            inputs: Vec::new(),
        })
    }

    fn checked(body: impl Serialize, verified: bool) -> Result<Outcome> {
        Ok(Outcome {
            body: serde_json::to_value(body)?,
            verified,
            inputs: Vec::new(),
        })
    }
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<FileDigest>,
    pub tool_version: String,
    pub data_checksums: Value,
    pub outputs: Vec<FileDigest>,
    pub exit_code: i32,
    pub wall_time_seconds: f64,
    /// The only field that differs between identical runs.
    pub timestamp_unix: u64,
}

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

fn digest(path: &Path) -> Result<FileDigest> {
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: leech::model::sha256_hex(&std::fs::read(path)?),
    })
}

struct E8Context {
    model: E8Model,
    classes: Vec<DiagonalClass>,
    orbits: Vec<GOrbit>,
}

impl E8Context {
    fn new() -> Self {
        let model = e8::build_model();
        let classes = e8::diagonal_classes(&model);
        let orbits = e8::g_orbits(&model);
        E8Context { model, classes, orbits }
    }

    fn triangulation(&self, name: &str) -> Result<PeriodicTriangulation> {
        PeriodicTriangulation::named(name, &self.classes, &self.orbits)
    }

    fn problem(&self, name: &str) -> Result<OptimizationProblem> {
        Ok(OptimizationProblem::build(&self.model, &self.triangulation(name)?))
    }
}

fn e8_command(cmd: &E8Command) -> Result<Outcome> {
    let ctx = E8Context::new();
    match cmd {
        E8Command::Info => {
            let mut types = [0usize; 3];
            for c in &ctx.classes {
                types[c.class_type as usize] += 1;
            }
            Outcome::ok(json!({
                "shell2": ctx.model.roots.len(),
                "shell4": ctx.model.shell4.len(),
                "classes": ctx.classes.len(),
                "class_types": {"axis": types[0], "quadruple": types[1], "half_integer": types[2]},
                "simplex_centers": ctx.model.simplex_centers.len(),
                "simplex_representatives": e8::simplex_representatives(&ctx.model).len(),
                "orbits": ctx.orbits.len(),
            }))
        }
        E8Command::Classes => Outcome::ok(
            ctx.classes
                .iter()
                .map(|c| {
                    json!({
                        "index": c.index,
                        "type": c.class_type,
                        "representative": c.representative.to_strings(),
                        "members": c.members.len(),
                    })
                })
                .collect::<Vec<_>>(),
        ),
        E8Command::Orbits => Outcome::ok(
            ctx.orbits
                .iter()
                .map(|o| json!({"id": o.id, "representative": o.representative.to_strings(), "size": o.size}))
                .collect::<Vec<_>>(),
        ),
        E8Command::Triangulations => {
            let candidates = e8::candidate_triangulations(&ctx.classes, &ctx.orbits);
            let list: Vec<Value> = candidates
                .iter()
                .map(|t| {
                    let f = e8::delone_feasible(&ctx.classes, t);
                    let name = [("I1", &e8::I1[..]), ("I2", &e8::I2[..])]
                        .iter()
                        .find(|(_, s)| *s == t.orbit_selection.as_slice())
                        .map(|(n, _)| *n);
                    json!({
                        "orbit_selection": t.orbit_selection,
                        "name": name,
                        "delone_feasible": f.feasible,
                        "margin": format_rational(&f.margin),
                    })
                })
                .collect();
            let orbit = |id: usize| -> std::collections::BTreeSet<e8::E8Point> { ctx.orbits[id - 1].members.iter().copied().collect() };
            let swaps: Vec<Value> = [(1, 13), (3, 7), (6, 11), (10, 20)]
                .iter()
                .map(|&(a, b)| {
                    let image: Option<std::collections::BTreeSet<e8::E8Point>> = orbit(a).iter().map(e8::apply_hah).collect();
                    json!({"from": a, "to": b, "holds": image == Some(orbit(b))})
                })
                .collect();
            let feasible = list.iter().filter(|v| v["delone_feasible"] == json!(true)).count();
            let verified = candidates.len() == 4 && feasible == 2 && swaps.iter().all(|s| s["holds"] == json!(true));
            Outcome::checked(json!({"candidates": list, "feasible": feasible, "hah_swaps": swaps}), verified)
        }
        E8Command::Regulators { triangulation, full } => {
            let t = ctx.triangulation(triangulation)?;
            let set = e8::regulators(&ctx.model, &t);
            let mut body = json!({
                "triangulation": t.orbit_selection,
                "pair_counts": set.pair_counts,
                "distinct_counts": set.distinct_counts(),
            });
            if *full {
                body["regulators"] = serde_json::to_value(set.regulators.iter().map(|r| r.to_json()).collect::<Vec<_>>())?;
            }
            Outcome::ok(body)
        }
        E8Command::Facets { triangulation } => {
            let t = ctx.triangulation(triangulation)?;
            let report = e8::facet_count(&e8::regulators(&ctx.model, &t))?;
            Outcome::ok(report)
        }
    }
}

#[derive(Serialize)]
struct OptimizeOutput {
    triangulation: Vec<usize>,
    optimum: maxdet::FloatOptimum,
    denominator_bound: String,
    coordinates: [String; 4],
    theta_rational_approx: f64,
    q: Vec<Vec<String>>,
}

fn optimize_command(args: &OptimizeArgs) -> Result<Outcome> {
    let ctx = E8Context::new();
    let problem = ctx.problem(&args.triangulation)?;
    let opt = maxdet::optimize(&problem)?;
    let bound = parse_rational(&args.denominator_bound)?;
    if !bound.is_integer() || bound < int(1) {
        return Err(Error::Parse(format!("denominator bound {} must be a positive integer", args.denominator_bound)));
    }
    let bound: BigInt = bound.to_integer();
    let r = maxdet::rationalize(&problem, &opt.p, &opt.active_regulators, &bound)?;
    let theta = maxdet::certify::theta_of_rational(&problem, &r.p).unwrap_or(f64::NAN);
    Outcome::ok(OptimizeOutput {
        triangulation: problem.refined.triangulation.orbit_selection.clone(),
        optimum: opt,
        denominator_bound: bound.to_string(),
        coordinates: r.p.clone().map(|x| format_rational(&x)),
        theta_rational_approx: theta,
        q: r.q.to_strings(),
    })
}

/// Accepts a bare matrix `[[..]]` or an object with a `q` matrix.
pub fn read_form(path: &Path) -> Result<SymMatrix> {
    let v: Value = serde_json::from_slice(&std::fs::read(path)?)?;
    let m = match &v {
        Value::Object(o) => o.get("q").ok_or_else(|| Error::Parse("missing field `q`".into()))?,
        other => other,
    };
    let rows: Vec<Vec<Value>> = serde_json::from_value(m.clone())?;
    let strings: Vec<Vec<String>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::Parse(format!("matrix entry {other}"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    SymMatrix::from_strings(&strings)
}

fn certify_command(args: &CertifyArgs) -> Result<Outcome> {
    parse_decimal(&args.threshold)?;
    let q = read_form(&args.q)?;
    let ctx = E8Context::new();
    let problem = ctx.problem(&args.triangulation)?;
    let cert = maxdet::certify(&q, &problem, &args.threshold)?;
    let verified = cert.comparison.verdict == Verdict::Less;
    let mut out = Outcome::checked(cert, verified)?;
    out.inputs.push(args.q.clone());
    Ok(out)
}

fn leech_command(cmd: &LeechCommand) -> Result<Outcome> {
    let model = leech::build_leech()?;
    match cmd {
        LeechCommand::Bound => {
            let r = leech::lower_bound_certificate(&model)?;
            let tight = r.tight;
            Outcome::checked(r, tight)
        }
        LeechCommand::DesignCheck { norm, long_running } => {
            let n = parse_rational(norm)?;
            if n > int(4) && !long_running {
                return Err(Error::Parse(format!("norm {n} shell summation requires --long-running")));
            }
            let c = leech::design_identity_check(&model.gram, &n)?;
            let holds = c.holds;
            Outcome::checked(c, holds)
        }
    }
}

fn gamma_command() -> Result<Outcome> {
    let leech = leech::build_leech()?;
    let e8 = e8::e8_bounds(&e8::build_model())?;
    let lg = leech::leech_gamma_sq(&leech);
    let verified = lg == int(2) && e8.gamma_sq == "2";
    Outcome::checked(
        json!({
            "leech": {"mu": "2", "lambda": format_rational(&leech.minimum), "gamma_sq": format_rational(&lg)},
            "e8": {"mu": e8.mu, "lambda": e8.lambda, "gamma_sq": e8.gamma_sq},
        }),
        verified,
    )
}

fn bounds_command() -> Result<Outcome> {
    let e8 = e8::e8_bounds(&e8::build_model())?;
    let leech = leech::lower_bound_certificate(&leech::build_leech()?)?;
    let verified = e8.moment_form_is_inverse_gram && leech.tight;
    Outcome::checked(json!({"e8": e8, "leech": leech}), verified)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::E8(c) => e8_command(c),
        Command::Optimize(a) => optimize_command(a),
        Command::Certify(a) => certify_command(a),
        Command::Leech(c) => leech_command(c),
        Command::Rigidity { dim } => {
            if *dim < 2 {
                return Err(Error::Parse("rigidity needs --dim >= 2".into()));
            }
            let r = rigidity::solution_space(&rigidity::build_system(*dim));
            let ok = r.nullspace_dim == 1 && r.basis_is_identity;
            Outcome::checked(r, ok)
        }
        Command::Gamma => gamma_command(),
        Command::Bounds => bounds_command(),
    }
}

fn error_body(e: &Error) -> Value {
    match e {
        Error::Rejected(r) => json!({"status": "rejected", "rejection": r, "message": e.to_string()}),
        _ => json!({"status": "error", "message": e.to_string()}),
    }
}

/// Runs the command line, writing JSON to `stdout` (or `--out`) and
/// diagnostics to `stderr`; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            let _ = writeln!(stderr, "warning: thread pool already initialized: {e}");
        }
    }
    let start = Instant::now();
    let (body, code, inputs) = match execute(&cli) {
        Ok(o) => (o.body, if o.verified { EXIT_OK } else { EXIT_REJECTED }, o.inputs),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let code = if matches!(e, Error::Rejected(_)) { EXIT_REJECTED } else { EXIT_ERROR };
            (error_body(&e), code, Vec::new())
        }
    };
    let text = match serde_json::to_string_pretty(&body) {
        Ok(t) => t + "\n",
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let mut outputs = Vec::new();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
            outputs.push(path.clone());
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    let manifest_path = cli.manifest.clone().or_else(|| cli.out.as_ref().map(|p| {
        let mut s = p.clone().into_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    }));
    if let Some(mp) = manifest_path {
        let digests = |ps: &[PathBuf]| -> Vec<FileDigest> { ps.iter().filter_map(|p| digest(p).ok()).collect() };
        let manifest = RunManifest {
            command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            inputs: digests(&inputs),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            data_checksums: json!({"leech_generator": leech::model::GENERATOR_SHA256}),
            outputs: digests(&outputs),
            exit_code: code,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let written = serde_json::to_string_pretty(&manifest)
            .map_err(Error::from)
            .and_then(|m| std::fs::write(&mp, m + "\n").map_err(Error::from));
        if let Err(e) = written {
            let _ = writeln!(stderr, "error: cannot write manifest {}: {e}", mp.display());
            return EXIT_ERROR;
        }
    }
    code
}
