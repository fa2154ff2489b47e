//! Batch front end: parse polytope/weight/fibration JSON, run a pipeline,
//! emit a machine-readable report (schema `wkstab/1`) on stdout or `--out`.
//!
//! Exit codes: 0 success, 1 input/runtime error (structured JSON error with
//! `{code, message, location}`), 2 mathematically negative verdict
//! (Delzant validation failure, inconclusive stability, destabilizer found).

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;

use wkstab::fibration::FibrationError;
use wkstab::futaki::{self, FutakiError};
use wkstab::json::{
    destabilizer_report_json, futaki_report_json, stability_report_json, weight_json, FibrationDto,
    JsonError, PlDto, PolytopeDto, WeightDto,
};
use wkstab::polytope::{AffineFunctional, LabeledPolytope, PolytopeError};
use wkstab::quadrature::{self, QuadratureError};
use wkstab::scalar::{parse_rat, rat_to_string, Rat};
use wkstab::stability::{self, StabilityError};
use wkstab::weights::{
    bernstein_approx, cone_weights, is_log_concave_on, is_positive_on, soliton_w, sup_error_on_grid,
    tilde_v, LogConcavityStatus, PositivityStatus, WeightExpr,
};

const SCHEMA: &str = "wkstab/1";

#[derive(Parser)]
#[command(
    name = "wkstab",
    version,
    about = "Weighted K-stability of labeled Delzant polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Delzant validation report for a polytope.
    Validate(ValidateArgs),
    /// Volume, boundary measure, and optional weight integrals.
    Integrate(IntegrateArgs),
    /// Weighted Donaldson-Futaki invariant on an affine or PL test function.
    Futaki(FutakiArgs),
    /// Weighted extremal affine function (Gram solve + residuals).
    Extremal(ExtremalArgs),
    /// Shift w by a constant so the normalization residual vanishes.
    Normalize(NormalizeArgs),
    /// Cone-decomposition sufficient condition for uniform K-stability.
    CheckStability(StabilityArgs),
    /// Minimize the stability ratio over simple PL convex functions.
    SearchDestabilizer(SearchArgs),
    /// Fibration weight transform (p·v, w~), with optional stability run.
    Fibration(FibrationArgs),
    /// Construct soliton / tilde-v / cone / Bernstein weights.
    Weights(WeightsArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Polytope JSON path.
    #[arg(long)]
    polytope: PathBuf,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Sampling depth: grids have lattice order 2^depth per simplex.
    #[arg(long, default_value_t = 4)]
    grid_depth: u32,
    /// Normalization point: "barycenter" or comma-separated rationals.
    #[arg(long, default_value = "barycenter")]
    x0: String,
    /// Destabilizer search: max ∞-norm of integer slopes.
    #[arg(long, default_value_t = 3)]
    slope_bound: i64,
    /// Destabilizer search: crease offsets per direction.
    #[arg(long, default_value_t = 16)]
    offsets: u32,
    /// RNG seed for seeded subroutines.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rayon thread count (default: library default).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Integrand weight spec (default: constant one).
    #[arg(long, default_value = "one")]
    v: String,
}

#[derive(Args)]
struct FutakiArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w: String,
    /// Affine test function, constant first: "c,u1,...,un".
    #[arg(long)]
    ell: Option<String>,
    /// PL convex test function JSON path.
    #[arg(long)]
    f: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremalArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w0: String,
}

#[derive(Args)]
struct NormalizeArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w: String,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w: String,
    /// Fano form: replace the cone factor 1/L_j(x0) by 1/t.
    #[arg(long)]
    fano_scale: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w: String,
}

#[derive(Args)]
struct FibrationArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long)]
    v: String,
    #[arg(long)]
    w: String,
    /// Fibration factors JSON path.
    #[arg(long)]
    fibration: PathBuf,
    /// Also run the sufficient condition and destabilizer search on (p·v, w~).
    #[arg(long, default_value_t = false)]
    stability: bool,
}

#[derive(Args)]
struct WeightsArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Family: soliton | tilde-v | cone | bernstein.
    #[arg(long)]
    family: String,
    /// Input weight spec (soliton, tilde-v, bernstein).
    #[arg(long)]
    v: Option<String>,
    /// Cone family: positive affine ℓ, constant first "c,u1,...,un".
    #[arg(long)]
    ell: Option<String>,
    /// Cone family: the constant a in w = a ℓ^{-n-2}.
    #[arg(long, default_value = "1")]
    a: String,
    /// Bernstein degree per coordinate.
    #[arg(long, default_value_t = 4)]
    degree: u32,
}

struct CliError {
    code: &'static str,
    message: String,
    location: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>, location: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            location: location.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok((report, out, exit_code)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        return emit_error(&CliError::new(
                            "io",
                            format!("cannot write report: {e}"),
                            path.display().to_string(),
                        ));
                    }
                }
                None => print!("{text}"),
            }
            exit_code
        }
        Err(e) => emit_error(&e),
    }
}

fn emit_error(e: &CliError) -> i32 {
    let v = json!({
        "code": e.code,
        "message": e.message,
        "location": e.location,
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("error serializes"));
    1
}

fn execute(cli: Cli) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    match cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Integrate(a) => cmd_integrate(a),
        Command::Futaki(a) => cmd_futaki(a),
        Command::Extremal(a) => cmd_extremal(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::CheckStability(a) => cmd_check_stability(a),
        Command::SearchDestabilizer(a) => cmd_search(a),
        Command::Fibration(a) => cmd_fibration(a),
        Command::Weights(a) => cmd_weights(a),
    }
}

// ---------------------------------------------------------------------------
// shared setup

struct Context {
    polytope: LabeledPolytope,
    common: CommonOpts,
}

impl Context {
    fn new(common: CommonOpts) -> Result<Self, CliError> {
        if let Some(t) = common.threads {
            // ignore "already initialized" from repeated test invocations
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global();
        }
        let text = std::fs::read_to_string(&common.polytope).map_err(|e| {
            CliError::new(
                "io",
                format!("cannot read polytope: {e}"),
                common.polytope.display().to_string(),
            )
        })?;
        let dto = PolytopeDto::parse(&text)
            .map_err(|e| CliError::new("parse", e.to_string(), "--polytope"))?;
        let polytope = dto
            .to_polytope()
            .map_err(|e| CliError::new("math", e.to_string(), "--polytope"))?;
        Ok(Self { polytope, common })
    }

    fn dim(&self) -> usize {
        self.polytope.dim()
    }

    fn x0(&self) -> Result<Option<Vec<Rat>>, CliError> {
        if self.common.x0 == "barycenter" {
            return Ok(None);
        }
        let coords = parse_rat_csv(&self.common.x0, "--x0")?;
        if coords.len() != self.dim() {
            return Err(CliError::new(
                "parse",
                format!("x0 has {} coordinates, expected {}", coords.len(), self.dim()),
                "--x0",
            ));
        }
        Ok(Some(coords))
    }

    fn weight(&self, spec: &str, flag: &str) -> Result<WeightExpr, CliError> {
        parse_weight_spec(spec, self.dim(), flag)
    }

    fn jobspec(&self, command: &str, extra: Value) -> Value {
        let mut spec = json!({
            "command": command,
            "polytope": self.common.polytope.display().to_string(),
            "tol": self.common.tol,
            "grid_depth": self.common.grid_depth,
            "x0": self.common.x0,
            "slope_bound": self.common.slope_bound,
            "offsets": self.common.offsets,
            "seed": self.common.seed,
            "threads": self.common.threads,
            "out": self.common.out.as_ref().map(|p| p.display().to_string()),
        });
        if let (Some(obj), Some(ext)) = (spec.as_object_mut(), extra.as_object()) {
            for (k, v) in ext {
                obj.insert(k.clone(), v.clone());
            }
        }
        spec
    }

    fn envelope(&self, command: &str, extra: Value, report: Value) -> Value {
        json!({
            "schema": SCHEMA,
            "command": command,
            "jobspec": self.jobspec(command, extra),
            "report": report,
        })
    }
}

fn parse_rat_csv(s: &str, flag: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|part| {
            parse_rat(part.trim()).map_err(|e| CliError::new("parse", e.to_string(), flag))
        })
        .collect()
}

/// Affine test function from "c,u1,...,un" (constant first).
fn parse_ell(s: &str, dim: usize, flag: &str) -> Result<AffineFunctional<Rat>, CliError> {
    let coords = parse_rat_csv(s, flag)?;
    if coords.len() != dim + 1 {
        return Err(CliError::new(
            "parse",
            format!(
                "affine function needs {} entries (constant first), got {}",
                dim + 1,
                coords.len()
            ),
            flag,
        ));
    }
    Ok(AffineFunctional::new(
        coords[1..].to_vec(),
        coords[0].clone(),
    ))
}

/// Weight shorthand: one | const:κ | expaff:ξ1,...,ξn | file:path.
fn parse_weight_spec(spec: &str, dim: usize, flag: &str) -> Result<WeightExpr, CliError> {
    if spec == "one" {
        return Ok(WeightExpr::one());
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let c = parse_rat(rest).map_err(|e| CliError::new("parse", e.to_string(), flag))?;
        return Ok(WeightExpr::scalar(c));
    }
    if let Some(rest) = spec.strip_prefix("expaff:") {
        let xi = parse_rat_csv(rest, flag)?;
        if xi.len() != dim {
            return Err(CliError::new(
                "parse",
                format!("expaff needs {dim} entries, got {}", xi.len()),
                flag,
            ));
        }
        return Ok(WeightExpr::exp_aff(AffineFunctional::new(
            xi,
            Rat::from_integer(0.into()),
        )));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new("io", format!("cannot read weight: {e}"), path))?;
        let dto =
            WeightDto::parse(&text).map_err(|e| CliError::new("parse", e.to_string(), path))?;
        return dto
            .to_expr(dim)
            .map_err(|e| CliError::new("parse", e.to_string(), path));
    }
    Err(CliError::new(
        "parse",
        format!("unknown weight spec {spec:?}; use one, const:κ, expaff:ξ…, file:path"),
        flag,
    ))
}

// ---------------------------------------------------------------------------
// error mapping

fn map_polytope(e: PolytopeError, location: &str) -> CliError {
    CliError::new("math", e.to_string(), location)
}

fn map_futaki(e: FutakiError) -> CliError {
    match e {
        FutakiError::Quadrature(QuadratureError::ToleranceNotReached { .. }) => {
            CliError::new("tolerance", e.to_string(), "quadrature")
        }
        FutakiError::Quadrature(QuadratureError::Domain(_)) | FutakiError::Domain(_) => {
            CliError::new("domain", e.to_string(), "weights")
        }
        other => CliError::new("math", other.to_string(), "futaki"),
    }
}

fn map_stability(e: StabilityError) -> CliError {
    match e {
        StabilityError::Futaki(f) => map_futaki(f),
        StabilityError::Domain(_) => CliError::new("domain", e.to_string(), "weights"),
        other => CliError::new("math", other.to_string(), "stability"),
    }
}

fn map_fibration(e: FibrationError) -> CliError {
    match e {
        FibrationError::Stability(s) => map_stability(s),
        other => CliError::new("math", other.to_string(), "--fibration"),
    }
}

fn map_json(e: JsonError, location: &str) -> CliError {
    match e {
        JsonError::Schema(_) => CliError::new("parse", e.to_string(), location),
        JsonError::Polytope(p) => map_polytope(p, location),
    }
}

fn map_quadrature(e: QuadratureError) -> CliError {
    match e {
        QuadratureError::ToleranceNotReached { .. } => {
            CliError::new("tolerance", e.to_string(), "quadrature")
        }
        QuadratureError::Domain(_) => CliError::new("domain", e.to_string(), "weights"),
    }
}

// ---------------------------------------------------------------------------
// commands

fn cmd_validate(a: ValidateArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let report = ctx.polytope.validate_delzant();
    let code = if report.pass { 0 } else { 2 };
    let body = json!({
        "pass": report.pass,
        "failures": serde_json::to_value(&report.failures).expect("failures serialize"),
        "vertices": ctx.polytope.vertices().iter()
            .map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "volume": rat_to_string(&ctx.polytope.volume()),
    });
    let out = ctx.common.out.clone();
    Ok((ctx.envelope("validate", json!({}), body), out, code))
}

fn cmd_integrate(a: IntegrateArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let tol = ctx.common.tol;
    let interior = quadrature::integrate_weight(&ctx.polytope, &v, tol).map_err(map_quadrature)?;
    let boundary =
        quadrature::integrate_weight_boundary(&ctx.polytope, &v, tol).map_err(map_quadrature)?;
    let body = json!({
        "volume": rat_to_string(&ctx.polytope.volume()),
        "barycenter": ctx.polytope.barycenter().iter().map(rat_to_string).collect::<Vec<_>>(),
        "interior": integral_json(&interior),
        "boundary": integral_json(&boundary),
    });
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope("integrate", json!({"v": a.v}), body),
        out,
        0,
    ))
}

fn integral_json(r: &quadrature::IntegralResult) -> Value {
    json!({
        "value": r.value,
        "error_bound": r.error_bound,
        "exact": r.exact.as_ref().map(rat_to_string),
    })
}

fn cmd_futaki(a: FutakiArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w = ctx.weight(&a.w, "--w")?;
    let tol = ctx.common.tol;
    let (report, test_fn) = match (&a.ell, &a.f) {
        (Some(ell), None) => {
            let ell = parse_ell(ell, ctx.dim(), "--ell")?;
            let r = futaki::futaki_affine(&ctx.polytope, &v, &w, &ell, tol).map_err(map_futaki)?;
            (r, json!({"ell": a.ell}))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::new("io", format!("cannot read PL function: {e}"), path.display().to_string())
            })?;
            let f = PlDto::parse(&text)
                .and_then(|d| d.to_pl(ctx.dim()))
                .map_err(|e| map_json(e, "--f"))?;
            let r = futaki::futaki_pl(&ctx.polytope, &v, &w, &f, tol).map_err(map_futaki)?;
            (r, json!({"f": path.display().to_string()}))
        }
        _ => {
            return Err(CliError::new(
                "parse",
                "futaki needs exactly one of --ell or --f",
                "--ell/--f",
            ))
        }
    };
    let body = futaki_report_json(&report);
    let mut extra = json!({"v": a.v, "w": a.w});
    merge(&mut extra, test_fn);
    let out = ctx.common.out.clone();
    Ok((ctx.envelope("futaki", extra, body), out, 0))
}

fn merge(target: &mut Value, add: Value) {
    if let (Some(t), Some(a)) = (target.as_object_mut(), add.as_object()) {
        for (k, v) in a {
            t.insert(k.clone(), v.clone());
        }
    }
}

fn cmd_extremal(a: ExtremalArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w0 = ctx.weight(&a.w0, "--w0")?;
    let sol = futaki::extremal_affine(&ctx.polytope, &v, &w0, ctx.common.tol)
        .map_err(map_futaki)?;
    let body = json!({
        "ell_ext": {
            "normal": sol.ell.linear.iter().map(rat_to_string).collect::<Vec<_>>(),
            "offset": rat_to_string(&sol.ell.offset),
        },
        "residuals": sol.residuals,
        "condition": sol.condition,
        "exact": sol.exact,
    });
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope("extremal", json!({"v": a.v, "w0": a.w0}), body),
        out,
        0,
    ))
}

fn cmd_normalize(a: NormalizeArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w = ctx.weight(&a.w, "--w")?;
    let tol = ctx.common.tol;
    let residual = futaki::normalization_residual(&ctx.polytope, &v, &w, tol)
        .map_err(map_futaki)?;
    let normalized = futaki::normalize_w(&ctx.polytope, &v, &w, tol).map_err(map_futaki)?;
    let body = json!({
        "residual": futaki_report_json(&residual),
        "shift": normalized.shift,
        "shift_exact": normalized.shift_exact.as_ref().map(rat_to_string),
        "w_normalized": weight_json(&normalized.w),
    });
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope("normalize", json!({"v": a.v, "w": a.w}), body),
        out,
        0,
    ))
}

fn cmd_check_stability(a: StabilityArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w = ctx.weight(&a.w, "--w")?;
    let x0 = ctx.x0()?;
    let depth = ctx.common.grid_depth;
    let report = match &a.fano_scale {
        Some(t) => {
            let t = parse_rat(t).map_err(|e| CliError::new("parse", e.to_string(), "--fano-scale"))?;
            stability::fano_condition(&ctx.polytope, &v, &w, x0, t, depth)
                .map_err(map_stability)?
        }
        None => stability::sufficient_condition(&ctx.polytope, &v, &w, x0, depth)
            .map_err(map_stability)?,
    };
    let code = if report.holds() { 0 } else { 2 };
    let body = stability_report_json(&report);
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope(
            "check-stability",
            json!({"v": a.v, "w": a.w, "fano_scale": a.fano_scale}),
            body,
        ),
        out,
        code,
    ))
}

fn cmd_search(a: SearchArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w = ctx.weight(&a.w, "--w")?;
    let x0 = ctx.x0()?;
    let report = stability::destabilizer_search(
        &ctx.polytope,
        &v,
        &w,
        x0,
        ctx.common.slope_bound,
        ctx.common.offsets,
        ctx.common.tol,
    )
    .map_err(map_stability)?;
    let code = if report.all_positive { 0 } else { 2 };
    let body = destabilizer_report_json(&report);
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope("search-destabilizer", json!({"v": a.v, "w": a.w}), body),
        out,
        code,
    ))
}

fn cmd_fibration(a: FibrationArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let v = ctx.weight(&a.v, "--v")?;
    let w = ctx.weight(&a.w, "--w")?;
    let text = std::fs::read_to_string(&a.fibration).map_err(|e| {
        CliError::new(
            "io",
            format!("cannot read fibration: {e}"),
            a.fibration.display().to_string(),
        )
    })?;
    let data = FibrationDto::parse(&text)
        .and_then(|d| d.to_data(ctx.dim()))
        .map_err(|e| map_json(e, "--fibration"))?;
    let positivity = wkstab::fibration::check_positivity(&ctx.polytope, &data);
    let pair = wkstab::fibration::fibration_weights(&ctx.polytope, &data, &v, &w)
        .map_err(map_fibration)?;
    let mut body = json!({
        "positivity": {
            "pass": positivity.pass,
            "per_factor": positivity.per_factor.iter().map(|f| json!({
                "factor": f.factor,
                "min": rat_to_string(&f.min),
                "argmin": f.argmin.iter().map(rat_to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        },
        "v_transformed": weight_json(&pair.v),
        "w_transformed": weight_json(&pair.w),
        "v_positivity": positivity_json(pair.v_positivity.as_ref()),
        "v_log_concavity": log_concavity_json(pair.v_log_concavity.as_ref()),
    });
    let mut code = 0;
    if a.stability {
        let x0 = ctx.x0()?;
        let fs = wkstab::fibration::fibered_stability(
            &ctx.polytope,
            &data,
            &v,
            &w,
            x0,
            ctx.common.grid_depth,
            ctx.common.slope_bound,
            ctx.common.offsets,
            ctx.common.tol,
        )
        .map_err(map_fibration)?;
        merge(
            &mut body,
            json!({
                "stability": stability_report_json(&fs.stability),
                "destabilizer": destabilizer_report_json(&fs.destabilizer),
            }),
        );
        if !fs.stability.holds() || !fs.destabilizer.all_positive {
            code = 2;
        }
    }
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope(
            "fibration",
            json!({
                "v": a.v,
                "w": a.w,
                "fibration": a.fibration.display().to_string(),
                "stability": a.stability,
            }),
            body,
        ),
        out,
        code,
    ))
}

fn positivity_json(s: Option<&PositivityStatus>) -> Value {
    match s {
        None => Value::Null,
        Some(PositivityStatus::Certified) => json!({"kind": "certified"}),
        Some(PositivityStatus::SampledPositive { min, argmin }) => {
            json!({"kind": "sampled_positive", "min": min, "argmin": argmin})
        }
        Some(PositivityStatus::FailedAt { at, value }) => {
            json!({"kind": "failed", "at": at, "value": value})
        }
    }
}

fn log_concavity_json(s: Option<&LogConcavityStatus>) -> Value {
    match s {
        None => Value::Null,
        Some(LogConcavityStatus::Certified) => json!({"kind": "certified"}),
        Some(LogConcavityStatus::SampledConcave { max_eigenvalue }) => {
            json!({"kind": "sampled_concave", "max_eigenvalue": max_eigenvalue})
        }
        Some(LogConcavityStatus::FailedAt { at, eigenvalue }) => {
            json!({"kind": "failed", "at": at, "eigenvalue": eigenvalue})
        }
    }
}

fn cmd_weights(a: WeightsArgs) -> Result<(Value, Option<PathBuf>, i32), CliError> {
    let ctx = Context::new(a.common)?;
    let n = ctx.dim();
    let depth = ctx.common.grid_depth;
    let (result, checks) = match a.family.as_str() {
        "soliton" => {
            let v_spec = a.v.as_deref().ok_or_else(|| {
                CliError::new("parse", "soliton family needs --v", "--v")
            })?;
            let v = ctx.weight(v_spec, "--v")?;
            let w = soliton_w(&v, n);
            let checks = json!({
                "v_positivity": positivity_json(Some(&is_positive_on(&v, &ctx.polytope, depth))),
                "identity_sup_error": sup_error_on_grid(
                    &w,
                    &WeightExpr::product(vec![
                        WeightExpr::scalar_i64(2), v.clone(), tilde_v(&v, n),
                    ]),
                    &ctx.polytope,
                    depth,
                ).ok(),
            });
            (json!({"w": weight_json(&w)}), checks)
        }
        "tilde-v" => {
            let v_spec = a.v.as_deref().ok_or_else(|| {
                CliError::new("parse", "tilde-v family needs --v", "--v")
            })?;
            let v = ctx.weight(v_spec, "--v")?;
            let t = tilde_v(&v, n);
            (json!({"tilde_v": weight_json(&t)}), json!({}))
        }
        "cone" => {
            let ell_spec = a.ell.as_deref().ok_or_else(|| {
                CliError::new("parse", "cone family needs --ell", "--ell")
            })?;
            let ell = parse_ell(ell_spec, n, "--ell")?;
            let a_const =
                parse_rat(&a.a).map_err(|e| CliError::new("parse", e.to_string(), "--a"))?;
            let pair = cone_weights(&ell, a_const, n, &ctx.polytope)
                .map_err(|e| CliError::new("math", e.to_string(), "--ell"))?;
            (
                json!({"v": weight_json(&pair.v), "w": weight_json(&pair.w)}),
                json!({"v_positivity": positivity_json(pair.v_positivity.as_ref())}),
            )
        }
        "bernstein" => {
            let v_spec = a.v.as_deref().ok_or_else(|| {
                CliError::new("parse", "bernstein family needs --v (the sampled weight)", "--v")
            })?;
            let v = ctx.weight(v_spec, "--v")?;
            let compiled = v.compile();
            let (lo, hi) = ctx.polytope.bounding_box();
            let poly = bernstein_approx(
                |x| compiled.eval(x).unwrap_or(f64::NAN),
                &lo,
                &hi,
                a.degree,
            );
            let approx = WeightExpr::poly(poly);
            let sup = sup_error_on_grid(&v, &approx, &ctx.polytope, depth)
                .map_err(|e| CliError::new("domain", e.to_string(), "--v"))?;
            (
                json!({"bernstein": weight_json(&approx)}),
                json!({"sup_grid_error": sup, "degree": a.degree}),
            )
        }
        other => {
            return Err(CliError::new(
                "parse",
                format!("unknown family {other:?}; use soliton | tilde-v | cone | bernstein"),
                "--family",
            ))
        }
    };
    let mut body = result;
    merge(&mut body, json!({"checks": checks}));
    // log-concavity report for constructed v-side weights when available
    if let Some(v_spec) = &a.v {
        if a.family == "soliton" || a.family == "tilde-v" {
            let v = ctx.weight(v_spec, "--v")?;
            if let Ok(status) = is_log_concave_on(&v, &ctx.polytope, depth, 1e-9) {
                merge(
                    &mut body,
                    json!({"v_log_concavity": log_concavity_json(Some(&status))}),
                );
            }
        }
    }
    let out = ctx.common.out.clone();
    Ok((
        ctx.envelope(
            "weights",
            json!({
                "family": a.family,
                "v": a.v,
                "ell": a.ell,
                "a": a.a,
                "degree": a.degree,
            }),
            body,
        ),
        out,
        0,
    ))
}
