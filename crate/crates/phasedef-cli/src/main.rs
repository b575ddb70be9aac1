mod config;

use clap::{Parser, Subcommand, ValueEnum};
use config::FileConfig;
use phasedef::cohomology::{cohomology_dim, heisenberg_split, invariant_cocycles};
use phasedef::deformation::{classify_complex, classify_real};
use phasedef::flow::{simulate_free_motion, FlowSettings};
use phasedef::grassmann::{plucker, plucker_residuals, point_to_plane, BivectorCoords, Normalization, OrientedPlane};
use phasedef::lie::{build_deformed, build_standard, phase_space_labels, AlgebraKind};
use phasedef::orbit::{
    chart_to_point, compare_with_printed, darboux_momenta, free_hamiltonian, liouville_form, momentum_maps, orbit_casimir,
    orbit_residuals, poisson_rank, quadratic_casimirs, symplectic_matrix, Branch, ChartPoint, DualPoint, OrbitSpec,
    PoissonStructure,
};
use phasedef::verify::{run_suite, suite_passed, Suite, VerifyConfig};
use phasedef::{DeformationParams, Tolerances};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const OUT_DIR_ENV: &str = "PHASEDEF_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "phasedef", version, about = "Deformed phase-space Lie algebras: cohomology, strata, orbits and flows")]
struct Cli {
    /// Flat `key = value` file; keys mirror flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write artifacts here instead of stdout (default from PHASEDEF_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    #[arg(long, global = true)]
    tol_drift: Option<f64>,
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    #[arg(long, global = true)]
    tol_growth: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Positive,
    Negative,
}

impl std::str::FromStr for BranchArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <BranchArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NormArg {
    None,
    Chart,
    Orbit,
}

impl std::str::FromStr for NormArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <NormArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Lie algebra cohomology with adjoint coefficients.
    Cohomology {
        /// g, e, h or o.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        /// Rotation-invariant classes over the non-rotation ideal instead.
        #[arg(long)]
        invariant: bool,
    },
    /// Stratum, real form and normal form of g_n(eps).
    Classify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        /// Complex classification only.
        #[arg(long)]
        complex: bool,
        /// Include the structure constants.
        #[arg(long)]
        table: bool,
    },
    /// Central quadratics and the comparison with the printed convention.
    Casimir {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
    },
    /// Orbit data at a chart point of (0, eps2, 0) or at an explicit dual point.
    Orbit {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Dual coordinates in frozen order, instead of a chart point.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        #[arg(long)]
        level: Option<f64>,
    },
    /// RK4 free motion from a chart point.
    Simulate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long = "T")]
        t_end: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Keep every k-th step in the output.
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
    },
    /// Plücker coordinates of a plane, or a plane from a bivector.
    Grassmann {
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// Bivector in frozen order l_ij, x_i, p_i, I.
        #[arg(long, allow_hyphen_values = true)]
        bivector: Option<String>,
        #[arg(long, value_enum)]
        normalize: Option<NormArg>,
        /// Parameters for orbit normalization.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long)]
        level: Option<f64>,
    },
    /// Run the property suite and print a PASS/FAIL/WARN table.
    Verify {
        /// all, acceptance, properties or discrepancies.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(phasedef::Error),
    Io(String),
}

impl From<phasedef::Error> for CliError {
    fn from(e: phasedef::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => e.code(),
            CliError::Io(_) => "io",
        }
    }
    fn message(&self) -> String {
        match self {
            CliError::Usage(s) | CliError::Io(s) => s.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

fn usage(s: impl Into<String>) -> CliError {
    CliError::Usage(s.into())
}

struct Ctx {
    file: FileConfig,
    out_dir: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    tol: Tolerances,
}

impl Ctx {
    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.file.pick(flag, key).map_err(CliError::Usage)
    }

    fn need<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?.ok_or_else(|| usage(format!("missing --{key}")))
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(self.pick(flag.then_some(true), key)?.unwrap_or(false))
    }

    fn params(&self, n: Option<usize>, eps: Option<String>) -> Result<DeformationParams, CliError> {
        let n = self.need(n, "n")?;
        let eps = self.need(eps, "eps")?;
        Ok(DeformationParams::parse(n, &eps)?)
    }

    /// Writes to the output directory when one is configured, else to stdout.
    fn emit(&self, name: &str, body: &str) -> Result<(), CliError> {
        match &self.out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                println!("{}", json!({ "written": path.display().to_string() }));
            }
            None => print!("{body}"),
        }
        Ok(())
    }

    fn emit_json(&self, name: &str, v: &Value) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        self.emit(&format!("{name}.json"), &s)
    }
}

fn floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("'{t}': {e}"))))
        .collect()
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn branch_of(b: Option<BranchArg>) -> Branch {
    match b {
        Some(BranchArg::Negative) => Branch::Negative,
        _ => Branch::Positive,
    }
}

fn cmd_cohomology(ctx: &Ctx, algebra: Option<String>, n: Option<usize>, degree: Option<usize>, invariant: bool) -> Result<ExitCode, CliError> {
    let name = ctx.pick(algebra, "algebra")?.unwrap_or_else(|| "g".into());
    let kind: AlgebraKind = name.parse()?;
    let n = ctx.need(n, "n")?;
    let degree = ctx.pick(degree, "degree")?.unwrap_or(2);
    let invariant = ctx.flag(invariant, "invariant")?;
    let g = build_standard(kind, n)?;
    let result = if invariant {
        if degree != 2 {
            return Err(usage("invariant classes are computed in degree 2"));
        }
        let (h, k) = heisenberg_split(&g);
        invariant_cocycles(&g, &h, &k)?
    } else {
        cohomology_dim(&g, degree)?
    };
    let mut v = to_value(&result.to_json());
    v["algebra"] = json!(name);
    v["n"] = json!(n);
    v["dim"] = json!(g.dim());
    v["invariant"] = json!(invariant);
    ctx.emit_json("cohomology", &v)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(ctx: &Ctx, n: Option<usize>, eps: Option<String>, complex: bool, table: bool) -> Result<ExitCode, CliError> {
    let p = ctx.params(n, eps)?;
    let mut v = if ctx.flag(complex, "complex")? { to_value(&classify_complex(&p)?) } else { to_value(&classify_real(&p)?) };
    if ctx.flag(table, "table")? {
        v["structure_constants"] = to_value(&build_deformed(&p).to_json());
    }
    ctx.emit_json("classify", &v)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_casimir(ctx: &Ctx, n: Option<usize>, eps: Option<String>) -> Result<ExitCode, CliError> {
    let p = ctx.params(n, eps)?;
    let g = build_deformed(&p);
    let ks: Vec<Value> = quadratic_casimirs(&p).iter().map(|k| to_value(&k.to_json(&g))).collect();
    let v = json!({
        "eps": to_value(&p)["eps"],
        "n": p.n,
        "dimension": ks.len(),
        "casimirs": ks,
        "comparison": to_value(&compare_with_printed(&p)?),
    });
    ctx.emit_json("casimir", &v)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_orbit(
    ctx: &Ctx,
    n: Option<usize>,
    eps: Option<String>,
    q: Option<String>,
    p: Option<String>,
    point: Option<String>,
    branch: Option<BranchArg>,
    level: Option<f64>,
) -> Result<ExitCode, CliError> {
    let params = ctx.params(n, eps)?;
    let branch = branch_of(ctx.pick(branch, "branch")?);
    let level = ctx.pick(level, "level")?.unwrap_or(1.0);
    let spec = OrbitSpec::new(&params, level)?;
    let ps = PoissonStructure::for_params(&params);
    let mut v = json!({ "eps": to_value(&params)["eps"], "n": params.n, "level": level });
    let pt = match ctx.pick(point, "point")? {
        Some(s) => DualPoint::new(&params, floats(&s)?)?,
        None => {
            let chart = ChartPoint::new(floats(&ctx.need(q, "q")?)?, floats(&ctx.need(p, "p")?)?)?;
            if level != 1.0 {
                return Err(usage("chart points lie on the level-1 orbit"));
            }
            let pt = chart_to_point(&params, &chart, branch)?;
            let eps2 = params.to_f64()[1];
            let om = symplectic_matrix(eps2, &chart)?;
            v["branch"] = to_value(&branch);
            v["chart"] = to_value(&chart);
            v["darboux_momenta"] = json!(darboux_momenta(eps2, &chart)?);
            v["liouville_form"] = json!(liouville_form(eps2, &chart)?);
            v["symplectic_matrix"] = json!((0..om.nrows()).map(|i| om.row(i).iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>());
            pt
        }
    };
    let labels: Vec<String> = phase_space_labels(params.n).iter().map(ToString::to_string).collect();
    v["point"] = json!({ "labels": labels, "coords": pt.coords });
    v["residuals"] = to_value(&orbit_residuals(&spec, &pt)?);
    v["casimir_value"] = json!(orbit_casimir(&params)?.eval(&pt.coords));
    v["poisson_rank"] = json!(poisson_rank(&ps, &pt.coords, ctx.tol.rank_rel));
    v["free_hamiltonian"] = json!(free_hamiltonian(&pt));
    v["momentum"] = to_value(&momentum_maps(&pt));
    ctx.emit_json("orbit", &v)?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ctx: &Ctx,
    n: Option<usize>,
    eps: Option<String>,
    q: Option<String>,
    p: Option<String>,
    t_end: Option<f64>,
    dt: Option<f64>,
    stride: Option<usize>,
    branch: Option<BranchArg>,
) -> Result<ExitCode, CliError> {
    let params = ctx.params(n, eps)?;
    let chart = ChartPoint::new(floats(&ctx.need(q, "q")?)?, floats(&ctx.need(p, "p")?)?)?;
    let settings = FlowSettings {
        t_end: ctx.pick(t_end, "T")?.unwrap_or(10.0),
        dt: ctx.pick(dt, "dt")?.unwrap_or(1e-3),
        stride: ctx.pick(stride, "stride")?.unwrap_or(1),
    };
    let branch = branch_of(ctx.pick(branch, "branch")?);
    let (traj, manifest) = simulate_free_motion(&params, &chart, branch, settings, ctx.tol, ctx.seed)?;
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    let csv = String::from_utf8(csv).expect("utf8");
    let manifest_json = to_value(&manifest);
    match (ctx.format.unwrap_or(Format::Csv), &ctx.out_dir) {
        (_, Some(_)) => {
            ctx.emit("trajectory.csv", &csv)?;
            ctx.emit_json("run_manifest", &manifest_json)?;
        }
        (Format::Json, None) => ctx.emit_json("run_manifest", &manifest_json)?,
        (_, None) => {
            ctx.emit("trajectory.csv", &csv)?;
            eprintln!("{}", json!({ "drift": manifest_json["drift"], "collinearity": manifest_json["collinearity"] }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_grassmann(
    ctx: &Ctx,
    u: Option<String>,
    v: Option<String>,
    bivector: Option<String>,
    normalize: Option<NormArg>,
    eps: Option<String>,
    level: Option<f64>,
) -> Result<ExitCode, CliError> {
    let labels = |n: usize| phase_space_labels(n).iter().map(ToString::to_string).collect::<Vec<_>>();
    if let Some(b) = ctx.pick(bivector, "bivector")? {
        let coords = floats(&b)?;
        let n = (1..64).find(|&n| n * (n - 1) / 2 + 2 * n + 1 == coords.len()).ok_or_else(|| usage("bivector length is not n(n-1)/2 + 2n + 1"))?;
        let b = BivectorCoords::new(n, coords)?;
        let plane = point_to_plane(&b, ctx.tol.residual)?;
        let back = plucker(&plane, Normalization::None)?;
        let out = json!({
            "n": n,
            "plane": plane.rows(),
            "plucker_residual": plucker_residuals(&b),
            "roundtrip_error": b.coords.iter().zip(&back.coords).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        });
        ctx.emit_json("grassmann", &out)?;
        return Ok(ExitCode::SUCCESS);
    }
    let plane = OrientedPlane::new(floats(&ctx.need(u, "u")?)?, floats(&ctx.need(v, "v")?)?)?;
    let n = plane.n();
    let mode = ctx.pick(normalize, "normalize")?.unwrap_or(NormArg::None);
    let casimir;
    let norm = match mode {
        NormArg::None => Normalization::None,
        NormArg::Chart => Normalization::ChartU,
        NormArg::Orbit => {
            let eps = ctx.pick(eps, "eps")?.unwrap_or_else(|| "1,1,0".into());
            casimir = orbit_casimir(&DeformationParams::parse(n, &eps)?)?;
            Normalization::Orbit { casimir: &casimir, level: ctx.pick(level, "level")?.unwrap_or(1.0) }
        }
    };
    let b = plucker(&plane, norm)?;
    let out = json!({
        "n": n,
        "plane": plane.rows(),
        "normalization": format!("{mode:?}").to_lowercase(),
        "bivector": { "labels": labels(n), "coords": b.coords },
        "plucker_residual": plucker_residuals(&b),
    });
    ctx.emit_json("grassmann", &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(ctx: &Ctx, suite: Option<String>) -> Result<ExitCode, CliError> {
    let suite: Suite = ctx.pick(suite, "suite")?.unwrap_or_else(|| "all".into()).parse()?;
    let mut cfg = VerifyConfig { tolerances: ctx.tol, ..VerifyConfig::default() };
    if let Some(s) = ctx.seed {
        cfg.seed = s;
    }
    let results = run_suite(suite, &cfg);
    let passed = suite_passed(&results);
    match ctx.format.unwrap_or(Format::Table) {
        Format::Json => ctx.emit_json("verify", &json!({ "passed": passed, "seed": cfg.seed, "checks": to_value(&results) }))?,
        _ => {
            let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
            s.push_str(if passed { "suite passed\n" } else { "suite FAILED\n" });
            ctx.emit("verify.txt", &s)?;
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn build_ctx(cli: &Cli) -> Result<Ctx, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };
    let out_dir = match &cli.out_dir {
        Some(d) => Some(d.clone()),
        None => file.get("out-dir").map(PathBuf::from).or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)),
    };
    let mut ctx = Ctx { file, out_dir, format: None, seed: None, tol: Tolerances::default() };
    ctx.format = ctx.pick(cli.format, "format")?;
    ctx.seed = ctx.pick(cli.seed, "seed")?;
    let t = &mut ctx.tol.clone();
    for (flag, key, slot) in [
        (cli.tol_residual, "tol-residual", &mut t.residual),
        (cli.tol_drift, "tol-drift", &mut t.drift),
        (cli.tol_rank, "tol-rank", &mut t.rank_rel),
        (cli.tol_growth, "tol-growth", &mut t.growth),
    ] {
        if let Some(v) = ctx.pick(flag, key)? {
            if !(v > 0.0) {
                return Err(usage(format!("--{key} must be positive")));
            }
            *slot = v;
        }
    }
    ctx.tol = *t;
    Ok(ctx)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let ctx = build_ctx(&cli)?;
    match cli.cmd {
        Cmd::Cohomology { algebra, n, degree, invariant } => cmd_cohomology(&ctx, algebra, n, degree, invariant),
        Cmd::Classify { n, eps, complex, table } => cmd_classify(&ctx, n, eps, complex, table),
        Cmd::Casimir { n, eps } => cmd_casimir(&ctx, n, eps),
        Cmd::Orbit { n, eps, q, p, point, branch, level } => cmd_orbit(&ctx, n, eps, q, p, point, branch, level),
        Cmd::Simulate { n, eps, q, p, t_end, dt, stride, branch } => cmd_simulate(&ctx, n, eps, q, p, t_end, dt, stride, branch),
        Cmd::Grassmann { u, v, bivector, normalize, eps, level } => cmd_grassmann(&ctx, u, v, bivector, normalize, eps, level),
        Cmd::Verify { suite } => cmd_verify(&ctx, suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", json!({ "error": { "code": "usage", "message": msg.trim() } }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", json!({ "error": { "code": e.code(), "message": e.message() } }));
            ExitCode::from(2)
        }
    }
}
