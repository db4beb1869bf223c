//! `anisofem` command-line tool: mesh generation and inspection, solving,
//! estimating and benchmark tables.

mod family;
mod table;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anisofem::bench::{catalog, run_case, true_errors, CaseId, HessianMode};
use anisofem::estimators::{disc_estimator, efficiency_indices, NormMode};
use anisofem::fem::{solve, SolverOptions};
use anisofem::field_io::{load_scalar_field, save_hessian_field, save_scalar_field};
use anisofem::hessian::{exact_hessian, recover_hessian_qf};
use anisofem::mesh::{
    generate_graded, generate_l_shape, generate_uniform, load_mesh, parse_triangle, write_mesh, Grading, Mesh, Rect,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use family::MeshSpec;
use table::Format;

#[derive(Parser, Debug)]
#[command(name = "anisofem", version, about = "P1 finite elements with Hessian-based error estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate, inspect or convert meshes.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Solve a catalog case on a mesh and write the nodal solution.
    Solve(SolveArgs),
    /// Evaluate the estimators for a stored solution.
    Estimate(EstimateArgs),
    /// Run a case over a mesh sequence and tabulate efficiency indices.
    Bench(BenchArgs),
}

#[derive(Subcommand, Debug)]
enum MeshCommand {
    Gen(GenArgs),
    /// Print counts and element quality of a mesh file.
    Info { path: PathBuf },
    /// Convert a Triangle `.node`/`.ele` pair to the native format.
    Convert {
        #[arg(long)]
        node: PathBuf,
        #[arg(long)]
        ele: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("kind").required(true).args(["uniform", "graded", "l_shape"]))]
struct GenArgs {
    /// Uniform n × n grid, each square split along its (0,0)-(1,1) diagonal.
    #[arg(long, value_name = "N")]
    uniform: Option<usize>,
    /// Grid with spacing compressed toward a line.
    #[arg(long, value_name = "N")]
    graded: Option<usize>,
    /// Uniform mesh of the L-shaped domain with 2n × 2n squares in its hull.
    #[arg(long, value_name = "N")]
    l_shape: Option<usize>,
    /// Normal direction of the line, in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    angle: f64,
    /// Offset of the line along the normal direction.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    target: f64,
    /// Spacing shrinks by 1 / (1 + strength) at the line.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    strength: f64,
    #[arg(long, default_value_t = 0.05)]
    width: f64,
    /// Rectangle as x0,y0,x1,y1.
    #[arg(long, value_parser = parse_domain, default_value = "0,0,1,1", allow_hyphen_values = true)]
    domain: Rect<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    #[arg(long)]
    mesh: PathBuf,
    /// Nodal solution file.
    #[arg(long)]
    out: PathBuf,
    /// Also write the recovered nodal Hessian.
    #[arg(long)]
    hessian_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    #[arg(long)]
    mesh: PathBuf,
    /// Nodal solution file written by `solve`.
    #[arg(long)]
    field: PathBuf,
    #[arg(long, value_enum, default_value_t = HessianChoice::Recovered)]
    hessian: HessianChoice,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    /// `uniform:N,N,...`, `graded:NxS,NxS,...` or `files:PATH,PATH,...`.
    #[arg(long, value_parser = MeshSpec::parse)]
    meshes: MeshSpec,
    #[arg(long, value_enum, default_value_t = HessianChoice::Both)]
    hessian: HessianChoice,
    /// Normal direction of the graded layer, in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    angle: f64,
    #[arg(long, default_value_t = 0.85, allow_negative_numbers = true)]
    target: f64,
    #[arg(long, default_value_t = 0.05)]
    width: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Table file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Long-format CSV of the indices against N, for plotting.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HessianChoice {
    Exact,
    Recovered,
    Both,
}

impl From<HessianChoice> for HessianMode {
    fn from(c: HessianChoice) -> Self {
        match c {
            HessianChoice::Exact => HessianMode::Exact,
            HessianChoice::Recovered => HessianMode::Recovered,
            HessianChoice::Both => HessianMode::Both,
        }
    }
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse().map_err(|e: anisofem::Error| e.to_string())
}

fn parse_domain(s: &str) -> Result<Rect<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}`")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] if x1 > x0 && y1 > y0 => Ok(Rect::new(x0, y0, x1, y1)),
        [_, _, _, _] => Err("domain needs x1 > x0 and y1 > y0".into()),
        _ => Err("domain must be x0,y0,x1,y1".into()),
    }
}

type CliResult<T = ()> = Result<T, Box<dyn std::error::Error>>;

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn solver_options(tol: f64) -> CliResult<SolverOptions<f64>> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err("solver tolerance must lie in (0, 1)".into());
    }
    Ok(SolverOptions { tol, max_iter: None })
}

fn mesh_gen(a: &GenArgs) -> CliResult {
    let mesh = match (a.uniform, a.graded, a.l_shape) {
        (Some(n), _, _) => generate_uniform(n, a.domain)?,
        (_, Some(n), _) => generate_graded(n, a.domain, Grading::toward(a.angle, a.target, a.strength, a.width))?,
        (_, _, Some(n)) => generate_l_shape(n)?,
        _ => unreachable!("clap enforces one mesh kind"),
    };
    write_mesh(&mesh, output(a.out.as_deref())?)?;
    Ok(())
}

fn mesh_info(path: &Path) -> CliResult {
    let mesh: Mesh<f64> = load_mesh(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..mesh.num_cells() {
        let a = mesh.geometry(k).aspect;
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let boundary = (0..mesh.num_vertices()).filter(|&v| mesh.is_boundary_vertex(v)).count();
    let mut out = io::stdout().lock();
    writeln!(out, "{} vertices, {} cells", mesh.num_vertices(), mesh.num_cells())?;
    writeln!(out, "{} edges, {} boundary vertices", mesh.num_edges(), boundary)?;
    writeln!(out, "area {}", mesh.area())?;
    writeln!(out, "aspect ratio min {lo:.6} max {hi:.6}")?;
    Ok(())
}

fn mesh_convert(node: &Path, ele: &Path, out: Option<&Path>) -> CliResult {
    let mesh: Mesh<f64> = parse_triangle(&fs::read_to_string(node)?, &fs::read_to_string(ele)?)?;
    write_mesh(&mesh, output(out)?)?;
    Ok(())
}

fn cmd_solve(a: &SolveArgs) -> CliResult {
    let case = catalog::<f64>(a.case);
    let mesh: Mesh<f64> = load_mesh(&a.mesh).map_err(|e| format!("{}: {e}", a.mesh.display()))?;
    let u_h = solve(&mesh, &case.problem, solver_options(a.tol)?)?;
    save_scalar_field(&u_h, &a.out)?;
    if let Some(path) = &a.hessian_out {
        save_hessian_field(&recover_hessian_qf(&mesh, &u_h)?, path)?;
    }
    Ok(())
}

fn cmd_estimate(a: &EstimateArgs) -> CliResult {
    let case = catalog::<f64>(a.case);
    let mesh: Mesh<f64> = load_mesh(&a.mesh).map_err(|e| format!("{}: {e}", a.mesh.display()))?;
    let u_h = load_scalar_field(&a.field).map_err(|e| format!("{}: {e}", a.field.display()))?;
    if u_h.len() != mesh.num_vertices() {
        return Err(format!("field has {} values but the mesh has {} vertices", u_h.len(), mesh.num_vertices()).into());
    }
    let errors = true_errors(&mesh, &case.problem, &u_h).ok();
    let mut out = io::stdout().lock();
    let mut report = |label: &str, h| -> CliResult {
        let r = disc_estimator(&mesh, &u_h, &h, &case.problem)?;
        writeln!(out, "[{label} Hessian]")?;
        writeln!(out, "eta_I {:.6e}", r.eta_i)?;
        writeln!(out, "eta_I0 {:.6e}", r.eta_i0)?;
        writeln!(out, "eta_sq_signed {:.6e}", r.eta_disc_sq_signed)?;
        if let Some(e) = &errors {
            let eff = efficiency_indices(&r, e, NormMode::for_problem(&case.problem))?;
            writeln!(out, "E {:.6}", eff.e)?;
            writeln!(out, "EI {:.6}", eff.ei)?;
        }
        Ok(())
    };
    let mode = HessianMode::from(a.hessian);
    if matches!(mode, HessianMode::Exact | HessianMode::Both) {
        report("exact", exact_hessian(&mesh, &case.problem)?)?;
    }
    if matches!(mode, HessianMode::Recovered | HessianMode::Both) {
        report("recovered", recover_hessian_qf(&mesh, &u_h)?)?;
    }
    if let Some(e) = &errors {
        writeln!(out, "grad_err {:.6e}", e.grad_err)?;
        writeln!(out, "l2_err {:.6e}", e.l2_err)?;
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> CliResult {
    let case = catalog::<f64>(a.case);
    let meshes = a.meshes.build(case.domain, a.angle, a.target, a.width)?;
    let run = run_case(&case, &meshes, a.hessian.into(), solver_options(a.tol)?);
    let mut out = output(a.out.as_deref())?;
    table::write(&mut out, &run.rows, a.format)?;
    out.flush()?;
    if let Some(path) = &a.plot {
        let mut plot = output(Some(path))?;
        table::write_plot(&mut plot, &run.rows)?;
        plot.flush()?;
    }
    match run.error {
        Some(e) => Err(format!("step {}: {e}", run.rows.len() + 1).into()),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Mesh(MeshCommand::Gen(a)) => mesh_gen(&a),
        Command::Mesh(MeshCommand::Info { path }) => mesh_info(&path),
        Command::Mesh(MeshCommand::Convert { node, ele, out }) => mesh_convert(&node, &ele, out.as_deref()),
        Command::Solve(a) => cmd_solve(&a),
        Command::Estimate(a) => cmd_estimate(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
