//! `fracinv`: solve the two inverse source problems from JSON problem files,
//! plot the results, and run the verification suites.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical error,
//! 3 failed verification checks.

mod expr;
mod plot;
mod problem;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fracinv::field::{profile_from_csv, GridFunction};
use fracinv::fracops::{caputo_deriv_num, rl_deriv_num_with, rl_integral_num, RlDerivMethod, TimeGrid};
use fracinv::legendre::legendre_p;
use fracinv::specfun::{gamma_fn, gen_mittag_leffler_with, ln_gamma, mittag_leffler_with, rgamma, GenMLParams, MLParams, Tolerance};
use fracinv::verify::{report_json, run_suite, Suite, DEFAULT_SEED};

use crate::expr::Expr;
use crate::plot::{line_plot, Series};
use crate::problem::{Meta, Problem};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Output(String),
    #[error(transparent)]
    Numeric(#[from] fracinv::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Output(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "fracinv", version, about = "Inverse source problems for degenerate time-fractional diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and write U.csv, h.csv and meta.json
    Solve(SolveArgs),
    /// Draw SVG plots from one or more `solve` output directories
    Plot(PlotArgs),
    /// Run a verification suite; exits 3 if any check fails
    Verify(VerifyArgs),
    /// Special-function spot checks
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
    /// Numerical fractional operators on an expression in t
    Fracops {
        #[command(subcommand)]
        cmd: FracopsCmd,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Problem file (JSON)
    input: PathBuf,
    /// Output directory, created if missing
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Also compute the PDE residual on t in [T/10, T] and write residual.json
    #[arg(long)]
    verify: bool,
    /// Time step of the residual check, as a fraction of T
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
}

#[derive(Args)]
struct PlotArgs {
    /// Output directories of `solve`; several directories give a parameter sweep
    #[arg(required = true)]
    dirs: Vec<PathBuf>,
    /// Times (fractions of T) of the curves in a single-directory plot
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5,0.75,1.0")]
    times: Vec<f64>,
    /// Time (fraction of T) shown in a sweep plot
    #[arg(long, default_value_t = 0.5)]
    at: f64,
    /// Where to write the SVG files; defaults to the first directory
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// specfun, legendre, fracops, problem1, problem2 or all
    suite: String,
    /// Write the JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Seed of the sampled points
    #[arg(long, env = "FRACINV_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecFn {
    /// E_{α,β}(z)
    Ml,
    /// E_{α,m,n}(z)
    Gml,
    Gamma,
    Rgamma,
    Lgamma,
    /// P_n(z)
    Legendre,
}

#[derive(Subcommand)]
enum SpecfunCmd {
    /// Evaluate one function and print value and error estimate as JSON
    Eval {
        #[arg(value_enum)]
        function: SpecFn,
        /// Argument
        #[arg(short, long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        n: f64,
        /// Relative tolerance of the Mittag-Leffler evaluations
        #[arg(long, default_value_t = 1e-14)]
        rtol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FracOp {
    Caputo,
    RlDeriv,
    RlIntegral,
}

#[derive(Subcommand)]
enum FracopsCmd {
    /// Apply a numerical operator to f(t) on a uniform grid and print the value at t
    Eval {
        #[arg(value_enum)]
        op: FracOp,
        /// Function of t in the problem-file grammar
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// RL derivative by differentiating the integral instead of the Caputo correction
        #[arg(long)]
        differentiated: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Plot(a) => cmd_plot(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Specfun { cmd } => cmd_specfun(cmd),
        Command::Fracops { cmd } => cmd_fracops(cmd),
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<(), CliError> {
    let p = Problem::load(&a.input)?;
    let steps = if a.verify {
        if !(a.dt > 0.0 && a.dt <= 0.1) {
            return Err(CliError::Input(format!("--dt must lie in (0, 0.1], got {}", a.dt)));
        }
        Some((1.0 / a.dt).round() as usize)
    } else {
        None
    };
    let s = problem::solve(&p, steps)?;
    problem::write_outputs(&s, &a.out)?;
    for w in &s.meta.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "wrote {} ({} x {} grid, truncation {}, max estimated error {:e})",
        a.out.display(),
        s.u.t.len(),
        s.u.x.len(),
        s.meta.effective_truncation,
        s.meta.max_est_error
    );
    if let Some(r) = s.residual {
        println!("residual {:e} at t = {}, x = {} (dt = {})", r.max_residual, r.at_t, r.at_x, r.dt);
    }
    Ok(())
}

struct Loaded {
    u: GridFunction,
    hx: Vec<f64>,
    h: Vec<f64>,
    meta: Meta,
}

fn load_dir(dir: &Path) -> Result<Loaded, CliError> {
    let read = |name: &str| fs::read_to_string(dir.join(name)).map_err(|e| CliError::Input(format!("{}: {e}", dir.join(name).display())));
    let u = GridFunction::from_csv(&read("U.csv")?).map_err(|e| CliError::Input(format!("U.csv: {e}")))?;
    let (hx, h) = profile_from_csv(&read("h.csv")?).map_err(|e| CliError::Input(format!("h.csv: {e}")))?;
    let meta: Meta = serde_json::from_str(&read("meta.json")?).map_err(|e| CliError::Input(format!("meta.json: {e}")))?;
    if u.t.is_empty() || u.x.is_empty() {
        return Err(CliError::Input(format!("{}: empty grid", dir.display())));
    }
    Ok(Loaded { u, hx, h, meta })
}

fn nearest_row(u: &GridFunction, t: f64) -> usize {
    (0..u.t.len()).min_by(|&i, &j| (u.t[i] - t).abs().total_cmp(&(u.t[j] - t).abs())).unwrap_or(0)
}

fn u_name(m: &Meta) -> &'static str {
    match m.input.problem {
        problem::ProblemKind::SpaceDegenerate => "U",
        problem::ProblemKind::TimeDegenerate => "u",
    }
}

fn cmd_plot(a: &PlotArgs) -> Result<(), CliError> {
    let loaded: Vec<Loaded> = a.dirs.iter().map(|d| load_dir(d)).collect::<Result<_, _>>()?;
    let out = a.out.clone().unwrap_or_else(|| a.dirs[0].clone());
    fs::create_dir_all(&out).map_err(|e| CliError::Output(format!("{}: {e}", out.display())))?;
    let write = |name: &str, svg: Result<String, String>| -> Result<(), CliError> {
        let svg = svg.map_err(CliError::Input)?;
        let path = out.join(name);
        fs::write(&path, svg).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(())
    };
    let first = &loaded[0];
    let name = u_name(&first.meta);
    if loaded.len() == 1 {
        let tf = first.meta.input.t_final;
        let mut rows: Vec<usize> = a.times.iter().map(|&f| nearest_row(&first.u, f * tf)).collect();
        rows.dedup();
        let series: Vec<Series> = rows
            .iter()
            .map(|&i| Series { label: format!("t = {:.4}", first.u.t[i]), x: first.u.x.clone(), y: first.u.row(i).to_vec() })
            .collect();
        write("U.svg", line_plot(&format!("{name}(t, x), α = {}", first.meta.input.alpha), "x", name, &series))?;
        let hs = [Series { label: "h".into(), x: first.hx.clone(), y: first.h.clone() }];
        write("h.svg", line_plot("h(x)", "x", "h", &hs))?;
    } else {
        let label = |m: &Meta| match m.input.beta {
            Some(b) => format!("α = {}, β = {b}", m.input.alpha),
            None => format!("α = {}", m.input.alpha),
        };
        let series: Vec<Series> = loaded
            .iter()
            .map(|l| {
                let i = nearest_row(&l.u, a.at * l.meta.input.t_final);
                Series { label: label(&l.meta), x: l.u.x.clone(), y: l.u.row(i).to_vec() }
            })
            .collect();
        write("U_sweep.svg", line_plot(&format!("{name}(t, x) at t = {} T", a.at), "x", name, &series))?;
        let hs: Vec<Series> = loaded.iter().map(|l| Series { label: label(&l.meta), x: l.hx.clone(), y: l.h.clone() }).collect();
        write("h_sweep.svg", line_plot("h(x)", "x", "h", &hs))?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let suite: Suite = a.suite.parse().map_err(|e: fracinv::Error| CliError::Input(e.to_string()))?;
    let results = run_suite(suite, a.seed);
    for r in &results {
        println!(
            "{} {:<30} measured {:>12.4e}  threshold {:>12.4e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.threshold
        );
    }
    if let Some(path) = &a.report {
        fs::write(path, report_json(&results) + "\n").map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} checks passed (seed {})", results.len() - failed, results.len(), a.seed);
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn cmd_specfun(cmd: SpecfunCmd) -> Result<(), CliError> {
    let SpecfunCmd::Eval { function, z, alpha, beta, m, n, rtol } = cmd;
    let tol = Tolerance::relative(rtol);
    let (value, est) = match function {
        SpecFn::Ml => {
            let r = mittag_leffler_with(MLParams::new(alpha, beta)?, z, &tol)?;
            (r.value, r.est_abs_error)
        }
        SpecFn::Gml => {
            let r = gen_mittag_leffler_with(GenMLParams::new(alpha, m, n)?, z, &tol)?;
            (r.value, r.est_abs_error)
        }
        SpecFn::Gamma => (gamma_fn(z)?, f64::NAN),
        SpecFn::Rgamma => (rgamma(z), f64::NAN),
        SpecFn::Lgamma => (ln_gamma(z), f64::NAN),
        SpecFn::Legendre => {
            if !(n >= 0.0 && n.fract() == 0.0) {
                return Err(CliError::Input(format!("--n must be a nonnegative integer, got {n}")));
            }
            (legendre_p(n as usize, z)?, f64::NAN)
        }
    };
    let est = if est.is_nan() { serde_json::Value::Null } else { json!(est) };
    println!("{}", json!({ "value": value, "est_abs_error": est }));
    Ok(())
}

fn cmd_fracops(cmd: FracopsCmd) -> Result<(), CliError> {
    let FracopsCmd::Eval { op, f, alpha, t, steps, differentiated } = cmd;
    let f = Expr::parse(&f, "t").map_err(|e| CliError::Input(format!("--f: {e}")))?;
    let grid = TimeGrid::new(t, steps)?;
    let samples = grid.sample(|s| f.eval(s));
    let value = match op {
        FracOp::Caputo => caputo_deriv_num(&samples, &grid, alpha, steps)?,
        FracOp::RlIntegral => rl_integral_num(&samples, &grid, alpha, steps)?,
        FracOp::RlDeriv => {
            let method = if differentiated { RlDerivMethod::DifferentiatedIntegral } else { RlDerivMethod::CaputoCorrection };
            rl_deriv_num_with(&samples, &grid, alpha, steps, method)?
        }
    };
    println!("{}", json!({ "value": value, "dt": grid.dt() }));
    Ok(())
}
