//! Command-line driver: single solves and convergence studies.
//!
//! Set RAYON_NUM_THREADS to cap assembly worker threads (useful for
//! reproducible timings); results are identical at any thread count.

use clap::{Args, Parser, Subcommand};
use spectral_ball::ballbasis::{BallBasis, DiskBasis};
use spectral_ball::error::Result;
use spectral_ball::galerkin::{
    assemble, error_grid2, error_grid3, evaluate_solution, EllipticProblem, Frame,
};
use spectral_ball::problems::{resolve_problem, AnyProblem};
use spectral_ball::quadrature::{ball_rule, disk_rule};
use spectral_ball::study::{default_quad, run_study, StudyConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spectral-ball",
    about = "Spectral Galerkin solver for Dirichlet problems on deformed disks and balls",
    after_help = "Set RAYON_NUM_THREADS to cap worker threads for reproducible timing."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem at a single degree and print a summary.
    Solve(SolveArgs),
    /// Sweep a degree range and write a convergence-table CSV.
    Study(StudyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Built-in problem name or path to a problem TOML file.
    #[arg(long)]
    problem: String,
    /// Polynomial degree n of the trial space.
    #[arg(long)]
    degree: usize,
    /// Quadrature order (defaults to the per-dimension policy).
    #[arg(long)]
    quad: Option<usize>,
    /// Also print per-point values and errors on the evaluation grid.
    #[arg(long)]
    eval_grid: bool,
}

#[derive(Args)]
struct StudyArgs {
    /// Built-in problem name or path to a problem TOML file.
    #[arg(long)]
    problem: String,
    /// Inclusive degree range, e.g. 2..25.
    #[arg(long, value_parser = parse_range)]
    degrees: (usize, usize),
    /// Quadrature order: "auto" or an explicit integer.
    #[arg(long, default_value = "auto", value_parser = parse_quad)]
    quad: QuadArg,
    /// Output CSV path (a full-precision "-raw" companion is also written).
    #[arg(long)]
    out: PathBuf,
    /// Skip the condition-number column.
    #[arg(long)]
    no_cond: bool,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected <lo>..<hi>, got `{s}`"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi.trim().strip_prefix('=').unwrap_or(hi.trim());
    let hi: usize = hi.parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty degree range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// "auto" (None) or an explicit quadrature order.
#[derive(Clone, Copy)]
struct QuadArg(Option<usize>);

fn parse_quad(s: &str) -> std::result::Result<QuadArg, String> {
    if s == "auto" {
        return Ok(QuadArg(None));
    }
    let q: usize = s
        .parse()
        .map_err(|e| format!("bad quadrature order: {e}"))?;
    if q == 0 {
        return Err("quadrature order must be >= 1".into());
    }
    Ok(QuadArg(Some(q)))
}

fn solve2(p: &EllipticProblem<f64, 2>, args: &SolveArgs) -> Result<()> {
    let q = args.quad.unwrap_or_else(|| default_quad(2, args.degree));
    let basis = DiskBasis::new(args.degree);
    let rule = disk_rule::<f64>(q)?;
    let mut sys = assemble(p, &basis, &rule)?;
    sys.solve()?;
    println!("problem: {} (2D)", args.problem);
    println!(
        "degree n = {}, N = {}, quad q = {}",
        sys.degree, sys.size, q
    );
    println!("pre-symmetrization deviation = {:e}", sys.presym_deviation);
    println!("condition number = {:.4e}", sys.condition_number());
    let grid = error_grid2::<f64>();
    if let Some(u) = &p.true_solution {
        let approx = evaluate_solution(&sys, &basis, &p.map, &grid, Frame::Ball)?;
        let mut worst = 0.0f64;
        for (&x, &v) in grid.iter().zip(&approx) {
            worst = worst.max((u((p.map.phi)(x)) - v).abs());
        }
        println!("max grid error = {:.2E}", worst);
        if args.eval_grid {
            println!("x,y,u_n,error");
            for (&x, &v) in grid.iter().zip(&approx) {
                println!(
                    "{:e},{:e},{:e},{:e}",
                    x[0],
                    x[1],
                    v,
                    (u((p.map.phi)(x)) - v).abs()
                );
            }
        }
    } else if args.eval_grid {
        let approx = evaluate_solution(&sys, &basis, &p.map, &grid, Frame::Ball)?;
        println!("x,y,u_n");
        for (&x, &v) in grid.iter().zip(&approx) {
            println!("{:e},{:e},{:e}", x[0], x[1], v);
        }
    }
    Ok(())
}

fn solve3(p: &EllipticProblem<f64, 3>, args: &SolveArgs) -> Result<()> {
    let q = args.quad.unwrap_or_else(|| default_quad(3, args.degree));
    let basis = BallBasis::new(args.degree);
    let rule = ball_rule::<f64>(q)?;
    let mut sys = assemble(p, &basis, &rule)?;
    sys.solve()?;
    println!("problem: {} (3D)", args.problem);
    println!(
        "degree n = {}, N = {}, quad q = {}",
        sys.degree, sys.size, q
    );
    println!("pre-symmetrization deviation = {:e}", sys.presym_deviation);
    println!("condition number = {:.4e}", sys.condition_number());
    let grid = error_grid3::<f64>();
    if let Some(u) = &p.true_solution {
        let approx = evaluate_solution(&sys, &basis, &p.map, &grid, Frame::Ball)?;
        let mut worst = 0.0f64;
        for (&x, &v) in grid.iter().zip(&approx) {
            worst = worst.max((u((p.map.phi)(x)) - v).abs());
        }
        println!("max grid error = {:.2E}", worst);
        if args.eval_grid {
            println!("x,y,z,u_n,error");
            for (&x, &v) in grid.iter().zip(&approx) {
                println!(
                    "{:e},{:e},{:e},{:e},{:e}",
                    x[0],
                    x[1],
                    x[2],
                    v,
                    (u((p.map.phi)(x)) - v).abs()
                );
            }
        }
    } else if args.eval_grid {
        let approx = evaluate_solution(&sys, &basis, &p.map, &grid, Frame::Ball)?;
        println!("x,y,z,u_n");
        for (&x, &v) in grid.iter().zip(&approx) {
            println!("{:e},{:e},{:e},{:e}", x[0], x[1], x[2], v);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => match resolve_problem::<f64>(&args.problem)? {
            AnyProblem::D2(p) => solve2(&p, &args),
            AnyProblem::D3(p) => solve3(&p, &args),
        },
        Command::Study(args) => {
            let config = StudyConfig {
                problem: args.problem,
                degree_lo: args.degrees.0,
                degree_hi: args.degrees.1,
                quad: args.quad.0,
                out: args.out.clone(),
                emit_condition: !args.no_cond,
            };
            let rows = run_study::<f64>(&config)?;
            eprintln!(
                "wrote {} rows to {} (and the -raw companion)",
                rows.len(),
                args.out.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
