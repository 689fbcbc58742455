//! Command-line front end: solve a benchmark problem, run a convergence
//! sweep, or compare the regularized systems.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use fracshoot::harness::{
    build_example, check_eps_reduction, emit_report, run_convergence, shoot_example, ExampleId,
    Pipeline, ReportFormat,
};
use fracshoot::{Method, Scheme, ShootingConfig, Termination, UniformGrid};

const EXIT_USAGE: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "fracshoot",
    version,
    about = "Shooting solvers for fractional boundary value problems"
)]
struct Cli {
    /// Plain-text `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shoot once on a single grid and report the result.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        /// Write the nodal solution as a `t,y` CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a grid-refinement study.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly increasing list of N.
        #[arg(long)]
        n_list: Option<String>,
        /// csv or markdown.
        #[arg(long)]
        format: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the full and reduced regularized systems for a sequence of eps.
    CheckEps {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        alpha2: Option<f64>,
        /// Comma-separated, strictly decreasing list of eps.
        #[arg(long)]
        eps_list: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        scheme: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// ex1 .. ex5.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    /// newton or halley.
    #[arg(long)]
    method: Option<String>,
    /// linear or quadratic.
    #[arg(long)]
    scheme: Option<String>,
    /// hpcm or linear-explicit.
    #[arg(long)]
    pipeline: Option<String>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
}

/// Errors mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Diverged(String),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        classify(e)
    }
}

fn classify(e: anyhow::Error) -> Failure {
    use fracshoot::Error as E;
    match e.downcast_ref::<E>() {
        Some(
            E::NonFinite { .. }
            | E::SingularBracket { .. }
            | E::SeriesNonConvergence { .. }
            | E::DerivativeUnderflow(_)
            | E::GammaPole(_),
        ) => Failure::Numeric(e),
        _ => Failure::Usage(e),
    }
}

/// Values from the config file, keyed with dashes normalized to underscores.
#[derive(Default, Debug)]
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), i + 1))?;
            map.insert(
                k.trim().replace('-', "_"),
                v.trim().trim_matches('"').to_string(),
            );
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config key {key} = {v:?}: {e}"))
            })
            .transpose()
    }

    /// Flag value if given, else file value, else `default`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    fn pick_str(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.or_else(|| self.0.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    }
}

fn parse<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    Ok(s.parse::<T>()?)
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("bad list entry {p:?}: {e}"))
        })
        .collect()
}

struct Resolved {
    example: ExampleId,
    alpha1: f64,
    alpha2: f64,
    pipeline: Pipeline,
    config: ShootingConfig,
}

fn resolve(common: Common, file: &FileConfig) -> Result<Resolved> {
    let example: ExampleId = parse(&file.pick_str(common.example, "example", "ex1"))?;
    let (d1, d2) = example.default_orders();
    let method: Method = parse(&file.pick_str(common.method, "method", "newton"))?;
    let scheme: Scheme = parse(&file.pick_str(common.scheme, "scheme", "linear"))?;
    let default_pipeline = if example == ExampleId::Ex4 {
        "linear-explicit"
    } else {
        "hpcm"
    };
    let pipeline: Pipeline = parse(&file.pick_str(common.pipeline, "pipeline", default_pipeline))?;
    let config = ShootingConfig {
        s0: file.pick(common.s0, "s0", 0.2)?,
        max_iter: file.pick(common.max_iter, "max_iter", 10)?,
        tol: file.pick(common.tol, "tol", 1e-10)?,
        method,
        scheme,
        eps: file.pick(common.eps, "eps", 1e-10)?,
    };
    config.validate()?;
    Ok(Resolved {
        example,
        alpha1: file.pick(common.alpha1, "alpha1", d1)?,
        alpha2: file.pick(common.alpha2, "alpha2", d2)?,
        pipeline,
        config,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Solve { common, n, out } => {
            let r = resolve(common, &file)?;
            let n: usize = file.pick(n, "n", 100)?;
            let out: Option<PathBuf> = out.or(file.get("out")?);
            let example =
                build_example(r.example, r.alpha1, r.alpha2).map_err(anyhow::Error::from)?;
            let trace =
                shoot_example(&example, r.pipeline, n, &r.config).map_err(anyhow::Error::from)?;
            let it = trace.final_iterate();
            println!("example      {}", r.example);
            println!("alpha1       {}", r.alpha1);
            println!("alpha2       {}", r.alpha2);
            println!("N            {n}");
            println!("s            {:.16e}", it.s);
            println!("|F(s)|       {:e}", it.residual);
            println!("updates      {}", trace.updates());
            println!(
                "max_error    {:e}",
                example.max_error(&trace.final_solution)
            );
            for row in &trace.iterates {
                println!(
                    "iterate {:>3}  s = {:+.16e}  |F| = {:e}",
                    row.k, row.s, row.residual
                );
            }
            if let Some(path) = out {
                let mut text = String::from("t,y\n");
                let sol = &trace.final_solution;
                for (j, y) in sol.values(0).iter().enumerate() {
                    text.push_str(&format!("{:.17e},{:.17e}\n", sol.grid().node(j), y));
                }
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            match trace.termination {
                Termination::Converged => println!("termination  converged"),
                Termination::MaxIterReached => println!("termination  max_iter_reached"),
                Termination::Diverged(why) => {
                    println!("termination  diverged");
                    return Err(Failure::Diverged(why));
                }
            }
            Ok(())
        }
        Command::Converge {
            common,
            n_list,
            format,
            out,
        } => {
            let r = resolve(common, &file)?;
            let n_list: Vec<usize> =
                parse_list(&file.pick_str(n_list, "n_list", "10,20,40,80,160,320"))?;
            let format: ReportFormat = parse(&file.pick_str(format, "format", "csv"))?;
            let out: Option<PathBuf> = out.or(file.get("out")?);
            let example =
                build_example(r.example, r.alpha1, r.alpha2).map_err(anyhow::Error::from)?;
            let report = run_convergence(&example, r.pipeline, &n_list, &r.config)
                .map_err(anyhow::Error::from)?;
            let text = emit_report(&report, format);
            match out {
                Some(path) => fs::write(&path, &text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            let failed: Vec<_> = report.rows.iter().filter(|r| r.failed()).collect();
            if failed.is_empty() {
                return Ok(());
            }
            for row in &failed {
                eprintln!(
                    "N = {}: {}",
                    row.n,
                    row.failure.as_deref().unwrap_or("failed")
                );
            }
            if failed.iter().any(|r| r.termination.is_some()) {
                Err(Failure::Diverged(format!(
                    "{} row(s) diverged",
                    failed.len()
                )))
            } else {
                Err(Failure::Numeric(anyhow!("{} row(s) failed", failed.len())))
            }
        }
        Command::CheckEps {
            example,
            alpha2,
            eps_list,
            n,
            s,
            scheme,
        } => {
            let id: ExampleId = parse(&file.pick_str(example, "example", "ex5"))?;
            if !id.is_linear() {
                return Err(Failure::Usage(anyhow!(
                    "check-eps needs a problem with alpha1 = 1 (ex4 or ex5)"
                )));
            }
            let alpha2 = file.pick(alpha2, "alpha2", id.default_orders().1)?;
            let eps_list: Vec<f64> =
                parse_list(&file.pick_str(eps_list, "eps_list", "1e-1,1e-2,1e-3"))?;
            let n: usize = file.pick(n, "n", 160)?;
            let s: f64 = file.pick(s, "s", 0.0)?;
            let scheme: Scheme = parse(&file.pick_str(scheme, "scheme", "linear"))?;
            let ex = build_example(id, 1.0, alpha2).map_err(anyhow::Error::from)?;
            let grid = UniformGrid::new(0.0, ex.bvp.end(), n).map_err(anyhow::Error::from)?;
            let rows = check_eps_reduction(&ex.bvp, s, &eps_list, &grid, scheme)
                .map_err(anyhow::Error::from)?;
            println!("eps,sup_difference");
            for (eps, d) in rows {
                println!("{eps:e},{d:e}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Diverged(why)) => {
            eprintln!("shooting diverged: {why}");
            ExitCode::from(EXIT_DIVERGED)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numeric failure: {e:#}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
