#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use ggd_core::experiments::{
    default_upper_targets, fig1_rows, fig1_table, fig2_cloud, fig2_cloud_table, fig2_lower,
    fig2_lower_table, fig2_upper, fig2_upper_table, state_report, Fig1Config, RunMetadata, Table,
    UpperSearch,
};
use ggd_core::optimize::SimplexOptions;
use ggd_core::sampling::{SamplerConfig, RNG_DESCRIPTION};
use ggd_core::svg::Plot;
use ggd_core::{Error, Execution, OptimizerOptions, StandardForm, TwoModeCovariance, PHYSICAL_TOL};

const EXIT_INVALID: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ggd",
    version,
    about = "Geometric correlations of two-mode Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the CSV (or report) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the CSV (same path, `.svg` extension).
    #[arg(long, requires = "out")]
    svg: bool,
    /// Record the wall-clock time in the header (breaks byte-identical reruns).
    #[arg(long)]
    timestamp: bool,
    /// Run on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every measure on one state.
    State(StateArgs),
    /// GGD and its product-state variant on random general states.
    Fig1(Fig1Args),
    /// Lower boundary curves of GGD against discord under energy caps N = 2^k.
    #[command(name = "fig2-lower")]
    Fig2Lower(LowerArgs),
    /// Upper boundary of GGD against discord (energy independent).
    #[command(name = "fig2-upper")]
    Fig2Upper(UpperArgs),
    /// GGD of random squeezed thermal states under an energy cap.
    #[command(name = "fig2-cloud")]
    Fig2Cloud(CloudArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Standard-form entries `a b c d`.
    #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, conflicts_with = "matrix")]
    entries: Vec<f64>,
    /// File with a 4x4 covariance matrix (4 lines of 4 numbers).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Also run the numeric minimization when the closed form applies.
    #[arg(long)]
    numeric: bool,
    /// Physicality tolerance on the smallest symplectic eigenvalue.
    #[arg(long, default_value_t = PHYSICAL_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Exit with code 3 if the numeric minimization does not converge.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Simplex convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Restrict a and b to [1, N].
    #[arg(long)]
    energy_cap: Option<f64>,
    /// Range of a as `lo,hi`.
    #[arg(long, value_parser = parse_range)]
    a_range: Option<(f64, f64)>,
    /// Range of b as `lo,hi`.
    #[arg(long, value_parser = parse_range)]
    b_range: Option<(f64, f64)>,
    /// Multi-starts per minimization.
    #[arg(long, default_value_t = 8)]
    starts: usize,
    /// Objective evaluations allowed per simplex run.
    #[arg(long, default_value_t = 10_000)]
    max_evals: usize,
    /// Exit with code 3 if any row did not converge.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LowerArgs {
    /// Exponents k of the energy caps N = 2^k.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
    k: Vec<u32>,
    /// Points per curve.
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct UpperArgs {
    /// Explicit target discords; overrides --d-max/--n.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<f64>>,
    /// Largest target discord of the default grid.
    #[arg(long, default_value_t = 8.0)]
    d_max: f64,
    /// Number of targets in the default grid.
    #[arg(long, default_value_t = 80)]
    n: usize,
    /// Golden-section tolerance on epsilon.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CloudArgs {
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 25.0)]
    energy_cap: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Extra states drawn on the two closed-form families.
    #[arg(long, default_value_t = 0)]
    family_points: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if !(lo <= hi) {
        return Err(format!("empty range [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

fn exec(o: &Output) -> Execution {
    if o.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn metadata(o: &Output) -> RunMetadata {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut m = RunMetadata::new(format!("ggd {}", args.join(" ")));
    if o.timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.timestamp = Some(format!("unix {secs}"));
    }
    m
}

fn write_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(o: &Output, table: &Table, plot: impl FnOnce() -> Plot) -> anyhow::Result<()> {
    write_text(o.out.as_deref(), &table.to_csv())?;
    if o.svg {
        let path = o
            .out
            .as_ref()
            .expect("clap enforces --out")
            .with_extension("svg");
        write_text(Some(&path), &plot().render())?;
    }
    Ok(())
}

fn run_state(args: StateArgs) -> anyhow::Result<u8> {
    let sigma = match (&args.matrix, args.entries.as_slice()) {
        (Some(path), _) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .parse::<TwoModeCovariance>()?,
        (None, [a, b, c, d]) => {
            if !(*a >= 1.0 && *b >= 1.0 && *c >= d.abs()) {
                return Err(Error::Domain {
                    name: "a, b, c, d",
                    value: f64::NAN,
                    expected: "a >= 1, b >= 1, c >= |d|",
                }
                .into());
            }
            StandardForm {
                a: *a,
                b: *b,
                c: *c,
                d: *d,
            }
            .to_covariance()
        }
        _ => bail!(Error::Config("give `a b c d` or --matrix FILE".into())),
    };
    let opts = OptimizerOptions {
        seed: args.seed,
        ..Default::default()
    };
    let report = state_report(&sigma, args.numeric, &opts, args.tol)?;
    write_text(args.output.out.as_deref(), &format!("{report}\n"))?;
    Ok(if args.strict && !report.converged() {
        EXIT_NOT_CONVERGED
    } else {
        0
    })
}

fn run_fig1(args: Fig1Args) -> anyhow::Result<u8> {
    let sampler = SamplerConfig {
        energy_cap: args.energy_cap,
        a_range: args.a_range,
        b_range: args.b_range,
        ..SamplerConfig::general(args.seed)
    };
    let optimizer = OptimizerOptions {
        starts: args.starts,
        seed: args.seed,
        simplex: SimplexOptions {
            xtol: args.tol,
            max_evals: args.max_evals,
            ..OptimizerOptions::default().simplex
        },
        ..Default::default()
    };
    let cfg = Fig1Config {
        n_states: args.n,
        sampler,
        optimizer,
        exec: exec(&args.output),
    };
    let rows = fig1_rows(&cfg)?;
    let unconverged = rows.iter().filter(|r| !r.converged()).count();
    let meta = RunMetadata {
        seed: Some(args.seed),
        sampler: Some(sampler.describe()),
        ..metadata(&args.output)
    }
    .tolerance("simplex_xtol", args.tol)
    .tolerance("simplex_ftol", optimizer.simplex.ftol)
    .tolerance("simplex_max_evals", optimizer.simplex.max_evals)
    .note("starts", optimizer.starts)
    .note("unconverged_rows", unconverged);
    let table = fig1_table(&rows, meta);
    emit(&args.output, &table, || {
        let mut p = Plot::new("GGD vs product-state variant", "ggd", "ggd_alternative");
        let top = rows.iter().map(|r| r.ggd.value).fold(0.0, f64::max);
        p.lines.push(vec![(0.0, 0.0), (top, top)]);
        p.points = rows
            .iter()
            .map(|r| (r.ggd.value, r.alternative.value))
            .collect();
        p
    })?;
    if unconverged > 0 {
        eprintln!(
            "warning: {unconverged} of {} rows did not converge",
            rows.len()
        );
        if args.strict {
            return Ok(EXIT_NOT_CONVERGED);
        }
    }
    Ok(0)
}

fn run_lower(args: LowerArgs) -> anyhow::Result<u8> {
    let points = fig2_lower(&args.k, args.grid)?;
    let meta = metadata(&args.output).note("grid", args.grid);
    let table = fig2_lower_table(&points, meta);
    emit(&args.output, &table, || {
        let mut p = Plot::new("Lower boundary, N = 2^k", "discord", "ggd");
        p.lines = points
            .chunks(args.grid)
            .map(|c| c.iter().map(|q| (q.discord, q.ggd)).collect())
            .collect();
        p
    })?;
    Ok(0)
}

fn run_upper(args: UpperArgs) -> anyhow::Result<u8> {
    let targets = args
        .targets
        .clone()
        .unwrap_or_else(|| default_upper_targets(args.d_max, args.n));
    let search = UpperSearch {
        eps_tol: args.tol,
        ..Default::default()
    };
    let points = fig2_upper(&targets, &search, exec(&args.output))?;
    let meta = metadata(&args.output)
        .tolerance("b_bisection", search.b_tol)
        .tolerance("eps_golden_section", search.eps_tol)
        .note("search", search.describe())
        .note(
            "targets",
            match &args.targets {
                Some(t) => format!("explicit ({} values)", t.len()),
                None => format!("{} evenly spaced in (0, {}]", args.n, args.d_max),
            },
        );
    let table = fig2_upper_table(&points, meta);
    emit(&args.output, &table, || {
        let mut p = Plot::new("Upper boundary", "discord", "ggd");
        p.lines.push(
            points
                .iter()
                .filter(|q| q.reachable)
                .map(|q| (q.target_discord, q.ggd_max))
                .collect(),
        );
        p
    })?;
    Ok(0)
}

fn run_cloud(args: CloudArgs) -> anyhow::Result<u8> {
    let points = fig2_cloud(
        args.n,
        args.energy_cap,
        args.seed,
        args.family_points,
        exec(&args.output),
    )?;
    let meta = RunMetadata {
        seed: Some(args.seed),
        sampler: Some(SamplerConfig::squeezed_thermal(args.seed, args.energy_cap).describe()),
        ..metadata(&args.output)
    }
    .note("family_points", args.family_points)
    .note(
        "family_rng",
        format!("{RNG_DESCRIPTION}, streams from {}", args.n),
    );
    let table = fig2_cloud_table(&points, meta);
    emit(&args.output, &table, || {
        let mut p = Plot::new(
            "Squeezed thermal states on the closed-form families",
            "discord",
            "ggd",
        );
        p.points = points
            .iter()
            .filter_map(|q| q.discord.map(|d| (d, q.ggd)))
            .collect();
        p
    })?;
    Ok(0)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Consistency(_)) => 1,
        Some(_) => EXIT_INVALID,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::State(a) => run_state(a),
        Command::Fig1(a) => run_fig1(a),
        Command::Fig2Lower(a) => run_lower(a),
        Command::Fig2Upper(a) => run_upper(a),
        Command::Fig2Cloud(a) => run_cloud(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
