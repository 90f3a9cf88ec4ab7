#![allow(clippy::result_large_err)]

use clap::{Parser, ValueEnum};
use ricci_ot_core::corpus::{random_instance, FamilyKind};
use ricci_ot_core::verify::verify_all;
use ricci_ot_core::{
    idleness_profile, kappa_alpha, kappa_limit, parse_ratio, total_curvature_with, Execution,
    Ratio, WeightFamily, WeightModel, WeightedGraph,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

mod report;
use report::{ratio_f64, PairRow, Report};

const EXIT_CONFIG: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Per-edge curvature by all three methods.
    Curvature,
    /// Exact idleness profile of one edge.
    Profile,
    /// Total curvature and the bounds it is compared against.
    Total,
    /// Theorem verdicts.
    Verify,
    /// κ and κ_α for any two distinct vertices.
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    #[value(alias = "json-like", alias = "structured")]
    Json,
}

/// Exact Ollivier-Ricci curvature of weighted graphs.
#[derive(Debug, Parser)]
#[command(name = "ricci-ot", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Edge list (`u v length` per line) or a JSON graph/report document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// const:<q> | power:<int> | exp:<q> | table:<t>=<F>,...
    /// Defaults to the input's embedded weight, else const:1.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    edge: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Attach decimal approximations (not authoritative).
    #[arg(long)]
    decimal: bool,
    /// Use a seeded random instance instead of --input.
    #[arg(long)]
    seed: Option<u64>,
    /// Idleness for `pair`.
    #[arg(long)]
    alpha: Option<String>,
    /// Write a sampled profile as CSV (`profile` only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

struct Failure(u8, String);

fn config_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_CONFIG, msg.into())
}

fn load_input(cli: &Cli) -> Result<(WeightedGraph, WeightModel, Option<u64>), Failure> {
    let (graph, embedded, default_family, seed) = match (&cli.input, cli.seed) {
        (Some(_), Some(_)) => {
            return Err(config_error("--input and --seed are mutually exclusive"))
        }
        (None, None) => return Err(config_error("one of --input or --seed is required")),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
            let (g, w) = WeightedGraph::load(&text).map_err(|e| config_error(e.to_string()))?;
            (
                g,
                w,
                WeightFamily::Constant(Ratio::from_integer(1.into())),
                None,
            )
        }
        (None, Some(seed)) => {
            let inst = random_instance(seed, 9, FamilyKind::NonIncreasing);
            (inst.graph, None, inst.family, Some(seed))
        }
    };
    let family = match cli.weight.as_deref().or(embedded.as_deref()) {
        Some(spec) => WeightFamily::parse(spec).map_err(|e| config_error(e.to_string()))?,
        None => default_family,
    };
    let wm = WeightModel::build(&graph, family).map_err(|e| config_error(e.to_string()))?;
    Ok((graph, wm, seed))
}

fn selected_pair(cli: &Cli, g: &WeightedGraph) -> Result<Option<(usize, usize)>, Failure> {
    let Some(names) = &cli.edge else {
        return Ok(None);
    };
    let x = g
        .vertex(&names[0])
        .map_err(|e| config_error(e.to_string()))?;
    let y = g
        .vertex(&names[1])
        .map_err(|e| config_error(e.to_string()))?;
    if x == y {
        return Err(config_error("--edge needs two distinct vertices"));
    }
    Ok(Some((x, y)))
}

fn selected_edge(cli: &Cli, g: &WeightedGraph) -> Result<Option<usize>, Failure> {
    match selected_pair(cli, g)? {
        None => Ok(None),
        Some((x, y)) => g
            .edge_index(x, y)
            .map(Some)
            .ok_or_else(|| config_error(format!("unknown edge {} {}", g.name(x), g.name(y)))),
    }
}

fn profile_csv(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: usize,
    y: usize,
    p: &ricci_ot_core::IdlenessProfile,
) -> String {
    let mut alphas: Vec<Ratio> = (0..=40).map(|k| Ratio::new(k.into(), 40.into())).collect();
    alphas.extend(p.breakpoints.iter().cloned());
    alphas.sort();
    alphas.dedup();
    let mut out = String::from("alpha,kappa_alpha,alpha_approx,kappa_alpha_approx\n");
    for a in alphas {
        let k = p.value_at(&a);
        debug_assert_eq!(Some(&k), kappa_alpha(g, wm, x, y, &a).ok().as_ref());
        let _ = writeln!(out, "{a},{k},{},{}", ratio_f64(&a), ratio_f64(&k));
    }
    out
}

fn run(cli: &Cli) -> Result<(Report, u8), Failure> {
    let (g, wm, seed) = load_input(cli)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    if cli.edge.is_some() && matches!(cli.command, Command::Total | Command::Verify) {
        return Err(config_error("--edge is not accepted by this command"));
    }
    if cli.csv.is_some() && cli.command != Command::Profile {
        return Err(config_error("--csv is only accepted by profile"));
    }
    if cli.alpha.is_some() && cli.command != Command::Pair {
        return Err(config_error("--alpha is only accepted by pair"));
    }
    let name = format!("{:?}", cli.command).to_lowercase();
    let mut report = Report::new(&name, &g, &wm);
    report.seed = seed;
    let mut code = 0;

    match cli.command {
        Command::Curvature | Command::Total => {
            let full = total_curvature_with(&g, &wm, exec);
            let rows = match selected_edge(cli, &g)? {
                Some(id) => vec![full.per_edge[id].clone()],
                None => full.per_edge.clone(),
            };
            report = report.with_edges(&g, &rows, cli.decimal);
            if cli.command == Command::Total {
                report = report.with_total(&full, cli.decimal);
            }
            if !full.methods_agree() {
                code = EXIT_DISAGREE;
            }
        }
        Command::Profile => {
            let id =
                selected_edge(cli, &g)?.ok_or_else(|| config_error("profile needs --edge U V"))?;
            let e = &g.edges()[id];
            let p =
                idleness_profile(&g, &wm, e.u, e.v).map_err(|err| config_error(err.to_string()))?;
            if let Some(path) = &cli.csv {
                std::fs::write(path, profile_csv(&g, &wm, e.u, e.v, &p))
                    .map_err(|err| config_error(format!("{}: {err}", path.display())))?;
            }
            report = report.with_profile(&g, e.u, e.v, &p);
        }
        Command::Verify => {
            let (full, verdicts) = verify_all(&g, &wm, exec);
            report = report
                .with_edges(&g, &full.per_edge, cli.decimal)
                .with_total(&full, cli.decimal)
                .with_verdicts(&verdicts);
            if !full.methods_agree() {
                code = EXIT_DISAGREE;
            } else if verdicts.iter().any(|v| v.violated()) {
                code = EXIT_VIOLATION;
            }
        }
        Command::Pair => {
            let (x, y) =
                selected_pair(cli, &g)?.ok_or_else(|| config_error("pair needs --edge X Y"))?;
            let alpha = cli
                .alpha
                .as_deref()
                .map(parse_ratio)
                .transpose()
                .map_err(|e| config_error(e.to_string()))?;
            let kappa_at = alpha
                .as_ref()
                .map(|a| kappa_alpha(&g, &wm, x, y, a))
                .transpose()
                .map_err(|e| config_error(e.to_string()))?;
            let kappa = kappa_limit(&g, &wm, x, y).map_err(|e| config_error(e.to_string()))?;
            report.pair = Some(PairRow {
                x: g.name(x).into(),
                y: g.name(y).into(),
                distance: g.distance(x, y).to_string(),
                adjacent: g.adjacent(x, y),
                kappa: kappa.to_string(),
                alpha: alpha.map(|a| a.to_string()),
                kappa_alpha: kappa_at.map(|k| k.to_string()),
            });
        }
    }
    Ok((report, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            match cli.format {
                Format::Human => print!("{}", report.render_human()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
            }
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
