//! `fuzzy-potts` — exact measures and exhaustive checks on small
//! multigraphs, from the command line.
//!
//! This file only parses arguments and maps them onto the typed command
//! implementations in [`fuzzy_potts_cli::commands`]; every report the
//! binary prints is produced there, so the integration tests and the
//! acceptance suite exercise the same code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use fuzzy_potts::coupling::EdgeRule;
use fuzzy_potts::explorer::{
    default_boundary_edge_probabilities, default_boundary_grid, default_probe_grid,
};
use fuzzy_potts::rational::integer;
use fuzzy_potts::Rational;
use fuzzy_potts_cli::commands::{self, MeasureSpec, PSpec};
use fuzzy_potts_cli::graphs::{resolve_source, ResolvedGraph};
use fuzzy_potts_cli::report::Format;
use fuzzy_potts_cli::{parse_rational_arg, parse_rational_list, resolve_caps, CliError};

const EXIT_NOTES: &str = "\
Exit codes:
  0  verdict computed / all assertions met (a computed \"fails\" verdict still exits 0)
  1  refusal (size cap, parse error, failed precondition) or assertion failure
  2  probe-q found a positive-association violation

Environment (defaults for the corresponding --max-* flags):
  FUZZY_POTTS_MAX_EDGES        edge-count cap for exact tables (default 20)
  FUZZY_POTTS_MAX_PA_VERTICES  vertex cap for up-set scans (default 4)
  FUZZY_POTTS_MAX_JOINT_BITS   edges+vertices cap for joint tables (default 24)

All probabilities and weights are exact rationals written as `a/b` or
integers; floating-point input is not accepted anywhere.";

#[derive(Parser)]
#[command(
    name = "fuzzy-potts",
    version,
    about = "Exact random-cluster, coloring, and association checks on small multigraphs",
    after_help = EXIT_NOTES
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Cap on edge count for exact tables.
    #[arg(long, value_name = "N", global = true)]
    max_edges: Option<usize>,
    /// Cap on vertex count for up-set scans.
    #[arg(long, value_name = "N", global = true)]
    max_pa_vertices: Option<usize>,
    /// Cap on edges+vertices bits for joint edge/spin tables.
    #[arg(long, value_name = "N", global = true)]
    max_joint_bits: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file: `vertices N` first, then one `u v` edge line each.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Built-in family: k2, path, cycle, complete, star, triangle, figure1.
    #[arg(long, value_name = "NAME", conflicts_with = "file")]
    family: Option<String>,
    /// Vertex count for path, cycle, complete, star.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    /// Number of two-edge paths for the figure1 family.
    #[arg(long, value_name = "M")]
    m: Option<usize>,
}

impl GraphArgs {
    fn resolve(&self) -> Result<ResolvedGraph, CliError> {
        resolve_source(self.file.as_deref(), self.family.as_deref(), self.n, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum MeasureKind {
    /// Open-edge product weighted by the cluster count.
    RandomCluster,
    /// Uniform over cycle-free edge configurations.
    UniformForest,
    /// Independent edges.
    Product,
}

#[derive(Args)]
struct MeasureArgs {
    /// Which measure to build.
    #[arg(long = "measure", value_enum, default_value_t = MeasureKind::RandomCluster)]
    measure: MeasureKind,
    /// Edge probability `a/b`, applied to every edge (default 1/2).
    #[arg(long, value_name = "RAT")]
    p: Option<String>,
    /// Comma-separated per-edge probabilities, one per edge.
    #[arg(long, value_name = "LIST", conflicts_with = "p")]
    p_list: Option<String>,
    /// Cluster weight `a/b` (default 1; random-cluster only).
    #[arg(long, value_name = "RAT")]
    q: Option<String>,
}

fn parse_p(p: &Option<String>, p_list: &Option<String>) -> Result<PSpec, CliError> {
    match (p, p_list) {
        (Some(text), None) => Ok(PSpec::Uniform(parse_rational_arg("p", text)?)),
        (None, Some(list)) => Ok(PSpec::PerEdge(parse_rational_list("p-list", list)?)),
        (None, None) => Ok(PSpec::default_uniform()),
        (Some(_), Some(_)) => unreachable!("clap rejects --p together with --p-list"),
    }
}

impl MeasureArgs {
    fn resolve(&self) -> Result<MeasureSpec, CliError> {
        match self.measure {
            MeasureKind::RandomCluster => Ok(MeasureSpec::RandomCluster {
                p: parse_p(&self.p, &self.p_list)?,
                q: match &self.q {
                    Some(text) => parse_rational_arg("q", text)?,
                    None => integer(1),
                },
            }),
            MeasureKind::UniformForest => {
                if self.p.is_some() || self.p_list.is_some() || self.q.is_some() {
                    return Err(CliError::new(
                        "--measure uniform-forest takes no --p, --p-list, or --q",
                    ));
                }
                Ok(MeasureSpec::UniformForest)
            }
            MeasureKind::Product => {
                if self.q.is_some() {
                    return Err(CliError::new("--measure product takes no --q"));
                }
                Ok(MeasureSpec::Product {
                    p: parse_p(&self.p, &self.p_list)?,
                })
            }
        }
    }
}

#[derive(Args)]
struct RcArgs {
    /// Edge probability `a/b`, applied to every edge (default 1/2).
    #[arg(long, value_name = "RAT")]
    p: Option<String>,
    /// Comma-separated per-edge probabilities, one per edge.
    #[arg(long, value_name = "LIST", conflicts_with = "p")]
    p_list: Option<String>,
    /// Cluster weight `a/b` (default 1).
    #[arg(long, value_name = "RAT")]
    q: Option<String>,
}

impl RcArgs {
    fn resolve(&self) -> Result<(PSpec, Rational), CliError> {
        Ok((
            parse_p(&self.p, &self.p_list)?,
            match &self.q {
                Some(text) => parse_rational_arg("q", text)?,
                None => integer(1),
            },
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum RuleArg {
    /// Reveal the lowest-indexed edge touching the open cluster first.
    Lowest,
    /// Reveal the highest-indexed edge touching the open cluster first.
    Highest,
}

impl RuleArg {
    fn to_rule(self) -> EdgeRule {
        match self {
            RuleArg::Lowest => EdgeRule::LowestIncidentFirst,
            RuleArg::Highest => EdgeRule::HighestIncidentFirst,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a measure and print its exact probability table.
    Measure {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Plus-coloring bias `a/b`; also prints the two-color spin table.
        #[arg(long, value_name = "RAT")]
        alpha: Option<String>,
    },
    /// Check the lattice condition of the edge (or, with --alpha, spin) measure.
    CheckPlc {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Plus-coloring bias `a/b`; checks the spin measure instead.
        #[arg(long, value_name = "RAT")]
        alpha: Option<String>,
    },
    /// Check positive association of the colored measure over every up-set pair.
    CheckPa {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Plus-coloring bias `a/b`.
        #[arg(long, value_name = "RAT")]
        alpha: String,
    },
    /// Check that conditioning on a plus spin at x leaves every increasing
    /// event nonnegatively correlated with edge e being open.
    CheckLemma2 {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Plus-coloring bias `a/b`.
        #[arg(long, value_name = "RAT")]
        alpha: String,
        /// Conditioning vertex (defaults to the family's designated site).
        #[arg(long, value_name = "VERTEX")]
        x: Option<usize>,
        /// Conditioned edge, which must touch x.
        #[arg(long, value_name = "EDGE")]
        e: Option<usize>,
    },
    /// Build and verify the coupling of the two single-edge conditionings;
    /// optionally sample from it.
    Couple {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        rc: RcArgs,
        /// Cluster vertex followed by the revelation (defaults to the
        /// family's designated site).
        #[arg(long, value_name = "VERTEX")]
        x: Option<usize>,
        /// The conditioned edge, which must touch x.
        #[arg(long, value_name = "EDGE")]
        e: Option<usize>,
        /// Which unvisited edge the revelation opens next.
        #[arg(long, value_enum, default_value_t = RuleArg::Lowest)]
        rule: RuleArg,
        /// Draw this many coupled samples with the exact-threshold sampler.
        #[arg(long, value_name = "COUNT")]
        samples: Option<u64>,
        /// Sampler seed.
        #[arg(long, value_name = "SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Exact analysis of the two-path family: counts, probabilities, and
    /// the covariance whose sign flips once the family is wide enough.
    Figure1 {
        /// Number of two-edge paths.
        #[arg(long, value_name = "M")]
        m: usize,
        /// Coloring bias `a/b` for the conditional-covariance demonstration.
        #[arg(long, value_name = "RAT")]
        alpha: Option<String>,
    },
    /// Sweep cluster weights below 1 for positive-association violations
    /// (exit code 2 flags a find; nothing is asserted).
    ProbeQ {
        /// Comma-separated cluster weights (default 1/4,1/2,3/4,9/10).
        #[arg(long, value_name = "LIST")]
        qs: Option<String>,
        /// Comma-separated edge probabilities (default 1/3,1/2,2/3).
        #[arg(long, value_name = "LIST")]
        ps: Option<String>,
        /// Comma-separated coloring biases (default 1/4,1/2,3/4).
        #[arg(long, value_name = "LIST")]
        alphas: Option<String>,
    },
    /// Scan (q, alpha) cells for the colored measure's lattice condition
    /// against the product-threshold prediction.
    Boundary {
        /// Comma-separated cluster weights (default 1,2,4).
        #[arg(long, value_name = "LIST")]
        qs: Option<String>,
        /// Comma-separated coloring biases (default 1/10,1/4,1/2,3/4,9/10).
        #[arg(long, value_name = "LIST")]
        alphas: Option<String>,
        /// Comma-separated edge probabilities (default 1/3,1/2,2/3).
        #[arg(long, value_name = "LIST")]
        ps: Option<String>,
    },
    /// Check that the q-state Potts Gibbs measure equals divide-and-color
    /// over the random-cluster partition, as exact tables.
    EsCheck {
        /// Comma-separated state counts (default 2,3).
        #[arg(long, value_name = "LIST")]
        states: Option<String>,
        /// Edge probability `a/b` (default 1/2).
        #[arg(long, value_name = "RAT")]
        p: Option<String>,
    },
    /// Run the acceptance suite: ten criteria, one pass/fail line each.
    Corpus,
}

fn parse_opt_rational(flag: &str, value: &Option<String>) -> Result<Option<Rational>, CliError> {
    value
        .as_deref()
        .map(|text| parse_rational_arg(flag, text))
        .transpose()
}

fn parse_states(value: &Option<String>) -> Result<Vec<usize>, CliError> {
    match value {
        None => Ok(vec![2, 3]),
        Some(text) => text
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<usize>()
                    .map_err(|_| CliError::new(format!("--states: {part:?} is not an integer")))
            })
            .collect(),
    }
}

fn run(cli: &Cli) -> Result<(String, i32), CliError> {
    let caps = resolve_caps(cli.max_edges, cli.max_pa_vertices, cli.max_joint_bits)?;
    let out = match &cli.command {
        Command::Measure {
            graph,
            measure,
            alpha,
        } => {
            let rg = graph.resolve()?;
            let spec = measure.resolve()?;
            let alpha = parse_opt_rational("alpha", alpha)?;
            commands::measure(&rg, &spec, alpha.as_ref(), &caps)?
        }
        Command::CheckPlc {
            graph,
            measure,
            alpha,
        } => {
            let rg = graph.resolve()?;
            let spec = measure.resolve()?;
            let alpha = parse_opt_rational("alpha", alpha)?;
            commands::check_plc(&rg, &spec, alpha.as_ref(), &caps)?
        }
        Command::CheckPa {
            graph,
            measure,
            alpha,
        } => {
            let rg = graph.resolve()?;
            let spec = measure.resolve()?;
            let alpha = parse_rational_arg("alpha", alpha)?;
            commands::check_pa(&rg, &spec, &alpha, &caps)?
        }
        Command::CheckLemma2 {
            graph,
            measure,
            alpha,
            x,
            e,
        } => {
            let rg = graph.resolve()?;
            let spec = measure.resolve()?;
            let alpha = parse_rational_arg("alpha", alpha)?;
            commands::check_lemma2(&rg, &spec, &alpha, *x, *e, &caps)?
        }
        Command::Couple {
            graph,
            rc,
            x,
            e,
            rule,
            samples,
            seed,
        } => {
            let rg = graph.resolve()?;
            let (p, q) = rc.resolve()?;
            commands::couple(&rg, &p, &q, *x, *e, rule.to_rule(), *samples, *seed, &caps)?
        }
        Command::Figure1 { m, alpha } => {
            let alpha = parse_opt_rational("alpha", alpha)?;
            commands::figure1(*m, alpha.as_ref())?
        }
        Command::ProbeQ { qs, ps, alphas } => {
            let (dqs, dps, dalphas) = default_probe_grid();
            let qs = match qs {
                Some(text) => parse_rational_list("qs", text)?,
                None => dqs,
            };
            let ps = match ps {
                Some(text) => parse_rational_list("ps", text)?,
                None => dps,
            };
            let alphas = match alphas {
                Some(text) => parse_rational_list("alphas", text)?,
                None => dalphas,
            };
            commands::probe_q(&qs, &ps, &alphas)?
        }
        Command::Boundary { qs, alphas, ps } => {
            let grid = match (qs, alphas) {
                (None, None) => default_boundary_grid(),
                (qs, alphas) => {
                    let q_values = match qs {
                        Some(text) => parse_rational_list("qs", text)?,
                        None => vec![integer(1), integer(2), integer(4)],
                    };
                    let alpha_values = match alphas {
                        Some(text) => parse_rational_list("alphas", text)?,
                        None => {
                            use fuzzy_potts::rational::ratio;
                            vec![
                                ratio(1, 10),
                                ratio(1, 4),
                                ratio(1, 2),
                                ratio(3, 4),
                                ratio(9, 10),
                            ]
                        }
                    };
                    let mut grid = Vec::new();
                    for q in &q_values {
                        for alpha in &alpha_values {
                            grid.push((q.clone(), alpha.clone()));
                        }
                    }
                    grid
                }
            };
            let ps = match ps {
                Some(text) => parse_rational_list("ps", text)?,
                None => default_boundary_edge_probabilities(),
            };
            commands::boundary(&grid, &ps)?
        }
        Command::EsCheck { states, p } => {
            let states = parse_states(states)?;
            let p = match p {
                Some(text) => parse_rational_arg("p", text)?,
                None => fuzzy_potts::rational::ratio(1, 2),
            };
            commands::es_check(&states, &p)?
        }
        Command::Corpus => commands::corpus(),
    };
    let rendered = out.render(cli.format)?;
    Ok((rendered, out.exit_code))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are "errors" that print to stdout and
            // exit 0; genuine usage errors exit 1 so that code 2 stays
            // reserved for probe findings.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok((rendered, code)) => {
            print!("{rendered}");
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}
