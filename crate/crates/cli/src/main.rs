//! Command-line surface: geodesic distances, means, variance, vistal
//! cells, and space checks over Newick files or scaffold space files.

mod newick;
mod points;
mod spacefile;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use treespace::frechet::{
    bhv_centroid, descent_mean, inductive_mean, mrc_tree, sturm_mean, variance,
    variance_gradient, DescentOptions, MeanResult, SturmParams, WeightedSample,
};
use treespace::geodesic::{distance, gtp_support};
use treespace::scalar::format_sig;
use treespace::space::{Axis, Space};
use treespace::split::Split;
use treespace::vistal::{enumerate_facets, facet_system, square, EnumerationLimits, Membership};
use treespace::Point;

use newick::{parse_newick, write_tree, NewickDocument};
use points::{parse_point, parse_point_array, point_to_json};
use spacefile::parse_spacefile;

#[derive(Parser)]
#[command(name = "treespace", version, about = "Geodesics, means, and vistal cells in NPC orthant spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise geodesic distances (CSV), or a single pair with --pair.
    Distance(DistanceArgs),
    /// Fréchet mean and friends: stochastic, descent, inductive, subset
    /// centroid, majority-rule consensus.
    Mean(MeanArgs),
    /// Variance of a sample at a query point, with the gradient when the
    /// point is interior to a maximal orthant.
    Variance(VarianceArgs),
    /// Vistal cells of an orthant with respect to a source point.
    Vistal(VistalArgs),
    /// Space-level checks.
    Space(SpaceArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Newick file (tree mode) or points JSON file (scaffold mode).
    file: PathBuf,
    /// Scaffold space file; switches the input to scaffold mode.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Leaf label mapped to index 0 (tree mode; default: lexicographically
    /// smallest).
    #[arg(long)]
    root_label: Option<String>,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Compute one pair (two zero-based indices) instead of the matrix.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pair: Option<Vec<usize>>,
    /// With --pair: also print the point at parameter λ on the geodesic.
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Args)]
struct MeanArgs {
    #[command(flatten)]
    input: InputArgs,
    /// sturm | descent | inductive | centroid | mrc
    #[arg(long)]
    method: String,
    /// Minimum iterations of the stochastic method.
    #[arg(long = "K", default_value_t = 100_000)]
    k: u64,
    /// Window size of the stochastic stopping rule.
    #[arg(long = "N", default_value_t = 10)]
    n: usize,
    /// Tolerance: stochastic window, or centroid diameter.
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// File with one weight per line (defaults to uniform).
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Write the iteration trace (iteration, variance, point) as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VarianceArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Query point: Newick (tree mode) or JSON object (scaffold mode).
    #[arg(long)]
    at: String,
}

#[derive(Args)]
struct VistalArgs {
    /// Scaffold space file.
    #[arg(long, conflicts_with = "tree_space")]
    space: Option<PathBuf>,
    /// Tree-space mode with leaves {0..n}.
    #[arg(long)]
    tree_space: Option<u32>,
    /// Source point: JSON object (scaffold) or Newick (tree mode).
    #[arg(long)]
    source: String,
    /// Query orthant: space-separated axis names, or comma-separated leaf
    /// index lists (tree mode), e.g. "2,3 4".
    #[arg(long)]
    orthant: String,
    /// Enumerate the facets of the orthant.
    #[arg(long, conflicts_with = "member")]
    enumerate: bool,
    /// Classify a point against the enumerated facets.
    #[arg(long)]
    member: Option<String>,
}

#[derive(Args)]
struct SpaceArgs {
    #[command(subcommand)]
    command: SpaceCommand,
}

#[derive(Subcommand)]
enum SpaceCommand {
    /// Flag-condition verdict and maximal-clique census of a space file.
    Check { file: PathBuf },
}

struct LoadedSample {
    space: Arc<Space>,
    points: Vec<Point>,
    names: Vec<String>,
    /// Present in tree mode; carries the leaf label map for output.
    doc: Option<NewickDocument>,
}

impl LoadedSample {
    fn render_point(&self, p: &Point) -> String {
        match &self.doc {
            Some(doc) => write_tree(p, &doc.labels),
            None => point_to_json(p).to_string(),
        }
    }
}

fn load_sample(input: &InputArgs) -> Result<LoadedSample> {
    let text = std::fs::read_to_string(&input.file)
        .with_context(|| format!("reading {}", input.file.display()))?;
    match &input.space {
        Some(space_path) => {
            let space_text = std::fs::read_to_string(space_path)
                .with_context(|| format!("reading {}", space_path.display()))?;
            let file = parse_spacefile(&space_text)?;
            let space = file.space()?;
            let points = parse_point_array(&space, &text)?;
            if points.is_empty() {
                bail!("no points in {}", input.file.display());
            }
            let names = (0..points.len()).map(|i| format!("p{i}")).collect();
            Ok(LoadedSample {
                space,
                points,
                names,
                doc: None,
            })
        }
        None => {
            let doc = parse_newick(&text, input.root_label.as_deref())?;
            let points: Vec<Point> = doc.trees.iter().map(|(p, _)| p.clone()).collect();
            let names = doc
                .trees
                .iter()
                .enumerate()
                .map(|(i, (_, name))| name.clone().unwrap_or_else(|| format!("t{i}")))
                .collect();
            Ok(LoadedSample {
                space: doc.space.clone(),
                points,
                names,
                doc: Some(doc),
            })
        }
    }
}

fn run_distance(args: &DistanceArgs) -> Result<()> {
    let sample = load_sample(&args.input)?;
    match &args.pair {
        Some(pair) => {
            let (i, j) = (pair[0], pair[1]);
            let get = |k: usize| -> Result<&Point> {
                sample
                    .points
                    .get(k)
                    .ok_or_else(|| anyhow!("point index {k} out of range"))
            };
            let desc = gtp_support(get(i)?, get(j)?)?;
            println!("{}", format_sig(desc.distance, 12));
            if let Some(lambda) = args.at {
                let p = desc.point_at(lambda)?;
                println!("{}", sample.render_point(&p));
            }
        }
        None => {
            if args.at.is_some() {
                bail!("--at needs --pair");
            }
            let k = sample.points.len();
            let pairs: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
                .collect();
            let distances: Vec<((usize, usize), f64)> = pairs
                .par_iter()
                .map(|&(i, j)| Ok(((i, j), distance(&sample.points[i], &sample.points[j])?)))
                .collect::<Result<_>>()?;
            let mut matrix = vec![vec![0.0f64; k]; k];
            for ((i, j), d) in distances {
                matrix[i][j] = d;
                matrix[j][i] = d;
            }
            let mut out = String::new();
            out.push_str(&format!("name,{}\n", sample.names.join(",")));
            for (name, row_values) in sample.names.iter().zip(&matrix) {
                let row: Vec<String> = row_values.iter().map(|d| format_sig(*d, 12)).collect();
                out.push_str(&format!("{name},{}\n", row.join(",")));
            }
            print!("{out}");
        }
    }
    Ok(())
}

fn read_weights(path: &PathBuf, count: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let weights: Vec<f64> = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<f64>().with_context(|| format!("weight {l:?}")))
        .collect::<Result<_>>()?;
    if weights.len() != count {
        bail!("{} weights for {count} points", weights.len());
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        bail!("weights sum to {total}");
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

fn run_mean(args: &MeanArgs) -> Result<()> {
    let sample = load_sample(&args.input)?;
    let weights = match &args.weights {
        Some(path) => read_weights(path, sample.points.len())?,
        None => vec![1.0 / sample.points.len() as f64; sample.points.len()],
    };
    let weighted = WeightedSample::with_weights(sample.points.clone(), weights)?;

    let result: MeanResult = match args.method.as_str() {
        "sturm" => sturm_mean(
            &weighted,
            &SturmParams {
                k_min: args.k,
                window: args.n,
                eps: args.eps,
                seed: args.seed,
                trace: args.trace.is_some(),
                trace_variance: args.trace.is_some(),
                ..Default::default()
            },
        )?,
        "descent" => descent_mean(
            &weighted,
            &DescentOptions {
                seed: args.seed,
                ..Default::default()
            },
        )?,
        "inductive" => {
            let mean = inductive_mean(&sample.points)?;
            let variance = variance(&mean, &weighted)?;
            MeanResult {
                mean,
                variance,
                iterations: sample.points.len() as u64,
                method: treespace::frechet::MeanMethod::Descent,
                trace: None,
                seed: args.seed,
            }
        }
        "centroid" => {
            let mean = bhv_centroid(&sample.points, args.eps)?;
            let variance = variance(&mean, &weighted)?;
            MeanResult {
                mean,
                variance,
                iterations: 0,
                method: treespace::frechet::MeanMethod::Descent,
                trace: None,
                seed: args.seed,
            }
        }
        "mrc" => {
            let mean = mrc_tree(&weighted)?;
            let variance = variance(&mean, &weighted)?;
            MeanResult {
                mean,
                variance,
                iterations: 0,
                method: treespace::frechet::MeanMethod::Descent,
                trace: None,
                seed: args.seed,
            }
        }
        other => bail!("unknown method {other:?} (sturm|descent|inductive|centroid|mrc)"),
    };

    println!("{}", sample.render_point(&result.mean));
    println!("variance: {}", format_sig(result.variance, 12));
    if let (Some(path), Some(trace)) = (&args.trace, &result.trace) {
        let mut out = String::from("iteration,variance,point\n");
        for entry in trace {
            let rendered = sample.render_point(&entry.point).replace('"', "\"\"");
            let var = entry
                .variance
                .map(|v| format_sig(v, 12))
                .unwrap_or_default();
            out.push_str(&format!("{},{},\"{}\"\n", entry.iteration, var, rendered));
        }
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_variance(args: &VarianceArgs) -> Result<()> {
    let sample = load_sample(&args.input)?;
    let weighted = WeightedSample::uniform(sample.points.clone())?;
    let at: Point = match &sample.doc {
        Some(doc) => {
            let at_doc = parse_newick(&args.at, None)?;
            if at_doc.labels != doc.labels {
                bail!("query tree has a different leaf set");
            }
            at_doc.trees[0].0.clone()
        }
        None => parse_point(&sample.space, &args.at)?,
    };
    let s = variance(&at, &weighted)?;
    println!("variance: {}", format_sig(s, 12));
    match variance_gradient(&at, &weighted) {
        Ok(grad) => {
            let mut map = serde_json::Map::new();
            for (axis, g) in grad {
                let formatted = format_sig(g, 12);
                map.insert(
                    axis.to_string(),
                    serde_json::Value::Number(
                        formatted
                            .parse()
                            .unwrap_or_else(|_| serde_json::Number::from(0)),
                    ),
                );
            }
            println!("gradient: {}", serde_json::Value::Object(map));
        }
        Err(treespace::Error::NotInteriorToMaximalOrthant(_)) => {
            println!("gradient: undefined (not interior to a maximal orthant)");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn parse_orthant(space: &Arc<Space>, text: &str, tree_n: Option<u32>) -> Result<BTreeSet<Axis>> {
    let mut orthant = BTreeSet::new();
    for token in text.split_whitespace() {
        let axis = match tree_n {
            Some(n) => {
                let labels: BTreeSet<u32> = token
                    .split(',')
                    .map(|t| t.parse::<u32>().with_context(|| format!("leaf index {t:?}")))
                    .collect::<Result<_>>()?;
                Axis::Split(Split::canonical(&labels, n)?)
            }
            None => Axis::named(token),
        };
        space.check_axis(&axis)?;
        orthant.insert(axis);
    }
    if orthant.is_empty() {
        bail!("empty orthant");
    }
    Ok(orthant)
}

fn run_vistal(args: &VistalArgs) -> Result<()> {
    let (space, source, tree_n): (Arc<Space>, Point, Option<u32>) = match (&args.space, args.tree_space) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let file = parse_spacefile(&text)?;
            let space = file.space()?;
            let source = parse_point(&space, &args.source)?;
            (space, source, None)
        }
        (None, Some(n)) => {
            let doc = parse_newick(&args.source, None)?;
            if doc.labels.len() as u32 != n + 1 {
                bail!(
                    "--tree-space {n} expects {} leaves, the source has {}",
                    n + 1,
                    doc.labels.len()
                );
            }
            (doc.space.clone(), doc.trees[0].0.clone(), Some(n))
        }
        _ => bail!("vistal needs exactly one of --space or --tree-space"),
    };
    let orthant = parse_orthant(&space, &args.orthant, tree_n)?;

    if args.enumerate {
        let facets = enumerate_facets(&source, &orthant, EnumerationLimits::default())?;
        let cells: Vec<serde_json::Value> = facets.iter().map(|c| c.to_json()).collect();
        println!("{}", serde_json::Value::Array(cells));
        return Ok(());
    }
    if let Some(member) = &args.member {
        let point: Point = match tree_n {
            Some(_) => {
                let doc = parse_newick(member, None)?;
                doc.trees[0].0.clone()
            }
            None => parse_point(&space, member)?,
        };
        let xi = square(&point);
        let facets = enumerate_facets(&source, &orthant, EnumerationLimits::default())?;
        let mut verdicts = Vec::new();
        for (i, facet) in facets.iter().enumerate() {
            let m = match facet.membership(&xi) {
                Membership::Interior => "interior",
                Membership::Boundary => "boundary",
                Membership::Outside => "outside",
            };
            verdicts.push(serde_json::json!({"cell": i, "membership": m}));
        }
        // Also classify against the cell of the point's own geodesic.
        let desc = gtp_support(&point, &source)?;
        let own = facet_system(&source, &orthant, &desc.support)?;
        let own_m = match own.membership(&xi) {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Outside => "outside",
        };
        println!(
            "{}",
            serde_json::json!({
                "cells": verdicts,
                "geodesic_cell": {"membership": own_m, "cell": own.to_json()},
            })
        );
        return Ok(());
    }
    bail!("vistal needs --enumerate or --member");
}

fn run_space_check(file: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(file)?;
    let parsed = parse_spacefile(&text)?;
    let flag = parsed.is_flag_complex()?;
    println!("{}", if flag { "flag" } else { "not flag" });
    let graph = parsed.graph()?;
    let cliques = graph.maximal_cliques();
    println!("axes: {}", graph.axes().len());
    println!("maximal cliques: {}", cliques.len());
    let mut by_size: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for c in &cliques {
        *by_size.entry(c.len()).or_insert(0) += 1;
    }
    let census: Vec<String> = by_size
        .iter()
        .map(|(size, count)| format!("{count}x{size}"))
        .collect();
    println!("clique sizes: {}", census.join(" "));
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Distance(args) => run_distance(args),
        Command::Mean(args) => run_mean(args),
        Command::Variance(args) => run_variance(args),
        Command::Vistal(args) => run_vistal(args),
        Command::Space(args) => match &args.command {
            SpaceCommand::Check { file } => run_space_check(file),
        },
    }
}

fn error_code(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<treespace::Error>() {
        use treespace::Error::*;
        return match e {
            InvalidSplit(_) => "InvalidSplit",
            LeafCountMismatch(_, _) => "LeafCountMismatch",
            UnknownAxis(_) => "UnknownAxis",
            NotAFace(_) => "NotAFace",
            NegativeLength(_) => "NegativeLength",
            PointsInDifferentSpaces => "PointsInDifferentSpaces",
            EmptySide => "EmptySide",
            ZeroWeight(_) => "ZeroWeight",
            FlowNotMaximum => "FlowNotMaximum",
            CountExceeded(_) => "CountExceeded",
            OutOfRange { .. } => "OutOfRange",
            NotInteriorToMaximalOrthant(_) => "NotInteriorToMaximalOrthant",
            InvalidSquaredCoordinate(_) => "InvalidSquaredCoordinate",
            SupportMismatch(_) => "SupportMismatch",
            EmptyInterior => "EmptyInterior",
            LimitExceeded(_) => "LimitExceeded",
            TimedOut(_) => "TimedOut",
            MaxOuterIterationsExceeded(_) => "MaxOuterIterationsExceeded",
            InvalidInput(_) => "InvalidInput",
        };
    }
    if err.downcast_ref::<newick::NewickError>().is_some() {
        return "NewickError";
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return "Io";
    }
    "InvalidInput"
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        let payload = serde_json::json!({
            "error": error_code(&err),
            "message": format!("{err:#}"),
        });
        eprintln!("{payload}");
        std::process::exit(1);
    }
}
