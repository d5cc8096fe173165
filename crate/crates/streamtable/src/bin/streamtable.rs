//! Command-line interface: layout, improvement, permutation search, hardness
//! instance generation and verification, model emission, solution import,
//! and SVG rendering.
//!
//! Exit codes: 0 success, 1 domain errors, 2 usage errors.

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use streamtable::csv_io::{parse_table_csv, write_table_csv};
use streamtable::greedy::{greedy_layout, greedy_layout_with_order};
use streamtable::heights::{initial_heights, local_improve, HeightPolicy};
use streamtable::json::{layout_from_json, layout_to_json};
use streamtable::layout::Layout;
use streamtable::model::{
    emit_gp_model, emit_lp_model, emit_qcqp_model, import_and_validate_solution, parse_solution,
    ModelError, ModelFile,
};
use streamtable::rational::{self, Rational};
use streamtable::reductions::{
    betweenness_to_table, certificate_layout, hampath_to_table, BetweennessInstance, CubicGraph,
    ReductionInstance, ReductionKind, ReductionSource, Threshold,
};
use streamtable::search::{
    anneal_search, brute_force_search, evaluate_order, packed_layout, AnnealSchedule,
    BruteForceOptions, Objective, RowOrder, Score,
};
use streamtable::svg::{render_svg, RenderOptions, Smoothing};
use streamtable::table::Table;

#[derive(Parser)]
#[command(
    name = "streamtable",
    version,
    about = "StreamTable layouts: exact greedy construction, height optimization, permutation search, hardness instances, and SVG rendering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the greedy layout of a CSV table and print layout JSON.
    Layout(LayoutArgs),
    /// Run height local improvement and print the improved layout JSON.
    Improve(ImproveArgs),
    /// Search row permutations (exhaustive or annealing) and print the result.
    Search(SearchArgs),
    /// Generate a hardness-reduction table (CSV to stdout, metadata to stderr).
    Gen(GenArgs),
    /// Check a certificate order against an instance and its threshold.
    Verify(VerifyArgs),
    /// Emit an optimization model for a table.
    EmitModel(EmitModelArgs),
    /// Validate an external solver solution against a model.
    ImportSolution(ImportSolutionArgs),
    /// Render layout JSON as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct LayoutArgs {
    /// Table CSV file (`-` for stdin).
    table: PathBuf,
    /// Height policy: uniform:R, prop:H, or explicit:R1,R2,...
    #[arg(long, default_value = "uniform:1")]
    heights: String,
    /// Drawn row order as comma-separated row labels (or 1-based indices).
    #[arg(long)]
    order: Option<String>,
    /// Output file (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImproveArgs {
    table: PathBuf,
    #[arg(long, default_value = "uniform:1")]
    heights: String,
    /// Iteration cap for the improvement loop.
    #[arg(long, default_value_t = streamtable::heights::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    /// Minimum excess area over no-split layouts.
    MinExcess,
    /// Minimum splits over zero-excess packed layouts.
    MinSplits,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MinExcess => Objective::MinExcessNoSplit,
            ObjectiveArg::MinSplits => Objective::MinSplitsZeroExcess,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Anneal,
}

#[derive(Args)]
struct SearchArgs {
    table: PathBuf,
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Uniform row height.
    #[arg(long, default_value = "1")]
    delta: String,
    #[arg(long, value_enum, default_value = "brute")]
    method: MethodArg,
    /// RNG seed; required for annealing.
    #[arg(long)]
    seed: Option<u64>,
    /// Row cap for exhaustive search.
    #[arg(long, default_value_t = 9)]
    cap: usize,
    /// Skip the lexicographically larger of each order/reversal pair.
    #[arg(long)]
    reversal_symmetry: bool,
    /// Initial annealing temperature (defaults to max(1, initial score)).
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long, default_value_t = 0.995)]
    cooling: f64,
    #[arg(long, default_value_t = 20_000)]
    steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Betweenness,
    Hampath,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Betweenness: JSON list of ordered triples. Hampath: `u v` edge lines.
    instance: PathBuf,
    /// Triple-column weight (betweenness, default 15, must be >= 15) or edge
    /// weight (hampath, default 12).
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: GenKind,
    instance: PathBuf,
    /// Candidate order: betweenness elements or graph vertices, comma-separated.
    #[arg(long)]
    order: String,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKindArg {
    Lp,
    Qcqp,
    Gp,
}

#[derive(Args)]
struct EmitModelArgs {
    #[arg(value_enum)]
    kind: ModelKindArg,
    table: PathBuf,
    /// Height policy (LP only).
    #[arg(long, default_value = "uniform:1")]
    heights: String,
    /// Total height H (QCQP and GP).
    #[arg(long, required_if_eq_any([("kind", "qcqp"), ("kind", "gp")]))]
    total_height: Option<String>,
    /// Maximum width W (GP only).
    #[arg(long, required_if_eq("kind", "gp"))]
    max_width: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImportSolutionArgs {
    table: PathBuf,
    /// Solution file: JSON map or `name value` lines (`-` for stdin).
    solution: PathBuf,
    #[arg(long, value_enum)]
    kind: ModelKindArg,
    #[arg(long, default_value = "uniform:1")]
    heights: String,
    #[arg(long, required_if_eq_any([("kind", "qcqp"), ("kind", "gp")]))]
    total_height: Option<String>,
    #[arg(long, required_if_eq("kind", "gp"))]
    max_width: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Layout JSON file (`-` for stdin).
    layout: PathBuf,
    /// Pixels per layout unit.
    #[arg(long, default_value_t = 40.0)]
    scale: f64,
    /// Corner smoothing: `none` or a radius fraction in [0, 0.5].
    #[arg(long, default_value = "0.25")]
    smooth: String,
    /// Disable the dotted row grid.
    #[arg(long)]
    no_grid: bool,
    /// Draw row and column labels.
    #[arg(long)]
    labels: bool,
    /// Optional table CSV supplying the labels.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError(e.to_string()))?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_rational_arg(name: &str, value: &str) -> Result<Rational, CliError> {
    rational::parse(value).map_err(|e| CliError(format!("invalid {name}: {e}")))
}

fn parse_heights(table: &Table, spec: &str) -> Result<streamtable::layout::RowHeights, CliError> {
    Ok(initial_heights(table, &HeightPolicy::parse(spec)?)?)
}

/// Resolves `--order` tokens against row labels first, then 1-based indices.
fn parse_row_order(table: &Table, spec: &str) -> Result<RowOrder, CliError> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    let by_label: Option<Vec<usize>> = tokens
        .iter()
        .map(|t| table.row_labels().iter().position(|l| l == t))
        .collect();
    let perm = match by_label {
        Some(perm) => perm,
        None => tokens
            .iter()
            .map(|t| {
                t.parse::<usize>()
                    .ok()
                    .and_then(|v| v.checked_sub(1))
                    .filter(|&v| v < table.rows())
                    .ok_or_else(|| {
                        CliError(format!("`{t}` is neither a row label nor a 1-based row index"))
                    })
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(RowOrder::new(perm, table.rows())?)
}

fn load_reduction(
    kind: GenKind,
    text: &str,
    w: &Option<String>,
) -> Result<ReductionInstance, CliError> {
    match kind {
        GenKind::Betweenness => {
            let instance = BetweennessInstance::from_json(text)?;
            let w = match w {
                Some(s) => parse_rational_arg("w", s)?,
                None => rational::from_i64(15),
            };
            Ok(betweenness_to_table(&instance, &w)?)
        }
        GenKind::Hampath => {
            let graph = CubicGraph::from_edge_list(text)?;
            let w = match w {
                Some(s) => parse_rational_arg("w", s)?,
                None => rational::from_i64(12),
            };
            Ok(hampath_to_table(&graph, &w)?)
        }
    }
}

fn build_model(
    kind: ModelKindArg,
    table: &Table,
    heights_spec: &str,
    total_height: &Option<String>,
    max_width: &Option<String>,
) -> Result<ModelFile, CliError> {
    Ok(match kind {
        ModelKindArg::Lp => emit_lp_model(table, &parse_heights(table, heights_spec)?),
        ModelKindArg::Qcqp => {
            let h = parse_rational_arg("total height", total_height.as_deref().unwrap())?;
            emit_qcqp_model(table, &h)?
        }
        ModelKindArg::Gp => {
            let h = parse_rational_arg("total height", total_height.as_deref().unwrap())?;
            let w = parse_rational_arg("max width", max_width.as_deref().unwrap())?;
            emit_gp_model(table, &w, &h)?
        }
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Layout(args) => {
            let table = parse_table_csv(&read_input(&args.table)?)?;
            let heights = parse_heights(&table, &args.heights)?;
            let layout = match &args.order {
                Some(spec) => {
                    let order = parse_row_order(&table, spec)?;
                    greedy_layout_with_order(&table, &heights, order.as_slice())
                }
                None => greedy_layout(&table, &heights),
            };
            write_output(&args.out, &layout_to_json(&layout))
        }
        Command::Improve(args) => {
            let table = parse_table_csv(&read_input(&args.table)?)?;
            let heights = parse_heights(&table, &args.heights)?;
            let (_, layout, log) = local_improve(&table, &heights, args.max_iters);
            for step in &log {
                eprintln!(
                    "iter {}: row {} gap after col {}: height {} -> {}, excess {} -> {}",
                    step.iteration,
                    step.row + 1,
                    step.gap_after_col + 1,
                    rational::to_string(&step.old_height),
                    rational::to_string(&step.new_height),
                    rational::to_string(&step.excess_before),
                    rational::to_string(&step.excess_after),
                );
            }
            write_output(&args.out, &layout_to_json(&layout))
        }
        Command::Search(args) => {
            let table = parse_table_csv(&read_input(&args.table)?)?;
            let delta = parse_rational_arg("delta", &args.delta)?;
            let objective = Objective::from(args.objective);
            let result = match args.method {
                MethodArg::Brute => brute_force_search(
                    &table,
                    &delta,
                    objective,
                    &BruteForceOptions {
                        cap: args.cap,
                        reversal_symmetry: args.reversal_symmetry,
                    },
                )?,
                MethodArg::Anneal => {
                    let Some(seed) = args.seed else {
                        Cli::command()
                            .error(
                                clap::error::ErrorKind::MissingRequiredArgument,
                                "--seed is required for --method anneal",
                            )
                            .exit();
                    };
                    let schedule =
                        AnnealSchedule { t0: args.t0, cooling: args.cooling, steps: args.steps };
                    anneal_search(&table, &delta, objective, seed, &schedule)?
                }
            };
            write_output(&args.out, &result.to_json())
        }
        Command::Gen(args) => {
            let generated = load_reduction(args.kind, &read_input(&args.instance)?, &args.w)?;
            let mut meta = serde_json::json!({
                "kind": match generated.kind {
                    ReductionKind::Betweenness => "betweenness",
                    ReductionKind::HamPath => "hampath",
                },
                "rows": generated.table.rows(),
                "cols": generated.table.cols(),
                "w": rational::to_string(&generated.w),
                "delta": rational::to_string(&generated.delta),
                "threshold": generated.threshold.to_display(),
            });
            if matches!(args.kind, GenKind::Betweenness) {
                meta["epsilon"] =
                    serde_json::Value::String(rational::to_string(generated.table.weight(0, 0)));
            }
            eprintln!("{meta}");
            write_output(&args.out, &write_table_csv(&generated.table))
        }
        Command::Verify(args) => {
            let generated = load_reduction(args.kind, &read_input(&args.instance)?, &args.w)?;
            let tokens: Vec<String> =
                args.order.split(',').map(|t| t.trim().to_string()).collect();
            let order = match &generated.source {
                ReductionSource::Betweenness(instance) => {
                    let elements: Vec<i64> = tokens
                        .iter()
                        .map(|t| {
                            t.parse::<i64>().map_err(|_| {
                                CliError(format!("`{t}` is not a betweenness element"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    instance.row_order(&elements)?
                }
                ReductionSource::HamPath(graph) => graph.row_order(&tokens)?,
            };
            let certificate = generated.check_certificate(&order)
                && certificate_layout(&generated, &order).is_ok();
            let (metric, within) = match &generated.threshold {
                Threshold::Excess(bound) => {
                    let score = evaluate_order(
                        &generated.table,
                        &order,
                        &generated.delta,
                        Objective::MinExcessNoSplit,
                    )?;
                    let Score::Excess(excess) = score else { unreachable!() };
                    let within = excess <= *bound;
                    (rational::to_string(&excess), within)
                }
                Threshold::Splits(bound) => {
                    let layout = packed_layout(&generated.table, &order, &generated.delta)?;
                    let splits = layout.split_count();
                    (splits.to_string(), splits <= *bound)
                }
            };
            let report = serde_json::json!({
                "certificate": certificate,
                "metric": metric,
                "threshold": generated.threshold.to_display(),
                "within": within,
            });
            let mut text = serde_json::to_string_pretty(&report).expect("report serialization");
            text.push('\n');
            write_output(&args.out, &text)
        }
        Command::EmitModel(args) => {
            let table = parse_table_csv(&read_input(&args.table)?)?;
            let model =
                build_model(args.kind, &table, &args.heights, &args.total_height, &args.max_width)?;
            write_output(&args.out, &model.text)
        }
        Command::ImportSolution(args) => {
            let table = parse_table_csv(&read_input(&args.table)?)?;
            let model =
                build_model(args.kind, &table, &args.heights, &args.total_height, &args.max_width)?;
            let assignment = parse_solution(&read_input(&args.solution)?)?;
            match import_and_validate_solution(&model, &assignment, &table) {
                Ok(import) => {
                    let report = serde_json::json!({
                        "kind": model.kind.token(),
                        "feasible": true,
                        "exact": import.exact,
                        "objective": rational::to_string(&import.objective),
                        "oversized_cells": import
                            .oversized_cells
                            .iter()
                            .map(|cell| serde_json::json!({
                                "row": cell.row,
                                "col": cell.col,
                                "area_excess": rational::to_string(&cell.area_excess),
                            }))
                            .collect::<Vec<_>>(),
                        "relaid_from_heights": import.relaid_from_heights,
                        "layout": import
                            .layout
                            .as_ref()
                            .map(|l| {
                                serde_json::from_str::<serde_json::Value>(&layout_to_json(l))
                                    .expect("layout JSON is valid")
                            })
                            .unwrap_or(serde_json::Value::Null),
                    });
                    let mut text =
                        serde_json::to_string_pretty(&report).expect("report serialization");
                    text.push('\n');
                    write_output(&args.out, &text)
                }
                Err(
                    err @ (ModelError::ConstraintViolated { .. } | ModelError::MissingVariable(_)),
                ) => {
                    let report = serde_json::json!({
                        "kind": model.kind.token(),
                        "feasible": false,
                        "error": err.to_string(),
                    });
                    let mut text =
                        serde_json::to_string_pretty(&report).expect("report serialization");
                    text.push('\n');
                    write_output(&args.out, &text)?;
                    Err(CliError(err.to_string()))
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::Render(args) => {
            let layout = layout_from_json(&read_input(&args.layout)?)?;
            let layout = match &args.table {
                Some(path) => relabel_from_table(&layout, &parse_table_csv(&read_input(path)?)?)?,
                None => layout,
            };
            let smoothing = match args.smooth.as_str() {
                "none" => Smoothing::None,
                value => {
                    let frac: f64 = value
                        .parse()
                        .map_err(|_| CliError(format!("invalid smoothing fraction `{value}`")))?;
                    if !(0.0..=0.5).contains(&frac) {
                        return Err(CliError("smoothing fraction must be in [0, 0.5]".into()));
                    }
                    if frac == 0.0 {
                        Smoothing::None
                    } else {
                        Smoothing::Rounded(frac)
                    }
                }
            };
            if args.scale <= 0.0 {
                return Err(CliError("scale must be positive".into()));
            }
            let opts = RenderOptions {
                scale: args.scale,
                smoothing,
                show_grid: !args.no_grid,
                labels: args.labels,
                ..Default::default()
            };
            write_output(&args.out, &render_svg(&layout, &opts))
        }
    }
}

/// Swaps in the labels (and exact weights) from a table file whose geometry
/// matches the layout.
fn relabel_from_table(layout: &Layout, table: &Table) -> Result<Layout, CliError> {
    let derived = layout.table();
    if table.rows() != derived.rows() || table.cols() != derived.cols() {
        return Err(CliError(format!(
            "table is {}x{} but layout is {}x{}",
            table.rows(),
            table.cols(),
            derived.rows(),
            derived.cols()
        )));
    }
    for i in 0..table.rows() {
        for j in 0..table.cols() {
            if table.weight(i, j) != derived.weight(i, j) {
                return Err(CliError(format!(
                    "table weight at ({},{}) is {} but the layout implies {}",
                    i + 1,
                    j + 1,
                    rational::to_string(table.weight(i, j)),
                    rational::to_string(derived.weight(i, j)),
                )));
            }
        }
    }
    Ok(Layout::new(
        table.clone(),
        layout.heights().clone(),
        layout.order().to_vec(),
        layout.rects().to_vec(),
    )
    .expect("same geometry revalidates"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
