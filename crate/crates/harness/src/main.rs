use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use wagerlearn_core::RngStream;
use wagerlearn_harness::audit_cmd;
use wagerlearn_harness::bench::{run_benchmark, sample_expert_groups, AlgorithmSpec};
use wagerlearn_harness::config::{
    load_config_opt, pick, pick_opt, resolve_out_dir, FileConfig, Formats,
};
use wagerlearn_harness::emit::{read_json, write_csv, write_json, write_svg, PlotOptions};
use wagerlearn_harness::error::{HarnessError, Result};
use wagerlearn_harness::ingest::{import_raw, ingest_panel, write_normalized, ColumnMap};
use wagerlearn_harness::sim::{run_monte_carlo, SimulationSpec};
use wagerlearn_harness::trace::TraceEnsemble;

#[derive(Parser)]
#[command(
    name = "wagerlearn",
    version,
    about = "Incentive-compatible online learning: simulations, benchmarks, and audits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert a raw forecast CSV to the normalized panel schema.
    Ingest {
        /// Raw CSV file.
        input: PathBuf,
        /// Where to write the normalized CSV.
        #[arg(long)]
        output: PathBuf,
        /// Column holding the event identifier.
        #[arg(long, default_value = "event_id")]
        event_column: String,
        /// Column holding the expert identifier.
        #[arg(long, default_value = "expert_id")]
        expert_column: String,
        /// Column holding the report in [0, 1].
        #[arg(long, default_value = "report")]
        report_column: String,
        /// Column holding the outcome (0 or 1).
        #[arg(long, default_value = "outcome")]
        outcome_column: String,
    },
    /// Run algorithms over freshly simulated panels.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Experts per panel.
        #[arg(long)]
        k: Option<usize>,
        /// Rounds per panel.
        #[arg(long)]
        t: Option<usize>,
        /// Outcome rate for the first half of the rounds.
        #[arg(long)]
        rate_early: Option<f64>,
        /// Outcome rate for the second half.
        #[arg(long)]
        rate_late: Option<f64>,
    },
    /// Run algorithms over expert groups sampled from a normalized panel.
    Bench {
        /// Normalized panel CSV.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Experts per sampled group; omit to use the whole panel.
        #[arg(long)]
        group_size: Option<usize>,
        /// Number of sampled groups.
        #[arg(long)]
        num_groups: Option<usize>,
    },
    /// Audit one algorithm state for profitable misreports.
    Audit {
        /// Built-in example: mwu, gd, or wsu-forward.
        #[arg(long, conflicts_with = "context")]
        builtin: Option<String>,
        /// TOML context file describing the audit.
        #[arg(long)]
        context: Option<PathBuf>,
        /// Step-size override for the built-in examples.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Re-plot previously emitted ensemble JSON files as one SVG.
    Plot {
        /// Ensemble JSON files, one series each.
        inputs: Vec<PathBuf>,
        /// Output SVG path.
        #[arg(long, default_value = "plot.svg")]
        output: PathBuf,
        #[arg(long)]
        width: Option<u32>,
        #[arg(long)]
        height: Option<u32>,
    },
}

/// Flags shared by `simulate` and `bench`. Every value can also come from
/// the config file; flags win.
#[derive(Args)]
struct RunArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated algorithm names (see `--help` for the list).
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Runs per panel or group.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Base random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Step-size override applied to every listed algorithm.
    #[arg(long)]
    eta: Option<f64>,
    /// Exploration override for wsu-ux.
    #[arg(long)]
    gamma: Option<f64>,
    /// Lottery sample count override for elf and elf-x.
    #[arg(long)]
    num_samples: Option<usize>,
    /// Output directory (also settable via WAGERLEARN_OUT_DIR).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated output formats: csv, json, svg.
    #[arg(long, value_delimiter = ',')]
    formats: Option<Vec<String>>,
    /// Plot width in pixels.
    #[arg(long)]
    width: Option<u32>,
    /// Plot height in pixels.
    #[arg(long)]
    height: Option<u32>,
    /// Include every trace's per-round regret in the JSON output.
    #[arg(long)]
    per_trace: bool,
    /// Stem for output file names.
    #[arg(long)]
    prefix: Option<String>,
}

struct ResolvedRun {
    algorithms: Vec<AlgorithmSpec>,
    repetitions: usize,
    seed: u64,
    out_dir: PathBuf,
    formats: Formats,
    plot: PlotOptions,
    per_trace: bool,
    prefix: String,
}

fn resolve_run(args: &RunArgs, file: &FileConfig, default_prefix: &str) -> Result<ResolvedRun> {
    let names = pick(
        args.algorithms.clone(),
        file.algorithms.clone(),
        vec!["wsu".into(), "mwu".into(), "hedge".into()],
    );
    let mut algorithms = Vec::with_capacity(names.len());
    for name in &names {
        let mut spec = AlgorithmSpec::parse(name)?;
        spec.eta = pick_opt(args.eta, file.eta);
        spec.gamma = pick_opt(args.gamma, file.gamma);
        spec.num_samples = pick_opt(args.num_samples, file.num_samples);
        algorithms.push(spec);
    }
    let mut seen = names.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != names.len() {
        return Err(HarnessError::validation(
            "duplicate algorithm names would overwrite each other's outputs",
        ));
    }
    let defaults = PlotOptions::default();
    Ok(ResolvedRun {
        algorithms,
        repetitions: pick(args.repetitions, file.repetitions, 10),
        seed: pick(args.seed, file.seed, 1),
        out_dir: resolve_out_dir(args.out_dir.clone(), file.out_dir.clone()),
        formats: match pick_opt(args.formats.clone(), file.formats.clone()) {
            Some(names) => Formats::parse(&names)?,
            None => Formats::all(),
        },
        plot: PlotOptions {
            width: pick(args.width, file.width, defaults.width),
            height: pick(args.height, file.height, defaults.height),
        },
        per_trace: args.per_trace || file.per_trace.unwrap_or(false),
        prefix: args
            .prefix
            .clone()
            .unwrap_or_else(|| default_prefix.to_string()),
    })
}

fn emit_ensembles(run: &ResolvedRun, ensembles: &[TraceEnsemble]) -> Result<()> {
    fs::create_dir_all(&run.out_dir).map_err(|e| HarnessError::io(&run.out_dir, e))?;
    for ensemble in ensembles {
        let stem = format!("{}-{}", run.prefix, ensemble.metadata.algorithm);
        if run.formats.csv {
            let path = run.out_dir.join(format!("{stem}.csv"));
            write_csv(ensemble, &path)?;
            println!("wrote {}", path.display());
        }
        if run.formats.json {
            let path = run.out_dir.join(format!("{stem}.json"));
            write_json(ensemble, &path)?;
            println!("wrote {}", path.display());
        }
    }
    if run.formats.svg {
        let path = run.out_dir.join(format!("{}.svg", run.prefix));
        write_svg(ensembles, run.plot, &path)?;
        println!("wrote {}", path.display());
    }
    for ensemble in ensembles {
        println!(
            "{:<16} final mean regret {:+.4} over {} traces",
            ensemble.metadata.algorithm,
            ensemble.final_mean_regret(),
            ensemble.metadata.num_traces
        );
    }
    Ok(())
}

fn cmd_ingest(
    input: &PathBuf,
    output: &PathBuf,
    map: &ColumnMap,
) -> Result<()> {
    let (panel, report) = import_raw(input, map)?;
    write_normalized(&panel, &report.event_ids, output)?;
    println!(
        "ingested {} events x {} experts from {}",
        report.event_ids.len(),
        report.experts_kept,
        input.display()
    );
    if report.dropped_experts.is_empty() {
        println!("dropped 0 incomplete experts");
    } else {
        println!(
            "dropped {} incomplete experts: {}",
            report.dropped_experts.len(),
            report.dropped_experts.join(", ")
        );
    }
    println!("wrote {}", output.display());
    Ok(())
}

fn cmd_simulate(
    args: &RunArgs,
    k: Option<usize>,
    t: Option<usize>,
    rate_early: Option<f64>,
    rate_late: Option<f64>,
) -> Result<()> {
    let file = load_config_opt(args.config.as_ref())?;
    let run = resolve_run(args, &file, "simulate")?;
    let mut spec = SimulationSpec::new(
        pick(k, file.k, 9),
        pick(t, file.t, 250),
        run.repetitions,
    );
    spec.rate_early = pick(rate_early, file.rate_early, spec.rate_early);
    spec.rate_late = pick(rate_late, file.rate_late, spec.rate_late);
    let ensembles = run_monte_carlo(
        &spec,
        &run.algorithms,
        RngStream::new(run.seed, 0),
        run.per_trace,
    )?;
    emit_ensembles(&run, &ensembles)
}

fn cmd_bench(
    input: &PathBuf,
    args: &RunArgs,
    group_size: Option<usize>,
    num_groups: Option<usize>,
) -> Result<()> {
    let file = load_config_opt(args.config.as_ref())?;
    let run = resolve_run(args, &file, "bench")?;
    let (panel, report) = ingest_panel(input)?;
    if !report.dropped_experts.is_empty() {
        println!(
            "dropped {} incomplete experts during ingestion",
            report.dropped_experts.len()
        );
    }
    let base = RngStream::new(run.seed, 0);
    let panels = match pick_opt(group_size, file.group_size) {
        Some(size) => sample_expert_groups(
            &panel,
            size,
            pick(num_groups, file.num_groups, 10),
            base.substream(1),
        )?,
        None => {
            if pick_opt(num_groups, file.num_groups).is_some() {
                return Err(HarnessError::validation(
                    "num_groups without group_size has nothing to sample",
                ));
            }
            vec![panel]
        }
    };
    let ensembles = run_benchmark(&panels, &run.algorithms, run.repetitions, base, run.per_trace)?;
    emit_ensembles(&run, &ensembles)
}

fn cmd_audit(builtin: Option<&str>, context: Option<&PathBuf>, eta: Option<f64>) -> Result<()> {
    let request = match (builtin, context) {
        (Some(name), None) => audit_cmd::builtin(name, eta)?,
        (None, Some(path)) => audit_cmd::from_file(path)?,
        _ => {
            return Err(HarnessError::validation(
                "audit needs exactly one of --builtin or --context",
            ))
        }
    };
    let report = request.run()?;
    print!("{}", audit_cmd::format_report(&request, &report));
    Ok(())
}

fn cmd_plot(
    inputs: &[PathBuf],
    output: &PathBuf,
    width: Option<u32>,
    height: Option<u32>,
) -> Result<()> {
    if inputs.is_empty() {
        return Err(HarnessError::validation("plot needs at least one JSON file"));
    }
    let ensembles = inputs
        .iter()
        .map(read_json)
        .collect::<Result<Vec<_>>>()?;
    let defaults = PlotOptions::default();
    let opts = PlotOptions {
        width: width.unwrap_or(defaults.width),
        height: height.unwrap_or(defaults.height),
    };
    write_svg(&ensembles, opts, output)?;
    println!("wrote {}", output.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Ingest {
            input,
            output,
            event_column,
            expert_column,
            report_column,
            outcome_column,
        } => cmd_ingest(
            input,
            output,
            &ColumnMap {
                event: event_column.clone(),
                expert: expert_column.clone(),
                report: report_column.clone(),
                outcome: outcome_column.clone(),
            },
        ),
        Cmd::Simulate {
            run,
            k,
            t,
            rate_early,
            rate_late,
        } => cmd_simulate(run, *k, *t, *rate_early, *rate_late),
        Cmd::Bench {
            input,
            run,
            group_size,
            num_groups,
        } => cmd_bench(input, run, *group_size, *num_groups),
        Cmd::Audit {
            builtin,
            context,
            eta,
        } => cmd_audit(builtin.as_deref(), context.as_ref(), *eta),
        Cmd::Plot {
            inputs,
            output,
            width,
            height,
        } => cmd_plot(inputs, output, *width, *height),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
