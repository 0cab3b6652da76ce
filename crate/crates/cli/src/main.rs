//! Command-line front end: runs scenarios, re-verifies persisted traces,
//! emits built-in scenarios, and renders traces to SVG frames.
//!
//! Exit codes: 0 for success (a run that near-gathers), 1 for any error,
//! 2 for a run stopped by the round cap.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use swarmwave::sim::{gen, run_with_options, trace, RunOptions, Scenario, Termination, Trace};

#[derive(Parser)]
#[command(name = "swarmwave", version, about = "Near-gathering protocol simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and export its trace.
    Run(RunArgs),
    /// Re-verify a persisted trace against a fresh replay.
    Audit(AuditArgs),
    /// List built-in scenario generators or emit one as a scenario file.
    Scenarios(ScenariosArgs),
    /// Render a persisted trace to one SVG per round.
    Render(RenderArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for exported trace files; nothing is written without it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated exports: csv, json, svg.
    #[arg(long, default_value = "csv,json", value_delimiter = ',')]
    format: Vec<String>,
    /// Audit stride: run audits every K-th round.
    #[arg(long, default_value_t = 1, value_name = "K")]
    audit_every: usize,
    /// Scenario field override, repeatable.
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Keep every K-th frame when exporting SVG.
    #[arg(long, default_value_t = 1, value_name = "K")]
    frames_every: usize,
}

#[derive(Args)]
struct AuditArgs {
    /// Trace JSON file to verify.
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args)]
struct ScenariosArgs {
    /// Generator to emit; omit to list all generators.
    name: Option<String>,
    /// Directory for the emitted scenario file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lattice shape for grid_polygon: square, triangle or hexagon.
    #[arg(long, default_value = "square")]
    shape: String,
    /// Robots per side for grid_polygon.
    #[arg(long, default_value_t = 5, value_name = "N")]
    side_count: usize,
    /// Lattice spacing for grid_polygon.
    #[arg(long, default_value_t = 0.7)]
    spacing: f64,
    /// Fold count for m_fold.
    #[arg(long, default_value_t = 4, value_name = "M")]
    fold: usize,
    /// Jitter half-width for m_fold base points.
    #[arg(long, default_value_t = 0.05)]
    jitter: f64,
    /// Jitter seed for m_fold.
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// Scenario field override applied to the emitted scenario, repeatable.
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct RenderArgs {
    /// Trace JSON file to render.
    #[arg(long)]
    trace: PathBuf,
    /// Directory for the frames (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Render every K-th round (the final round is always included).
    #[arg(long, default_value_t = 1, value_name = "K")]
    frames_every: usize,
    /// Draw the viewing-range circle around this robot index.
    #[arg(long, value_name = "INDEX")]
    range_circle: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Audit(args) => cmd_audit(&args),
        Command::Scenarios(args) => cmd_scenarios(&args),
        Command::Render(args) => cmd_render(&args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode, String> {
    let mut scenario = load_scenario(&args.scenario)?;
    apply_overrides(&mut scenario, &args.set)?;
    for format in &args.format {
        if !matches!(format.as_str(), "csv" | "json" | "svg") {
            return Err(format!("unknown format {format:?} (csv, json or svg)"));
        }
    }

    let mut options = RunOptions::from_env();
    options.audit_every = args.audit_every.max(1);
    let trace = run_with_options(&scenario, &options);

    print_summary(&trace);
    if let Some(out) = &args.out {
        export(&trace, out, &args.format, args.frames_every)?;
    }
    Ok(match &trace.termination {
        Termination::NearGathering => ExitCode::from(0),
        Termination::Error(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Termination::MaxRounds => ExitCode::from(2),
    })
}

/// One line: outcome, rounds stepped, and the before/after of the metrics
/// that matter (diameter, symmetricity), plus the audit failure count.
fn print_summary(trace: &Trace) {
    let outcome = match &trace.termination {
        Termination::NearGathering => "near-gathering",
        Termination::MaxRounds => "round cap",
        Termination::Error(_) => "error",
    };
    let steps = trace.rounds().saturating_sub(1);
    let (diameter, symmetricity) = match (trace.records.first(), trace.records.last()) {
        (Some(first), Some(last)) => (
            format!("{} -> {}", first.diameter, last.diameter),
            format!("{} -> {}", first.symmetricity, last.symmetricity),
        ),
        _ => ("-".to_string(), "-".to_string()),
    };
    println!(
        "{}: {} after {} rounds, diameter {}, symmetricity {}, audit failures {}",
        trace.scenario.name,
        outcome,
        steps,
        diameter,
        symmetricity,
        trace.audit_failures(),
    );
}

fn export(trace: &Trace, out: &Path, formats: &[String], frames_every: usize) -> Result<(), String> {
    std::fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    for format in formats {
        match format.as_str() {
            "csv" => {
                write_file(&out.join("metrics.csv"), &trace::metrics_csv(trace))?;
                write_file(&out.join("positions.csv"), &trace::positions_csv(trace))?;
            }
            "json" => {
                let text = trace::to_json(trace).map_err(|e| e.to_string())?;
                write_file(&out.join("trace.json"), &text)?;
            }
            "svg" => {
                let frames = out.join("frames");
                let written = svg::render_frames(trace, &frames, frames_every, None)?;
                println!("wrote {} frames to {}", written, frames.display());
            }
            _ => unreachable!("formats validated up front"),
        }
    }
    Ok(())
}

fn cmd_audit(args: &AuditArgs) -> Result<ExitCode, String> {
    let trace = load_trace(&args.trace)?;
    let issues = trace::verify_trace(&trace);
    if issues.is_empty() {
        println!(
            "{}: verified, {} rounds, {} audit failures recorded",
            trace.scenario.name,
            trace.rounds(),
            trace.audit_failures(),
        );
        return Ok(ExitCode::from(0));
    }
    for issue in &issues {
        eprintln!("{issue}");
    }
    eprintln!("{}: {} discrepancies", trace.scenario.name, issues.len());
    Ok(ExitCode::from(1))
}

fn cmd_scenarios(args: &ScenariosArgs) -> Result<ExitCode, String> {
    let catalog = gen::scenario_catalog();
    let Some(name) = &args.name else {
        for (name, description, _) in &catalog {
            println!("{name}: {description}");
        }
        return Ok(ExitCode::from(0));
    };

    let mut scenario = build_scenario(name, args)?;
    apply_overrides(&mut scenario, &args.set)?;
    scenario.validate().map_err(|e| e.to_string())?;
    let text = trace::scenario_to_json(&scenario).map_err(|e| e.to_string())?;
    match &args.out {
        Some(out) => {
            std::fs::create_dir_all(out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;
            let path = out.join(format!("{}.json", scenario.name));
            write_file(&path, &text)?;
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(ExitCode::from(0))
}

/// Builds the named scenario, honoring the generator-specific flags.
fn build_scenario(name: &str, args: &ScenariosArgs) -> Result<Scenario, String> {
    match name {
        "grid_polygon" => {
            let shape = gen::GridShape::parse(&args.shape).map_err(|e| e.to_string())?;
            let config = gen::gen_grid_polygon(shape, args.side_count, args.spacing)
                .map_err(|e| e.to_string())?;
            let mut scenario = Scenario::new(
                "grid_polygon",
                swarmwave::sim::Protocol::Wave,
                0.3,
                config.positions().iter().map(|p| (p.x, p.y)).collect(),
            )
            .with_default_audits();
            // Sparse lattices carry cell gaps wider than the default unit
            // hole bound; keep the emitted scenario runnable as-is.
            if args.spacing > std::f64::consts::FRAC_1_SQRT_2 {
                scenario.hole_check_delta = 0.0;
            }
            Ok(scenario)
        }
        "m_fold" => {
            let base = [(1.5, 0.2), (0.9, 0.0), (1.1, 0.6)];
            let config = gen::gen_m_fold(args.fold, &base, args.jitter, args.seed)
                .map_err(|e| e.to_string())?;
            let mut scenario = Scenario::new(
                "m_fold",
                swarmwave::sim::Protocol::Gta,
                0.03,
                config.positions().iter().map(|p| (p.x, p.y)).collect(),
            )
            .with_default_audits();
            scenario.max_rounds = 500;
            Ok(scenario)
        }
        "figure1a" => Ok(gen::gen_figure1a()),
        "figure1b" => Ok(gen::gen_figure1b()),
        _ => Err(format!(
            "unknown generator {name:?}; `swarmwave scenarios` lists the built-ins"
        )),
    }
}

fn cmd_render(args: &RenderArgs) -> Result<ExitCode, String> {
    let trace = load_trace(&args.trace)?;
    if trace.records.is_empty() {
        return Err("trace has no recorded rounds".to_string());
    }
    let written = svg::render_frames(&trace, &args.out, args.frames_every, args.range_circle)?;
    println!("wrote {} frames to {}", written, args.out.display());
    Ok(ExitCode::from(0))
}

fn load_scenario(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    trace::scenario_from_json(&text).map_err(|e| e.to_string())
}

fn load_trace(path: &Path) -> Result<Trace, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    trace::from_json(&text).map_err(|e| e.to_string())
}

fn apply_overrides(scenario: &mut Scenario, overrides: &[String]) -> Result<(), String> {
    for entry in overrides {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| format!("override {entry:?} is not key=value"))?;
        scenario.set(key, value).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
