use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use diagraph::grammar::{bundled, parse_grammar};
use diagraph::io::{emit_overlay, fixture, read_diagram, write_solutions, Timing, FIXTURES};
use diagraph::{Config, Scene};

#[derive(Parser)]
#[command(name = "diagraph", version, about = "Parse vector diagrams with constraint grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a diagram and write the solution file.
    Parse(ParseArgs),
    /// Print spatial index occupancy statistics.
    Index {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, env = "DIAGRAPH_CONFIG")]
        config: Option<PathBuf>,
    },
    /// Write a bundled fixture diagram.
    Gen {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParseArgs {
    /// Grammar file, or `g1` / `g2` for the bundled grammars.
    #[arg(long)]
    grammar: String,
    #[arg(long)]
    diagram: PathBuf,
    #[arg(long)]
    start: String,
    #[arg(long)]
    out: PathBuf,
    /// SVG overlay of the solutions.
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// TOML file overriding thresholds.
    #[arg(long, env = "DIAGRAPH_CONFIG")]
    config: Option<PathBuf>,
    /// Print the search trace to stderr.
    #[arg(long)]
    trace: bool,
    /// Print index and parse durations as key=value lines.
    #[arg(long)]
    timing: bool,
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let src = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    Config::from_toml(&src).with_context(|| format!("invalid config {}", path.display()))
}

fn load_grammar_source(name: &str) -> Result<String> {
    let path = Path::new(name);
    if path.is_file() {
        return fs::read_to_string(path).with_context(|| format!("cannot read grammar {name}"));
    }
    match bundled(name) {
        Some(src) => Ok(src.to_string()),
        None => Err(anyhow!("cannot read grammar {name}: no such file")),
    }
}

fn cmd_parse(args: &ParseArgs) -> Result<()> {
    let config = load_config(args.config.as_deref())?;
    let src = load_grammar_source(&args.grammar)?;
    let grammar = parse_grammar(&src).with_context(|| format!("grammar {}", args.grammar))?;
    let diagram = read_diagram::<f64>(&args.diagram).with_context(|| format!("diagram {}", args.diagram.display()))?;

    let t0 = Instant::now();
    let mut scene = Scene::new(diagram.primitives, config)?;
    let index_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let outcome = diagraph::Parser::new(&grammar, &mut scene)
        .with_trace(args.trace)
        .parse(&args.start)?;
    let parse_ms = t1.elapsed().as_secs_f64() * 1e3;

    if args.trace {
        for event in &outcome.trace {
            eprintln!("{event}");
        }
    }
    let grammar_name = Path::new(&args.grammar)
        .file_stem()
        .map_or(args.grammar.clone(), |s| s.to_string_lossy().into_owned());
    write_solutions(
        &grammar_name,
        &outcome.forest,
        &scene,
        Timing { index_ms, parse_ms },
        &args.out,
    )?;
    if let Some(path) = &args.overlay {
        emit_overlay(&scene, &outcome.forest, path)?;
    }
    println!("solutions={}", outcome.forest.len());
    if args.timing {
        println!("index_ms={index_ms:.3}");
        println!("parse_ms={parse_ms:.3}");
        println!("tuples_examined={}", outcome.stats.tuples_examined);
    }
    Ok(())
}

fn cmd_index(diagram: &Path, config: Option<&Path>) -> Result<()> {
    let config = load_config(config)?;
    let d = read_diagram::<f64>(diagram).with_context(|| format!("diagram {}", diagram.display()))?;
    let scene = Scene::new(d.primitives, config)?;
    let stats = scene.index().stats();
    println!("objects={}", stats.objects);
    println!("inverse_cells={}", stats.inverse_cells);
    for l in &stats.levels {
        let histogram: Vec<String> = l
            .histogram
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(k, n)| format!("{k}:{n}"))
            .collect();
        println!(
            "level={} grid={} occupied={} entries={} max_per_cell={} histogram={}",
            l.level,
            l.grid,
            l.occupied_cells,
            l.total_entries,
            l.max_per_cell,
            histogram.join(",")
        );
    }
    Ok(())
}

fn cmd_gen(name: &str, out: Option<&Path>) -> Result<()> {
    let file = fixture(name).map_err(|_| anyhow!("unknown fixture {name}; expected one of {}", FIXTURES.join(", ")))?;
    match out {
        Some(path) => {
            file.write(path)?;
            eprintln!("wrote {} primitives to {}", file.primitives.len(), path.display());
        }
        None => print!("{}", file.to_json()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parse(args) => cmd_parse(args),
        Command::Index { diagram, config } => cmd_index(diagram, config.as_deref()),
        Command::Gen { name, out } => cmd_gen(name, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
