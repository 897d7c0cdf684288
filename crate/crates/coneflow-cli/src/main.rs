use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coneflow_cli::suites::{self, Selection};
use coneflow_cli::{ExperimentConfig, HarnessError, Report, Setup, EXIT_OK, EXIT_RESOURCE, EXIT_VIOLATION};

#[derive(Parser)]
#[command(name = "coneflow", about = "Experiments with geodesic flows and cocycles on relatively hyperbolic groups")]
struct Cli {
    /// TOML experiment file; `modular` and `free-rel-a` name built-in presets.
    #[arg(long, global = true, default_value = "modular")]
    config: String,
    /// Constants profile (`paper` or `small`).
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Comma-separated exponents.
    #[arg(long, global = true, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for JSON and CSV reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    BuildBall,
    EstimateDelta,
    Mask {
        /// Target element as a word.
        #[arg(long)]
        target: Option<String>,
        /// Source element as a word.
        #[arg(long)]
        source: Option<String>,
    },
    Cocycle {
        /// Elements to evaluate; sampled when absent.
        #[arg(long)]
        element: Vec<String>,
    },
    Confluence,
    Checkpoint,
    CosetReps,
    Induce,
    Dichotomy,
    Geometry,
    /// Every suite.
    Suite,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match cli.config.as_str() {
        "modular" => ExperimentConfig::modular(),
        "free-rel-a" => ExperimentConfig::free_rel_a(),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{path}: {e}")))?;
            ExperimentConfig::from_toml(&text)?
        }
    };
    if let Some(name) = &cli.profile {
        config.profile.name = Some(name.clone());
    }
    if let Some(p) = &cli.p {
        config.run.p = p.clone();
    }
    if let Some(seed) = cli.seed {
        config.run.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.run.out = Some(out.clone());
    }
    if let Some(m) = cli.max_vertices {
        config.run.max_vertices = m;
    }
    if let Command::Cocycle { element } = &cli.command {
        if !element.is_empty() {
            config.run.elements = element.clone();
        }
    }
    config.validate()?;
    Ok(config)
}

fn suite_name(command: &Command) -> &'static str {
    match command {
        Command::BuildBall => "build-ball",
        Command::EstimateDelta => "estimate-delta",
        Command::Mask { .. } => "mask",
        Command::Cocycle { .. } => "cocycle",
        Command::Confluence => "confluence",
        Command::Checkpoint => "checkpoint",
        Command::CosetReps => "coset-reps",
        Command::Induce => "induce",
        Command::Dichotomy => "dichotomy",
        Command::Geometry => "geometry",
        Command::Suite => "suite",
    }
}

fn run(cli: &Cli) -> Result<i32, HarnessError> {
    let config = load(cli)?;
    let out = config.run.out.clone();
    let name = suite_name(&cli.command);
    let setup = match Setup::new(config.clone()) {
        Ok(s) => s,
        Err(HarnessError::Resource(e)) => {
            let profile = config.profile.name.clone().unwrap_or_else(|| "paper".into());
            let mut r = Report::new(name, &profile);
            r.partial = true;
            r.fail("resource cap", Vec::new(), e.to_string());
            emit(&r, out.as_deref())?;
            return Ok(EXIT_RESOURCE);
        }
        Err(e) => return Err(e),
    };
    let reports = match &cli.command {
        Command::Suite => suites::run_all(&setup)?,
        Command::Mask { target, source } => {
            let sel = Selection { target: target.clone(), source: source.clone() };
            vec![suites::run(name, &setup, &sel)?]
        }
        _ => vec![suites::run(name, &setup, &Selection::default())?],
    };
    let mut code = EXIT_OK;
    for r in &reports {
        emit(r, out.as_deref())?;
        if r.partial {
            code = code.max(EXIT_RESOURCE);
        } else if !r.passed {
            code = code.max(EXIT_VIOLATION);
        }
    }
    Ok(code)
}

fn emit(r: &Report, out: Option<&std::path::Path>) -> Result<(), HarnessError> {
    let status = if r.partial {
        "PARTIAL"
    } else if r.passed {
        "OK"
    } else {
        "VIOLATION"
    };
    println!("{:<15} {:<9} profile={} failures={}", r.suite, status, r.profile, r.failures.len());
    for f in r.failures.iter().take(5) {
        println!("  {}: [{}] {}", f.check, f.witness.join(", "), f.detail);
    }
    if let Some(dir) = out {
        r.write(dir)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
