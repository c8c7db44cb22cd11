use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsep::scenario::{self, Overrides, ScenarioDoc};
use qsep::{EstimationMode, Error, Rule, TiePolicy};

#[derive(Parser)]
#[command(name = "qsep", version, about = "Quantum-counting set separation runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every observation of a scenario and write the results.
    Run(RunArgs),
    /// Check a scenario without running it.
    Validate { config: PathBuf },
    /// Write per-set likelihood curves only.
    Curve(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Output directory.
    #[arg(short, long, default_value = "qsep-out")]
    out: PathBuf,
    #[arg(long)]
    mode: Option<ModeArg>,
    #[arg(long)]
    rule: Option<RuleArg>,
    #[arg(long)]
    repeats: Option<u32>,
    /// Counting-register size.
    #[arg(long = "t")]
    t_qubits: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tie_policy: Option<TieArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Quantum,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Ml,
    Map,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Report,
    Lowest,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            mode: self.mode.map(|m| match m {
                ModeArg::Exact => EstimationMode::Exact,
                ModeArg::Quantum => EstimationMode::Quantum,
            }),
            rule: self.rule.map(|r| match r {
                RuleArg::Ml => Rule::Ml,
                RuleArg::Map => Rule::Map,
            }),
            repeats: self.repeats,
            t_qubits: self.t_qubits,
            seed: self.seed,
            tie_policy: self.tie_policy.map(|t| match t {
                TieArg::Report => TiePolicy::Report,
                TieArg::Lowest => TiePolicy::LowestSetId,
            }),
        }
    }
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Resource { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn load(config: &Path, overrides: &Overrides) -> Result<(ScenarioDoc, PathBuf), Error> {
    let (mut doc, base) = ScenarioDoc::load(config)?;
    overrides.apply(&mut doc);
    Ok((doc, base))
}

fn execute(args: &RunArgs, curves_only: bool) -> Result<(), Error> {
    let (doc, base) = load(&args.config, &args.overrides())?;
    let scenario = scenario::build(&doc, &base)?;
    let report = if curves_only {
        scenario.run_curves()?
    } else {
        scenario.run()?
    };
    for path in report.write_to(&args.out)? {
        eprintln!("wrote {}", path.display());
    }
    for s in &report.sets {
        eprintln!(
            "set {}: {} points, {} data qubits{}",
            s.set_id,
            s.total_points,
            s.n_qubits,
            s.t_qubits.map(|t| format!(", {t} counting qubits")).unwrap_or_default()
        );
    }
    eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => execute(args, false),
        Command::Curve(args) => execute(args, true),
        Command::Validate { config } => load(config, &Overrides::default()).and_then(|(doc, base)| {
            let findings = scenario::validate(&doc, &base);
            if findings.is_empty() {
                println!("ok");
                Ok(())
            } else {
                Err(Error::Validation(findings))
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
