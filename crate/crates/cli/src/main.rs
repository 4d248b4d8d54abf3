use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use braid_commutator::derived::{raw_derived, simplified_derived};
use braid_commutator::report::{emit_table, run, RunConfig};
use braid_commutator::scripts::{replay_with, SCRIPTS};
use braid_commutator::{catalog, emit, GroupFamily};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "braidcomm",
    version,
    about = "Commutator subgroups of generalized braid groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Gvb,
    Sg,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    JsonLines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// The ambient presentation.
    Ambient,
    /// The rewritten presentation of the commutator subgroup.
    Raw,
    /// The simplified presentation of the commutator subgroup.
    Simplified,
}

#[derive(Subcommand)]
enum Command {
    /// Run the claim registry and print a summary.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        group: GroupArg,
        /// Strand counts.
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
        n: Vec<i64>,
        /// Truncation windows.
        #[arg(long, value_delimiter = ',', default_values_t = [4])]
        window: Vec<i64>,
        /// Claim ids to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print a presentation in the text format.
    ExportPresentation {
        /// One of S, B, VB, WB, GVB, SG, UB.
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "ambient")]
        form: Form,
    },
    /// Replay a Tietze script on a truncated presentation.
    Replay {
        #[arg(long)]
        script: String,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Write the transcript here instead of stdout.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Recheck abelian invariants after every step.
        #[arg(long)]
        audit: bool,
    },
}

fn verify(group: GroupArg, n: Vec<i64>, window: Vec<i64>, claims: Vec<String>, format: Format) -> Result<ExitCode> {
    let groups = match group {
        GroupArg::Gvb => vec![GroupFamily::GVB],
        GroupArg::Sg => vec![GroupFamily::SG],
        GroupArg::All => vec![GroupFamily::GVB, GroupFamily::SG],
    };
    if let Some(bad) = n.iter().find(|&&n| n < 3) {
        bail!("strand count {bad} is below 3");
    }
    if let Some(bad) = window.iter().find(|&&w| w < 3) {
        bail!("window {bad} is below 3");
    }
    let report = run(&RunConfig {
        groups,
        ns: n,
        windows: window,
        claims,
    })?;
    match format {
        Format::Table => print!("{}", emit_table(&report)),
        Format::JsonLines => {
            for r in &report.results {
                println!("{}", serde_json::to_string(r)?);
            }
        }
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn export(group: &str, n: i64, form: Form) -> Result<()> {
    let family: GroupFamily = group.parse()?;
    let schema = match form {
        Form::Ambient => catalog(family, n)?,
        Form::Raw => raw_derived(family, n)?,
        Form::Simplified => simplified_derived(family, n)?,
    };
    print!("{}", emit(&schema));
    Ok(())
}

fn replay(script: &str, n: i64, window: i64, transcript: Option<PathBuf>, audit: bool) -> Result<ExitCode> {
    if !SCRIPTS.contains(&script) {
        bail!("unknown script {script}; expected one of {}", SCRIPTS.join(", "));
    }
    let run = replay_with(script, n, window, audit)?;
    let mut lines = run.presentation.transcript().join("\n");
    lines.push('\n');
    match &transcript {
        Some(path) => fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{lines}"),
    }
    let survivors: Vec<String> = run.interior_survivors().iter().map(|g| g.to_string()).collect();
    eprintln!(
        "{script} n={n} M={window}: {} eliminated, {} skipped, {} no-ops",
        run.eliminated, run.skipped, run.noops
    );
    eprintln!("interior survivors ({}): {}", survivors.len(), survivors.join(" "));
    if let Some(a) = run.presentation.audit() {
        eprintln!("audit: {} checks, {} failures", a.checks, a.failures.len());
        if !a.failures.is_empty() {
            for f in &a.failures {
                eprintln!("  {f}");
            }
            return Ok(ExitCode::FAILURE);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Verify {
            group,
            n,
            window,
            claims,
            format,
        } => verify(group, n, window, claims, format),
        Command::ExportPresentation { group, n, form } => {
            export(&group, n, form)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay {
            script,
            n,
            window,
            transcript,
            audit,
        } => replay(&script, n, window, transcript, audit),
    }
}
