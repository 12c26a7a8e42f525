//! Command-line front end for the qutrit teleportation engine.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qutrit_teleport::protocol::{CorrectionMode, PhiSpec};
use qutrit_teleport::states::{ChannelKind, Provenance, UnknownQutrit};

use qutrit_teleport_cli::output::{FormatArg, Sink};
use qutrit_teleport_cli::{commands, parse, CliError, ObjectArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    U,
    Nu,
}

impl From<ChannelArg> for ChannelKind {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::U => ChannelKind::Unitary,
            ChannelArg::Nu => ChannelKind::NonUnitary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Printed unitary corrections (channel u only).
    UnitaryPaper,
    /// Synthesized correction followed by renormalization.
    Rescale,
    /// Generalized two-outcome measurement; may fail per trial.
    Kraus,
}

impl From<ModeArg> for CorrectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::UnitaryPaper => CorrectionMode::UnitaryPrinted,
            ModeArg::Rescale => CorrectionMode::SynthesizedRescale,
            ModeArg::Kraus => CorrectionMode::KrausProbabilistic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProvenanceArg {
    Printed,
    Synthesized,
}

#[derive(Parser)]
#[command(
    name = "qutrit-teleport",
    version,
    about = "Simulate and verify single-qutrit teleportation over two-qutrit entangled channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity and retrieval verification suites.
    Verify {
        /// Restrict channel-specific checks to one channel.
        #[arg(long, value_enum)]
        channel: Option<ChannelArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Test hook: perturb one printed operator so a check must fail.
        #[arg(long, hide = true)]
        corrupt_operator: bool,
    },
    /// Audit printed corrections and branch states against projections.
    Audit {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo teleportation runs with reproducible seeding.
    Run {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed input state as three comma-separated complex coefficients
        /// in re[+imi] form, e.g. `0.6,0.8i,0`.
        #[arg(long)]
        state: Option<String>,
        /// Draw a fresh Haar-random input state every trial.
        #[arg(long)]
        random: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entanglement and fidelity table for both channels.
    Table {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print basis states, channels or correction operators in full precision.
    Dump {
        #[arg(value_enum)]
        object: ObjectArg,
        /// Required for `operators`.
        #[arg(long, value_enum)]
        channel: Option<ChannelArg>,
        #[arg(long, value_enum, default_value = "printed")]
        provenance: ProvenanceArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_phi_spec(state: Option<String>, random: bool) -> Result<PhiSpec, CliError> {
    match (state, random) {
        (Some(_), true) => Err(CliError::Usage(
            "--state and --random are mutually exclusive".into(),
        )),
        (None, false) => Err(CliError::Usage(
            "choose an input state: --state a,b,c or --random".into(),
        )),
        (None, true) => Ok(PhiSpec::Haar),
        (Some(spec), false) => {
            let [a, b, c] = parse::parse_state_triple(&spec).map_err(CliError::Usage)?;
            let norm = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr()).sqrt();
            // loose enough for hand-typed decimals like 0.577,0.577,0.577;
            // the state is renormalized exactly before use
            if (norm - 1.0).abs() > 1e-3 {
                return Err(CliError::Usage(format!(
                    "--state coefficients have norm {norm:.8}, expected 1 within 1e-3"
                )));
            }
            let phi = UnknownQutrit::new_normalized(a, b, c)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(PhiSpec::Fixed(phi))
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify {
            channel,
            format,
            out,
            corrupt_operator,
        } => commands::verify::execute(
            channel.map(ChannelKind::from),
            corrupt_operator,
            format,
            &Sink::new(out),
        ),
        Command::Audit { channel, format, out } => {
            commands::audit::execute(channel.into(), format, &Sink::new(out))
        }
        Command::Run {
            channel,
            mode,
            trials,
            seed,
            state,
            random,
            format,
            out,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let phi_spec = resolve_phi_spec(state, random)?;
            commands::run::execute(
                channel.into(),
                mode.into(),
                trials,
                seed,
                &phi_spec,
                format,
                &Sink::new(out),
            )
        }
        Command::Table { format, out } => commands::table::execute(format, &Sink::new(out)),
        Command::Dump {
            object,
            channel,
            provenance,
            format,
            out,
        } => {
            let provenance = match provenance {
                ProvenanceArg::Printed => Provenance::Printed,
                ProvenanceArg::Synthesized => Provenance::Synthesized,
            };
            commands::dump::execute(
                object,
                channel.map(ChannelKind::from),
                provenance,
                format,
                &Sink::new(out),
            )
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}
