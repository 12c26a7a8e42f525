//! The `run` command: seeded Monte Carlo teleportation.

use std::fmt::Write as _;

use qutrit_teleport::protocol::{run_monte_carlo, CorrectionMode, PhiSpec, RunReport};
use qutrit_teleport::states::ChannelKind;

use crate::output::{csv_row, num, to_json, FormatArg, Sink};
use crate::CliError;

fn mode_name(mode: CorrectionMode) -> &'static str {
    match mode {
        CorrectionMode::UnitaryPrinted => "unitary-paper",
        CorrectionMode::SynthesizedRescale => "synthesized-rescale",
        CorrectionMode::KrausProbabilistic => "kraus-probabilistic",
    }
}

fn render_text(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "channel: {}", report.channel);
    let _ = writeln!(s, "mode: {}", mode_name(report.mode));
    let _ = writeln!(s, "trials: {}", report.trials);
    let _ = writeln!(s, "seed: {}", report.seed);
    let _ = writeln!(s, "{:<8} {:>12} {:>12}", "outcome", "frequency", "closed-form");
    for (k, f) in report.frequencies.iter().enumerate() {
        match report.closed_form {
            Some(cf) => {
                let _ = writeln!(s, "{k:<8} {f:>12.9} {:>12.9}", cf[k]);
            }
            None => {
                let _ = writeln!(s, "{k:<8} {f:>12.9} {:>12}", "-");
            }
        }
    }
    let _ = writeln!(s, "mean fidelity: {:.12}", report.mean_fidelity);
    match report.post_selected_fidelity {
        Some(f) => {
            let _ = writeln!(s, "post-selected fidelity: {f:.12}");
        }
        None => {
            let _ = writeln!(s, "post-selected fidelity: -");
        }
    }
    let _ = writeln!(s, "success rate: {:.12}", report.success_rate);
    s
}

fn render_csv(report: &RunReport) -> String {
    let mut header = vec![
        "schema_version".to_string(),
        "channel".to_string(),
        "mode".to_string(),
        "trials".to_string(),
        "seed".to_string(),
    ];
    for k in 0..9 {
        header.push(format!("freq_{k}"));
    }
    for k in 0..9 {
        header.push(format!("closed_form_{k}"));
    }
    header.extend(
        ["mean_fidelity", "post_selected_fidelity", "success_rate"].map(String::from),
    );

    let mut row = vec![
        report.schema_version.to_string(),
        report.channel.to_string(),
        mode_name(report.mode).to_string(),
        report.trials.to_string(),
        report.seed.to_string(),
    ];
    row.extend(report.frequencies.iter().map(|&f| num(f)));
    match report.closed_form {
        Some(cf) => row.extend(cf.iter().map(|&p| num(p))),
        None => row.extend(std::iter::repeat_n(String::new(), 9)),
    }
    row.push(num(report.mean_fidelity));
    row.push(report.post_selected_fidelity.map(num).unwrap_or_default());
    row.push(num(report.success_rate));

    let mut s = csv_row(header);
    s.push_str(&csv_row(row));
    s
}

#[allow(clippy::too_many_arguments)]
pub fn execute(
    channel: ChannelKind,
    mode: CorrectionMode,
    trials: u64,
    seed: u64,
    phi_spec: &PhiSpec,
    format: FormatArg,
    sink: &Sink,
) -> Result<i32, CliError> {
    let report = run_monte_carlo(phi_spec, channel, mode, trials, seed)?;
    let content = match format {
        FormatArg::Text => render_text(&report),
        FormatArg::Json => to_json(&report)?,
        FormatArg::Csv => render_csv(&report),
    };
    sink.write(&content)?;
    Ok(0)
}
