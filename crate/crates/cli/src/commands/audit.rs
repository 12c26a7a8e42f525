//! The `audit` command: informational comparison of printed operators and
//! branch states against first-principles projections. Always exits 0 —
//! discrepancies are findings, not failures.

use std::fmt::Write as _;

use qutrit_teleport::states::{channel_audit, AuditEntry, ChannelAudit, ChannelKind};

use crate::output::{csv_row, num, to_json, FormatArg, Sink};
use crate::CliError;

fn verdict(entry: &AuditEntry) -> &'static str {
    if entry.holds_exactly {
        "exact"
    } else if entry.holds_proportionally {
        "proportional"
    } else {
        "no-retrieval"
    }
}

fn render_text(report: &ChannelAudit) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "channel: {}   probe set: {}",
        report.channel, report.probe_set
    );
    let _ = writeln!(
        s,
        "{:<8} {:<12} {:<13} {:>14} {:>14} {:>23} {:>10} {:>11}",
        "outcome",
        "provenance",
        "verdict",
        "residual-exact",
        "residual-prop",
        "best-fit-c",
        "op-diff",
        "state-diff"
    );
    for oa in &report.outcomes {
        for (provenance, entry) in [("printed", &oa.printed), ("synthesized", &oa.synthesized)] {
            let c = entry.witness.best_fit_c;
            let _ = writeln!(
                s,
                "{:<8} {:<12} {:<13} {:>14.3e} {:>14.3e} {:>+11.6}{:+.6}i {:>10.3e} {:>11.3e}",
                oa.outcome,
                provenance,
                verdict(entry),
                entry.witness.residual_exact,
                entry.witness.residual_proportional,
                c.re,
                c.im,
                oa.operator_diff_max,
                oa.state_diff_max
            );
        }
    }
    s
}

fn render_csv(report: &ChannelAudit) -> String {
    let mut s = csv_row(
        [
            "outcome",
            "provenance",
            "holds_exactly",
            "holds_proportionally",
            "residual_exact",
            "residual_proportional",
            "best_fit_c_re",
            "best_fit_c_im",
            "c_spread",
            "operator_diff_max",
            "state_diff_max",
        ]
        .map(String::from),
    );
    for oa in &report.outcomes {
        for (provenance, entry) in [("printed", &oa.printed), ("synthesized", &oa.synthesized)] {
            s.push_str(&csv_row([
                oa.outcome.to_string(),
                provenance.to_string(),
                entry.holds_exactly.to_string(),
                entry.holds_proportionally.to_string(),
                num(entry.witness.residual_exact),
                num(entry.witness.residual_proportional),
                num(entry.witness.best_fit_c.re),
                num(entry.witness.best_fit_c.im),
                num(entry.witness.c_spread),
                num(oa.operator_diff_max),
                num(oa.state_diff_max),
            ]));
        }
    }
    s
}

pub fn execute(kind: ChannelKind, format: FormatArg, sink: &Sink) -> Result<i32, CliError> {
    let report = channel_audit(kind);
    let content = match format {
        FormatArg::Text => render_text(&report),
        FormatArg::Json => to_json(&report)?,
        FormatArg::Csv => render_csv(&report),
    };
    sink.write(&content)?;
    Ok(0)
}
