//! The `verify` command: every module invariant as a named check with a
//! measured residual. Exit 0 only when all checks pass.

use std::fmt::Write as _;

use num_complex::Complex64;
use qutrit_teleport::linalg::{
    apply, dagger, hermitian_eigenvalues, inner, singular_values, tensor, Ket, Operator,
};
use qutrit_teleport::protocol::{club, kraus_branch_probabilities, outcome_distribution};
use qutrit_teleport::states::{
    channel, collapsed_state, computational_from_leslie, leslie_state, printed_correction,
    probe_states, synthesize_correction, ChannelKind,
};
use qutrit_teleport::tolerance;
use serde::{Deserialize, Serialize};

use crate::output::{csv_row, num, pass_fail, to_json, FormatArg, Sink};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub channel: Option<ChannelKind>,
    pub checks: Vec<VerifyCheck>,
    pub passed: bool,
}

fn check(name: String, residual: f64, tolerance: f64) -> VerifyCheck {
    VerifyCheck {
        name,
        residual,
        tolerance,
        pass: residual <= tolerance,
    }
}

/// Row k of the Gram matrix against the identity: one orthonormality check
/// per basis vector.
fn leslie_orthonormality_residual(k: usize) -> f64 {
    let psi_k = leslie_state(k).unwrap();
    let mut worst = 0.0f64;
    for j in 0..9 {
        let g = inner(&psi_k, &leslie_state(j).unwrap()).unwrap();
        let expected = if j == k { Complex64::ONE } else { Complex64::ZERO };
        worst = worst.max((g - expected).norm());
    }
    worst
}

fn leslie_completeness_residual() -> f64 {
    let mut sum = Operator::zeros(9).unwrap();
    for k in 0..9 {
        let psi = leslie_state(k).unwrap();
        sum = sum.add(&Operator::outer(&psi, &psi).unwrap()).unwrap();
    }
    sum.max_abs_diff(&Operator::identity(9).unwrap())
}

fn leslie_reconstruction_residual() -> f64 {
    let mut worst = 0.0f64;
    for b in 0..3 {
        for c in 0..3 {
            let mut resum = Ket::new(vec![3, 3], vec![Complex64::ZERO; 9]).unwrap();
            for (k, coeff) in computational_from_leslie(b, c).unwrap() {
                resum = resum.add(&leslie_state(k).unwrap().scale(coeff)).unwrap();
            }
            worst = worst.max(resum.sub(&Ket::computational(&[b, c]).unwrap()).unwrap().norm());
        }
    }
    worst
}

fn decomposition_residual(kind: ChannelKind) -> f64 {
    let mut worst = 0.0f64;
    for phi in probe_states() {
        let xi = club(&phi, kind);
        let mut resum = Ket::new(vec![3, 3, 3], vec![Complex64::ZERO; 27]).unwrap();
        for k in 0..9 {
            let branch = collapsed_state(kind, k, &phi).unwrap();
            resum = resum
                .add(&tensor(&leslie_state(k).unwrap(), &branch))
                .unwrap();
        }
        worst = worst.max(resum.sub(&xi).unwrap().norm());
    }
    worst
}

fn born_completeness_residual(kind: ChannelKind) -> f64 {
    probe_states()
        .iter()
        .map(|phi| (outcome_distribution(phi, kind).iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

fn unitarity_residual(ops: &[Operator]) -> f64 {
    let id = Operator::identity(3).unwrap();
    ops.iter()
        .map(|u| dagger(u).mul(u).unwrap().max_abs_diff(&id))
        .fold(0.0, f64::max)
}

/// max over outcomes and probes of ‖O_k·ŝ_k − φ‖ with ŝ in the printed
/// reference scale.
fn retrieval_residual(kind: ChannelKind, ops: &[Operator]) -> f64 {
    let scale = Complex64::new(kind.branch_scale(), 0.0);
    let probes = probe_states();
    let mut worst = 0.0f64;
    for (k, op) in ops.iter().enumerate() {
        for phi in &probes {
            let branch = collapsed_state(kind, k, phi).unwrap().scale(scale);
            let out = apply(op, &branch).unwrap();
            worst = worst.max(out.sub(&phi.ket()).unwrap().norm());
        }
    }
    worst
}

fn synthesized_ops(kind: ChannelKind) -> Vec<Operator> {
    (0..9)
        .map(|k| synthesize_correction(kind, k).unwrap().op)
        .collect()
}

fn kraus_sigma_residual(ops: &[Operator]) -> f64 {
    ops.iter()
        .map(|op| (singular_values(op).unwrap()[0] - 1.0).abs())
        .fold(0.0, f64::max)
}

fn kraus_psd_residual(ops: &[Operator]) -> f64 {
    let id = Operator::identity(3).unwrap();
    ops.iter()
        .map(|op| {
            let residual = id.sub(&dagger(op).mul(op).unwrap()).unwrap();
            let min = hermitian_eigenvalues(&residual)
                .unwrap()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            (-min).max(0.0)
        })
        .fold(0.0, f64::max)
}

fn kraus_total_probability_residual(kind: ChannelKind) -> f64 {
    let mut worst = 0.0f64;
    for phi in probe_states() {
        for k in 0..9 {
            let (success, failure) = kraus_branch_probabilities(kind, k, &phi).unwrap();
            worst = worst.max((success + failure - 1.0).abs());
        }
    }
    worst
}

pub fn build_report(channel_filter: Option<ChannelKind>, corrupt: bool) -> VerifyReport {
    let kinds: Vec<ChannelKind> = match channel_filter {
        Some(kind) => vec![kind],
        None => ChannelKind::ALL.to_vec(),
    };

    let mut checks: Vec<VerifyCheck> = (0..9)
        .map(|k| {
            check(
                format!("leslie-orthonormality-{k}"),
                leslie_orthonormality_residual(k),
                tolerance::EQ,
            )
        })
        .collect();
    checks.extend([
        check(
            "leslie-completeness".into(),
            leslie_completeness_residual(),
            tolerance::EQ,
        ),
        check(
            "leslie-reconstruction".into(),
            leslie_reconstruction_residual(),
            tolerance::EQ,
        ),
        check(
            "channel-orthogonality".into(),
            inner(&channel(ChannelKind::Unitary), &channel(ChannelKind::NonUnitary))
                .unwrap()
                .norm(),
            tolerance::EQ,
        ),
    ]);

    for &kind in &kinds {
        checks.push(check(
            format!("decomposition-{kind}"),
            decomposition_residual(kind),
            tolerance::EQ,
        ));
        checks.push(check(
            format!("born-completeness-{kind}"),
            born_completeness_residual(kind),
            tolerance::EQ,
        ));
        if kind == ChannelKind::Unitary {
            let mut printed: Vec<Operator> = (0..9)
                .map(|k| printed_correction(kind, k).unwrap().op)
                .collect();
            if corrupt {
                // test hook: break U₄ so the retrieval check must fail
                let bumped = printed[4].get(0, 1) + Complex64::new(1e-3, 0.0);
                printed[4].set(0, 1, bumped);
            }
            checks.push(check(
                "unitarity-u-printed".into(),
                unitarity_residual(&printed),
                tolerance::EQ,
            ));
            checks.push(check(
                "retrieval-u-printed".into(),
                retrieval_residual(kind, &printed),
                tolerance::AUDIT_RESIDUAL,
            ));
        }
        let synthesized = synthesized_ops(kind);
        checks.push(check(
            format!("retrieval-{kind}-synthesized"),
            retrieval_residual(kind, &synthesized),
            1e-10,
        ));
        checks.push(check(
            format!("kraus-sigma-max-{kind}"),
            kraus_sigma_residual(&synthesized),
            1e-10,
        ));
        checks.push(check(
            format!("kraus-psd-{kind}"),
            kraus_psd_residual(&synthesized),
            1e-10,
        ));
        checks.push(check(
            format!("kraus-total-probability-{kind}"),
            kraus_total_probability_residual(kind),
            1e-10,
        ));
    }

    let passed = checks.iter().all(|c| c.pass);
    VerifyReport {
        schema_version: 1,
        channel: channel_filter,
        checks,
        passed,
    }
}

fn render_text(report: &VerifyReport, color: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<34} {:>12} {:>10} status",
        "check", "residual", "tolerance"
    );
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{:<34} {:>12.3e} {:>10.0e} {}",
            c.name,
            c.residual,
            c.tolerance,
            pass_fail(c.pass, color)
        );
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "{passed}/{} checks passed", report.checks.len());
    if !report.passed {
        for c in report.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(s, "failed: {} (residual {:.6e})", c.name, c.residual);
        }
    }
    s
}

fn render_csv(report: &VerifyReport) -> String {
    let mut s = csv_row(["name", "residual", "tolerance", "pass"].map(String::from));
    for c in &report.checks {
        s.push_str(&csv_row([
            c.name.clone(),
            num(c.residual),
            num(c.tolerance),
            c.pass.to_string(),
        ]));
    }
    s
}

pub fn execute(
    channel: Option<ChannelKind>,
    corrupt: bool,
    format: FormatArg,
    sink: &Sink,
) -> Result<i32, CliError> {
    let report = build_report(channel, corrupt);
    let content = match format {
        FormatArg::Text => render_text(&report, sink.color(format)),
        FormatArg::Json => to_json(&report)?,
        FormatArg::Csv => render_csv(&report),
    };
    sink.write(&content)?;
    Ok(if report.passed { 0 } else { 1 })
}
