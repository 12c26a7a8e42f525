//! The full teleportation pipeline: club, measure, communicate, correct.
//!
//! Corrections run in three modes. `UnitaryPrinted` applies the printed
//! unitary set (unitary channel only). `SynthesizedRescale` applies the
//! synthesized operator and renormalizes, the naive reading of a
//! non-unitary correction. `KrausProbabilistic` implements the synthesized
//! operator K as one branch of the generalized measurement {K, √(I − K†K)}:
//! it succeeds with probability ‖Kψ̂‖² and otherwise reports the failure
//! branch, so the physical cost of non-unitary retrieval is visible.
//!
//! Per-trial randomness comes from a counter-based generator keyed by
//! (master seed, trial index); trials are independent and aggregation runs
//! over fixed-size chunks combined in index order, so serial and parallel
//! executions produce bit-identical reports.

use crate::error::Error;
use crate::linalg::{apply, dagger, inner, Ket, Operator};
use crate::states::{
    channel, collapsed_state, printed_correction, synthesize_correction, ChannelKind,
    CorrectionOperator, UnknownQutrit,
};
use crate::tolerance;
use crate::Result;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How Bob turns the classical message into a correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrectionMode {
    /// Apply the printed unitary U_k. Valid only for the unitary channel.
    #[serde(rename = "unitary-paper")]
    UnitaryPrinted,
    /// Apply the synthesized operator, then renormalize.
    #[serde(rename = "synthesized-rescale")]
    SynthesizedRescale,
    /// Two-outcome generalized measurement {K, √(I − K†K)}.
    #[serde(rename = "kraus-probabilistic")]
    KrausProbabilistic,
}

impl CorrectionMode {
    pub const ALL: [CorrectionMode; 3] = [
        CorrectionMode::UnitaryPrinted,
        CorrectionMode::SynthesizedRescale,
        CorrectionMode::KrausProbabilistic,
    ];
}

/// Input state specification for a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    Fixed(UnknownQutrit),
    /// A fresh Haar-random qutrit for every trial.
    Haar,
}

/// One teleportation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub outcome_k: usize,
    pub born_probability: f64,
    /// False only on the failure branch of the Kraus mode.
    pub corrected: bool,
    /// Bob's normalized output state.
    pub bob_output: Ket,
    /// |⟨φ|output⟩|².
    pub fidelity: f64,
}

/// Aggregated Monte Carlo results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub channel: ChannelKind,
    pub mode: CorrectionMode,
    pub trials: u64,
    pub seed: u64,
    /// Empirical outcome frequencies; they sum to 1.
    pub frequencies: [f64; 9],
    /// Exact Born probabilities for a fixed input state, absent for
    /// Haar-random inputs.
    pub closed_form: Option<[f64; 9]>,
    /// Mean fidelity over all trials, failure branches included.
    pub mean_fidelity: f64,
    /// Mean fidelity over corrected trials only; present in Kraus mode.
    pub post_selected_fidelity: Option<f64>,
    /// Fraction of corrected trials; exactly 1 outside Kraus mode.
    pub success_rate: f64,
}

/// The clubbed three-qutrit state φ_A ⊗ channel_BC.
pub fn club(phi: &UnknownQutrit, kind: ChannelKind) -> Ket {
    crate::linalg::tensor(&phi.ket(), &channel(kind))
}

/// Born probabilities p_k = ‖(⟨Ψ^k| ⊗ I)|ξ⟩‖² of the nine outcomes.
pub fn outcome_distribution(phi: &UnknownQutrit, kind: ChannelKind) -> [f64; 9] {
    let mut p = [0.0; 9];
    for (k, pk) in p.iter_mut().enumerate() {
        *pk = collapsed_state(kind, k, phi)
            .expect("outcome index in range")
            .norm_sqr();
    }
    p
}

/// Deterministic per-trial generator: one ChaCha stream per trial index.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

fn validate_mode(kind: ChannelKind, mode: CorrectionMode) -> Result<()> {
    if mode == CorrectionMode::UnitaryPrinted && kind != ChannelKind::Unitary {
        return Err(Error::Configuration(
            "the printed unitary corrections exist only for channel u".into(),
        ));
    }
    Ok(())
}

fn correction_for(kind: ChannelKind, mode: CorrectionMode, k: usize) -> Result<CorrectionOperator> {
    match mode {
        CorrectionMode::UnitaryPrinted => printed_correction(kind, k),
        _ => synthesize_correction(kind, k),
    }
}

/// All nine corrections of one mode, built once per run; Kraus mode also
/// carries the complementary branch operators.
struct CorrectionSet {
    ops: Vec<Operator>,
    complements: Option<Vec<Operator>>,
}

impl CorrectionSet {
    fn build(kind: ChannelKind, mode: CorrectionMode) -> Result<Self> {
        let ops: Vec<Operator> = (0..9)
            .map(|k| correction_for(kind, mode, k).map(|c| c.op))
            .collect::<Result<_>>()?;
        let complements = match mode {
            CorrectionMode::KrausProbabilistic => {
                Some(ops.iter().map(kraus_complement).collect::<Result<Vec<_>>>()?)
            }
            _ => None,
        };
        Ok(Self { ops, complements })
    }
}

/// √(I − K†K) for a monomial Kraus operator; K†K is diagonal, so the
/// square root is entry-wise.
fn kraus_complement(k_op: &Operator) -> Result<Operator> {
    let gram = dagger(k_op).mul(k_op)?;
    let mut m = Operator::zeros(3)?;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && gram.get(i, j).norm() > tolerance::EQ {
                return Err(Error::Structure(
                    "K†K is not diagonal; correction is not monomial".into(),
                ));
            }
        }
        let rest = (1.0 - gram.get(i, i).re).max(0.0);
        m.set(i, i, Complex64::new(rest.sqrt(), 0.0));
    }
    Ok(m)
}

/// (success, failure) branch probabilities of the Kraus measurement
/// {K, √(I − K†K)} for one outcome; they sum to 1.
pub fn kraus_branch_probabilities(
    kind: ChannelKind,
    k: usize,
    phi: &UnknownQutrit,
) -> Result<(f64, f64)> {
    let psi_hat = collapsed_state(kind, k, phi)?.normalized()?;
    let k_op = synthesize_correction(kind, k)?;
    let success = apply(&k_op.op, &psi_hat)?.norm_sqr();
    let failure = apply(&kraus_complement(&k_op.op)?, &psi_hat)?.norm_sqr();
    Ok((success, failure))
}

/// Success probability ‖K ψ̂‖² of the Kraus branch for one outcome.
pub fn success_probability(kind: ChannelKind, k: usize, phi: &UnknownQutrit) -> Result<f64> {
    Ok(kraus_branch_probabilities(kind, k, phi)?.0)
}

fn correct(
    phi: &UnknownQutrit,
    kind: ChannelKind,
    mode: CorrectionMode,
    set: &CorrectionSet,
    k: usize,
    branch_draw: f64,
) -> Result<(Ket, bool)> {
    let psi_hat = collapsed_state(kind, k, phi)?.normalized()?;
    match mode {
        CorrectionMode::UnitaryPrinted => {
            // unitary: already normalized
            Ok((apply(&set.ops[k], &psi_hat)?, true))
        }
        CorrectionMode::SynthesizedRescale => {
            Ok((apply(&set.ops[k], &psi_hat)?.normalized()?, true))
        }
        CorrectionMode::KrausProbabilistic => {
            let complements = set.complements.as_ref().expect("built for kraus mode");
            let success = apply(&set.ops[k], &psi_hat)?;
            let failure = apply(&complements[k], &psi_hat)?;
            let (p_s, p_f) = (success.norm_sqr(), failure.norm_sqr());
            if branch_draw * (p_s + p_f) < p_s {
                Ok((success.normalized()?, true))
            } else {
                Ok((failure.normalized()?, false))
            }
        }
    }
}

fn fidelity(phi: &UnknownQutrit, output: &Ket) -> f64 {
    inner(&phi.ket(), output)
        .expect("dimension-3 states")
        .norm_sqr()
}

fn trial_from_distribution(
    phi: &UnknownQutrit,
    kind: ChannelKind,
    mode: CorrectionMode,
    set: &CorrectionSet,
    distribution: &[f64; 9],
    rng: &mut ChaCha8Rng,
    trial_index: u64,
) -> Result<TrialRecord> {
    let draw: f64 = rng.random();
    let mut k = 8;
    let mut cumulative = 0.0;
    for (i, p) in distribution.iter().enumerate() {
        cumulative += p;
        if draw < cumulative {
            k = i;
            break;
        }
    }
    let branch_draw = match mode {
        CorrectionMode::KrausProbabilistic => rng.random(),
        _ => 0.0,
    };
    let (bob_output, corrected) = correct(phi, kind, mode, set, k, branch_draw)?;
    Ok(TrialRecord {
        trial_index,
        outcome_k: k,
        born_probability: distribution[k],
        corrected,
        bob_output: bob_output.clone(),
        fidelity: fidelity(phi, &bob_output),
    })
}

/// One trial: sample an outcome by inverse CDF, collapse, correct.
pub fn run_trial(
    phi: &UnknownQutrit,
    kind: ChannelKind,
    mode: CorrectionMode,
    rng: &mut ChaCha8Rng,
    trial_index: u64,
) -> Result<TrialRecord> {
    validate_mode(kind, mode)?;
    let set = CorrectionSet::build(kind, mode)?;
    let distribution = outcome_distribution(phi, kind);
    trial_from_distribution(phi, kind, mode, &set, &distribution, rng, trial_index)
}

/// One trial with a forced measurement outcome (sampling bypassed);
/// `branch_draw` in [0, 1) decides the Kraus branch.
pub fn run_trial_forced(
    phi: &UnknownQutrit,
    kind: ChannelKind,
    mode: CorrectionMode,
    k: usize,
    branch_draw: f64,
    trial_index: u64,
) -> Result<TrialRecord> {
    validate_mode(kind, mode)?;
    let set = CorrectionSet::build(kind, mode)?;
    let distribution = outcome_distribution(phi, kind);
    let (bob_output, corrected) = correct(phi, kind, mode, &set, k, branch_draw)?;
    Ok(TrialRecord {
        trial_index,
        outcome_k: k,
        born_probability: distribution[k],
        corrected,
        bob_output: bob_output.clone(),
        fidelity: fidelity(phi, &bob_output),
    })
}

const CHUNK: u64 = 4096;

#[derive(Default, Clone)]
struct Partial {
    counts: [u64; 9],
    fidelity_sum: f64,
    corrected_fidelity_sum: f64,
    corrected: u64,
}

/// Run `n_trials` independent trials and aggregate.
///
/// Results depend only on (inputs, master_seed): per-trial generators are
/// keyed by trial index and partial sums are combined in chunk order, so
/// any level of parallelism yields the identical report.
pub fn run_monte_carlo(
    phi_spec: &PhiSpec,
    kind: ChannelKind,
    mode: CorrectionMode,
    n_trials: u64,
    master_seed: u64,
) -> Result<RunReport> {
    if n_trials == 0 {
        return Err(Error::Domain("a Monte Carlo run needs at least one trial".into()));
    }
    validate_mode(kind, mode)?;

    let set = CorrectionSet::build(kind, mode)?;
    let fixed_distribution = match phi_spec {
        PhiSpec::Fixed(phi) => Some(outcome_distribution(phi, kind)),
        PhiSpec::Haar => None,
    };

    let n_chunks = n_trials.div_ceil(CHUNK);
    let partials: Vec<Result<Partial>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = Partial::default();
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n_trials);
            for index in lo..hi {
                let mut rng = trial_rng(master_seed, index);
                let record = match phi_spec {
                    PhiSpec::Fixed(phi) => trial_from_distribution(
                        phi,
                        kind,
                        mode,
                        &set,
                        fixed_distribution.as_ref().expect("fixed spec"),
                        &mut rng,
                        index,
                    )?,
                    PhiSpec::Haar => {
                        let phi = UnknownQutrit::haar(&mut rng);
                        let distribution = outcome_distribution(&phi, kind);
                        trial_from_distribution(
                            &phi,
                            kind,
                            mode,
                            &set,
                            &distribution,
                            &mut rng,
                            index,
                        )?
                    }
                };
                acc.counts[record.outcome_k] += 1;
                acc.fidelity_sum += record.fidelity;
                if record.corrected {
                    acc.corrected += 1;
                    acc.corrected_fidelity_sum += record.fidelity;
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = Partial::default();
    for partial in partials {
        let partial = partial?;
        for (t, c) in total.counts.iter_mut().zip(partial.counts) {
            *t += c;
        }
        total.fidelity_sum += partial.fidelity_sum;
        total.corrected_fidelity_sum += partial.corrected_fidelity_sum;
        total.corrected += partial.corrected;
    }

    let n = n_trials as f64;
    let mut frequencies = [0.0; 9];
    for (f, c) in frequencies.iter_mut().zip(total.counts) {
        *f = c as f64 / n;
    }
    let post_selected_fidelity = match mode {
        CorrectionMode::KrausProbabilistic if total.corrected > 0 => {
            Some(total.corrected_fidelity_sum / total.corrected as f64)
        }
        _ => None,
    };
    Ok(RunReport {
        schema_version: 1,
        channel: kind,
        mode,
        trials: n_trials,
        seed: master_seed,
        frequencies,
        closed_form: fixed_distribution,
        mean_fidelity: total.fidelity_sum / n,
        post_selected_fidelity,
        success_rate: if mode == CorrectionMode::KrausProbabilistic {
            total.corrected as f64 / n
        } else {
            1.0
        },
    })
}
