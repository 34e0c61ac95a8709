//! Monte-Carlo evaluation of the monitors' error rates against their
//! analytic bounds, plus an exact small-budget verdict-measure oracle.
//!
//! Reports are reproducible: per-trial seeds are mixed from the master
//! seed by counter, and aggregation uses only counts and sums, so the
//! result is byte-identical regardless of how trials are scheduled.

use anyhow::{bail, ensure, Result};
use hmcdist::distinguish::profile_constant;
use hmcdist::exact::{rat_to_f64, Rat};
use hmcdist::model::{sample_run, trial_seed, Dist, Hmc};
use hmcdist::monitors::{
    classify_m2, expected_alarm_bound, plan_multi, plan_two_sided, run_m1, run_m2, run_m2prime,
    run_multi, AlarmOutcome, Decision, MonitorPlan,
};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

pub const REPORT_SCHEMA: &str = "hmcdist-report-1";

/// Which monitor an evaluation exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonitorKind {
    TwoSided,
    Walk,
    OneSided,
    Multi,
}

impl MonitorKind {
    pub fn name(&self) -> &'static str {
        match self {
            MonitorKind::TwoSided => "two-sided",
            MonitorKind::Walk => "walk",
            MonitorKind::OneSided => "one-sided",
            MonitorKind::Multi => "multi",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "two-sided" => MonitorKind::TwoSided,
            "walk" => MonitorKind::Walk,
            "one-sided" => MonitorKind::OneSided,
            "multi" => MonitorKind::Multi,
            other => bail!("unknown monitor mode {other:?}"),
        })
    }
}

/// Per-source-chain tally of an evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct SourceStats {
    /// 1-based index of the chain the streams were sampled from.
    pub source: usize,
    pub trials: usize,
    /// Wrong verdicts (for the one-sided monitor under the first chain:
    /// streams with no alarm inside the horizon).
    pub errors: usize,
    pub error_rate: f64,
    pub mean_observations: f64,
}

/// Outcome of a Monte-Carlo evaluation against the analytic bound.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub schema: &'static str,
    pub monitor: &'static str,
    pub trials_per_source: usize,
    pub seed: u64,
    pub phases: usize,
    pub phase_len: usize,
    /// The analytic error bound the empirical rates are compared against.
    pub bound: f64,
    /// Three binomial standard deviations at the bound rate.
    pub slack: f64,
    pub sources: Vec<SourceStats>,
    /// For the one-sided monitor: mean observations before the alarm on
    /// first-chain streams, and its analytic bound.
    pub mean_response: Option<f64>,
    pub response_bound: Option<f64>,
    pub pass: bool,
}

fn three_sigma(p: f64, trials: usize) -> f64 {
    let p = p.clamp(0.0, 1.0);
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

fn exp_bound(c: &Rat, n_phases: usize, factor: f64) -> f64 {
    let c2 = rat_to_f64(c).powi(2);
    factor * (-c2 * n_phases as f64 / 18.0).exp()
}

/// Runs `trials` independent streams from each model through the chosen
/// monitor and tallies wrong verdicts against the analytic bound, with a
/// three-sigma binomial slack.
///
/// `target` is ε for the two-sided, walk, and multi-way monitors and
/// `low` for the one-sided monitor.
pub fn estimate_error(
    kind: MonitorKind,
    models: &[Hmc],
    target: f64,
    trials: usize,
    master_seed: u64,
) -> Result<ErrorReport> {
    ensure!(trials >= 100, "need at least 100 trials, got {trials}");
    ensure!(models.len() >= 2, "need at least two models");
    match kind {
        MonitorKind::Multi => {}
        _ => ensure!(models.len() == 2, "{} monitor takes exactly two models", kind.name()),
    }
    let report = profile_constant(&models[0], &models[1]);
    let c = match kind {
        MonitorKind::Multi => {
            // Pairwise-minimal profile constant over all model pairs.
            let mut c = report.c.clone();
            for i in 0..models.len() {
                for j in i + 1..models.len() {
                    if (i, j) == (0, 1) {
                        continue;
                    }
                    let r = profile_constant(&models[i], &models[j]);
                    ensure!(r.distinguishable, "models {} and {} not distinguishable", i + 1, j + 1);
                    c = c.min(r.c);
                }
            }
            c
        }
        _ => report.c.clone(),
    };
    ensure!(!c.is_zero(), "models are not distinguishable");

    let m = models[0].num_states() + models[1].num_states();
    match kind {
        MonitorKind::TwoSided | MonitorKind::Walk => {
            let plan = plan_two_sided(&c, target, m)?;
            let bound = exp_bound(&c, plan.n_phases, if kind == MonitorKind::TwoSided { 2.0 } else { 1.0 });
            let stream_len = match kind {
                MonitorKind::TwoSided => plan.total_observations(),
                _ => 1 + plan.n_phases * (m - 1),
            };
            let run_one = |source: usize, trial: usize| -> (bool, usize) {
                let seed = trial_seed(master_seed, (source * trials + trial) as u64);
                let run = sample_run(&models[source], stream_len, seed);
                let verdict = match kind {
                    MonitorKind::TwoSided => {
                        run_m2(&models[0], &models[1], run.symbols.iter().copied(), &plan)
                    }
                    _ => run_m2prime(
                        &models[0],
                        &models[1],
                        &report,
                        run.symbols.iter().copied(),
                        &plan,
                    ),
                }
                .expect("stream long enough");
                let want = if source == 0 { Decision::Output1 } else { Decision::Output2 };
                (verdict.decision != want, verdict.observations)
            };
            let sources = tally_two(trials, run_one);
            let slack = three_sigma(bound.min(target), trials);
            let pass = sources.iter().all(|s| s.error_rate <= bound.min(1.0) + slack);
            Ok(ErrorReport {
                schema: REPORT_SCHEMA,
                monitor: kind.name(),
                trials_per_source: trials,
                seed: master_seed,
                phases: plan.n_phases,
                phase_len: m,
                bound,
                slack,
                sources,
                mean_response: None,
                response_bound: None,
                pass,
            })
        }
        MonitorKind::OneSided => {
            let low = target;
            let response_bound = expected_alarm_bound(&c, low, m)?;
            // By Markov's inequality the alarm time exceeds 100× its
            // expectation with probability ≤ 1/100, so this horizon still
            // catches ≥ 99% of first-chain streams.
            let horizon_phases = (100.0 * response_bound / m as f64).ceil() as usize;
            // Under the second chain the bound is checked on a 10× tighter
            // horizon than the first-chain coverage run.
            let h2_horizon = horizon_phases / 10 + 1;
            let run_one = |source: usize, trial: usize| -> (bool, usize) {
                let seed = trial_seed(master_seed, (source * trials + trial) as u64);
                let horizon = if source == 0 { horizon_phases } else { h2_horizon };
                let run = sample_run(&models[source], horizon * m, seed);
                let out = run_m1(
                    &models[0],
                    &models[1],
                    run.symbols.iter().copied(),
                    low,
                    Some(horizon),
                )
                .expect("parameters validated");
                match (source, out) {
                    // Under the first chain a missing alarm is the error.
                    (0, AlarmOutcome::Alarm(n)) => (false, n),
                    (0, AlarmOutcome::NoAlarm(n) | AlarmOutcome::Impossible(n)) => (true, n),
                    // Under the second chain an alarm is the error.
                    (_, AlarmOutcome::Alarm(n)) => (true, n),
                    (_, AlarmOutcome::NoAlarm(n) | AlarmOutcome::Impossible(n)) => (false, n),
                }
            };
            let sources = tally_two(trials, run_one);
            let slack = three_sigma(low, trials);
            // Mean observations under the first chain are dominated by
            // alarm responses (errors there are ≤ 1%).
            let mean_response = sources[0].mean_observations;
            let pass = sources[1].error_rate <= low + slack
                && sources[0].error_rate <= 0.01
                && mean_response <= response_bound;
            Ok(ErrorReport {
                schema: REPORT_SCHEMA,
                monitor: kind.name(),
                trials_per_source: trials,
                seed: master_seed,
                phases: horizon_phases,
                phase_len: m,
                bound: low,
                slack,
                sources,
                mean_response: Some(mean_response),
                response_bound: Some(response_bound),
                pass,
            })
        }
        MonitorKind::Multi => {
            let k = models.len();
            let plan = plan_multi(&c, target, k, m)?;
            let bound = exp_bound(&c, plan.n_phases, 2.0 * k as f64);
            let stream_len = plan.total_observations();
            let per_source: Vec<SourceStats> = (0..k)
                .map(|source| {
                    let (errors, total_obs) = (0..trials)
                        .into_par_iter()
                        .map(|trial| {
                            let seed = trial_seed(master_seed, (source * trials + trial) as u64);
                            let run = sample_run(&models[source], stream_len, seed);
                            let verdict =
                                run_multi(models, run.symbols.iter().copied(), &plan)
                                    .expect("stream long enough");
                            let wrong = verdict.decision != Decision::Index(source + 1);
                            (wrong as usize, verdict.observations as u64)
                        })
                        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
                    SourceStats {
                        source: source + 1,
                        trials,
                        errors,
                        error_rate: errors as f64 / trials as f64,
                        mean_observations: total_obs as f64 / trials as f64,
                    }
                })
                .collect();
            let slack = three_sigma(bound.min(target), trials);
            let pass = per_source.iter().all(|s| s.error_rate <= bound.min(1.0) + slack);
            Ok(ErrorReport {
                schema: REPORT_SCHEMA,
                monitor: kind.name(),
                trials_per_source: trials,
                seed: master_seed,
                phases: plan.n_phases,
                phase_len: m,
                bound,
                slack,
                sources: per_source,
                mean_response: None,
                response_bound: None,
                pass,
            })
        }
    }
}

fn tally_two(trials: usize, run_one: impl Fn(usize, usize) -> (bool, usize) + Sync) -> Vec<SourceStats> {
    (0..2)
        .map(|source| {
            let (errors, total_obs) = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let (wrong, obs) = run_one(source, trial);
                    (wrong as usize, obs as u64)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            SourceStats {
                source: source + 1,
                trials,
                errors,
                error_rate: errors as f64 / trials as f64,
                mean_observations: total_obs as f64 / trials as f64,
            }
        })
        .collect()
}

/// One enumerated word with its exact probabilities under both chains and
/// the two-sided monitor's verdict on it.
#[derive(Debug, Clone)]
pub struct WordVerdict {
    pub word: Vec<usize>,
    pub pr1: Rat,
    pub pr2: Rat,
    pub verdict: Decision,
}

/// Exact verdict measures of the two-sided monitor with an `N`-phase
/// budget, by enumerating all `|Σ|^(N·m)` observation words.
#[derive(Debug, Clone)]
pub struct VerdictMeasure {
    pub n_phases: usize,
    pub word_len: usize,
    pub words: Vec<WordVerdict>,
}

impl VerdictMeasure {
    /// Exact probability that a stream from chain `source` (1 or 2) gets
    /// the given verdict. Zero-probability prefixes terminate the monitor
    /// early, so classifying complete words gives the same measure.
    pub fn measure(&self, source: usize, verdict: Decision) -> Rat {
        self.words
            .iter()
            .filter(|w| w.verdict == verdict)
            .map(|w| if source == 1 { &w.pr1 } else { &w.pr2 })
            .sum()
    }
}

/// Enumerates every length-`N·m` word and classifies it exactly.
///
/// Guard: `|Σ|^(N·m)` must not exceed 2²⁰.
pub fn exact_verdict_measure(h1: &Hmc, h2: &Hmc, n_phases: usize) -> Result<VerdictMeasure> {
    let m = h1.num_states() + h2.num_states();
    let word_len = n_phases * m;
    let k = h1.alphabet().len() as u128;
    let count = k.checked_pow(word_len as u32).unwrap_or(u128::MAX);
    ensure!(count <= 1 << 20, "enumeration of {count} words exceeds the 2^20 guard");

    let psi1 = Dist::delta(h1.init(), h1.num_states());
    let psi2 = Dist::delta(h2.init(), h2.num_states());
    let mut words = Vec::with_capacity(count as usize);
    let mut word = vec![0usize; word_len];
    loop {
        let pr1 = hmcdist::forward::pr(h1, &psi1, &word);
        let pr2 = hmcdist::forward::pr(h2, &psi2, &word);
        words.push(WordVerdict {
            word: word.clone(),
            pr1,
            pr2,
            verdict: classify_m2(h1, h2, &word),
        });
        // Odometer increment over the alphabet.
        let mut pos = word_len;
        loop {
            if pos == 0 {
                return Ok(VerdictMeasure { n_phases, word_len, words });
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < k as usize {
                break;
            }
            word[pos] = 0;
        }
    }
}

/// The plan an evaluation or monitor invocation runs under, for display.
pub fn display_plan(plan: &MonitorPlan) -> String {
    format!(
        "N={} phases of m={} obs ({} total), c={}",
        plan.n_phases,
        plan.phase_len,
        plan.total_observations(),
        hmcdist::exact::format_rat(&plan.c),
    )
}
