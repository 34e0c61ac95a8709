//! The four monitors — two-sided likelihood (`run_m2`), bounded random
//! walk (`run_m2prime`), one-sided (`run_m1`), multi-way (`run_multi`) —
//! plus the planners that turn a profile constant and an error target into
//! a phase budget.

use crate::distinguish::{event_member, select_event, DistinguishabilityReport};
use crate::exact::{rat_to_f64, Rat};
use crate::forward::{cd, pr, ChainTracker, StreamTracker};
use crate::model::{Dist, Hmc};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonitorError {
    #[error("chains are not distinguishable (c = 0); no monitor plan exists")]
    NotDistinguishable,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("stream ended after {got} observations; {needed} required")]
    TruncatedStream { needed: usize, got: usize },
}

/// What a pairwise or multi-way monitor concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// The stream looks like the first chain (lr ≤ 1 at the deadline, or
    /// the second chain's probability hit zero).
    Output1,
    /// The stream looks like the second chain.
    Output2,
    /// No candidate chain could have generated the prefix.
    Output3,
    /// Multi-way: 1-based index of the most likely model.
    Index(usize),
}

impl Decision {
    /// The number printed in the `DECISION <i> AFTER <n> OBS` line.
    pub fn code(&self) -> usize {
        match self {
            Decision::Output1 => 1,
            Decision::Output2 => 2,
            Decision::Output3 => 3,
            Decision::Index(i) => *i,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    /// Observations consumed when the decision was made.
    pub observations: usize,
}

/// A monitoring budget: `n_phases` phases of `phase_len` observations.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorPlan {
    pub n_phases: usize,
    pub phase_len: usize,
    pub c: Rat,
    /// The error bound (ε) or threshold (low) the plan was derived from.
    pub target: f64,
}

impl MonitorPlan {
    pub fn total_observations(&self) -> usize {
        self.n_phases * self.phase_len
    }
}

/// `N = ⌈(18/c²)·ln(2/ε)⌉` phases of `m` observations each.
///
/// The ceiling is taken with a 10⁻⁹ slack so that analytically integral
/// values (e.g. ε = 2·e⁻¹⁸ at c = 1) are not pushed up by float roundoff.
pub fn plan_two_sided(c: &Rat, eps: f64, m: usize) -> Result<MonitorPlan, MonitorError> {
    if c <= &Rat::zero() {
        return Err(MonitorError::NotDistinguishable);
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(MonitorError::BadParameter(format!("ε = {eps} outside (0,1)")));
    }
    let n = ceil_phases(c, (2.0 / eps).ln());
    Ok(MonitorPlan { n_phases: n, phase_len: m, c: c.clone(), target: eps })
}

/// `N = ⌈(18/c²)·ln(2k/ε)⌉`, inverting the multi-way error bound
/// `2k·exp(−c²N/18) ≤ ε`.
pub fn plan_multi(c: &Rat, eps: f64, k: usize, m: usize) -> Result<MonitorPlan, MonitorError> {
    if c <= &Rat::zero() {
        return Err(MonitorError::NotDistinguishable);
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(MonitorError::BadParameter(format!("ε = {eps} outside (0,1)")));
    }
    if k == 0 {
        return Err(MonitorError::BadParameter("k = 0".into()));
    }
    let n = ceil_phases(c, (2.0 * k as f64 / eps).ln());
    Ok(MonitorPlan { n_phases: n, phase_len: m, c: c.clone(), target: eps })
}

fn ceil_phases(c: &Rat, log_term: f64) -> usize {
    let c2 = rat_to_f64(c).powi(2);
    let raw = 18.0 / c2 * log_term;
    ((raw - 1e-9).ceil() as usize).max(1)
}

/// Expected observations until the one-sided monitor alarms on a stream
/// from the first chain: `(36m/c²)·ln(1/low) + (147m/c²)·low + m`.
pub fn expected_alarm_bound(c: &Rat, low: f64, m: usize) -> Result<f64, MonitorError> {
    if c <= &Rat::zero() {
        return Err(MonitorError::NotDistinguishable);
    }
    if !(0.0..=1.0).contains(&low) || low == 0.0 {
        return Err(MonitorError::BadParameter(format!("low = {low} outside (0,1]")));
    }
    let c2 = rat_to_f64(c).powi(2);
    let m = m as f64;
    Ok(36.0 * m / c2 * (1.0 / low).ln() + 147.0 * m / c2 * low + m)
}

/// Exact two-sided classification of a complete observation word: the
/// verdict the likelihood monitor reaches on it. Zero probabilities are
/// absorbing, so the word-level rule agrees with the streaming monitor's
/// early termination.
pub fn classify_m2(h1: &Hmc, h2: &Hmc, word: &[usize]) -> Decision {
    let p1 = pr(h1, &Dist::delta(h1.init(), h1.num_states()), word);
    let p2 = pr(h2, &Dist::delta(h2.init(), h2.num_states()), word);
    match (p1.is_zero(), p2.is_zero()) {
        (true, true) => Decision::Output3,
        (true, false) => Decision::Output2,
        (false, true) => Decision::Output1,
        (false, false) => {
            if p2 <= p1 {
                Decision::Output1
            } else {
                Decision::Output2
            }
        }
    }
}

/// Exact multi-way classification: smallest index (1-based) of a maximal
/// word probability; `Output3` when no model can emit the word.
pub fn classify_multi(models: &[Hmc], word: &[usize]) -> Decision {
    let probs: Vec<Rat> = models
        .iter()
        .map(|h| pr(h, &Dist::delta(h.init(), h.num_states()), word))
        .collect();
    let best = probs.iter().max().expect("at least one model");
    if best.is_zero() {
        return Decision::Output3;
    }
    let i = probs.iter().position(|p| p == best).expect("max exists");
    Decision::Index(i + 1)
}

fn pull<I: Iterator<Item = usize>>(
    stream: &mut I,
    consumed: &mut Vec<usize>,
    needed: usize,
) -> Result<usize, MonitorError> {
    match stream.next() {
        Some(a) => {
            consumed.push(a);
            Ok(a)
        }
        None => Err(MonitorError::TruncatedStream { needed, got: consumed.len() }),
    }
}

/// Two-sided likelihood monitor: consumes `N·m` observations (or fewer on
/// a zero-probability prefix) and outputs 1 iff `lr ≤ 1` at the deadline.
///
/// Floats carry the likelihood ratio; near-ties (|log lr| ≤ 10⁻⁹) on short
/// budgets (≤ 64 observations) are recomputed exactly so that the
/// documented tie rule (lr = 1 → output 1) holds.
pub fn run_m2(
    h1: &Hmc,
    h2: &Hmc,
    stream: impl IntoIterator<Item = usize>,
    plan: &MonitorPlan,
) -> Result<Verdict, MonitorError> {
    let total = plan.total_observations();
    let mut stream = stream.into_iter();
    let mut consumed = Vec::new();
    let mut tracker = StreamTracker::new(h1, h2);
    while consumed.len() < total {
        let a = pull(&mut stream, &mut consumed, total)?;
        tracker.step(a);
        match (tracker.zero1(), tracker.zero2()) {
            (true, true) => {
                return Ok(Verdict { decision: Decision::Output3, observations: consumed.len() })
            }
            (true, false) => {
                return Ok(Verdict { decision: Decision::Output2, observations: consumed.len() })
            }
            (false, true) => {
                return Ok(Verdict { decision: Decision::Output1, observations: consumed.len() })
            }
            (false, false) => {}
        }
    }
    let log_lr = tracker.log_lr().expect("both chains alive");
    let decision = if log_lr.abs() <= 1e-9 && total <= 64 {
        classify_m2(h1, h2, &consumed)
    } else if log_lr <= 0.0 {
        Decision::Output1
    } else {
        Decision::Output2
    };
    Ok(Verdict { decision, observations: consumed.len() })
}

/// One step of the bounded random walk: the exact change of `x` in a
/// phase with event probabilities `(p1, p2)` whose observed block did
/// (`in_event`) or did not land in the selected event.
pub fn walk_delta(p1: &Rat, p2: &Rat, in_event: bool) -> Rat {
    let s = p1 + p2;
    let two = Rat::from_integer(2.into());
    if s <= Rat::one() {
        if in_event {
            -Rat::one()
        } else {
            &s / (&two - &s)
        }
    } else if in_event {
        -((&two - &s) / &s)
    } else {
        Rat::one()
    }
}

/// Bounded-random-walk monitor: exact rational state throughout.
///
/// Each phase selects the best separating event for the currently tracked
/// conditional distributions, moves `x` by [`walk_delta`], and re-conditions
/// the distributions on the phase word. After `N` phases the verdict is 1
/// iff `x ≤ 0`.
///
/// A phase word has `m` observations, the first of which is the last
/// observation of the previous phase (for the first phase: the stream's
/// opening observation). The overlap is forced by the bookkeeping: the
/// tracked distributions sit on the states that emitted the last seen
/// symbol, and both the event probabilities and the conditioning treat a
/// word's first symbol as emitted by the current state. A run of `N`
/// phases therefore consumes `1 + N·(m−1)` observations.
pub fn run_m2prime(
    h1: &Hmc,
    h2: &Hmc,
    report: &DistinguishabilityReport,
    stream: impl IntoIterator<Item = usize>,
    plan: &MonitorPlan,
) -> Result<Verdict, MonitorError> {
    if !report.distinguishable {
        return Err(MonitorError::NotDistinguishable);
    }
    let ts = &report.test_set;
    assert_eq!(plan.phase_len, ts.m(), "plan phase length must be |S1|+|S2|");
    let total = 1 + plan.n_phases * (ts.m() - 1);
    let mut stream = stream.into_iter();
    let mut consumed = Vec::new();
    let mut psi1 = Dist::delta(h1.init(), h1.num_states());
    let mut psi2 = Dist::delta(h2.init(), h2.num_states());
    let mut x = Rat::zero();
    let mut current = pull(&mut stream, &mut consumed, total)?;
    for _ in 0..plan.n_phases {
        let sel = select_event(ts, &psi1, &psi2);
        let mut block = Vec::with_capacity(ts.m());
        block.push(current);
        for _ in 1..ts.m() {
            block.push(pull(&mut stream, &mut consumed, total)?);
        }
        current = *block.last().expect("m >= 1");
        let q1 = pr(h1, &psi1, &block);
        let q2 = pr(h2, &psi2, &block);
        match (q1.is_zero(), q2.is_zero()) {
            (true, true) => {
                return Ok(Verdict { decision: Decision::Output3, observations: consumed.len() })
            }
            (true, false) => {
                return Ok(Verdict { decision: Decision::Output2, observations: consumed.len() })
            }
            (false, true) => {
                return Ok(Verdict { decision: Decision::Output1, observations: consumed.len() })
            }
            (false, false) => {}
        }
        x += walk_delta(&sel.p1, &sel.p2, event_member(&sel, &block));
        psi1 = cd(h1, &psi1, &block).expect("q1 > 0");
        psi2 = cd(h2, &psi2, &block).expect("q2 > 0");
    }
    let decision = if x <= Rat::zero() { Decision::Output1 } else { Decision::Output2 };
    Ok(Verdict { decision, observations: consumed.len() })
}

/// Outcome of the one-sided monitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlarmOutcome {
    /// `lr ≤ low` was observed at a phase boundary after `n` observations.
    Alarm(usize),
    /// Stream (or horizon) ended without an alarm.
    NoAlarm(usize),
    /// The first chain cannot emit the prefix; the monitor stays silent.
    Impossible(usize),
}

/// One-sided monitor: checks `lr ≤ low` once per `m`-observation phase;
/// never alarms on streams the first chain cannot produce.
pub fn run_m1(
    h1: &Hmc,
    h2: &Hmc,
    stream: impl IntoIterator<Item = usize>,
    low: f64,
    horizon_phases: Option<usize>,
) -> Result<AlarmOutcome, MonitorError> {
    if !(0.0..=1.0).contains(&low) || low == 0.0 {
        return Err(MonitorError::BadParameter(format!("low = {low} outside (0,1]")));
    }
    let m = h1.num_states() + h2.num_states();
    let log_low = low.ln();
    let mut tracker = StreamTracker::new(h1, h2);
    let mut n = 0usize;
    let mut phases = 0usize;
    let mut stream = stream.into_iter();
    loop {
        if let Some(h) = horizon_phases {
            if phases >= h {
                return Ok(AlarmOutcome::NoAlarm(n));
            }
        }
        for _ in 0..m {
            match stream.next() {
                Some(a) => {
                    tracker.step(a);
                    n += 1;
                }
                None => return Ok(AlarmOutcome::NoAlarm(n)),
            }
        }
        phases += 1;
        if tracker.zero1() {
            return Ok(AlarmOutcome::Impossible(n));
        }
        if tracker.zero2() {
            // lr = 0 ≤ low for every legal threshold.
            return Ok(AlarmOutcome::Alarm(n));
        }
        if tracker.log_lr().expect("both alive") <= log_low {
            return Ok(AlarmOutcome::Alarm(n));
        }
    }
}

/// Multi-way monitor: after `N·m` observations outputs the smallest index
/// of a most likely model. Near-ties on short budgets are settled exactly.
pub fn run_multi(
    models: &[Hmc],
    stream: impl IntoIterator<Item = usize>,
    plan: &MonitorPlan,
) -> Result<Verdict, MonitorError> {
    assert!(!models.is_empty(), "need at least one model");
    let total = plan.total_observations();
    let mut stream = stream.into_iter();
    let mut consumed = Vec::new();
    let mut trackers: Vec<ChainTracker> = models.iter().map(ChainTracker::new).collect();
    while consumed.len() < total {
        let a = pull(&mut stream, &mut consumed, total)?;
        for t in trackers.iter_mut() {
            t.step(a);
        }
        if trackers.iter().all(|t| t.is_dead()) {
            return Ok(Verdict { decision: Decision::Output3, observations: consumed.len() });
        }
    }
    let scores: Vec<Option<f64>> = trackers.iter().map(|t| t.log_pr()).collect();
    let best = scores
        .iter()
        .filter_map(|s| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    let near_tie = scores
        .iter()
        .filter(|s| s.map_or(false, |v| (v - best).abs() <= 1e-9))
        .count()
        > 1;
    let decision = if near_tie && total <= 64 {
        classify_multi(models, &consumed)
    } else {
        let i = scores
            .iter()
            .position(|s| s.map_or(false, |v| v == best))
            .expect("some model is alive");
        Decision::Index(i + 1)
    };
    Ok(Verdict { decision, observations: consumed.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::distinguish::profile_constant;
    use crate::exact::rat;
    use crate::model::sample_run;
    use num_traits::Signed;

    #[test]
    fn planner_examples() {
        let plan = plan_two_sided(&rat(1, 1), 2.0 * (-18.0f64).exp(), 2).unwrap();
        assert_eq!(plan.n_phases, 324);
        let plan = plan_two_sided(&rat(2, 7), 0.1, 4).unwrap();
        assert_eq!(plan.n_phases, 661);
        assert_eq!(plan.total_observations(), 661 * 4);
        // Monotone in ε.
        let tighter = plan_two_sided(&rat(2, 7), 0.05, 4).unwrap();
        assert!(tighter.n_phases >= plan.n_phases);
    }

    #[test]
    fn planner_rejects_degenerate_inputs() {
        assert_eq!(plan_two_sided(&rat(0, 1), 0.1, 4), Err(MonitorError::NotDistinguishable));
        assert!(matches!(plan_two_sided(&rat(1, 2), 0.0, 4), Err(MonitorError::BadParameter(_))));
        assert!(matches!(plan_two_sided(&rat(1, 2), 1.0, 4), Err(MonitorError::BadParameter(_))));
    }

    #[test]
    fn multi_planner_examples() {
        let single = plan_multi(&rat(2, 7), 0.1, 1, 4).unwrap();
        assert_eq!(single.n_phases, plan_two_sided(&rat(2, 7), 0.1, 4).unwrap().n_phases);
        let two = plan_multi(&rat(2, 7), 0.1, 2, 4).unwrap();
        assert_eq!(two.n_phases, 814);
        let more = plan_multi(&rat(2, 7), 0.1, 8, 4).unwrap();
        assert!(more.n_phases > two.n_phases);
    }

    #[test]
    fn alarm_bound_examples() {
        assert_eq!(expected_alarm_bound(&rat(1, 1), 1.0, 4).unwrap(), 592.0);
        let b = expected_alarm_bound(&rat(2, 7), 0.05, 4).unwrap();
        let c2: f64 = (2.0 / 7.0) * (2.0 / 7.0);
        let expected = 36.0 * 4.0 / c2 * 20.0f64.ln() + 147.0 * 4.0 / c2 * 0.05 + 4.0;
        assert!((b - expected).abs() < 1e-6, "got {b}, expected {expected}");
        // Monotone decreasing in c on a grid.
        let mut prev = f64::INFINITY;
        for num in 1..=10 {
            let v = expected_alarm_bound(&rat(num, 10), 0.05, 4).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn walk_delta_examples() {
        assert_eq!(walk_delta(&rat(4, 5), &rat(1, 10), true), rat(-1, 1));
        assert_eq!(walk_delta(&rat(4, 5), &rat(1, 10), false), rat(9, 11));
        assert_eq!(walk_delta(&rat(9, 10), &rat(3, 10), true), rat(-2, 3));
        assert_eq!(walk_delta(&rat(9, 10), &rat(3, 10), false), rat(1, 1));
        // |Δx| ≤ 1 always.
        for (p1, p2) in [(rat(1, 3), rat(1, 7)), (rat(19, 20), rat(9, 10)), (rat(0, 1), rat(0, 1))] {
            for in_event in [true, false] {
                assert!(walk_delta(&p1, &p2, in_event).abs() <= rat(1, 1));
            }
        }
    }

    #[test]
    fn m2_short_stream_examples() {
        let (h1, h2) = corpus::loop_pair();
        let plan = MonitorPlan { n_phases: 1, phase_len: 2, c: rat(1, 4), target: 0.5 };
        let v = run_m2(&h1, &h2, vec![0, 0], &plan).unwrap();
        assert_eq!(v.decision, Decision::Output1); // lr = 3/4 < 1
        assert_eq!(v.observations, 2);
    }

    #[test]
    fn m2_tie_goes_to_output1() {
        let (h1, _) = corpus::loop_pair();
        let plan = MonitorPlan { n_phases: 2, phase_len: 5, c: rat(1, 1), target: 0.5 };
        let run = sample_run(&h1, 10, 3);
        let v = run_m2(&h1, &h1.clone(), run.symbols, &plan).unwrap();
        assert_eq!(v.decision, Decision::Output1);
    }

    #[test]
    fn m2_impossible_prefix_is_output3() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let plan = MonitorPlan { n_phases: 3, phase_len: 4, c: rat(2, 7), target: 0.1 };
        let v = run_m2(&h1, &h2, vec![1, 0, 0, 0], &plan).unwrap();
        assert_eq!(v.decision, Decision::Output3);
        assert_eq!(v.observations, 1);
    }

    #[test]
    fn m2_truncated_stream_is_an_error() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let plan = MonitorPlan { n_phases: 2, phase_len: 4, c: rat(2, 7), target: 0.1 };
        assert_eq!(
            run_m2(&h1, &h2, vec![0, 0, 0], &plan),
            Err(MonitorError::TruncatedStream { needed: 8, got: 3 })
        );
    }

    #[test]
    fn m2prime_sorts_biased_streams() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let report = profile_constant(&h1, &h2);
        let plan = MonitorPlan { n_phases: 40, phase_len: 4, c: report.c.clone(), target: 0.1 };
        let run1 = sample_run(&h1, plan.total_observations(), 11);
        let v = run_m2prime(&h1, &h2, &report, run1.symbols, &plan).unwrap();
        assert_eq!(v.decision, Decision::Output1);
        let run2 = sample_run(&h2, plan.total_observations(), 11);
        let v = run_m2prime(&h1, &h2, &report, run2.symbols, &plan).unwrap();
        assert_eq!(v.decision, Decision::Output2);
    }

    #[test]
    fn m2prime_requires_distinguishability() {
        let (h1, h2) = corpus::absorbing_pair();
        let report = profile_constant(&h1, &h2);
        let plan = MonitorPlan { n_phases: 1, phase_len: 4, c: rat(1, 1), target: 0.1 };
        assert_eq!(
            run_m2prime(&h1, &h2, &report, vec![0; 4], &plan),
            Err(MonitorError::NotDistinguishable)
        );
    }

    #[test]
    fn m1_boundary_threshold_alarms_immediately() {
        let (h1, _) = corpus::biased_pair(&rat(1, 4));
        let run = sample_run(&h1, 8, 2);
        let got = run_m1(&h1, &h1.clone(), run.symbols, 1.0, None).unwrap();
        assert_eq!(got, AlarmOutcome::Alarm(4));
    }

    #[test]
    fn m1_never_alarms_on_impossible_stream() {
        // Stream "a a ..." is impossible in a chain that must alternate.
        let strict = crate::model::parse_model(
            "hmc\nalphabet: a b\nstate t0 obs=a init\nstate t1 obs=b\n\
             edge t0 -> t1 1\nedge t1 -> t0 1\n",
        )
        .unwrap();
        let h1 = strict.as_hmc().unwrap();
        let (h2, _) = corpus::biased_pair(&rat(1, 4));
        let got = run_m1(h1, &h2, vec![0; 8], 1.0, None).unwrap();
        assert_eq!(got, AlarmOutcome::Impossible(4));
    }

    #[test]
    fn m1_no_alarm_on_horizon() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let run = sample_run(&h2, 40, 17);
        match run_m1(&h1, &h2, run.symbols, 1e-6, Some(3)).unwrap() {
            AlarmOutcome::NoAlarm(n) => assert_eq!(n, 12),
            other => panic!("expected NoAlarm, got {other:?}"),
        }
    }

    #[test]
    fn multi_with_two_models_matches_m2() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let models = vec![h1.clone(), h2.clone()];
        let plan = MonitorPlan { n_phases: 5, phase_len: 4, c: rat(2, 7), target: 0.2 };
        for seed in 0..20u64 {
            let run = sample_run(&h1, plan.total_observations(), seed);
            let multi = run_multi(&models, run.symbols.clone(), &plan).unwrap();
            let two = run_m2(&h1, &h2, run.symbols, &plan).unwrap();
            let expected = match two.decision {
                Decision::Output1 => Decision::Index(1),
                Decision::Output2 => Decision::Index(2),
                other => other,
            };
            assert_eq!(multi.decision, expected, "seed {seed}");
        }
    }

    #[test]
    fn multi_output3_when_no_model_fits() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let plan = MonitorPlan { n_phases: 1, phase_len: 4, c: rat(2, 7), target: 0.2 };
        let v = run_multi(&[h1, h2], vec![1, 0, 0, 0], &plan).unwrap();
        assert_eq!(v.decision, Decision::Output3);
    }

    #[test]
    fn classify_multi_exact_cases() {
        let (h1, h2) = corpus::loop_pair();
        // pr1(aa) = 2/3 > pr2(aa) = 1/2.
        assert_eq!(classify_multi(&[h1.clone(), h2.clone()], &[0, 0]), Decision::Index(1));
        // Ties pick the smallest index.
        assert_eq!(classify_multi(&[h1.clone(), h1.clone()], &[0, 0]), Decision::Index(1));
        assert_eq!(classify_multi(&[h1, h2], &[1, 1]), Decision::Output3);
    }
}
