//! Hidden Markov chain models: types, parsing, validation, sampling.
//!
//! Models are immutable after validation and safe to share across threads.
//! Sampling takes an explicit seed and holds no hidden global state.

use crate::exact::{format_rat, parse_rat, Rat};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, msg: msg.into() }
}

/// A finite-state hidden Markov chain with exact rational transitions.
///
/// States and observation symbols are interned; `obs[s]` indexes into
/// `alphabet`, `trans[s]` lists `(successor, probability)` pairs in
/// successor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hmc {
    states: Vec<String>,
    alphabet: Vec<String>,
    init: usize,
    obs: Vec<usize>,
    trans: Vec<Vec<(usize, Rat)>>,
}

impl Hmc {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        init: usize,
        obs: Vec<usize>,
        trans: Vec<Vec<(usize, Rat)>>,
    ) -> Result<Self, ModelError> {
        let h = Hmc { states, alphabet, init, obs, trans };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let n = self.states.len();
        if n == 0 {
            return Err(ModelError::Validation("model has no states".into()));
        }
        if self.init >= n {
            return Err(ModelError::Validation("initial state out of range".into()));
        }
        if self.obs.len() != n || self.trans.len() != n {
            return Err(ModelError::Validation("state table length mismatch".into()));
        }
        for (s, &o) in self.obs.iter().enumerate() {
            if o >= self.alphabet.len() {
                return Err(ModelError::Validation(format!(
                    "state {} labeled with unknown symbol",
                    self.states[s]
                )));
            }
        }
        for (s, row) in self.trans.iter().enumerate() {
            if row.is_empty() {
                return Err(ModelError::Validation(format!(
                    "state {} has no outgoing edge",
                    self.states[s]
                )));
            }
            let mut seen = BTreeSet::new();
            let mut sum = Rat::zero();
            for (t, p) in row {
                if *t >= n {
                    return Err(ModelError::Validation("edge target out of range".into()));
                }
                if !seen.insert(*t) {
                    return Err(ModelError::Validation(format!(
                        "duplicate edge {} -> {}",
                        self.states[s], self.states[*t]
                    )));
                }
                if p <= &Rat::zero() || p > &Rat::one() {
                    return Err(ModelError::Validation(format!(
                        "edge {} -> {} has probability outside (0,1]",
                        self.states[s], self.states[*t]
                    )));
                }
                sum += p;
            }
            if !sum.is_one() {
                return Err(ModelError::Validation(format!(
                    "row not stochastic: outgoing probabilities of {} sum to {}",
                    self.states[s],
                    format_rat(&sum)
                )));
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|n| n == name)
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol_index(&self, sym: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == sym)
    }

    /// Observation symbol (alphabet index) emitted in state `s`.
    pub fn obs(&self, s: usize) -> usize {
        self.obs[s]
    }

    pub fn obs_symbol(&self, s: usize) -> &str {
        &self.alphabet[self.obs[s]]
    }

    /// Outgoing edges of `s` as `(target, probability)` pairs.
    pub fn successors(&self, s: usize) -> &[(usize, Rat)] {
        &self.trans[s]
    }

    pub fn trans_prob(&self, s: usize, t: usize) -> Option<&Rat> {
        self.trans[s].iter().find(|(u, _)| *u == t).map(|(_, p)| p)
    }

    /// Two chains can be compared only over the same declared alphabet.
    pub fn same_alphabet(&self, other: &Hmc) -> bool {
        self.alphabet == other.alphabet
    }

    /// Serializes back to the model file grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::from("hmc\n");
        self.write_body(&mut out);
        out
    }

    fn write_body(&self, out: &mut String) {
        out.push_str("alphabet:");
        for a in &self.alphabet {
            out.push(' ');
            out.push_str(a);
        }
        out.push('\n');
        for (s, name) in self.states.iter().enumerate() {
            out.push_str(&format!("state {} obs={}", name, self.obs_symbol(s)));
            if s == self.init {
                out.push_str(" init");
            }
            out.push('\n');
        }
        for (s, row) in self.trans.iter().enumerate() {
            for (t, p) in row {
                out.push_str(&format!(
                    "edge {} -> {} {}\n",
                    self.states[s],
                    self.states[*t],
                    format_rat(p)
                ));
            }
        }
    }
}

/// An exact probability distribution over a chain's states, indexed by
/// state id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    weights: Vec<Rat>,
}

impl Dist {
    pub fn new(weights: Vec<Rat>) -> Result<Self, ModelError> {
        if weights.iter().any(|w| w < &Rat::zero()) {
            return Err(ModelError::Validation("negative weight in distribution".into()));
        }
        let sum: Rat = weights.iter().sum();
        if !sum.is_one() {
            return Err(ModelError::Validation(format!(
                "distribution weights sum to {}",
                format_rat(&sum)
            )));
        }
        Ok(Dist { weights })
    }

    /// Point distribution on state `s` of an `n`-state chain.
    pub fn delta(s: usize, n: usize) -> Self {
        let mut weights = vec![Rat::zero(); n];
        weights[s] = Rat::one();
        Dist { weights }
    }

    pub fn weight(&self, s: usize) -> &Rat {
        &self.weights[s]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, _)| s)
    }
}

/// An [`Hmc`] whose bottom strongly connected components are classified
/// good or bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedHmc {
    hmc: Hmc,
    bad: BTreeSet<usize>,
    good: BTreeSet<usize>,
}

impl ClassifiedHmc {
    pub fn new(
        hmc: Hmc,
        bad: BTreeSet<usize>,
        good: BTreeSet<usize>,
    ) -> Result<Self, ModelError> {
        let c = ClassifiedHmc { hmc, bad, good };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let comps = crate::rv::bsccs(&self.hmc);
        let mut bottom: BTreeSet<usize> = BTreeSet::new();
        for comp in &comps {
            let in_bad = comp.iter().filter(|s| self.bad.contains(s)).count();
            let in_good = comp.iter().filter(|s| self.good.contains(s)).count();
            let label = match (in_bad, in_good) {
                (b, 0) if b == comp.len() => "bad",
                (0, g) if g == comp.len() => "good",
                (0, 0) => {
                    return Err(ModelError::Validation(format!(
                        "unlabeled BSCC containing state {}",
                        self.hmc.state_name(*comp.iter().next().unwrap())
                    )))
                }
                _ => {
                    return Err(ModelError::Validation(
                        "BSCC split across classification sets".into(),
                    ))
                }
            };
            let _ = label;
            bottom.extend(comp.iter().copied());
        }
        for s in self.bad.union(&self.good) {
            if !bottom.contains(s) {
                return Err(ModelError::Validation(format!(
                    "transient state {} is labeled",
                    self.hmc.state_name(*s)
                )));
            }
        }
        let reach = reachable_from(&self.hmc, self.hmc.init());
        if !self.bad.iter().any(|s| reach.contains(s)) {
            return Err(ModelError::Validation("no bad BSCC reachable from init".into()));
        }
        if !self.good.iter().any(|s| reach.contains(s)) {
            return Err(ModelError::Validation("no good BSCC reachable from init".into()));
        }
        Ok(())
    }

    pub fn hmc(&self) -> &Hmc {
        &self.hmc
    }

    pub fn bad_states(&self) -> &BTreeSet<usize> {
        &self.bad
    }

    pub fn good_states(&self) -> &BTreeSet<usize> {
        &self.good
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("chmc\n");
        self.hmc.write_body(&mut out);
        out.push_str("bad:");
        for s in &self.bad {
            out.push(' ');
            out.push_str(self.hmc.state_name(*s));
        }
        out.push('\n');
        out.push_str("good:");
        for s in &self.good {
            out.push(' ');
            out.push_str(self.hmc.state_name(*s));
        }
        out.push('\n');
        out
    }
}

/// States reachable from `from` in the underlying graph (including `from`).
pub(crate) fn reachable_from(h: &Hmc, from: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for (t, _) in h.successors(s) {
            if seen.insert(*t) {
                queue.push_back(*t);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Hmc(Hmc),
    Classified(ClassifiedHmc),
}

impl Model {
    pub fn as_hmc(&self) -> Option<&Hmc> {
        match self {
            Model::Hmc(h) => Some(h),
            Model::Classified(_) => None,
        }
    }

    pub fn underlying(&self) -> &Hmc {
        match self {
            Model::Hmc(h) => h,
            Model::Classified(c) => c.hmc(),
        }
    }
}

/// Parses the line-oriented model grammar.
///
/// ```text
/// hmc | chmc
/// alphabet: a b
/// state s0 obs=a init
/// state s1 obs=b
/// edge s0 -> s1 1/2
/// edge s0 -> s0 0.5
/// ...
/// bad: s1        (chmc only)
/// good: s0       (chmc only)
/// ```
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (first_no, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty model file"))?;
    let classified = match header {
        "hmc" => false,
        "chmc" => true,
        other => return Err(syntax(first_no, format!("expected `hmc` or `chmc`, got `{other}`"))),
    };

    let mut alphabet: Vec<String> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut state_ids: HashMap<String, usize> = HashMap::new();
    let mut obs: Vec<usize> = Vec::new();
    let mut init: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    let mut bad_names: Vec<(usize, String)> = Vec::new();
    let mut good_names: Vec<(usize, String)> = Vec::new();

    for (no, line) in lines {
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if !alphabet.is_empty() {
                return Err(syntax(no, "duplicate alphabet line"));
            }
            for sym in rest.split_whitespace() {
                if alphabet.iter().any(|a| a == sym) {
                    return Err(syntax(no, format!("duplicate symbol `{sym}`")));
                }
                alphabet.push(sym.to_string());
            }
            if alphabet.is_empty() {
                return Err(syntax(no, "alphabet is empty"));
            }
        } else if let Some(rest) = line.strip_prefix("state ") {
            let mut parts = rest.split_whitespace();
            let name = parts
                .next()
                .ok_or_else(|| syntax(no, "missing state name"))?;
            let obs_part = parts
                .next()
                .and_then(|p| p.strip_prefix("obs="))
                .ok_or_else(|| syntax(no, "expected `obs=<symbol>`"))?;
            let is_init = match parts.next() {
                None => false,
                Some("init") => true,
                Some(other) => return Err(syntax(no, format!("unexpected token `{other}`"))),
            };
            if state_ids.contains_key(name) {
                return Err(syntax(no, format!("duplicate state `{name}`")));
            }
            let sym = alphabet
                .iter()
                .position(|a| a == obs_part)
                .ok_or_else(|| syntax(no, format!("unknown symbol `{obs_part}`")))?;
            let id = states.len();
            state_ids.insert(name.to_string(), id);
            states.push(name.to_string());
            obs.push(sym);
            if is_init {
                if init.is_some() {
                    return Err(syntax(no, "more than one init state"));
                }
                init = Some(id);
            }
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let mut parts = rest.split_whitespace();
            let from = parts.next().ok_or_else(|| syntax(no, "missing edge source"))?;
            match parts.next() {
                Some("->") => {}
                _ => return Err(syntax(no, "expected `->`")),
            }
            let to = parts.next().ok_or_else(|| syntax(no, "missing edge target"))?;
            let prob = parts.next().ok_or_else(|| syntax(no, "missing edge probability"))?;
            if parts.next().is_some() {
                return Err(syntax(no, "trailing tokens after edge"));
            }
            let &f = state_ids
                .get(from)
                .ok_or_else(|| syntax(no, format!("unknown state `{from}`")))?;
            let &t = state_ids
                .get(to)
                .ok_or_else(|| syntax(no, format!("unknown state `{to}`")))?;
            let p = parse_rat(prob).map_err(|e| syntax(no, e.to_string()))?;
            edges.push((f, t, p));
        } else if let Some(rest) = line.strip_prefix("bad:") {
            bad_names.extend(rest.split_whitespace().map(|s| (no, s.to_string())));
        } else if let Some(rest) = line.strip_prefix("good:") {
            good_names.extend(rest.split_whitespace().map(|s| (no, s.to_string())));
        } else {
            return Err(syntax(no, format!("unrecognized line `{line}`")));
        }
    }

    let init = init.ok_or_else(|| ModelError::Validation("no init state declared".into()))?;
    let mut trans: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); states.len()];
    for (f, t, p) in edges {
        trans[f].push((t, p));
    }
    let hmc = Hmc::new(states, alphabet, init, obs, trans)?;

    if !classified {
        if !bad_names.is_empty() || !good_names.is_empty() {
            return Err(ModelError::Validation(
                "bad:/good: lines are only allowed in chmc files".into(),
            ));
        }
        return Ok(Model::Hmc(hmc));
    }
    let lookup = |names: Vec<(usize, String)>| -> Result<BTreeSet<usize>, ModelError> {
        names
            .into_iter()
            .map(|(no, n)| {
                hmc.state_index(&n)
                    .ok_or_else(|| syntax(no, format!("unknown state `{n}`")))
            })
            .collect()
    };
    let bad = lookup(bad_names)?;
    let good = lookup(good_names)?;
    Ok(Model::Classified(ClassifiedHmc::new(hmc, bad, good)?))
}

/// A sampled observation sequence together with the hidden state path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub symbols: Vec<usize>,
    pub states: Vec<usize>,
    pub seed: u64,
}

impl Run {
    pub fn render(&self, h: &Hmc) -> String {
        self.symbols
            .iter()
            .map(|&a| h.alphabet()[a].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run(seed={}, len={})", self.seed, self.symbols.len())
    }
}

/// Per-state cumulative successor thresholds on a 64-bit lattice, so a
/// uniform u64 draw picks successors identically on every platform.
#[derive(Debug, Clone)]
pub struct Sampler {
    thresholds: Vec<Vec<(usize, u128)>>,
}

impl Sampler {
    pub fn new(h: &Hmc) -> Self {
        use num_bigint::BigInt;
        use num_traits::ToPrimitive;
        let scale = BigInt::from(1u128 << 64);
        let thresholds = (0..h.num_states())
            .map(|s| {
                let mut cum = Rat::zero();
                h.successors(s)
                    .iter()
                    .map(|(t, p)| {
                        cum += p;
                        let scaled = (cum.numer() * &scale) / cum.denom();
                        (*t, scaled.to_u128().expect("cumulative fits in u128"))
                    })
                    .collect()
            })
            .collect();
        Sampler { thresholds }
    }

    fn step(&self, state: usize, draw: u64) -> usize {
        let row = &self.thresholds[state];
        for (t, thresh) in row {
            if (draw as u128) < *thresh {
                return *t;
            }
        }
        row.last().expect("validated state has successors").0
    }
}

/// Samples a run of `length` observations. Deterministic given
/// `(model, length, seed)`; the first symbol is always `obs(init)`.
pub fn sample_run(h: &Hmc, length: usize, seed: u64) -> Run {
    assert!(length >= 1, "run length must be at least 1");
    let sampler = Sampler::new(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(length);
    let mut symbols = Vec::with_capacity(length);
    let mut cur = h.init();
    states.push(cur);
    symbols.push(h.obs(cur));
    for _ in 1..length {
        cur = sampler.step(cur, rng.gen::<u64>());
        states.push(cur);
        symbols.push(h.obs(cur));
    }
    Run { symbols, states, seed }
}

/// Derives the seed of trial `index` from a master seed.
///
/// SplitMix64-style mixing of `(master, index)`; independent of execution
/// order, so parallel harness runs stay reproducible.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// All product states `(t1, t2)` reachable from the initial pair along
/// words jointly possible in both chains.
///
/// Edge `((s1,s2) -> (t1,t2))` exists iff both transitions exist and the
/// target observations agree; the seed pair itself requires the initial
/// observations to agree (the one-letter word case). An empty result means
/// the chains disagree on the very first observation.
pub fn product_reachable_pairs(h1: &Hmc, h2: &Hmc) -> BTreeSet<(usize, usize)> {
    assert!(h1.same_alphabet(h2), "chains must share an alphabet");
    let mut seen = BTreeSet::new();
    if h1.obs(h1.init()) != h2.obs(h2.init()) {
        return seen;
    }
    let seed = (h1.init(), h2.init());
    seen.insert(seed);
    let mut queue = VecDeque::from([seed]);
    while let Some((s1, s2)) = queue.pop_front() {
        for (t1, _) in h1.successors(s1) {
            for (t2, _) in h2.successors(s2) {
                if h1.obs(*t1) == h2.obs(*t2) && seen.insert((*t1, *t2)) {
                    queue.push_back((*t1, *t2));
                }
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::exact::rat;

    #[test]
    fn parse_biased_pair_text() {
        let m = parse_model(&corpus::biased_pair_text(&rat(1, 4)).0).unwrap();
        let h = m.as_hmc().unwrap();
        assert_eq!(h.num_states(), 2);
        assert_eq!(h.trans_prob(0, 0), Some(&rat(3, 4)));
        assert_eq!(h.trans_prob(0, 1), Some(&rat(1, 4)));
        assert_eq!(h.obs_symbol(0), "a");
        assert_eq!(h.obs_symbol(1), "b");
    }

    #[test]
    fn parse_minimal_chain() {
        let m = parse_model("hmc\nalphabet: a\nstate s0 obs=a init\nedge s0 -> s0 1\n").unwrap();
        let h = m.as_hmc().unwrap();
        assert_eq!(h.num_states(), 1);
        assert_eq!(h.init(), 0);
    }

    #[test]
    fn non_stochastic_row_rejected() {
        let text = "hmc\nalphabet: a\nstate s0 obs=a init\nedge s0 -> s0 9/10\n";
        let err = parse_model(text).unwrap_err();
        assert!(err.to_string().contains("row not stochastic"), "{err}");
    }

    #[test]
    fn syntax_error_carries_line_number() {
        let text = "hmc\nalphabet: a\nstate s0 obs=a init\nedgy s0 -> s0 1\n";
        match parse_model(text).unwrap_err() {
            ModelError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn unknown_symbol_rejected() {
        let text = "hmc\nalphabet: a\nstate s0 obs=b init\nedge s0 -> s0 1\n";
        assert!(parse_model(text).is_err());
    }

    #[test]
    fn decimal_probabilities_parse_exactly() {
        let text = "hmc\nalphabet: a b\nstate s0 obs=a init\nstate s1 obs=b\n\
                    edge s0 -> s0 0.75\nedge s0 -> s1 0.25\nedge s1 -> s1 1\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.underlying().trans_prob(0, 1), Some(&rat(1, 4)));
    }

    #[test]
    fn round_trip_preserves_model() {
        for (h1, h2) in [corpus::biased_pair(&rat(1, 4)), corpus::loop_pair(), corpus::absorbing_pair()] {
            for h in [h1, h2] {
                let again = parse_model(&h.to_text()).unwrap();
                assert_eq!(again.as_hmc().unwrap(), &h);
            }
        }
        let c = corpus::branching_chmc();
        match parse_model(&c.to_text()).unwrap() {
            Model::Classified(again) => assert_eq!(again, c),
            _ => panic!("expected chmc"),
        }
    }

    #[test]
    fn single_state_run_is_constant() {
        let h = corpus::single_state();
        for seed in [0u64, 7, 12345] {
            let run = sample_run(&h, 5, seed);
            assert_eq!(run.symbols, vec![0; 5]);
            assert_eq!(run.render(&h), "a a a a a");
        }
    }

    #[test]
    fn first_symbol_is_init_observation() {
        let (h1, _) = corpus::biased_pair(&rat(1, 4));
        for seed in 0..20u64 {
            let run = sample_run(&h1, 1, seed);
            assert_eq!(run.render(&h1), "a");
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let (h1, _) = corpus::biased_pair(&rat(1, 4));
        let a = sample_run(&h1, 500, 42);
        let b = sample_run(&h1, 500, 42);
        assert_eq!(a, b);
        let c = sample_run(&h1, 500, 43);
        assert_ne!(a.symbols, c.symbols);
    }

    #[test]
    fn empirical_frequency_matches_bias() {
        // After the first step the a-frequency should concentrate at 3/4.
        let (h1, _) = corpus::biased_pair(&rat(1, 4));
        let n = 100_000usize;
        let run = sample_run(&h1, n, 1);
        let a_count = run.symbols[1..].iter().filter(|&&s| s == 0).count();
        let p = 0.75f64;
        let sigma = (p * (1.0 - p) * (n - 1) as f64).sqrt();
        let mean = p * (n - 1) as f64;
        assert!(
            (a_count as f64 - mean).abs() < 3.0 * sigma,
            "a-count {a_count} outside 3 sigma of {mean}"
        );
    }

    #[test]
    fn reachable_pairs_of_biased_pair() {
        let (h1, h2) = corpus::biased_pair(&rat(1, 4));
        let pairs = product_reachable_pairs(&h1, &h2);
        assert_eq!(pairs, BTreeSet::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn reachable_pairs_singleton() {
        let h = corpus::single_state();
        assert_eq!(
            product_reachable_pairs(&h, &h.clone()),
            BTreeSet::from([(0, 0)])
        );
    }

    #[test]
    fn mismatched_initial_observation_gives_empty_set() {
        let h1 = corpus::single_state();
        let text = "hmc\nalphabet: a b\nstate s0 obs=b init\nedge s0 -> s0 1\n";
        let h2 = parse_model(text).unwrap().as_hmc().unwrap().clone();
        let h1b = parse_model("hmc\nalphabet: a b\nstate s0 obs=a init\nedge s0 -> s0 1\n")
            .unwrap()
            .as_hmc()
            .unwrap()
            .clone();
        let _ = h1;
        assert!(product_reachable_pairs(&h1b, &h2).is_empty());
    }

    #[test]
    fn trial_seeds_are_spread() {
        let seeds: BTreeSet<u64> = (0..1000).map(|i| trial_seed(99, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
