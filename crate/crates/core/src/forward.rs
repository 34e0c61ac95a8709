//! Forward quantities of an observation word: the sub-probabilities
//! `sub(s,u,t)`, the word probability `pr`, the conditional distribution
//! `cd`, the likelihood ratio `lr`, and a normalized log-space tracker for
//! long streams.

use crate::exact::{rat_to_f64, Rat};
use crate::model::{Dist, Hmc};
use num_traits::{One, Zero};

/// Exact matrix of `sub(s, u, t)`: the probability that the chain, started
/// in `s`, emits `u` and is then in state `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubMatrix {
    word_len: usize,
    /// entries[s][t] = sub(s, u, t)
    entries: Vec<Vec<Rat>>,
}

impl SubMatrix {
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn entry(&self, s: usize, t: usize) -> &Rat {
        &self.entries[s][t]
    }

    /// Row sum: the probability of emitting the word starting from `s`.
    pub fn row_prob(&self, s: usize) -> Rat {
        self.entries[s].iter().sum()
    }
}

/// Base case `sub(s, a, t) = [t = s][obs(s) = a]`.
pub fn sub_base(h: &Hmc, a: usize) -> SubMatrix {
    let n = h.num_states();
    let mut entries = vec![vec![Rat::zero(); n]; n];
    for s in 0..n {
        if h.obs(s) == a {
            entries[s][s] = Rat::one();
        }
    }
    SubMatrix { word_len: 1, entries }
}

/// One-step extension `sub(s, u·a, r) = Σ_t sub(s,u,t)·φ(t,r)` when
/// `obs(r) = a`, else 0.
pub fn sub_extend(h: &Hmc, m: &SubMatrix, a: usize) -> SubMatrix {
    let n = h.num_states();
    assert_eq!(m.entries.len(), n, "matrix does not belong to this chain");
    assert!(a < h.alphabet().len(), "symbol out of alphabet");
    let mut entries = vec![vec![Rat::zero(); n]; n];
    for s in 0..n {
        for t in 0..n {
            let w = &m.entries[s][t];
            if w.is_zero() {
                continue;
            }
            for (r, p) in h.successors(t) {
                if h.obs(*r) == a {
                    entries[s][*r] += w * p;
                }
            }
        }
    }
    SubMatrix { word_len: m.word_len + 1, entries }
}

/// `sub` for a whole word; `None` for the empty word (no matrix form).
pub fn sub_word(h: &Hmc, u: &[usize]) -> Option<SubMatrix> {
    let (&first, rest) = u.split_first()?;
    let mut m = sub_base(h, first);
    for &a in rest {
        m = sub_extend(h, &m, a);
    }
    Some(m)
}

/// Acceptance vector `η(u)`: component `s` is the probability of emitting
/// `u` from `s`, i.e. the row sums of `sub`. `η(ε)` is all ones.
pub fn eta(h: &Hmc, u: &[usize]) -> Vec<Rat> {
    match sub_word(h, u) {
        Some(m) => (0..h.num_states()).map(|s| m.row_prob(s)).collect(),
        None => vec![Rat::one(); h.num_states()],
    }
}

/// Prepends a symbol: `η(a·w)_s = [obs(s)=a] Σ_t φ(s,t) η(w)_t`.
pub fn eta_prepend(h: &Hmc, a: usize, eta_w: &[Rat]) -> Vec<Rat> {
    (0..h.num_states())
        .map(|s| {
            if h.obs(s) != a {
                return Rat::zero();
            }
            h.successors(s)
                .iter()
                .map(|(t, p)| p * &eta_w[*t])
                .sum()
        })
        .collect()
}

/// Probability of emitting `u` from initial distribution `psi`;
/// `pr(psi, ε) = 1` by convention.
pub fn pr(h: &Hmc, psi: &Dist, u: &[usize]) -> Rat {
    match sub_word(h, u) {
        Some(m) => psi
            .support()
            .map(|s| psi.weight(s) * m.row_prob(s))
            .sum(),
        None => Rat::one(),
    }
}

/// Conditional state distribution after emitting `u` from `psi`;
/// `None` when `pr(psi, u) = 0`.
pub fn cd(h: &Hmc, psi: &Dist, u: &[usize]) -> Option<Dist> {
    assert!(!u.is_empty(), "cd needs a nonempty word");
    let m = sub_word(h, u)?;
    let n = h.num_states();
    let mut raw = vec![Rat::zero(); n];
    for s in psi.support() {
        for t in 0..n {
            let e = m.entry(s, t);
            if !e.is_zero() {
                raw[t] += psi.weight(s) * e;
            }
        }
    }
    let total: Rat = raw.iter().sum();
    if total.is_zero() {
        return None;
    }
    for w in raw.iter_mut() {
        *w /= &total;
    }
    Some(Dist::new(raw).expect("normalized weights form a distribution"))
}

/// Likelihood ratio `pr_2(u) / pr_1(u)` of a word under the two chains'
/// initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lr {
    Finite(Rat),
    /// `pr_1 = 0 < pr_2`.
    Infinite,
    /// Both probabilities are 0.
    Undefined,
}

pub fn lr(h1: &Hmc, h2: &Hmc, u: &[usize]) -> Lr {
    let p1 = pr(h1, &Dist::delta(h1.init(), h1.num_states()), u);
    let p2 = pr(h2, &Dist::delta(h2.init(), h2.num_states()), u);
    if p1.is_zero() {
        if p2.is_zero() {
            Lr::Undefined
        } else {
            Lr::Infinite
        }
    } else {
        Lr::Finite(p2 / p1)
    }
}

/// Per-symbol incoming-edge lists with f64 weights, for streaming.
#[derive(Debug, Clone)]
struct FloatChain {
    num_states: usize,
    init: usize,
    /// incoming[a] lists (target, source, φ(source,target)) with obs(target)=a.
    incoming: Vec<Vec<(usize, usize, f64)>>,
}

impl FloatChain {
    fn new(h: &Hmc) -> Self {
        let mut incoming = vec![Vec::new(); h.alphabet().len()];
        for s in 0..h.num_states() {
            for (t, p) in h.successors(s) {
                incoming[h.obs(*t)].push((*t, s, rat_to_f64(p)));
            }
        }
        FloatChain { num_states: h.num_states(), init: h.init(), incoming }
    }
}

/// Streaming view of a single chain: normalized conditional distribution
/// plus accumulated natural-log word probability. Zero detection is
/// structural (support emptiness), never a float threshold.
#[derive(Debug, Clone)]
pub struct ChainTracker {
    chain: FloatChain,
    dist: Vec<f64>,
    support: Vec<bool>,
    log_pr: f64,
    dead: bool,
    steps: usize,
    first_obs: usize,
}

impl ChainTracker {
    pub fn new(h: &Hmc) -> Self {
        let chain = FloatChain::new(h);
        let mut dist = vec![0.0; chain.num_states];
        let mut support = vec![false; chain.num_states];
        dist[chain.init] = 1.0;
        support[chain.init] = true;
        ChainTracker {
            chain,
            dist,
            support,
            log_pr: 0.0,
            dead: false,
            steps: 0,
            first_obs: h.obs(h.init()),
        }
    }

    /// Consumes one symbol; the very first symbol is matched against the
    /// initial state's observation rather than a transition.
    pub fn step(&mut self, a: usize) {
        if self.dead {
            self.steps += 1;
            return;
        }
        if self.steps == 0 {
            if a != self.first_obs {
                self.dead = true;
            }
            self.steps = 1;
            return;
        }
        let mut next = vec![0.0; self.chain.num_states];
        let mut next_support = vec![false; self.chain.num_states];
        let mut alive = false;
        for &(t, s, p) in &self.chain.incoming[a] {
            if self.support[s] {
                next[t] += self.dist[s] * p;
                next_support[t] = true;
                alive = true;
            }
        }
        self.steps += 1;
        if !alive {
            self.dead = true;
            return;
        }
        let total: f64 = next.iter().sum();
        for x in next.iter_mut() {
            *x /= total;
        }
        self.dist = next;
        self.support = next_support;
        self.log_pr += total.ln();
    }

    /// Natural log of the probability of the consumed stream, or `None`
    /// once the stream has become structurally impossible.
    pub fn log_pr(&self) -> Option<f64> {
        if self.dead {
            None
        } else {
            Some(self.log_pr)
        }
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// The normalized conditional distribution while alive.
    pub fn dist(&self) -> &[f64] {
        &self.dist
    }
}

/// Streaming view of a chain pair: tracks `log lr = log pr_2 − log pr_1`.
#[derive(Debug, Clone)]
pub struct StreamTracker {
    t1: ChainTracker,
    t2: ChainTracker,
}

impl StreamTracker {
    pub fn new(h1: &Hmc, h2: &Hmc) -> Self {
        assert!(h1.same_alphabet(h2), "chains must share an alphabet");
        StreamTracker { t1: ChainTracker::new(h1), t2: ChainTracker::new(h2) }
    }

    pub fn step(&mut self, a: usize) {
        self.t1.step(a);
        self.t2.step(a);
    }

    /// Accumulated natural-log likelihood ratio; finite only while both
    /// chains can still emit the stream.
    pub fn log_lr(&self) -> Option<f64> {
        Some(self.t2.log_pr()? - self.t1.log_pr()?)
    }

    pub fn zero1(&self) -> bool {
        self.t1.is_dead()
    }

    pub fn zero2(&self) -> bool {
        self.t2.is_dead()
    }

    pub fn steps(&self) -> usize {
        self.t1.steps()
    }

    pub fn chain1(&self) -> &ChainTracker {
        &self.t1
    }

    pub fn chain2(&self) -> &ChainTracker {
        &self.t2
    }
}

/// Parses a whitespace-separated word over a chain's alphabet into symbol
/// indices.
pub fn parse_word(h: &Hmc, text: &str) -> Option<Vec<usize>> {
    text.split_whitespace().map(|s| h.symbol_index(s)).collect()
}
