//! Small fixed models used throughout the tests and the examples in the
//! documentation: chain pairs with known distinguishability status and a
//! classified chain with known reach probabilities.

use crate::exact::{format_rat, rat, Rat};
use crate::model::{parse_model, ClassifiedHmc, Hmc, Model};
use num_traits::One;
use std::collections::BTreeSet;

fn hmc(text: &str) -> Hmc {
    match parse_model(text).expect("corpus model parses") {
        Model::Hmc(h) => h,
        Model::Classified(_) => panic!("corpus model is not a plain hmc"),
    }
}

fn chmc(text: &str) -> ClassifiedHmc {
    match parse_model(text).expect("corpus model parses") {
        Model::Classified(c) => c,
        Model::Hmc(_) => panic!("corpus model is not classified"),
    }
}

/// Textual form of [`biased_pair`], parameterized by the bias `delta`.
pub fn biased_pair_text(delta: &Rat) -> (String, String) {
    assert!(
        delta > &rat(0, 1) && delta < &rat(1, 2),
        "bias must lie in (0, 1/2)"
    );
    let hi = format_rat(&(rat(1, 2) + delta));
    let lo = format_rat(&(rat(1, 2) - delta));
    let h1 = format!(
        "hmc\nalphabet: a b\nstate s0 obs=a init\nstate s1 obs=b\n\
         edge s0 -> s0 {hi}\nedge s0 -> s1 {lo}\n\
         edge s1 -> s0 {hi}\nedge s1 -> s1 {lo}\n"
    );
    let h2 = format!(
        "hmc\nalphabet: a b\nstate t0 obs=a init\nstate t1 obs=b\n\
         edge t0 -> t0 {lo}\nedge t0 -> t1 {hi}\n\
         edge t1 -> t0 {lo}\nedge t1 -> t1 {hi}\n"
    );
    (h1, h2)
}

/// Two-state chains over {a,b} that disagree by a bias `delta`: the first
/// favors staying on `a`, the second favors `b`. Distinguishable for every
/// positive bias, with profile constant 4d/(3+2d).
pub fn biased_pair(delta: &Rat) -> (Hmc, Hmc) {
    let (t1, t2) = biased_pair_text(delta);
    (hmc(&t1), hmc(&t2))
}

/// A pair with an extra internal `a`-loop in the first chain. The second
/// chain emits `b` with probability 1/2 at every step, so observing long
/// `a`-blocks drives the likelihood ratio apart; closed forms for
/// pr(a^n) and pr(a^n b) are known for both chains.
pub fn loop_pair() -> (Hmc, Hmc) {
    let h1 = hmc(
        "hmc\nalphabet: a b\n\
         state s0 obs=a init\nstate s1 obs=a\nstate s2 obs=b\n\
         edge s0 -> s0 1/3\nedge s0 -> s1 1/3\nedge s0 -> s2 1/3\n\
         edge s1 -> s1 1\n\
         edge s2 -> s0 1/2\nedge s2 -> s2 1/2\n",
    );
    let h2 = hmc(
        "hmc\nalphabet: a b\n\
         state t0 obs=a init\nstate t1 obs=b\n\
         edge t0 -> t0 1/2\nedge t0 -> t1 1/2\n\
         edge t1 -> t0 1/2\nedge t1 -> t1 1/2\n",
    );
    (h1, h2)
}

/// Chains that both emit a block of `a`s and then fall into an absorbing
/// `b`-state, at different rates. Not distinguishable (the total variation
/// distance is strictly between 0 and 1), yet not equivalent either.
pub fn absorbing_pair() -> (Hmc, Hmc) {
    let h1 = hmc(
        "hmc\nalphabet: a b\n\
         state s0 obs=a init\nstate s1 obs=b\n\
         edge s0 -> s0 1/2\nedge s0 -> s1 1/2\n\
         edge s1 -> s1 1\n",
    );
    let h2 = hmc(
        "hmc\nalphabet: a b\n\
         state t0 obs=a init\nstate t1 obs=b\n\
         edge t0 -> t0 2/3\nedge t0 -> t1 1/3\n\
         edge t1 -> t1 1\n",
    );
    (h1, h2)
}

/// A distinguishable pair where the first chain can emit `aa` only through
/// a detour state, giving the two chains different short-word statistics.
pub fn detour_pair() -> (Hmc, Hmc) {
    let h1 = hmc(
        "hmc\nalphabet: a b\n\
         state s0 obs=a init\nstate s1 obs=a\nstate s2 obs=b\n\
         edge s0 -> s0 1/4\nedge s0 -> s1 1/4\nedge s0 -> s2 1/2\n\
         edge s1 -> s0 1\n\
         edge s2 -> s0 1\n",
    );
    let h2 = hmc(
        "hmc\nalphabet: a b\n\
         state t0 obs=a init\nstate t1 obs=b\n\
         edge t0 -> t0 1/2\nedge t0 -> t1 1/2\n\
         edge t1 -> t0 1\n",
    );
    (h1, h2)
}

/// One state, one symbol, self-loop.
pub fn single_state() -> Hmc {
    hmc("hmc\nalphabet: a\nstate s0 obs=a init\nedge s0 -> s0 1\n")
}

/// Classified chain whose transient root flips into a good or bad sink:
/// s0 loops on itself with probability 1/2 and otherwise falls, evenly,
/// into a two-state good cycle or an absorbing bad state. P_{s0}(Bad) = 1/2.
pub fn branching_chmc() -> ClassifiedHmc {
    chmc(
        "chmc\nalphabet: a b\n\
         state s0 obs=a init\nstate g obs=a\nstate h obs=a\nstate b obs=b\n\
         edge s0 -> s0 1/2\nedge s0 -> g 1/4\nedge s0 -> b 1/4\n\
         edge g -> h 1\nedge h -> g 1\n\
         edge b -> b 1\n\
         bad: b\ngood: g h\n",
    )
}

/// Reserved observation symbol emitted by the fresh initial state of
/// [`combine`]. Input alphabets must not contain it.
pub const COMBINE_SYMBOL: &str = "_";

/// Joins two chains into one classified chain: a fresh initial state emits
/// [`COMBINE_SYMBOL`] and moves with probability 1/2 into either chain's
/// initial state. BSCCs inherited from the first chain are labeled bad,
/// those from the second good. State names are prefixed `1_` / `2_`.
pub fn combine(h1: &Hmc, h2: &Hmc) -> ClassifiedHmc {
    assert!(h1.same_alphabet(h2), "chains must share an alphabet");
    assert!(
        h1.symbol_index(COMBINE_SYMBOL).is_none(),
        "alphabet already uses the reserved symbol"
    );
    let mut alphabet: Vec<String> = h1.alphabet().to_vec();
    alphabet.push(COMBINE_SYMBOL.to_string());
    let fresh_sym = alphabet.len() - 1;

    let mut states = vec!["root".to_string()];
    let mut obs = vec![fresh_sym];
    let mut trans: Vec<Vec<(usize, Rat)>> = vec![Vec::new()];
    let mut offsets = [0usize; 2];
    for (i, h) in [h1, h2].into_iter().enumerate() {
        let off = states.len();
        offsets[i] = off;
        for s in 0..h.num_states() {
            states.push(format!("{}_{}", i + 1, h.state_name(s)));
            obs.push(h.obs(s));
            trans.push(
                h.successors(s)
                    .iter()
                    .map(|(t, p)| (off + t, p.clone()))
                    .collect(),
            );
        }
        trans[0].push((off + h.init(), rat(1, 2)));
    }
    let combined = Hmc::new(states, alphabet, 0, obs, trans).expect("combined chain is valid");

    let split = offsets[1];
    let mut bad = BTreeSet::new();
    let mut good = BTreeSet::new();
    for comp in crate::rv::bsccs(&combined) {
        if comp.iter().all(|&s| s >= split) {
            good.extend(comp);
        } else {
            bad.extend(comp);
        }
    }
    ClassifiedHmc::new(combined, bad, good).expect("combined classification is valid")
}

/// The distinguishable-or-not pairs exercised across the test suite.
pub fn all_pairs() -> Vec<(&'static str, Hmc, Hmc)> {
    let (b1, b2) = biased_pair(&rat(1, 4));
    let (l1, l2) = loop_pair();
    let (a1, a2) = absorbing_pair();
    let (d1, d2) = detour_pair();
    let self_pair = biased_pair(&rat(1, 4));
    vec![
        ("biased", b1, b2),
        ("loop", l1, l2),
        ("absorbing", a1, a2),
        ("detour", d1, d2),
        ("self", self_pair.0.clone(), self_pair.0),
    ]
}

/// Sanity check used by tests: every corpus chain is a valid model.
pub fn assert_valid() {
    for (_, h1, h2) in all_pairs() {
        assert!(h1.same_alphabet(&h2));
    }
    let c = branching_chmc();
    assert_eq!(c.hmc().num_states(), 4);
    let _ = Rat::one();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_well_formed() {
        assert_valid();
    }

    #[test]
    fn biased_pair_bias_bounds() {
        let (h1, h2) = biased_pair(&rat(1, 8));
        assert_eq!(h1.trans_prob(0, 0), Some(&rat(5, 8)));
        assert_eq!(h2.trans_prob(0, 0), Some(&rat(3, 8)));
    }

    #[test]
    fn combine_over_biased_pair() {
        let (h1, h2) = biased_pair(&rat(1, 4));
        let c = combine(&h1, &h2);
        let h = c.hmc();
        assert_eq!(h.num_states(), 5);
        assert_eq!(h.obs_symbol(0), COMBINE_SYMBOL);
        assert_eq!(h.trans_prob(0, 1), Some(&rat(1, 2)));
        assert_eq!(h.trans_prob(0, 3), Some(&rat(1, 2)));
        assert_eq!(c.bad_states(), &BTreeSet::from([1, 2]));
        assert_eq!(c.good_states(), &BTreeSet::from([3, 4]));
    }

    #[test]
    fn combine_labels_only_bscc_states() {
        // The first absorbing chain has a transient root; only its sink
        // may carry a label.
        let (h1, h2) = absorbing_pair();
        let c = combine(&h1, &h2);
        assert_eq!(c.bad_states(), &BTreeSet::from([2]));
        assert_eq!(c.good_states(), &BTreeSet::from([4]));
    }
}
