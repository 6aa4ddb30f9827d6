//! Exact-rational stationary Markov chains and their 1-block (hidden-Markov) images.
//!
//! Every probability here is a [`Rational`]; there is no floating point in this module.

mod chain;
mod decomp;
mod file;
mod windows;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bits::StateSet;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, SymbolId, Word};

pub use chain::{chain_on_tmc, stationary_distribution, ChainWeights, RationalMarkovChain};
pub use decomp::{
    admissible_parameters, chain_period_and_index, verify_decomposition_identity, DecompositionCheck,
    DecompositionFailure,
};
pub use file::{MeasureDocument, MEASURE_FORMAT};
pub use windows::{
    check_markov_windows, check_mrf_windows, verify_main_theorem, TheoremOutcome, TheoremReport, WindowProperty,
    WindowVerdict, WindowWitness,
};

pub type Rational = num_rational::BigRational;

/// Constraints `position → symbol` describing a cylinder set.
pub type Cylinder = BTreeMap<i64, SymbolId>;

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim().parse::<Rational>().map_err(|e| Error::Malformed(format!("rational `{text}`: {e}")))
}

/// Push-forward of a stationary chain under a labelling of its states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenMarkovMeasure {
    chain: RationalMarkovChain,
    alphabet: Vec<String>,
    labels: Vec<SymbolId>,
}

impl HiddenMarkovMeasure {
    /// `labels[s]` names the symbol emitted by hidden state `s`.
    pub fn new(chain: RationalMarkovChain, labels: &[String]) -> Result<Self> {
        if labels.len() != chain.len() {
            return Err(Error::Malformed("one label per hidden state is required".into()));
        }
        let mut alphabet: Vec<String> = labels.to_vec();
        alphabet.sort();
        alphabet.dedup();
        let labels = labels.iter().map(|l| alphabet.binary_search(l).expect("label is in its own alphabet")).collect();
        Ok(HiddenMarkovMeasure { chain, alphabet, labels })
    }

    /// The chain itself, observed directly (each state is its own symbol).
    pub fn from_chain(chain: RationalMarkovChain) -> Self {
        let names = chain.states().to_vec();
        Self::new(chain, &names).expect("state names are distinct")
    }

    pub fn chain(&self) -> &RationalMarkovChain {
        &self.chain
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn label(&self, state: usize) -> SymbolId {
        self.labels[state]
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    /// True when distinct hidden states carry distinct labels.
    pub fn is_plain_chain(&self) -> bool {
        self.alphabet.len() == self.labels.len()
    }

    fn hidden(&self) -> usize {
        self.labels.len()
    }

    /// Row vector after observing `a` at the first constrained position.
    pub(crate) fn start_vector(&self, a: SymbolId) -> Vec<Rational> {
        (0..self.hidden())
            .map(|s| if self.labels[s] == a { self.chain.stationary()[s].clone() } else { Rational::zero() })
            .collect()
    }

    /// One transition step followed by an optional observation.
    pub(crate) fn step(&self, v: &[Rational], observe: Option<SymbolId>) -> Vec<Rational> {
        let p = self.chain.transitions();
        let mut out = vec![Rational::zero(); self.hidden()];
        for (s, vs) in v.iter().enumerate() {
            if vs.is_zero() {
                continue;
            }
            for (t, o) in out.iter_mut().enumerate() {
                if observe.is_some_and(|a| self.labels[t] != a) || p[s][t].is_zero() {
                    continue;
                }
                *o += vs * &p[s][t];
            }
        }
        out
    }

    /// Column vector of probabilities of observing `word` from each hidden state, after
    /// one transition out of that state per symbol.
    pub(crate) fn backward(&self, word: &[SymbolId]) -> Vec<Rational> {
        let p = self.chain.transitions();
        let mut b = vec![Rational::one(); self.hidden()];
        for &a in word.iter().rev() {
            let mut nb = vec![Rational::zero(); self.hidden()];
            for (s, out) in nb.iter_mut().enumerate() {
                for t in 0..self.hidden() {
                    if self.labels[t] == a && !p[s][t].is_zero() && !b[t].is_zero() {
                        *out += &p[s][t] * &b[t];
                    }
                }
            }
            b = nb;
        }
        b
    }

    /// Probability of a cylinder set; unconstrained gaps are summed out by transfer products.
    pub fn prob(&self, cylinder: &Cylinder) -> Rational {
        let mut it = cylinder.iter();
        let Some((&first_pos, &first)) = it.next() else { return Rational::one() };
        let mut v = self.start_vector(first);
        let mut pos = first_pos;
        for (&next_pos, &a) in it {
            for _ in pos + 1..next_pos {
                v = self.step(&v, None);
            }
            v = self.step(&v, Some(a));
            pos = next_pos;
            if v.iter().all(Zero::is_zero) {
                return Rational::zero();
            }
        }
        v.into_iter().sum()
    }

    /// `μ([w]_position)`.
    pub fn cylinder_prob(&self, word: &Word, position: i64) -> Rational {
        self.prob(&cylinder_of(word.symbols(), position))
    }

    /// `μ(target | given)`; inconsistent constraints give zero.
    pub fn conditional_prob(&self, target: &Cylinder, given: &Cylinder) -> Result<Rational> {
        let den = self.prob(given);
        if den.is_zero() {
            return Err(Error::NullConditioning);
        }
        let mut joint = given.clone();
        for (&pos, &a) in target {
            match joint.insert(pos, a) {
                Some(b) if b != a => return Ok(Rational::zero()),
                _ => {}
            }
        }
        Ok(self.prob(&joint) / den)
    }

    /// Labelled graph of positive-probability transitions between recurrent hidden states.
    pub fn support(&self) -> Result<Presentation> {
        let names: Vec<String> = self.chain.states().to_vec();
        let live = StateSet::from_iter_in(
            self.hidden(),
            (0..self.hidden()).filter(|&s| !self.chain.stationary()[s].is_zero()),
        );
        let mut edges = Vec::new();
        for s in live.iter() {
            for t in live.iter() {
                if !self.chain.transitions()[s][t].is_zero() {
                    edges.push((names[s].clone(), names[t].clone(), self.alphabet[self.labels[t]].clone()));
                }
            }
        }
        Presentation::new(&self.alphabet, &names, &edges)?.trim_essential()
    }
}

/// Cylinder fixing `word` starting at `position`.
pub fn cylinder_of(word: &[SymbolId], position: i64) -> Cylinder {
    word.iter().enumerate().map(|(i, &a)| (position + i as i64, a)).collect()
}

/// Support of a measure as an essential presentation.
pub fn support_of(m: &HiddenMarkovMeasure) -> Result<Presentation> {
    m.support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::language::language_equal;
    use crate::Limits;

    pub(crate) fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    pub(crate) fn golden_chain() -> HiddenMarkovMeasure {
        HiddenMarkovMeasure::from_chain(chain_on_tmc(&fixtures::golden_mean(), &ChainWeights::default()).unwrap())
    }

    pub(crate) fn even_measure() -> HiddenMarkovMeasure {
        let chain = RationalMarkovChain::new(
            &["A", "B", "C"],
            vec![vec![q("0"), q("1"), q("0")], vec![q("1/2"), q("0"), q("1/2")], vec![q("1/2"), q("0"), q("1/2")]],
            None,
        )
        .unwrap();
        HiddenMarkovMeasure::new(chain, &["0".into(), "0".into(), "1".into()]).unwrap()
    }

    #[test]
    fn golden_mean_cylinders() {
        let m = golden_chain();
        assert_eq!(m.cylinder_prob(&Word(vec![1, 1]), 0), q("0"));
        assert_eq!(m.cylinder_prob(&Word(vec![0, 1]), 0), q("1/3"));
        assert_eq!(m.cylinder_prob(&Word(vec![0]), 5), q("2/3"));
        assert_eq!(m.cylinder_prob(&Word(vec![0, 1]), -7), q("1/3"));
    }

    #[test]
    fn golden_mean_conditionals() {
        let m = golden_chain();
        let c = |pairs: &[(i64, usize)]| pairs.iter().copied().collect::<Cylinder>();
        assert_eq!(m.conditional_prob(&c(&[(0, 1)]), &c(&[(-1, 0)])).unwrap(), q("1/2"));
        // μ(000) / μ(0·0), summing the middle coordinate by hand
        let num = m.cylinder_prob(&Word(vec![0, 0, 0]), -1);
        let den = num.clone() + m.cylinder_prob(&Word(vec![0, 1, 0]), -1);
        assert_eq!(m.conditional_prob(&c(&[(0, 0)]), &c(&[(-1, 0), (1, 0)])).unwrap(), num / den);
        assert_eq!(m.conditional_prob(&c(&[(0, 1)]), &c(&[(-1, 1)])).unwrap(), q("0"));
        assert_eq!(m.conditional_prob(&c(&[(0, 0)]), &c(&[(0, 1), (1, 1)])), Err(Error::NullConditioning));
    }

    #[test]
    fn one_symbol_conditional_is_one() {
        let m = HiddenMarkovMeasure::from_chain(
            chain_on_tmc(&fixtures::full_shift(&["a"]), &ChainWeights::default()).unwrap(),
        );
        let c = |pairs: &[(i64, usize)]| pairs.iter().copied().collect::<Cylinder>();
        assert_eq!(m.conditional_prob(&c(&[(0, 0)]), &c(&[(-1, 0)])).unwrap(), q("1"));
    }

    #[test]
    fn supports() {
        let lim = Limits::default();
        let gm = golden_chain();
        assert!(language_equal(&gm.support().unwrap(), &fixtures::golden_mean(), &lim).unwrap());
        let even = even_measure();
        assert!(language_equal(&support_of(&even).unwrap(), &fixtures::even_shift(), &lim).unwrap());
        // forcing P(0,1) = 0 makes state 1 transient and drops its edges
        let frozen =
            RationalMarkovChain::new(&["0", "1"], vec![vec![q("1"), q("0")], vec![q("1"), q("0")]], None).unwrap();
        assert_eq!(frozen.stationary(), &[q("1"), q("0")]);
        let s = HiddenMarkovMeasure::from_chain(frozen).support().unwrap();
        assert_eq!(s.edges().len(), 1);
        assert!(!s.contains_str("1"));
        let lazy = RationalMarkovChain::new(
            &["0", "1"],
            vec![vec![q("1"), q("0")], vec![q("0"), q("1")]],
            Some(vec![q("1/2"), q("1/2")]),
        )
        .unwrap();
        let s = HiddenMarkovMeasure::from_chain(lazy).support().unwrap();
        assert_eq!(s.edges().len(), 2);
        assert!(!s.contains_str("01"));
    }
}
