use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::bits::BoolMatrix;
use crate::classify::decompose_irreducible;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::graph::strongly_connected_components;
use crate::presentation::{Presentation, Word};

/// Stationary Markov chain with exact rational transition matrix and stationary vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMarkovChain {
    states: Vec<String>,
    transitions: Vec<Vec<Rational>>,
    stationary: Vec<Rational>,
    component_weights: Vec<Rational>,
}

impl RationalMarkovChain {
    /// Validates a row-stochastic matrix and solves for its stationary vector.
    ///
    /// When the positive transitions split into several closed classes, the stationary
    /// vector mixes the classes' own stationary vectors with `component_weights` (uniform by
    /// default). States outside every closed class are transient and get probability zero.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        transitions: Vec<Vec<Rational>>,
        component_weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sorted = states.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateState(w[0].clone()));
        }
        check_stochastic(&transitions, states.len())?;
        let adj = positive_graph(&transitions);
        let closed: Vec<Vec<usize>> = strongly_connected_components(&adj)
            .into_iter()
            .filter(|c| c.iter().all(|&s| (0..states.len()).all(|t| !adj.get(s, t) || c.contains(&t))))
            .collect();
        let k = closed.len();
        let weights = match component_weights {
            None => vec![Rational::new(1.into(), k.into()); k],
            Some(w) => {
                if w.len() != k {
                    return Err(Error::InvalidWeights(format!("{k} closed classes but {} component weights", w.len())));
                }
                if w.iter().any(|x| !x.is_positive()) || w.iter().sum::<Rational>() != Rational::one() {
                    return Err(Error::InvalidWeights("component weights must be positive and sum to 1".into()));
                }
                w
            }
        };
        let mut stationary = vec![Rational::zero(); states.len()];
        for (comp, weight) in closed.iter().zip(&weights) {
            let sub: Vec<Vec<Rational>> =
                comp.iter().map(|&s| comp.iter().map(|&t| transitions[s][t].clone()).collect()).collect();
            let pi = stationary_distribution(&sub)?;
            for (&s, x) in comp.iter().zip(pi) {
                stationary[s] = x * weight;
            }
        }
        Ok(RationalMarkovChain { states, transitions, stationary, component_weights: weights })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[Vec<Rational>] {
        &self.transitions
    }

    pub fn stationary(&self) -> &[Rational] {
        &self.stationary
    }

    /// Weights used to mix the closed classes, in order of each class's first state.
    pub fn component_weights(&self) -> &[Rational] {
        &self.component_weights
    }

    /// `π(w₁)·∏ P(wᵢ, wᵢ₊₁)` for a word over the state indices.
    pub fn path_prob(&self, w: &Word) -> Rational {
        let Some(first) = w.first() else { return Rational::one() };
        w.symbols()
            .windows(2)
            .fold(self.stationary[first].clone(), |acc, pair| acc * &self.transitions[pair[0]][pair[1]])
    }
}

fn check_stochastic(p: &[Vec<Rational>], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Malformed("chain has no states".into()));
    }
    if p.len() != n || p.iter().any(|row| row.len() != n) {
        return Err(Error::Malformed(format!("transition matrix must be {n}×{n}")));
    }
    for (i, row) in p.iter().enumerate() {
        if row.iter().any(Signed::is_negative) {
            return Err(Error::Malformed(format!("negative transition probability in row {i}")));
        }
        if row.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Malformed(format!("row {i} does not sum to 1")));
        }
    }
    Ok(())
}

fn positive_graph(p: &[Vec<Rational>]) -> BoolMatrix {
    let mut adj = BoolMatrix::zero(p.len());
    for (i, row) in p.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                adj.set(i, j);
            }
        }
    }
    adj
}

/// Exact solution of `πP = π`, `Σπ = 1` for an irreducible row-stochastic `P`.
pub fn stationary_distribution(p: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = p.len();
    check_stochastic(p, n)?;
    if strongly_connected_components(&positive_graph(p)).len() != 1 {
        return Err(Error::Reducible(
            "transition graph is not strongly connected; component weights are required".into(),
        ));
    }
    // rows: (Pᵀ - I) with the last equation replaced by normalization
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = (0..n).map(|i| p[i][j].clone()).collect();
            row[j] -= Rational::one();
            row.push(Rational::zero());
            row
        })
        .collect();
    a[n - 1] = vec![Rational::one(); n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Inconsistency("singular stationary system".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    let pi: Vec<Rational> = a.into_iter().map(|row| row[n].clone()).collect();
    if pi.iter().any(|x| !x.is_positive()) {
        return Err(Error::Inconsistency("stationary vector is not positive".into()));
    }
    Ok(pi)
}

/// Optional weights for [`chain_on_tmc`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainWeights {
    /// Relative weight of each allowed 2-block `(a, b)`; rows are normalized. Uniform when absent.
    pub edges: Option<BTreeMap<(String, String), Rational>>,
    /// Mixing weights of the irreducible components. Uniform when absent.
    pub components: Option<Vec<Rational>>,
}

/// Stationary Markov chain whose support is exactly the given non-wandering TMC.
pub fn chain_on_tmc(p: &Presentation, weights: &ChainWeights) -> Result<RationalMarkovChain> {
    let limits = Limits::default();
    let components = decompose_irreducible(p, &limits)?;
    let mut symbols: Vec<String> = components.iter().flat_map(|c| c.symbols.iter().cloned()).collect();
    symbols.sort();
    let n = symbols.len();
    let mut allowed = vec![vec![false; n]; n];
    for (i, a) in symbols.iter().enumerate() {
        for (j, b) in symbols.iter().enumerate() {
            let w = Word(vec![p.symbol_id(a).expect("component symbol"), p.symbol_id(b).expect("component symbol")]);
            allowed[i][j] = p.contains_word(&w);
        }
    }
    if let Some(map) = &weights.edges {
        for ((a, b), w) in map {
            let (Ok(i), Ok(j)) = (symbols.binary_search(a), symbols.binary_search(b)) else {
                return Err(Error::InvalidWeights(format!("weight on forbidden 2-block {a}{b}")));
            };
            if !allowed[i][j] {
                return Err(Error::InvalidWeights(format!("weight on forbidden 2-block {a}{b}")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidWeights(format!("non-positive weight on allowed 2-block {a}{b}")));
            }
        }
    }
    let mut transitions = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if !allowed[i][j] {
                continue;
            }
            transitions[i][j] = match &weights.edges {
                None => Rational::one(),
                Some(map) => map.get(&(symbols[i].clone(), symbols[j].clone())).cloned().ok_or_else(|| {
                    Error::InvalidWeights(format!("missing weight on allowed 2-block {}{}", symbols[i], symbols[j]))
                })?,
            };
        }
        let total: Rational = transitions[i].iter().sum();
        for x in transitions[i].iter_mut() {
            *x /= &total;
        }
    }
    RationalMarkovChain::new(&symbols, transitions, weights.components.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::parse_rational as q;

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s).unwrap()).collect()
    }

    #[test]
    fn golden_mean_uniform_chain() {
        let c = chain_on_tmc(&fixtures::golden_mean(), &ChainWeights::default()).unwrap();
        assert_eq!(c.transitions(), &[qs(&["1/2", "1/2"]), qs(&["1", "0"])]);
        assert_eq!(c.stationary(), qs(&["2/3", "1/3"]).as_slice());
    }

    #[test]
    fn one_symbol_full_shift_chain() {
        let c = chain_on_tmc(&fixtures::full_shift(&["a"]), &ChainWeights::default()).unwrap();
        assert_eq!(c.transitions(), &[qs(&["1"])]);
        assert_eq!(c.stationary(), qs(&["1"]).as_slice());
    }

    #[test]
    fn two_fixed_points_mix_evenly() {
        let w = ChainWeights { edges: None, components: Some(qs(&["1/2", "1/2"])) };
        let c = chain_on_tmc(&fixtures::two_fixed_points(), &w).unwrap();
        assert_eq!(c.stationary(), qs(&["1/2", "1/2"]).as_slice());
        let skew = ChainWeights { edges: None, components: Some(qs(&["1/3", "2/3"])) };
        assert_eq!(
            chain_on_tmc(&fixtures::two_fixed_points(), &skew).unwrap().stationary(),
            qs(&["1/3", "2/3"]).as_slice()
        );
    }

    #[test]
    fn stationary_examples() {
        assert_eq!(stationary_distribution(&[qs(&["1"])]).unwrap(), qs(&["1"]));
        let ds = vec![qs(&["0", "1/2", "1/2"]), qs(&["1/2", "0", "1/2"]), qs(&["1/2", "1/2", "0"])];
        assert_eq!(stationary_distribution(&ds).unwrap(), qs(&["1/3", "1/3", "1/3"]));
        let red = vec![qs(&["1", "0"]), qs(&["0", "1"])];
        assert!(matches!(stationary_distribution(&red), Err(Error::Reducible(_))));
        assert!(matches!(stationary_distribution(&[qs(&["1/2", "1/3"]), qs(&["1", "0"])]), Err(Error::Malformed(_))));
    }

    #[test]
    fn weight_validation() {
        let gm = fixtures::golden_mean();
        let mut map = BTreeMap::new();
        map.insert(("0".to_string(), "0".to_string()), q("2").unwrap());
        map.insert(("0".to_string(), "1".to_string()), q("1").unwrap());
        map.insert(("1".to_string(), "0".to_string()), q("5").unwrap());
        let w = ChainWeights { edges: Some(map.clone()), components: None };
        let c = chain_on_tmc(&gm, &w).unwrap();
        assert_eq!(c.transitions()[0], qs(&["2/3", "1/3"]));
        let mut bad = map.clone();
        bad.insert(("1".to_string(), "1".to_string()), q("1").unwrap());
        assert!(matches!(
            chain_on_tmc(&gm, &ChainWeights { edges: Some(bad), components: None }),
            Err(Error::InvalidWeights(_))
        ));
        let mut zero = map.clone();
        zero.insert(("1".to_string(), "0".to_string()), q("0").unwrap());
        assert!(matches!(
            chain_on_tmc(&gm, &ChainWeights { edges: Some(zero), components: None }),
            Err(Error::InvalidWeights(_))
        ));
        map.remove(&("1".to_string(), "0".to_string()));
        assert!(matches!(
            chain_on_tmc(&gm, &ChainWeights { edges: Some(map), components: None }),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn not_a_tmc_is_rejected() {
        assert!(chain_on_tmc(&fixtures::even_shift(), &ChainWeights::default()).is_err());
    }
}
