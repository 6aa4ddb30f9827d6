//! Seeded random presentations, non-wandering TMCs and rational chains.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{chain_on_tmc, ChainWeights, Rational, RationalMarkovChain};
use crate::presentation::Presentation;

/// Parameters of a random presentation corpus. Generation is a pure function of this value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub min_states: usize,
    pub max_states: usize,
    pub min_symbols: usize,
    pub max_symbols: usize,
    /// Probability `num/den` that each possible labelled edge is present.
    pub density: (u32, u32),
    pub count: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            min_states: 1,
            max_states: 4,
            min_symbols: 1,
            max_symbols: 3,
            density: (1, 4),
            count: 200,
            seed: 1,
        }
    }
}

impl CorpusSpec {
    fn validate(&self) -> Result<()> {
        let (num, den) = self.density;
        if self.min_states == 0 || self.min_states > self.max_states {
            return Err(Error::Precondition("state range must satisfy 1 ≤ min ≤ max".into()));
        }
        if self.min_symbols == 0 || self.min_symbols > self.max_symbols || self.max_symbols > 26 {
            return Err(Error::Precondition("symbol range must satisfy 1 ≤ min ≤ max ≤ 26".into()));
        }
        if num == 0 || num > den {
            return Err(Error::Precondition("edge density must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

fn symbol_names(k: usize) -> Vec<String> {
    if k <= 10 {
        (0..k).map(|i| i.to_string()).collect()
    } else {
        (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }
}

fn random_presentation(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Result<Presentation> {
    let (num, den) = spec.density;
    loop {
        let n = rng.gen_range(spec.min_states..=spec.max_states);
        let k = rng.gen_range(spec.min_symbols..=spec.max_symbols);
        let alphabet = symbol_names(k);
        let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let mut edges = Vec::new();
        for from in &states {
            for to in &states {
                for a in &alphabet {
                    if rng.gen_ratio(num, den) {
                        edges.push((from.clone(), to.clone(), a.clone()));
                    }
                }
            }
        }
        match Presentation::new(&alphabet, &states, &edges)?.trim_essential() {
            Ok(_) => return Presentation::new(&alphabet, &states, &edges),
            Err(Error::EmptyShift) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// `spec.count` untrimmed presentations whose trims are nonempty; empty draws are resampled.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<Presentation>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count).map(|_| random_presentation(&mut rng, spec)).collect()
}

/// Random non-wandering TMC on at most `max_symbols` symbols: one or two strongly connected
/// vertex shifts on disjoint alphabets.
pub fn random_nonwandering_tmc(rng: &mut ChaCha8Rng, max_symbols: usize) -> Result<Presentation> {
    let k = rng.gen_range(1..=max_symbols.max(1));
    let symbols: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let split = if k >= 2 && rng.gen_bool(0.3) { rng.gen_range(1..k) } else { k };
    let mut pairs = Vec::new();
    for part in [&symbols[..split], &symbols[split..]] {
        if part.is_empty() {
            continue;
        }
        let mut order: Vec<&String> = part.iter().collect();
        order.shuffle(rng);
        for i in 0..order.len() {
            pairs.push((order[i].clone(), order[(i + 1) % order.len()].clone()));
        }
        for a in part {
            for b in part {
                if rng.gen_ratio(1, 3) && !pairs.contains(&(a.clone(), b.clone())) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
    }
    Presentation::vertex_shift(&symbols, &pairs)?.trim_essential()
}

/// Chain on `p` with random positive integer edge weights and random component weights.
pub fn random_chain(rng: &mut ChaCha8Rng, p: &Presentation) -> Result<RationalMarkovChain> {
    let mut edges = BTreeMap::new();
    p.for_each_word(2, &mut |w, _| {
        let weight = Rational::from_integer(rng.gen_range(1i64..=6).into());
        edges.insert((p.alphabet()[w[0]].clone(), p.alphabet()[w[1]].clone()), weight);
    });
    let components = crate::classify::decompose_irreducible(p, &crate::Limits::default())?.len();
    let raw: Vec<Rational> = (0..components).map(|_| Rational::from_integer(rng.gen_range(1i64..=4).into())).collect();
    let total: Rational = raw.iter().sum();
    let weights = ChainWeights { edges: Some(edges), components: Some(raw.into_iter().map(|w| w / &total).collect()) };
    chain_on_tmc(p, &weights)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::PresentationDocument;

    #[test]
    fn deterministic_and_nonempty() {
        let spec = CorpusSpec { count: 30, ..CorpusSpec::default() };
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        for p in &a {
            assert!(p.trim_essential().is_ok());
            let doc = PresentationDocument::from_presentation(p).to_json();
            assert_eq!(&crate::load_presentation(&doc).unwrap(), p);
        }
    }

    #[test]
    fn random_tmcs_decompose() {
        let mut r = rng(7);
        for _ in 0..20 {
            let p = random_nonwandering_tmc(&mut r, 4).unwrap();
            assert!(crate::classify::decompose_irreducible(&p, &crate::Limits::default()).is_ok());
            let c = random_chain(&mut r, &p).unwrap();
            assert_eq!(c.stationary().iter().sum::<Rational>(), Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn bad_specs() {
        assert!(generate(&CorpusSpec { density: (0, 1), ..CorpusSpec::default() }).is_err());
        assert!(generate(&CorpusSpec { min_states: 3, max_states: 2, ..CorpusSpec::default() }).is_err());
    }
}
