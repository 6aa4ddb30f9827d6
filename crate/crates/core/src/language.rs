//! Determinization of presentations and language-level comparisons.

use std::collections::{HashMap, VecDeque};

use crate::bits::{BoolMatrix, StateSet};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, SymbolId};

/// Accessible part of the subset construction, without the dead (empty) subset.
#[derive(Debug, Clone)]
pub struct SubsetAutomaton {
    pub subsets: Vec<StateSet>,
    /// `delta[s][a]` is the successor subset index, or `None` for the dead subset.
    pub delta: Vec<Vec<Option<usize>>>,
    /// Subsets reached by at least one nonempty word.
    pub reached_by_nonempty: Vec<bool>,
}

impl SubsetAutomaton {
    /// Subset construction from `start`, visiting symbols in sorted order.
    pub fn build(generators: &[BoolMatrix], start: StateSet, limits: &Limits) -> Result<Self> {
        let mut index: HashMap<StateSet, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut reached = vec![false];
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for g in generators {
                let img = g.image(&subsets[s]);
                if img.is_empty() {
                    row.push(None);
                    continue;
                }
                let t = match index.get(&img) {
                    Some(&t) => t,
                    None => {
                        if subsets.len() >= limits.max_subset_states {
                            return Err(Error::cap("subset construction states", limits.max_subset_states as u64));
                        }
                        let t = subsets.len();
                        index.insert(img.clone(), t);
                        subsets.push(img);
                        reached.push(false);
                        queue.push_back(t);
                        t
                    }
                };
                reached[t] = true;
                row.push(Some(t));
            }
            if delta.len() <= s {
                delta.resize(s + 1, Vec::new());
            }
            delta[s] = row;
        }
        Ok(SubsetAutomaton { subsets, delta, reached_by_nonempty: reached })
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn step(&self, s: usize, word: &[SymbolId]) -> Option<usize> {
        word.iter().try_fold(s, |cur, &a| self.delta[cur][a])
    }

    /// Classes of subsets whose follower languages agree on all words of length `1..=rounds`
    /// (`None`: on all words). Every subset here is nonempty, so all accept the empty word.
    pub fn follower_classes(&self, rounds: Option<usize>) -> Vec<usize> {
        let n = self.len();
        let mut class = vec![0usize; n];
        let mut count = 1;
        let mut round = 0;
        loop {
            if rounds.is_some_and(|r| round >= r) {
                return class;
            }
            let mut ids: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
            let mut next = vec![0usize; n];
            for (row, slot) in self.delta.iter().zip(next.iter_mut()) {
                let key: Vec<Option<usize>> = row.iter().map(|t| t.map(|t| class[t])).collect();
                let fresh = ids.len();
                *slot = *ids.entry(key).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            round += 1;
            if rounds.is_none() && new_count == count {
                return class;
            }
            count = new_count;
        }
    }
}

fn aligned_generators(p: &Presentation, alphabet: &[String]) -> Vec<BoolMatrix> {
    alphabet
        .iter()
        .map(|name| match p.symbol_id(name) {
            Some(a) => p.generator(a).clone(),
            None => BoolMatrix::zero(p.num_states()),
        })
        .collect()
}

/// True iff the two presentations have the same language (symbols matched by name).
///
/// Both sides are trimmed first; the comparison is a breadth-first search over pairs of
/// determinized subsets, which are the factorial languages' states.
pub fn language_equal(p: &Presentation, q: &Presentation, limits: &Limits) -> Result<bool> {
    let (p, q) = match (p.trim_essential(), q.trim_essential()) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(Error::EmptyShift), Err(Error::EmptyShift)) => return Ok(true),
        (Err(Error::EmptyShift), Ok(_)) | (Ok(_), Err(Error::EmptyShift)) => return Ok(false),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let mut alphabet: Vec<String> = p.alphabet().iter().chain(q.alphabet()).cloned().collect();
    alphabet.sort();
    alphabet.dedup();
    let gp = aligned_generators(&p, &alphabet);
    let gq = aligned_generators(&q, &alphabet);
    let start = (StateSet::full(p.num_states()), StateSet::full(q.num_states()));
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for (g, h) in gp.iter().zip(&gq) {
            let (na, nb) = (g.image(&a), h.image(&b));
            match (na.is_empty(), nb.is_empty()) {
                (true, true) => continue,
                (false, false) => {}
                _ => return Ok(false),
            }
            let pair = (na, nb);
            if !seen.contains(&pair) {
                if seen.len() >= limits.max_subset_states {
                    return Err(Error::cap("subset pairs in equivalence check", limits.max_subset_states as u64));
                }
                seen.insert(pair.clone());
                queue.push_back(pair);
            }
        }
    }
    Ok(true)
}

/// Follower-set data of an essential presentation.
#[derive(Debug, Clone)]
pub struct FollowerSets {
    pub automaton: SubsetAutomaton,
    /// Sets `End(w)` over nonempty words, sorted by member list.
    pub end_sets: Vec<StateSet>,
    /// Number of distinct follower sets `F(w)` over nonempty words `w`.
    pub count: usize,
}

/// Distinct follower sets via the accessible subset construction seeded at all states,
/// merged by follower-language equivalence.
pub fn follower_sets(p: &Presentation, limits: &Limits) -> Result<FollowerSets> {
    let automaton = SubsetAutomaton::build(p.generators(), StateSet::full(p.num_states()), limits)?;
    let classes = automaton.follower_classes(None);
    let mut seen = std::collections::BTreeSet::new();
    let mut end_sets = Vec::new();
    for (s, set) in automaton.subsets.iter().enumerate() {
        if automaton.reached_by_nonempty[s] {
            seen.insert(classes[s]);
            end_sets.push(set.clone());
        }
    }
    end_sets.sort_by_key(StateSet::members);
    Ok(FollowerSets { count: seen.len(), end_sets, automaton })
}
