use std::collections::{BTreeMap, HashMap, HashSet};

use crate::bits::{BoolMatrix, StateSet};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::monoid::{ContextMonoid, ElementId};
use crate::presentation::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonWanderingVerdict {
    pub is_non_wandering: bool,
    /// Shortlex-least word `u` admitting no `v` with `uvu` in the language.
    pub witness: Option<Word>,
    /// Every word occurs in a periodic point.
    pub periodic_dense: bool,
}

/// Monoid criterion for non-wandering, cross-checked against density of periodic points.
///
/// `uvu` is in the language for some nonempty `v` iff some state where a `u`-path ends reaches,
/// by a path of positive length, some state where a `u`-path starts.
pub fn is_non_wandering(cm: &ContextMonoid) -> Result<NonWanderingVerdict> {
    let adj = cm.presentation.adjacency();
    let star = adj.reflexive_closure();
    let plus = adj.mul(&star);
    let mut witness = None;
    let mut periodic_dense = true;
    for id in 0..cm.monoid.len() {
        let m = cm.monoid.element(id);
        let returns = plus.image(&m.column_support()).intersects(&m.row_support());
        if !returns && witness.is_none() {
            witness = Some(cm.monoid.witness(id).clone());
        }
        if !m.pairs().any(|(p, q)| star.get(q, p)) {
            periodic_dense = false;
        }
    }
    let is_non_wandering = witness.is_none();
    if is_non_wandering != periodic_dense {
        return Err(Error::Inconsistency(format!(
            "non-wandering = {is_non_wandering} but dense periodic points = {periodic_dense}"
        )));
    }
    Ok(NonWanderingVerdict { is_non_wandering, witness, periodic_dense })
}

/// Non-wandering of `X × X` decided from the monoid of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareVerdict {
    pub is_non_wandering: bool,
    /// Equal-length words `(w, v)`, least length first, then lexicographically least, such that
    /// `(w, v)` has no return in `X × X`.
    pub witness: Option<(Word, Word)>,
    pub periodic_dense: bool,
}

/// `(w, v)` with `|w| = |v|` returns in `X × X` iff some `k ≥ 1` is a return length of both `w`
/// and `v`. Whether `k` is a return length of `w` depends on `M_w` and on `A^k`, and `A^k` is the
/// union of the set `M_k` of elements realized at length `k`. The sequence `M_1, M_2, …` is
/// eventually periodic, so lengths below its first repeat decide every pair.
pub fn square_is_non_wandering(cm: &ContextMonoid) -> Result<SquareVerdict> {
    let m = &cm.monoid;
    let p = &cm.presentation;
    let k = p.num_symbols();
    // lex-least word realizing each element at each length, until the element sets repeat
    let mut layers: Vec<BTreeMap<ElementId, Word>> = Vec::new();
    let mut first = BTreeMap::new();
    for a in 0..k {
        if let Some(g) = m.generator(a) {
            first.entry(g).or_insert_with(|| Word(vec![a]));
        }
    }
    let mut seen: HashMap<Vec<ElementId>, usize> = HashMap::new();
    let mut layer = first;
    loop {
        if seen.insert(layer.keys().copied().collect(), layers.len()).is_some() {
            break;
        }
        let mut next: BTreeMap<ElementId, Word> = BTreeMap::new();
        for (&e, w) in &layer {
            for a in 0..k {
                if let Some(e2) = m.extend(e, a) {
                    let mut w2 = w.clone();
                    w2.push(a);
                    match next.get(&e2) {
                        Some(old) if *old <= w2 => {}
                        _ => {
                            next.insert(e2, w2);
                        }
                    }
                }
            }
        }
        layers.push(layer);
        layer = next;
    }
    let horizon = layers.len();
    let adj = p.adjacency();
    let mut powers = vec![BoolMatrix::identity(p.num_states())];
    for _ in 0..horizon {
        let next = powers.last().expect("nonempty").mul(&adj);
        powers.push(next);
    }
    // realized lengths 1..=horizon, and return lengths 0..=horizon (0 = the word itself closes up)
    type Profile = (Vec<bool>, Vec<bool>);
    let mut classes: BTreeMap<Profile, Vec<ElementId>> = BTreeMap::new();
    for e in 0..m.len() {
        let realized: Vec<bool> = layers.iter().map(|l| l.contains_key(&e)).collect();
        if !realized.contains(&true) {
            continue;
        }
        let el = m.element(e);
        let (ends, starts) = (el.column_support(), el.row_support());
        let returns: Vec<bool> = powers.iter().map(|a| a.image(&ends).intersects(&starts)).collect();
        classes.entry((realized, returns)).or_default().push(e);
    }
    let profiles: Vec<(&Profile, &Vec<ElementId>)> = classes.iter().collect();
    let mut witness: Option<(usize, Word, Word)> = None;
    let mut periodic_dense = true;
    for (i, ((r1, k1), es1)) in profiles.iter().enumerate() {
        for ((r2, k2), es2) in &profiles[i..] {
            let Some(n) = (0..horizon).find(|&n| r1[n] && r2[n]) else { continue };
            if !(0..=horizon).any(|j| k1[j] && k2[j]) {
                periodic_dense = false;
            }
            if (1..=horizon).any(|j| k1[j] && k2[j]) {
                continue;
            }
            let least = |es: &[ElementId]| es.iter().filter_map(|e| layers[n].get(e)).min().cloned().expect("realized");
            let (a, b) = (least(es1), least(es2));
            for (w, v) in [(a.clone(), b.clone()), (b, a)] {
                if witness.as_ref().is_none_or(|(n0, w0, v0)| (n, &w, &v) < (*n0, w0, v0)) {
                    witness = Some((n, w, v));
                }
            }
        }
    }
    let is_non_wandering = witness.is_none();
    if is_non_wandering != periodic_dense {
        return Err(Error::Inconsistency(format!(
            "X × X non-wandering = {is_non_wandering} but dense periodic points = {periodic_dense}"
        )));
    }
    Ok(SquareVerdict { is_non_wandering, witness: witness.map(|(_, w, v)| (w, v)), periodic_dense })
}

/// Result of the definitional search for returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnSearch {
    pub max_len: usize,
    pub words_checked: usize,
    /// First word `u` (shortlex) for which no `v` with `|uvu| ≤ max_len` was found.
    pub no_return: Option<Word>,
}

/// Searches, for every `u` with `2|u| + 1 ≤ max_len`, a nonempty `v` with `uvu` in the language
/// and `|uvu| ≤ max_len`.
pub fn search_returns(p: &Presentation, max_len: usize, limits: &Limits) -> Result<ReturnSearch> {
    let max_u = max_len.saturating_sub(1) / 2;
    if max_u > 0 && p.count_words_up_to(max_u, limits.max_words).is_none() {
        return Err(Error::cap("return-search words", limits.max_words as u64));
    }
    let mut checked = 0;
    let mut no_return = None;
    for n in 1..=max_u {
        p.for_each_word(n, &mut |u, ends| {
            if no_return.is_some() {
                return;
            }
            checked += 1;
            let budget = max_len - 2 * n;
            let mut layer: HashSet<StateSet> = [ends.clone()].into();
            for _ in 0..budget {
                layer = layer
                    .iter()
                    .flat_map(|s| p.generators().iter().map(move |g| g.image(s)))
                    .filter(|s| !s.is_empty())
                    .collect();
                if layer.iter().any(|s| !p.follow(s, u).is_empty()) {
                    return;
                }
            }
            no_return = Some(Word(u.to_vec()));
        });
        if no_return.is_some() {
            break;
        }
    }
    Ok(ReturnSearch { max_len, words_checked: checked, no_return })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn verdict(p: &Presentation) -> NonWanderingVerdict {
        is_non_wandering(&ContextMonoid::build(p, &Limits::default()).unwrap()).unwrap()
    }

    #[test]
    fn fixtures_verdicts() {
        assert!(verdict(&fixtures::golden_mean()).is_non_wandering);
        assert!(verdict(&fixtures::even_shift()).is_non_wandering);
        assert!(verdict(&fixtures::full_shift(&["a"])).is_non_wandering);
        let x = fixtures::x_not();
        let v = verdict(&x);
        assert!(!v.is_non_wandering && !v.periodic_dense);
        assert_eq!(x.render(v.witness.as_ref().unwrap()), "01");
    }

    #[test]
    fn product_of_x_not_wanders() {
        let x = fixtures::x_not();
        assert!(!verdict(&x.product(&x).unwrap()).is_non_wandering);
        let g = fixtures::golden_mean();
        assert!(verdict(&g.product(&g).unwrap()).is_non_wandering);
    }

    #[test]
    fn square_matches_product_monoid() {
        let lim = Limits::default();
        let spec = crate::corpus::CorpusSpec { count: 60, max_states: 3, seed: 11, ..Default::default() };
        let corpus = crate::corpus::generate(&spec).unwrap();
        let inputs =
            fixtures::all().into_iter().map(|(_, p)| p).chain(corpus.iter().map(|p| p.trim_essential().unwrap()));
        let mut compared = 0;
        for p in inputs {
            let square = square_is_non_wandering(&ContextMonoid::build(&p, &lim).unwrap()).unwrap();
            let Ok(cm2) = ContextMonoid::build(&p.product(&p).unwrap(), &lim) else { continue };
            assert_eq!(square.is_non_wandering, is_non_wandering(&cm2).unwrap().is_non_wandering);
            compared += 1;
            if let Some((w, v)) = &square.witness {
                assert_eq!(w.len(), v.len());
                assert!(p.contains_word(w) && p.contains_word(v));
            }
        }
        assert!(compared >= 60, "{compared}");
    }

    #[test]
    fn square_witness_for_x_not() {
        let x = fixtures::x_not();
        let v = square_is_non_wandering(&ContextMonoid::build(&x, &Limits::default()).unwrap()).unwrap();
        assert!(!v.is_non_wandering && !v.periodic_dense);
        let (w, u) = v.witness.unwrap();
        assert_eq!((x.render(&w).as_str(), x.render(&u).as_str()), ("00", "01"));
    }

    #[test]
    fn return_search() {
        let lim = Limits::default();
        let x = fixtures::x_not();
        let r = search_returns(&x, 8, &lim).unwrap();
        assert_eq!(x.render(r.no_return.as_ref().unwrap()), "01");
        assert_eq!(search_returns(&fixtures::golden_mean(), 6, &lim).unwrap().no_return, None);
    }
}
