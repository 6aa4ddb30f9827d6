//! Transition monoid of a presentation, boundary families, and context signatures.
//!
//! Each word `w` of the language acts on the states of an essential presentation by the
//! relation `M_w` (pairs of states joined by a `w`-labelled path). Words outside the language
//! act as the zero matrix, the absorbing star element. Whether `xwy` is in the language depends
//! only on `End(x)`, `M_w` and `Start(y)`, so the context set `C(w)` is captured exactly by the
//! finite table [`ContextSignature`] over the end-set and start-set families.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use crate::bits::{BoolMatrix, StateSet};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::language::{follower_sets, SubsetAutomaton};
use crate::presentation::{Presentation, SymbolId, Word};

pub type ElementId = usize;
pub type SignatureId = usize;

/// Relation matrix of `w`: the boolean product of the generator matrices along `w`.
pub fn relation_of_word(p: &Presentation, w: &Word) -> BoolMatrix {
    w.symbols().iter().fold(BoolMatrix::identity(p.num_states()), |acc, &a| acc.mul(p.generator(a)))
}

/// The nonzero relations `M_w` for `w` in the language; `None` plays the star element.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    elements: Vec<BoolMatrix>,
    witnesses: Vec<Word>,
    index: HashMap<BoolMatrix, ElementId>,
    generators: Vec<Option<ElementId>>,
    right: Vec<Vec<Option<ElementId>>>,
}

impl TransitionMonoid {
    /// Worklist closure of the generators under right multiplication.
    ///
    /// Elements are discovered in shortlex order of their witnesses, so each stored witness is
    /// the shortest, lexicographically least word realizing the element.
    pub fn build(p: &Presentation, limits: &Limits) -> Result<Self> {
        let mut m = TransitionMonoid {
            elements: Vec::new(),
            witnesses: Vec::new(),
            index: HashMap::new(),
            generators: Vec::with_capacity(p.num_symbols()),
            right: Vec::new(),
        };
        for a in 0..p.num_symbols() {
            let g = p.generator(a);
            let id = if g.is_zero() { None } else { Some(m.intern(g.clone(), Word(vec![a]), limits)?) };
            m.generators.push(id);
        }
        let mut next = 0;
        while next < m.elements.len() {
            let mut row = Vec::with_capacity(p.num_symbols());
            for a in 0..p.num_symbols() {
                let prod = m.elements[next].mul(p.generator(a));
                if prod.is_zero() {
                    row.push(None);
                } else {
                    let mut w = m.witnesses[next].clone();
                    w.push(a);
                    row.push(Some(m.intern(prod, w, limits)?));
                }
            }
            m.right.push(row);
            next += 1;
        }
        Ok(m)
    }

    fn intern(&mut self, mat: BoolMatrix, witness: Word, limits: &Limits) -> Result<ElementId> {
        if let Some(&id) = self.index.get(&mat) {
            return Ok(id);
        }
        if self.elements.len() >= limits.max_monoid {
            return Err(Error::cap("transition monoid elements", limits.max_monoid as u64));
        }
        let id = self.elements.len();
        self.index.insert(mat.clone(), id);
        self.elements.push(mat);
        self.witnesses.push(witness);
        Ok(id)
    }

    /// Number of nonzero elements (the star element is not counted).
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: ElementId) -> &BoolMatrix {
        &self.elements[id]
    }

    pub fn witness(&self, id: ElementId) -> &Word {
        &self.witnesses[id]
    }

    pub fn lookup(&self, m: &BoolMatrix) -> Option<ElementId> {
        self.index.get(m).copied()
    }

    pub fn generator(&self, a: SymbolId) -> Option<ElementId> {
        self.generators[a]
    }

    /// `M · G_a`, or `None` for the star element.
    pub fn extend(&self, id: ElementId, a: SymbolId) -> Option<ElementId> {
        self.right[id][a]
    }

    /// Element of a word, or `None` when the word is outside the language.
    pub fn of_word(&self, w: &[SymbolId]) -> Option<ElementId> {
        let (&first, rest) = w.split_first()?;
        rest.iter().try_fold(self.generators[first]?, |id, &a| self.right[id][a])
    }

    /// Product of two elements; star is absorbing.
    pub fn multiply(&self, a: Option<ElementId>, b: Option<ElementId>) -> Result<Option<ElementId>> {
        let (Some(a), Some(b)) = (a, b) else { return Ok(None) };
        let prod = self.elements[a].mul(&self.elements[b]);
        if prod.is_zero() {
            return Ok(None);
        }
        self.lookup(&prod)
            .map(Some)
            .ok_or_else(|| Error::Inconsistency("monoid not closed under multiplication".into()))
    }
}

/// End-set family `E` and start-set family `S`, each member with a shortest witness word.
#[derive(Debug, Clone)]
pub struct BoundaryFamilies {
    pub end_sets: Vec<StateSet>,
    pub end_witnesses: Vec<Word>,
    pub start_sets: Vec<StateSet>,
    pub start_witnesses: Vec<Word>,
}

impl BoundaryFamilies {
    pub fn build(m: &TransitionMonoid, num_states: usize) -> Self {
        let full = StateSet::full(num_states);
        let collect = |support: &dyn Fn(&BoolMatrix) -> StateSet| {
            let mut best: BTreeMap<Vec<usize>, (StateSet, Word)> = BTreeMap::new();
            for id in 0..m.len() {
                let set = support(m.element(id));
                // elements come in shortlex order, so the first hit is the shortest witness
                best.entry(set.members()).or_insert_with(|| (set, m.witness(id).clone()));
            }
            best.entry(full.members()).or_insert_with(|| (full.clone(), Word::empty()));
            best.into_values().unzip::<_, _, Vec<_>, Vec<_>>()
        };
        let (end_sets, end_witnesses) = collect(&|e| e.column_support());
        let (start_sets, start_witnesses) = collect(&|e| e.row_support());
        BoundaryFamilies { end_sets, end_witnesses, start_sets, start_witnesses }
    }
}

/// Boolean table on `E × S`: entry `(E, S)` is true iff some `p ∈ E`, `q ∈ S` have `M[p][q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextSignature {
    rows: usize,
    cols: usize,
    table: Vec<bool>,
}

impl ContextSignature {
    pub fn of(fam: &BoundaryFamilies, m: &BoolMatrix) -> Self {
        let mut table = Vec::with_capacity(fam.end_sets.len() * fam.start_sets.len());
        for e in &fam.end_sets {
            let img = m.image(e);
            for s in &fam.start_sets {
                table.push(img.intersects(s));
            }
        }
        ContextSignature { rows: fam.end_sets.len(), cols: fam.start_sets.len(), table }
    }

    pub fn star(fam: &BoundaryFamilies) -> Self {
        ContextSignature::of(fam, &BoolMatrix::zero(fam.end_sets.first().map_or(0, StateSet::universe)))
    }

    pub fn get(&self, end: usize, start: usize) -> bool {
        self.table[end * self.cols + start]
    }

    pub fn is_false(&self) -> bool {
        !self.table.iter().any(|&b| b)
    }

    /// Positions `(end, start)` where the two tables differ.
    pub fn differences<'a>(&'a self, other: &'a ContextSignature) -> impl Iterator<Item = (usize, usize)> + 'a {
        (0..self.rows)
            .flat_map(move |e| (0..self.cols).map(move |s| (e, s)))
            .filter(move |&(e, s)| self.get(e, s) != other.get(e, s))
    }
}

/// Transition monoid, boundary families and interned signatures of one essential presentation.
#[derive(Debug, Clone)]
pub struct ContextMonoid {
    pub presentation: Presentation,
    pub monoid: TransitionMonoid,
    pub families: BoundaryFamilies,
    pub signatures: Vec<ContextSignature>,
    signature_of: Vec<SignatureId>,
}

impl ContextMonoid {
    pub fn build(p: &Presentation, limits: &Limits) -> Result<Self> {
        let p = if p.is_essential() { p.clone() } else { p.trim_essential()? };
        let monoid = TransitionMonoid::build(&p, limits)?;
        let families = BoundaryFamilies::build(&monoid, p.num_states());
        let mut ids: HashMap<ContextSignature, SignatureId> = HashMap::new();
        let mut signatures = Vec::new();
        let mut signature_of = Vec::with_capacity(monoid.len());
        for id in 0..monoid.len() {
            let sig = ContextSignature::of(&families, monoid.element(id));
            let sid = *ids.entry(sig.clone()).or_insert_with(|| {
                signatures.push(sig);
                signatures.len() - 1
            });
            signature_of.push(sid);
        }
        Ok(ContextMonoid { presentation: p, monoid, families, signatures, signature_of })
    }

    pub fn signature_id(&self, id: ElementId) -> SignatureId {
        self.signature_of[id]
    }

    pub fn signature(&self, id: ElementId) -> &ContextSignature {
        &self.signatures[self.signature_of[id]]
    }

    /// Number of distinct context sets `C(w)` over words of the language.
    pub fn context_count(&self) -> usize {
        self.signatures.len()
    }

    fn element_of(&self, w: &Word) -> Result<ElementId> {
        self.monoid.of_word(w.symbols()).ok_or_else(|| Error::NotInLanguage(self.presentation.render(w)))
    }

    /// `C(w) = C(u)`, decided by signature equality.
    pub fn contexts_equal(&self, w: &Word, u: &Word) -> Result<bool> {
        Ok(self.signature_of[self.element_of(w)?] == self.signature_of[self.element_of(u)?])
    }

    /// Shortest context `(x, y)`, both nonempty, with `xwy` in the language and `xuy` not.
    pub fn distinguishing_context(&self, w: ElementId, u: ElementId) -> Option<(Word, Word)> {
        let (sw, su) = (self.signature(w), self.signature(u));
        let fam = &self.families;
        sw.differences(su)
            .filter(|&(e, s)| sw.get(e, s))
            .filter(|&(e, s)| !fam.end_witnesses[e].is_empty() && !fam.start_witnesses[s].is_empty())
            .map(|(e, s)| (fam.end_witnesses[e].clone(), fam.start_witnesses[s].clone()))
            .min_by(|a, b| (a.0.len() + a.1.len(), &a.0, &a.1).cmp(&(b.0.len() + b.1.len(), &b.0, &b.1)))
    }
}

/// `C(w) = C(u)` for words of the language of `p`.
pub fn contexts_equal(p: &Presentation, w: &Word, u: &Word, limits: &Limits) -> Result<bool> {
    ContextMonoid::build(p, limits)?.contexts_equal(w, u)
}

/// Every context `(x, y)` with `1 ≤ |x|, |y| ≤ m` and `xwy` in the language, by direct search.
pub fn bounded_context(p: &Presentation, w: &Word, m: usize, limits: &Limits) -> Result<BTreeSet<(Word, Word)>> {
    if m == 0 {
        return Err(Error::Precondition("context bound must be at least 1".into()));
    }
    if !p.contains_word(w) {
        return Err(Error::NotInLanguage(p.render(w)));
    }
    let mut out = BTreeSet::new();
    let mut over = false;
    for lx in 1..=m {
        p.for_each_word(lx, &mut |x, _| {
            if over {
                return;
            }
            let mut xw = x.to_vec();
            xw.extend_from_slice(w.symbols());
            let reach = p.follow(&StateSet::full(p.num_states()), &xw);
            if reach.is_empty() {
                return;
            }
            let mut y = Vec::new();
            collect_followers(p, &reach, m, &mut y, &mut |y| {
                if out.len() >= limits.max_words {
                    over = true;
                } else {
                    out.insert((Word(x.to_vec()), Word(y.to_vec())));
                }
            });
        });
    }
    if over {
        return Err(Error::cap("bounded context pairs", limits.max_words as u64));
    }
    Ok(out)
}

fn collect_followers(
    p: &Presentation,
    cur: &StateSet,
    m: usize,
    y: &mut Vec<SymbolId>,
    emit: &mut dyn FnMut(&[SymbolId]),
) {
    if y.len() == m {
        return;
    }
    for a in 0..p.num_symbols() {
        let next = p.generator(a).image(cur);
        if !next.is_empty() {
            y.push(a);
            emit(y);
            collect_followers(p, &next, m, y, emit);
            y.pop();
        }
    }
}

/// Exact comparison key for bounded context sets `C_m(w)`, computed from the presentation alone.
///
/// `C_m(w)` is the union over end subsets `S = End(x)`, `1 ≤ |x| ≤ m`, of
/// `{x : End(x) = S} × Y_m(δ(S, w))`, where `Y_m(R)` is the set of words of length `1..=m`
/// readable from `R`. The left factors are nonempty and independent of `w`, so two words have
/// equal `C_m` iff the classes of `Y_m(δ(S, ·))` agree for every such `S`.
#[derive(Debug, Clone)]
pub struct BoundedContexts {
    automaton: SubsetAutomaton,
    left_sets: Vec<usize>,
    classes: Vec<usize>,
    pub m: usize,
}

/// Key identifying `C_m(w)`; equal keys iff equal bounded context sets.
pub type BoundedContextKey = Vec<Option<usize>>;

impl BoundedContexts {
    pub fn new(p: &Presentation, m: usize, limits: &Limits) -> Result<Self> {
        let automaton = SubsetAutomaton::build(p.generators(), StateSet::full(p.num_states()), limits)?;
        let mut layer: BTreeSet<usize> = [0].into();
        let mut left: BTreeSet<usize> = BTreeSet::new();
        for _ in 0..m {
            layer = layer.iter().flat_map(|&s| automaton.delta[s].iter().flatten().copied()).collect();
            left.extend(&layer);
        }
        let classes = automaton.follower_classes(Some(m));
        Ok(BoundedContexts { automaton, left_sets: left.into_iter().collect(), classes, m })
    }

    pub fn key(&self, w: &Word) -> BoundedContextKey {
        self.left_sets.iter().map(|&s| self.automaton.step(s, w.symbols()).map(|t| self.classes[t])).collect()
    }
}

/// Counts reported for a presentation's monoid and follower structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidStats {
    pub follower_count: usize,
    pub predecessor_count: usize,
    pub context_count: usize,
    /// Nonzero elements plus the star element.
    pub monoid_size: usize,
}

impl MonoidStats {
    /// `max(|P(X)|, |F(X)|)`, the context length that suffices for context comparisons.
    pub fn boundary_bound(&self) -> usize {
        self.follower_count.max(self.predecessor_count)
    }

    /// Upper bound on the number of context sets from follower/predecessor counts:
    /// functions from subsets of `F(X)` into `2^{P(X)} × F(X)`.
    pub fn context_count_bound(&self) -> BigUint {
        let f = BigUint::from(self.follower_count);
        let per = (BigUint::from(1u8) << self.predecessor_count) * &f + 1u8;
        per.pow(self.follower_count as u32)
    }
}

/// Follower, predecessor and context counts, with the end/start families cross-checked against
/// the subset constructions of the presentation and of its reversal.
pub fn monoid_stats(cm: &ContextMonoid, limits: &Limits) -> Result<MonoidStats> {
    let p = &cm.presentation;
    let fwd = follower_sets(p, limits)?;
    let bwd = follower_sets(&p.reversed(), limits)?;
    let realized = |sets: &[StateSet], f: fn(&BoolMatrix) -> StateSet| {
        let from_monoid: BTreeSet<Vec<usize>> =
            (0..cm.monoid.len()).map(|i| f(cm.monoid.element(i)).members()).collect();
        let from_subsets: BTreeSet<Vec<usize>> = sets.iter().map(StateSet::members).collect();
        from_monoid == from_subsets
    };
    if !realized(&fwd.end_sets, BoolMatrix::column_support) || !realized(&bwd.end_sets, BoolMatrix::row_support) {
        return Err(Error::Inconsistency("monoid supports disagree with the subset construction".into()));
    }
    if fwd.end_sets.len() < fwd.count || bwd.end_sets.len() < bwd.count {
        return Err(Error::Inconsistency("fewer end sets than follower sets".into()));
    }
    Ok(MonoidStats {
        follower_count: fwd.count,
        predecessor_count: bwd.count,
        context_count: cm.context_count(),
        monoid_size: cm.monoid.len() + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn golden_mean_relations() {
        let gm = fixtures::golden_mean();
        let m1 = relation_of_word(&gm, &gm.word("1").unwrap());
        assert_eq!(m1.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(relation_of_word(&gm, &gm.word("11").unwrap()).is_zero());
    }

    #[test]
    fn full_shift_monoid_is_trivial() {
        let f = fixtures::full_shift(&["a"]);
        let cm = ContextMonoid::build(&f, &lim()).unwrap();
        assert_eq!(cm.monoid.len(), 1);
        assert_eq!(cm.families.end_sets.len(), 1);
        assert_eq!(cm.families.start_sets.len(), 1);
    }

    #[test]
    fn star_signature_is_false() {
        let cm = ContextMonoid::build(&fixtures::even_shift(), &lim()).unwrap();
        assert!(ContextSignature::star(&cm.families).is_false());
    }

    #[test]
    fn golden_mean_signatures_of_0_and_010_agree() {
        let gm = fixtures::golden_mean();
        assert!(contexts_equal(&gm, &gm.word("0").unwrap(), &gm.word("010").unwrap(), &lim()).unwrap());
    }

    #[test]
    fn even_shift_contexts_differ_with_expected_witness() {
        let e = fixtures::even_shift();
        let cm = ContextMonoid::build(&e, &lim()).unwrap();
        let (w, u) = (e.word("1000").unwrap(), e.word("1100").unwrap());
        assert!(!cm.contexts_equal(&w, &u).unwrap());
        assert!(e.contains_str("1100001"));
        assert!(!e.contains_str("1110001"));
    }

    #[test]
    fn x_not_ramps_share_contexts() {
        let x = fixtures::x_not();
        assert!(contexts_equal(&x, &x.word("0011").unwrap(), &x.word("0111").unwrap(), &lim()).unwrap());
        assert!(contexts_equal(&x, &x.word("1102").unwrap(), &x.word("1022").unwrap(), &lim()).unwrap());
    }

    #[test]
    fn contexts_equal_rejects_foreign_words() {
        let gm = fixtures::golden_mean();
        let err = contexts_equal(&gm, &gm.word("11").unwrap(), &gm.word("0").unwrap(), &lim());
        assert!(matches!(err, Err(Error::NotInLanguage(_))));
    }

    #[test]
    fn bounded_context_small_cases() {
        let f = fixtures::full_shift(&["a", "b"]);
        assert_eq!(bounded_context(&f, &f.word("a").unwrap(), 1, &lim()).unwrap().len(), 4);
        let gm = fixtures::golden_mean();
        let c = bounded_context(&gm, &gm.word("1").unwrap(), 1, &lim()).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![(Word(vec![0]), Word(vec![0]))]);
        let x = fixtures::x_not();
        let c = bounded_context(&x, &x.word("102").unwrap(), 2, &lim()).unwrap();
        assert!(!c.is_empty());
        for (l, r) in c {
            assert!(l.symbols().iter().all(|&a| a == 1));
            assert!(r.symbols().iter().all(|&a| a == 2));
        }
    }

    #[test]
    fn full_shift_stats() {
        let f = fixtures::full_shift(&["a", "b"]);
        let cm = ContextMonoid::build(&f, &lim()).unwrap();
        let s = monoid_stats(&cm, &lim()).unwrap();
        assert_eq!((s.follower_count, s.predecessor_count, s.context_count), (1, 1, 1));
    }

    #[test]
    fn golden_mean_stats() {
        let gm = fixtures::golden_mean();
        let cm = ContextMonoid::build(&gm, &lim()).unwrap();
        let s = monoid_stats(&cm, &lim()).unwrap();
        assert_eq!(s.follower_count, 2);
        assert_eq!(s.predecessor_count, 2);
        assert!(BigUint::from(s.context_count) <= s.context_count_bound());
    }

    #[test]
    fn monoid_cap() {
        let e = fixtures::even_shift();
        let small = Limits { max_monoid: 2, ..lim() };
        assert!(matches!(TransitionMonoid::build(&e, &small), Err(Error::ResourceCap { .. })));
    }
}
