//! Labelled-graph presentations of sofic shifts and word-level operations on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BoolMatrix, StateSet};
use crate::config::Limits;
use crate::error::{Error, Result};

/// Index of a symbol in a presentation's (sorted) alphabet.
pub type SymbolId = usize;
/// Index of a state in a presentation's (sorted) state list.
pub type StateId = usize;

/// A finite word over a presentation's alphabet, stored as symbol indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<SymbolId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn first(&self) -> Option<SymbolId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<SymbolId> {
        self.0.last().copied()
    }

    pub fn push(&mut self, a: SymbolId) {
        self.0.push(a);
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Shortlex key: shorter words first, then lexicographic.
    pub fn shortlex(&self) -> (usize, &[SymbolId]) {
        (self.0.len(), &self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<SymbolId>> for Word {
    fn from(v: Vec<SymbolId>) -> Self {
        Word(v)
    }
}

/// A labelled edge between two states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: StateId,
    pub label: SymbolId,
    pub to: StateId,
}

/// Higher-block recoding attached to presentations produced from forbidden-word input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recoding {
    pub block_length: usize,
    pub original_alphabet: Vec<String>,
    /// Recoded symbol → the block of original symbols it stands for.
    pub blocks: BTreeMap<String, Vec<String>>,
}

/// All words of one length in the language of a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    pub n: usize,
    pub blocks: Vec<Word>,
}

/// A labelled finite directed graph presenting a sofic shift.
///
/// Symbols and states are kept sorted by id; edges are sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Vec<String>,
    states: Vec<String>,
    edges: Vec<Edge>,
    essential: bool,
    recoding: Option<Recoding>,
    generators: Vec<BoolMatrix>,
}

impl Presentation {
    /// Builds a validated (untrimmed) presentation from named parts.
    pub fn new<S: AsRef<str>>(alphabet: &[S], states: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut alpha: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        alpha.sort();
        if let Some(w) = alpha.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSymbol(w[0].clone()));
        }
        let mut st: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        st.sort();
        if let Some(w) = st.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateState(w[0].clone()));
        }
        let sym_ix: HashMap<&str, usize> = alpha.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let st_ix: HashMap<&str, usize> = st.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut out = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (from, to, label) in edges {
            let (from, to, label) = (from.as_ref(), to.as_ref(), label.as_ref());
            let f = *st_ix.get(from).ok_or_else(|| Error::UnknownState(from.to_string()))?;
            let t = *st_ix.get(to).ok_or_else(|| Error::UnknownState(to.to_string()))?;
            let l = *sym_ix.get(label).ok_or_else(|| Error::UnknownSymbol(label.to_string()))?;
            let e = Edge { from: f, label: l, to: t };
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(format!("{from} -{label}-> {to}")));
            }
            out.push(e);
        }
        Ok(Self::from_parts(alpha, st, out, false, None))
    }

    fn from_parts(
        alphabet: Vec<String>,
        states: Vec<String>,
        mut edges: Vec<Edge>,
        essential: bool,
        recoding: Option<Recoding>,
    ) -> Self {
        edges.sort();
        edges.dedup();
        let mut generators = vec![BoolMatrix::zero(states.len()); alphabet.len()];
        for e in &edges {
            generators[e.label].set(e.from, e.to);
        }
        Presentation { alphabet, states, edges, essential, recoding, generators }
    }

    /// Vertex shift on `alphabet` whose allowed transitions are `allowed` (pairs of symbol names).
    /// States are the symbols; the edge `a → b` carries label `b`.
    pub fn vertex_shift<S: AsRef<str>>(alphabet: &[S], allowed: &[(S, S)]) -> Result<Self> {
        let edges: Vec<(String, String, String)> = allowed
            .iter()
            .map(|(a, b)| (a.as_ref().to_string(), b.as_ref().to_string(), b.as_ref().to_string()))
            .collect();
        let names: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        Presentation::new(&names, &names, &edges)
    }

    pub(crate) fn with_recoding(mut self, recoding: Recoding) -> Self {
        self.recoding = Some(recoding);
        self
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_essential(&self) -> bool {
        self.essential
    }

    pub fn recoding(&self) -> Option<&Recoding> {
        self.recoding.as_ref()
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    /// Relation matrix of a single symbol.
    pub fn generator(&self, a: SymbolId) -> &BoolMatrix {
        &self.generators[a]
    }

    pub fn generators(&self) -> &[BoolMatrix] {
        &self.generators
    }

    /// One-step adjacency of the underlying graph, ignoring labels.
    pub fn adjacency(&self) -> BoolMatrix {
        let mut a = BoolMatrix::zero(self.num_states());
        for e in &self.edges {
            a.set(e.from, e.to);
        }
        a
    }

    fn single_char_symbols(&self) -> bool {
        self.alphabet.iter().all(|s| s.chars().count() == 1)
    }

    /// Renders a word: concatenated when every symbol is one character, space-separated otherwise.
    pub fn render(&self, w: &Word) -> String {
        let sep = if self.single_char_symbols() { "" } else { " " };
        w.0.iter().map(|&a| self.alphabet[a].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Inverse of [`Presentation::render`]; `None` if some symbol is not in the alphabet.
    pub fn parse_word(&self, text: &str) -> Option<Word> {
        if self.single_char_symbols() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.symbol_id(c.encode_utf8(&mut [0; 4])))
                .collect::<Option<Vec<_>>>()
                .map(Word)
        } else {
            text.split_whitespace().map(|s| self.symbol_id(s)).collect::<Option<Vec<_>>>().map(Word)
        }
    }

    /// Parses a word, failing with `UnknownSymbol` on foreign symbols.
    pub fn word(&self, text: &str) -> Result<Word> {
        self.parse_word(text).ok_or_else(|| Error::UnknownSymbol(text.to_string()))
    }

    /// Iteratively removes states without incoming or outgoing edges.
    pub fn trim_essential(&self) -> Result<Presentation> {
        let n = self.num_states();
        let mut alive = vec![true; n];
        loop {
            let mut has_in = vec![false; n];
            let mut has_out = vec![false; n];
            for e in &self.edges {
                if alive[e.from] && alive[e.to] {
                    has_out[e.from] = true;
                    has_in[e.to] = true;
                }
            }
            let mut changed = false;
            for s in 0..n {
                if alive[s] && !(has_in[s] && has_out[s]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !alive.iter().any(|&a| a) {
            return Err(Error::EmptyShift);
        }
        let mut remap = vec![usize::MAX; n];
        let mut states = Vec::new();
        for s in 0..n {
            if alive[s] {
                remap[s] = states.len();
                states.push(self.states[s].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| alive[e.from] && alive[e.to])
            .map(|e| Edge { from: remap[e.from], label: e.label, to: remap[e.to] })
            .collect();
        Ok(Self::from_parts(self.alphabet.clone(), states, edges, true, self.recoding.clone()))
    }

    /// Set of states reachable from `start` along a path labelled `w`.
    pub fn follow(&self, start: &StateSet, w: &[SymbolId]) -> StateSet {
        let mut cur = start.clone();
        for &a in w {
            if cur.is_empty() {
                break;
            }
            cur = self.generators[a].image(&cur);
        }
        cur
    }

    /// True iff some path carries the label sequence `w`; for essential presentations
    /// this is membership in the language of the shift.
    pub fn contains_word(&self, w: &Word) -> bool {
        !self.follow(&StateSet::full(self.num_states()), &w.0).is_empty()
    }

    /// Membership for a rendered word; foreign symbols yield `false`.
    pub fn contains_str(&self, text: &str) -> bool {
        self.parse_word(text).is_some_and(|w| self.contains_word(&w))
    }

    /// Exhaustive list of length-`n` path labels, in lexicographic order.
    pub fn blocks(&self, n: usize, limits: &Limits) -> Result<LanguageSample> {
        if n == 0 {
            return Err(Error::Precondition("block length must be at least 1".into()));
        }
        let bound = (self.num_symbols() as f64).powi(n as i32);
        if bound > limits.max_words as f64 {
            return Err(Error::cap(format!("|Σ|^{n} words"), limits.max_words as u64));
        }
        let mut out = Vec::new();
        self.for_each_word(n, &mut |w, _| out.push(Word(w.to_vec())));
        Ok(LanguageSample { n, blocks: out })
    }

    /// Visits every word of length exactly `n` in lexicographic order together with
    /// the set of states where its paths end.
    pub fn for_each_word(&self, n: usize, visit: &mut dyn FnMut(&[SymbolId], &StateSet)) {
        let mut word = Vec::with_capacity(n);
        let full = StateSet::full(self.num_states());
        self.dfs(n, &full, &mut word, visit);
    }

    fn dfs(&self, n: usize, cur: &StateSet, word: &mut Vec<SymbolId>, visit: &mut dyn FnMut(&[SymbolId], &StateSet)) {
        if word.len() == n {
            visit(word, cur);
            return;
        }
        for a in 0..self.num_symbols() {
            let next = self.generators[a].image(cur);
            if !next.is_empty() {
                word.push(a);
                self.dfs(n, &next, word, visit);
                word.pop();
            }
        }
    }

    /// Number of words of each length `1..=n`; stops early once `cap` is exceeded.
    pub fn count_words_up_to(&self, n: usize, cap: usize) -> Option<usize> {
        let mut layer: HashMap<StateSet, u128> = HashMap::new();
        layer.insert(StateSet::full(self.num_states()), 1);
        let mut total: u128 = 0;
        for _ in 0..n {
            let mut next: HashMap<StateSet, u128> = HashMap::new();
            for (set, count) in &layer {
                for g in &self.generators {
                    let img = g.image(set);
                    if !img.is_empty() {
                        *next.entry(img).or_default() += count;
                    }
                }
            }
            total += next.values().sum::<u128>();
            if total > cap as u128 {
                return None;
            }
            layer = next;
        }
        Some(total as usize)
    }

    /// Edge-reversed presentation; its language consists of the reversed words.
    pub fn reversed(&self) -> Presentation {
        let edges = self.edges.iter().map(|e| Edge { from: e.to, label: e.label, to: e.from }).collect();
        Self::from_parts(self.alphabet.clone(), self.states.clone(), edges, self.essential, None)
    }

    /// Presentation of the product shift; symbols and states are named `(a,b)`.
    pub fn product(&self, other: &Presentation) -> Result<Presentation> {
        let pair = |a: &str, b: &str| format!("({a},{b})");
        let mut alphabet = Vec::new();
        for a in &self.alphabet {
            for b in &other.alphabet {
                alphabet.push(pair(a, b));
            }
        }
        let mut states = Vec::new();
        for s in &self.states {
            for t in &other.states {
                states.push(pair(s, t));
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            for f in &other.edges {
                edges.push((
                    pair(&self.states[e.from], &other.states[f.from]),
                    pair(&self.states[e.to], &other.states[f.to]),
                    pair(&self.alphabet[e.label], &other.alphabet[f.label]),
                ));
            }
        }
        Presentation::new(&alphabet, &states, &edges)?.trim_essential()
    }

    /// Restriction to the edges accepted by `keep`, re-trimmed.
    pub fn filter_edges(&self, keep: impl Fn(&Edge) -> bool) -> Result<Presentation> {
        let edges = self.edges.iter().copied().filter(|e| keep(e)).collect();
        Self::from_parts(self.alphabet.clone(), self.states.clone(), edges, false, self.recoding.clone())
            .trim_essential()
    }

    /// Same presentation over a larger alphabet (extra symbols unused).
    pub fn with_alphabet(&self, alphabet: &[String]) -> Result<Presentation> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push((self.states[e.from].clone(), self.states[e.to].clone(), self.alphabet[e.label].clone()));
        }
        let mut p = Presentation::new(alphabet, &self.states, &edges)?;
        p.essential = self.essential;
        p.recoding = self.recoding.clone();
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn golden_mean_membership() {
        let gm = fixtures::golden_mean();
        assert!(!gm.contains_str("0110"));
        assert!(gm.contains_str("0101"));
        assert!(!gm.contains_str("0x"));
    }

    #[test]
    fn trim_removes_dangling_sink() {
        let p = Presentation::new(&["0", "1"], &["A", "B", "S"], &[("A", "B", "0"), ("B", "A", "1"), ("B", "S", "0")])
            .unwrap();
        let t = p.trim_essential().unwrap();
        assert_eq!(t.states(), &["A".to_string(), "B".to_string()]);
        assert!(t.is_essential());
        assert_eq!(t.trim_essential().unwrap(), t);
    }

    #[test]
    fn trim_to_empty_is_reported() {
        let p = Presentation::new(&["0"], &["A", "B"], &[("A", "B", "0")]).unwrap();
        assert_eq!(p.trim_essential(), Err(Error::EmptyShift));
    }

    #[test]
    fn golden_mean_is_already_essential() {
        let gm = fixtures::golden_mean();
        assert_eq!(gm.trim_essential().unwrap().edges(), gm.edges());
    }

    #[test]
    fn x_not_is_essential_and_every_state_is_on_a_biinfinite_walk() {
        let raw = fixtures::x_not_raw();
        let t = raw.trim_essential().unwrap();
        assert_eq!(t.num_states(), 5);
        // each state can reach a cycle and be reached from a cycle
        let adj = raw.adjacency();
        let reach = adj.reflexive_closure();
        let on_cycle: Vec<usize> = (0..5).filter(|&s| adj.mul(&reach).get(s, s)).collect();
        for s in 0..5 {
            assert!(on_cycle.iter().any(|&c| reach.get(c, s)));
            assert!(on_cycle.iter().any(|&c| reach.get(s, c)));
        }
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Presentation::new::<&str>(&[], &["A"], &[]), Err(Error::EmptyAlphabet));
        assert!(matches!(Presentation::new(&["0"], &["A", "A"], &[]), Err(Error::DuplicateState(_))));
        assert!(matches!(Presentation::new(&["0"], &["A"], &[("A", "A", "1")]), Err(Error::UnknownSymbol(_))));
        assert!(matches!(
            Presentation::new(&["0"], &["A"], &[("A", "A", "0"), ("A", "A", "0")]),
            Err(Error::DuplicateEdge(_))
        ));
    }

    #[test]
    fn x_not_blocks_of_length_four() {
        let x = fixtures::x_not();
        let got: BTreeSet<String> =
            x.blocks(4, &Limits::default()).unwrap().blocks.iter().map(|w| x.render(w)).collect();
        let want: BTreeSet<String> = ["0000", "0001", "0011", "0111", "1111", "1102", "1022", "1110", "0222", "2222"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
        assert!(!x.contains_str("0120"));
    }

    #[test]
    fn even_shift_blocks_of_length_three() {
        let e = fixtures::even_shift();
        let got: Vec<String> = e.blocks(3, &Limits::default()).unwrap().blocks.iter().map(|w| e.render(w)).collect();
        assert_eq!(got, vec!["000", "001", "010", "011", "100", "110", "111"]);
    }

    #[test]
    fn one_symbol_full_shift() {
        let f = fixtures::full_shift(&["a"]);
        assert_eq!(f.num_states(), 1);
        assert_eq!(f.edges().len(), 1);
        let b = f.blocks(3, &Limits::default()).unwrap();
        assert_eq!(b.blocks, vec![Word(vec![0, 0, 0])]);
    }

    #[test]
    fn blocks_refuses_beyond_cap() {
        let f = fixtures::full_shift(&["a", "b"]);
        let lim = Limits { max_words: 100, ..Limits::default() };
        assert!(matches!(f.blocks(7, &lim), Err(Error::ResourceCap { .. })));
        assert!(f.blocks(6, &lim).is_ok());
    }

    #[test]
    fn product_of_one_symbol_full_shifts() {
        let p = fixtures::full_shift(&["a"]).product(&fixtures::full_shift(&["b"])).unwrap();
        assert_eq!(p.num_states(), 1);
        assert_eq!(p.alphabet(), &["(a,b)".to_string()]);
        assert_eq!(p.edges().len(), 1);
    }

    #[test]
    fn golden_mean_squared_has_nine_two_blocks() {
        let gm = fixtures::golden_mean();
        let lim = Limits::default();
        assert_eq!(gm.blocks(2, &lim).unwrap().blocks.len(), 3);
        let sq = gm.product(&gm).unwrap();
        assert_eq!(sq.num_states(), 4);
        assert_eq!(sq.num_symbols(), 4);
        assert_eq!(sq.blocks(2, &lim).unwrap().blocks.len(), 9);
    }

    #[test]
    fn render_and_parse_multi_char_symbols() {
        let p = Presentation::new(&["ab", "c"], &["s"], &[("s", "s", "ab"), ("s", "s", "c")]).unwrap();
        let w = p.parse_word("ab c ab").unwrap();
        assert_eq!(w, Word(vec![0, 1, 0]));
        assert_eq!(p.render(&w), "ab c ab");
        assert!(p.parse_word("ab d").is_none());
    }
}
