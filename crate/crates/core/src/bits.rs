//! Dense bitsets over state indices and boolean relation matrices.

use std::fmt;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of `{0, .., n-1}` stored as packed bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    len: usize,
    bits: Vec<u64>,
}

impl StateSet {
    pub fn empty(len: usize) -> Self {
        StateSet { len, bits: vec![0; words_for(len)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_iter_in(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.bits[i / WORD] |= 1 << (i % WORD);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.bits[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    /// Sort key that orders sets by their sorted member lists.
    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Square boolean matrix; entry `(p, q)` is true iff some path relates `p` to `q`.
///
/// The all-false matrix plays the role of the absorbing zero ("star") element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolMatrix {
    dim: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(dim: usize) -> Self {
        let stride = words_for(dim).max(1);
        BoolMatrix { dim, stride, bits: vec![0; stride * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, p: usize, q: usize) {
        self.bits[p * self.stride + q / WORD] |= 1 << (q % WORD);
    }

    pub fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.stride + q / WORD] & (1 << (q % WORD)) != 0
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn row_bits(&self, p: usize) -> &[u64] {
        &self.bits[p * self.stride..(p + 1) * self.stride]
    }

    pub fn row(&self, p: usize) -> StateSet {
        let mut s = StateSet::empty(self.dim);
        s.bits.copy_from_slice(&self.row_bits(p)[..words_for(self.dim)]);
        s
    }

    /// Boolean product `self · other`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = BoolMatrix::zero(self.dim);
        for p in 0..self.dim {
            let base = p * self.stride;
            for k in 0..self.dim {
                if self.get(p, k) {
                    let src = other.row_bits(k);
                    for (o, s) in out.bits[base..base + self.stride].iter_mut().zip(src) {
                        *o |= *s;
                    }
                }
            }
        }
        out
    }

    /// Image of a state set: `{q : ∃p ∈ set, M[p][q]}`.
    pub fn image(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.dim);
        for p in set.iter() {
            let row = self.row_bits(p);
            for (o, s) in out.bits.iter_mut().zip(row) {
                *o |= *s;
            }
        }
        out
    }

    /// Preimage of a state set: `{p : ∃q ∈ set, M[p][q]}`.
    pub fn preimage(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.dim);
        for p in 0..self.dim {
            if self.row_bits(p).iter().zip(&set.bits).any(|(a, b)| a & b != 0) {
                out.insert(p);
            }
        }
        out
    }

    /// States with at least one outgoing pair.
    pub fn row_support(&self) -> StateSet {
        StateSet::from_iter_in(self.dim, (0..self.dim).filter(|&p| self.row_bits(p).iter().any(|&w| w != 0)))
    }

    /// States with at least one incoming pair.
    pub fn column_support(&self) -> StateSet {
        self.image(&StateSet::full(self.dim))
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zero(self.dim);
        for (p, q) in self.pairs() {
            t.set(q, p);
        }
        t
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |p| (0..self.dim).filter(move |&q| self.get(p, q)).map(move |q| (p, q)))
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn reflexive_closure(&self) -> BoolMatrix {
        let mut c = self.clone();
        for i in 0..self.dim {
            c.set(i, i);
        }
        for k in 0..self.dim {
            let row_k: Vec<u64> = c.row_bits(k).to_vec();
            for i in 0..self.dim {
                if c.get(i, k) {
                    let base = i * c.stride;
                    for (o, s) in c.bits[base..base + c.stride].iter_mut().zip(&row_k) {
                        *o |= *s;
                    }
                }
            }
        }
        c
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
