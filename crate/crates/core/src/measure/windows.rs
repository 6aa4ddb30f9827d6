//! Finite-window checks of the Markov and Markov-random-field properties.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::{HiddenMarkovMeasure, Rational};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::presentation::SymbolId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowProperty {
    Mrf,
    Markov,
}

/// A configuration where the two sides of the checked identity differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowWitness {
    /// Target block occupies positions `0..=n`.
    pub n: usize,
    /// Length of the left conditioning block.
    pub left: usize,
    /// Length of the right conditioning block (0 for the Markov check).
    pub right: usize,
    /// `(position, symbol)` for every fixed coordinate, in position order.
    pub configuration: Vec<(i64, String)>,
    /// Conditional probability given the whole window.
    #[serde(serialize_with = "super::file::ser_rational")]
    pub lhs: Rational,
    /// Conditional probability given only the adjacent symbols.
    #[serde(serialize_with = "super::file::ser_rational")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowVerdict {
    pub property: WindowProperty,
    pub max_window: Vec<usize>,
    pub holds: bool,
    pub configurations_checked: u64,
    pub witness: Option<WindowWitness>,
}

/// `(a, t, b)`; `b = None` for the Markov check.
type BoundaryKey = (SymbolId, Vec<SymbolId>, Option<SymbolId>);

struct Ctx<'a> {
    m: &'a HiddenMarkovMeasure,
    /// μ(a t b) and μ(a · b).
    boundary: HashMap<BoundaryKey, (Rational, Rational)>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

impl<'a> Ctx<'a> {
    fn new(m: &'a HiddenMarkovMeasure) -> Self {
        Ctx { m, boundary: HashMap::new() }
    }

    /// Words of length `len` with positive probability, with their forward vectors, in lexicographic order.
    fn positive_words(&self, len: usize) -> Vec<(Vec<SymbolId>, Vec<Rational>)> {
        let mut out = Vec::new();
        let k = self.m.alphabet().len();
        for a in 0..k {
            let v = self.m.start_vector(a);
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let mut w = vec![a];
            self.extend(&mut w, v, len, &mut out);
        }
        out
    }

    fn extend(
        &self,
        w: &mut Vec<SymbolId>,
        v: Vec<Rational>,
        len: usize,
        out: &mut Vec<(Vec<SymbolId>, Vec<Rational>)>,
    ) {
        if w.len() == len {
            out.push((w.clone(), v));
            return;
        }
        for a in 0..self.m.alphabet().len() {
            let next = self.m.step(&v, Some(a));
            if next.iter().all(Zero::is_zero) {
                continue;
            }
            w.push(a);
            self.extend(w, next, len, out);
            w.pop();
        }
    }

    /// Forward vectors of every continuation `t` of length `len` after `v`, including zero ones.
    fn continuations(&self, v: &[Rational], len: usize) -> Vec<(Vec<SymbolId>, Vec<Rational>)> {
        let mut layer = vec![(Vec::new(), v.to_vec())];
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * self.m.alphabet().len());
            for (t, v) in &layer {
                for a in 0..self.m.alphabet().len() {
                    let mut t2 = t.clone();
                    t2.push(a);
                    next.push((t2, self.m.step(v, Some(a))));
                }
            }
            layer = next;
        }
        layer
    }

    fn free_steps(&self, v: &[Rational], len: usize) -> Vec<Rational> {
        (0..len).fold(v.to_vec(), |v, _| self.m.step(&v, None))
    }

    fn boundary(&mut self, a: SymbolId, t: &[SymbolId], b: Option<SymbolId>) -> (Rational, Rational) {
        let key = (a, t.to_vec(), b);
        if let Some(v) = self.boundary.get(&key) {
            return v.clone();
        }
        let start = self.m.start_vector(a);
        let (with_t, free) = {
            let f = t.iter().fold(start.clone(), |v, &s| self.m.step(&v, Some(s)));
            (f, self.free_steps(&start, t.len()))
        };
        let val = match b {
            Some(b) => {
                let back = self.m.backward(&[b]);
                (dot(&with_t, &back), dot(&free, &back))
            }
            None => (with_t.iter().sum(), free.iter().sum()),
        };
        self.boundary.insert(key, val.clone());
        val
    }
}

fn guard(k: usize, lens: impl Iterator<Item = usize>, limits: &Limits) -> Result<()> {
    let total: f64 = lens.map(|l| (k as f64).powi(l as i32)).sum();
    if total > limits.max_words as f64 {
        return Err(Error::cap("window configurations", limits.max_words as u64));
    }
    Ok(())
}

fn configuration(m: &HiddenMarkovMeasure, left: &[SymbolId], t: &[SymbolId], right: &[SymbolId]) -> Vec<(i64, String)> {
    let start = -(left.len() as i64);
    left.iter().chain(t).chain(right).enumerate().map(|(i, &a)| (start + i as i64, m.alphabet()[a].clone())).collect()
}

/// Compares `μ(a_0..a_n | a_{-N..-1}, a_{n+1..n+M})` with `μ(a_0..a_n | a_{-1}, a_{n+1})` exactly
/// for every `n ≤ n_max`, `1 ≤ N ≤ N_max`, `1 ≤ M ≤ M_max` and every configuration whose
/// conditioning event has positive probability. The first violation in
/// `(n, N, M, left, right, target)` order is returned.
pub fn check_mrf_windows(
    m: &HiddenMarkovMeasure,
    n_max: usize,
    left_max: usize,
    right_max: usize,
    limits: &Limits,
) -> Result<WindowVerdict> {
    let k = m.alphabet().len();
    let lens = (0..=n_max).flat_map(|n| (1..=left_max).flat_map(move |l| (1..=right_max).map(move |r| l + n + 1 + r)));
    guard(k, lens, limits)?;
    let mut ctx = Ctx::new(m);
    let mut checked = 0u64;
    let backs: Vec<Vec<(Vec<SymbolId>, Vec<Rational>)>> = (0..=right_max)
        .map(|len| {
            all_words(k, len)
                .into_iter()
                .map(|r| {
                    let b = m.backward(&r);
                    (r, b)
                })
                .filter(|(_, b)| b.iter().any(|x| !x.is_zero()))
                .collect()
        })
        .collect();
    for n in 0..=n_max {
        for left_len in 1..=left_max {
            let lefts = ctx.positive_words(left_len);
            for rights in &backs[1..=right_max] {
                for (left, f) in &lefts {
                    let a = *left.last().expect("nonempty left block");
                    let conts = ctx.continuations(f, n + 1);
                    let free = ctx.free_steps(f, n + 1);
                    for (right, back) in rights {
                        let outer = dot(&free, back);
                        if outer.is_zero() {
                            continue;
                        }
                        let b = right[0];
                        for (t, ft) in &conts {
                            checked += 1;
                            let joint = dot(ft, back);
                            let (inner, inner_outer) = ctx.boundary(a, t, Some(b));
                            if &joint * &inner_outer != &inner * &outer {
                                return Ok(WindowVerdict {
                                    property: WindowProperty::Mrf,
                                    max_window: vec![n_max, left_max, right_max],
                                    holds: false,
                                    configurations_checked: checked,
                                    witness: Some(WindowWitness {
                                        n,
                                        left: left_len,
                                        right: right.len(),
                                        configuration: configuration(m, left, t, right),
                                        lhs: joint / outer,
                                        rhs: inner / inner_outer,
                                    }),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(WindowVerdict {
        property: WindowProperty::Mrf,
        max_window: vec![n_max, left_max, right_max],
        holds: true,
        configurations_checked: checked,
        witness: None,
    })
}

/// Compares `μ(a_0..a_n | a_{-N..-1})` with `μ(a_0..a_n | a_{-1})` exactly for every
/// `n ≤ n_max`, `1 ≤ N ≤ N_max` over positive-probability pasts.
pub fn check_markov_windows(
    m: &HiddenMarkovMeasure,
    n_max: usize,
    left_max: usize,
    limits: &Limits,
) -> Result<WindowVerdict> {
    let k = m.alphabet().len();
    guard(k, (0..=n_max).flat_map(|n| (1..=left_max).map(move |l| l + n + 1)), limits)?;
    let mut ctx = Ctx::new(m);
    let mut checked = 0u64;
    for n in 0..=n_max {
        for left_len in 1..=left_max {
            for (left, f) in ctx.positive_words(left_len) {
                let a = *left.last().expect("nonempty left block");
                let past: Rational = f.iter().sum();
                for (t, ft) in ctx.continuations(&f, n + 1) {
                    checked += 1;
                    let joint: Rational = ft.iter().sum();
                    let (inner, single) = ctx.boundary(a, &t, None);
                    if &joint * &single != &inner * &past {
                        return Ok(WindowVerdict {
                            property: WindowProperty::Markov,
                            max_window: vec![n_max, left_max],
                            holds: false,
                            configurations_checked: checked,
                            witness: Some(WindowWitness {
                                n,
                                left: left_len,
                                right: 0,
                                configuration: configuration(m, &left, &t, &[]),
                                lhs: joint / past,
                                rhs: inner / single,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(WindowVerdict {
        property: WindowProperty::Markov,
        max_window: vec![n_max, left_max],
        holds: true,
        configurations_checked: checked,
        witness: None,
    })
}

fn all_words(k: usize, len: usize) -> Vec<Vec<SymbolId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut w2 = w.clone();
                    w2.push(a);
                    w2
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremOutcome {
    /// Both properties hold at every tested window.
    Consistent,
    /// Both properties fail.
    ConsistentContrapositive,
    /// MRF windows all hold but a Markov window fails; larger windows should expose an MRF violation.
    Tension,
    /// Markov windows all hold but an MRF window fails.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub mrf: WindowVerdict,
    pub markov: WindowVerdict,
    pub outcome: TheoremOutcome,
}

/// Runs both window checks and classifies the pair of results.
pub fn verify_main_theorem(
    m: &HiddenMarkovMeasure,
    mrf_window: (usize, usize, usize),
    markov_window: (usize, usize),
    limits: &Limits,
) -> Result<TheoremReport> {
    let mrf = check_mrf_windows(m, mrf_window.0, mrf_window.1, mrf_window.2, limits)?;
    let markov = check_markov_windows(m, markov_window.0, markov_window.1, limits)?;
    let outcome = match (mrf.holds, markov.holds) {
        (true, true) => TheoremOutcome::Consistent,
        (false, false) => TheoremOutcome::ConsistentContrapositive,
        (true, false) => TheoremOutcome::Tension,
        (false, true) => TheoremOutcome::Inconsistent,
    };
    Ok(TheoremReport { mrf, markov, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::tests::{even_measure, golden_chain, q};
    use crate::measure::{chain_on_tmc, ChainWeights, RationalMarkovChain};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn golden_mean_chain_passes_both() {
        let m = golden_chain();
        assert!(check_mrf_windows(&m, 2, 2, 2, &lim()).unwrap().holds);
        assert!(check_markov_windows(&m, 3, 3, &lim()).unwrap().holds);
        let r = verify_main_theorem(&m, (2, 2, 2), (3, 3), &lim()).unwrap();
        assert_eq!(r.outcome, TheoremOutcome::Consistent);
    }

    #[test]
    fn iid_measure_is_mrf() {
        let third = || vec![q("1/3"), q("1/3"), q("1/3")];
        let c = RationalMarkovChain::new(&["a", "b", "c"], vec![third(), third(), third()], None).unwrap();
        let m = HiddenMarkovMeasure::from_chain(c);
        assert!(check_mrf_windows(&m, 2, 2, 2, &lim()).unwrap().holds);
    }

    #[test]
    fn even_shift_measure_violates_both() {
        let m = even_measure();
        let mrf = check_mrf_windows(&m, 4, 2, 2, &lim()).unwrap();
        assert!(!mrf.holds);
        let w = mrf.witness.unwrap();
        assert_ne!(w.lhs, w.rhs);
        let markov = check_markov_windows(&m, 4, 4, &lim()).unwrap();
        assert!(!markov.holds);
        let r = verify_main_theorem(&m, (4, 2, 2), (4, 4), &lim()).unwrap();
        assert_eq!(r.outcome, TheoremOutcome::ConsistentContrapositive);
    }

    #[test]
    fn even_shift_return_probability_depends_on_parity() {
        // μ(x₀ = 1 | 1 0^k) alternates between 0 and a positive value
        let m = even_measure();
        let cond = |k: usize| {
            let mut given = crate::measure::Cylinder::new();
            given.insert(-(k as i64) - 1, 1);
            for i in 1..=k {
                given.insert(-(i as i64), 0);
            }
            let target: crate::measure::Cylinder = [(0, 1)].into();
            m.conditional_prob(&target, &given).unwrap()
        };
        assert_eq!(cond(1), q("0"));
        assert!(cond(2) > q("0"));
        assert_eq!(cond(3), q("0"));
    }

    #[test]
    fn disjoint_mixture_is_markov() {
        let c = chain_on_tmc(&fixtures::golden_mean_plus_fixed_point(), &ChainWeights::default()).unwrap();
        let m = HiddenMarkovMeasure::from_chain(c);
        let r = verify_main_theorem(&m, (2, 2, 2), (3, 3), &lim()).unwrap();
        assert_eq!(r.outcome, TheoremOutcome::Consistent);
    }

    #[test]
    fn window_cap() {
        let m = golden_chain();
        let small = Limits { max_words: 10, ..lim() };
        assert!(matches!(check_mrf_windows(&m, 2, 2, 2, &small), Err(Error::ResourceCap { .. })));
    }
}
