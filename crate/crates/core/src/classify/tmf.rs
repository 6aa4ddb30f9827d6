use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::bits::StateSet;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::monoid::{monoid_stats, BoundedContextKey, BoundedContexts, ContextMonoid, ElementId};
use crate::presentation::{Presentation, SymbolId, Word};

/// Default maximal word length for the definitional search.
pub const DEFAULT_ORACLE_LEN: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TmfMode {
    Monoid,
    PaperBound,
    Oracle,
}

impl std::str::FromStr for TmfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monoid" => Ok(TmfMode::Monoid),
            "paper-bound" => Ok(TmfMode::PaperBound),
            "oracle" => Ok(TmfMode::Oracle),
            other => Err(Error::Malformed(format!("unknown TMF mode `{other}`"))),
        }
    }
}

/// Words `w`, `u` of equal length with equal first and last letters, and a context `(x, y)`
/// with `xwy` in the language and `xuy` not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmfWitness {
    pub w: Word,
    pub u: Word,
    pub x: Word,
    pub y: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmfVerdict {
    pub is_tmf: bool,
    pub mode: TmfMode,
    pub witness: Option<TmfWitness>,
    /// Longest word length examined (paper-bound and oracle modes) or the length at which the
    /// profile sequence became periodic (monoid mode).
    pub searched_len: usize,
}

/// Checks a witness by direct membership tests.
pub fn validate_witness(p: &Presentation, wit: &TmfWitness) -> bool {
    let TmfWitness { w, u, x, y } = wit;
    !w.is_empty()
        && w.len() == u.len()
        && w.first() == u.first()
        && w.last() == u.last()
        && !x.is_empty()
        && !y.is_empty()
        && p.contains_word(w)
        && p.contains_word(u)
        && p.contains_word(&Word::concat(&[x, w, y]))
        && !p.contains_word(&Word::concat(&[x, u, y]))
}

/// TMF decision in the requested mode. The oracle runs at [`DEFAULT_ORACLE_LEN`].
pub fn is_tmf(p: &Presentation, mode: TmfMode, limits: &Limits) -> Result<TmfVerdict> {
    let cm = ContextMonoid::build(p, limits)?;
    match mode {
        TmfMode::Monoid => Ok(tmf_monoid(&cm)),
        TmfMode::PaperBound => tmf_paper_bound(&cm, limits),
        TmfMode::Oracle => tmf_oracle(&cm.presentation, DEFAULT_ORACLE_LEN, limits),
    }
}

type Triple = (SymbolId, SymbolId, ElementId);

/// Breadth-first search over profiles: the set of `(first, last, element)` triples realized by
/// words of each length. Each profile determines the next, so the search stops as soon as a
/// profile repeats. Within a profile, triples sharing their end letters must share a context
/// signature.
pub fn tmf_monoid(cm: &ContextMonoid) -> TmfVerdict {
    let m = &cm.monoid;
    let k = cm.presentation.num_symbols();
    let mut profile: BTreeMap<Triple, Word> = BTreeMap::new();
    for a in 0..k {
        if let Some(g) = m.generator(a) {
            profile.insert((a, a, g), Word(vec![a]));
        }
    }
    let mut seen: HashSet<Vec<Triple>> = HashSet::new();
    let mut n = 1;
    loop {
        if let Some(wit) = profile_violation(cm, &profile) {
            return TmfVerdict { is_tmf: false, mode: TmfMode::Monoid, witness: Some(wit), searched_len: n };
        }
        if !seen.insert(profile.keys().copied().collect()) {
            return TmfVerdict { is_tmf: true, mode: TmfMode::Monoid, witness: None, searched_len: n };
        }
        let mut next: BTreeMap<Triple, Word> = BTreeMap::new();
        for (&(f, _, e), w) in &profile {
            for b in 0..k {
                if let Some(e2) = m.extend(e, b) {
                    let mut w2 = w.clone();
                    w2.push(b);
                    match next.get(&(f, b, e2)) {
                        Some(old) if *old <= w2 => {}
                        _ => {
                            next.insert((f, b, e2), w2);
                        }
                    }
                }
            }
        }
        profile = next;
        n += 1;
    }
}

fn profile_violation(cm: &ContextMonoid, profile: &BTreeMap<Triple, Word>) -> Option<TmfWitness> {
    let mut groups: BTreeMap<(SymbolId, SymbolId), Vec<(ElementId, &Word)>> = BTreeMap::new();
    for (&(f, l, e), w) in profile {
        groups.entry((f, l)).or_default().push((e, w));
    }
    let mut best: Option<(&Word, &Word, ElementId, ElementId)> = None;
    for members in groups.values() {
        for (i, &(e1, w1)) in members.iter().enumerate() {
            for &(e2, w2) in &members[i + 1..] {
                if cm.signature_id(e1) == cm.signature_id(e2) {
                    continue;
                }
                let cand = if w1 < w2 { (w1, w2, e1, e2) } else { (w2, w1, e2, e1) };
                if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
        }
    }
    let (w, u, ew, eu) = best?;
    let (w, u, (x, y)) = match cm.distinguishing_context(ew, eu) {
        Some(ctx) => (w, u, ctx),
        None => (u, w, cm.distinguishing_context(eu, ew).expect("distinct signatures differ somewhere")),
    };
    Some(TmfWitness { w: w.clone(), u: u.clone(), x, y })
}

/// Literal bounded search: every pair of words of length at most `|C(X)|²` with equal end
/// letters is compared through `C_m` with `m = max(|P(X)|, |F(X)|)`.
pub fn tmf_paper_bound(cm: &ContextMonoid, limits: &Limits) -> Result<TmfVerdict> {
    let p = &cm.presentation;
    let stats = monoid_stats(cm, limits)?;
    let r_max = stats.context_count * stats.context_count;
    let m = stats.boundary_bound();
    let bounded = BoundedContexts::new(p, m, limits)?;
    for n in 1..=r_max {
        // the search stops at the first violation, so the cap only applies to lengths reached
        if p.count_words_up_to(n, limits.max_words).is_none() {
            return Err(Error::cap(format!("words up to length {n} of |C(X)|² = {r_max}"), limits.max_words as u64));
        }
        let mut firsts: HashMap<(SymbolId, SymbolId), (Word, BoundedContextKey)> = HashMap::new();
        let mut found: Option<(Word, Word)> = None;
        p.for_each_word(n, &mut |w, _| {
            if found.is_some() {
                return;
            }
            let word = Word(w.to_vec());
            let key = bounded.key(&word);
            match firsts.get(&(w[0], w[n - 1])) {
                None => {
                    firsts.insert((w[0], w[n - 1]), (word, key));
                }
                Some((first, k)) if *k != key => found = Some((first.clone(), word)),
                Some(_) => {}
            }
        });
        if let Some((w, u)) = found {
            let (w, u, x, y) = match shortest_context_difference(p, &w, &u, m) {
                Some((x, y)) => (w, u, x, y),
                None => {
                    let (x, y) = shortest_context_difference(p, &u, &w, m)
                        .ok_or_else(|| Error::Inconsistency("bounded contexts differ without a witness".into()))?;
                    (u, w, x, y)
                }
            };
            return Ok(TmfVerdict {
                is_tmf: false,
                mode: TmfMode::PaperBound,
                witness: Some(TmfWitness { w, u, x, y }),
                searched_len: n,
            });
        }
    }
    Ok(TmfVerdict { is_tmf: true, mode: TmfMode::PaperBound, witness: None, searched_len: r_max })
}

/// Shortest `(x, y)` with `1 ≤ |x|, |y| ≤ m`, `xwy` in the language and `xuy` not, ordered by
/// total length, then `x`, then `y`.
pub fn shortest_context_difference(p: &Presentation, w: &Word, u: &Word, m: usize) -> Option<(Word, Word)> {
    let mut xs: Vec<Vec<SymbolId>> = Vec::new();
    for len in 1..=m {
        p.for_each_word(len, &mut |x, _| xs.push(x.to_vec()));
    }
    xs.sort();
    let full = StateSet::full(p.num_states());
    for total in 2..=2 * m {
        for x in xs.iter().filter(|x| x.len() < total && total - x.len() <= m) {
            let sw = p.follow(&p.follow(&full, x), w.symbols());
            if sw.is_empty() {
                continue;
            }
            let su = p.follow(&p.follow(&full, x), u.symbols());
            let mut y = Vec::new();
            if find_separating_suffix(p, &sw, &su, total - x.len(), &mut y) {
                return Some((Word(x.clone()), Word(y)));
            }
        }
    }
    None
}

fn find_separating_suffix(p: &Presentation, a: &StateSet, b: &StateSet, len: usize, y: &mut Vec<SymbolId>) -> bool {
    if y.len() == len {
        return b.is_empty();
    }
    for s in 0..p.num_symbols() {
        let na = p.generator(s).image(a);
        if na.is_empty() {
            continue;
        }
        y.push(s);
        if find_separating_suffix(p, &na, &p.generator(s).image(b), len, y) {
            return true;
        }
        y.pop();
    }
    false
}

/// `(u, v, x, y, |w|)`: the outcome of a split does not depend on `w` itself.
type SplitKey = (Vec<SymbolId>, SymbolId, SymbolId, Vec<SymbolId>, usize);

/// Direct test of the definition: whenever `uvwxy` and `vzx` are in the language with single
/// letters `v`, `x` and `|z| = |w|`, so is `uvzxy`. Checks every `uvwxy` of length at most
/// `max_len`.
pub fn tmf_oracle(p: &Presentation, max_len: usize, limits: &Limits) -> Result<TmfVerdict> {
    let p = if p.is_essential() { p.clone() } else { p.trim_essential()? };
    if p.count_words_up_to(max_len, limits.max_words).is_none() {
        return Err(Error::cap(format!("words up to length {max_len}"), limits.max_words as u64));
    }
    let full = StateSet::full(p.num_states());
    let mut tried: HashSet<SplitKey> = HashSet::new();
    for n in 3..=max_len {
        let mut found: Option<TmfWitness> = None;
        p.for_each_word(n, &mut |s, _| {
            if found.is_some() {
                return;
            }
            for lu in 0..=n - 3 {
                for lw in 1..=n - 2 - lu {
                    let (u, rest) = s.split_at(lu);
                    let v = rest[0];
                    let w = &rest[1..1 + lw];
                    let x = rest[1 + lw];
                    let y = &rest[2 + lw..];
                    if !tried.insert((u.to_vec(), v, x, y.to_vec(), lw)) {
                        continue;
                    }
                    let start_u = p.follow(&full, u);
                    let from_v = p.generator(v).image(&full);
                    let from_uv = p.generator(v).image(&start_u);
                    let mut z = Vec::new();
                    if find_replacement(&p, &from_v, &from_uv, lw, x, y, &mut z) {
                        let mut xc = u.to_vec();
                        let mut yc = y.to_vec();
                        let mut body = vec![v];
                        body.extend_from_slice(w);
                        body.push(x);
                        if xc.is_empty() {
                            let c = (0..p.num_symbols())
                                .find(|&c| p.contains_word(&Word([&[c][..], s].concat())))
                                .expect("essential presentations extend words to the left");
                            xc.push(c);
                        }
                        if yc.is_empty() {
                            let mut left = xc.clone();
                            left.extend_from_slice(&body);
                            let d = (0..p.num_symbols())
                                .find(|&d| p.contains_word(&Word([&left[..], &[d]].concat())))
                                .expect("essential presentations extend words to the right");
                            yc.push(d);
                        }
                        let mut alt = vec![v];
                        alt.extend_from_slice(&z);
                        alt.push(x);
                        found = Some(TmfWitness { w: Word(body), u: Word(alt), x: Word(xc), y: Word(yc) });
                        return;
                    }
                }
            }
        });
        if let Some(wit) = found {
            return Ok(TmfVerdict { is_tmf: false, mode: TmfMode::Oracle, witness: Some(wit), searched_len: n });
        }
    }
    Ok(TmfVerdict { is_tmf: true, mode: TmfMode::Oracle, witness: None, searched_len: max_len })
}

/// Lexicographically least `z` of length `len` with `vzx` in the language and `uvzxy` not;
/// `a` tracks `vz`, `b` tracks `uvz`.
fn find_replacement(
    p: &Presentation,
    a: &StateSet,
    b: &StateSet,
    len: usize,
    x: SymbolId,
    y: &[SymbolId],
    z: &mut Vec<SymbolId>,
) -> bool {
    if z.len() == len {
        let ax = p.generator(x).image(a);
        return !ax.is_empty() && p.follow(&p.generator(x).image(b), y).is_empty();
    }
    for s in 0..p.num_symbols() {
        let na = p.generator(s).image(a);
        if na.is_empty() {
            continue;
        }
        z.push(s);
        if find_replacement(p, &na, &p.generator(s).image(b), len, x, y, z) {
            return true;
        }
        z.pop();
    }
    false
}
