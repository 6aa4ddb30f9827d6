use std::collections::{BTreeMap, HashMap};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, SymbolId, Word};

/// A failed splice: `left` supplies the interior and boundary of `interior`, `right` the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchingFailure {
    pub left: Word,
    pub right: Word,
    pub interior: Vec<usize>,
    pub spliced: Word,
}

/// Word-scale patching: for every nonempty set `C` of interior positions of a length-`n`
/// window and all `a, b ∈ B_n` agreeing on the boundary of `C`, the word equal to `a` on `C`
/// and its boundary and to `b` elsewhere must be in the language.
pub fn patching_check(p: &Presentation, n: usize, limits: &Limits) -> Result<Option<PatchingFailure>> {
    if n < 3 {
        return Ok(None);
    }
    let blocks = p.blocks(n, limits)?.blocks;
    if blocks.len().saturating_mul(1 << (n - 2)) > limits.max_words {
        return Err(Error::cap("patching configurations", limits.max_words as u64));
    }
    for mask in 1u32..(1 << (n - 2)) {
        let interior: Vec<usize> = (1..n - 1).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let boundary: Vec<usize> = (0..n)
            .filter(|i| {
                !interior.contains(i) && (interior.contains(&(i + 1)) || (*i > 0 && interior.contains(&(i - 1))))
            })
            .collect();
        let inner: Vec<usize> = (0..n).filter(|i| interior.contains(i) || boundary.contains(i)).collect();
        let outer: Vec<usize> = (0..n).filter(|i| !interior.contains(i)).collect();
        let restrict = |w: &Word, pos: &[usize]| pos.iter().map(|&i| w.0[i]).collect::<Vec<SymbolId>>();
        // restrictions grouped by the boundary pattern, each with its lex-least source word
        let mut left: HashMap<Vec<SymbolId>, BTreeMap<Vec<SymbolId>, usize>> = HashMap::new();
        let mut right: HashMap<Vec<SymbolId>, BTreeMap<Vec<SymbolId>, usize>> = HashMap::new();
        for (k, w) in blocks.iter().enumerate() {
            let key = restrict(w, &boundary);
            left.entry(key.clone()).or_default().entry(restrict(w, &inner)).or_insert(k);
            right.entry(key).or_default().entry(restrict(w, &outer)).or_insert(k);
        }
        let mut keys: Vec<&Vec<SymbolId>> = left.keys().collect();
        keys.sort();
        for key in keys {
            for (l, ka) in &left[key] {
                for (r, kb) in &right[key] {
                    let mut z = vec![0; n];
                    for (&i, &s) in inner.iter().zip(l) {
                        z[i] = s;
                    }
                    for (&i, &s) in outer.iter().zip(r) {
                        z[i] = s;
                    }
                    let z = Word(z);
                    if !p.contains_word(&z) {
                        return Ok(Some(PatchingFailure {
                            left: blocks[*ka].clone(),
                            right: blocks[*kb].clone(),
                            interior,
                            spliced: z,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures() {
        let lim = Limits::default();
        assert_eq!(patching_check(&fixtures::golden_mean(), 6, &lim).unwrap(), None);
        assert_eq!(patching_check(&fixtures::x_not(), 6, &lim).unwrap(), None);
        let e = fixtures::even_shift();
        let f = patching_check(&e, 7, &lim).unwrap().unwrap();
        assert!(e.contains_word(&f.left) && e.contains_word(&f.right));
        assert!(!e.contains_word(&f.spliced));
    }
}
