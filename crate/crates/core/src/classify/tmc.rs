use serde::Serialize;

use crate::bits::BoolMatrix;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::graph::{period_and_levels, strongly_connected_components};
use crate::language::language_equal;
use crate::presentation::Presentation;

/// One irreducible piece of a non-wandering TMC.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibleComponent {
    pub symbols: Vec<String>,
    #[serde(skip)]
    pub presentation: Presentation,
    pub period: usize,
    /// Cyclically moving subsets; class 0 holds the least symbol.
    pub classes: Vec<Vec<String>>,
    pub primitivity_index: usize,
}

/// The TMC spanned by the 2-blocks of `p`: vertex shift on the used symbols.
pub fn two_block_tmc(p: &Presentation) -> Result<Presentation> {
    let mut used = vec![false; p.num_symbols()];
    let mut pairs = Vec::new();
    p.for_each_word(2, &mut |w, _| {
        used[w[0]] = true;
        used[w[1]] = true;
        pairs.push((p.alphabet()[w[0]].clone(), p.alphabet()[w[1]].clone()));
    });
    let symbols: Vec<String> = (0..p.num_symbols()).filter(|&a| used[a]).map(|a| p.alphabet()[a].clone()).collect();
    Presentation::vertex_shift(&symbols, &pairs)?.trim_essential()
}

/// Whether `p` presents a TMC; on success also returns the canonical vertex-shift presentation.
pub fn is_tmc(p: &Presentation, limits: &Limits) -> Result<(bool, Option<Presentation>)> {
    let p = if p.is_essential() { p.clone() } else { p.trim_essential()? };
    let y = two_block_tmc(&p)?;
    if language_equal(&p, &y, limits)? {
        Ok((true, Some(y)))
    } else {
        Ok((false, None))
    }
}

/// Splits a non-wandering TMC into irreducible components on disjoint alphabets.
pub fn decompose_irreducible(p: &Presentation, limits: &Limits) -> Result<Vec<IrreducibleComponent>> {
    let (tmc, y) = is_tmc(p, limits)?;
    let y = match (tmc, y) {
        (true, Some(y)) => y,
        _ => return Err(Error::NotTmc),
    };
    let adj = y.adjacency();
    let comps = strongly_connected_components(&adj);
    let mut comp_of = vec![0; y.num_states()];
    for (k, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = k;
        }
    }
    if let Some((a, b)) = adj.pairs().find(|&(a, b)| comp_of[a] != comp_of[b]) {
        return Err(Error::NotNonWanderingTmc(format!(
            "transition {}{} joins two components",
            y.states()[a],
            y.states()[b]
        )));
    }
    comps.iter().map(|c| component(&y, &adj, c)).collect()
}

fn component(y: &Presentation, adj: &BoolMatrix, comp: &[usize]) -> Result<IrreducibleComponent> {
    let symbols: Vec<String> = comp.iter().map(|&s| y.states()[s].clone()).collect();
    let pairs: Vec<(String, String)> = adj
        .pairs()
        .filter(|(a, b)| comp.contains(a) && comp.contains(b))
        .map(|(a, b)| (y.states()[a].clone(), y.states()[b].clone()))
        .collect();
    let presentation = Presentation::vertex_shift(&symbols, &pairs)?.trim_essential()?;
    let (period, classes) = period_and_classes(&presentation);
    let primitivity_index = index_of_primitivity(&presentation, period, &classes)?;
    Ok(IrreducibleComponent { symbols, presentation, period, classes, primitivity_index })
}

/// Period and cyclically moving subsets of an irreducible vertex shift.
pub fn period_and_classes(c: &Presentation) -> (usize, Vec<Vec<String>>) {
    let all: Vec<usize> = (0..c.num_states()).collect();
    let (period, residues) = period_and_levels(&c.adjacency(), &all);
    let mut classes = vec![Vec::new(); period.max(1)];
    for (s, r) in residues.into_iter().enumerate() {
        classes[r].push(c.states()[s].clone());
    }
    (period, classes)
}

/// Smallest `t ≥ 1` such that for all `a ∈ Σ_i`, `b ∈ Σ_j` some point has `x_1 = a` and
/// `x_{tp+j−i+1} = b`, i.e. `A^{tp+j−i}[a][b]` holds.
pub fn index_of_primitivity(c: &Presentation, period: usize, classes: &[Vec<String>]) -> Result<usize> {
    let n = c.num_states();
    let mut class_of = vec![0usize; n];
    for (k, class) in classes.iter().enumerate() {
        for name in class {
            class_of[c.state_id(name).expect("class member is a state")] = k;
        }
    }
    let adj = c.adjacency();
    let mut powers = vec![BoolMatrix::identity(n)];
    let limit = n * n + 2;
    for t in 1..=limit {
        let top = t * period + period;
        while powers.len() <= top {
            let next = powers.last().expect("identity present").mul(&adj);
            powers.push(next);
        }
        let ok = (0..n).all(|a| {
            (0..n).all(|b| {
                let e = t * period + class_of[b] - class_of[a];
                powers[e].get(a, b)
            })
        });
        if ok {
            return Ok(t);
        }
    }
    Err(Error::Inconsistency(format!("no primitivity index up to {limit}; component is not irreducible")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn tmc_detection() {
        assert!(is_tmc(&fixtures::golden_mean(), &lim()).unwrap().0);
        assert!(!is_tmc(&fixtures::even_shift(), &lim()).unwrap().0);
        assert!(!is_tmc(&fixtures::x_not(), &lim()).unwrap().0);
        let (ok, y) = is_tmc(&fixtures::full_shift(&["a", "b"]), &lim()).unwrap();
        assert!(ok);
        assert_eq!(y.unwrap().num_states(), 2);
    }

    #[test]
    fn golden_mean_component() {
        let c = decompose_irreducible(&fixtures::golden_mean(), &lim()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].symbols, ["0", "1"]);
        assert_eq!((c[0].period, c[0].primitivity_index), (1, 2));
        assert_eq!(c[0].classes, vec![vec!["0".to_string(), "1".to_string()]]);
    }

    #[test]
    fn disjoint_union_components() {
        let c = decompose_irreducible(&fixtures::golden_mean_plus_fixed_point(), &lim()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].symbols, ["a"]);
        assert_eq!((c[1].period, c[1].primitivity_index), (1, 1));
    }

    #[test]
    fn cycles() {
        let c = &decompose_irreducible(&fixtures::three_cycle(), &lim()).unwrap()[0];
        assert_eq!(c.period, 3);
        assert_eq!(c.classes, vec![vec!["a".to_string()], vec!["b".to_string()], vec!["c".to_string()]]);
        assert_eq!(c.primitivity_index, 1);
        let c = &decompose_irreducible(&fixtures::two_cycle(), &lim()).unwrap()[0];
        assert_eq!((c.period, c.classes.len()), (2, 2));
        let f = &decompose_irreducible(&fixtures::full_shift(&["a", "b"]), &lim()).unwrap()[0];
        assert_eq!(f.primitivity_index, 1);
    }

    #[test]
    fn rejections() {
        assert_eq!(decompose_irreducible(&fixtures::x_not(), &lim()), Err(Error::NotTmc));
        // 0^∞ → 1^∞ is a TMC but wanders
        let p = Presentation::vertex_shift(&["0", "1"], &[("0", "0"), ("0", "1"), ("1", "1")]).unwrap();
        assert!(matches!(
            decompose_irreducible(&p.trim_essential().unwrap(), &lim()),
            Err(Error::NotNonWanderingTmc(_))
        ));
    }

    #[test]
    fn primitivity_matches_brute_force_paths() {
        // t from the literal definition: a path of length tp + j − i from a to b
        let p = Presentation::vertex_shift(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("b", "a")],
        )
        .unwrap();
        let c = &decompose_irreducible(&p, &lim()).unwrap()[0];
        assert_eq!(c.period, 2);
        let lengths = |a: &str, b: &str, len: usize| {
            let mut found = false;
            c.presentation.for_each_word(len + 1, &mut |w, _| {
                let n = &c.presentation.alphabet();
                if n[w[0]] == a && n[w[len]] == b {
                    found = true;
                }
            });
            found
        };
        let class = |s: &str| c.classes.iter().position(|k| k.iter().any(|x| x == s)).unwrap();
        let works = |t: usize| {
            c.symbols.iter().all(|a| c.symbols.iter().all(|b| lengths(a, b, t * c.period + class(b) - class(a))))
        };
        let t = (1..10).find(|&t| works(t)).unwrap();
        assert_eq!(c.primitivity_index, t);
    }
}
