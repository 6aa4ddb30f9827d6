use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::{HiddenMarkovMeasure, Rational, RationalMarkovChain};
use crate::classify::decompose_irreducible;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::presentation::SymbolId;

/// Outcome of evaluating both sides of the block decomposition of `μ(x₀ | x₋₁ … x₋ᵣ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub r: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub i: usize,
    pub period: usize,
    pub primitivity_index: usize,
    pub holds: bool,
    /// Number of `(x₋ᵣ…x₋₁, x₀)` pairs evaluated.
    pub cases_checked: u64,
    pub failure: Option<DecompositionFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionFailure {
    pub past: Vec<String>,
    pub x0: String,
    #[serde(serialize_with = "super::file::ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "super::file::ser_rational")]
    pub rhs: Rational,
}

/// Period, class index per symbol, and primitivity index of an irreducible chain's support.
fn cyclic_data(m: &HiddenMarkovMeasure, limits: &Limits) -> Result<(usize, Vec<usize>, usize)> {
    let support = m.support()?;
    let comps = decompose_irreducible(&support, limits)?;
    if comps.len() != 1 {
        return Err(Error::Precondition(format!(
            "chain support has {} irreducible components, expected 1",
            comps.len()
        )));
    }
    let c = &comps[0];
    let mut class_of = vec![usize::MAX; m.alphabet().len()];
    for (k, class) in c.classes.iter().enumerate() {
        for name in class {
            let a = m.symbol_id(name).expect("support symbol is a measure symbol");
            class_of[a] = k;
        }
    }
    Ok((c.period, class_of, c.primitivity_index))
}

/// `(r, L, i)` with `r, L` positive multiples of `p`, `L > r + t·p` and `1 ≤ i`, inside the given bounds.
pub fn admissible_parameters(
    p: usize,
    t: usize,
    r_max: usize,
    l_max: usize,
    i_max: usize,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for r in (p..=r_max).step_by(p) {
        for l in (p..=l_max).step_by(p).filter(|&l| l > r + t * p) {
            for i in 1..=i_max {
                out.push((r, l, i));
            }
        }
    }
    out
}

/// Period and primitivity index of an irreducible chain's support.
pub fn chain_period_and_index(chain: &RationalMarkovChain, limits: &Limits) -> Result<(usize, usize)> {
    let m = HiddenMarkovMeasure::from_chain(chain.clone());
    let (p, _, t) = cyclic_data(&m, limits)?;
    Ok((p, t))
}

/// Exactly evaluates both sides of
/// `μ(x₀ | x₋₁…x₋ᵣ) = Σ_a μ(x₀ | x₋₁, a_{iL−r}) · μ(a_{iL−r}…a_{iL−1} | x₋₁…x₋ᵣ)`
/// for every positive-probability `x₋ᵣ…x₋₁` starting in class 0 and every `x₀` in class 0,
/// the sum running over `r`-blocks starting in class 0.
pub fn verify_decomposition_identity(
    chain: &RationalMarkovChain,
    r: usize,
    l: usize,
    i: usize,
    limits: &Limits,
) -> Result<DecompositionCheck> {
    let m = HiddenMarkovMeasure::from_chain(chain.clone());
    let (p, class_of, t) = cyclic_data(&m, limits)?;
    if r == 0 || !r.is_multiple_of(p) {
        return Err(Error::Precondition(format!("r = {r} must be a positive multiple of the period {p}")));
    }
    if !l.is_multiple_of(p) || l <= r + t * p {
        return Err(Error::Precondition(format!(
            "L = {l} must be a multiple of {p} exceeding r + t·p = {}",
            r + t * p
        )));
    }
    if i == 0 {
        return Err(Error::Precondition("i must be at least 1".into()));
    }
    let k = m.alphabet().len();
    if (k as f64).powi(r as i32) * 2.0 > limits.max_words as f64 {
        return Err(Error::cap("decomposition blocks", limits.max_words as u64));
    }
    let class0: Vec<SymbolId> = (0..k).filter(|&a| class_of[a] == 0).collect();
    // B_r^0 with forward vectors
    let mut blocks: Vec<(Vec<SymbolId>, Vec<Rational>)> = Vec::new();
    for &a in &class0 {
        let mut stack = vec![(vec![a], m.start_vector(a))];
        while let Some((w, v)) = stack.pop() {
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            if w.len() == r {
                blocks.push((w, v));
                continue;
            }
            for b in (0..k).rev() {
                let mut w2 = w.clone();
                w2.push(b);
                let v2 = m.step(&v, Some(b));
                stack.push((w2, v2));
            }
        }
    }
    let gap = i * l - r;
    // μ(x₀ | x₋₁, a at gap), keyed by (x₋₁, x₀, a)
    let mut boundary: HashMap<(SymbolId, SymbolId, SymbolId), Rational> = HashMap::new();
    let mut boundary_cond = |b: SymbolId, c: SymbolId, a: SymbolId| -> Rational {
        boundary
            .entry((b, c, a))
            .or_insert_with(|| {
                let given = [(-1i64, b), (gap as i64, a)].into_iter().collect();
                let target = [(0i64, c)].into_iter().collect();
                m.conditional_prob(&target, &given).unwrap_or_else(|_| Rational::zero())
            })
            .clone()
    };
    let mut checked = 0u64;
    for (past, f) in &blocks {
        let mass: Rational = f.iter().sum();
        let last = *past.last().expect("r ≥ 1");
        // forward vector at position gap − 1, before the a-block
        let mut g = f.clone();
        for _ in 0..gap {
            g = m.step(&g, None);
        }
        let mut future: Vec<(SymbolId, Rational)> = Vec::new();
        for (a, _) in &blocks {
            let joint: Rational = a.iter().fold(g.clone(), |v, &s| m.step(&v, Some(s))).into_iter().sum();
            if !joint.is_zero() {
                future.push((a[0], joint / &mass));
            }
        }
        for &x0 in &class0 {
            checked += 1;
            let lhs: Rational = m.step(f, Some(x0)).into_iter().sum::<Rational>() / &mass;
            let rhs: Rational = future.iter().map(|(a0, w)| boundary_cond(last, x0, *a0) * w).sum();
            if lhs != rhs {
                let name = |s: &SymbolId| m.alphabet()[*s].clone();
                return Ok(DecompositionCheck {
                    r,
                    l,
                    i,
                    period: p,
                    primitivity_index: t,
                    holds: false,
                    cases_checked: checked,
                    failure: Some(DecompositionFailure {
                        past: past.iter().map(name).collect(),
                        x0: name(&x0),
                        lhs,
                        rhs,
                    }),
                });
            }
        }
    }
    Ok(DecompositionCheck {
        r,
        l,
        i,
        period: p,
        primitivity_index: t,
        holds: true,
        cases_checked: checked,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measure::tests::q;
    use crate::measure::{chain_on_tmc, ChainWeights};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn golden_mean_identity() {
        let c = chain_on_tmc(&fixtures::golden_mean(), &ChainWeights::default()).unwrap();
        let d = verify_decomposition_identity(&c, 2, 5, 1, &lim()).unwrap();
        assert!(d.holds);
        assert_eq!((d.period, d.primitivity_index), (1, 2));
        assert!(d.cases_checked > 0);
    }

    #[test]
    fn one_symbol_identity() {
        let c = chain_on_tmc(&fixtures::full_shift(&["a"]), &ChainWeights::default()).unwrap();
        for (r, l, i) in admissible_parameters(1, 1, 3, 6, 2) {
            assert!(verify_decomposition_identity(&c, r, l, i, &lim()).unwrap().holds);
        }
    }

    #[test]
    fn two_cycle_identity() {
        let c = chain_on_tmc(&fixtures::two_cycle(), &ChainWeights::default()).unwrap();
        let d = verify_decomposition_identity(&c, 2, 6, 1, &lim()).unwrap();
        assert!(d.holds);
        assert_eq!(d.period, 2);
        // only the block starting in class 0 is summed
        assert_eq!(d.cases_checked, 1);
    }

    #[test]
    fn weighted_chain_grid() {
        let mut w = std::collections::BTreeMap::new();
        w.insert(("0".to_string(), "0".to_string()), q("3"));
        w.insert(("0".to_string(), "1".to_string()), q("1"));
        w.insert(("1".to_string(), "0".to_string()), q("1"));
        let c = chain_on_tmc(&fixtures::golden_mean(), &ChainWeights { edges: Some(w), components: None }).unwrap();
        let grid = admissible_parameters(1, 2, 4, 12, 2);
        assert!(!grid.is_empty());
        for (r, l, i) in grid {
            assert!(verify_decomposition_identity(&c, r, l, i, &lim()).unwrap().holds, "r={r} L={l} i={i}");
        }
    }

    #[test]
    fn preconditions() {
        let c = chain_on_tmc(&fixtures::two_cycle(), &ChainWeights::default()).unwrap();
        assert!(matches!(verify_decomposition_identity(&c, 1, 6, 1, &lim()), Err(Error::Precondition(_))));
        assert!(matches!(verify_decomposition_identity(&c, 2, 4, 1, &lim()), Err(Error::Precondition(_))));
        assert!(matches!(verify_decomposition_identity(&c, 2, 6, 0, &lim()), Err(Error::Precondition(_))));
        let mixed = chain_on_tmc(&fixtures::golden_mean_plus_fixed_point(), &ChainWeights::default()).unwrap();
        assert!(matches!(verify_decomposition_identity(&mixed, 1, 4, 1, &lim()), Err(Error::Precondition(_))));
    }
}
