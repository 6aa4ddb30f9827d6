//! TMF, non-wandering and TMC decisions, and the combined classification.
//!
//! For a sofic shift `X` the following are equivalent, and [`classify`] evaluates the last three
//! independently and checks that they agree:
//!
//! - (a) `X` is the support of a stationary Markov chain;
//! - (b) `X` is the support of a stationary Markov random field;
//! - (c) `X` is a non-wandering TMF;
//! - (d) `X × X` is non-wandering and `X` is a TMF;
//! - (e) `X` is a finite union of irreducible TMCs on disjoint alphabets.
//!
//! When (e) holds a chain supported exactly on `X` is built, which witnesses (a) and therefore (b).

mod nonwandering;
mod patching;
mod tmc;
mod tmf;

use serde::Serialize;

pub use nonwandering::{
    is_non_wandering, search_returns, square_is_non_wandering, NonWanderingVerdict, ReturnSearch, SquareVerdict,
};
pub use patching::{patching_check, PatchingFailure};
pub use tmc::{
    decompose_irreducible, index_of_primitivity, is_tmc, period_and_classes, two_block_tmc, IrreducibleComponent,
};
pub use tmf::{
    is_tmf, shortest_context_difference, tmf_monoid, tmf_oracle, tmf_paper_bound, validate_witness, TmfMode,
    TmfVerdict, TmfWitness, DEFAULT_ORACLE_LEN,
};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::language::language_equal;
use crate::measure::{chain_on_tmc, ChainWeights, HiddenMarkovMeasure, MeasureDocument};
use crate::monoid::{monoid_stats, ContextMonoid, MonoidStats};
use crate::presentation::{Presentation, Recoding};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TmfWitnessText {
    pub w: String,
    pub u: String,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TmfReport {
    pub is_tmf: bool,
    pub mode: TmfMode,
    pub searched_len: usize,
    pub witness: Option<TmfWitnessText>,
}

impl TmfReport {
    pub fn new(p: &Presentation, v: &TmfVerdict) -> Self {
        TmfReport {
            is_tmf: v.is_tmf,
            mode: v.mode,
            searched_len: v.searched_len,
            witness: v.witness.as_ref().map(|w| TmfWitnessText {
                w: p.render(&w.w),
                u: p.render(&w.u),
                x: p.render(&w.x),
                y: p.render(&w.y),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonWanderingReport {
    pub is_non_wandering: bool,
    pub periodic_dense: bool,
    pub witness: Option<String>,
}

impl NonWanderingReport {
    pub fn new(p: &Presentation, v: &NonWanderingVerdict) -> Self {
        NonWanderingReport {
            is_non_wandering: v.is_non_wandering,
            periodic_dense: v.periodic_dense,
            witness: v.witness.as_ref().map(|w| p.render(w)),
        }
    }
}

/// The five equivalent conditions. (a) and (b) are existential over measures; they are set
/// when a chain supported on `X` was constructed, and otherwise follow the other three.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    /// `witnessed` when a supporting chain was built and its support checked, `not-witnessed` otherwise.
    pub a_b_basis: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub recoding: Option<Recoding>,
    pub sofic_stats: MonoidStats,
    pub tmf: TmfReport,
    pub nonwandering: NonWanderingReport,
    pub product_nonwandering: NonWanderingReport,
    /// `product-monoid` when the monoid of `X × X` fit the limits, `length-profile` otherwise.
    pub product_method: &'static str,
    pub is_tmc: bool,
    pub components: Vec<IrreducibleComponent>,
    pub decomposition_error: Option<String>,
    pub supporting_chain: Option<MeasureDocument>,
    pub conditions: Conditions,
    pub consistent: bool,
}

/// Runs every decision on `p` and checks the equivalence of conditions (c), (d), (e).
///
/// An inconsistent result is returned as a report with `consistent = false`; callers treat it
/// as fatal.
pub fn classify(p: &Presentation, limits: &Limits) -> Result<ClassificationReport> {
    let p = if p.is_essential() { p.clone() } else { p.trim_essential()? };
    let cm = ContextMonoid::build(&p, limits)?;
    let stats = monoid_stats(&cm, limits)?;
    let tmf = tmf_monoid(&cm);
    let nw = is_non_wandering(&cm)?;
    let (nw2, product_method) = product_non_wandering(&p, &cm, limits)?;
    let (tmc, _) = is_tmc(&p, limits)?;
    let (components, decomposition_error) = if tmc {
        match decompose_irreducible(&p, limits) {
            Ok(c) => (c, None),
            Err(e @ Error::NotNonWanderingTmc(_)) => (Vec::new(), Some(e.to_string())),
            Err(e) => return Err(e),
        }
    } else {
        (Vec::new(), None)
    };
    let c = nw.is_non_wandering && tmf.is_tmf;
    let d = nw2.is_non_wandering && tmf.is_tmf;
    let e = tmc && decomposition_error.is_none();
    let mut supporting_chain = None;
    let mut support_ok = false;
    if e {
        let chain = chain_on_tmc(&p, &ChainWeights::default())?;
        let m = HiddenMarkovMeasure::from_chain(chain);
        support_ok = language_equal(&m.support()?, &p, limits)?;
        supporting_chain = Some(MeasureDocument::from_measure(&m));
    }
    let consistent = c == d && d == e && (!e || support_ok) && (!tmc || tmf.is_tmf);
    let (a, b) = if e { (support_ok, support_ok) } else { (c, c) };
    Ok(ClassificationReport {
        alphabet: p.alphabet().to_vec(),
        states: p.num_states(),
        recoding: p.recoding().cloned(),
        sofic_stats: stats,
        tmf: TmfReport::new(&p, &tmf),
        nonwandering: NonWanderingReport::new(&p, &nw),
        product_nonwandering: nw2,
        product_method,
        is_tmc: tmc,
        components,
        decomposition_error,
        supporting_chain,
        conditions: Conditions {
            a,
            b,
            c,
            d,
            e,
            a_b_basis: if e && support_ok { "witnessed" } else { "not-witnessed" },
        },
        consistent,
    })
}

/// Non-wandering of `X × X` through its own monoid, or through the monoid of `X` when the
/// product monoid exceeds the limits.
fn product_non_wandering(
    p: &Presentation,
    cm: &ContextMonoid,
    limits: &Limits,
) -> Result<(NonWanderingReport, &'static str)> {
    let square = p.product(p)?;
    match ContextMonoid::build(&square, limits) {
        Ok(square_cm) => Ok((NonWanderingReport::new(&square, &is_non_wandering(&square_cm)?), "product-monoid")),
        Err(Error::ResourceCap { .. }) => {
            let v = square_is_non_wandering(cm)?;
            let witness = v.witness.map(|(w, u)| {
                w.symbols()
                    .iter()
                    .zip(u.symbols())
                    .map(|(&a, &b)| format!("({},{})", p.alphabet()[a], p.alphabet()[b]))
                    .collect()
            });
            let report =
                NonWanderingReport { is_non_wandering: v.is_non_wandering, periodic_dense: v.periodic_dense, witness };
            Ok((report, "length-profile"))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run(p: &Presentation) -> ClassificationReport {
        classify(p, &Limits::default()).unwrap()
    }

    #[test]
    fn golden_mean_all_true() {
        let r = run(&fixtures::golden_mean());
        assert!(r.consistent);
        let c = &r.conditions;
        assert!(c.a && c.b && c.c && c.d && c.e);
        assert_eq!(c.a_b_basis, "witnessed");
        assert_eq!(r.components.len(), 1);
        assert_eq!((r.components[0].period, r.components[0].primitivity_index), (1, 2));
    }

    #[test]
    fn x_not_is_tmf_but_wanders() {
        let r = run(&fixtures::x_not());
        assert!(r.consistent);
        assert!(r.tmf.is_tmf);
        assert!(!r.nonwandering.is_non_wandering);
        assert_eq!(r.nonwandering.witness.as_deref(), Some("01"));
        assert!(!r.is_tmc);
        let c = &r.conditions;
        assert!(!c.c && !c.d && !c.e && !c.a);
    }

    #[test]
    fn even_shift_not_tmf() {
        let r = run(&fixtures::even_shift());
        assert!(r.consistent);
        assert!(!r.tmf.is_tmf);
        assert!(r.nonwandering.is_non_wandering);
        assert!(!r.conditions.c && !r.conditions.d && !r.conditions.e);
    }

    #[test]
    fn product_fallback_agrees() {
        let tight = Limits { max_monoid: 40, ..Limits::default() };
        for (name, p) in fixtures::all() {
            let cm = ContextMonoid::build(&p, &Limits::default()).unwrap();
            let full = product_non_wandering(&p, &cm, &Limits::default()).unwrap();
            let small = product_non_wandering(&p, &cm, &tight).unwrap();
            assert_eq!(full.0.is_non_wandering, small.0.is_non_wandering, "{name}");
        }
        let x = fixtures::x_not();
        let cm = ContextMonoid::build(&x, &Limits::default()).unwrap();
        let (r, method) = product_non_wandering(&x, &cm, &tight).unwrap();
        assert_eq!(method, "length-profile");
        assert_eq!(r.witness.as_deref(), Some("(0,0)(0,1)"));
    }

    #[test]
    fn every_fixture_is_consistent() {
        for (name, p) in fixtures::all() {
            assert!(run(&p).consistent, "{name}");
        }
    }
}
