//! Named example shifts used throughout the tests, the CLI corpus, and the docs.

use crate::presentation::Presentation;

fn build(alphabet: &[&str], states: &[&str], edges: &[(&str, &str, &str)]) -> Presentation {
    Presentation::new(alphabet, states, edges)
        .and_then(|p| p.trim_essential())
        .expect("fixture presentations are valid and nonempty")
}

/// Binary sequences without two adjacent 1s, as a vertex shift.
pub fn golden_mean() -> Presentation {
    build(&["0", "1"], &["0", "1"], &[("0", "0", "0"), ("0", "1", "1"), ("1", "0", "0")])
}

/// Even shift: 1s separated by an even number of 0s. States `A`, `B` carry label 0, `C` label 1.
pub fn even_shift() -> Presentation {
    build(
        &["0", "1"],
        &["A", "B", "C"],
        &[("C", "C", "1"), ("C", "A", "0"), ("A", "B", "0"), ("B", "A", "0"), ("B", "C", "1")],
    )
}

/// The five-orbit shift {0^∞, 0^∞1^∞, 1^∞, 1^∞02^∞, 2^∞}, untrimmed.
pub fn x_not_raw() -> Presentation {
    Presentation::new(
        &["0", "1", "2"],
        &["A", "B", "C", "D", "E"],
        &[
            ("A", "A", "0"),
            ("A", "B", "1"),
            ("B", "B", "1"),
            ("C", "C", "1"),
            ("C", "D", "0"),
            ("D", "E", "2"),
            ("E", "E", "2"),
        ],
    )
    .expect("valid fixture")
}

pub fn x_not() -> Presentation {
    x_not_raw().trim_essential().expect("nonempty fixture")
}

/// Full shift on the given symbols, one state.
pub fn full_shift(symbols: &[&str]) -> Presentation {
    let edges: Vec<(&str, &str, &str)> = symbols.iter().map(|&s| ("*", "*", s)).collect();
    build(symbols, &["*"], &edges)
}

/// Directed cycle `a → b → c → a` as a vertex shift.
pub fn three_cycle() -> Presentation {
    build(&["a", "b", "c"], &["a", "b", "c"], &[("a", "b", "b"), ("b", "c", "c"), ("c", "a", "a")])
}

/// Golden mean without the `0 → 0` transition: the period-2 orbit of `01`.
pub fn two_cycle() -> Presentation {
    build(&["0", "1"], &["0", "1"], &[("0", "1", "1"), ("1", "0", "0")])
}

/// Golden mean on {0,1} together with the full shift on {a}, as one vertex shift.
pub fn golden_mean_plus_fixed_point() -> Presentation {
    build(&["0", "1", "a"], &["0", "1", "a"], &[("0", "0", "0"), ("0", "1", "1"), ("1", "0", "0"), ("a", "a", "a")])
}

/// Two fixed points `a^∞` and `b^∞` on disjoint alphabets.
pub fn two_fixed_points() -> Presentation {
    build(&["a", "b"], &["a", "b"], &[("a", "a", "a"), ("b", "b", "b")])
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<(&'static str, Presentation)> {
    vec![
        ("golden-mean", golden_mean()),
        ("even-shift", even_shift()),
        ("x-not", x_not()),
        ("full-a", full_shift(&["a"])),
        ("full-ab", full_shift(&["a", "b"])),
        ("three-cycle", three_cycle()),
        ("two-cycle", two_cycle()),
        ("golden-mean-plus-a", golden_mean_plus_fixed_point()),
        ("two-fixed-points", two_fixed_points()),
    ]
}
