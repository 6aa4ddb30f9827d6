use serde::{Deserialize, Serialize};

/// Resource limits shared by every exponential-time procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of subsets (or subset pairs) explored by determinization.
    pub max_subset_states: usize,
    /// Maximum number of words produced by an exhaustive enumeration.
    pub max_words: usize,
    /// Maximum number of elements in a transition monoid.
    pub max_monoid: usize,
}

impl Limits {
    pub const DEFAULT_SUBSET_STATES: usize = 1 << 16;
    pub const DEFAULT_WORDS: usize = 1_000_000;
    pub const DEFAULT_MONOID: usize = 1 << 16;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subset_states: Self::DEFAULT_SUBSET_STATES,
            max_words: Self::DEFAULT_WORDS,
            max_monoid: Self::DEFAULT_MONOID,
        }
    }
}
