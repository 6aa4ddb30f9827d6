//! JSON presentation documents and higher-block recoding of forbidden-word input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, Recoding};

pub const GRAPH_FORMAT: &str = "soficlab-presentation-v1";
pub const TMC_FORMAT: &str = "soficlab-tmc-v1";
pub const SFT_FORMAT: &str = "soficlab-sft-v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub label: String,
}

/// A forbidden word, either as one string or as an explicit list of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordDoc {
    Text(String),
    Symbols(Vec<String>),
}

/// The three accepted presentation documents, discriminated by `format`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format")]
pub enum PresentationDocument {
    #[serde(rename = "soficlab-presentation-v1")]
    Graph { alphabet: Vec<String>, states: Vec<String>, edges: Vec<EdgeDoc> },
    #[serde(rename = "soficlab-tmc-v1")]
    Tmc { alphabet: Vec<String>, allowed_2blocks: Vec<[String; 2]> },
    #[serde(rename = "soficlab-sft-v1")]
    Sft { alphabet: Vec<String>, forbidden_words: Vec<WordDoc> },
}

impl PresentationDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn into_presentation(self) -> Result<Presentation> {
        match self {
            PresentationDocument::Graph { alphabet, states, edges } => {
                let edges: Vec<(String, String, String)> = edges.into_iter().map(|e| (e.from, e.to, e.label)).collect();
                Presentation::new(&alphabet, &states, &edges)
            }
            PresentationDocument::Tmc { alphabet, allowed_2blocks } => {
                let pairs: Vec<(String, String)> = allowed_2blocks.into_iter().map(|[a, b]| (a, b)).collect();
                Presentation::vertex_shift(&alphabet, &pairs)
            }
            PresentationDocument::Sft { alphabet, forbidden_words } => {
                let words =
                    forbidden_words.into_iter().map(|w| split_word(&alphabet, w)).collect::<Result<Vec<_>>>()?;
                recode_to_tmc(&alphabet, &words, &Limits::default())
            }
        }
    }

    /// Graph document describing `p` (state and symbol names preserved).
    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationDocument::Graph {
            alphabet: p.alphabet().to_vec(),
            states: p.states().to_vec(),
            edges: p
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    from: p.states()[e.from].clone(),
                    to: p.states()[e.to].clone(),
                    label: p.alphabet()[e.label].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

fn split_word(alphabet: &[String], w: WordDoc) -> Result<Vec<String>> {
    match w {
        WordDoc::Symbols(v) => Ok(v),
        WordDoc::Text(s) => {
            if alphabet.iter().all(|a| a.chars().count() == 1) {
                Ok(s.chars().filter(|c| !c.is_whitespace()).map(String::from).collect())
            } else {
                Ok(s.split_whitespace().map(String::from).collect())
            }
        }
    }
}

/// Parses any accepted document into a validated, untrimmed presentation.
pub fn load_presentation(document: &str) -> Result<Presentation> {
    PresentationDocument::parse(document)?.into_presentation()
}

/// Higher-block recoding of the shift avoiding `forbidden` into a vertex shift on allowed k-blocks,
/// where `k + 1` is the longest forbidden word (and `k ≥ 1`).
pub fn recode_to_tmc(alphabet: &[String], forbidden: &[Vec<String>], limits: &Limits) -> Result<Presentation> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut sorted: Vec<String> = alphabet.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateSymbol(w[0].clone()));
    }
    let index: BTreeMap<&str, usize> = sorted.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut bad: Vec<Vec<usize>> = Vec::with_capacity(forbidden.len());
    for w in forbidden {
        if w.is_empty() {
            return Err(Error::Malformed("empty forbidden word".into()));
        }
        bad.push(
            w.iter()
                .map(|s| index.get(s.as_str()).copied().ok_or_else(|| Error::UnknownSymbol(s.clone())))
                .collect::<Result<_>>()?,
        );
    }
    let k = bad.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1).max(1);
    let n = sorted.len();
    if (n as f64).powi(k as i32 + 1) > limits.max_words as f64 {
        return Err(Error::cap(format!("{n}^{} candidate blocks", k + 1), limits.max_words as u64));
    }
    let avoids = |block: &[usize]| !bad.iter().any(|f| block.windows(f.len()).any(|win| win == f.as_slice()));

    let mut blocks: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        blocks = blocks
            .into_iter()
            .flat_map(|b| {
                (0..n).map(move |a| {
                    let mut c = b.clone();
                    c.push(a);
                    c
                })
            })
            .filter(|b| avoids(b))
            .collect();
    }
    if blocks.is_empty() {
        return Err(Error::EmptyShift);
    }
    let single = sorted.iter().all(|s| s.chars().count() == 1);
    let name = |b: &[usize]| {
        let parts: Vec<&str> = b.iter().map(|&i| sorted[i].as_str()).collect();
        parts.join(if single { "" } else { "." })
    };
    let names: Vec<String> = blocks.iter().map(|b| name(b)).collect();
    let mut edges = Vec::new();
    for b in &blocks {
        for a in 0..n {
            let mut ext = b.clone();
            ext.push(a);
            if avoids(&ext) {
                let target = name(&ext[1..]);
                edges.push((name(b), target.clone(), target));
            }
        }
    }
    let recoding = Recoding {
        block_length: k,
        original_alphabet: sorted.clone(),
        blocks: blocks.iter().map(|b| (name(b), b.iter().map(|&i| sorted[i].clone()).collect())).collect(),
    };
    Ok(Presentation::new(&names, &names, &edges)?.with_recoding(recoding))
}
