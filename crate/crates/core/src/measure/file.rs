use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::{parse_rational, HiddenMarkovMeasure, Rational, RationalMarkovChain};
use crate::error::{Error, Result};

pub const MEASURE_FORMAT: &str = "soficlab-measure-v1";

pub(crate) fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub states: Vec<String>,
    pub transitions: Vec<Vec<String>>,
}

/// JSON form of a chain, optionally labelled. Rationals are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDocument {
    pub format: String,
    pub chain: ChainDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_weights: Option<Vec<String>>,
}

impl MeasureDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: MeasureDocument = serde_json::from_str(text)
            .map_err(|e| Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))?;
        if doc.format != MEASURE_FORMAT {
            return Err(Error::Malformed(format!("unknown measure format `{}`", doc.format)));
        }
        Ok(doc)
    }

    pub fn into_measure(self) -> Result<HiddenMarkovMeasure> {
        let transitions = self
            .chain
            .transitions
            .iter()
            .map(|row| row.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let weights = self
            .component_weights
            .as_ref()
            .map(|w| w.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let chain = RationalMarkovChain::new(&self.chain.states, transitions, weights)?;
        match self.labels {
            None => Ok(HiddenMarkovMeasure::from_chain(chain)),
            Some(map) => {
                if let Some(extra) = map.keys().find(|k| !self.chain.states.contains(k)) {
                    return Err(Error::UnknownState(extra.clone()));
                }
                let labels = self
                    .chain
                    .states
                    .iter()
                    .map(|s| map.get(s).cloned().ok_or_else(|| Error::Malformed(format!("state `{s}` has no label"))))
                    .collect::<Result<Vec<_>>>()?;
                HiddenMarkovMeasure::new(chain, &labels)
            }
        }
    }

    pub fn from_measure(m: &HiddenMarkovMeasure) -> Self {
        let c = m.chain();
        let labels = (!m.is_plain_chain() || (0..c.len()).any(|s| m.alphabet()[m.label(s)] != c.states()[s]))
            .then(|| (0..c.len()).map(|s| (c.states()[s].clone(), m.alphabet()[m.label(s)].clone())).collect());
        let weights =
            (c.component_weights().len() > 1).then(|| c.component_weights().iter().map(ToString::to_string).collect());
        MeasureDocument {
            format: MEASURE_FORMAT.to_string(),
            chain: ChainDoc {
                states: c.states().to_vec(),
                transitions: c.transitions().iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
            },
            labels,
            component_weights: weights,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure document serializes")
    }
}
