//! Envelope shared by every CLI report.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "soficlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub status: &'static str,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: impl Into<String>, input: Option<&[u8]>, status: &'static str, result: T) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            input_digest: input.map(digest),
            status,
            result,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn timing_omitted_by_default() {
        let r = Report::new("classify", Some(b"x"), "ok", 1);
        assert!(!r.to_json().contains("timing"));
    }
}
