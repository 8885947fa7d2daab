//! Canonical request descriptions and their cache keys.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

/// Changes whenever cached payloads could differ for the same request.
pub const ARTIFACT_VERSION: &str = concat!("wallx ", env!("CARGO_PKG_VERSION"), " payload-1");

/// A command, the digest of its target description and its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    command: String,
    target_digest: String,
    params: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Request {
    /// The target enters through its contents, so renamed copies share entries.
    pub fn new(command: &str, target_text: &str) -> Self {
        Request { command: command.into(), target_digest: sha256_hex(target_text.as_bytes()), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    /// One `key=value` line per field, parameters in sorted order.
    pub fn canonical(&self) -> String {
        let mut out = format!("command={}\ntarget={}\n", self.command, self.target_digest);
        for (k, v) in &self.params {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    pub fn key(&self, version: &str) -> String {
        sha256_hex(format!("{version}\n{}", self.canonical()).as_bytes())
    }
}
