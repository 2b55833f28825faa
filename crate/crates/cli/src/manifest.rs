//! Reproducibility manifest: every invocation records what ran, on which
//! normalized channel, with which inputs (content-addressed) and seed, so
//! re-running the same command yields byte-identical artifacts.

use std::env;
use std::path::Path;

use aed_core::ChannelParams;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// A content digest of one input file.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance record emitted alongside every result.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub argv: Vec<String>,
    /// Normalized `q,n,a,h,t` tuple, when the command takes a channel.
    pub params: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    /// Destination of the result when `--out` was given.
    pub output: Option<String>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        RunManifest {
            tool: "aed",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            argv: env::args().collect(),
            params: None,
            mode: None,
            seed: None,
            inputs: Vec::new(),
            output: None,
        }
    }

    pub fn with_params(mut self, p: &ChannelParams) -> Self {
        self.params = Some(p.tuple_string());
        self.mode = Some(p.mode().as_str().to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
    }
}
