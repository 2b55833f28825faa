//! Result emission. Every result has a text rendering and a JSON payload;
//! JSON goes out wrapped in a versioned envelope that embeds the run
//! manifest. `--out` redirects the body to a file and adds a
//! `<file>.manifest.json` sidecar. Nothing time-dependent is ever written,
//! so identical invocations produce identical bytes.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use crate::manifest::RunManifest;

/// Output format. Sweeps render `text` as CSV; everything else renders
/// plain lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A finished result: human-readable lines plus the structured payload.
pub struct Emission {
    pub text: String,
    pub json: serde_json::Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    manifest: &'a RunManifest,
    result: &'a serde_json::Value,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Render and deliver the result: stdout by default, the `--out` file (with
/// a manifest sidecar) otherwise.
pub fn emit(
    out: Option<&Path>,
    format: Format,
    mut manifest: RunManifest,
    emission: &Emission,
) -> Result<()> {
    manifest.output = out.map(|p| p.display().to_string());
    let body = match format {
        Format::Text => {
            let mut text = emission.text.clone();
            if !text.is_empty() && !text.ends_with('\n') {
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let envelope =
                Envelope { schema: SCHEMA_VERSION, manifest: &manifest, result: &emission.json };
            let mut body = serde_json::to_string_pretty(&envelope)?;
            body.push('\n');
            body
        }
    };
    match out {
        None => {
            print!("{body}");
        }
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            let sidecar = path.with_file_name(format!(
                "{}.manifest.json",
                path.file_name().map(|f| f.to_string_lossy()).unwrap_or_default()
            ));
            let mut manifest_body = serde_json::to_string_pretty(&manifest)?;
            manifest_body.push('\n');
            fs::write(&sidecar, manifest_body)
                .with_context(|| format!("writing {}", sidecar.display()))?;
        }
    }
    Ok(())
}
