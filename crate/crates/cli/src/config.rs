use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use droplet_core::Tolerances;

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(config: Option<&Path>, out_dir: Option<PathBuf>) -> anyhow::Result<Self> {
        let tolerances = match config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                parse_tolerances(&text).with_context(|| format!("in {}", p.display()))?
            }
            None => Tolerances::default(),
        };
        Ok(Self { tolerances, out_dir })
    }
}

/// Tolerance overrides as TOML key = value pairs, optionally under a
/// `[tolerances]` table.
pub fn parse_tolerances(text: &str) -> anyhow::Result<Tolerances> {
    let table: toml::Table = text.parse()?;
    let tol: Tolerances = match table.get("tolerances") {
        Some(t) if table.len() == 1 => t.clone().try_into()?,
        _ => table.try_into()?,
    };
    let bad = tol.invalid_fields();
    anyhow::ensure!(bad.is_empty(), "tolerances must be positive and finite: {}", bad.join(", "));
    Ok(tol)
}
