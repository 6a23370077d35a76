//! Output-directory handling and deterministic file writes.

use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::Args;

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Directory for CSV/JSON artifacts
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Skip writing files (print summaries only)
    #[arg(long)]
    pub no_files: bool,
}

pub fn write_text(out: &OutputArgs, name: &str, content: &str) -> Result<()> {
    if out.no_files {
        return Ok(());
    }
    std::fs::create_dir_all(&out.out_dir)
        .with_context(|| format!("creating {}", out.out_dir.display()))?;
    let path = out.out_dir.join(name);
    std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn write_json(out: &OutputArgs, name: &str, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(out, name, &text)
}
