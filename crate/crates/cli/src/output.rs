use std::io::Write;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use crate::{Format, GlobalArgs};

/// A report in every format it supports.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
            Format::Csv => match &self.csv {
                Some(c) => c.clone(),
                None => bail!(hyperblocks::Error::InvalidSpec(
                    "this command has no CSV output".into()
                )),
            },
        })
    }
}

/// Prints the report, or writes it to `--out` when `to_file` is set.
pub fn emit(global: &GlobalArgs, report: &Report, to_file: bool) -> Result<()> {
    let body = report.render(global.format)?;
    match (&global.out, to_file) {
        (Some(path), true) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?
        }
        _ => {
            let mut out = std::io::stdout().lock();
            match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}
