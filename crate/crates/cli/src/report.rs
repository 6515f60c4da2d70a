//! Report envelope and output rendering.
//!
//! Every run embeds the tool version and the experiment configuration.
//! Worker count and output destination are deliberately not part of the
//! embedded config: reports must be byte-identical across worker counts.

use crate::{Cli, Format};
use serde::Serialize;
use std::io::Write;
use std::time::Duration;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// What a subcommand hands back: one JSON tree plus a flat CSV projection.
pub struct CmdOutput {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub rows: serde_json::Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp_unix_s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u64>,
    all_checks_passed: bool,
    checks: &'a [Check],
    rows: &'a serde_json::Value,
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn render(cli: &Cli, out: CmdOutput, elapsed: Duration) -> String {
    let (timestamp_unix_s, runtime_ms) = if cli.deterministic {
        (None, None)
    } else {
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .ok();
        (ts, Some(elapsed.as_millis() as u64))
    };
    let all_checks_passed = out.checks.iter().all(|c| c.passed);

    match cli.format {
        Format::Json => {
            let env = Envelope {
                tool: "ffstats",
                version: VERSION,
                command: out.command,
                config: &out.config,
                timestamp_unix_s,
                runtime_ms,
                all_checks_passed,
                checks: &out.checks,
                rows: &out.rows,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("report serialization");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!(
                "# tool=ffstats version={VERSION} command={}\n",
                out.command
            ));
            s.push_str(&format!("# config={}\n", out.config));
            if let Some(ts) = timestamp_unix_s {
                s.push_str(&format!("# timestamp_unix_s={ts}\n"));
            }
            if let Some(ms) = runtime_ms {
                s.push_str(&format!("# runtime_ms={ms}\n"));
            }
            for c in &out.checks {
                s.push_str(&format!(
                    "# check {}={} {}\n",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.detail
                ));
            }
            s.push_str(&out.csv_header.join(","));
            s.push('\n');
            for row in &out.csv_rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
    }
}

pub fn emit(cli: &Cli, rendered: String) -> std::io::Result<()> {
    match &cli.out {
        None => {
            std::io::stdout().write_all(rendered.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, rendered.as_bytes())?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

/// Formats an optional value, empty when absent (CSV convention).
pub fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}
