//! Report container and the three output renderings.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, headers: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows
            .push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

/// Everything a subcommand produces. `config` and `body` determine the
/// content hash; thread count, output location and timestamp do not.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    /// Canonical command line, e.g. `prob-table --q 2`.
    pub invocation: String,
    pub config: Value,
    pub title: String,
    pub summary: Vec<(String, String)>,
    pub tables: Vec<Table>,
    /// Index of the table written by `--csv`; `None` for non-tabular bodies.
    pub csv_table: Option<usize>,
    /// JSON body; must be an object.
    pub body: Value,
    /// `Some(false)` when a verification inside the command failed.
    pub passed: Option<bool>,
    /// Human-readable diff for the first failed check.
    pub failure: Option<String>,
}

/// Metadata that varies between runs of the same configuration.
#[derive(Debug, Clone)]
pub struct RunInfo {
    pub threads: usize,
    pub timestamp: String,
}

impl Report {
    pub fn new(command: &str, invocation: String, config: Value, title: &str, body: Value) -> Self {
        Report {
            command: command.to_string(),
            invocation,
            config,
            title: title.to_string(),
            summary: Vec::new(),
            tables: Vec::new(),
            csv_table: None,
            body,
            passed: None,
            failure: None,
        }
    }

    pub fn summary(mut self, key: &str, value: impl ToString) -> Self {
        self.summary.push((key.to_string(), value.to_string()));
        self
    }

    pub fn table(mut self, t: Table, csv: bool) -> Self {
        if csv {
            self.csv_table = Some(self.tables.len());
        }
        self.tables.push(t);
        self
    }

    /// sha256 over the compact JSON of command, config and body. serde_json
    /// maps keep keys sorted, so the encoding is canonical.
    pub fn content_hash(&self) -> String {
        let canonical = json!({
            "command": self.command,
            "config": self.config,
            "body": self.body,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        format!("sha256:{}", hex::encode(digest))
    }

    pub fn render(&self, format: Format, info: &RunInfo) -> Result<String, CliError> {
        match format {
            Format::Markdown => Ok(self.render_markdown()),
            Format::Json => self.render_json(info),
            Format::Csv => self.render_csv(),
        }
    }

    pub fn render_markdown(&self) -> String {
        let mut out = format!("# {}\n\n", self.title);
        out.push_str(&format!("- command: `gqm {}`\n", self.invocation));
        for (k, v) in &self.summary {
            out.push_str(&format!("- {k}: {v}\n"));
        }
        for t in &self.tables {
            out.push_str(&format!("\n## {}\n\n", t.title));
            let headers: Vec<String> = t.headers.iter().map(|c| c.replace('|', "\\|")).collect();
            out.push_str(&format!("| {} |\n", headers.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(t.headers.len())));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
        }
        out.push_str(&format!("\ncontent-hash: {}\n", self.content_hash()));
        out
    }

    pub fn render_json(&self, info: &RunInfo) -> Result<String, CliError> {
        let Value::Object(body) = &self.body else {
            return Err(CliError::Internal("report body is not an object".into()));
        };
        let mut out: Map<String, Value> = body.clone();
        out.insert(
            "metadata".into(),
            json!({
                "tool": "gqm",
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
                "invocation": format!("gqm {}", self.invocation),
                "config": self.config,
                "threads": info.threads,
                "timestamp": info.timestamp,
                "content_hash": self.content_hash(),
            }),
        );
        let mut s = serde_json::to_string_pretty(&Value::Object(out))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn render_csv(&self) -> Result<String, CliError> {
        let t = self.csv_table.map(|i| &self.tables[i]).ok_or_else(|| {
            CliError::Usage(format!(
                "{} has no tabular body; use --json or --markdown",
                self.command
            ))
        })?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record(&t.headers).map_err(io)?;
        for row in &t.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new("rows", &["a", "b"]);
        t.push(["1/2", "x"]);
        Report::new(
            "demo",
            "demo --q 2".into(),
            json!({"q": 2}),
            "Demo",
            json!({"q": 2, "rows": [1]}),
        )
        .summary("count", 1)
        .table(t, true)
    }

    #[test]
    fn hash_ignores_run_info() {
        let r = sample();
        let a = RunInfo {
            threads: 1,
            timestamp: "t1".into(),
        };
        let b = RunInfo {
            threads: 8,
            timestamp: "t2".into(),
        };
        let ja: Value = serde_json::from_str(&r.render_json(&a).unwrap()).unwrap();
        let jb: Value = serde_json::from_str(&r.render_json(&b).unwrap()).unwrap();
        assert_eq!(
            ja["metadata"]["content_hash"],
            jb["metadata"]["content_hash"]
        );
        assert_ne!(ja["metadata"]["timestamp"], jb["metadata"]["timestamp"]);
        assert!(r.content_hash().starts_with("sha256:"));
    }

    #[test]
    fn hash_tracks_config() {
        let a = sample();
        let mut b = sample();
        b.config = json!({"q": 3});
        assert_ne!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn renderings() {
        let r = sample();
        let md = r.render_markdown();
        assert!(md.starts_with("# Demo\n\n- command: `gqm demo --q 2`\n- count: 1\n"));
        assert!(md.contains("| a | b |\n|---|---|\n| 1/2 | x |\n"));
        assert_eq!(r.render_csv().unwrap(), "a,b\n1/2,x\n");
        let mut no_table = sample();
        no_table.csv_table = None;
        assert!(matches!(no_table.render_csv(), Err(CliError::Usage(_))));
    }
}
