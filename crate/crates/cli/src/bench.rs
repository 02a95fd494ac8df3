use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use cscc_core::RunConfig;

use crate::run::{load, run, Format, RunReport};

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub model: String,
    pub config: String,
    /// `complete`, `DNF` or `error`.
    pub outcome: &'static str,
    pub error: Option<String>,
    pub report: Option<RunReport>,
}

/// Named configurations: plain lock-step, saturation, and saturation on
/// `threads` workers for each entry of `threads`.
pub fn configurations(threads: &[usize], timeout: Option<Duration>) -> Vec<(String, RunConfig)> {
    let base = RunConfig { timeout, record_relation: false, ..RunConfig::default() };
    let mut out = vec![
        ("lock-step".to_string(), RunConfig { saturation: false, ..base.clone() }),
        ("saturation".to_string(), base.clone()),
    ];
    for &t in threads {
        out.push((format!("parallel-{t}"), RunConfig { threads: t, ..base.clone() }));
    }
    out
}

/// Model files of `dir` in name order.
pub fn model_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("bnet" | "edges")))
        .collect();
    files.sort();
    Ok(files)
}

pub fn bench(files: &[PathBuf], configs: &[(String, RunConfig)]) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for path in files {
        let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        let loaded = load(path, Format::guess(path));
        for (config, cfg) in configs {
            let row = match &loaded {
                Err(e) => BenchRow {
                    model: name.clone(),
                    config: config.clone(),
                    outcome: "error",
                    error: Some(e.to_string()),
                    report: None,
                },
                Ok(loaded) => match run(loaded, cfg, false, false) {
                    Ok(out) => BenchRow {
                        model: name.clone(),
                        config: config.clone(),
                        outcome: if out.report.is_complete() { "complete" } else { "DNF" },
                        error: None,
                        report: Some(out.report),
                    },
                    Err(e) => BenchRow {
                        model: name.clone(),
                        config: config.clone(),
                        outcome: "error",
                        error: Some(e.to_string()),
                        report: None,
                    },
                },
            };
            rows.push(row);
        }
    }
    rows
}

pub fn table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:<24} {:<12} {:<9} {:>12} {:>12} {:>10}\n", "model", "config", "outcome", "#SCC", "steps", "seconds");
    for row in rows {
        let (range, steps, secs) = match &row.report {
            Some(r) => (
                r.nontrivial_sccs.as_ref().map_or("-".to_string(), |s| format!("{}-{}", s.min, s.max)),
                r.symbolic_steps.to_string(),
                format!("{:.3}", r.wall_time_seconds),
            ),
            None => ("-".into(), "-".into(), "-".into()),
        };
        out.push_str(&format!(
            "{:<24} {:<12} {:<9} {:>12} {:>12} {:>10}\n",
            row.model, row.config, row.outcome, range, steps, secs
        ));
    }
    out
}
