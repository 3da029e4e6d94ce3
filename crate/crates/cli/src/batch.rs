//! Batch classification and checking over a file of formulas.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use stutterkit::check::Verdict;
use stutterkit::petri::{PetriNet, PropertyBinding};
use stutterkit::stutter::{classify_sensitivity, SensitivityClass};
use stutterkit::{parse, Error};

use crate::{decide, Caps, Failure, Procedure};

pub(crate) struct Job {
    pub caps: Caps,
    pub net: Option<(PetriNet, PropertyBinding)>,
    pub procedure: Procedure,
}

#[derive(Serialize)]
pub(crate) struct Row {
    pub line: usize,
    pub formula: String,
    pub class: SensitivityClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub stats: RowStats,
}

#[derive(Serialize)]
pub(crate) struct RowStats {
    pub classify_ms: f64,
}

#[derive(Serialize)]
pub(crate) struct Skipped {
    pub line: usize,
    pub formula: String,
    pub error: String,
}

#[derive(Serialize)]
pub(crate) struct Report {
    pub rows: Vec<Row>,
    pub summary: BTreeMap<String, usize>,
    pub failures: Vec<Skipped>,
    pub stats: ReportStats,
}

#[derive(Serialize)]
pub(crate) struct ReportStats {
    pub wall_ms: f64,
}

fn formulas(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn one(line: usize, text: &str, job: &Job) -> Result<Row, Skipped> {
    let skip = |error: String| Skipped {
        line,
        formula: text.to_string(),
        error,
    };
    let f = parse(text).map_err(|e| skip(e.to_string()))?;
    let limits = job.caps.limits();
    let start = Instant::now();
    let class = classify_sensitivity(&f, &limits).map_err(|e| skip(e.to_string()))?;
    let classify_ms = start.elapsed().as_secs_f64() * 1e3;
    let verdict = match &job.net {
        Some((net, b)) => {
            let atoms: Vec<String> = f.atoms().into_iter().collect();
            b.restrict(&atoms).map_err(|e| skip(e.to_string()))?;
            let limits = job.caps.limits();
            Some(decide(job.procedure, net, b, &f, &limits).map_err(|e: Error| skip(e.to_string()))?)
        }
        None => None,
    };
    Ok(Row {
        line,
        formula: text.to_string(),
        class,
        verdict,
        stats: RowStats { classify_ms },
    })
}

pub(crate) fn run(text: &str, job: &Job, jobs: Option<usize>) -> Result<Report, Failure> {
    let start = Instant::now();
    let items = formulas(text);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Failure::usage(e.to_string()))?;
    let results: Vec<Result<Row, Skipped>> =
        pool.install(|| items.par_iter().map(|&(line, f)| one(line, f, job)).collect());

    let mut summary: BTreeMap<String, usize> = SensitivityClass::ALL.iter().map(|c| (c.to_string(), 0)).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => {
                *summary.entry(row.class.to_string()).or_default() += 1;
                rows.push(row);
            }
            Err(s) => failures.push(s),
        }
    }
    Ok(Report {
        rows,
        summary,
        failures,
        stats: ReportStats {
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

impl Report {
    /// Aligned plain-text rendering, one line per formula.
    pub(crate) fn table(&self) -> String {
        let with_net = self.rows.iter().any(|r| r.verdict.is_some());
        let mut lines: Vec<Vec<String>> = Vec::new();
        let mut head = vec!["line".to_string(), "class".to_string()];
        if with_net {
            head.extend(["outcome".to_string(), "trusted".to_string()]);
        }
        head.push("formula".to_string());
        lines.push(head);
        for r in &self.rows {
            let mut cols = vec![r.line.to_string(), r.class.to_string()];
            if let Some(v) = &r.verdict {
                cols.push(v.outcome.to_string());
                cols.push(if v.trusted { "yes" } else { "no" }.to_string());
            } else if with_net {
                cols.extend(["-".to_string(), "-".to_string()]);
            }
            cols.push(r.formula.clone());
            lines.push(cols);
        }
        let ncols = lines[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for l in &lines {
            let mut s = String::new();
            for (c, cell) in l.iter().enumerate() {
                if c + 1 == ncols {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ", w = widths[c]);
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        }
        for f in &self.failures {
            let _ = writeln!(out, "line {}: {} ({})", f.line, f.error, f.formula);
        }
        let counts: Vec<String> = SensitivityClass::ALL
            .iter()
            .map(|c| format!("{c} {}", self.summary.get(&c.to_string()).copied().unwrap_or(0)))
            .collect();
        let _ = writeln!(
            out,
            "{}  ({} formulas, {} failures)",
            counts.join("  "),
            self.rows.len(),
            self.failures.len()
        );
        out
    }
}
