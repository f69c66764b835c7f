//! CSV emission and ingestion for experiment results.
//!
//! Raw schema:       `strategy,seed,labeled_count,test_accuracy,selection_seconds`
//! Aggregate schema: `strategy,labeled_count,mean_accuracy,p5,p95`
//!
//! Reals print with 6 decimal places. Raw rows sort by
//! (strategy, seed, labeled_count); aggregate rows by (strategy,
//! labeled_count). Everything except the selection_seconds column is
//! deterministic for a fixed config and seed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::run::{AggregateCurve, CurvePoint, RunResult};

pub const RAW_HEADER: &str = "strategy,seed,labeled_count,test_accuracy,selection_seconds";
pub const AGGREGATE_HEADER: &str = "strategy,labeled_count,mean_accuracy,p5,p95";

/// The raw CSV document, rows sorted by (strategy, seed, labeled_count).
pub fn render_raw_csv(runs: &[RunResult]) -> Result<String> {
    if runs.is_empty() {
        return Err(Error::InvalidConfig("no runs to write".into()));
    }
    let mut rows: Vec<(&str, u64, usize, f64, f64)> = Vec::new();
    for run in runs {
        for (point, &secs) in run.curve.iter().zip(&run.selection_seconds) {
            rows.push((
                &run.strategy,
                run.seed,
                point.labeled_count,
                point.test_accuracy,
                secs,
            ));
        }
    }
    rows.sort_by(|a, b| a.0.cmp(b.0).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2)));

    let mut out = String::new();
    out.push_str(RAW_HEADER);
    out.push('\n');
    for (strategy, seed, labeled, acc, secs) in rows {
        out.push_str(&format!("{strategy},{seed},{labeled},{acc:.6},{secs:.6}\n"));
    }
    Ok(out)
}

/// Writes per-run rows, sorted by (strategy, seed, labeled_count).
pub fn write_raw_csv(runs: &[RunResult], path: &Path) -> Result<()> {
    let text = render_raw_csv(runs)?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// The aggregate CSV document, rows sorted by (strategy, labeled_count).
pub fn render_aggregate_csv(curves: &[AggregateCurve]) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidConfig("no aggregates to write".into()));
    }
    let mut rows: Vec<(&str, usize, f64, f64, f64)> = Vec::new();
    for curve in curves {
        for p in &curve.points {
            rows.push((
                &curve.strategy,
                p.labeled_count,
                p.mean_accuracy,
                p.p5,
                p.p95,
            ));
        }
    }
    rows.sort_by(|a, b| a.0.cmp(b.0).then_with(|| a.1.cmp(&b.1)));

    let mut out = String::new();
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for (strategy, labeled, mean, p5, p95) in rows {
        out.push_str(&format!("{strategy},{labeled},{mean:.6},{p5:.6},{p95:.6}\n"));
    }
    Ok(out)
}

/// Writes aggregate rows, sorted by (strategy, labeled_count).
pub fn write_aggregate_csv(curves: &[AggregateCurve], path: &Path) -> Result<()> {
    let text = render_aggregate_csv(curves)?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Reads a raw CSV back into runs grouped by (strategy, seed), curve points
/// in ascending labeled_count order.
pub fn read_raw_csv(path: &Path) -> Result<Vec<RunResult>> {
    use std::collections::BTreeMap;

    let mut reader = csv::ReaderBuilder::new().from_path(path)?;
    {
        let headers = reader.headers()?;
        let expect: Vec<&str> = RAW_HEADER.split(',').collect();
        let got: Vec<&str> = headers.iter().collect();
        if got != expect {
            return Err(Error::InvalidConfig(format!(
                "raw CSV header {got:?} does not match {expect:?}"
            )));
        }
    }

    let mut groups: BTreeMap<(String, u64), Vec<(usize, f64, f64)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize, name: &str| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::CsvField {
                field: name.to_string(),
                line,
                detail: "missing".into(),
            })
        };
        let parse_err = |name: &str, value: &str| Error::CsvField {
            field: name.to_string(),
            line,
            detail: format!("cannot parse {value:?}"),
        };
        let strategy = field(0, "strategy")?.to_string();
        let seed: u64 = field(1, "seed")?
            .parse()
            .map_err(|_| parse_err("seed", field(1, "seed").unwrap_or("")))?;
        let labeled: usize = field(2, "labeled_count")?
            .parse()
            .map_err(|_| parse_err("labeled_count", field(2, "labeled_count").unwrap_or("")))?;
        let acc: f64 = field(3, "test_accuracy")?
            .parse()
            .map_err(|_| parse_err("test_accuracy", field(3, "test_accuracy").unwrap_or("")))?;
        let secs: f64 = field(4, "selection_seconds")?
            .parse()
            .map_err(|_| parse_err("selection_seconds", field(4, "selection_seconds").unwrap_or("")))?;
        groups
            .entry((strategy, seed))
            .or_default()
            .push((labeled, acc, secs));
    }

    Ok(groups
        .into_iter()
        .map(|((strategy, seed), mut rows)| {
            rows.sort_by_key(|r| r.0);
            RunResult {
                strategy,
                seed,
                curve: rows
                    .iter()
                    .map(|&(labeled_count, test_accuracy, _)| CurvePoint {
                        labeled_count,
                        test_accuracy,
                    })
                    .collect(),
                selection_seconds: rows.iter().map(|r| r.2).collect(),
            }
        })
        .collect())
}
