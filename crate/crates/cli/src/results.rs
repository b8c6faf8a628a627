//! Results and trace file formats.
//!
//! Both are CSV with a `# {json}` first line carrying the resolved spec, so
//! a file is self-describing. Floats are written in shortest round-trip
//! form; identical experiments therefore produce byte-identical files, and
//! reading a file back recovers the exact written values.

use anyhow::{bail, Context};
use mmo_core::{Configuration, RunTrace, TracePoint};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::spec::ResolvedSpec;

pub const RESULTS_COLUMNS: &str =
    "run_index,seed,distinct_measurements,best_ft_raw,best_fa_raw,best_config";
pub const TRACE_COLUMNS: &str = "run_index,measurements,best_ft_raw,best_config";

/// Terminal outcome of one run. Objective values are oriented raw values
/// (maximized measurements carry a flipped sign), matching what the tuners
/// minimize.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub run_index: usize,
    pub seed: u64,
    pub distinct_measurements: usize,
    pub best_ft_raw: f64,
    pub best_fa_raw: f64,
    pub best_config: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ResultsFile {
    pub spec: ResolvedSpec,
    pub rows: Vec<ResultRow>,
}

impl ResultsFile {
    pub fn best_targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.best_ft_raw).collect()
    }
}

fn join_config(levels: &[usize]) -> String {
    levels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_config(cell: &str) -> anyhow::Result<Vec<usize>> {
    cell.split(';')
        .map(|p| p.parse::<usize>().context("malformed config cell"))
        .collect()
}

fn header_line(spec: &ResolvedSpec) -> String {
    format!(
        "# {}",
        serde_json::to_string(spec).expect("plain data serializes")
    )
}

fn parse_header(path: &Path, line: Option<&str>) -> anyhow::Result<ResolvedSpec> {
    let line = line.with_context(|| format!("{}: empty file", path.display()))?;
    let json = line
        .strip_prefix("# ")
        .with_context(|| format!("{}: missing `# {{spec}}` header line", path.display()))?;
    serde_json::from_str(json)
        .with_context(|| format!("{}: malformed spec header", path.display()))
}

pub fn write_results(
    path: &Path,
    spec: &ResolvedSpec,
    rows: &[ResultRow],
) -> anyhow::Result<()> {
    let mut text = header_line(spec);
    text.push('\n');
    text.push_str(RESULTS_COLUMNS);
    text.push('\n');
    for r in rows {
        writeln!(
            text,
            "{},{},{},{},{},{}",
            r.run_index,
            r.seed,
            r.distinct_measurements,
            r.best_ft_raw,
            r.best_fa_raw,
            join_config(&r.best_config)
        )
        .expect("writing to a string");
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_results(path: &Path) -> anyhow::Result<ResultsFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let spec = parse_header(path, lines.next())?;
    let columns = lines.next();
    if columns != Some(RESULTS_COLUMNS) {
        bail!("{}: unexpected results columns", path.display());
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let context = || format!("{} line {}: malformed results row", path.display(), i + 3);
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 6 {
            bail!("{}", context());
        }
        rows.push(ResultRow {
            run_index: cells[0].parse().with_context(context)?,
            seed: cells[1].parse().with_context(context)?,
            distinct_measurements: cells[2].parse().with_context(context)?,
            best_ft_raw: cells[3].parse().with_context(context)?,
            best_fa_raw: cells[4].parse().with_context(context)?,
            best_config: parse_config(cells[5]).with_context(context)?,
        });
    }
    if rows.is_empty() {
        bail!("{}: no result rows", path.display());
    }
    Ok(ResultsFile { spec, rows })
}

/// Trace file that belongs to a results file: `runs.csv` -> `runs.trace.csv`.
pub fn trace_path(results: &Path) -> PathBuf {
    let stem = results
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    results.with_file_name(format!("{stem}.trace.csv"))
}

pub fn write_traces(
    path: &Path,
    spec: &ResolvedSpec,
    traces: &[RunTrace],
) -> anyhow::Result<()> {
    let mut text = header_line(spec);
    text.push('\n');
    text.push_str(TRACE_COLUMNS);
    text.push('\n');
    for (run_index, trace) in traces.iter().enumerate() {
        for p in trace.points() {
            writeln!(
                text,
                "{},{},{},{}",
                run_index,
                p.measurements,
                p.best_target,
                join_config(p.best_config.levels())
            )
            .expect("writing to a string");
        }
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Read a trace file back into one [`RunTrace`] per run, in run order. Used
/// by budget-use comparisons; the final-best annotation is not stored here,
/// so the rebuilt traces answer trajectory queries only.
pub fn read_traces(path: &Path) -> anyhow::Result<(ResolvedSpec, Vec<RunTrace>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let spec = parse_header(path, lines.next())?;
    let columns = lines.next();
    if columns != Some(TRACE_COLUMNS) {
        bail!("{}: unexpected trace columns", path.display());
    }
    let mut runs: Vec<Vec<TracePoint>> = Vec::new();
    for (i, line) in lines.enumerate() {
        let context = || format!("{} line {}: malformed trace row", path.display(), i + 3);
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 {
            bail!("{}", context());
        }
        let run_index: usize = cells[0].parse().with_context(context)?;
        if run_index == runs.len() {
            runs.push(Vec::new());
        } else if run_index + 1 != runs.len() {
            bail!(
                "{} line {}: run indices must be contiguous and grouped",
                path.display(),
                i + 3
            );
        }
        runs.last_mut().expect("just ensured").push(TracePoint {
            measurements: cells[1].parse().with_context(context)?,
            best_target: cells[2].parse().with_context(context)?,
            best_config: Configuration::new(parse_config(cells[3]).with_context(context)?),
        });
    }
    if runs.is_empty() {
        bail!("{}: no trace rows", path.display());
    }
    let traces = runs
        .into_iter()
        .map(|points| RunTrace::from_points(points, None))
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("{}: inconsistent trace", path.display()))?;
    Ok((spec, traces))
}
