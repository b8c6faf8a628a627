//! The `report` subcommand: merge comparison rows and tally them the way
//! the results tables are read, wins/ties/losses plus a significance census.

use anyhow::{bail, Context};
use mmo_core::{
    comparison_rows_json, significance_census, tabulate, write_comparison_csv, ComparisonRow,
    ComparisonVerdict, Outcome, COMPARISON_CSV_HEADER,
};
use serde_json::json;
use std::path::Path;

use crate::cli::ReportArgs;
use crate::spec::usage;

fn parse_outcome(cell: &str) -> Option<Outcome> {
    match cell {
        "win" => Some(Outcome::Win),
        "tie" => Some(Outcome::Tie),
        "lose" => Some(Outcome::Lose),
        _ => None,
    }
}

fn parse_bool(cell: &str) -> Option<bool> {
    match cell {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

pub fn read_rows(path: &Path) -> anyhow::Result<Vec<ComparisonRow>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    if lines.next() != Some(COMPARISON_CSV_HEADER) {
        bail!("{}: not a comparison row file", path.display());
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let context = || format!("{} line {}: malformed comparison row", path.display(), i + 2);
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 11 {
            bail!("{}", context());
        }
        rows.push(ComparisonRow {
            case: cells[0].to_string(),
            candidate: cells[1].to_string(),
            baseline: cells[2].to_string(),
            candidate_mean: cells[3].parse().with_context(context)?,
            candidate_stderr: cells[4].parse().with_context(context)?,
            baseline_mean: cells[5].parse().with_context(context)?,
            baseline_stderr: cells[6].parse().with_context(context)?,
            a12: cells[7].parse().with_context(context)?,
            p_value: cells[8].parse().with_context(context)?,
            outcome: parse_outcome(cells[9]).with_context(context)?,
            significant: parse_bool(cells[10]).with_context(context)?,
        });
    }
    Ok(rows)
}

pub fn cmd_report(args: ReportArgs) -> anyhow::Result<()> {
    let mut rows = Vec::new();
    for path in &args.rows {
        rows.extend(read_rows(path)?);
    }
    if rows.is_empty() {
        bail!("no comparison rows found");
    }

    let verdicts: Vec<ComparisonVerdict> = rows
        .iter()
        .map(|r| ComparisonVerdict {
            candidate_mean: r.candidate_mean,
            baseline_mean: r.baseline_mean,
            a12: r.a12,
            p_value: r.p_value,
            outcome: r.outcome,
            significant: r.significant,
        })
        .collect();
    let tally = tabulate(&verdicts);
    let (significant_rows, significant_cases) = significance_census(&rows);

    println!(
        "rows: {} wins: {} ties: {} losses: {}",
        tally.total(),
        tally.wins,
        tally.ties,
        tally.losses
    );
    println!("significant: {significant_rows} rows across {significant_cases} cases");

    if let Some(out) = &args.out {
        let extension = out.extension().and_then(|e| e.to_str());
        let text = match extension {
            Some("csv") => {
                let mut buffer = Vec::new();
                write_comparison_csv(&mut buffer, &rows).expect("writing to a vec");
                String::from_utf8(buffer).expect("csv is utf-8")
            }
            Some("json") => {
                let value = json!({
                    "rows": comparison_rows_json(&rows),
                    "tally": tally,
                    "significant_rows": significant_rows,
                    "significant_cases": significant_cases,
                });
                let mut text =
                    serde_json::to_string_pretty(&value).expect("plain data serializes");
                text.push('\n');
                text
            }
            _ => {
                return Err(usage(format!(
                    "cannot tell the output format of {}; use a .csv or .json path",
                    out.display()
                )))
            }
        };
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}
