//! The `compare` subcommand: head-to-head verdict of two results files.

use anyhow::{bail, Context};
use mmo_core::{
    compare_groups, comparison_rows_json, speedup, write_comparison_csv, ComparisonRow,
    SampleGroup, Speedup,
};
use std::path::Path;

use crate::cli::CompareArgs;
use crate::results::{self, ResultsFile};
use crate::spec::usage;

fn group(file: &ResultsFile, label: String) -> anyhow::Result<SampleGroup> {
    SampleGroup::new(label, file.best_targets()).context("building a sample group")
}

fn check_label(label: &Option<String>) -> anyhow::Result<()> {
    if let Some(l) = label {
        if l.is_empty() || l.contains([',', '\n']) {
            return Err(usage(format!(
                "label {l:?} must be non-empty and free of commas and line breaks"
            )));
        }
    }
    Ok(())
}

/// Emission formats are chosen by extension so one flag covers both table
/// shapes.
pub fn write_rows(path: &Path, rows: &[ComparisonRow]) -> anyhow::Result<()> {
    let extension = path.extension().and_then(|e| e.to_str());
    let text = match extension {
        Some("csv") => {
            let mut buffer = Vec::new();
            write_comparison_csv(&mut buffer, rows).expect("writing to a vec");
            String::from_utf8(buffer).expect("csv is utf-8")
        }
        Some("json") => {
            let mut text = serde_json::to_string_pretty(&comparison_rows_json(rows))
                .expect("plain data serializes");
            text.push('\n');
            text
        }
        _ => {
            return Err(usage(format!(
                "cannot tell the output format of {}; use a .csv or .json path",
                path.display()
            )))
        }
    };
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_compare(args: CompareArgs) -> anyhow::Result<()> {
    check_label(&args.candidate_label)?;
    check_label(&args.baseline_label)?;

    let candidate = results::read_results(&args.candidate)?;
    let baseline = results::read_results(&args.baseline)?;
    if candidate.spec.case != baseline.spec.case {
        bail!(
            "case mismatch: {} holds {}, {} holds {}",
            args.candidate.display(),
            candidate.spec.case,
            args.baseline.display(),
            baseline.spec.case
        );
    }

    let candidate_label = args
        .candidate_label
        .unwrap_or_else(|| candidate.spec.tuner_label());
    let baseline_label = args
        .baseline_label
        .unwrap_or_else(|| baseline.spec.tuner_label());
    let cand_group = group(&candidate, candidate_label.clone())?;
    let base_group = group(&baseline, baseline_label.clone())?;

    let verdict =
        compare_groups(&cand_group, &base_group, args.paired).context("comparing groups")?;

    let row = ComparisonRow {
        case: candidate.spec.case.clone(),
        candidate: candidate_label,
        baseline: baseline_label,
        candidate_mean: verdict.candidate_mean,
        candidate_stderr: cand_group.stderr(),
        baseline_mean: verdict.baseline_mean,
        baseline_stderr: base_group.stderr(),
        a12: verdict.a12,
        p_value: verdict.p_value,
        outcome: verdict.outcome,
        significant: verdict.significant,
    };

    println!("case: {}", row.case);
    println!(
        "candidate: {} n={} mean={} stderr={}",
        row.candidate,
        cand_group.len(),
        row.candidate_mean,
        row.candidate_stderr
    );
    println!(
        "baseline: {} n={} mean={} stderr={}",
        row.baseline,
        base_group.len(),
        row.baseline_mean,
        row.baseline_stderr
    );
    println!("a12={} p={}", row.a12, row.p_value);
    println!(
        "outcome: {}{}",
        row.outcome,
        if row.significant { " (significant)" } else { "" }
    );

    if args.speedup {
        let (_, cand_traces) = results::read_traces(&results::trace_path(&args.candidate))?;
        let (_, base_traces) = results::read_traces(&results::trace_path(&args.baseline))?;
        match speedup(&base_traces, &cand_traces).context("comparing budget use")? {
            Speedup::Ratio(r) => println!("speedup: {r}"),
            Speedup::NotReached => println!("speedup: not reached"),
        }
    }

    if let Some(out) = &args.out {
        write_rows(out, std::slice::from_ref(&row))?;
    }
    Ok(())
}
