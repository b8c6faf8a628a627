//! The `sweep-weights` subcommand: run the mmo model once per weight and
//! pick the winner. Weight sensitivity is a property of the cumulative
//! normalization variant, so the sweep defaults to global bounds; the
//! population-reset variant needs no weight tuning.

use anyhow::Context;
use mmo_core::{min_weight_budget_proportion, select_best, MeanTieRule, ProportionSweep, SampleGroup};
use serde::Serialize;
use std::fmt::Write as _;

use crate::cli::SweepArgs;
use crate::run::{execute_repeats, rows_from_traces};
use crate::source::{self, Source};
use crate::spec::{
    check_source_flags, usage, Model, Norm, Optimizer, ResolvedSpec, DEFAULT_POP,
    DEFAULT_REPEATS, DEFAULT_SEED,
};

pub const DEFAULT_WEIGHTS: [f64; 8] = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 10.0];

/// Budget shares for the minimum-proportion search.
const PROPORTION_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Audit header of the sweep table.
#[derive(Serialize)]
struct SweepRecord<'a> {
    case: &'a str,
    normalization: Norm,
    weights: &'a [f64],
    budget: usize,
    pop: usize,
    repeats: usize,
    seed: u64,
}

fn weight_spec(template: &ResolvedSpec, weight: f64) -> ResolvedSpec {
    ResolvedSpec {
        weight,
        ..template.clone()
    }
}

/// One sample group per weight: terminal best targets over the repeats.
/// Every weight reuses the same seed series, so weights are compared on
/// paired starting conditions.
fn sweep_at(
    template: &ResolvedSpec,
    source: &Source,
    weights: &[f64],
    budget: usize,
    jobs: usize,
) -> anyhow::Result<Vec<SampleGroup>> {
    let mut groups = Vec::with_capacity(weights.len());
    for &w in weights {
        let spec = ResolvedSpec {
            budget,
            ..weight_spec(template, w)
        };
        let traces = execute_repeats(&spec, source, jobs)?;
        let values = rows_from_traces(&spec, &traces)
            .iter()
            .map(|r| r.best_ft_raw)
            .collect();
        groups.push(SampleGroup::new(w.to_string(), values).context("grouping sweep runs")?);
    }
    Ok(groups)
}

pub fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let (source_kind, source_path) = check_source_flags(
        &args.source.dataset,
        &args.source.landscape,
        &args.source.target,
        &args.source.aux,
    )?;
    let weights = args.weights.clone().unwrap_or(DEFAULT_WEIGHTS.to_vec());
    if weights.is_empty() {
        return Err(usage("the weight list must not be empty"));
    }
    for &w in &weights {
        if !(w.is_finite() && w > 0.0) {
            return Err(usage(format!("weights must be finite and > 0, got {w}")));
        }
    }
    if args.budget == 0 {
        return Err(usage("budget must be at least 1"));
    }
    let pop = args.pop.unwrap_or(DEFAULT_POP);
    let repeats = args.repeats.unwrap_or(DEFAULT_REPEATS);
    if repeats == 0 {
        return Err(usage("repeats must be at least 1"));
    }
    if args.budget < pop {
        return Err(usage(format!(
            "budget {} must cover the population of {pop}",
            args.budget
        )));
    }
    if args.proportions && scaled_budget(args.budget, PROPORTION_GRID[0]) < pop {
        return Err(usage(format!(
            "a tenth of the budget must still cover the population of {pop}; \
             raise --budget or lower --pop"
        )));
    }

    let ga = mmo_core::GaParams::new(pop);
    let mut template = ResolvedSpec {
        source_kind,
        source_path,
        case: String::new(),
        target: String::new(),
        auxiliary: String::new(),
        model: Model::Mmo,
        normalization: args.norm.unwrap_or(Norm::Global),
        weight: weights[0],
        optimizer: Optimizer::Nsga2,
        budget: args.budget,
        pop,
        repeats,
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        mutation_rate: ga.mutation_rate,
        crossover_rate: ga.crossover_rate,
        flash_initial_samples: mmo_core::FlashParams::default().initial_samples,
        flash_eval_budget: mmo_core::FlashParams::default().eval_budget,
    };
    template
        .ga_params()
        .validate()
        .map_err(|e| usage(e.to_string()))?;
    let source = source::load(&template, &args.source.target, &args.source.aux)?;
    template.fill_source_identity(source.as_measurement());

    println!("case: {}", template.case);
    let full = sweep_at(&template, &source, &weights, args.budget, args.jobs)?;
    for g in &full {
        println!("weight {}: mean={} stderr={}", g.label, g.mean(), g.stderr());
    }
    let best = select_best(&full, MeanTieRule::FirstListed).context("ranking weights")?;
    println!("best weight: {}", full[best].label);

    if args.proportions {
        let mut sweeps = Vec::with_capacity(PROPORTION_GRID.len());
        for &p in &PROPORTION_GRID {
            let groups = if p == 1.0 {
                full.clone()
            } else {
                sweep_at(
                    &template,
                    &source,
                    &weights,
                    scaled_budget(args.budget, p),
                    args.jobs,
                )?
            };
            sweeps.push(ProportionSweep {
                proportion: p,
                groups,
            });
        }
        let minimum = min_weight_budget_proportion(&sweeps, MeanTieRule::FirstListed)
            .context("searching the proportion grid")?;
        println!("minimal stable budget proportion: {minimum}");
    }

    if let Some(out) = &args.out {
        let record = SweepRecord {
            case: &template.case,
            normalization: template.normalization,
            weights: &weights,
            budget: args.budget,
            pop,
            repeats,
            seed: template.seed,
        };
        let mut text = format!(
            "# {}\n",
            serde_json::to_string(&record).expect("plain data serializes")
        );
        text.push_str("weight,mean,stderr,runs\n");
        for g in &full {
            writeln!(text, "{},{},{},{}", g.label, g.mean(), g.stderr(), g.len())
                .expect("writing to a string");
        }
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn scaled_budget(budget: usize, proportion: f64) -> usize {
    ((budget as f64 * proportion).round() as usize).max(1)
}
