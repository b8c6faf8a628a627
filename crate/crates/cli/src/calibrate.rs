//! The `calibrate-budget` subcommand: walk a budget grid until every tuner's
//! best configuration stops churning over the trailing ten percent of the
//! budget, then report the first such grid point.

use anyhow::Context;
use mmo_core::{best_change_fraction, calibrate_budget, CalibrationPoint, RunTrace};
use serde::Serialize;
use std::fmt::Write as _;

use crate::cli::CalibrateArgs;
use crate::run::execute_repeats;
use crate::source;
use crate::spec::{
    check_source_flags, usage, Model, Norm, Optimizer, ResolvedSpec, DEFAULT_POP, DEFAULT_SEED,
};

pub const DEFAULT_OPTIMIZERS: [Optimizer; 2] = [Optimizer::Soga, Optimizer::Nsga2];
pub const DEFAULT_REPEATS: usize = 10;
const DEFAULT_MAX: usize = 3000;

#[derive(Serialize)]
struct CalibrateRecord<'a> {
    case: &'a str,
    optimizers: Vec<&'static str>,
    step: usize,
    max: usize,
    repeats: usize,
    pop: usize,
    seed: u64,
}

/// Spec template for one tuner at one grid budget. Population tuners keep
/// their defaulted model resolution (mmo for nsga2, single elsewhere).
fn grid_spec(template: &ResolvedSpec, optimizer: Optimizer, budget: usize) -> ResolvedSpec {
    ResolvedSpec {
        optimizer,
        model: match optimizer {
            Optimizer::Nsga2 | Optimizer::FlashMmo => Model::Mmo,
            _ => Model::Single,
        },
        budget,
        ..template.clone()
    }
}

fn mean_change(family: &[RunTrace], budget: usize) -> f64 {
    family
        .iter()
        .map(|t| best_change_fraction(t, budget))
        .sum::<f64>()
        / family.len() as f64
}

pub fn cmd_calibrate(args: CalibrateArgs) -> anyhow::Result<()> {
    let (source_kind, source_path) = check_source_flags(
        &args.source.dataset,
        &args.source.landscape,
        &args.source.target,
        &args.source.aux,
    )?;
    let optimizers = args
        .optimizers
        .clone()
        .unwrap_or(DEFAULT_OPTIMIZERS.to_vec());
    if optimizers.is_empty() {
        return Err(usage("the optimizer list must not be empty"));
    }
    if args.step == 0 {
        return Err(usage("the budget step must be at least 1"));
    }
    let repeats = args.repeats.unwrap_or(DEFAULT_REPEATS);
    if repeats == 0 {
        return Err(usage("repeats must be at least 1"));
    }
    let pop = args.pop.unwrap_or(DEFAULT_POP);

    let ga = mmo_core::GaParams::new(pop);
    let flash = mmo_core::FlashParams::default();
    let mut template = ResolvedSpec {
        source_kind,
        source_path,
        case: String::new(),
        target: String::new(),
        auxiliary: String::new(),
        model: Model::Single,
        normalization: Norm::Population,
        weight: 1.0,
        optimizer: Optimizer::Soga,
        budget: args.step,
        pop,
        repeats,
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        mutation_rate: ga.mutation_rate,
        crossover_rate: ga.crossover_rate,
        flash_initial_samples: flash.initial_samples,
        flash_eval_budget: flash.eval_budget,
    };
    template
        .ga_params()
        .validate()
        .map_err(|e| usage(e.to_string()))?;
    let source = source::load(&template, &args.source.target, &args.source.aux)?;
    template.fill_source_identity(source.as_measurement());

    let space_size = source.as_measurement().space().size();
    let max = args.max.unwrap_or(DEFAULT_MAX.min(space_size));
    let grid: Vec<usize> = (1..)
        .map(|k| k * args.step)
        .take_while(|&b| b <= max)
        .collect();
    if grid.is_empty() {
        return Err(usage(format!(
            "the budget grid is empty: step {} exceeds the ceiling {max}",
            args.step
        )));
    }
    let uses_population = |o: Optimizer| matches!(o, Optimizer::Nsga2 | Optimizer::Soga);
    if optimizers.iter().any(|&o| uses_population(o)) && grid[0] < pop {
        return Err(usage(format!(
            "the first grid budget {} must cover the population of {pop}",
            grid[0]
        )));
    }

    println!("case: {}", template.case);
    let mut points = Vec::with_capacity(grid.len());
    let mut table: Vec<(usize, &'static str, f64)> = Vec::new();
    for &budget in &grid {
        let mut families = Vec::with_capacity(optimizers.len());
        let mut line = format!("budget {budget}:");
        for &optimizer in &optimizers {
            let spec = grid_spec(&template, optimizer, budget);
            let family = execute_repeats(&spec, &source, args.jobs)?;
            let change = mean_change(&family, budget);
            write!(line, " {}={:.3}", optimizer.as_str(), change).expect("writing to a string");
            table.push((budget, optimizer.as_str(), change));
            families.push(family);
        }
        println!("{line}");
        points.push(CalibrationPoint { budget, families });
    }

    let calibrated = calibrate_budget(&points).context("no usable grid point")?;
    println!("calibrated budget: {calibrated}");

    if let Some(out) = &args.out {
        let record = CalibrateRecord {
            case: &template.case,
            optimizers: optimizers.iter().map(|o| o.as_str()).collect(),
            step: args.step,
            max,
            repeats,
            pop,
            seed: template.seed,
        };
        let mut text = format!(
            "# {}\n",
            serde_json::to_string(&record).expect("plain data serializes")
        );
        text.push_str("budget,optimizer,mean_change_fraction\n");
        for (budget, name, change) in &table {
            writeln!(text, "{budget},{name},{change}").expect("writing to a string");
        }
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}
