//! The `run` subcommand and the repeat executor shared with the sweep and
//! calibration commands.

use anyhow::Context;
use mmo_core::{
    flash, flash_mmo, hill_climb_restart, mmo_on_nsga2, random_search, simulated_annealing,
    soga, InnerSearchParams, RunTrace, SaParams, SearchError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cli::RunArgs;
use crate::results::{self, ResultRow};
use crate::source::{self, Source};
use crate::spec::{resolve_run, usage, Optimizer, ResolvedSpec};

/// Search configuration errors are spec problems (exit 2); everything else
/// that goes wrong mid-run is a data error (exit 1).
fn classify(err: SearchError) -> anyhow::Error {
    match err {
        SearchError::Config(msg) => usage(msg),
        other => anyhow::Error::new(other).context("run failed"),
    }
}

fn execute_single(
    spec: &ResolvedSpec,
    source: &Source,
    seed: u64,
) -> Result<RunTrace, SearchError> {
    let m = source.as_measurement();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec.optimizer {
        Optimizer::Rs => random_search(m, spec.budget, &mut rng),
        Optimizer::Shc => hill_climb_restart(m, spec.budget, None, &mut rng),
        Optimizer::Soga => soga(m, &spec.ga_params(), spec.budget, &mut rng),
        Optimizer::Sa => {
            simulated_annealing(m, &SaParams::default(), spec.budget, &mut rng)
        }
        Optimizer::Nsga2 => mmo_on_nsga2(
            m,
            &spec.optimization_model(),
            &spec.ga_params(),
            spec.budget,
            &mut rng,
        )
        .map(|r| r.trace),
        Optimizer::Flash => flash(m, &spec.flash_params(), spec.budget, &mut rng),
        Optimizer::FlashMmo => flash_mmo(
            m,
            &spec.flash_params(),
            &InnerSearchParams::default(),
            spec.budget,
            &mut rng,
        ),
    }
}

/// Execute `spec.repeats` independent runs with seeds `spec.seed + i`.
/// Runs are isolated (own RNG, own budget ledger), so parallel execution
/// cannot change any result; traces come back in run-index order either way.
pub fn execute_repeats(
    spec: &ResolvedSpec,
    source: &Source,
    jobs: usize,
) -> anyhow::Result<Vec<RunTrace>> {
    let seeds: Vec<u64> = (0..spec.repeats as u64).map(|i| spec.seed + i).collect();
    let traces: Result<Vec<RunTrace>, SearchError> = if jobs <= 1 {
        seeds
            .iter()
            .map(|&s| execute_single(spec, source, s))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building the worker pool")?;
        pool.install(|| {
            seeds
                .par_iter()
                .map(|&s| execute_single(spec, source, s))
                .collect()
        })
    };
    traces.map_err(classify)
}

pub fn rows_from_traces(spec: &ResolvedSpec, traces: &[RunTrace]) -> Vec<ResultRow> {
    traces
        .iter()
        .enumerate()
        .map(|(i, trace)| {
            let (config, raw) = trace.final_best().expect("budget >= 1 measures something");
            ResultRow {
                run_index: i,
                seed: spec.seed + i as u64,
                distinct_measurements: trace.distinct_measurements(),
                best_ft_raw: raw.target,
                best_fa_raw: raw.auxiliary,
                best_config: config.levels().to_vec(),
            }
        })
        .collect()
}

pub fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let mut spec = resolve_run(&args)?;
    let source = source::load(&spec, &args.source.target, &args.source.aux)?;
    spec.fill_source_identity(source.as_measurement());

    let traces = execute_repeats(&spec, &source, args.jobs)?;
    let rows = rows_from_traces(&spec, &traces);

    let trace_out = results::trace_path(&args.out);
    results::write_results(&args.out, &spec, &rows)?;
    results::write_traces(&trace_out, &spec, &traces)?;
    println!(
        "case {}: {} runs -> {} (traces: {})",
        spec.case,
        rows.len(),
        args.out.display(),
        trace_out.display()
    );
    Ok(())
}
