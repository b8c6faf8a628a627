//! NSGA-II over an optimization model, plus the fast nondominated sort and
//! crowding distance it is built from.
//!
//! The generation loop follows a strict order so that every comparison stays
//! inside one bounds snapshot: measure offspring, refresh normalization
//! bounds from the pool, re-derive every member's objectives under the new
//! snapshot, then sort and select. Under single-objective models the run
//! dispatches to the plain GA, so one entry point serves every model.

use rand::Rng;

use super::single::soga_run;
use super::{
    boundary_mutation, sample_distinct, tournament_pick_ranked, uniform_crossover, GaParams,
    RunTrace, SearchContext, SearchError,
};
use crate::measure::MeasurementSource;
use crate::model::{
    compare_vectors, BoundsMode, Comparison, EvaluatedConfig, ModelError, NormalizationBounds,
    OptimizationModel, RawObjectives,
};
use crate::space::Configuration;

/// Fast nondominated sort. Returns fronts of indices into `vectors`, best
/// front first; indices inside a front keep their input order. Equal vectors
/// are mutually nondominated, so they share a front.
pub fn nondominated_sort(vectors: &[Vec<f64>]) -> Result<Vec<Vec<usize>>, ModelError> {
    check_vectors(vectors)?;
    let n = vectors.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            match compare_vectors(&vectors[i], &vectors[j])? {
                Comparison::ADominates => {
                    dominated_by[i].push(j);
                    domination_count[j] += 1;
                }
                Comparison::BDominates => {
                    dominated_by[j].push(i);
                    domination_count[i] += 1;
                }
                Comparison::Nondominated | Comparison::Equal => {}
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    Ok(fronts)
}

/// Crowding distance within one front. Boundary members of each objective get
/// infinity; interior members accumulate the normalized gap between their
/// neighbors. An objective whose values all coincide contributes nothing.
pub fn crowding_distance(front: &[Vec<f64>]) -> Result<Vec<f64>, ModelError> {
    if front.is_empty() {
        return Ok(Vec::new());
    }
    check_vectors(front)?;
    let n = front.len();
    let m = front[0].len();
    let mut distance = vec![0.0f64; n];
    for obj in 0..m {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            front[a][obj]
                .partial_cmp(&front[b][obj])
                .expect("finite objectives")
                .then(a.cmp(&b))
        });
        let span = front[order[n - 1]][obj] - front[order[0]][obj];
        if span == 0.0 {
            continue;
        }
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        for k in 1..n - 1 {
            distance[order[k]] +=
                (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / span;
        }
    }
    Ok(distance)
}

fn check_vectors(vectors: &[Vec<f64>]) -> Result<(), ModelError> {
    let Some(first) = vectors.first() else {
        return Err(ModelError::EmptyPopulation);
    };
    if first.is_empty() {
        return Err(ModelError::DimensionMismatch { a: 0, b: 0 });
    }
    for v in vectors {
        if v.len() != first.len() {
            return Err(ModelError::DimensionMismatch {
                a: first.len(),
                b: v.len(),
            });
        }
        if v.iter().any(|x| x.is_nan()) {
            return Err(ModelError::NonFinite { value: f64::NAN });
        }
    }
    Ok(())
}

/// Environmental selection: keep the best `n` of `vectors` by (front rank,
/// crowding distance). Whole fronts are taken while they fit; the partial
/// front is trimmed by descending crowding distance, ties broken by lower
/// index. Selected indices are returned with their rank and crowding.
pub(crate) fn select_top_n(
    vectors: &[Vec<f64>],
    n: usize,
) -> Result<Vec<(usize, usize, f64)>, ModelError> {
    let fronts = nondominated_sort(vectors)?;
    let mut selected: Vec<(usize, usize, f64)> = Vec::with_capacity(n.min(vectors.len()));
    for (rank, front) in fronts.iter().enumerate() {
        if selected.len() == n {
            break;
        }
        let members: Vec<Vec<f64>> = front.iter().map(|&i| vectors[i].clone()).collect();
        let crowd = crowding_distance(&members)?;
        if selected.len() + front.len() <= n {
            for (k, &i) in front.iter().enumerate() {
                selected.push((i, rank, crowd[k]));
            }
        } else {
            let need = n - selected.len();
            let mut by_crowding: Vec<usize> = (0..front.len()).collect();
            by_crowding.sort_by(|&a, &b| {
                crowd[b]
                    .partial_cmp(&crowd[a])
                    .expect("crowding is never NaN")
                    .then(front[a].cmp(&front[b]))
            });
            let mut keep: Vec<usize> = by_crowding.into_iter().take(need).collect();
            keep.sort_unstable_by_key(|&k| front[k]);
            for k in keep {
                selected.push((front[k], rank, crowd[k]));
            }
            break;
        }
    }
    Ok(selected)
}

#[derive(Debug, Clone, Default)]
pub struct Nsga2Options {
    /// Stop after this many generations (the initial population counts as the
    /// first). `None` runs until the budget or the space is exhausted.
    pub max_generations: Option<usize>,
}

/// Outcome of a population run: the measurement trace plus the final
/// population with its last-snapshot annotations.
#[derive(Debug, Clone)]
pub struct Nsga2Run {
    pub trace: RunTrace,
    pub final_population: Vec<EvaluatedConfig>,
}

/// Optimize `source` under `model`. Multi-objective models run NSGA-II;
/// `SingleObjective` dispatches to the generational GA so callers can switch
/// models without switching optimizers.
pub fn mmo_on_nsga2<R: Rng>(
    source: &dyn MeasurementSource,
    model: &OptimizationModel,
    params: &GaParams,
    budget: usize,
    rng: &mut R,
) -> Result<Nsga2Run, SearchError> {
    model.validate()?;
    if let OptimizationModel::SingleObjective = model {
        let run = soga_run(source, params, budget, rng)?;
        let final_population = run
            .final_population
            .into_iter()
            .map(|(c, raw)| EvaluatedConfig::new(c, raw))
            .collect();
        return Ok(Nsga2Run {
            trace: run.trace,
            final_population,
        });
    }
    nsga2_driver(source, model, params, budget, &Nsga2Options::default(), None, rng)
}

/// Full driver, also used as the inner optimizer of surrogate search where
/// the initial population must avoid already-measured configurations.
/// `init_exclude` carries the number of excluded configurations together with
/// the membership test.
pub(crate) fn nsga2_driver<R: Rng>(
    source: &dyn MeasurementSource,
    model: &OptimizationModel,
    params: &GaParams,
    budget: usize,
    options: &Nsga2Options,
    init_exclude: Option<(usize, &dyn Fn(&Configuration) -> bool)>,
    rng: &mut R,
) -> Result<Nsga2Run, SearchError> {
    model.validate()?;
    params.validate()?;
    let mode = model
        .normalization()
        .ok_or_else(|| SearchError::Config("driver requires a multi-objective model".into()))?;
    let n = params.population_size;
    if budget < n {
        return Err(SearchError::Config(format!(
            "budget must cover the initial population of {n}, got {budget}"
        )));
    }
    if let Some(max) = options.max_generations {
        if max == 0 {
            return Err(SearchError::Config(
                "generation limit must be at least 1".into(),
            ));
        }
    }
    let mut ctx = SearchContext::new(source, budget);

    let (excluded, exclude): (usize, &dyn Fn(&Configuration) -> bool) =
        init_exclude.unwrap_or((0, &|_| false));
    let initial = sample_distinct(ctx.space(), n, excluded, exclude, rng);
    if initial.is_empty() {
        return Err(SearchError::Config(
            "no configurations available for the initial population".into(),
        ));
    }
    let mut members: Vec<EvaluatedConfig> = Vec::with_capacity(n);
    for c in initial {
        let raw = ctx.measure(&c)?;
        members.push(EvaluatedConfig::new(c, raw));
    }

    let mut bounds = match mode {
        BoundsMode::CurrentPopulation => {
            NormalizationBounds::reset_from_population(&raws(&members))?
        }
        BoundsMode::GlobalSoFar => {
            let mut b = NormalizationBounds::empty_global();
            b.update_global(&raws(&members))?;
            b
        }
    };
    let mut snapshot: u64 = 1;
    for member in &mut members {
        member.evaluate(model, &bounds, snapshot)?;
    }
    let mut rank_crowd = annotate_selection(model, &mut members, n)?;

    let mut completed_generations = 1usize;
    let mut idle_generations = 0usize;
    loop {
        if ctx.saturated() {
            break;
        }
        if let Some(max) = options.max_generations {
            if completed_generations >= max {
                break;
            }
        }
        let spent_before = ctx.ledger.spent();

        let mut offspring: Vec<EvaluatedConfig> = Vec::with_capacity(n);
        let mut out_of_budget = false;
        'breed: while offspring.len() < n && !out_of_budget {
            let i = tournament_pick_ranked(&rank_crowd, rng);
            let j = tournament_pick_ranked(&rank_crowd, rng);
            let (c1, c2) = uniform_crossover(
                &members[i].config,
                &members[j].config,
                params.crossover_rate,
                rng,
            );
            for child in [c1, c2] {
                if offspring.len() == n {
                    break;
                }
                let child = boundary_mutation(ctx.space(), &child, params.mutation_rate, rng);
                match ctx.measure_if_allowed(&child)? {
                    Some(raw) => offspring.push(EvaluatedConfig::new(child, raw)),
                    None => {
                        out_of_budget = true;
                        break 'breed;
                    }
                }
            }
        }
        if offspring.is_empty() {
            break;
        }

        // Pool of parents and measured offspring; duplicates cost nothing
        // because repeat measurements are cache hits.
        let mut pool = members;
        pool.append(&mut offspring);
        match mode {
            BoundsMode::CurrentPopulation => {
                bounds = NormalizationBounds::reset_from_population(&raws(&pool))?;
            }
            BoundsMode::GlobalSoFar => bounds.update_global(&raws(&pool))?,
        }
        snapshot += 1;
        for member in &mut pool {
            member.evaluate(model, &bounds, snapshot)?;
        }
        rank_crowd = annotate_selection(model, &mut pool, n)?;
        members = pool;
        completed_generations += 1;
        if out_of_budget {
            break;
        }
        // Offspring recombine surviving genes plus boundary levels, so a
        // generation that charged nothing cannot enlarge the reachable set;
        // stop once that repeats long enough to rule out sampling luck.
        if ctx.ledger.spent() == spent_before {
            idle_generations += 1;
            if idle_generations >= super::single::STALLED_GENERATION_LIMIT {
                break;
            }
        } else {
            idle_generations = 0;
        }
    }

    Ok(Nsga2Run {
        trace: ctx.into_trace(),
        final_population: members,
    })
}

fn raws(members: &[EvaluatedConfig]) -> Vec<RawObjectives> {
    members.iter().map(|m| m.raw).collect()
}

/// Trim `members` to the best `n` in place and return each survivor's
/// (rank, crowding) for the next round of tournaments.
fn annotate_selection(
    model: &OptimizationModel,
    members: &mut Vec<EvaluatedConfig>,
    n: usize,
) -> Result<Vec<(usize, f64)>, SearchError> {
    let vectors: Vec<Vec<f64>> = members
        .iter()
        .map(|m| m.objective_vector(model))
        .collect::<Result<_, _>>()?;
    let selected = select_top_n(&vectors, n)?;
    let mut survivors = Vec::with_capacity(selected.len());
    let mut rank_crowd = Vec::with_capacity(selected.len());
    for (idx, rank, crowd) in selected {
        survivors.push(members[idx].clone());
        rank_crowd.push((rank, crowd));
    }
    *members = survivors;
    Ok(rank_crowd)
}
