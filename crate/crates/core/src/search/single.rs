//! Single-objective baseline optimizers: random search, stochastic hill
//! climbing with restarts, a generational GA, and simulated annealing.
//!
//! All of them minimize the oriented raw target and share the charged-only
//! budget accounting of [`SearchContext`].

use rand::Rng;

use super::{
    boundary_mutation, random_neighbor, sample_distinct, tournament_pick_scalar,
    uniform_crossover, GaParams, RunTrace, SearchContext, SearchError,
};
use crate::measure::MeasurementSource;
use crate::model::RawObjectives;
use crate::space::Configuration;

fn require_budget(budget: usize, floor: usize, what: &str) -> Result<(), SearchError> {
    if budget < floor {
        return Err(SearchError::Config(format!(
            "budget must be at least {floor} for {what}, got {budget}"
        )));
    }
    Ok(())
}

/// Walk steps without a charged measurement before an annealing run declares
/// its current basin exhausted and restarts from a random configuration.
/// Repeat measurements are free, so without the restart a frozen walk inside
/// a fully measured neighborhood would spin forever.
const SA_STAGNATION_LIMIT: usize = 50;

/// Consecutive generations without a charged measurement before a GA run
/// stops early. Offspring are recombinations of surviving genes plus
/// boundary levels, so a generation that charges nothing leaves the
/// reachable set unchanged; after this many idle generations the remaining
/// budget is unreachable for the population and the run ends.
pub(crate) const STALLED_GENERATION_LIMIT: usize = 20;

/// Uniform random search without replacement: every charged measurement is a
/// fresh configuration, so the budget is spent on distinct points.
pub fn random_search<R: Rng>(
    source: &dyn MeasurementSource,
    budget: usize,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    require_budget(budget, 1, "random search")?;
    let mut ctx = SearchContext::new(source, budget);
    while !ctx.saturated() {
        let config = loop {
            let c = ctx.space().random_config(rng);
            if !ctx.ledger.is_cached(&c) {
                break c;
            }
        };
        ctx.measure(&config)?;
    }
    Ok(ctx.into_trace())
}

/// Stochastic hill climbing with random restarts. The walk moves only on
/// strict improvement; after `stall_limit` consecutive non-improving
/// neighbors it restarts from a uniform random configuration. `None` uses the
/// default limit of twice the option count. A limit of zero restarts every
/// step, degenerating to random sampling with replacement.
pub fn hill_climb_restart<R: Rng>(
    source: &dyn MeasurementSource,
    budget: usize,
    stall_limit: Option<usize>,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    require_budget(budget, 1, "hill climbing")?;
    let stall_limit = stall_limit.unwrap_or(2 * source.space().option_count());
    let mut ctx = SearchContext::new(source, budget);

    let start = ctx.space().random_config(rng);
    let mut current = (start.clone(), ctx.measure(&start)?);
    let mut stall = 0usize;

    while !ctx.saturated() {
        if stall >= stall_limit {
            let c = ctx.space().random_config(rng);
            match ctx.measure_if_allowed(&c)? {
                Some(raw) => {
                    current = (c, raw);
                    stall = 0;
                }
                None => break,
            }
            continue;
        }
        let Some(neighbor) = random_neighbor(ctx.space(), &current.0, rng) else {
            break;
        };
        let Some(raw) = ctx.measure_if_allowed(&neighbor)? else {
            break;
        };
        if raw.target < current.1.target {
            current = (neighbor, raw);
            stall = 0;
        } else {
            stall += 1;
        }
    }
    Ok(ctx.into_trace())
}

pub(crate) struct SogaRun {
    pub trace: RunTrace,
    #[allow(dead_code)]
    pub final_population: Vec<(Configuration, RawObjectives)>,
}

/// Generational single-objective GA: binary tournaments on the raw target,
/// uniform crossover, boundary mutation, elitism of one.
pub fn soga<R: Rng>(
    source: &dyn MeasurementSource,
    params: &GaParams,
    budget: usize,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    soga_run(source, params, budget, rng).map(|r| r.trace)
}

pub(crate) fn soga_run<R: Rng>(
    source: &dyn MeasurementSource,
    params: &GaParams,
    budget: usize,
    rng: &mut R,
) -> Result<SogaRun, SearchError> {
    params.validate()?;
    require_budget(budget, params.population_size, "the initial population")?;
    let n = params.population_size;
    let mut ctx = SearchContext::new(source, budget);

    let mut population: Vec<(Configuration, RawObjectives)> = Vec::with_capacity(n);
    for c in sample_distinct(ctx.space(), n, 0, &|_| false, rng) {
        let raw = ctx.measure(&c)?;
        population.push((c, raw));
    }

    let mut idle_generations = 0usize;
    while !ctx.saturated() {
        let spent_before = ctx.ledger.spent();
        let targets: Vec<f64> = population.iter().map(|(_, r)| r.target).collect();
        let mut offspring: Vec<(Configuration, RawObjectives)> = Vec::with_capacity(n);
        let mut out_of_budget = false;
        'breed: while offspring.len() < n && !out_of_budget {
            let i = tournament_pick_scalar(&targets, rng);
            let j = tournament_pick_scalar(&targets, rng);
            let (c1, c2) =
                uniform_crossover(&population[i].0, &population[j].0, params.crossover_rate, rng);
            for child in [c1, c2] {
                if offspring.len() == n {
                    break;
                }
                let child = boundary_mutation(ctx.space(), &child, params.mutation_rate, rng);
                match ctx.measure_if_allowed(&child)? {
                    Some(raw) => offspring.push((child, raw)),
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
        // Elitism of one: the best parent replaces the worst offspring when
        // the offspring generation lost ground. First index wins ties.
        let best_parent = min_by_target(&population);
        let best_child = min_by_target(&offspring);
        if population[best_parent].1.target < offspring[best_child].1.target {
            let worst_child = max_by_target(&offspring);
            offspring[worst_child] = population[best_parent].clone();
        }
        population = offspring;
        if out_of_budget {
            break;
        }
        if ctx.ledger.spent() == spent_before {
            idle_generations += 1;
            if idle_generations >= STALLED_GENERATION_LIMIT {
                break;
            }
        } else {
            idle_generations = 0;
        }
    }
    Ok(SogaRun {
        trace: ctx.into_trace(),
        final_population: population,
    })
}

fn min_by_target(members: &[(Configuration, RawObjectives)]) -> usize {
    let mut best = 0;
    for (i, (_, raw)) in members.iter().enumerate().skip(1) {
        if raw.target < members[best].1.target {
            best = i;
        }
    }
    best
}

fn max_by_target(members: &[(Configuration, RawObjectives)]) -> usize {
    let mut worst = 0;
    for (i, (_, raw)) in members.iter().enumerate().skip(1) {
        if raw.target > members[worst].1.target {
            worst = i;
        }
    }
    worst
}

/// Simulated annealing settings. When `initial_temperature` is `None` the
/// run calibrates it as the population standard deviation of the targets from
/// `calibration_samples` random measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub initial_temperature: Option<f64>,
    pub cooling: f64,
    pub calibration_samples: usize,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            initial_temperature: None,
            cooling: 0.95,
            calibration_samples: 10,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<(), SearchError> {
        if let Some(t0) = self.initial_temperature {
            if !t0.is_finite() || t0 < 0.0 {
                return Err(SearchError::Config(format!(
                    "initial temperature must be finite and non-negative, got {t0}"
                )));
            }
        }
        if !(self.cooling.is_finite() && self.cooling > 0.0 && self.cooling <= 1.0) {
            return Err(SearchError::Config(format!(
                "cooling factor must lie in (0, 1], got {}",
                self.cooling
            )));
        }
        if self.calibration_samples == 0 {
            return Err(SearchError::Config(
                "temperature calibration needs at least one sample".into(),
            ));
        }
        Ok(())
    }
}

/// Simulated annealing over one-option moves. Non-worsening moves are always
/// taken; a worsening move of size `delta` is taken with probability
/// `exp(-delta / T)`. The temperature multiplies by the cooling factor after
/// every charged measurement of the walk. A walk that goes
/// [`SA_STAGNATION_LIMIT`] steps without charging anything restarts from a
/// uniform random configuration, keeping its cooling schedule.
pub fn simulated_annealing<R: Rng>(
    source: &dyn MeasurementSource,
    params: &SaParams,
    budget: usize,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    params.validate()?;
    require_budget(budget, 1, "simulated annealing")?;
    let mut ctx = SearchContext::new(source, budget);

    let init = params
        .calibration_samples
        .min(budget)
        .min(ctx.space().size());
    let mut best: Option<(Configuration, RawObjectives)> = None;
    for c in sample_distinct(ctx.space(), init, 0, &|_| false, rng) {
        let raw = ctx.measure(&c)?;
        let improved = best.as_ref().map_or(true, |(_, b)| raw.target < b.target);
        if improved {
            best = Some((c, raw));
        }
    }
    let mut current = best.expect("at least one calibration sample");

    let mut temperature = params.initial_temperature.unwrap_or_else(|| {
        let log = ctx.measured_log();
        let n = log.len() as f64;
        let mean = log.iter().map(|(_, r)| r.target).sum::<f64>() / n;
        (log.iter().map(|(_, r)| (r.target - mean).powi(2)).sum::<f64>() / n).sqrt()
    });

    let mut stagnant_steps = 0usize;
    while !ctx.saturated() {
        if stagnant_steps >= SA_STAGNATION_LIMIT {
            let restart = ctx.space().random_config(rng);
            let before = ctx.ledger.spent();
            let Some(raw) = ctx.measure_if_allowed(&restart)? else {
                break;
            };
            if ctx.ledger.spent() > before {
                temperature *= params.cooling;
                stagnant_steps = 0;
            }
            current = (restart, raw);
            continue;
        }
        let Some(neighbor) = random_neighbor(ctx.space(), &current.0, rng) else {
            break;
        };
        let before = ctx.ledger.spent();
        let Some(raw) = ctx.measure_if_allowed(&neighbor)? else {
            break;
        };
        if ctx.ledger.spent() > before {
            temperature *= params.cooling;
            stagnant_steps = 0;
        } else {
            stagnant_steps += 1;
        }
        let delta = raw.target - current.1.target;
        let accept = if delta <= 0.0 {
            true
        } else {
            let p = if temperature > 0.0 {
                (-delta / temperature).exp()
            } else {
                0.0
            };
            rng.gen::<f64>() < p
        };
        if accept {
            current = (neighbor, raw);
        }
    }
    Ok(ctx.into_trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::landscape::{CorrelationRegime, LandscapeSpec, SyntheticLandscape};

    fn small_landscape() -> SyntheticLandscape {
        SyntheticLandscape::generate(LandscapeSpec {
            seed: 11,
            option_levels: vec![12, 12],
            bumps: 6,
            ruggedness: 0.1,
            correlation: CorrelationRegime::Mixed,
        })
        .unwrap()
    }

    #[test]
    fn random_search_spends_the_whole_budget_on_distinct_configs() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trace = random_search(&land, 40, &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 40);
        assert_eq!(trace.points().len(), 40);
        // Best-so-far never worsens.
        for w in trace.points().windows(2) {
            assert!(w[1].best_target <= w[0].best_target);
        }
        assert!(trace.final_best().is_some());
    }

    #[test]
    fn random_search_stops_at_full_enumeration() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trace = random_search(&land, 10_000, &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 144);
        let (_, best) = trace.final_best().unwrap();
        assert_eq!(
            best.target,
            land.manifest().global_optimum_target,
            "enumerating everything must find the optimum"
        );
    }

    #[test]
    fn hill_climb_improves_and_respects_budget() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trace = hill_climb_restart(&land, 60, None, &mut rng).unwrap();
        assert!(trace.distinct_measurements() <= 60);
        let first = trace.points().first().unwrap().best_target;
        let last = trace.points().last().unwrap().best_target;
        assert!(last <= first);
    }

    #[test]
    fn hill_climb_zero_stall_limit_is_pure_random_restarts() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // Restart every step still terminates: repeats are free cache hits
        // and the budget only counts distinct configurations.
        let trace = hill_climb_restart(&land, 30, Some(0), &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 30);
    }

    #[test]
    fn soga_requires_budget_for_the_initial_population() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let err = soga(&land, &GaParams::new(50), 20, &mut rng);
        assert!(matches!(err, Err(SearchError::Config(_))));
    }

    #[test]
    fn soga_keeps_the_elite_and_stops_on_exhaustion() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let run = soga_run(&land, &GaParams::new(10), 83, &mut rng).unwrap();
        assert!(run.trace.distinct_measurements() <= 83);
        // The final population's best never lags the global best-so-far by
        // construction of elitism.
        let pop_best = run
            .final_population
            .iter()
            .map(|(_, r)| r.target)
            .fold(f64::INFINITY, f64::min);
        let (_, best) = run.trace.final_best().unwrap();
        assert_eq!(pop_best, best.target);
    }

    #[test]
    fn sa_calibrates_temperature_and_terminates() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trace = simulated_annealing(&land, &SaParams::default(), 70, &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 70);
        let first = trace.points().first().unwrap().best_target;
        let last = trace.points().last().unwrap().best_target;
        assert!(last <= first);
    }

    #[test]
    fn sa_zero_temperature_rejects_every_worsening_move() {
        // On a singleton-direction space a zero temperature walk is a strict
        // descent: accepted configurations never worsen.
        let land = small_landscape();
        let params = SaParams {
            initial_temperature: Some(0.0),
            ..SaParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let trace = simulated_annealing(&land, &params, 50, &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 50);
    }

    #[test]
    fn sa_rejects_bad_params() {
        let bad_cooling = SaParams {
            cooling: 0.0,
            ..SaParams::default()
        };
        assert!(bad_cooling.validate().is_err());
        let bad_t0 = SaParams {
            initial_temperature: Some(f64::NAN),
            ..SaParams::default()
        };
        assert!(bad_t0.validate().is_err());
        let bad_samples = SaParams {
            calibration_samples: 0,
            ..SaParams::default()
        };
        assert!(bad_samples.validate().is_err());
    }

    #[test]
    fn fixed_seed_reproduces_the_trace_bit_for_bit() {
        let land = small_landscape();
        let a = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            soga(&land, &GaParams::new(8), 60, &mut rng).unwrap()
        };
        let b = {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            soga(&land, &GaParams::new(8), 60, &mut rng).unwrap()
        };
        assert_eq!(a, b);
        let c = {
            let mut rng = ChaCha8Rng::seed_from_u64(100);
            soga(&land, &GaParams::new(8), 60, &mut rng).unwrap()
        };
        assert_ne!(a, c, "different seeds should explore differently");
    }

    #[test]
    fn budget_of_one_measures_exactly_once() {
        let land = small_landscape();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let trace = hill_climb_restart(&land, 1, None, &mut rng).unwrap();
        assert_eq!(trace.distinct_measurements(), 1);
    }
}
