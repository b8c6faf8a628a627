//! Budget-driven optimizers over configuration spaces.
//!
//! Every optimizer shares the same accounting: measurements flow through a
//! [`BudgetLedger`](crate::measure::BudgetLedger), each *charged* (first-time)
//! measurement appends one point to the run's [`RunTrace`], and searches stop
//! when the budget is exhausted or the space is fully enumerated. Budget
//! exhaustion mid-generation is ordinary control flow: optimizers poll before
//! proposing a measurement and finalize with whatever was measured.
//!
//! Randomness is injected as a caller-owned RNG; a fixed seed reproduces a
//! run's trace bit for bit because every draw site has a fixed order.

mod nsga2;
mod single;

pub use nsga2::{
    crowding_distance, mmo_on_nsga2, nondominated_sort, Nsga2Options, Nsga2Run,
};
pub(crate) use nsga2::nsga2_driver;
pub use single::{hill_climb_restart, random_search, simulated_annealing, soga, SaParams};

use std::collections::HashSet;

use rand::Rng;
use thiserror::Error;

use crate::measure::{BudgetLedger, MeasureError, MeasurementSource};
use crate::model::{ModelError, RawObjectives};
use crate::space::{ConfigSpace, Configuration};
use crate::surrogate::SurrogateError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
}

/// Genetic-operator settings shared by the GA-family optimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
}

impl GaParams {
    /// Standard rates: 0.1 mutation, 0.9 crossover.
    pub fn new(population_size: usize) -> Self {
        Self {
            population_size,
            mutation_rate: 0.1,
            crossover_rate: 0.9,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.population_size < 2 {
            return Err(SearchError::Config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        for (name, rate) in [
            ("mutation rate", self.mutation_rate),
            ("crossover rate", self.crossover_rate),
        ] {
            if !(rate.is_finite() && (0.0..=1.0).contains(&rate)) {
                return Err(SearchError::Config(format!(
                    "{name} must lie in [0, 1], got {rate}"
                )));
            }
        }
        Ok(())
    }
}

/// Best-so-far snapshot taken after each charged measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    /// Distinct measurements consumed up to and including this one.
    pub measurements: usize,
    /// Best oriented raw target seen so far.
    pub best_target: f64,
    pub best_config: Configuration,
}

/// One optimizer run: a dense best-so-far trajectory (one point per charged
/// measurement) plus the final best measurement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    points: Vec<TracePoint>,
    final_best: Option<(Configuration, RawObjectives)>,
}

impl RunTrace {
    /// Rebuild a trace from stored points, e.g. when reading results back
    /// from disk. Measurement counts must be strictly increasing.
    pub fn from_points(
        points: Vec<TracePoint>,
        final_best: Option<(Configuration, RawObjectives)>,
    ) -> Result<Self, SearchError> {
        if points.windows(2).any(|w| w[0].measurements >= w[1].measurements) {
            return Err(SearchError::Config(
                "trace measurement counts must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, final_best })
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    /// Total distinct measurements the run charged.
    pub fn distinct_measurements(&self) -> usize {
        self.points.last().map_or(0, |p| p.measurements)
    }

    /// Final best measured configuration with both raw objectives.
    pub fn final_best(&self) -> Option<(&Configuration, RawObjectives)> {
        self.final_best.as_ref().map(|(c, r)| (c, *r))
    }

    /// Best-so-far after `measurements` charges, saturating at both ends: the
    /// first point answers for earlier counts, the last point for later ones.
    pub fn best_at(&self, measurements: usize) -> Option<&TracePoint> {
        if self.points.is_empty() {
            return None;
        }
        match self
            .points
            .binary_search_by(|p| p.measurements.cmp(&measurements))
        {
            Ok(i) => Some(&self.points[i]),
            Err(0) => Some(&self.points[0]),
            Err(i) => Some(&self.points[i - 1]),
        }
    }
}

/// Measurement plumbing shared by all optimizers: ledger, trace, and the
/// in-order log of charged measurements (training data for surrogates).
pub(crate) struct SearchContext<'a> {
    pub source: &'a dyn MeasurementSource,
    pub ledger: BudgetLedger,
    measured_log: Vec<(Configuration, RawObjectives)>,
    points: Vec<TracePoint>,
    best: Option<(Configuration, RawObjectives)>,
}

impl<'a> SearchContext<'a> {
    pub fn new(source: &'a dyn MeasurementSource, budget: usize) -> Self {
        Self {
            source,
            ledger: BudgetLedger::new(budget),
            measured_log: Vec::new(),
            points: Vec::new(),
            best: None,
        }
    }

    pub fn space(&self) -> &ConfigSpace {
        self.source.space()
    }

    /// Budget left or full space enumerated: nothing new can be measured.
    pub fn saturated(&self) -> bool {
        self.ledger.is_exhausted() || self.ledger.fully_covers(self.space())
    }

    pub fn measured_log(&self) -> &[(Configuration, RawObjectives)] {
        &self.measured_log
    }

    /// Measure `config`, recording a trace point when the ledger charges.
    /// Ties on the best target keep the earlier configuration.
    pub fn measure(&mut self, config: &Configuration) -> Result<RawObjectives, MeasureError> {
        let before = self.ledger.spent();
        let raw = self.ledger.measure(self.source, config)?;
        if self.ledger.spent() > before {
            self.measured_log.push((config.clone(), raw));
            let improved = match &self.best {
                None => true,
                Some((_, best)) => raw.target < best.target,
            };
            if improved {
                self.best = Some((config.clone(), raw));
            }
            let (best_config, best_raw) = self.best.as_ref().expect("set above");
            self.points.push(TracePoint {
                measurements: self.ledger.spent(),
                best_target: best_raw.target,
                best_config: best_config.clone(),
            });
        }
        Ok(raw)
    }

    /// Polling variant: cache hits always answer, fresh measurements only
    /// while budget remains. `None` is the budget-exhausted signal.
    pub fn measure_if_allowed(
        &mut self,
        config: &Configuration,
    ) -> Result<Option<RawObjectives>, MeasureError> {
        if !self.ledger.is_cached(config) && self.ledger.is_exhausted() {
            return Ok(None);
        }
        self.measure(config).map(Some)
    }

    pub fn into_trace(self) -> RunTrace {
        RunTrace {
            points: self.points,
            final_best: self.best,
        }
    }
}

/// Draw up to `n` distinct configurations uniformly, skipping `exclude`d
/// ones, then pad back to `n` by cycling when the space cannot supply enough.
/// `excluded` must be the exact number of configurations `exclude` rejects.
pub(crate) fn sample_distinct<R: Rng>(
    space: &ConfigSpace,
    n: usize,
    excluded: usize,
    exclude: &dyn Fn(&Configuration) -> bool,
    rng: &mut R,
) -> Vec<Configuration> {
    let available = space.size().saturating_sub(excluded);
    let want = n.min(available);
    let mut seen: HashSet<Configuration> = HashSet::with_capacity(want);
    let mut picked = Vec::with_capacity(n);
    while picked.len() < want {
        let c = space.random_config(rng);
        if exclude(&c) || seen.contains(&c) {
            continue;
        }
        seen.insert(c.clone());
        picked.push(c);
    }
    let mut i = 0;
    while !picked.is_empty() && picked.len() < n {
        picked.push(picked[i].clone());
        i += 1;
    }
    picked
}

/// Random one-option move: one option re-set to a different level. `None`
/// when no option has an alternative level (singleton space).
pub(crate) fn random_neighbor<R: Rng>(
    space: &ConfigSpace,
    config: &Configuration,
    rng: &mut R,
) -> Option<Configuration> {
    let eligible: Vec<usize> = space
        .options()
        .iter()
        .enumerate()
        .filter(|(_, o)| o.levels() > 1)
        .map(|(i, _)| i)
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let opt = eligible[rng.gen_range(0..eligible.len())];
    let levels = space.options()[opt].levels();
    let current = config.level(opt);
    let mut next = rng.gen_range(0..levels - 1);
    if next >= current {
        next += 1;
    }
    let mut neighbor = config.clone();
    neighbor.set_level(opt, next);
    Some(neighbor)
}

/// Uniform crossover: with probability `rate` the pair crosses, and each
/// position then swaps independently with probability one half. Otherwise the
/// offspring are plain copies.
pub fn uniform_crossover<R: Rng>(
    a: &Configuration,
    b: &Configuration,
    rate: f64,
    rng: &mut R,
) -> (Configuration, Configuration) {
    debug_assert_eq!(a.arity(), b.arity());
    let mut x = a.clone();
    let mut y = b.clone();
    if rng.gen::<f64>() < rate {
        for i in 0..a.arity() {
            if rng.gen_bool(0.5) {
                let tmp = x.level(i);
                x.set_level(i, y.level(i));
                y.set_level(i, tmp);
            }
        }
    }
    (x, y)
}

/// Boundary mutation: each option independently jumps to its minimum or
/// maximum level (fair coin) with probability `rate`.
pub fn boundary_mutation<R: Rng>(
    space: &ConfigSpace,
    config: &Configuration,
    rate: f64,
    rng: &mut R,
) -> Configuration {
    let mut out = config.clone();
    for (i, opt) in space.options().iter().enumerate() {
        if rng.gen::<f64>() < rate {
            let level = if rng.gen_bool(0.5) { opt.levels() - 1 } else { 0 };
            out.set_level(i, level);
        }
    }
    out
}

/// Binary tournament by scalar target: two uniform draws, smaller value wins,
/// ties keep the first-drawn index.
pub fn tournament_pick_scalar<R: Rng>(targets: &[f64], rng: &mut R) -> usize {
    debug_assert!(!targets.is_empty());
    let i = rng.gen_range(0..targets.len());
    let j = rng.gen_range(0..targets.len());
    if targets[j] < targets[i] {
        j
    } else {
        i
    }
}

/// Binary tournament by (front rank, crowding distance): lower rank wins,
/// equal ranks prefer the larger crowding distance, full ties keep the
/// first-drawn index.
pub fn tournament_pick_ranked<R: Rng>(rank_crowd: &[(usize, f64)], rng: &mut R) -> usize {
    debug_assert!(!rank_crowd.is_empty());
    let i = rng.gen_range(0..rank_crowd.len());
    let j = rng.gen_range(0..rank_crowd.len());
    let (ri, ci) = rank_crowd[i];
    let (rj, cj) = rank_crowd[j];
    if rj < ri || (rj == ri && cj > ci) {
        j
    } else {
        i
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space_55() -> ConfigSpace {
        ConfigSpace::from_level_counts(&[5, 5]).unwrap()
    }

    #[test]
    fn crossover_rate_zero_copies_parents() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Configuration::new(vec![0, 1]);
        let b = Configuration::new(vec![4, 3]);
        for _ in 0..50 {
            let (x, y) = uniform_crossover(&a, &b, 0.0, &mut rng);
            assert_eq!(x, a);
            assert_eq!(y, b);
        }
    }

    #[test]
    fn crossover_preserves_the_gene_multiset_per_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Configuration::new(vec![0, 1, 2, 3]);
        let b = Configuration::new(vec![9, 8, 7, 6]);
        for _ in 0..200 {
            let (x, y) = uniform_crossover(&a, &b, 1.0, &mut rng);
            for i in 0..4 {
                let mut got = [x.level(i), y.level(i)];
                let mut want = [a.level(i), b.level(i)];
                got.sort_unstable();
                want.sort_unstable();
                assert_eq!(got, want, "position {i} must hold the parents' genes");
            }
        }
    }

    #[test]
    fn crossover_rate_one_swap_pattern_matches_frozen_golden() {
        // Golden sequence recorded from the documented draw order (one rate
        // draw, then one fair coin per position) under seed 42.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = Configuration::new(vec![0, 0, 0, 0, 0, 0]);
        let b = Configuration::new(vec![1, 1, 1, 1, 1, 1]);
        let mut pattern = Vec::new();
        for _ in 0..4 {
            let (x, _) = uniform_crossover(&a, &b, 1.0, &mut rng);
            pattern.push((0..6).map(|i| x.level(i)).collect::<Vec<_>>());
        }
        assert_eq!(
            pattern,
            vec![
                vec![0, 1, 0, 1, 1, 1],
                vec![0, 1, 0, 0, 0, 0],
                vec![1, 0, 1, 1, 1, 1],
                vec![0, 1, 1, 1, 0, 0],
            ]
        );
    }

    #[test]
    fn mutation_rate_zero_is_identity_and_rate_one_hits_boundaries() {
        let space = space_55();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Configuration::new(vec![2, 3]);
        assert_eq!(boundary_mutation(&space, &c, 0.0, &mut rng), c);
        for _ in 0..100 {
            let m = boundary_mutation(&space, &c, 1.0, &mut rng);
            for level in m.levels() {
                assert!(*level == 0 || *level == 4, "boundary levels only");
            }
        }
    }

    #[test]
    fn mutation_frequency_tracks_the_rate() {
        let space = space_55();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = Configuration::new(vec![2, 2]);
        let trials = 10_000;
        let mut touched = 0usize;
        for _ in 0..trials {
            let m = boundary_mutation(&space, &c, 0.1, &mut rng);
            touched += m
                .levels()
                .iter()
                .zip(c.levels())
                .filter(|(a, b)| a != b)
                .count();
        }
        let freq = touched as f64 / (trials * 2) as f64;
        assert!(
            (freq - 0.1).abs() < 0.01,
            "per-option mutation frequency should sit near the rate, got {freq}"
        );
    }

    #[test]
    fn neighbor_changes_exactly_one_option_to_a_new_level() {
        let space = space_55();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = Configuration::new(vec![2, 3]);
        for _ in 0..200 {
            let n = random_neighbor(&space, &c, &mut rng).unwrap();
            let differing: Vec<usize> = (0..2).filter(|&i| n.level(i) != c.level(i)).collect();
            assert_eq!(differing.len(), 1);
            space.validate(&n).unwrap();
        }
        let singleton = ConfigSpace::from_level_counts(&[1, 1]).unwrap();
        assert!(random_neighbor(&singleton, &Configuration::new(vec![0, 0]), &mut rng).is_none());
    }

    #[test]
    fn tournaments_prefer_better_entries_and_first_drawn_on_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let targets = [5.0, 1.0, 5.0, 5.0];
        for _ in 0..300 {
            let mut probe = rng.clone();
            let i = probe.gen_range(0..targets.len());
            let j = probe.gen_range(0..targets.len());
            let w = tournament_pick_scalar(&targets, &mut rng);
            let expect = if targets[j] < targets[i] { j } else { i };
            assert_eq!(w, expect);
        }
        // All-equal targets: the winner must be the first draw.
        let equal = [2.0, 2.0, 2.0];
        for _ in 0..100 {
            let mut probe = rng.clone();
            let i = probe.gen_range(0..equal.len());
            let _j = probe.gen_range(0..equal.len());
            assert_eq!(tournament_pick_scalar(&equal, &mut rng), i);
        }

        let ranked = [(0, 1.0), (1, f64::INFINITY), (0, 2.0)];
        for _ in 0..300 {
            let mut probe = rng.clone();
            let i = probe.gen_range(0..ranked.len());
            let j = probe.gen_range(0..ranked.len());
            let w = tournament_pick_ranked(&ranked, &mut rng);
            let (ri, ci) = ranked[i];
            let (rj, cj) = ranked[j];
            let expect = if rj < ri || (rj == ri && cj > ci) { j } else { i };
            assert_eq!(w, expect);
        }
    }

    #[test]
    fn sample_distinct_draws_unique_configs_and_pads_small_spaces() {
        let space = space_55();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sample = sample_distinct(&space, 10, 0, &|_| false, &mut rng);
        assert_eq!(sample.len(), 10);
        let unique: HashSet<_> = sample.iter().collect();
        assert_eq!(unique.len(), 10);

        let tiny = ConfigSpace::from_level_counts(&[2]).unwrap();
        let sample = sample_distinct(&tiny, 6, 0, &|_| false, &mut rng);
        assert_eq!(sample.len(), 6, "padded back to the requested size");
        let unique: HashSet<_> = sample.iter().collect();
        assert_eq!(unique.len(), 2);

        // Exclusion removes configurations from the draw entirely.
        let banned = Configuration::new(vec![0]);
        let sample = sample_distinct(&tiny, 4, 1, &|c| *c == banned, &mut rng);
        assert!(sample.iter().all(|c| *c != banned));
        assert_eq!(sample.len(), 4);
    }

    #[test]
    fn trace_best_at_saturates_both_ends() {
        let c = |i| Configuration::new(vec![i]);
        let trace = RunTrace::from_points(
            vec![
                TracePoint {
                    measurements: 1,
                    best_target: 5.0,
                    best_config: c(0),
                },
                TracePoint {
                    measurements: 2,
                    best_target: 3.0,
                    best_config: c(1),
                },
                TracePoint {
                    measurements: 4,
                    best_target: 1.0,
                    best_config: c(2),
                },
            ],
            None,
        )
        .unwrap();
        assert_eq!(trace.best_at(1).unwrap().best_target, 5.0);
        assert_eq!(trace.best_at(3).unwrap().best_target, 3.0);
        assert_eq!(trace.best_at(4).unwrap().best_target, 1.0);
        assert_eq!(trace.best_at(99).unwrap().best_target, 1.0);
        assert_eq!(trace.distinct_measurements(), 4);

        let err = RunTrace::from_points(
            vec![
                TracePoint {
                    measurements: 2,
                    best_target: 1.0,
                    best_config: c(0),
                },
                TracePoint {
                    measurements: 2,
                    best_target: 1.0,
                    best_config: c(0),
                },
            ],
            None,
        );
        assert!(err.is_err(), "non-increasing counts are rejected");
    }

    #[test]
    fn ga_params_validation() {
        assert!(GaParams::new(50).validate().is_ok());
        assert!(GaParams::new(1).validate().is_err());
        let mut p = GaParams::new(10);
        p.mutation_rate = 1.5;
        assert!(p.validate().is_err());
        p.mutation_rate = 0.1;
        p.crossover_rate = f64::NAN;
        assert!(p.validate().is_err());
    }
}
