//! Surrogate-guided sequential search: CART regression trees over measured
//! configurations, with an acquisition step that picks the next measurement
//! from the model instead of the (expensive) real source.
//!
//! Two acquisition strategies share the same sampling budget accounting:
//! [`flash`] greedily measures the configuration with the best predicted
//! target among random unmeasured candidates, while [`flash_mmo`] runs a
//! population search over a two-tree surrogate under the meta two-objective
//! model and measures the best unmeasured member of its final population.

use rand::Rng;
use thiserror::Error;

use crate::measure::{MeasureError, MeasurementSource};
use crate::model::{ObjectiveSense, OptimizationModel, RawObjectives};
use crate::search::{nsga2_driver, GaParams, Nsga2Options, RunTrace, SearchContext, SearchError};
use crate::space::{ConfigSpace, Configuration};

#[derive(Debug, Error, PartialEq)]
pub enum SurrogateError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training target must be finite, got {0}")]
    NonFiniteTarget(f64),
    #[error("minimum leaf size must be at least 1")]
    InvalidMinLeaf,
}

/// CART fitting controls. `min_leaf` is the smallest node the tree will still
/// try to split.
#[derive(Debug, Clone, PartialEq)]
pub struct CartParams {
    pub min_leaf: usize,
}

impl Default for CartParams {
    fn default() -> Self {
        Self { min_leaf: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        prediction: f64,
    },
    Split {
        option: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Axis-aligned regression tree over configuration level indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CartTree {
    nodes: Vec<Node>,
    root: usize,
}

impl CartTree {
    /// Predicted target for `config`: the mean of the training samples in the
    /// leaf its level indices fall into.
    pub fn predict(&self, config: &Configuration) -> f64 {
        let mut at = self.root;
        loop {
            match self.nodes[at] {
                Node::Leaf { prediction } => return prediction,
                Node::Split {
                    option,
                    threshold,
                    left,
                    right,
                } => {
                    at = if (config.level(option) as f64) <= threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// The root decision, if the tree split at all: (option index, threshold).
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[self.root] {
            Node::Leaf { .. } => None,
            Node::Split {
                option, threshold, ..
            } => Some((option, threshold)),
        }
    }
}

/// Fit a CART to `(configuration, target)` samples by recursive binary
/// splitting on level indices. Split candidates are midpoints between
/// consecutive distinct levels; the chosen split minimizes the summed child
/// SSE and must improve on the parent strictly. Nodes at or below `min_leaf`
/// samples, and nodes with zero target variance, become leaves predicting
/// their sample mean. Ties prefer the lowest option index, then the lowest
/// threshold.
pub fn fit_cart(
    samples: &[(Configuration, f64)],
    params: &CartParams,
) -> Result<CartTree, SurrogateError> {
    if params.min_leaf == 0 {
        return Err(SurrogateError::InvalidMinLeaf);
    }
    if samples.is_empty() {
        return Err(SurrogateError::EmptyTrainingSet);
    }
    if let Some((_, bad)) = samples.iter().find(|(_, y)| !y.is_finite()) {
        return Err(SurrogateError::NonFiniteTarget(*bad));
    }
    let mut nodes = Vec::new();
    let indices: Vec<usize> = (0..samples.len()).collect();
    let root = build(samples, indices, params.min_leaf, &mut nodes);
    Ok(CartTree { nodes, root })
}

fn node_stats(samples: &[(Configuration, f64)], indices: &[usize]) -> (f64, f64) {
    let n = indices.len() as f64;
    let sum: f64 = indices.iter().map(|&i| samples[i].1).sum();
    let sumsq: f64 = indices.iter().map(|&i| samples[i].1 * samples[i].1).sum();
    let mean = sum / n;
    let sse = (sumsq - sum * sum / n).max(0.0);
    (mean, sse)
}

fn build(
    samples: &[(Configuration, f64)],
    indices: Vec<usize>,
    min_leaf: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let (mean, parent_sse) = node_stats(samples, &indices);
    if indices.len() <= min_leaf || parent_sse <= 0.0 {
        nodes.push(Node::Leaf { prediction: mean });
        return nodes.len() - 1;
    }

    let arity = samples[indices[0]].0.arity();
    let total_sum: f64 = indices.iter().map(|&i| samples[i].1).sum();
    let total_sumsq: f64 = indices.iter().map(|&i| samples[i].1 * samples[i].1).sum();

    let mut best: Option<(usize, f64, f64)> = None;
    for option in 0..arity {
        let mut order = indices.clone();
        order.sort_unstable_by_key(|&i| samples[i].0.level(option));
        let mut left_sum = 0.0;
        let mut left_sumsq = 0.0;
        for w in 0..order.len() - 1 {
            let y = samples[order[w]].1;
            left_sum += y;
            left_sumsq += y * y;
            let here = samples[order[w]].0.level(option);
            let next = samples[order[w + 1]].0.level(option);
            if here == next {
                continue;
            }
            let n1 = (w + 1) as f64;
            let n2 = (order.len() - w - 1) as f64;
            let sse1 = (left_sumsq - left_sum * left_sum / n1).max(0.0);
            let right_sum = total_sum - left_sum;
            let right_sumsq = total_sumsq - left_sumsq;
            let sse2 = (right_sumsq - right_sum * right_sum / n2).max(0.0);
            let child_sse = sse1 + sse2;
            if best.map_or(true, |(_, _, b)| child_sse < b) {
                best = Some((option, (here + next) as f64 / 2.0, child_sse));
            }
        }
    }

    match best {
        Some((option, threshold, child_sse)) if child_sse < parent_sse => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                .into_iter()
                .partition(|&i| (samples[i].0.level(option) as f64) <= threshold);
            let left = build(samples, left_idx, min_leaf, nodes);
            let right = build(samples, right_idx, min_leaf, nodes);
            nodes.push(Node::Split {
                option,
                threshold,
                left,
                right,
            });
            nodes.len() - 1
        }
        _ => {
            nodes.push(Node::Leaf { prediction: mean });
            nodes.len() - 1
        }
    }
}

/// One tree per objective, fit on the same measured configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateBundle {
    pub target: CartTree,
    pub auxiliary: CartTree,
}

pub fn fit_bundle(
    samples: &[(Configuration, RawObjectives)],
    params: &CartParams,
) -> Result<SurrogateBundle, SurrogateError> {
    let targets: Vec<(Configuration, f64)> = samples
        .iter()
        .map(|(c, r)| (c.clone(), r.target))
        .collect();
    let auxiliaries: Vec<(Configuration, f64)> = samples
        .iter()
        .map(|(c, r)| (c.clone(), r.auxiliary))
        .collect();
    Ok(SurrogateBundle {
        target: fit_cart(&targets, params)?,
        auxiliary: fit_cart(&auxiliaries, params)?,
    })
}

/// Measurement source whose answers are surrogate predictions. Predictions
/// inherit the orientation of the training data, so both senses are
/// "minimize" by construction.
pub struct SurrogateSource<'a> {
    space: &'a ConfigSpace,
    bundle: &'a SurrogateBundle,
}

impl<'a> SurrogateSource<'a> {
    pub fn new(space: &'a ConfigSpace, bundle: &'a SurrogateBundle) -> Self {
        Self { space, bundle }
    }
}

impl MeasurementSource for SurrogateSource<'_> {
    fn space(&self) -> &ConfigSpace {
        self.space
    }

    fn name(&self) -> &str {
        "surrogate"
    }

    fn objective_labels(&self) -> (&str, &str) {
        ("predicted-target", "predicted-auxiliary")
    }

    fn objective_senses(&self) -> (ObjectiveSense, ObjectiveSense) {
        (ObjectiveSense::Minimize, ObjectiveSense::Minimize)
    }

    fn measure_raw(&self, config: &Configuration) -> Result<RawObjectives, MeasureError> {
        self.space.validate(config)?;
        Ok(RawObjectives::new(
            self.bundle.target.predict(config),
            self.bundle.auxiliary.predict(config),
        ))
    }
}

/// Sequential model-based search controls. `initial_samples` seeds the model
/// with that many distinct random measurements (charged against the budget);
/// `eval_budget` is how many random unmeasured candidates each acquisition
/// round scores on the surrogate.
#[derive(Debug, Clone, PartialEq)]
pub struct FlashParams {
    pub initial_samples: usize,
    pub eval_budget: usize,
}

impl Default for FlashParams {
    fn default() -> Self {
        Self {
            initial_samples: 30,
            eval_budget: 1000,
        }
    }
}

impl FlashParams {
    fn validate(&self, budget: usize, space: &ConfigSpace) -> Result<(), SearchError> {
        if self.initial_samples == 0 {
            return Err(SearchError::Config(
                "initial sample count must be at least 1".into(),
            ));
        }
        if self.initial_samples > budget {
            return Err(SearchError::Config(format!(
                "initial sample count {} exceeds the budget {budget}",
                self.initial_samples
            )));
        }
        if self.eval_budget == 0 {
            return Err(SearchError::Config(
                "acquisition evaluation budget must be at least 1".into(),
            ));
        }
        if budget > space.size() {
            return Err(SearchError::Config(format!(
                "budget {budget} exceeds the space size {}; sequential search \
                 measures distinct configurations only",
                space.size()
            )));
        }
        Ok(())
    }
}

/// Inner population-search settings for [`flash_mmo`].
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSearchParams {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
}

impl Default for InnerSearchParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 20,
            mutation_rate: 0.1,
            crossover_rate: 0.9,
        }
    }
}

impl InnerSearchParams {
    fn ga_params(&self) -> GaParams {
        GaParams {
            population_size: self.population_size,
            mutation_rate: self.mutation_rate,
            crossover_rate: self.crossover_rate,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        self.ga_params().validate()?;
        if self.generations == 0 {
            return Err(SearchError::Config(
                "inner search needs at least one generation".into(),
            ));
        }
        Ok(())
    }
}

fn seed_initial_samples<R: Rng>(
    ctx: &mut SearchContext,
    k: usize,
    rng: &mut R,
) -> Result<(), SearchError> {
    for c in sample_initial(ctx.space(), k, rng) {
        ctx.measure(&c)?;
    }
    Ok(())
}

fn sample_initial<R: Rng>(space: &ConfigSpace, k: usize, rng: &mut R) -> Vec<Configuration> {
    crate::search::sample_distinct(space, k, 0, &|_| false, rng)
}

fn draw_unmeasured<R: Rng>(
    space: &ConfigSpace,
    ctx: &SearchContext,
    rng: &mut R,
) -> Configuration {
    loop {
        let c = space.random_config(rng);
        if !ctx.ledger.is_cached(&c) {
            return c;
        }
    }
}

/// Greedy sequential model-based search: seed with random measurements, then
/// repeatedly fit a target tree on everything measured so far and measure the
/// candidate with the smallest predicted target among `eval_budget` random
/// unmeasured configurations (first drawn wins ties).
pub fn flash<R: Rng>(
    source: &dyn MeasurementSource,
    params: &FlashParams,
    budget: usize,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    params.validate(budget, source.space())?;
    let space = source.space();
    let mut ctx = SearchContext::new(source, budget);
    seed_initial_samples(&mut ctx, params.initial_samples, rng)?;

    let cart = CartParams::default();
    while !ctx.saturated() {
        let tree = {
            let samples: Vec<(Configuration, f64)> = ctx
                .measured_log()
                .iter()
                .map(|(c, r)| (c.clone(), r.target))
                .collect();
            fit_cart(&samples, &cart)?
        };
        let mut best: Option<(Configuration, f64)> = None;
        for _ in 0..params.eval_budget {
            let candidate = draw_unmeasured(space, &ctx, rng);
            let predicted = tree.predict(&candidate);
            if best.as_ref().map_or(true, |(_, p)| predicted < *p) {
                best = Some((candidate, predicted));
            }
        }
        let (next, _) = best.expect("eval budget is at least one");
        ctx.measure(&next)?;
    }
    Ok(ctx.into_trace())
}

/// Sequential model-based search with a two-tree surrogate explored by the
/// meta two-objective population search. Each round fits one tree per
/// objective, runs the population search against the surrogate (initial
/// population drawn from unmeasured configurations, parameter-free weight of
/// one over population-reset bounds), and measures the final-population
/// member with the best predicted target that is still unmeasured. If the
/// final population holds no unmeasured member, a uniform random unmeasured
/// configuration is measured instead.
pub fn flash_mmo<R: Rng>(
    source: &dyn MeasurementSource,
    params: &FlashParams,
    inner: &InnerSearchParams,
    budget: usize,
    rng: &mut R,
) -> Result<RunTrace, SearchError> {
    params.validate(budget, source.space())?;
    inner.validate()?;
    let space = source.space();
    let mut ctx = SearchContext::new(source, budget);
    seed_initial_samples(&mut ctx, params.initial_samples, rng)?;

    let cart = CartParams::default();
    let model = OptimizationModel::mmo_default();
    let options = Nsga2Options {
        max_generations: Some(inner.generations),
    };
    let inner_ga = inner.ga_params();
    // The surrogate is free to query, so the inner run is bounded by its
    // generation cap rather than by measurements.
    let inner_budget = space.size().max(inner.population_size);

    while !ctx.saturated() {
        let bundle = fit_bundle(ctx.measured_log(), &cart)?;
        let surrogate = SurrogateSource::new(space, &bundle);
        let already_measured = ctx.ledger.spent();
        let is_measured = |c: &Configuration| ctx.ledger.is_cached(c);
        let run = nsga2_driver(
            &surrogate,
            &model,
            &inner_ga,
            inner_budget,
            &options,
            Some((already_measured, &is_measured)),
            rng,
        )?;
        let mut choice: Option<(&Configuration, f64)> = None;
        for member in &run.final_population {
            if ctx.ledger.is_cached(&member.config) {
                continue;
            }
            if choice.as_ref().map_or(true, |(_, t)| member.raw.target < *t) {
                choice = Some((&member.config, member.raw.target));
            }
        }
        let next = match choice {
            Some((c, _)) => c.clone(),
            None => draw_unmeasured(space, &ctx, rng),
        };
        ctx.measure(&next)?;
    }
    Ok(ctx.into_trace())
}
