//! Experiment spec resolution: every run is described by a fully resolved
//! record, defaults included, and that record is written into the output
//! header so results files carry their own provenance.

use clap::ValueEnum;
use mmo_core::{BoundsMode, FlashParams, GaParams, MeasurementSource, OptimizationModel};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::cli::RunArgs;

/// A command line that cannot describe a valid experiment. Mapped to exit
/// code 2, unlike data errors (unreadable sources, malformed files) which
/// exit with 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Single,
    Pmo,
    Mmo,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Single => "single",
            Model::Pmo => "pmo",
            Model::Mmo => "mmo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Global,
    Population,
}

impl Norm {
    pub fn as_str(self) -> &'static str {
        match self {
            Norm::Global => "global",
            Norm::Population => "population",
        }
    }

    pub fn bounds_mode(self) -> BoundsMode {
        match self {
            Norm::Global => BoundsMode::GlobalSoFar,
            Norm::Population => BoundsMode::CurrentPopulation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    Nsga2,
    Rs,
    Shc,
    Soga,
    Sa,
    Flash,
    FlashMmo,
}

impl Optimizer {
    pub fn as_str(self) -> &'static str {
        match self {
            Optimizer::Nsga2 => "nsga2",
            Optimizer::Rs => "rs",
            Optimizer::Shc => "shc",
            Optimizer::Soga => "soga",
            Optimizer::Sa => "sa",
            Optimizer::Flash => "flash",
            Optimizer::FlashMmo => "flash-mmo",
        }
    }

    /// The only optimizer whose objective model is selectable. The others
    /// are inherently single-objective, except flash-mmo whose inner model
    /// is fixed by construction.
    fn model_is_selectable(self) -> bool {
        self == Optimizer::Nsga2
    }

    fn forced_model(self) -> Model {
        match self {
            Optimizer::Nsga2 | Optimizer::FlashMmo => Model::Mmo,
            _ => Model::Single,
        }
    }

    fn uses_population(self) -> bool {
        matches!(self, Optimizer::Nsga2 | Optimizer::Soga)
    }

    fn uses_flash_knobs(self) -> bool {
        matches!(self, Optimizer::Flash | Optimizer::FlashMmo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Dataset,
    Landscape,
}

/// A fully resolved experiment: what `run` executes and what every results
/// file records in its header. Fields that a given optimizer does not use
/// (e.g. `pop` for random search) hold their defaults and are inert; the
/// command line rejects explicit values for them, so a recorded value that
/// differs from the default always took effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSpec {
    pub source_kind: SourceKind,
    pub source_path: String,
    /// Case identity: `<source name>:<target label>`. Comparisons are only
    /// meaningful between results files that agree on it.
    pub case: String,
    pub target: String,
    pub auxiliary: String,
    pub model: Model,
    pub normalization: Norm,
    pub weight: f64,
    pub optimizer: Optimizer,
    pub budget: usize,
    pub pop: usize,
    pub repeats: usize,
    /// Base seed; run `i` uses `seed + i`.
    pub seed: u64,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub flash_initial_samples: usize,
    pub flash_eval_budget: usize,
}

pub const DEFAULT_REPEATS: usize = 50;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_POP: usize = 50;
pub const DEFAULT_WEIGHT: f64 = 1.0;

impl ResolvedSpec {
    pub fn optimization_model(&self) -> OptimizationModel {
        match self.model {
            Model::Single => OptimizationModel::SingleObjective,
            Model::Pmo => OptimizationModel::Pmo {
                normalization: self.normalization.bounds_mode(),
            },
            Model::Mmo => OptimizationModel::Mmo {
                weight: self.weight,
                normalization: self.normalization.bounds_mode(),
            },
        }
    }

    pub fn ga_params(&self) -> GaParams {
        GaParams {
            population_size: self.pop,
            mutation_rate: self.mutation_rate,
            crossover_rate: self.crossover_rate,
        }
    }

    pub fn flash_params(&self) -> FlashParams {
        FlashParams {
            initial_samples: self.flash_initial_samples,
            eval_budget: self.flash_eval_budget,
        }
    }

    /// Label for comparison reports: enough of the spec to tell tuners
    /// apart, free of commas so it can sit in a CSV cell.
    pub fn tuner_label(&self) -> String {
        match self.model {
            Model::Single => self.optimizer.as_str().to_string(),
            Model::Pmo => format!(
                "{}-pmo-{}",
                self.optimizer.as_str(),
                self.normalization.as_str()
            ),
            Model::Mmo => format!(
                "{}-mmo-{}-w{}",
                self.optimizer.as_str(),
                self.normalization.as_str(),
                self.weight
            ),
        }
    }

    pub fn fill_source_identity(&mut self, source: &dyn MeasurementSource) {
        let (target, auxiliary) = source.objective_labels();
        self.case = format!("{}:{}", source.name(), target);
        self.target = target.to_string();
        self.auxiliary = auxiliary.to_string();
    }
}

/// Resolve the run flags against the defaults and the per-optimizer rules.
/// Source identity fields stay empty until the source is loaded; every
/// check here is pure flag validation and must precede any file access.
pub fn resolve_run(args: &RunArgs) -> anyhow::Result<ResolvedSpec> {
    let (source_kind, source_path) = check_source_flags(
        &args.source.dataset,
        &args.source.landscape,
        &args.source.target,
        &args.source.aux,
    )?;
    let optimizer = args.optimizer;

    let model = match args.model {
        None => optimizer.forced_model(),
        Some(m) if optimizer.model_is_selectable() || m == optimizer.forced_model() => m,
        Some(m) => {
            return Err(usage(format!(
                "optimizer {} always runs the {} model, cannot select {}",
                optimizer.as_str(),
                optimizer.forced_model().as_str(),
                m.as_str()
            )))
        }
    };

    let normalization = match args.norm {
        None => Norm::Population,
        Some(_) if model == Model::Single => {
            return Err(usage(
                "normalization applies only to the multi-objective models (pmo, mmo)",
            ))
        }
        Some(n) if optimizer == Optimizer::FlashMmo && n != Norm::Population => {
            return Err(usage(
                "flash-mmo runs the parameter-free inner model (population normalization)",
            ))
        }
        Some(n) => n,
    };

    let weight = match args.weight {
        None => DEFAULT_WEIGHT,
        Some(_) if model != Model::Mmo => {
            return Err(usage("a weight applies only to the mmo model"))
        }
        Some(w) if optimizer == Optimizer::FlashMmo && w != DEFAULT_WEIGHT => {
            return Err(usage(
                "flash-mmo runs the parameter-free inner model (weight 1)",
            ))
        }
        Some(w) => {
            if !(w.is_finite() && w > 0.0) {
                return Err(usage(format!("weight must be finite and > 0, got {w}")));
            }
            w
        }
    };

    if args.budget == 0 {
        return Err(usage("budget must be at least 1"));
    }

    let pop = match args.pop {
        None => DEFAULT_POP,
        Some(_) if !optimizer.uses_population() => {
            return Err(usage(format!(
                "optimizer {} does not take a population size",
                optimizer.as_str()
            )))
        }
        Some(p) => p,
    };

    let repeats = args.repeats.unwrap_or(DEFAULT_REPEATS);
    if repeats == 0 {
        return Err(usage("repeats must be at least 1"));
    }

    let ga_defaults = GaParams::new(pop);
    let (mutation_rate, crossover_rate) = match (args.mutation_rate, args.crossover_rate) {
        (None, None) => (ga_defaults.mutation_rate, ga_defaults.crossover_rate),
        _ if !optimizer.uses_population() => {
            return Err(usage(format!(
                "optimizer {} does not take genetic-operator rates",
                optimizer.as_str()
            )))
        }
        (m, c) => (
            m.unwrap_or(ga_defaults.mutation_rate),
            c.unwrap_or(ga_defaults.crossover_rate),
        ),
    };

    let flash_defaults = FlashParams::default();
    let (flash_initial_samples, flash_eval_budget) = match (args.flash_k, args.flash_evals) {
        (None, None) => (
            flash_defaults.initial_samples,
            flash_defaults.eval_budget,
        ),
        _ if !optimizer.uses_flash_knobs() => {
            return Err(usage(format!(
                "optimizer {} does not take sequential-sampling knobs",
                optimizer.as_str()
            )))
        }
        (k, e) => (
            k.unwrap_or(flash_defaults.initial_samples),
            e.unwrap_or(flash_defaults.eval_budget),
        ),
    };

    let spec = ResolvedSpec {
        source_kind,
        source_path,
        case: String::new(),
        target: String::new(),
        auxiliary: String::new(),
        model,
        normalization,
        weight,
        optimizer,
        budget: args.budget,
        pop,
        repeats,
        seed: args.seed.unwrap_or(DEFAULT_SEED),
        mutation_rate,
        crossover_rate,
        flash_initial_samples,
        flash_eval_budget,
    };

    if optimizer.uses_population() {
        spec.ga_params()
            .validate()
            .map_err(|e| usage(e.to_string()))?;
    }
    if optimizer.uses_flash_knobs() {
        if spec.flash_initial_samples == 0 || spec.flash_eval_budget == 0 {
            return Err(usage("sequential-sampling knobs must be at least 1"));
        }
        if spec.flash_initial_samples > spec.budget {
            return Err(usage(format!(
                "initial sample count {} exceeds the budget {}",
                spec.flash_initial_samples, spec.budget
            )));
        }
    }

    Ok(spec)
}

/// Exactly one source kind; objective labels are required for datasets and
/// fixed for landscapes.
pub fn check_source_flags(
    dataset: &Option<std::path::PathBuf>,
    landscape: &Option<std::path::PathBuf>,
    target: &Option<String>,
    aux: &Option<String>,
) -> anyhow::Result<(SourceKind, String)> {
    match (dataset, landscape) {
        (Some(_), Some(_)) => Err(usage("--dataset and --landscape are mutually exclusive")),
        (None, None) => Err(usage("one of --dataset or --landscape is required")),
        (Some(path), None) => {
            let (Some(t), Some(a)) = (target, aux) else {
                return Err(usage("datasets need both --target and --aux column names"));
            };
            if t == a {
                return Err(usage("--target and --aux must name different columns"));
            }
            Ok((SourceKind::Dataset, path.display().to_string()))
        }
        (None, Some(path)) => {
            if target.is_some() || aux.is_some() {
                return Err(usage(
                    "landscape objectives are fixed (target, auxiliary); drop --target/--aux",
                ));
            }
            Ok((SourceKind::Landscape, path.display().to_string()))
        }
    }
}
