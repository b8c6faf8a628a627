//! Configuration-tuning toolkit built around one idea: turn a
//! single-objective tuning problem into a two-objective one on purpose, so
//! population search keeps diverse configurations alive and escapes local
//! optima, while the final answer is still judged on the original target.
//!
//! The pieces compose left to right:
//!
//! * [`space`]: finite configuration spaces (options with ordered levels).
//! * [`model`]: objective orientation, normalization bounds, the meta
//!   two-objective transformation, and Pareto comparisons.
//! * [`measure`]: measurement sources (CSV datasets, synthetic landscapes),
//!   budget accounting with charge-once caching.
//! * [`landscape`]: seeded synthetic tuning landscapes with a known optimum.
//! * [`search`]: budget-driven optimizers, from random search to NSGA-II
//!   over the meta-objective model.
//! * [`surrogate`]: CART-based sequential model-based search.
//! * [`analysis`]: effect sizes, rank tests, mean clustering, speedups, and
//!   budget calibration for comparing tuners.
//!
//! Determinism is a contract: any run is a pure function of its inputs and
//! one RNG seed.

pub mod analysis;
pub mod landscape;
pub mod measure;
pub mod model;
pub mod search;
pub mod space;
pub mod surrogate;

pub use analysis::{
    a12, best_change_fraction, calibrate_budget, compare_groups, comparison_rows_json,
    min_weight_budget_proportion, scott_knott, select_best, significance_census, speedup,
    tabulate, wilcoxon_rank_sum, wilcoxon_signed_rank, write_comparison_csv, AnalysisError,
    CalibrationPoint, ComparisonRow, ComparisonVerdict, MeanTieRule, Outcome, ProportionSweep,
    SampleGroup, Speedup, WinLossTie, COMPARISON_CSV_HEADER,
};
pub use landscape::{CorrelationRegime, LandscapeManifest, LandscapeSpec, SyntheticLandscape};
pub use measure::{BudgetLedger, Dataset, MeasureError, MeasurementSource};
pub use model::{
    compare_under_model, dominates, meta_objectives, normalize, orient, BoundsMode, Comparison,
    EvaluatedConfig, MetaObjectives, ModelError, NormalizationBounds, ObjectiveSense,
    OptimizationModel, RawObjectives,
};
pub use search::{
    hill_climb_restart, mmo_on_nsga2, random_search, simulated_annealing, soga, GaParams,
    Nsga2Options, Nsga2Run, RunTrace, SaParams, SearchError, TracePoint,
};
pub use space::{ConfigSpace, Configuration, OptionSpec, SpaceError};
pub use surrogate::{
    fit_cart, flash, flash_mmo, CartParams, CartTree, FlashParams, InnerSearchParams,
    SurrogateBundle, SurrogateError,
};
