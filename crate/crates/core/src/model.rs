//! Objective models for single-objective configuration tuning.
//!
//! The toolkit minimizes a single *target* objective. Measurements also expose
//! one *auxiliary* objective, which is never optimized for its own sake; it is
//! only leveraged for search diversity. Three models decide how two evaluated
//! configurations compare:
//!
//! * `SingleObjective`: compare raw targets directly.
//! * `Pmo`: plain multi-objectivization, Pareto dominance over the normalized
//!   (target, auxiliary) pair.
//! * `Mmo`: meta multi-objectivization, Pareto dominance over the meta pair
//!   `g1 = f_t + w * f_a` and `g2 = f_t - w * f_a` computed from normalized
//!   objectives. Both meta objectives keep pulling the target down while
//!   pulling the auxiliary in opposite directions, so equal-target
//!   configurations with different auxiliaries stay mutually nondominated.
//!
//! All raw values are *oriented*: maximized measurements are negated at the
//! oracle boundary, so smaller is better everywhere past that point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::Configuration;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("measurement value must be finite, got {value}")]
    NonFinite { value: f64 },
    #[error("weight must be positive and finite, got {weight}")]
    InvalidWeight { weight: f64 },
    #[error("normalization bounds must satisfy lower <= upper, got ({lower}, {upper})")]
    BoundsOrder { lower: f64, upper: f64 },
    #[error("normalization bounds are not initialized")]
    UninitializedBounds,
    #[error("cumulative bound updates require GlobalSoFar mode")]
    ModeMismatch,
    #[error("population must not be empty")]
    EmptyPopulation,
    #[error("objective vectors must share a nonzero length, got {a} and {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("configurations were not evaluated under the same model and bounds snapshot")]
    ComparisonContext,
}

/// Direction of a raw measurement column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    #[serde(rename = "min")]
    Minimize,
    #[serde(rename = "max")]
    Maximize,
}

impl ObjectiveSense {
    pub fn suffix(self) -> &'static str {
        match self {
            ObjectiveSense::Minimize => "min",
            ObjectiveSense::Maximize => "max",
        }
    }
}

/// Map a raw measurement into minimize form: maximized values are negated.
///
/// Non-finite measurements are rejected here, at the oracle boundary, so no
/// NaN ever reaches normalization or dominance comparisons.
pub fn orient(value: f64, sense: ObjectiveSense) -> Result<f64, ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { value });
    }
    Ok(match sense {
        ObjectiveSense::Minimize => value,
        ObjectiveSense::Maximize => -value,
    })
}

/// Oriented raw objective values of one measurement: smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawObjectives {
    pub target: f64,
    pub auxiliary: f64,
}

impl RawObjectives {
    pub fn new(target: f64, auxiliary: f64) -> Self {
        Self { target, auxiliary }
    }
}

/// `(value - lower) / (upper - lower)`; a degenerate range maps to 0.0 so a
/// constant objective drops out of dominance rather than poisoning it.
pub fn normalize(value: f64, lower: f64, upper: f64) -> Result<f64, ModelError> {
    for v in [value, lower, upper] {
        if !v.is_finite() {
            return Err(ModelError::NonFinite { value: v });
        }
    }
    if lower > upper {
        return Err(ModelError::BoundsOrder { lower, upper });
    }
    if lower == upper {
        return Ok(0.0);
    }
    Ok((value - lower) / (upper - lower))
}

/// The two meta objectives of MMO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaObjectives {
    pub g1: f64,
    pub g2: f64,
}

/// `g1 = f_t + w * f_a`, `g2 = f_t - w * f_a` over normalized objectives.
///
/// Invariant: `g1 + g2 == 2 * f_t` up to rounding, which is what makes the
/// target-optimal configuration immune to domination under this model.
pub fn meta_objectives(
    target_norm: f64,
    auxiliary_norm: f64,
    weight: f64,
) -> Result<MetaObjectives, ModelError> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(ModelError::InvalidWeight { weight });
    }
    for v in [target_norm, auxiliary_norm] {
        if !v.is_finite() {
            return Err(ModelError::NonFinite { value: v });
        }
    }
    Ok(MetaObjectives {
        g1: target_norm + weight * auxiliary_norm,
        g2: target_norm - weight * auxiliary_norm,
    })
}

/// Which bound set normalization uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMode {
    /// Cumulative min/max over every value measured so far; monotone widening.
    GlobalSoFar,
    /// Min/max of the population under comparison, reset every generation.
    CurrentPopulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBounds {
    pub lower: f64,
    pub upper: f64,
}

impl ObjectiveBounds {
    fn from_values(values: impl Iterator<Item = f64>) -> Option<Self> {
        let mut bounds: Option<ObjectiveBounds> = None;
        for v in values {
            let b = bounds.get_or_insert(ObjectiveBounds { lower: v, upper: v });
            b.lower = b.lower.min(v);
            b.upper = b.upper.max(v);
        }
        bounds
    }
}

/// Per-objective normalization bounds plus the mode that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBounds {
    mode: BoundsMode,
    target: Option<ObjectiveBounds>,
    auxiliary: Option<ObjectiveBounds>,
}

impl NormalizationBounds {
    /// Uninitialized cumulative bounds; seeded by the first update batch.
    pub fn empty_global() -> Self {
        Self {
            mode: BoundsMode::GlobalSoFar,
            target: None,
            auxiliary: None,
        }
    }

    /// Bounds reset to the exact min/max of `population`, per objective.
    pub fn reset_from_population(population: &[RawObjectives]) -> Result<Self, ModelError> {
        if population.is_empty() {
            return Err(ModelError::EmptyPopulation);
        }
        for raw in population {
            for v in [raw.target, raw.auxiliary] {
                if !v.is_finite() {
                    return Err(ModelError::NonFinite { value: v });
                }
            }
        }
        Ok(Self {
            mode: BoundsMode::CurrentPopulation,
            target: ObjectiveBounds::from_values(population.iter().map(|r| r.target)),
            auxiliary: ObjectiveBounds::from_values(population.iter().map(|r| r.auxiliary)),
        })
    }

    /// Widen cumulative bounds with a new batch of measurements. Bounds only
    /// ever grow, so re-normalized history stays within [0, 1].
    pub fn update_global(&mut self, batch: &[RawObjectives]) -> Result<(), ModelError> {
        if self.mode != BoundsMode::GlobalSoFar {
            return Err(ModelError::ModeMismatch);
        }
        for raw in batch {
            for v in [raw.target, raw.auxiliary] {
                if !v.is_finite() {
                    return Err(ModelError::NonFinite { value: v });
                }
            }
            widen(&mut self.target, raw.target);
            widen(&mut self.auxiliary, raw.auxiliary);
        }
        Ok(())
    }

    pub fn mode(&self) -> BoundsMode {
        self.mode
    }

    pub fn target(&self) -> Option<ObjectiveBounds> {
        self.target
    }

    pub fn auxiliary(&self) -> Option<ObjectiveBounds> {
        self.auxiliary
    }

    pub fn is_initialized(&self) -> bool {
        self.target.is_some() && self.auxiliary.is_some()
    }

    /// Normalize both objectives of one measurement under these bounds.
    pub fn normalize_raw(&self, raw: &RawObjectives) -> Result<(f64, f64), ModelError> {
        let t = self.target.ok_or(ModelError::UninitializedBounds)?;
        let a = self.auxiliary.ok_or(ModelError::UninitializedBounds)?;
        Ok((
            normalize(raw.target, t.lower, t.upper)?,
            normalize(raw.auxiliary, a.lower, a.upper)?,
        ))
    }
}

fn widen(slot: &mut Option<ObjectiveBounds>, value: f64) {
    let b = slot.get_or_insert(ObjectiveBounds {
        lower: value,
        upper: value,
    });
    b.lower = b.lower.min(value);
    b.upper = b.upper.max(value);
}

/// How an optimizer compares two evaluated configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizationModel {
    SingleObjective,
    Pmo { normalization: BoundsMode },
    Mmo { weight: f64, normalization: BoundsMode },
}

impl OptimizationModel {
    /// MMO in its parameter-free form: weight 1 over population-reset bounds.
    pub fn mmo_default() -> Self {
        OptimizationModel::Mmo {
            weight: 1.0,
            normalization: BoundsMode::CurrentPopulation,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if let OptimizationModel::Mmo { weight, .. } = *self {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(ModelError::InvalidWeight { weight });
            }
        }
        Ok(())
    }

    pub fn normalization(&self) -> Option<BoundsMode> {
        match *self {
            OptimizationModel::SingleObjective => None,
            OptimizationModel::Pmo { normalization } => Some(normalization),
            OptimizationModel::Mmo { normalization, .. } => Some(normalization),
        }
    }

    pub fn is_multi_objective(&self) -> bool {
        !matches!(self, OptimizationModel::SingleObjective)
    }
}

/// Exact Pareto dominance: `a` dominates `b` iff no component of `a` is worse
/// and at least one is strictly better. No epsilon; measured floats compare
/// bit-for-bit.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, ModelError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(ModelError::DimensionMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let mut strictly_better = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return Ok(false);
        }
        if x < y {
            strictly_better = true;
        }
    }
    Ok(strictly_better)
}

/// Outcome of comparing two configurations under a model. `Equal` is kept
/// apart from `Nondominated` so duplicate objective vectors can be detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    ADominates,
    BDominates,
    Nondominated,
    Equal,
}

/// Compare two objective vectors of equal length.
pub fn compare_vectors(a: &[f64], b: &[f64]) -> Result<Comparison, ModelError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(ModelError::DimensionMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a == b {
        return Ok(Comparison::Equal);
    }
    if dominates(a, b)? {
        Ok(Comparison::ADominates)
    } else if dominates(b, a)? {
        Ok(Comparison::BDominates)
    } else {
        Ok(Comparison::Nondominated)
    }
}

/// A measured configuration plus the derived values of one evaluation pass.
///
/// `snapshot` identifies the bounds application that produced the derived
/// values; comparing configurations from different snapshots is refused
/// because their normalized scales need not agree.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedConfig {
    pub config: Configuration,
    pub raw: RawObjectives,
    normalized: Option<(f64, f64)>,
    meta: Option<MetaObjectives>,
    snapshot: u64,
}

impl EvaluatedConfig {
    pub fn new(config: Configuration, raw: RawObjectives) -> Self {
        Self {
            config,
            raw,
            normalized: None,
            meta: None,
            snapshot: 0,
        }
    }

    /// Derive normalized (and for MMO, meta) objectives under `bounds`,
    /// stamping the evaluation with `snapshot`.
    pub fn evaluate(
        &mut self,
        model: &OptimizationModel,
        bounds: &NormalizationBounds,
        snapshot: u64,
    ) -> Result<(), ModelError> {
        match model {
            OptimizationModel::SingleObjective => {
                self.normalized = None;
                self.meta = None;
            }
            OptimizationModel::Pmo { .. } => {
                self.normalized = Some(bounds.normalize_raw(&self.raw)?);
                self.meta = None;
            }
            OptimizationModel::Mmo { weight, .. } => {
                let (t, a) = bounds.normalize_raw(&self.raw)?;
                self.normalized = Some((t, a));
                self.meta = Some(meta_objectives(t, a, *weight)?);
            }
        }
        self.snapshot = snapshot;
        Ok(())
    }

    pub fn normalized(&self) -> Option<(f64, f64)> {
        self.normalized
    }

    pub fn meta(&self) -> Option<MetaObjectives> {
        self.meta
    }

    pub fn snapshot(&self) -> u64 {
        self.snapshot
    }

    /// The objective vector the model sorts and compares by.
    pub fn objective_vector(&self, model: &OptimizationModel) -> Result<Vec<f64>, ModelError> {
        match model {
            OptimizationModel::SingleObjective => Ok(vec![self.raw.target]),
            OptimizationModel::Pmo { .. } => {
                let (t, a) = self.normalized.ok_or(ModelError::ComparisonContext)?;
                Ok(vec![t, a])
            }
            OptimizationModel::Mmo { .. } => {
                let m = self.meta.ok_or(ModelError::ComparisonContext)?;
                Ok(vec![m.g1, m.g2])
            }
        }
    }
}

/// Compare two evaluated configurations under `model`.
///
/// Multi-objective models require both sides to carry derived values from the
/// same bounds snapshot; otherwise the comparison context is rejected.
pub fn compare_under_model(
    a: &EvaluatedConfig,
    b: &EvaluatedConfig,
    model: &OptimizationModel,
) -> Result<Comparison, ModelError> {
    model.validate()?;
    if model.is_multi_objective() && a.snapshot != b.snapshot {
        return Err(ModelError::ComparisonContext);
    }
    let va = a.objective_vector(model)?;
    let vb = b.objective_vector(model)?;
    compare_vectors(&va, &vb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn raw(t: f64, a: f64) -> RawObjectives {
        RawObjectives::new(t, a)
    }

    #[test]
    fn orient_negates_maximized_measurements() {
        assert_eq!(orient(3.33, ObjectiveSense::Maximize).unwrap(), -3.33);
        assert_eq!(orient(30.0, ObjectiveSense::Minimize).unwrap(), 30.0);
        assert!(matches!(
            orient(f64::NAN, ObjectiveSense::Minimize),
            Err(ModelError::NonFinite { .. })
        ));
        assert!(orient(f64::INFINITY, ObjectiveSense::Maximize).is_err());
    }

    #[test]
    fn normalize_fixtures() {
        assert_eq!(normalize(30.0, 10.0, 50.0).unwrap(), 0.5);
        assert_eq!(normalize(7.0, 7.0, 7.0).unwrap(), 0.0, "degenerate range");
        assert_eq!(normalize(10.0, 10.0, 50.0).unwrap(), 0.0);
        assert_eq!(normalize(50.0, 10.0, 50.0).unwrap(), 1.0);
        assert!(matches!(
            normalize(1.0, 5.0, 2.0),
            Err(ModelError::BoundsOrder { .. })
        ));
        assert!(normalize(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn meta_objectives_fixtures() {
        let m = meta_objectives(0.3, 0.5, 1.0).unwrap();
        assert!((m.g1 - 0.8).abs() < 1e-12);
        assert!((m.g2 - (-0.2)).abs() < 1e-12);
        let m = meta_objectives(0.5, 0.2, 10.0).unwrap();
        assert!((m.g1 - 2.5).abs() < 1e-12);
        assert!((m.g2 - (-1.5)).abs() < 1e-12);
        assert!(matches!(
            meta_objectives(0.5, 0.5, 0.0),
            Err(ModelError::InvalidWeight { .. })
        ));
        assert!(meta_objectives(0.5, 0.5, -1.0).is_err());
        assert!(meta_objectives(0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn meta_sum_recovers_twice_the_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let t: f64 = rng.gen_range(-5.0..5.0);
            let a: f64 = rng.gen_range(-5.0..5.0);
            let w: f64 = rng.gen_range(0.01..10.0);
            let m = meta_objectives(t, a, w).unwrap();
            assert!(
                (m.g1 + m.g2 - 2.0 * t).abs() <= 1e-9,
                "g1 + g2 must equal 2*f_t, got {} vs {}",
                m.g1 + m.g2,
                2.0 * t
            );
        }
    }

    #[test]
    fn dominance_is_exact_and_needs_a_strict_edge() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), "equal vectors");
        assert!(!dominates(&[1.0, 3.0], &[2.0, 2.0]).unwrap(), "trade-off");
        assert!(!dominates(&[2.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0]),
            Err(ModelError::DimensionMismatch { a: 1, b: 2 })
        ));
        assert!(dominates(&[], &[]).is_err());
    }

    #[test]
    fn compare_vectors_distinguishes_equal_from_nondominated() {
        assert_eq!(
            compare_vectors(&[1.0, 2.0], &[1.0, 2.0]).unwrap(),
            Comparison::Equal
        );
        assert_eq!(
            compare_vectors(&[1.0, 2.0], &[2.0, 3.0]).unwrap(),
            Comparison::ADominates
        );
        assert_eq!(
            compare_vectors(&[2.0, 3.0], &[1.0, 2.0]).unwrap(),
            Comparison::BDominates
        );
        assert_eq!(
            compare_vectors(&[1.0, 3.0], &[2.0, 2.0]).unwrap(),
            Comparison::Nondominated
        );
    }

    #[test]
    fn population_bounds_reset_to_exact_extrema() {
        let pop = [raw(95.0, 0.0), raw(400.0, 0.0), raw(1800.0, 0.0)];
        let b = NormalizationBounds::reset_from_population(&pop).unwrap();
        assert_eq!(b.mode(), BoundsMode::CurrentPopulation);
        let t = b.target().unwrap();
        assert_eq!((t.lower, t.upper), (95.0, 1800.0));

        let pop = [raw(1.0, 9.0), raw(3.0, 7.0)];
        let b = NormalizationBounds::reset_from_population(&pop).unwrap();
        let t = b.target().unwrap();
        let a = b.auxiliary().unwrap();
        assert_eq!((t.lower, t.upper), (1.0, 3.0));
        assert_eq!((a.lower, a.upper), (7.0, 9.0));

        assert_eq!(
            NormalizationBounds::reset_from_population(&[]).unwrap_err(),
            ModelError::EmptyPopulation
        );
    }

    #[test]
    fn global_bounds_widen_monotonically() {
        let mut b = NormalizationBounds::empty_global();
        assert!(!b.is_initialized());
        assert!(matches!(
            b.normalize_raw(&raw(1.0, 1.0)),
            Err(ModelError::UninitializedBounds)
        ));

        b.update_global(&[raw(5.0, 5.0), raw(9.0, 9.0)]).unwrap();
        let t = b.target().unwrap();
        assert_eq!((t.lower, t.upper), (5.0, 9.0), "seeded from first batch");

        b.update_global(&[raw(10.0, 7.0), raw(50.0, 7.0), raw(60.0, 7.0)])
            .unwrap();
        let t = b.target().unwrap();
        assert_eq!((t.lower, t.upper), (5.0, 60.0));

        // A narrower batch never shrinks the range.
        b.update_global(&[raw(20.0, 8.0)]).unwrap();
        let t = b.target().unwrap();
        assert_eq!((t.lower, t.upper), (5.0, 60.0));

        let mut pop_bounds =
            NormalizationBounds::reset_from_population(&[raw(1.0, 1.0)]).unwrap();
        assert_eq!(
            pop_bounds.update_global(&[raw(0.0, 0.0)]).unwrap_err(),
            ModelError::ModeMismatch
        );
    }

    #[test]
    fn compare_under_model_rejects_mixed_snapshots() {
        let model = OptimizationModel::mmo_default();
        let pop = [raw(1.0, 9.0), raw(3.0, 7.0)];
        let bounds = NormalizationBounds::reset_from_population(&pop).unwrap();
        let mut a = EvaluatedConfig::new(Configuration::new(vec![0]), pop[0]);
        let mut b = EvaluatedConfig::new(Configuration::new(vec![1]), pop[1]);
        a.evaluate(&model, &bounds, 1).unwrap();
        b.evaluate(&model, &bounds, 2).unwrap();
        assert_eq!(
            compare_under_model(&a, &b, &model).unwrap_err(),
            ModelError::ComparisonContext
        );
        b.evaluate(&model, &bounds, 1).unwrap();
        assert!(compare_under_model(&a, &b, &model).is_ok());

        // Missing derived values are also a context error.
        let c = EvaluatedConfig::new(Configuration::new(vec![0]), pop[0]);
        let mut d = EvaluatedConfig::new(Configuration::new(vec![1]), pop[1]);
        d.evaluate(&model, &bounds, 0).unwrap();
        assert_eq!(
            compare_under_model(&c, &d, &model).unwrap_err(),
            ModelError::ComparisonContext
        );
    }

    #[test]
    fn single_objective_comparison_is_total() {
        let model = OptimizationModel::SingleObjective;
        let a = EvaluatedConfig::new(Configuration::new(vec![0]), raw(1.0, 99.0));
        let b = EvaluatedConfig::new(Configuration::new(vec![1]), raw(2.0, -99.0));
        let c = EvaluatedConfig::new(Configuration::new(vec![2]), raw(1.0, 5.0));
        assert_eq!(
            compare_under_model(&a, &b, &model).unwrap(),
            Comparison::ADominates
        );
        assert_eq!(
            compare_under_model(&b, &a, &model).unwrap(),
            Comparison::BDominates
        );
        assert_eq!(
            compare_under_model(&a, &c, &model).unwrap(),
            Comparison::Equal,
            "auxiliary plays no role under the single-objective model"
        );
    }

    #[test]
    fn equal_target_members_stay_nondominated_under_mmo() {
        // Equal normalized targets with different auxiliaries never dominate
        // one another, for any weight: the auxiliary pulls g1 and g2 in
        // opposite directions.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let t: f64 = rng.gen_range(0.0..1.0);
            let (a1, a2) = loop {
                let a1: f64 = rng.gen_range(0.0..1.0);
                let a2: f64 = rng.gen_range(0.0..1.0);
                if a1 != a2 {
                    break (a1, a2);
                }
            };
            let w: f64 = rng.gen_range(0.01..10.0);
            let ma = meta_objectives(t, a1, w).unwrap();
            let mb = meta_objectives(t, a2, w).unwrap();
            assert_eq!(
                compare_vectors(&[ma.g1, ma.g2], &[mb.g1, mb.g2]).unwrap(),
                Comparison::Nondominated
            );
        }
    }

    #[test]
    fn equal_auxiliary_members_reduce_to_target_comparison() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2000 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let (t1, t2) = loop {
                let t1: f64 = rng.gen_range(0.0..1.0);
                let t2: f64 = rng.gen_range(0.0..1.0);
                if t1 != t2 {
                    break (t1, t2);
                }
            };
            let w: f64 = rng.gen_range(0.01..10.0);
            let ma = meta_objectives(t1, a, w).unwrap();
            let mb = meta_objectives(t2, a, w).unwrap();
            let cmp = compare_vectors(&[ma.g1, ma.g2], &[mb.g1, mb.g2]).unwrap();
            let want = if t1 < t2 {
                Comparison::ADominates
            } else {
                Comparison::BDominates
            };
            assert_eq!(cmp, want, "equal auxiliaries degenerate to single-objective");
        }
    }
}
