//! Seeded synthetic tuning landscapes over discrete option grids.
//!
//! The target objective is a sum of Gaussian depressions ("bumps") over the
//! unit hypercube spanned by normalized level indices, plus a per-configuration
//! rugged perturbation derived from the seed by integer hashing. Everything is
//! computed in fixed evaluation order with plain f64 arithmetic, so a given
//! (seed, configuration) pair always yields the same value and a regenerated
//! landscape is identical to the original.
//!
//! The auxiliary objective follows the configured correlation regime:
//! harmonic tracks the target's bump structure, conflicting inverts it, and
//! mixed draws an independent bump set. All regimes add their own rugged term,
//! so equal-target configurations usually differ on the auxiliary.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::measure::{Dataset, MeasureError, MeasurementSource};
use crate::model::{ObjectiveSense, RawObjectives};
use crate::space::{ConfigSpace, Configuration};

/// Largest space the generator will enumerate.
pub const ENUMERATION_LIMIT: usize = 1_000_000;

/// Relationship between the auxiliary and the target objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationRegime {
    Harmonic,
    Conflicting,
    Mixed,
}

/// Everything needed to regenerate a landscape bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSpec {
    pub seed: u64,
    /// Level count per option.
    pub option_levels: Vec<usize>,
    /// Number of Gaussian depressions in the target surface.
    pub bumps: usize,
    /// Amplitude of the per-configuration rugged perturbation.
    pub ruggedness: f64,
    pub correlation: CorrelationRegime,
}

/// Manifest emitted beside generated landscapes: the spec plus the audited
/// ground truth (enumerated optimum and local-optima census).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeManifest {
    pub spec: LandscapeSpec,
    pub space_size: usize,
    pub global_optimum_config: Vec<usize>,
    pub global_optimum_target: f64,
    pub local_optima: usize,
}

#[derive(Debug, Clone)]
struct Bump {
    center: Vec<f64>,
    width: f64,
    depth: f64,
}

/// A fully enumerated synthetic landscape.
#[derive(Debug, Clone)]
pub struct SyntheticLandscape {
    spec: LandscapeSpec,
    name: String,
    space: ConfigSpace,
    target_values: Vec<f64>,
    auxiliary_values: Vec<f64>,
    global_optimum: (Configuration, f64),
    local_optima: usize,
}

const AUX_BUMP_SALT: u64 = 0x9E37_79B9_7F4A_7C15;
const TARGET_NOISE_SALT: u64 = 0xA076_1D64_78BD_642F;
const AUX_NOISE_SALT: u64 = 0xE703_7ED1_A0B4_28DB;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-configuration noise in [-1, 1).
fn hash_noise(seed: u64, salt: u64, index: usize) -> f64 {
    let h = splitmix64(seed ^ salt ^ splitmix64(index as u64 + 1));
    ((h >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
}

fn draw_bumps<R: Rng>(rng: &mut R, count: usize, dims: usize) -> Vec<Bump> {
    (0..count)
        .map(|_| {
            let center = (0..dims).map(|_| rng.gen_range(0.0..1.0)).collect();
            let width = rng.gen_range(0.05..0.3);
            let depth = rng.gen_range(0.5..1.5);
            Bump {
                center,
                width,
                depth,
            }
        })
        .collect()
}

fn bump_field(coords: &[f64], bumps: &[Bump]) -> f64 {
    let mut v = 0.0;
    for b in bumps {
        let mut d2 = 0.0;
        for (x, c) in coords.iter().zip(&b.center) {
            let d = x - c;
            d2 += d * d;
        }
        v -= b.depth * (-d2 / (2.0 * b.width * b.width)).exp();
    }
    v
}

impl SyntheticLandscape {
    pub fn generate(spec: LandscapeSpec) -> Result<Self, MeasureError> {
        if spec.bumps == 0 {
            return Err(MeasureError::LandscapeSpec(
                "bump count must be at least 1".into(),
            ));
        }
        if !(spec.ruggedness.is_finite() && spec.ruggedness >= 0.0) {
            return Err(MeasureError::LandscapeSpec(format!(
                "ruggedness must be finite and non-negative, got {}",
                spec.ruggedness
            )));
        }
        let space = ConfigSpace::from_level_counts(&spec.option_levels)?;
        if space.size() > ENUMERATION_LIMIT {
            return Err(MeasureError::SpaceTooLarge {
                size: space.size(),
                limit: ENUMERATION_LIMIT,
            });
        }

        let dims = space.option_count();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let target_bumps = draw_bumps(&mut rng, spec.bumps, dims);
        let mut aux_rng = ChaCha8Rng::seed_from_u64(spec.seed ^ AUX_BUMP_SALT);
        let aux_bumps = draw_bumps(&mut aux_rng, spec.bumps, dims);

        let size = space.size();
        let mut target_values = Vec::with_capacity(size);
        let mut auxiliary_values = Vec::with_capacity(size);
        let mut coords = vec![0.0f64; dims];
        for (index, config) in space.iter().enumerate() {
            for ((slot, &level), opt) in coords
                .iter_mut()
                .zip(config.levels())
                .zip(space.options())
            {
                let span = opt.levels() - 1;
                *slot = if span == 0 {
                    0.0
                } else {
                    level as f64 / span as f64
                };
            }
            let base = bump_field(&coords, &target_bumps);
            target_values
                .push(10.0 + base + spec.ruggedness * hash_noise(spec.seed, TARGET_NOISE_SALT, index));
            let aux_base = match spec.correlation {
                CorrelationRegime::Harmonic => base,
                CorrelationRegime::Conflicting => -base,
                CorrelationRegime::Mixed => bump_field(&coords, &aux_bumps),
            };
            auxiliary_values
                .push(10.0 + aux_base + spec.ruggedness * hash_noise(spec.seed, AUX_NOISE_SALT, index));
        }

        let best_index = target_values
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
            .map(|(i, _)| i)
            .expect("space is nonempty");
        let global_optimum = (space.config_at(best_index), target_values[best_index]);
        let local_optima = count_local_optima(&space, &target_values);

        let name = format!(
            "synthetic-s{}-{}",
            spec.seed,
            spec.option_levels
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join("x")
        );
        Ok(Self {
            spec,
            name,
            space,
            target_values,
            auxiliary_values,
            global_optimum,
            local_optima,
        })
    }

    pub fn spec(&self) -> &LandscapeSpec {
        &self.spec
    }

    /// Enumerated argmin of the target; ties fall to the smallest index.
    pub fn global_optimum(&self) -> (&Configuration, f64) {
        (&self.global_optimum.0, self.global_optimum.1)
    }

    /// Configurations strictly better than all one-option-change neighbors.
    pub fn local_optima(&self) -> usize {
        self.local_optima
    }

    pub fn manifest(&self) -> LandscapeManifest {
        LandscapeManifest {
            spec: self.spec.clone(),
            space_size: self.space.size(),
            global_optimum_config: self.global_optimum.0.levels().to_vec(),
            global_optimum_target: self.global_optimum.1,
            local_optima: self.local_optima,
        }
    }

    /// Parse either a full manifest or a bare spec, regenerate, and when the
    /// input was a manifest audit its recorded ground truth against the
    /// regenerated landscape.
    pub fn from_json(text: &str) -> Result<Self, MeasureError> {
        if let Ok(manifest) = serde_json::from_str::<LandscapeManifest>(text) {
            let landscape = Self::generate(manifest.spec.clone())?;
            let fresh = landscape.manifest();
            if fresh != manifest {
                return Err(MeasureError::ManifestMismatch(format!(
                    "recorded ground truth does not match the regenerated landscape \
                     (recorded optimum {:?} at {}, regenerated {:?} at {})",
                    manifest.global_optimum_config,
                    manifest.global_optimum_target,
                    fresh.global_optimum_config,
                    fresh.global_optimum_target,
                )));
            }
            return Ok(landscape);
        }
        let spec: LandscapeSpec = serde_json::from_str(text).map_err(|e| {
            MeasureError::LandscapeSpec(format!("neither a manifest nor a spec: {e}"))
        })?;
        Self::generate(spec)
    }

    /// Materialize the full table as a dataset (option values are the level
    /// indices; both objectives minimize).
    pub fn to_dataset(&self) -> Dataset {
        let rows = self
            .space
            .iter()
            .enumerate()
            .map(|(i, config)| {
                (
                    config.levels().iter().map(|&l| l as f64).collect(),
                    self.target_values[i],
                    self.auxiliary_values[i],
                )
            })
            .collect::<Vec<_>>();
        let names: Vec<String> = self
            .space
            .options()
            .iter()
            .map(|o| o.name.clone())
            .collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Dataset::from_rows(
            self.name.clone(),
            &name_refs,
            &rows,
            "target",
            ObjectiveSense::Minimize,
            "auxiliary",
            ObjectiveSense::Minimize,
        )
        .expect("enumerated table always covers its space")
    }
}

fn count_local_optima(space: &ConfigSpace, values: &[f64]) -> usize {
    // Stride per option for linear-index arithmetic; last option fastest.
    let mut strides = vec![1usize; space.option_count()];
    for i in (0..space.option_count().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * space.options()[i + 1].levels();
    }
    let mut count = 0;
    'config: for (index, config) in space.iter().enumerate() {
        let v = values[index];
        for (opt_idx, (&level, opt)) in config.levels().iter().zip(space.options()).enumerate() {
            let row_base = index - level * strides[opt_idx];
            for other in 0..opt.levels() {
                if other == level {
                    continue;
                }
                if values[row_base + other * strides[opt_idx]] <= v {
                    continue 'config;
                }
            }
        }
        count += 1;
    }
    count
}

impl MeasurementSource for SyntheticLandscape {
    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn objective_labels(&self) -> (&str, &str) {
        ("target", "auxiliary")
    }

    fn objective_senses(&self) -> (ObjectiveSense, ObjectiveSense) {
        (ObjectiveSense::Minimize, ObjectiveSense::Minimize)
    }

    fn measure_raw(&self, config: &Configuration) -> Result<RawObjectives, MeasureError> {
        self.space.validate(config)?;
        let index = self.space.index_of(config);
        Ok(RawObjectives::new(
            self.target_values[index],
            self.auxiliary_values[index],
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> LandscapeSpec {
        LandscapeSpec {
            seed,
            option_levels: vec![55, 55],
            bumps: 20,
            ruggedness: 0.3,
            correlation: CorrelationRegime::Mixed,
        }
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let a = SyntheticLandscape::generate(spec(7)).unwrap();
        let b = SyntheticLandscape::generate(spec(7)).unwrap();
        assert_eq!(a.target_values, b.target_values);
        assert_eq!(a.auxiliary_values, b.auxiliary_values);
        assert_eq!(a.manifest(), b.manifest());
        let c = SyntheticLandscape::generate(spec(8)).unwrap();
        assert_ne!(a.target_values, c.target_values, "seed changes the surface");
    }

    #[test]
    fn optimum_matches_exhaustive_enumeration() {
        let l = SyntheticLandscape::generate(spec(3)).unwrap();
        let (best_config, best_value) = l.global_optimum();
        let mut seen_best = f64::INFINITY;
        for config in l.space().iter() {
            let raw = l.measure_raw(&config).unwrap();
            seen_best = seen_best.min(raw.target);
        }
        assert_eq!(best_value, seen_best);
        assert_eq!(l.measure_raw(best_config).unwrap().target, best_value);
    }

    #[test]
    fn unimodal_spec_has_exactly_one_local_optimum() {
        let l = SyntheticLandscape::generate(LandscapeSpec {
            seed: 5,
            option_levels: vec![41],
            bumps: 1,
            ruggedness: 0.0,
            correlation: CorrelationRegime::Harmonic,
        })
        .unwrap();
        assert_eq!(l.local_optima(), 1);
    }

    // A local optimum must strictly beat every one-option-change neighbor,
    // so low-dimensional grids with long rows hold very few of them. This
    // shape keeps the neighborhood small; its calibrated census is 52.
    #[test]
    fn rugged_fixture_is_genuinely_multimodal() {
        let l = SyntheticLandscape::generate(LandscapeSpec {
            seed: 7,
            option_levels: vec![8, 8, 8, 6],
            bumps: 20,
            ruggedness: 0.8,
            correlation: CorrelationRegime::Mixed,
        })
        .unwrap();
        assert_eq!(l.space().size(), 3072);
        assert!(
            l.local_optima() >= 20,
            "fixture must be genuinely multimodal, found {} local optima",
            l.local_optima()
        );
    }

    #[test]
    fn manifest_round_trips_and_audits() {
        let l = SyntheticLandscape::generate(spec(11)).unwrap();
        let json = serde_json::to_string(&l.manifest()).unwrap();
        let reloaded = SyntheticLandscape::from_json(&json).unwrap();
        assert_eq!(reloaded.manifest(), l.manifest());

        // A tampered manifest is rejected.
        let mut manifest = l.manifest();
        manifest.local_optima += 1;
        let bad = serde_json::to_string(&manifest).unwrap();
        assert!(matches!(
            SyntheticLandscape::from_json(&bad),
            Err(MeasureError::ManifestMismatch(_))
        ));

        // A bare spec is accepted too.
        let spec_json = serde_json::to_string(l.spec()).unwrap();
        let from_spec = SyntheticLandscape::from_json(&spec_json).unwrap();
        assert_eq!(from_spec.manifest(), l.manifest());
    }

    #[test]
    fn oversized_spaces_are_refused() {
        let err = SyntheticLandscape::generate(LandscapeSpec {
            seed: 1,
            option_levels: vec![101, 101, 101],
            bumps: 2,
            ruggedness: 0.1,
            correlation: CorrelationRegime::Mixed,
        })
        .unwrap_err();
        assert!(matches!(err, MeasureError::SpaceTooLarge { .. }));
    }

    #[test]
    fn dataset_export_matches_the_landscape() {
        let l = SyntheticLandscape::generate(LandscapeSpec {
            seed: 2,
            option_levels: vec![6, 5],
            bumps: 3,
            ruggedness: 0.2,
            correlation: CorrelationRegime::Conflicting,
        })
        .unwrap();
        let ds = l.to_dataset();
        assert_eq!(ds.space().size(), 30);
        for config in l.space().iter() {
            assert_eq!(
                ds.measure_raw(&config).unwrap(),
                l.measure_raw(&config).unwrap()
            );
        }
    }
}
