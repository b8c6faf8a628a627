//! Configuration spaces: named options over ordered discrete levels.
//!
//! A configuration is a vector of level *indices*, one per option, in option
//! order. Level indices are the unit the whole toolkit works in; the numeric
//! level values themselves only matter at dataset boundaries.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("space declares no options")]
    NoOptions,
    #[error("option `{name}` declares no levels")]
    EmptyOption { name: String },
    #[error("option `{name}` level values must be strictly increasing")]
    UnorderedLevels { name: String },
    #[error("configuration has {got} options, space has {want}")]
    ArityMismatch { got: usize, want: usize },
    #[error("option `{name}` has {levels} levels, level index {index} is out of range")]
    LevelOutOfRange {
        name: String,
        levels: usize,
        index: usize,
    },
    #[error("option space size overflows usize")]
    SizeOverflow,
}

/// One tunable option: a name plus its ordered list of level values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub name: String,
    /// Strictly increasing numeric values, one per level.
    pub values: Vec<f64>,
}

impl OptionSpec {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    /// Levels as plain indices 0..count, for sources that never expose values.
    pub fn indexed(name: impl Into<String>, count: usize) -> Self {
        Self {
            name: name.into(),
            values: (0..count).map(|i| i as f64).collect(),
        }
    }

    pub fn levels(&self) -> usize {
        self.values.len()
    }
}

/// A single configuration, stored as one level index per option.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    levels: Vec<usize>,
}

impl Configuration {
    pub fn new(levels: Vec<usize>) -> Self {
        Self { levels }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, option: usize) -> usize {
        self.levels[option]
    }

    pub fn set_level(&mut self, option: usize, level: usize) {
        self.levels[option] = level;
    }

    pub fn arity(&self) -> usize {
        self.levels.len()
    }
}

impl std::fmt::Display for Configuration {
    /// Semicolon-joined level indices, the on-disk form used by results files.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The Cartesian product of all option levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSpace {
    options: Vec<OptionSpec>,
    size: usize,
}

impl ConfigSpace {
    pub fn new(options: Vec<OptionSpec>) -> Result<Self, SpaceError> {
        if options.is_empty() {
            return Err(SpaceError::NoOptions);
        }
        let mut size: usize = 1;
        for opt in &options {
            if opt.values.is_empty() {
                return Err(SpaceError::EmptyOption {
                    name: opt.name.clone(),
                });
            }
            if opt.values.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(SpaceError::UnorderedLevels {
                    name: opt.name.clone(),
                });
            }
            size = size
                .checked_mul(opt.values.len())
                .ok_or(SpaceError::SizeOverflow)?;
        }
        Ok(Self { options, size })
    }

    /// Space with options named `opt1..optN` whose values are bare indices.
    pub fn from_level_counts(counts: &[usize]) -> Result<Self, SpaceError> {
        let options = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| OptionSpec::indexed(format!("opt{}", i + 1), c))
            .collect();
        Self::new(options)
    }

    pub fn options(&self) -> &[OptionSpec] {
        &self.options
    }

    pub fn option_count(&self) -> usize {
        self.options.len()
    }

    /// Number of configurations in the space.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn validate(&self, config: &Configuration) -> Result<(), SpaceError> {
        if config.arity() != self.options.len() {
            return Err(SpaceError::ArityMismatch {
                got: config.arity(),
                want: self.options.len(),
            });
        }
        for (opt, &level) in self.options.iter().zip(config.levels()) {
            if level >= opt.levels() {
                return Err(SpaceError::LevelOutOfRange {
                    name: opt.name.clone(),
                    levels: opt.levels(),
                    index: level,
                });
            }
        }
        Ok(())
    }

    /// Linear index of a configuration; the last option varies fastest.
    pub fn index_of(&self, config: &Configuration) -> usize {
        debug_assert!(self.validate(config).is_ok());
        let mut idx = 0;
        for (opt, &level) in self.options.iter().zip(config.levels()) {
            idx = idx * opt.levels() + level;
        }
        idx
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn config_at(&self, mut index: usize) -> Configuration {
        debug_assert!(index < self.size);
        let mut levels = vec![0usize; self.options.len()];
        for (slot, opt) in levels.iter_mut().zip(&self.options).rev() {
            *slot = index % opt.levels();
            index /= opt.levels();
        }
        Configuration::new(levels)
    }

    /// Uniform draw over the whole space; one `gen_range` per option, in
    /// option order, so seeded streams are reproducible.
    pub fn random_config<R: Rng + ?Sized>(&self, rng: &mut R) -> Configuration {
        Configuration::new(
            self.options
                .iter()
                .map(|o| rng.gen_range(0..o.levels()))
                .collect(),
        )
    }

    /// All configurations in linear-index order.
    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.size).map(|i| self.config_at(i))
    }
}
