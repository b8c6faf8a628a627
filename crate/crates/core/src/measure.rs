//! Measurement sources and the distinct-measurement budget ledger.
//!
//! A measurement source maps configurations to oriented raw objectives. The
//! ledger in front of it enforces the tuning lexicon's budget unit: only the
//! first measurement of a configuration is charged, every repeat is a cache
//! hit and free. Budget exhaustion is a signal optimizers react to, not a
//! run-aborting failure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{orient, ModelError, ObjectiveSense, RawObjectives};
use crate::space::{ConfigSpace, Configuration, OptionSpec, SpaceError};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measurement budget of {limit} distinct configurations is exhausted")]
    BudgetExhausted { limit: usize },
    #[error("no measurement recorded for configuration {config}")]
    MissingMeasurement { config: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Model(#[from] ModelError),
    // The io cause is part of the message, not a source (thiserror treats a
    // field named `source` as one), so chain-walking printers do not repeat it.
    #[error("{path}: {cause}")]
    Io {
        path: String,
        cause: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: duplicate row for configuration {config}")]
    DuplicateRow {
        path: String,
        line: usize,
        config: String,
    },
    #[error("{path}: table covers {found} of {expected} configurations of its option space")]
    Coverage {
        path: String,
        found: usize,
        expected: usize,
    },
    #[error("objective column `{name}` not found (available: {available})")]
    UnknownColumn { name: String, available: String },
    #[error("option space of {size} configurations exceeds the enumerable limit of {limit}")]
    SpaceTooLarge { size: usize, limit: usize },
    #[error("invalid landscape description: {0}")]
    LandscapeSpec(String),
    #[error("landscape manifest mismatch: {0}")]
    ManifestMismatch(String),
}

/// Anything that can measure a configuration.
///
/// Implementations return *oriented* values: maximized objectives are negated
/// here, at the oracle boundary, and non-finite measurements are rejected.
pub trait MeasurementSource {
    fn space(&self) -> &ConfigSpace;
    fn name(&self) -> &str;
    fn objective_labels(&self) -> (&str, &str);
    fn objective_senses(&self) -> (ObjectiveSense, ObjectiveSense);
    fn measure_raw(&self, config: &Configuration) -> Result<RawObjectives, MeasureError>;
}

/// Budget accounting plus the measurement cache that backs it.
#[derive(Debug, Clone)]
pub struct BudgetLedger {
    limit: usize,
    cache: HashMap<Configuration, RawObjectives>,
}

impl BudgetLedger {
    pub fn new(limit: usize) -> Self {
        Self {
            limit,
            cache: HashMap::new(),
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Distinct configurations measured so far.
    pub fn spent(&self) -> usize {
        self.cache.len()
    }

    pub fn remaining(&self) -> usize {
        self.limit - self.cache.len().min(self.limit)
    }

    pub fn is_exhausted(&self) -> bool {
        self.cache.len() >= self.limit
    }

    pub fn is_cached(&self, config: &Configuration) -> bool {
        self.cache.contains_key(config)
    }

    pub fn cached(&self, config: &Configuration) -> Option<RawObjectives> {
        self.cache.get(config).copied()
    }

    /// True once every configuration of `space` has been measured.
    pub fn fully_covers(&self, space: &ConfigSpace) -> bool {
        self.cache.len() >= space.size()
    }

    /// Measure `config` through `source`. Cache hits are free; a cache miss
    /// with no budget left raises the budget-exhausted signal and charges
    /// nothing.
    pub fn measure(
        &mut self,
        source: &dyn MeasurementSource,
        config: &Configuration,
    ) -> Result<RawObjectives, MeasureError> {
        if let Some(v) = self.cache.get(config) {
            return Ok(*v);
        }
        source.space().validate(config)?;
        if self.cache.len() >= self.limit {
            return Err(MeasureError::BudgetExhausted { limit: self.limit });
        }
        let raw = source.measure_raw(config)?;
        self.cache.insert(config.clone(), raw);
        Ok(raw)
    }
}

/// A fully measured configuration table, typically loaded from CSV.
///
/// The table must cover its option space exactly once per configuration, so
/// it can stand in for the real system during tuning experiments.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    space: ConfigSpace,
    target_label: String,
    auxiliary_label: String,
    target_sense: ObjectiveSense,
    auxiliary_sense: ObjectiveSense,
    /// Original (unoriented) objective values per configuration.
    rows: HashMap<Configuration, (f64, f64)>,
}

impl Dataset {
    /// Load a measurement table.
    ///
    /// Grammar: `opt1,...,optN,<name>:<min|max>,<name>:<min|max>` followed by
    /// one numeric row per configuration. `target` and `auxiliary` pick which
    /// of the two suffixed columns plays which role, by bare column name.
    pub fn load(
        path: impl AsRef<Path>,
        target: &str,
        auxiliary: &str,
    ) -> Result<Self, MeasureError> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|cause| MeasureError::Io {
            path: display.clone(),
            cause,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| display.clone());
        Self::parse(&display, name, &text, target, auxiliary)
    }

    fn parse(
        path: &str,
        name: String,
        text: &str,
        target: &str,
        auxiliary: &str,
    ) -> Result<Self, MeasureError> {
        let format_err = |line: usize, message: String| MeasureError::Format {
            path: path.to_string(),
            line,
            message,
        };

        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| format_err(1, "empty file".into()))?;
        let cells: Vec<&str> = header.split(',').map(str::trim).collect();
        if cells.len() < 3 {
            return Err(format_err(
                1,
                "header needs at least one option column and two objective columns".into(),
            ));
        }
        let (option_names, objective_cells) = cells.split_at(cells.len() - 2);
        for n in option_names {
            if n.contains(':') {
                return Err(format_err(
                    1,
                    format!("objective column `{n}` must be one of the last two columns"),
                ));
            }
            if n.is_empty() {
                return Err(format_err(1, "empty option column name".into()));
            }
        }
        let mut objectives = Vec::with_capacity(2);
        for cell in objective_cells {
            let (label, sense) = cell.split_once(':').ok_or_else(|| {
                format_err(
                    1,
                    format!("objective column `{cell}` lacks a `:min` or `:max` suffix"),
                )
            })?;
            let sense = match sense.trim() {
                "min" => ObjectiveSense::Minimize,
                "max" => ObjectiveSense::Maximize,
                other => {
                    return Err(format_err(
                        1,
                        format!("objective sense must be `min` or `max`, got `{other}`"),
                    ))
                }
            };
            objectives.push((label.trim().to_string(), sense));
        }

        let available = format!("{}, {}", objectives[0].0, objectives[1].0);
        let pick = |wanted: &str| -> Result<usize, MeasureError> {
            objectives
                .iter()
                .position(|(label, _)| label == wanted)
                .ok_or_else(|| MeasureError::UnknownColumn {
                    name: wanted.to_string(),
                    available: available.clone(),
                })
        };
        let t_idx = pick(target)?;
        let a_idx = pick(auxiliary)?;
        if t_idx == a_idx {
            return Err(MeasureError::UnknownColumn {
                name: format!("{target} (target and auxiliary must differ)"),
                available,
            });
        }

        // Parse rows before levels are known; option values are mapped to
        // level indices once each column's distinct values are collected.
        let mut raw_rows: Vec<(usize, Vec<f64>, [f64; 2])> = Vec::new();
        let mut trailing_blank = false;
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                trailing_blank = true;
                continue;
            }
            if trailing_blank {
                return Err(format_err(line_no, "blank line inside table".into()));
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != option_names.len() + 2 {
                return Err(format_err(
                    line_no,
                    format!(
                        "expected {} cells, got {}",
                        option_names.len() + 2,
                        cells.len()
                    ),
                ));
            }
            let parse_cell = |cell: &str, what: &str| -> Result<f64, MeasureError> {
                let v: f64 = cell.parse().map_err(|_| {
                    format_err(line_no, format!("{what} `{cell}` is not a number"))
                })?;
                if !v.is_finite() {
                    return Err(format_err(line_no, format!("{what} `{cell}` is not finite")));
                }
                Ok(v)
            };
            let mut option_values = Vec::with_capacity(option_names.len());
            for (cell, name) in cells.iter().zip(option_names) {
                option_values.push(parse_cell(cell, &format!("option `{name}` value"))?);
            }
            let o1 = parse_cell(cells[option_names.len()], "objective value")?;
            let o2 = parse_cell(cells[option_names.len() + 1], "objective value")?;
            raw_rows.push((line_no, option_values, [o1, o2]));
        }
        if raw_rows.is_empty() {
            return Err(format_err(2, "table has no rows".into()));
        }

        // Option levels: the sorted distinct values seen in each column.
        let mut level_values: Vec<Vec<f64>> = vec![Vec::new(); option_names.len()];
        for (_, values, _) in &raw_rows {
            for (col, &v) in level_values.iter_mut().zip(values) {
                match col.binary_search_by(|x| x.partial_cmp(&v).unwrap()) {
                    Ok(_) => {}
                    Err(pos) => col.insert(pos, v),
                }
            }
        }
        let space = ConfigSpace::new(
            option_names
                .iter()
                .zip(level_values.iter())
                .map(|(n, v)| OptionSpec::new(*n, v.clone()))
                .collect(),
        )?;

        let mut rows: HashMap<Configuration, (f64, f64)> = HashMap::with_capacity(raw_rows.len());
        for (line_no, values, objs) in &raw_rows {
            let levels = values
                .iter()
                .zip(level_values.iter())
                .map(|(v, col)| {
                    col.binary_search_by(|x| x.partial_cmp(v).unwrap())
                        .expect("value collected above")
                })
                .collect();
            let config = Configuration::new(levels);
            let pair = (objs[t_idx], objs[a_idx]);
            if rows.insert(config.clone(), pair).is_some() {
                return Err(MeasureError::DuplicateRow {
                    path: path.to_string(),
                    line: *line_no,
                    config: config.to_string(),
                });
            }
        }
        if rows.len() != space.size() {
            return Err(MeasureError::Coverage {
                path: path.to_string(),
                found: rows.len(),
                expected: space.size(),
            });
        }

        Ok(Self {
            name,
            space,
            target_label: objectives[t_idx].0.clone(),
            auxiliary_label: objectives[a_idx].0.clone(),
            target_sense: objectives[t_idx].1,
            auxiliary_sense: objectives[a_idx].1,
            rows,
        })
    }

    /// Build a table in memory; rows carry option *values* plus the original
    /// (target, auxiliary) measurements. Same validation as the loader.
    #[allow(clippy::too_many_arguments)]
    pub fn from_rows(
        name: impl Into<String>,
        option_names: &[&str],
        rows: &[(Vec<f64>, f64, f64)],
        target_label: &str,
        target_sense: ObjectiveSense,
        auxiliary_label: &str,
        auxiliary_sense: ObjectiveSense,
    ) -> Result<Self, MeasureError> {
        let name = name.into();
        let mut text = String::new();
        for n in option_names {
            write!(text, "{n},").unwrap();
        }
        writeln!(
            text,
            "{target_label}:{},{auxiliary_label}:{}",
            target_sense.suffix(),
            auxiliary_sense.suffix()
        )
        .unwrap();
        for (values, t, a) in rows {
            for v in values {
                write!(text, "{v},").unwrap();
            }
            writeln!(text, "{t},{a}").unwrap();
        }
        Self::parse("<memory>", name, &text, target_label, auxiliary_label)
    }

    /// Write the table back out in loader grammar, rows in linear-index
    /// order. `export` followed by [`Dataset::load`] reproduces the table.
    pub fn export(&self, path: impl AsRef<Path>) -> Result<(), MeasureError> {
        let path = path.as_ref();
        let mut text = String::new();
        for opt in self.space.options() {
            write!(text, "{},", opt.name).unwrap();
        }
        writeln!(
            text,
            "{}:{},{}:{}",
            self.target_label,
            self.target_sense.suffix(),
            self.auxiliary_label,
            self.auxiliary_sense.suffix()
        )
        .unwrap();
        for config in self.space.iter() {
            let (t, a) = self.rows[&config];
            for (opt, &level) in self.space.options().iter().zip(config.levels()) {
                write!(text, "{},", opt.values[level]).unwrap();
            }
            writeln!(text, "{t},{a}").unwrap();
        }
        std::fs::write(path, text).map_err(|cause| MeasureError::Io {
            path: path.display().to_string(),
            cause,
        })
    }

    /// Original (unoriented) objective values of one configuration.
    pub fn original_values(&self, config: &Configuration) -> Option<(f64, f64)> {
        self.rows.get(config).copied()
    }

    /// Tables are equal when space, objective declarations, and every row
    /// agree; the name is identity metadata and deliberately ignored.
    pub fn same_table(&self, other: &Dataset) -> bool {
        self.space == other.space
            && self.target_label == other.target_label
            && self.auxiliary_label == other.auxiliary_label
            && self.target_sense == other.target_sense
            && self.auxiliary_sense == other.auxiliary_sense
            && self.rows == other.rows
    }
}

impl MeasurementSource for Dataset {
    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn objective_labels(&self) -> (&str, &str) {
        (&self.target_label, &self.auxiliary_label)
    }

    fn objective_senses(&self) -> (ObjectiveSense, ObjectiveSense) {
        (self.target_sense, self.auxiliary_sense)
    }

    fn measure_raw(&self, config: &Configuration) -> Result<RawObjectives, MeasureError> {
        let (t, a) = self
            .rows
            .get(config)
            .copied()
            .ok_or_else(|| MeasureError::MissingMeasurement {
                config: config.to_string(),
            })?;
        Ok(RawObjectives::new(
            orient(t, self.target_sense)?,
            orient(a, self.auxiliary_sense)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
x1,x2,latency:min,throughput:max
0,0,45,1.25
0,1,52,0.8
1,0,30,3.33
1,1,61,0.5
";

    fn example_dataset() -> Dataset {
        Dataset::parse("example.csv", "example".into(), EXAMPLE, "latency", "throughput").unwrap()
    }

    #[test]
    fn loads_and_orients_the_worked_example() {
        let ds = example_dataset();
        assert_eq!(ds.space().size(), 4);
        assert_eq!(ds.objective_labels(), ("latency", "throughput"));
        let raw = ds.measure_raw(&Configuration::new(vec![1, 0])).unwrap();
        assert_eq!(raw.target, 30.0);
        assert_eq!(raw.auxiliary, -3.33, "maximized column negated on access");
    }

    #[test]
    fn objective_roles_follow_the_requested_columns() {
        let ds =
            Dataset::parse("example.csv", "example".into(), EXAMPLE, "throughput", "latency")
                .unwrap();
        let raw = ds.measure_raw(&Configuration::new(vec![1, 0])).unwrap();
        assert_eq!(raw.target, -3.33);
        assert_eq!(raw.auxiliary, 30.0);
    }

    #[test]
    fn unknown_objective_column_is_rejected() {
        let err = Dataset::parse("e.csv", "e".into(), EXAMPLE, "runtime", "throughput")
            .unwrap_err();
        assert!(matches!(err, MeasureError::UnknownColumn { .. }), "{err}");
    }

    #[test]
    fn duplicate_rows_are_rejected_with_their_line() {
        let text = "\
x1,latency:min,throughput:max
0,45,1.0
1,30,2.0
0,99,3.0
";
        let err = Dataset::parse("d.csv", "d".into(), text, "latency", "throughput").unwrap_err();
        match err {
            MeasureError::DuplicateRow { line, .. } => assert_eq!(line, 4),
            other => panic!("expected duplicate-row error, got {other}"),
        }
    }

    #[test]
    fn partial_coverage_is_rejected() {
        let text = "\
x1,x2,latency:min,throughput:max
0,0,45,1.0
0,1,52,2.0
1,0,30,3.0
";
        let err = Dataset::parse("c.csv", "c".into(), text, "latency", "throughput").unwrap_err();
        match err {
            MeasureError::Coverage { found, expected, .. } => {
                assert_eq!((found, expected), (3, 4));
            }
            other => panic!("expected coverage error, got {other}"),
        }
    }

    #[test]
    fn malformed_cells_report_path_and_line() {
        let text = "\
x1,latency:min,throughput:max
0,abc,1.0
";
        let err = Dataset::parse("m.csv", "m".into(), text, "latency", "throughput").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("m.csv:2:"), "{msg}");

        let text = "x1,latency:avg,throughput:max\n0,1,2\n";
        let err = Dataset::parse("m.csv", "m".into(), text, "latency", "throughput").unwrap_err();
        assert!(err.to_string().contains("min"), "{err}");
    }

    #[test]
    fn export_round_trips() {
        let ds = example_dataset();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.csv");
        ds.export(&path).unwrap();
        let again = Dataset::load(&path, "latency", "throughput").unwrap();
        assert!(ds.same_table(&again));
    }

    #[test]
    fn ledger_charges_each_configuration_once() {
        let ds = example_dataset();
        let mut ledger = BudgetLedger::new(2);
        let c = Configuration::new(vec![1, 0]);
        assert_eq!(ledger.spent(), 0);
        ledger.measure(&ds, &c).unwrap();
        assert_eq!(ledger.spent(), 1);
        for _ in 0..5 {
            ledger.measure(&ds, &c).unwrap();
        }
        assert_eq!(ledger.spent(), 1, "re-measurement is free");
        ledger.measure(&ds, &Configuration::new(vec![0, 0])).unwrap();
        assert!(ledger.is_exhausted());
        let err = ledger
            .measure(&ds, &Configuration::new(vec![0, 1]))
            .unwrap_err();
        assert!(matches!(err, MeasureError::BudgetExhausted { limit: 2 }));
        // Exhaustion still serves cache hits.
        assert!(ledger.measure(&ds, &c).is_ok());
    }

    #[test]
    fn zero_budget_is_immediately_exhausted() {
        let ds = example_dataset();
        let mut ledger = BudgetLedger::new(0);
        assert!(ledger.is_exhausted());
        let err = ledger
            .measure(&ds, &Configuration::new(vec![0, 0]))
            .unwrap_err();
        assert!(matches!(err, MeasureError::BudgetExhausted { limit: 0 }));
    }

    #[test]
    fn invalid_configurations_are_rejected_before_charging() {
        let ds = example_dataset();
        let mut ledger = BudgetLedger::new(10);
        let err = ledger.measure(&ds, &Configuration::new(vec![5, 0])).unwrap_err();
        assert!(matches!(err, MeasureError::Space(_)));
        assert_eq!(ledger.spent(), 0);
    }
}
