//! Measurement source loading with the fixture-directory fallback.

use anyhow::Context;
use mmo_core::{Dataset, MeasurementSource, SyntheticLandscape};
use std::path::{Path, PathBuf};

use crate::spec::{ResolvedSpec, SourceKind};

/// When a relative source path does not exist, it is retried under this
/// directory. Lets suites and scripts name shared fixtures without caring
/// where they are invoked from.
pub const FIXTURE_DIR_ENV: &str = "MMO_FIXTURE_DIR";

pub fn resolve_path(given: &Path) -> PathBuf {
    if given.is_absolute() || given.exists() {
        return given.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
        let fallback = Path::new(&dir).join(given);
        if fallback.exists() {
            return fallback;
        }
    }
    given.to_path_buf()
}

pub enum Source {
    Dataset(Dataset),
    Landscape(SyntheticLandscape),
}

impl Source {
    pub fn as_measurement(&self) -> &dyn MeasurementSource {
        match self {
            Source::Dataset(d) => d,
            Source::Landscape(l) => l,
        }
    }
}

/// Load the source a resolved spec names. Landscape manifests are audited
/// against their regenerated ground truth by the loader.
pub fn load(spec: &ResolvedSpec, target: &Option<String>, aux: &Option<String>) -> anyhow::Result<Source> {
    let path = resolve_path(Path::new(&spec.source_path));
    match spec.source_kind {
        SourceKind::Dataset => {
            let (t, a) = (
                target.as_deref().expect("checked by flag validation"),
                aux.as_deref().expect("checked by flag validation"),
            );
            let dataset = Dataset::load(&path, t, a)
                .with_context(|| format!("loading dataset {}", path.display()))?;
            Ok(Source::Dataset(dataset))
        }
        SourceKind::Landscape => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading landscape {}", path.display()))?;
            let landscape = SyntheticLandscape::from_json(&text)
                .with_context(|| format!("loading landscape {}", path.display()))?;
            Ok(Source::Landscape(landscape))
        }
    }
}
