//! The `gen-landscape` subcommand: generate a synthetic tuning problem and
//! write its manifest. The manifest records the generating spec plus the
//! enumerated ground truth, so loaders can audit a regenerated landscape
//! against it.

use anyhow::Context;
use clap::ValueEnum;
use mmo_core::{CorrelationRegime, LandscapeSpec, MeasureError, SyntheticLandscape};

use crate::cli::GenArgs;
use crate::spec::usage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelationArg {
    Harmonic,
    Conflicting,
    Mixed,
}

impl CorrelationArg {
    fn regime(self) -> CorrelationRegime {
        match self {
            CorrelationArg::Harmonic => CorrelationRegime::Harmonic,
            CorrelationArg::Conflicting => CorrelationRegime::Conflicting,
            CorrelationArg::Mixed => CorrelationRegime::Mixed,
        }
    }
}

pub fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let spec = LandscapeSpec {
        seed: args.seed,
        option_levels: args.levels.clone(),
        bumps: args.bumps,
        ruggedness: args.ruggedness,
        correlation: args.correlation.regime(),
    };
    let landscape = SyntheticLandscape::generate(spec).map_err(|e| match e {
        MeasureError::LandscapeSpec(msg) => usage(msg),
        other => anyhow::Error::new(other),
    })?;

    let manifest = landscape.manifest();
    let mut text = serde_json::to_string_pretty(&manifest).expect("plain data serializes");
    text.push('\n');
    std::fs::write(&args.out, text).with_context(|| format!("writing {}", args.out.display()))?;

    use mmo_core::MeasurementSource as _;
    let (config, target) = landscape.global_optimum();
    println!(
        "landscape {}: {} configurations, {} local optima, optimum {} at {}",
        landscape.name(),
        manifest.space_size,
        manifest.local_optima,
        target,
        config
            .levels()
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    println!("wrote {}", args.out.display());

    if let Some(table) = &args.dataset_out {
        landscape
            .to_dataset()
            .export(table)
            .with_context(|| format!("writing {}", table.display()))?;
        println!("wrote {}", table.display());
    }
    Ok(())
}
