//! Parallel genus-theory scan over a range of discriminants.

use normk_core::mv::{genus_engine, GenusReport};
use normk_core::Discriminant;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub min: i64,
    pub max: i64,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

/// Fundamental discriminants in `[min, max]`, ascending.
pub fn fundamental_in_range(min: i64, max: i64) -> Vec<Discriminant> {
    (min..=max)
        .filter(|&d| Discriminant::is_fundamental(d))
        .map(|d| Discriminant::new(d).expect("checked fundamental"))
        .collect()
}

/// One report per fundamental discriminant, ordered by `Δ`.
pub fn run(cfg: &ScanConfig) -> Result<Vec<GenusReport>, rayon::ThreadPoolBuildError> {
    let discs = fundamental_in_range(cfg.min, cfg.max);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cfg.jobs {
        builder = builder.num_threads(k);
    }
    let pool = builder.build()?;
    Ok(pool.install(|| discs.par_iter().map(genus_engine).collect()))
}
