//! Enumeration split by the first row transition and spread over a rayon pool.
//!
//! Partial results are collected in transition order and merged sequentially,
//! so floating-point output does not depend on scheduling.

use rayon::prelude::*;
use sixvertex::enumerate::{brute_z_partial, BoundaryStats, Enumerator, RowWeights};
use sixvertex::linalg::CompensatedSum;
use sixvertex::{Result, SpectralConfig, WeightConvention};

pub fn par_brute_z(cfg: &SpectralConfig, conv: WeightConvention) -> Result<f64> {
    let enumerator = Enumerator::new(cfg.n())?;
    let weights = RowWeights::new(&enumerator, cfg, conv)?;
    let parts: Vec<CompensatedSum> = enumerator
        .first_transitions()
        .into_par_iter()
        .map(|first| brute_z_partial(&enumerator, &weights, first))
        .collect();
    let mut total = CompensatedSum::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.value())
}

pub fn par_stats(n: usize) -> Result<BoundaryStats> {
    par_stats_with_ceiling(n, sixvertex::enumerate::DEFAULT_CEILING)
}

pub fn par_stats_with_ceiling(n: usize, ceiling: usize) -> Result<BoundaryStats> {
    let enumerator = Enumerator::with_ceiling(n, ceiling)?;
    let parts: Vec<BoundaryStats> = enumerator
        .first_transitions()
        .into_par_iter()
        .map(|first| BoundaryStats::collect_from(&enumerator, first))
        .collect();
    let mut total = BoundaryStats::empty(n);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}
