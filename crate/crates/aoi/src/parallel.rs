//! Replications spread over threads. Results are reduced in replication
//! order, so they are bit-identical to the sequential entry points.

use aoi_core::sim::{
    replicate_baseline, replicate_hybrid, BaselineDescriptor, Replication, SimConfig, SimResult,
    TraceEvent,
};
use aoi_core::{Result, SystemConfig};
use rayon::prelude::*;

fn reduce(
    config: &SimConfig,
    run: impl Fn(u32) -> Result<Replication> + Sync + Send,
) -> Result<SimResult> {
    config.validate()?;
    let reps = (0..config.replications)
        .into_par_iter()
        .map(run)
        .collect::<Result<Vec<_>>>()?;
    SimResult::from_replications(&reps)
}

/// Replication 0 runs on the calling thread feeding `sink`; the rest run in
/// parallel.
fn reduce_traced(
    config: &SimConfig,
    first: impl FnOnce() -> Result<Replication>,
    run: impl Fn(u32) -> Result<Replication> + Sync + Send,
) -> Result<SimResult> {
    config.validate()?;
    let head = first()?;
    let mut reps = vec![head];
    reps.extend(
        (1..config.replications)
            .into_par_iter()
            .map(run)
            .collect::<Result<Vec<_>>>()?,
    );
    SimResult::from_replications(&reps)
}

pub fn simulate_hybrid(system: &SystemConfig, config: &SimConfig) -> Result<SimResult> {
    reduce(config, |r| replicate_hybrid(system, config, r, None))
}

pub fn simulate_baseline(desc: &BaselineDescriptor, config: &SimConfig) -> Result<SimResult> {
    reduce(config, |r| replicate_baseline(desc, config, r, None))
}

pub fn simulate_hybrid_traced(
    system: &SystemConfig,
    config: &SimConfig,
    sink: &mut dyn FnMut(&TraceEvent),
) -> Result<SimResult> {
    reduce_traced(
        config,
        || replicate_hybrid(system, config, 0, Some(sink)),
        |r| replicate_hybrid(system, config, r, None),
    )
}

pub fn simulate_baseline_traced(
    desc: &BaselineDescriptor,
    config: &SimConfig,
    sink: &mut dyn FnMut(&TraceEvent),
) -> Result<SimResult> {
    reduce_traced(
        config,
        || replicate_baseline(desc, config, 0, Some(sink)),
        |r| replicate_baseline(desc, config, r, None),
    )
}
