//! Zero-wait type-1 devices plus the aggregated Poisson type-2 stream.
//!
//! Each type-1 device samples a fresh update the instant its previous one is
//! delivered, so the update delivered at `t` was generated at the device's
//! previous delivery. Type-2 updates arrive with age zero.

use alloc::vec;
use alloc::vec::Vec;

use super::rng::{exponential, stream};
use super::{
    AgeIntegrator, Event, EventKind, EventQueue, Replication, RunClock, SimConfig, SimResult,
    TraceEvent, TraceSink,
};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// One replication; device `d` (1-based, `N + 1` for type-2) draws from
/// stream `d` of this replication.
pub fn replicate_hybrid(
    system: &SystemConfig,
    config: &SimConfig,
    replication: u32,
    mut trace: TraceSink<'_>,
) -> Result<Replication> {
    config.validate()?;
    let n = system.n_type1();
    let lambda = system.lambda_total();
    let mut rates: Vec<f64> = system.mu().to_vec();
    rates.push(lambda);
    if rates.iter().all(|r| *r <= 0.0) {
        return Err(Error::ZeroTotalRate);
    }
    let mut rngs: Vec<_> = (0..=n)
        .map(|d| stream(config.seed, replication, (d + 1) as u32))
        .collect();
    let mut queue = EventQueue::with_capacity(n + 1);
    for (d, &rate) in rates.iter().enumerate() {
        if rate > 0.0 {
            let time = exponential(&mut rngs[d], rate);
            queue.push(Event {
                time,
                id: d,
                version: 0,
            });
        }
    }
    // generation time of the update each type-1 device is serving
    let mut in_service = vec![0.0; n];
    let mut integrator = AgeIntegrator::new(0.0);
    let mut clock = RunClock::new(config, &mut integrator);
    while let Some(ev) = queue.pop() {
        let t = ev.time;
        if !clock.admit(t, &mut integrator) {
            break;
        }
        let before = t - integrator.monitor_gen();
        let (kind, gen) = if ev.id < n {
            let gen = core::mem::replace(&mut in_service[ev.id], t);
            (EventKind::Type1, gen)
        } else {
            (EventKind::Type2, t)
        };
        let adopted = integrator.offer(gen);
        if let Some(sink) = trace.as_mut() {
            sink(&TraceEvent {
                time: t,
                kind,
                device: ev.id + 1,
                delivered_age: t - gen,
                monitor_age_before: before,
                monitor_age_after: t - integrator.monitor_gen(),
                adopted,
            });
        }
        let next = t + exponential(&mut rngs[ev.id], rates[ev.id]);
        if !next.is_finite() {
            return Err(Error::NonFinite);
        }
        queue.push(Event {
            time: next,
            id: ev.id,
            version: 0,
        });
    }
    clock.finish(integrator)
}

/// All replications in index order.
pub fn simulate_hybrid(system: &SystemConfig, config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let reps = (0..config.replications)
        .map(|r| replicate_hybrid(system, config, r, None))
        .collect::<Result<Vec<_>>>()?;
    SimResult::from_replications(&reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{aoi_time_average, AgeEvent, Horizon};

    fn short(seed: u64) -> SimConfig {
        SimConfig {
            horizon: Horizon::Time(2e4),
            warmup_fraction: 0.1,
            replications: 4,
            seed,
        }
    }

    #[test]
    fn single_device_mean() {
        let s = SystemConfig::basic(vec![1.0]).unwrap();
        let r = simulate_hybrid(&s, &short(3)).unwrap();
        assert!((r.mean_aoi - 2.0).abs() < 0.05, "{r:?}");
        let h = SystemConfig::new(vec![1.0], vec![1.0]).unwrap();
        let r = simulate_hybrid(&h, &short(3)).unwrap();
        assert!((r.mean_aoi - 0.75).abs() < 0.03, "{r:?}");
    }

    #[test]
    fn same_seed_same_bits() {
        let s = SystemConfig::new(vec![1.0, 0.5], vec![0.3]).unwrap();
        let a = simulate_hybrid(&s, &short(11)).unwrap();
        let b = simulate_hybrid(&s, &short(11)).unwrap();
        assert_eq!(a, b);
        let c = simulate_hybrid(&s, &short(12)).unwrap();
        assert_ne!(a.mean_aoi.to_bits(), c.mean_aoi.to_bits());
    }

    #[test]
    fn trace_is_consistent_with_integral() {
        let s = SystemConfig::new(vec![1.0, 2.0, 0.5], vec![0.7]).unwrap();
        let cfg = SimConfig {
            horizon: Horizon::Time(500.0),
            warmup_fraction: 0.0,
            replications: 1,
            seed: 5,
        };
        let mut log = vec![AgeEvent {
            time: 0.0,
            age: 0.0,
        }];
        let mut sink = |e: &TraceEvent| {
            assert!(e.monitor_age_after <= e.monitor_age_before);
            assert_eq!(e.adopted, e.monitor_age_after < e.monitor_age_before);
            if e.adopted {
                log.push(AgeEvent {
                    time: e.time,
                    age: e.monitor_age_after,
                });
            }
        };
        let rep = replicate_hybrid(&s, &cfg, 0, Some(&mut sink)).unwrap();
        let direct = aoi_time_average(&log, 500.0).unwrap();
        assert!((rep.aoi - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn event_budget_horizon() {
        let s = SystemConfig::basic(vec![1.0, 1.0]).unwrap();
        let cfg = SimConfig {
            horizon: Horizon::Events(1000),
            warmup_fraction: 0.2,
            replications: 2,
            seed: 1,
        };
        let r = simulate_hybrid(&s, &cfg).unwrap();
        assert_eq!(r.events_processed, 2000);
        assert!(r.mean_aoi > 0.0);
    }
}
