//! Discrete-event simulation of the zero-wait system and of the queueing
//! baselines, with replication statistics.

mod baseline;
pub mod rng;
mod sawtooth;
mod zero_wait;

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numeric::mean_and_std;

pub use baseline::{replicate_baseline, simulate_baseline, BaselineDescriptor, BaselineKind};
pub use sawtooth::{aoi_time_average, AgeEvent};
pub use zero_wait::{replicate_hybrid, simulate_hybrid};

pub(crate) use sawtooth::AgeIntegrator;

/// Run length of one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Simulated time units.
    Time(f64),
    /// Number of processed events.
    Events(u64),
}

/// Run parameters shared by every simulation entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub horizon: Horizon,
    /// Leading share of the horizon excluded from the average.
    pub warmup_fraction: f64,
    pub replications: u32,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            horizon: Horizon::Time(1e6),
            warmup_fraction: 0.1,
            replications: 10,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        match self.horizon {
            Horizon::Time(t) if !(t > 0.0 && t.is_finite()) => {
                return Err(Error::InvalidConfig("horizon must be positive".into()))
            }
            Horizon::Events(0) => {
                return Err(Error::InvalidConfig("event budget must be positive".into()))
            }
            _ => {}
        }
        if !(0.0..1.0).contains(&self.warmup_fraction) {
            return Err(Error::InvalidConfig(
                "warmup fraction must lie in [0, 1)".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig(
                "at least one replication is required".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a single replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replication {
    pub aoi: f64,
    pub events: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean_aoi: f64,
    /// Normal-approximation 95% half-width over replications.
    pub half_width_95: f64,
    pub per_replication: Vec<f64>,
    pub events_processed: u64,
}

impl SimResult {
    /// Reduces replications in the order given.
    pub fn from_replications(reps: &[Replication]) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::InvalidConfig("no replications".into()));
        }
        let values: Vec<f64> = reps.iter().map(|r| r.aoi).collect();
        let (mean, std) = mean_and_std(&values);
        let half_width_95 = if values.len() > 1 {
            1.96 * std / libm::sqrt(values.len() as f64)
        } else {
            0.0
        };
        if !mean.is_finite() || !half_width_95.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            mean_aoi: mean,
            half_width_95,
            per_replication: values,
            events_processed: reps.iter().map(|r| r.events).sum(),
        })
    }
}

/// What happened at a traced delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Zero-wait type-1 delivery.
    Type1,
    /// Type-2 delivery (age zero).
    Type2,
    /// Service completion at a baseline server or queue.
    Server,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Type1 => "type1",
            EventKind::Type2 => "type2",
            EventKind::Server => "server",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub time: f64,
    pub kind: EventKind,
    /// 1-based device, server or queue index.
    pub device: usize,
    pub delivered_age: f64,
    pub monitor_age_before: f64,
    pub monitor_age_after: f64,
    pub adopted: bool,
}

pub type TraceSink<'a> = Option<&'a mut dyn FnMut(&TraceEvent)>;

/// Heap entry; earlier times pop first, ties go to the lower id.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Event {
    pub time: f64,
    pub id: usize,
    pub version: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.id.cmp(&self.id))
            .then_with(|| other.version.cmp(&self.version))
    }
}

pub(crate) type EventQueue = BinaryHeap<Event>;

/// Horizon and warm-up bookkeeping for one replication.
pub(crate) struct RunClock {
    horizon: Horizon,
    warm_time: f64,
    warm_events: u64,
    processed: u64,
    last_time: f64,
}

impl RunClock {
    pub fn new(config: &SimConfig, integrator: &mut AgeIntegrator) -> Self {
        let (warm_time, warm_events) = match config.horizon {
            Horizon::Time(t) => (t * config.warmup_fraction, 0),
            Horizon::Events(e) => (0.0, (e as f64 * config.warmup_fraction) as u64),
        };
        if warm_time == 0.0 && warm_events == 0 {
            integrator.start(0.0);
        }
        Self {
            horizon: config.horizon,
            warm_time,
            warm_events,
            processed: 0,
            last_time: 0.0,
        }
    }

    /// Accepts the next event at `t`, or returns false when the run is over.
    /// Accumulates the age up to `t`.
    pub fn admit(&mut self, t: f64, integrator: &mut AgeIntegrator) -> bool {
        match self.horizon {
            Horizon::Time(end) => {
                if t > end {
                    return false;
                }
                if !integrator.is_started() && t > self.warm_time {
                    integrator.start(self.warm_time);
                }
            }
            Horizon::Events(budget) => {
                if self.processed >= budget {
                    return false;
                }
                if !integrator.is_started() && self.processed >= self.warm_events {
                    integrator.start(t);
                }
            }
        }
        integrator.advance(t);
        self.processed += 1;
        self.last_time = t;
        true
    }

    pub fn finish(self, mut integrator: AgeIntegrator) -> Result<Replication> {
        let end = match self.horizon {
            Horizon::Time(end) => end,
            Horizon::Events(_) => self.last_time,
        };
        if !integrator.is_started() {
            integrator.start(self.warm_time.min(end));
        }
        Ok(Replication {
            aoi: integrator.finish(end)?,
            events: self.processed,
        })
    }
}
