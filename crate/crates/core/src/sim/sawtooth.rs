//! Exact time-average of a piecewise-linear age process.

use core::cmp::Ordering;

use crate::error::{Error, Result};

/// Monitor age set to `age` at `time`; it grows at unit slope until the next event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgeEvent {
    pub time: f64,
    pub age: f64,
}

fn segment(age_start: f64, dt: f64) -> f64 {
    age_start * dt + dt * dt / 2.0
}

/// Time-average age over `[events[0].time, horizon]`.
pub fn aoi_time_average(events: &[AgeEvent], horizon: f64) -> Result<f64> {
    let first = events
        .first()
        .ok_or_else(|| Error::InvalidState("empty event log".into()))?;
    for (i, w) in events.windows(2).enumerate() {
        if !matches!(
            w[1].time.partial_cmp(&w[0].time),
            Some(Ordering::Greater | Ordering::Equal)
        ) {
            return Err(Error::UnorderedEvents { index: i + 1 });
        }
    }
    let last = events[events.len() - 1];
    if !matches!(
        horizon.partial_cmp(&last.time),
        Some(Ordering::Greater | Ordering::Equal)
    ) {
        return Err(Error::UnorderedEvents {
            index: events.len(),
        });
    }
    let span = horizon - first.time;
    if span.is_nan() || span <= 0.0 {
        return Err(Error::InvalidState("empty measurement span".into()));
    }
    let mut acc = crate::numeric::KahanSum::new();
    for w in events.windows(2) {
        acc.add(segment(w[0].age, w[1].time - w[0].time));
    }
    acc.add(segment(last.age, horizon - last.time));
    Ok(acc.value() / span)
}

/// Streaming form of [`aoi_time_average`], driven by the generation time of
/// the freshest update at the monitor.
#[derive(Debug, Clone)]
pub(crate) struct AgeIntegrator {
    monitor_gen: f64,
    last: f64,
    begin: Option<f64>,
    acc: f64,
}

impl AgeIntegrator {
    pub fn new(monitor_gen: f64) -> Self {
        Self {
            monitor_gen,
            last: monitor_gen,
            begin: None,
            acc: 0.0,
        }
    }

    pub fn monitor_gen(&self) -> f64 {
        self.monitor_gen
    }

    pub fn is_started(&self) -> bool {
        self.begin.is_some()
    }

    /// Starts accumulating at `t`.
    pub fn start(&mut self, t: f64) {
        self.begin = Some(t);
        self.last = t;
    }

    pub fn advance(&mut self, t: f64) {
        if self.begin.is_some() {
            self.acc += segment(self.last - self.monitor_gen, t - self.last);
            self.last = t;
        }
    }

    /// Offers an update generated at `gen`; it is adopted only when strictly
    /// fresher than the one held. Call after [`advance`](Self::advance).
    pub fn offer(&mut self, gen: f64) -> bool {
        if gen > self.monitor_gen {
            self.monitor_gen = gen;
            true
        } else {
            false
        }
    }

    pub fn finish(mut self, t: f64) -> Result<f64> {
        let begin = self
            .begin
            .ok_or_else(|| Error::InvalidState("measurement never started".into()))?;
        self.advance(t);
        let span = t - begin;
        let v = self.acc / span;
        if v.is_finite() && span > 0.0 {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    }
}
