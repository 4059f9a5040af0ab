//! Queueing baselines fed by Poisson update arrivals: FCFS M/M/N, LCFS M/M/N
//! with preemption, and N parallel LCFS M/M/1 queues with preemption.
//! Deliveries go through the same strictly-fresher adoption rule.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use rand_chacha::ChaCha8Rng;

use super::rng::{exponential, stream};
use super::{
    AgeIntegrator, Event, EventKind, EventQueue, Replication, RunClock, SimConfig, SimResult,
    TraceEvent, TraceSink,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    FcfsMmn,
    LcfsMmnPreempt,
    LcfsNqueuePreempt,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] = [
        BaselineKind::FcfsMmn,
        BaselineKind::LcfsMmnPreempt,
        BaselineKind::LcfsNqueuePreempt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BaselineKind::FcfsMmn => "fcfs_mmn",
            BaselineKind::LcfsMmnPreempt => "lcfs_mmn_preempt",
            BaselineKind::LcfsNqueuePreempt => "lcfs_nqueue_preempt",
        }
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown baseline `{s}`")))
    }
}

/// A baseline system; `load` is `ρ = λ / (N μ)` for the M/M/N kinds and
/// `ρ = λ_q / μ` per queue for the N-queue kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineDescriptor {
    kind: BaselineKind,
    servers: usize,
    service_rate: f64,
    load: f64,
}

impl BaselineDescriptor {
    pub fn new(kind: BaselineKind, servers: usize, service_rate: f64, load: f64) -> Result<Self> {
        if servers == 0 {
            return Err(Error::InvalidConfig(
                "at least one server is required".into(),
            ));
        }
        if !(service_rate > 0.0 && service_rate.is_finite()) {
            return Err(Error::InvalidConfig("service rate must be positive".into()));
        }
        if !(load > 0.0 && load.is_finite()) {
            return Err(Error::InvalidConfig("load must be positive".into()));
        }
        if kind == BaselineKind::FcfsMmn && load >= 1.0 {
            return Err(Error::Unstable { load });
        }
        Ok(Self {
            kind,
            servers,
            service_rate,
            load,
        })
    }

    pub fn kind(&self) -> BaselineKind {
        self.kind
    }

    pub fn servers(&self) -> usize {
        self.servers
    }

    pub fn service_rate(&self) -> f64 {
        self.service_rate
    }

    pub fn load(&self) -> f64 {
        self.load
    }

    /// Poisson arrival rate of the shared stream, or of each queue for the
    /// N-queue kind.
    pub fn arrival_rate(&self) -> f64 {
        match self.kind {
            BaselineKind::FcfsMmn | BaselineKind::LcfsMmnPreempt => {
                self.load * self.servers as f64 * self.service_rate
            }
            BaselineKind::LcfsNqueuePreempt => self.load * self.service_rate,
        }
    }
}

/// Generation time of the update each server holds, with a version counter
/// that invalidates completions of preempted updates.
struct Servers {
    busy: Vec<Option<f64>>,
    version: Vec<u64>,
    rngs: Vec<ChaCha8Rng>,
    rate: f64,
}

impl Servers {
    fn new(count: usize, rate: f64, rngs: Vec<ChaCha8Rng>) -> Self {
        Self {
            busy: vec![None; count],
            version: vec![0; count],
            rngs,
            rate,
        }
    }

    fn start(&mut self, s: usize, gen: f64, now: f64, id: usize, queue: &mut EventQueue) {
        self.busy[s] = Some(gen);
        self.version[s] += 1;
        let time = now + exponential(&mut self.rngs[s], self.rate);
        queue.push(Event {
            time,
            id,
            version: self.version[s],
        });
    }

    fn free(&self) -> Option<usize> {
        self.busy.iter().position(Option::is_none)
    }

    fn oldest(&self) -> usize {
        let mut best = 0;
        for s in 1..self.busy.len() {
            if self.busy[s] < self.busy[best] {
                best = s;
            }
        }
        best
    }
}

struct Deliverer<'a, 'b> {
    integrator: AgeIntegrator,
    trace: &'a mut TraceSink<'b>,
}

impl Deliverer<'_, '_> {
    fn deliver(&mut self, t: f64, device: usize, gen: f64) {
        let before = t - self.integrator.monitor_gen();
        let adopted = self.integrator.offer(gen);
        if let Some(sink) = self.trace.as_mut() {
            sink(&TraceEvent {
                time: t,
                kind: EventKind::Server,
                device,
                delivered_age: t - gen,
                monitor_age_before: before,
                monitor_age_after: t - self.integrator.monitor_gen(),
                adopted,
            });
        }
    }
}

/// One replication of a baseline.
///
/// Streams: the shared arrival stream is 0 and server `s` uses `s + 1`; in the
/// N-queue kind, queue `q` uses `2q + 1` for arrivals and `2q + 2` for service.
pub fn replicate_baseline(
    desc: &BaselineDescriptor,
    config: &SimConfig,
    replication: u32,
    mut trace: TraceSink<'_>,
) -> Result<Replication> {
    config.validate()?;
    let n = desc.servers;
    let lambda = desc.arrival_rate();
    let mut queue = EventQueue::new();
    let mut out = Deliverer {
        integrator: AgeIntegrator::new(0.0),
        trace: &mut trace,
    };
    let mut clock = RunClock::new(config, &mut out.integrator);
    let seed = config.seed;
    match desc.kind {
        BaselineKind::FcfsMmn | BaselineKind::LcfsMmnPreempt => {
            let preempt = desc.kind == BaselineKind::LcfsMmnPreempt;
            let mut arrivals = stream(seed, replication, 0);
            let rngs = (0..n)
                .map(|s| stream(seed, replication, s as u32 + 1))
                .collect();
            let mut servers = Servers::new(n, desc.service_rate, rngs);
            let mut waiting: VecDeque<f64> = VecDeque::new();
            // id 0 is the arrival stream, id s + 1 is server s
            queue.push(Event {
                time: exponential(&mut arrivals, lambda),
                id: 0,
                version: 0,
            });
            while let Some(ev) = queue.pop() {
                if ev.id > 0 && ev.version != servers.version[ev.id - 1] {
                    continue;
                }
                let t = ev.time;
                if !clock.admit(t, &mut out.integrator) {
                    break;
                }
                if ev.id == 0 {
                    match servers.free() {
                        Some(s) => servers.start(s, t, t, s + 1, &mut queue),
                        None if preempt => {
                            let s = servers.oldest();
                            servers.start(s, t, t, s + 1, &mut queue);
                        }
                        None => waiting.push_back(t),
                    }
                    let next = t + exponential(&mut arrivals, lambda);
                    queue.push(Event {
                        time: next,
                        id: 0,
                        version: 0,
                    });
                } else {
                    let s = ev.id - 1;
                    let gen = servers.busy[s]
                        .take()
                        .expect("completion of an idle server");
                    out.deliver(t, s + 1, gen);
                    if let Some(g) = waiting.pop_front() {
                        servers.start(s, g, t, s + 1, &mut queue);
                    }
                }
            }
        }
        BaselineKind::LcfsNqueuePreempt => {
            let mut arrivals: Vec<_> = (0..n)
                .map(|q| stream(seed, replication, 2 * q as u32 + 1))
                .collect();
            let rngs = (0..n)
                .map(|q| stream(seed, replication, 2 * q as u32 + 2))
                .collect();
            let mut servers = Servers::new(n, desc.service_rate, rngs);
            // id 2q is an arrival at queue q, id 2q + 1 its completion
            for (q, rng) in arrivals.iter_mut().enumerate() {
                queue.push(Event {
                    time: exponential(rng, lambda),
                    id: 2 * q,
                    version: 0,
                });
            }
            while let Some(ev) = queue.pop() {
                let q = ev.id / 2;
                let completion = ev.id % 2 == 1;
                if completion && ev.version != servers.version[q] {
                    continue;
                }
                let t = ev.time;
                if !clock.admit(t, &mut out.integrator) {
                    break;
                }
                if completion {
                    let gen = servers.busy[q].take().expect("completion of an idle queue");
                    out.deliver(t, q + 1, gen);
                } else {
                    servers.start(q, t, t, 2 * q + 1, &mut queue);
                    let next = t + exponential(&mut arrivals[q], lambda);
                    queue.push(Event {
                        time: next,
                        id: 2 * q,
                        version: 0,
                    });
                }
            }
        }
    }
    clock.finish(out.integrator)
}

/// All replications in index order.
pub fn simulate_baseline(desc: &BaselineDescriptor, config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let reps = (0..config.replications)
        .map(|r| replicate_baseline(desc, config, r, None))
        .collect::<Result<Vec<_>>>()?;
    SimResult::from_replications(&reps)
}
