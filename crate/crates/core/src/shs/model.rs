//! Explicit SHS model of the basic and hybrid systems: every discrete state,
//! every transition with its rate and reset map, and the drift vectors.
//!
//! The continuous state is `x = [x_0, x_1, …, x_N]`, where `x_0` is the age at
//! the monitor and `x_i` is the age of the update in service at type-1 device
//! `i`. The type-2 device has negligible service time and carries no age
//! component.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{
    p_index, p_tilde_index, DiscreteState, StateSpace, SystemConfig, UnifiedRate, Variant,
    DEFAULT_STATE_CAP,
};

/// What a transition does to the monitor age `x_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResetKind {
    /// A type-2 delivery: the monitor age drops to zero.
    ToZero,
    /// A fresher type-1 delivery: the monitor takes the served update's age.
    ToSourceAge,
    /// A stale delivery: the monitor age is kept.
    Unchanged,
}

impl ResetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResetKind::ToZero => "to_zero",
            ResetKind::ToSourceAge => "to_source_age",
            ResetKind::Unchanged => "unchanged",
        }
    }
}

/// One delivery from `device`, moving the window from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// 1-based index of the delivering device; `N + 1` is the type-2 device.
    pub device: usize,
    pub rate: f64,
    pub refresh: bool,
    pub reset: ResetKind,
}

impl Transition {
    /// Component of the pre-jump vector copied into `component` of the
    /// post-jump vector, or `None` when that component is zeroed.
    ///
    /// The serving type-1 device restarts its age at zero; the monitor follows
    /// [`ResetKind`]; every other component is carried over.
    pub fn reset_source(&self, component: usize) -> Option<usize> {
        if component == 0 {
            match self.reset {
                ResetKind::ToZero => None,
                ResetKind::ToSourceAge => Some(self.device),
                ResetKind::Unchanged => Some(0),
            }
        } else if component == self.device {
            None
        } else {
            Some(component)
        }
    }
}

/// Discrete states, transitions and per-state drift of one system.
#[derive(Debug, Clone)]
pub struct ShsModel {
    variant: Variant,
    rates: UnifiedRate,
    space: StateSpace,
    states: Vec<DiscreteState>,
    transitions: Vec<Transition>,
    drift: Vec<f64>,
}

impl ShsModel {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn n_type1(&self) -> usize {
        self.rates.n_type1()
    }

    /// Length of the continuous state: the monitor plus one age per type-1 device.
    pub fn n_components(&self) -> usize {
        self.n_type1() + 1
    }

    pub fn rates(&self) -> &UnifiedRate {
        &self.rates
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn states(&self) -> &[DiscreteState] {
        &self.states
    }

    /// Transitions grouped by source state, devices in ascending order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[Transition] {
        let k = self.rates.alphabet();
        &self.transitions[state * k..(state + 1) * k]
    }

    pub fn outgoing_rate(&self, state: usize) -> f64 {
        self.outgoing(state).iter().map(|t| t.rate).sum()
    }

    /// Drift `b_q` of state `state`.
    pub fn drift(&self, state: usize) -> &[f64] {
        let c = self.n_components();
        &self.drift[state * c..(state + 1) * c]
    }
}

fn reset_kind(variant: Variant, n: usize, from: &[usize], to: &[usize]) -> ResetKind {
    let p = p_index(to);
    // the sample delivered now was taken when its device last delivered; it is
    // fresher than everything at the monitor iff that earlier delivery sits
    // right after the distinct prefix of the new window
    let fresher = to[0] == from[p - 2];
    match variant {
        Variant::Basic => {
            if fresher {
                ResetKind::ToSourceAge
            } else {
                ResetKind::Unchanged
            }
        }
        Variant::Hybrid => {
            let pt = p_tilde_index(to, n);
            if pt == 1 {
                ResetKind::ToZero
            } else if pt < p || !fresher {
                ResetKind::Unchanged
            } else {
                ResetKind::ToSourceAge
            }
        }
    }
}

fn build(config: &SystemConfig, variant: Variant, cap: u64) -> Result<ShsModel> {
    let n = config.n_type1();
    if n == 0 {
        return Err(Error::InvalidConfig(
            "SHS model needs at least one type-1 device".into(),
        ));
    }
    let space = StateSpace::for_config(config, variant, cap)?;
    let rates = config.rates(variant);
    let k = rates.alphabet();
    let states: Vec<DiscreteState> = (0..space.len()).map(|i| space.decode(i)).collect();
    let mut transitions = Vec::with_capacity(space.len() * k);
    for (from, q) in states.iter().enumerate() {
        for device in 1..=k {
            let to = space.shift(from, device);
            let reset = reset_kind(variant, n, q.sources(), states[to].sources());
            transitions.push(Transition {
                from,
                to,
                device,
                rate: rates.rate(device),
                refresh: reset != ResetKind::Unchanged,
                reset,
            });
        }
    }
    let drift = vec![1.0; space.len() * (n + 1)];
    Ok(ShsModel {
        variant,
        rates,
        space,
        states,
        transitions,
        drift,
    })
}

/// Model of the basic system over `N^N` states.
pub fn build_basic_model(config: &SystemConfig) -> Result<ShsModel> {
    build_basic_model_with_cap(config, DEFAULT_STATE_CAP)
}

pub fn build_basic_model_with_cap(config: &SystemConfig, cap: u64) -> Result<ShsModel> {
    if config.m_type2() > 0 {
        return Err(Error::InvalidConfig(
            "basic model needs a system without type-2 devices".into(),
        ));
    }
    build(config, Variant::Basic, cap)
}

/// Model of the hybrid system over `(N+1)^N` states.
pub fn build_hybrid_model(config: &SystemConfig) -> Result<ShsModel> {
    build_hybrid_model_with_cap(config, DEFAULT_STATE_CAP)
}

pub fn build_hybrid_model_with_cap(config: &SystemConfig, cap: u64) -> Result<ShsModel> {
    build(config, Variant::Hybrid, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(model: &ShsModel, from: &[usize], to: &[usize]) -> Transition {
        let f = model.space().encode(from);
        let t = model.space().encode(to);
        *model
            .outgoing(f)
            .iter()
            .find(|tr| tr.to == t)
            .expect("transition exists")
    }

    #[test]
    fn single_device_self_loop_refreshes() {
        let m = build_basic_model(&SystemConfig::basic(vec![1.0]).unwrap()).unwrap();
        assert_eq!(m.states().len(), 1);
        assert_eq!(m.transitions().len(), 1);
        let t = m.transitions()[0];
        assert_eq!((t.from, t.to), (0, 0));
        assert!(t.refresh);
        assert_eq!(t.reset, ResetKind::ToSourceAge);
    }

    #[test]
    fn basic_refresh_rule() {
        let m = build_basic_model(&SystemConfig::basic(vec![1.0, 2.0]).unwrap()).unwrap();
        let t = find(&m, &[1, 1], &[2, 1]);
        assert!(!t.refresh);
        assert_eq!(t.rate, 2.0);
        let t = find(&m, &[2, 1], &[1, 2]);
        assert!(t.refresh);
        assert_eq!(t.rate, 1.0);
    }

    #[test]
    fn hybrid_single_device() {
        let c = SystemConfig::new(vec![1.0], vec![1.0]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        assert_eq!(m.states().len(), 2);
        let into_type2: Vec<_> = m.transitions().iter().filter(|t| t.to == 1).collect();
        assert_eq!(into_type2.len(), 2);
        for t in into_type2 {
            assert_eq!(t.reset, ResetKind::ToZero);
            assert_eq!(t.rate, 1.0);
        }
        // type-1 delivery right after a type-2 one is stale
        assert_eq!(find(&m, &[2], &[1]).reset, ResetKind::Unchanged);
        assert_eq!(find(&m, &[1], &[1]).reset, ResetKind::ToSourceAge);
    }

    #[test]
    fn hybrid_refresh_rule() {
        let c = SystemConfig::new(vec![1.0, 1.0], vec![1.0]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        // repeat with no type-2 delivery in the window: fresher
        let t = find(&m, &[1, 2], &[1, 1]);
        assert_eq!(t.reset, ResetKind::ToSourceAge);
        // all distinct, no type-2: device 1 last delivered just before the window
        assert_eq!(find(&m, &[2, 1], &[1, 2]).reset, ResetKind::ToSourceAge);
        // a type-2 delivery after device 1's previous delivery: stale
        assert_eq!(find(&m, &[3, 1], &[1, 3]).reset, ResetKind::Unchanged);
        assert_eq!(find(&m, &[3, 3], &[1, 3]).reset, ResetKind::Unchanged);
        // type-2 delivery
        assert_eq!(find(&m, &[1, 2], &[3, 1]).reset, ResetKind::ToZero);
    }

    #[test]
    fn every_state_has_full_fan_out() {
        let c = SystemConfig::new(vec![0.5, 1.0, 2.0], vec![0.7, 0.3]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        for s in 0..m.states().len() {
            assert_eq!(m.outgoing(s).len(), 4);
            assert!((m.outgoing_rate(s) - 4.5).abs() < 1e-12);
            assert!(m.outgoing(s).iter().all(|t| t.from == s));
        }
        let b = build_basic_model(&SystemConfig::basic(vec![0.5, 1.0, 2.0]).unwrap()).unwrap();
        for s in 0..b.states().len() {
            assert_eq!(b.outgoing(s).len(), 3);
            assert!((b.outgoing_rate(s) - 3.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reset_sources() {
        let t = Transition {
            from: 0,
            to: 0,
            device: 2,
            rate: 1.0,
            refresh: true,
            reset: ResetKind::ToSourceAge,
        };
        assert_eq!(t.reset_source(0), Some(2));
        assert_eq!(t.reset_source(2), None);
        assert_eq!(t.reset_source(1), Some(1));
    }
}
