//! System configuration, discrete states and the combinatorial helpers that
//! the closed forms and the SHS solver share.
//!
//! Device indices are 1-based: type-1 devices are `1..=N` and, in the hybrid
//! variant, the aggregated type-2 device is `N + 1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Default limit on the number of discrete states an exact method may visit.
pub const DEFAULT_STATE_CAP: u64 = 5_000_000;

/// Whether the type-2 device is part of the discrete-state alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Type-1 devices only; alphabet `1..=N`.
    Basic,
    /// Type-1 devices plus the aggregated type-2 device; alphabet `1..=N+1`.
    Hybrid,
}

/// Device counts and rates of one basic or hybrid system.
///
/// The type-2 devices are aggregated into a single Poisson stream as soon as
/// the configuration is built; the per-device rates are kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    mu: Vec<f64>,
    lambda_each: Vec<f64>,
    mu_total: f64,
    lambda_total: f64,
}

impl SystemConfig {
    pub fn new(mu: Vec<f64>, lambda_each: Vec<f64>) -> Result<Self> {
        if let Some(bad) = mu
            .iter()
            .chain(lambda_each.iter())
            .find(|r| !r.is_finite() || **r < 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "rates must be finite and non-negative, got {bad}"
            )));
        }
        let mu_total = mu.iter().copied().collect::<KahanSum>().value();
        let lambda_total = lambda_each.iter().copied().collect::<KahanSum>().value();
        if lambda_each.is_empty() && (mu.is_empty() || mu_total <= 0.0) {
            return Err(Error::InvalidConfig(
                "a system without type-2 devices needs at least one type-1 device with positive rate"
                    .into(),
            ));
        }
        if mu_total + lambda_total <= 0.0 {
            return Err(Error::ZeroTotalRate);
        }
        Ok(Self {
            mu,
            lambda_each,
            mu_total,
            lambda_total,
        })
    }

    /// `n` type-1 devices at rate `mu_each` and `m` type-2 devices at rate `lambda_each`.
    pub fn homogeneous(n: usize, mu_each: f64, m: usize, lambda_each: f64) -> Result<Self> {
        Self::new(vec![mu_each; n], vec![lambda_each; m])
    }

    pub fn basic(mu: Vec<f64>) -> Result<Self> {
        Self::new(mu, Vec::new())
    }

    pub fn n_type1(&self) -> usize {
        self.mu.len()
    }

    pub fn m_type2(&self) -> usize {
        self.lambda_each.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn lambda_each(&self) -> &[f64] {
        &self.lambda_each
    }

    /// `μ = Σ μ_i`.
    pub fn mu_total(&self) -> f64 {
        self.mu_total
    }

    /// `λ = Σ λ_i`.
    pub fn lambda_total(&self) -> f64 {
        self.lambda_total
    }

    pub fn total_rate(&self) -> f64 {
        self.mu_total + self.lambda_total
    }

    /// Hybrid as soon as any type-2 device is declared.
    pub fn variant(&self) -> Variant {
        if self.lambda_each.is_empty() {
            Variant::Basic
        } else {
            Variant::Hybrid
        }
    }

    /// `true` when every type-1 device has the same rate.
    pub fn is_homogeneous(&self) -> bool {
        self.mu.windows(2).all(|w| w[0] == w[1])
    }

    /// Per-device rates over the alphabet of `variant`.
    pub fn rates(&self, variant: Variant) -> UnifiedRate {
        UnifiedRate::new(self, variant)
    }
}

/// `Σ λ_i`: the rate of the single Poisson stream that replaces all type-2 devices.
pub fn aggregate_type2(config: &SystemConfig) -> f64 {
    config.lambda_total()
}

/// Rate of every device in the alphabet: `μ_i` for `i <= N` and, in the
/// hybrid alphabet, the aggregate `λ` at index `N + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnifiedRate {
    rates: Vec<f64>,
    n_type1: usize,
}

impl UnifiedRate {
    pub fn new(config: &SystemConfig, variant: Variant) -> Self {
        let mut rates = config.mu.clone();
        if variant == Variant::Hybrid {
            rates.push(config.lambda_total);
        }
        Self {
            rates,
            n_type1: config.n_type1(),
        }
    }

    /// Rate of device `device` (1-based).
    pub fn rate(&self, device: usize) -> f64 {
        self.rates[device - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rates
    }

    /// Number of symbols in the alphabet.
    pub fn alphabet(&self) -> usize {
        self.rates.len()
    }

    pub fn n_type1(&self) -> usize {
        self.n_type1
    }

    pub fn total(&self) -> f64 {
        self.rates.iter().copied().collect::<KahanSum>().value()
    }

    /// `true` for the aggregated type-2 device.
    pub fn is_type2(&self, device: usize) -> bool {
        device > self.n_type1
    }
}

/// Sources of the latest `N` delivered updates, most recent first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscreteState {
    sources: Vec<usize>,
}

impl DiscreteState {
    /// Checks that `sources` has length `n` and fits the alphabet of `variant`.
    pub fn new(sources: Vec<usize>, n: usize, variant: Variant) -> Result<Self> {
        if sources.len() != n {
            return Err(Error::InvalidState(format!(
                "expected {n} entries, got {}",
                sources.len()
            )));
        }
        let max = match variant {
            Variant::Basic => n,
            Variant::Hybrid => n + 1,
        };
        if let Some(bad) = sources.iter().find(|&&s| s == 0 || s > max) {
            return Err(Error::InvalidState(format!(
                "entry {bad} outside the alphabet 1..={max}"
            )));
        }
        Ok(Self { sources })
    }

    pub(crate) fn from_vec_unchecked(sources: Vec<usize>) -> Self {
        Self { sources }
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// `p(q)`: one plus the length of the longest prefix of `q` without a repeated
/// source. Equals `N + 1` exactly when all entries are distinct.
pub fn p_index(q: &[usize]) -> usize {
    for r in 1..q.len() {
        if q[..r].contains(&q[r]) {
            return r + 1;
        }
    }
    q.len() + 1
}

/// `p̃(q)`: position of the most recent type-2 delivery, or `N + 1` when there
/// is none in the window. `n` is the number of type-1 devices.
pub fn p_tilde_index(q: &[usize], n: usize) -> usize {
    q.iter()
        .position(|&s| s == n + 1)
        .map_or(q.len() + 1, |r| r + 1)
}

/// `p_i(q)`: position of the latest update from type-1 device `device`.
pub fn p_i_index(q: &[usize], device: usize) -> Result<usize> {
    q.iter()
        .position(|&s| s == device)
        .map(|r| r + 1)
        .ok_or(Error::DeviceAbsent { device })
}

/// `M(q)` for the basic variant or `U(q)` for the hybrid one: the product of
/// the rates of the devices listed in `q`.
pub fn state_weight(q: &DiscreteState, config: &SystemConfig, variant: Variant) -> f64 {
    let rates = config.rates(variant);
    q.sources().iter().map(|&s| rates.rate(s)).product()
}

/// Mixed-radix indexing of the `K^N` states of a window of length `N` over an
/// alphabet of size `K`, in lexicographic order with `q(1)` most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSpace {
    n: usize,
    alphabet: usize,
    len: usize,
    lead: usize,
}

impl StateSpace {
    pub fn new(n: usize, alphabet: usize, cap: u64) -> Result<Self> {
        if n == 0 || alphabet == 0 {
            return Err(Error::InvalidConfig(
                "state enumeration needs at least one type-1 device".into(),
            ));
        }
        let states = (alphabet as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if states > cap as u128 {
            return Err(Error::CapExceeded { states, cap });
        }
        Ok(Self {
            n,
            alphabet,
            len: states as usize,
            lead: alphabet.pow(n as u32 - 1),
        })
    }

    pub fn for_config(config: &SystemConfig, variant: Variant, cap: u64) -> Result<Self> {
        let n = config.n_type1();
        let alphabet = match variant {
            Variant::Basic => n,
            Variant::Hybrid => n + 1,
        };
        Self::new(n, alphabet, cap)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn window(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Writes the sources of state `index` into `out` (length `N`).
    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.alphabet + 1;
            index /= self.alphabet;
        }
    }

    pub fn decode(&self, index: usize) -> DiscreteState {
        let mut sources = vec![0; self.n];
        self.decode_into(index, &mut sources);
        DiscreteState::from_vec_unchecked(sources)
    }

    pub fn encode(&self, q: &[usize]) -> usize {
        q.iter().fold(0, |acc, &s| acc * self.alphabet + (s - 1))
    }

    /// Index of `[device, q(1), …, q(N-1)]`: the state after `device` delivers.
    pub fn shift(&self, index: usize, device: usize) -> usize {
        (device - 1) * self.lead + index / self.alphabet
    }
}

/// Lexicographic iterator over every discrete state.
#[derive(Debug, Clone)]
pub struct StateIter {
    current: Option<Vec<usize>>,
    alphabet: usize,
}

impl Iterator for StateIter {
    type Item = DiscreteState;

    fn next(&mut self) -> Option<DiscreteState> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        // odometer increment, last entry fastest
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            if cur[pos] < self.alphabet {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 1;
        }
        Some(DiscreteState::from_vec_unchecked(out))
    }
}

/// Every discrete state of `variant`, each exactly once, in lexicographic order.
pub fn enumerate_states(config: &SystemConfig, variant: Variant, cap: u64) -> Result<StateIter> {
    let space = StateSpace::for_config(config, variant, cap)?;
    Ok(StateIter {
        current: Some(vec![1; space.window()]),
        alphabet: space.alphabet(),
    })
}
