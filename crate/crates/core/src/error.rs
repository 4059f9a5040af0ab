use alloc::string::String;
use core::fmt;

/// Errors produced by the model, the closed forms, the solver and the simulator.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A configuration or parameter violated its invariants.
    InvalidConfig(String),
    /// A discrete state does not fit the declared alphabet.
    InvalidState(String),
    /// Exact enumeration would visit more states than allowed.
    CapExceeded { states: u128, cap: u64 },
    /// The total rate of the system is zero, so there are no dynamics.
    ZeroTotalRate,
    /// A rate that must be positive was zero.
    ZeroRate,
    /// The device never appears in the discrete state.
    DeviceAbsent { device: usize },
    /// The Markov chain on its positive-rate support is not irreducible,
    /// or a linear system turned out singular.
    Singular(String),
    /// An iterative solve did not reach its tolerance.
    NotConverged { iterations: usize, residual: f64 },
    /// FCFS baseline with load at or above one.
    Unstable { load: f64 },
    /// Adoption events were not in chronological order.
    UnorderedEvents { index: usize },
    /// A simulated quantity became NaN or infinite.
    NonFinite,
    /// No deployment fits the budget.
    InfeasibleBudget { budget: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid discrete state: {msg}"),
            Error::CapExceeded { states, cap } => write!(
                f,
                "state space has {states} states, above the enumeration cap of {cap}; \
                 use the homogeneous formulas instead"
            ),
            Error::ZeroTotalRate => f.write_str("total rate is zero"),
            Error::ZeroRate => f.write_str("rate must be positive"),
            Error::DeviceAbsent { device } => {
                write!(f, "device {device} does not appear in the state")
            }
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::NotConverged {
                iterations,
                residual,
            } => write!(
                f,
                "iterative solve stopped after {iterations} iterations (residual {residual:e})"
            ),
            Error::Unstable { load } => {
                write!(f, "FCFS queue is unstable at load {load} (needs load < 1)")
            }
            Error::UnorderedEvents { index } => {
                write!(f, "event {index} is earlier than its predecessor")
            }
            Error::NonFinite => f.write_str("non-finite value in simulation"),
            Error::InfeasibleBudget { budget } => {
                write!(f, "budget {budget} cannot pay for a single device")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
