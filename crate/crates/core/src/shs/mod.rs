//! Stochastic hybrid system model and solver.

mod check;
pub mod linalg;
mod model;
mod solve;

pub use check::{closed_form_check, ClosedFormReport};
pub use model::{
    build_basic_model, build_basic_model_with_cap, build_hybrid_model, build_hybrid_model_with_cap,
    ResetKind, ShsModel, Transition,
};
pub use solve::{
    recurrent_class, solve, solve_correlation, solve_steady_state, ShsSolution, DENSE_LIMIT,
};
