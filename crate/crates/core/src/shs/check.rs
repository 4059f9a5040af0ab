//! Comparison of an SHS solution against the per-state closed forms
//! `pi_q = W(q)/R^N`, `v_q0 = s(q) W(q)/R^{N+1}` and `v_qi = p_i(q) W(q)/R^{N+1}`,
//! where `s` is `p` for the basic system and `min(p, p~)` for the hybrid one.

use alloc::vec;

use super::model::ShsModel;
use super::solve::ShsSolution;
use crate::model::{p_index, p_tilde_index, Variant};

/// Largest deviations between solver output and the closed forms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClosedFormReport {
    pub max_abs_pi: f64,
    pub max_rel_pi: f64,
    pub max_abs_v0: f64,
    pub max_rel_v0: f64,
    pub max_abs_vi: f64,
    pub max_rel_vi: f64,
    pub states: usize,
}

impl ClosedFormReport {
    pub fn max_rel(&self) -> f64 {
        self.max_rel_pi.max(self.max_rel_v0).max(self.max_rel_vi)
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_pi.max(self.max_abs_v0).max(self.max_abs_vi)
    }
}

fn track(abs: &mut f64, rel: &mut f64, got: f64, want: f64) {
    let d = (got - want).abs();
    *abs = abs.max(d);
    // where the closed form vanishes the absolute error stands in
    let r = if want > 0.0 { d / want } else { d };
    *rel = rel.max(r);
}

/// Checks every state and every type-1 component present in the state.
pub fn closed_form_check(model: &ShsModel, solution: &ShsSolution) -> ClosedFormReport {
    let n = model.n_type1();
    let rates = model.rates();
    let total = rates.total();
    let mut report = ClosedFormReport {
        states: model.states().len(),
        ..Default::default()
    };
    let mut seen = vec![false; n + 1];
    for (s, q) in model.states().iter().enumerate() {
        let q = q.sources();
        // normalised weight W(q) / R^N
        let mut ln_w = 0.0;
        let mut zero = false;
        for &d in q {
            let r = rates.rate(d);
            if r <= 0.0 {
                zero = true;
                break;
            }
            ln_w += libm::log(r / total);
        }
        let w = if zero { 0.0 } else { libm::exp(ln_w) };
        track(
            &mut report.max_abs_pi,
            &mut report.max_rel_pi,
            solution.pi[s],
            w,
        );
        let p = p_index(q);
        let reach = match model.variant() {
            Variant::Basic => p,
            Variant::Hybrid => p.min(p_tilde_index(q, n)),
        };
        let v = solution.v_state(s);
        track(
            &mut report.max_abs_v0,
            &mut report.max_rel_v0,
            v[0],
            reach as f64 * w / total,
        );
        seen.iter_mut().for_each(|x| *x = false);
        for (pos, &d) in q.iter().enumerate() {
            if d > n || seen[d] {
                continue;
            }
            seen[d] = true;
            if !v[d].is_finite() {
                continue;
            }
            track(
                &mut report.max_abs_vi,
                &mut report.max_rel_vi,
                v[d],
                (pos + 1) as f64 * w / total,
            );
        }
    }
    report
}
