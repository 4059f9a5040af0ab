//! Stationary distribution and first-moment (correlation) vectors of an SHS model.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{solve_sparse, CsrMatrix, DenseMatrix, IterativeOptions};
use super::model::ShsModel;
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Systems up to this many recurrent states are solved with dense LU; larger
/// ones go through the sparse path.
pub const DENSE_LIMIT: usize = 1000;

/// Solution of the SHS equations over all discrete states.
#[derive(Debug, Clone)]
pub struct ShsSolution {
    pub pi: Vec<f64>,
    /// `v[q * (N + 1) + c]`; components of zero-rate type-1 devices are
    /// infinite where `pi > 0`.
    pub v: Vec<f64>,
    pub n_components: usize,
    pub aoi: f64,
}

impl ShsSolution {
    pub fn v_state(&self, state: usize) -> &[f64] {
        &self.v[state * self.n_components..(state + 1) * self.n_components]
    }
}

/// Strongly connected components over positive-rate edges, in an order where
/// every edge between components points to an earlier one (Tarjan).
fn strongly_connected(model: &ShsModel) -> (Vec<usize>, usize) {
    let n = model.states().len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut n_comp = 0usize;
    // explicit call stack of (node, next outgoing edge)
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (node, ref mut edge)) = frames.last_mut() {
            let out = model.outgoing(node);
            if *edge < out.len() {
                let t = out[*edge];
                *edge += 1;
                if t.rate <= 0.0 {
                    continue;
                }
                let w = t.to;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[node] = low[node].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[node]);
            }
            if low[node] == index[node] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = n_comp;
                    if w == node {
                        break;
                    }
                }
                n_comp += 1;
            }
        }
    }
    (comp, n_comp)
}

/// States of the unique closed communicating class. Fails unless exactly one
/// class is closed.
pub fn recurrent_class(model: &ShsModel) -> Result<Vec<usize>> {
    let (comp, n_comp) = strongly_connected(model);
    let mut closed = vec![true; n_comp];
    for t in model.transitions() {
        if t.rate > 0.0 && comp[t.from] != comp[t.to] {
            closed[comp[t.from]] = false;
        }
    }
    let closed_ids: Vec<usize> = (0..n_comp).filter(|&c| closed[c]).collect();
    if closed_ids.len() != 1 {
        return Err(Error::Singular(format!(
            "{} closed communicating classes",
            closed_ids.len()
        )));
    }
    let id = closed_ids[0];
    Ok((0..comp.len()).filter(|&s| comp[s] == id).collect())
}

/// Maps global state indices to positions in `class`.
fn local_index(n_states: usize, class: &[usize]) -> Vec<usize> {
    let mut local = vec![usize::MAX; n_states];
    for (i, &s) in class.iter().enumerate() {
        local[s] = i;
    }
    local
}

/// Stationary distribution; zero outside the recurrent class.
pub fn solve_steady_state(model: &ShsModel) -> Result<Vec<f64>> {
    let class = recurrent_class(model)?;
    let local = local_index(model.states().len(), &class);
    let n = class.len();
    let pi_local = if n <= DENSE_LIMIT {
        // pi G = 0 with one balance row replaced by normalisation
        let mut a = DenseMatrix::zeros(n);
        for &s in &class {
            for t in model.outgoing(s) {
                if t.rate <= 0.0 || t.to == t.from {
                    continue;
                }
                let (i, j) = (local[t.from], local[t.to]);
                a.add(j, i, t.rate);
                a.add(i, i, -t.rate);
            }
        }
        a.set_row(0, 1.0);
        let mut b = vec![0.0; n];
        b[0] = 1.0;
        a.solve(b)?
    } else {
        power_iteration(model, &class, &local)?
    };
    let mut pi = vec![0.0; model.states().len()];
    for (i, &s) in class.iter().enumerate() {
        pi[s] = pi_local[i];
    }
    Ok(pi)
}

/// Power iteration on the uniformised chain restricted to the recurrent class.
fn power_iteration(model: &ShsModel, class: &[usize], local: &[usize]) -> Result<Vec<f64>> {
    let n = class.len();
    let max_out = class
        .iter()
        .map(|&s| model.outgoing_rate(s))
        .fold(0.0f64, f64::max);
    let unif = max_out * 1.05;
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let max_iter = 100_000;
    // rounding noise of one sweep
    let tol = 4.0 * n as f64 * f64::EPSILON;
    let mut diff = f64::INFINITY;
    for _ in 0..max_iter {
        for (i, &s) in class.iter().enumerate() {
            next[i] = x[i] * (1.0 - model.outgoing_rate(s) / unif);
        }
        for (i, &s) in class.iter().enumerate() {
            for t in model.outgoing(s) {
                if t.rate > 0.0 {
                    next[local[t.to]] += x[i] * t.rate / unif;
                }
            }
        }
        let total: f64 = next.iter().sum();
        diff = 0.0;
        for i in 0..n {
            next[i] /= total;
            diff += (next[i] - x[i]).abs();
        }
        core::mem::swap(&mut x, &mut next);
        if diff <= tol {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: diff,
    })
}

fn solve_linear(n: usize, triplets: Vec<(usize, usize, f64)>, rhs: Vec<f64>) -> Result<Vec<f64>> {
    let a = CsrMatrix::from_triplets(n, triplets);
    if n <= DENSE_LIMIT {
        a.to_dense().solve(rhs)
    } else {
        solve_sparse(&a, &rhs, IterativeOptions::default())
    }
}

/// Solves `v_q R_q = b_q pi_q + sum over transitions l into q of rate_l * (v_{from} A_l)`
/// for every state and component, given the stationary distribution.
pub fn solve_correlation(model: &ShsModel, pi: &[f64]) -> Result<ShsSolution> {
    let n_states = model.states().len();
    if pi.len() != n_states {
        return Err(Error::InvalidState(
            "pi length does not match the model".into(),
        ));
    }
    let class = recurrent_class(model)?;
    let local = local_index(n_states, &class);
    let n = class.len();
    let kc = model.n_components();
    let mut v = vec![0.0; n_states * kc];
    // type-1 components first: each only couples to itself
    let order = (1..kc).chain(core::iter::once(0));
    for c in order {
        if c > 0 && model.rates().rate(c) <= 0.0 {
            for &s in &class {
                v[s * kc + c] = if pi[s] > 0.0 { f64::INFINITY } else { 0.0 };
            }
            continue;
        }
        let mut triplets = Vec::with_capacity(n * (model.rates().alphabet() + 1));
        let mut rhs = vec![0.0; n];
        for (i, &s) in class.iter().enumerate() {
            triplets.push((i, i, model.outgoing_rate(s)));
            rhs[i] += model.drift(s)[c] * pi[s];
        }
        for &s in &class {
            for t in model.outgoing(s) {
                if t.rate <= 0.0 {
                    continue;
                }
                let j = local[t.to];
                match t.reset_source(c) {
                    None => {}
                    Some(src) if src == c => triplets.push((j, local[t.from], -t.rate)),
                    Some(src) => rhs[j] += t.rate * v[t.from * kc + src],
                }
            }
        }
        let x = solve_linear(n, triplets, rhs)?;
        for (i, &s) in class.iter().enumerate() {
            v[s * kc + c] = x[i];
        }
    }
    let aoi: KahanSum = (0..n_states).map(|s| v[s * kc]).collect();
    let aoi = aoi.value();
    if !aoi.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(ShsSolution {
        pi: pi.to_vec(),
        v,
        n_components: kc,
        aoi,
    })
}

/// Steady state followed by the correlation vectors.
pub fn solve(model: &ShsModel) -> Result<ShsSolution> {
    let pi = solve_steady_state(model)?;
    solve_correlation(model, &pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemConfig;
    use crate::shs::model::{build_basic_model, build_hybrid_model};

    #[test]
    fn two_device_basic_steady_state() {
        let m = build_basic_model(&SystemConfig::basic(vec![1.0, 2.0]).unwrap()).unwrap();
        let pi = solve_steady_state(&m).unwrap();
        let want = [1.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 4.0 / 9.0];
        for (a, b) in pi.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let sol = solve_correlation(&m, &pi).unwrap();
        assert!((sol.aoi - 22.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn single_device_cases() {
        let m = build_basic_model(&SystemConfig::basic(vec![2.0]).unwrap()).unwrap();
        let sol = solve(&m).unwrap();
        assert!((sol.aoi - 1.0).abs() < 1e-14);
        let c = SystemConfig::new(vec![1.0], vec![1.0]).unwrap();
        let sol = solve(&build_hybrid_model(&c).unwrap()).unwrap();
        assert!((sol.aoi - 0.75).abs() < 1e-14);
    }

    #[test]
    fn zero_rate_type1_devices() {
        let c = SystemConfig::new(vec![0.0, 0.0], vec![2.0]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        let sol = solve(&m).unwrap();
        assert!((sol.aoi - 0.5).abs() < 1e-14);
        let recurrent = m.space().encode(&[3, 3]);
        assert_eq!(sol.pi[recurrent], 1.0);
        assert!(sol.v_state(recurrent)[1].is_infinite());
        let c = SystemConfig::new(vec![1.0, 0.0], vec![]).unwrap();
        let sol = solve(&build_basic_model(&c).unwrap()).unwrap();
        assert!((sol.aoi - 2.0).abs() < 1e-14);
    }

    #[test]
    fn flow_balance() {
        let c = SystemConfig::new(vec![0.3, 1.1, 2.0], vec![0.4, 0.6]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        let pi = solve_steady_state(&m).unwrap();
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        let mut inflow = vec![0.0; pi.len()];
        for t in m.transitions() {
            inflow[t.to] += t.rate * pi[t.from];
        }
        for (s, f) in inflow.iter().enumerate() {
            assert!((f - pi[s] * m.outgoing_rate(s)).abs() < 1e-13);
        }
    }

    #[test]
    fn power_iteration_matches_dense() {
        let c = SystemConfig::new(vec![0.3, 1.1, 2.0], vec![0.5]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        let class = recurrent_class(&m).unwrap();
        let local = local_index(m.states().len(), &class);
        let dense = solve_steady_state(&m).unwrap();
        let iter = power_iteration(&m, &class, &local).unwrap();
        for (i, &s) in class.iter().enumerate() {
            assert!((dense[s] - iter[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn sparse_path_matches_dense_on_correlations() {
        let c = SystemConfig::new(vec![0.3, 1.1, 2.0, 0.7], vec![0.5]).unwrap();
        let m = build_hybrid_model(&c).unwrap();
        let sol = solve(&m).unwrap();
        let class = recurrent_class(&m).unwrap();
        let n = class.len();
        // component 1 via the sparse solver
        let mut trip = Vec::new();
        let mut rhs = vec![0.0; n];
        for (i, &s) in class.iter().enumerate() {
            trip.push((i, i, m.outgoing_rate(s)));
            rhs[i] = sol.pi[s];
            for t in m.outgoing(s) {
                if t.reset_source(1) == Some(1) {
                    trip.push((t.to, i, -t.rate));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, trip);
        let x = solve_sparse(&a, &rhs, IterativeOptions::default()).unwrap();
        for (i, &s) in class.iter().enumerate() {
            assert!((x[i] - sol.v_state(s)[1]).abs() < 1e-12);
        }
    }
}
