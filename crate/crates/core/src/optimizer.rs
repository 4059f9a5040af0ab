//! Deployment budget study: type-1 devices cost 1, type-2 devices cost `k`,
//! and a budget `D` buys any integer mix with `n + k·m ≤ D`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::analytic::{collapsed_value, first_repeat_series};
use crate::error::{Error, Result};
use crate::numeric::ln_factorials;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentPoint {
    pub n: usize,
    pub m: usize,
    pub cost: f64,
    pub aoi: f64,
}

impl DeploymentPoint {
    pub fn is_pure_type1(&self) -> bool {
        self.m == 0
    }

    pub fn is_pure_type2(&self) -> bool {
        self.n == 0
    }

    /// Lower AoI first; ties go to fewer type-2 devices, then fewer type-1.
    fn rank(&self, other: &Self) -> Ordering {
        self.aoi
            .total_cmp(&other.aoi)
            .then(self.m.cmp(&other.m))
            .then(self.n.cmp(&other.n))
    }
}

/// Grid budgets bracketing the mixed region: every grid budget below `left`
/// has a pure type-1 optimum and every grid budget above `right` a pure type-2
/// one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdInterval {
    pub k: f64,
    pub left: f64,
    pub right: f64,
    /// No pure type-1 optimum at the low end or no pure type-2 optimum at
    /// the high end of the grid.
    pub grid_too_coarse: bool,
}

/// One feasible deployment, normalised by the all-type-1 point `(⌊D⌋, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceRow {
    pub n: usize,
    pub m: usize,
    pub cost: f64,
    pub aoi: f64,
    pub ratio: f64,
}

fn check_rates(k: f64, mu_each: f64, lambda_each: f64) -> Result<()> {
    for (name, x) in [("k", k), ("mu", mu_each), ("lambda", lambda_each)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidConfig(alloc::format!(
                "{name} must be positive"
            )));
        }
    }
    Ok(())
}

/// Homogeneous AoI of `n` type-1 devices at `mu_each` and `m` type-2 devices
/// at `lambda_each`, with factorial tables shared across calls.
#[derive(Debug, Clone)]
pub struct DeploymentEvaluator {
    mu_each: f64,
    lambda_each: f64,
    ln_fact: Vec<f64>,
    series: Vec<f64>,
}

impl DeploymentEvaluator {
    /// Prepares evaluation for up to `max_n` type-1 devices.
    pub fn new(max_n: usize, mu_each: f64, lambda_each: f64) -> Self {
        Self {
            mu_each,
            lambda_each,
            ln_fact: ln_factorials(max_n),
            series: (0..=max_n)
                .map(|n| if n == 0 { 0.0 } else { first_repeat_series(n) })
                .collect(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.series.len() - 1
    }

    pub fn aoi(&self, n: usize, m: usize) -> f64 {
        let lambda_total = m as f64 * self.lambda_each;
        if n == 0 {
            return 1.0 / lambda_total;
        }
        assert!(
            n <= self.max_n(),
            "evaluator prepared for at most {} devices",
            self.max_n()
        );
        collapsed_value(
            n,
            n as f64 * self.mu_each,
            lambda_total,
            &self.ln_fact,
            self.series[n],
        )
    }
}

fn fits(cost: f64, budget: f64) -> bool {
    cost <= budget * (1.0 + 1e-12)
}

/// Every feasible `(n, m) ≠ (0, 0)` under budget `d_cost`, ordered by `m` then `n`.
pub fn feasible_set(k: f64, d_cost: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut m = 0usize;
    while fits(k * m as f64, d_cost) {
        let mut n = 0usize;
        while fits(m as f64 * k + n as f64, d_cost) {
            if n + m > 0 {
                out.push((n, m));
            }
            n += 1;
        }
        m += 1;
    }
    out
}

fn best_of(
    eval: &DeploymentEvaluator,
    k: f64,
    points: impl Iterator<Item = (usize, usize)>,
) -> Option<DeploymentPoint> {
    points
        .map(|(n, m)| DeploymentPoint {
            n,
            m,
            cost: n as f64 + k * m as f64,
            aoi: eval.aoi(n, m),
        })
        .min_by(|a, b| a.rank(b))
}

/// Exhaustive minimiser of the AoI over the feasible set.
pub fn optimal_deployment(
    k: f64,
    d_cost: f64,
    mu_each: f64,
    lambda_each: f64,
) -> Result<DeploymentPoint> {
    check_rates(k, mu_each, lambda_each)?;
    let points = feasible_set(k, d_cost);
    let max_n = points.iter().map(|p| p.0).max().unwrap_or(0);
    let eval = DeploymentEvaluator::new(max_n, mu_each, lambda_each);
    best_of(&eval, k, points.into_iter()).ok_or(Error::InfeasibleBudget { budget: d_cost })
}

/// Optimum for every budget of an increasing grid, sharing one evaluation of
/// each feasible point.
pub fn optimal_deployments(
    k: f64,
    d_grid: &[f64],
    mu_each: f64,
    lambda_each: f64,
) -> Result<Vec<DeploymentPoint>> {
    check_rates(k, mu_each, lambda_each)?;
    if d_grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
    {
        return Err(Error::InvalidConfig(
            "budget grid must be strictly increasing".into(),
        ));
    }
    let Some(&d_max) = d_grid.last() else {
        return Ok(Vec::new());
    };
    let mut points: Vec<DeploymentPoint> = {
        let set = feasible_set(k, d_max);
        let max_n = set.iter().map(|p| p.0).max().unwrap_or(0);
        let eval = DeploymentEvaluator::new(max_n, mu_each, lambda_each);
        set.into_iter()
            .map(|(n, m)| DeploymentPoint {
                n,
                m,
                cost: n as f64 + k * m as f64,
                aoi: eval.aoi(n, m),
            })
            .collect()
    };
    points.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    let mut out = Vec::with_capacity(d_grid.len());
    let mut best: Option<DeploymentPoint> = None;
    let mut next = 0;
    for &d in d_grid {
        while next < points.len() && fits(points[next].cost, d) {
            let p = points[next];
            if best.is_none_or(|b| p.rank(&b) == Ordering::Less) {
                best = Some(p);
            }
            next += 1;
        }
        out.push(best.ok_or(Error::InfeasibleBudget { budget: d })?);
    }
    Ok(out)
}

/// Locates the mixed region on `d_grid`.
pub fn threshold_interval(
    k: f64,
    mu_each: f64,
    lambda_each: f64,
    d_grid: &[f64],
) -> Result<ThresholdInterval> {
    let optima = optimal_deployments(k, d_grid, mu_each, lambda_each)?;
    if optima.is_empty() {
        return Err(Error::InvalidConfig("empty budget grid".into()));
    }
    let first_mixed = optima.iter().position(|p| !p.is_pure_type1());
    let last_mixed = optima.iter().rposition(|p| !p.is_pure_type2());
    let left = d_grid[first_mixed.unwrap_or(d_grid.len() - 1)];
    let right = d_grid[last_mixed.unwrap_or(0)];
    let grid_too_coarse = !optima[0].is_pure_type1() || !optima[optima.len() - 1].is_pure_type2();
    Ok(ThresholdInterval {
        k,
        left,
        right: right.max(left),
        grid_too_coarse,
    })
}

/// All feasible points under `d_cost`, each with its ratio to `(⌊D⌋, 0)`.
pub fn aoi_surface(k: f64, d_cost: f64, mu_each: f64, lambda_each: f64) -> Result<Vec<SurfaceRow>> {
    check_rates(k, mu_each, lambda_each)?;
    if d_cost.is_nan() || d_cost < 1.0 {
        return Err(Error::InfeasibleBudget { budget: d_cost });
    }
    let points = feasible_set(k, d_cost);
    let max_n = points.iter().map(|p| p.0).max().unwrap_or(0);
    let eval = DeploymentEvaluator::new(max_n, mu_each, lambda_each);
    let reference = eval.aoi(max_n, 0);
    Ok(points
        .into_iter()
        .map(|(n, m)| {
            let aoi = eval.aoi(n, m);
            SurfaceRow {
                n,
                m,
                cost: n as f64 + k * m as f64,
                aoi,
                ratio: aoi / reference,
            }
        })
        .collect())
}
