//! Closed-form average AoI.
//!
//! The exact forms sum a per-state weight over the whole discrete state space;
//! the homogeneous forms collapse that sum into `O(N)` or `O(N^2)` terms and
//! stay usable for tens of thousands of devices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{p_index, p_tilde_index, StateSpace, SystemConfig, Variant, DEFAULT_STATE_CAP};
use crate::numeric::{ln_binomial, ln_factorials, ln_pow, KahanSum};

/// Which closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Enumeration over the `N^N` basic states.
    BasicExact,
    /// Enumeration over the `(N+1)^N` hybrid states.
    HybridExact,
    /// Homogeneous basic system, single sum over the first repeat position.
    BasicHomogeneous,
    /// Homogeneous hybrid system, double sum over type-2 counts and positions.
    HybridHomogeneous,
    /// No active type-1 device: `1/λ`.
    Type2Only,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::BasicExact => "basic_exact",
            Method::HybridExact => "hybrid_exact",
            Method::BasicHomogeneous => "basic_homogeneous",
            Method::HybridHomogeneous => "hybrid_homogeneous",
            Method::Type2Only => "type2_only",
        }
    }
}

/// An average AoI value with the method and the rates it was computed for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoiResult {
    pub value: f64,
    pub method: Method,
    pub n_type1: usize,
    pub mu_total: f64,
    pub lambda_total: f64,
}

impl AoiResult {
    fn new(value: f64, method: Method, n_type1: usize, mu_total: f64, lambda_total: f64) -> Self {
        Self {
            value,
            method,
            n_type1,
            mu_total,
            lambda_total,
        }
    }
}

fn check_rate(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidConfig(alloc::format!(
            "{name} must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

/// Sum over all states of `score(q) * Π_i rates[q(i)] / total^(N+1)`, skipping
/// zero-weight states. Factors are normalised one at a time so large `N` does
/// not overflow.
fn enumerate_weighted<F>(space: &StateSpace, rates: &[f64], total: f64, score: F) -> f64
where
    F: Fn(&[usize]) -> usize,
{
    let scaled: Vec<f64> = rates.iter().map(|r| r / total).collect();
    let mut q = vec![0usize; space.window()];
    let mut acc = KahanSum::new();
    for idx in 0..space.len() {
        space.decode_into(idx, &mut q);
        let weight: f64 = q.iter().map(|&s| scaled[s - 1]).product();
        if weight == 0.0 {
            continue;
        }
        acc.add(score(&q) as f64 * weight / total);
    }
    acc.value()
}

/// Average AoI of a basic system by full enumeration.
pub fn aoi_basic_exact(config: &SystemConfig) -> Result<AoiResult> {
    aoi_basic_exact_with_cap(config, DEFAULT_STATE_CAP)
}

pub fn aoi_basic_exact_with_cap(config: &SystemConfig, cap: u64) -> Result<AoiResult> {
    if config.m_type2() > 0 {
        return Err(Error::InvalidConfig(
            "basic form needs a system without type-2 devices".into(),
        ));
    }
    let mu = config.mu_total();
    if mu <= 0.0 {
        return Err(Error::ZeroTotalRate);
    }
    let space = StateSpace::for_config(config, Variant::Basic, cap)?;
    let value = enumerate_weighted(&space, config.mu(), mu, p_index);
    Ok(AoiResult::new(
        value,
        Method::BasicExact,
        config.n_type1(),
        mu,
        0.0,
    ))
}

/// Average AoI of a hybrid system by full enumeration. A configuration
/// without type-2 devices is treated as having `λ = 0`.
pub fn aoi_hybrid_exact(config: &SystemConfig) -> Result<AoiResult> {
    aoi_hybrid_exact_with_cap(config, DEFAULT_STATE_CAP)
}

pub fn aoi_hybrid_exact_with_cap(config: &SystemConfig, cap: u64) -> Result<AoiResult> {
    let n = config.n_type1();
    let total = config.mu_total() + config.lambda_total();
    if total <= 0.0 {
        return Err(Error::ZeroTotalRate);
    }
    let space = StateSpace::for_config(config, Variant::Hybrid, cap)?;
    let rates = config.rates(Variant::Hybrid);
    let value = enumerate_weighted(&space, rates.as_slice(), total, |q| {
        p_index(q).min(p_tilde_index(q, n))
    });
    Ok(AoiResult::new(
        value,
        Method::HybridExact,
        n,
        config.mu_total(),
        config.lambda_total(),
    ))
}

/// `Σ_{r=1}^{N} C(N-1, r-1) (r+1)! / N^(r+1)`, via the term ratio
/// `t_{r+1}/t_r = ((N-r)/r)·(r+2)/N`.
pub(crate) fn first_repeat_series(n: usize) -> f64 {
    let nf = n as f64;
    let mut term = 2.0 / (nf * nf);
    let mut acc = KahanSum::new();
    for r in 1..=n {
        acc.add(term);
        if term == 0.0 {
            break;
        }
        let rf = r as f64;
        term *= ((nf - rf) / rf) * (rf + 2.0) / nf;
    }
    acc.value()
}

fn check_homogeneous(n: usize, mu_total: f64, lambda_total: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidConfig(
            "need at least one type-1 device".into(),
        ));
    }
    check_rate("mu", mu_total)?;
    check_rate("lambda", lambda_total)?;
    if mu_total + lambda_total <= 0.0 {
        return Err(Error::ZeroTotalRate);
    }
    Ok(())
}

/// Homogeneous basic system with `n` devices sharing total rate `mu_total`.
pub fn aoi_basic_homogeneous(n: usize, mu_total: f64) -> Result<AoiResult> {
    check_homogeneous(n, mu_total, 0.0)?;
    if mu_total <= 0.0 {
        return Err(Error::ZeroTotalRate);
    }
    let value = n as f64 / mu_total * first_repeat_series(n);
    Ok(AoiResult::new(
        value,
        Method::BasicHomogeneous,
        n,
        mu_total,
        0.0,
    ))
}

/// Homogeneous hybrid system: the type-1-only states contribute the basic
/// series scaled by `(μ/(μ+λ))^(N+1)`, and the states holding `k` type-2
/// deliveries contribute `A(k) + B(k)`:
///
/// ```text
/// A(k) = Σ_{p=2}^{N-k}   C(N-p, k)   C(N-1, p-2) p! μ^(N-k) λ^k / (N^(p-1) (μ+λ)^(N+1))
/// B(k) = Σ_{p=1}^{N-k+1} C(N-p, k-1) C(N,   p-1) p! μ^(N-k) λ^k / (N^(p-1) (μ+λ)^(N+1))
/// ```
///
/// with `A(k)` only present while `N - k - 1 > 0`. Terms are evaluated in log
/// space and summed in ascending `k`, then `p`.
pub fn aoi_hybrid_homogeneous(n: usize, mu_total: f64, lambda_total: f64) -> Result<AoiResult> {
    check_homogeneous(n, mu_total, lambda_total)?;
    let total = mu_total + lambda_total;
    let a = mu_total / total;
    let b = lambda_total / total;
    let ln_fact = ln_factorials(n);
    let ln_n = libm::log(n as f64);

    let mut acc = KahanSum::new();
    acc.add(n as f64 / total * libm::exp(ln_pow(a, n)) * first_repeat_series(n));
    for k in 1..=n {
        let ln_rates = ln_pow(a, n - k) + ln_pow(b, k) - libm::log(total);
        if n > k + 1 {
            for p in 2..=n - k {
                let ln_term = ln_binomial(&ln_fact, n - p, k)
                    + ln_binomial(&ln_fact, n - 1, p - 2)
                    + ln_fact[p]
                    - (p - 1) as f64 * ln_n
                    + ln_rates;
                acc.add(libm::exp(ln_term));
            }
        }
        for p in 1..=n - k + 1 {
            let ln_term =
                ln_binomial(&ln_fact, n - p, k - 1) + ln_binomial(&ln_fact, n, p - 1) + ln_fact[p]
                    - (p - 1) as f64 * ln_n
                    + ln_rates;
            acc.add(libm::exp(ln_term));
        }
    }
    Ok(AoiResult::new(
        acc.value(),
        Method::HybridHomogeneous,
        n,
        mu_total,
        lambda_total,
    ))
}

/// Same value as [`aoi_hybrid_homogeneous`] in `O(N)`: the inner sums over `k`
/// are closed with the binomial theorem, leaving
///
/// ```text
/// Σ_k A(k) = 1/(μ+λ) Σ_{p=2}^{N-1} C(N-1, p-2) p!/N^(p-1) · a^p (1 - a^(N-p))
/// Σ_k B(k) = 1/(μ+λ) Σ_{p=1}^{N}   C(N,   p-1) p!/N^(p-1) · b a^(p-1)
/// ```
///
/// with `a = μ/(μ+λ)` and `b = λ/(μ+λ)`. Used where many evaluations are needed.
pub fn aoi_hybrid_homogeneous_collapsed(
    n: usize,
    mu_total: f64,
    lambda_total: f64,
) -> Result<AoiResult> {
    check_homogeneous(n, mu_total, lambda_total)?;
    let ln_fact = ln_factorials(n);
    let value = collapsed_value(n, mu_total, lambda_total, &ln_fact, first_repeat_series(n));
    Ok(AoiResult::new(
        value,
        Method::HybridHomogeneous,
        n,
        mu_total,
        lambda_total,
    ))
}

/// Body of [`aoi_hybrid_homogeneous_collapsed`] with the factorial table
/// (covering `n`) and `first_repeat_series(n)` supplied by the caller.
pub(crate) fn collapsed_value(
    n: usize,
    mu_total: f64,
    lambda_total: f64,
    ln_fact: &[f64],
    series: f64,
) -> f64 {
    let total = mu_total + lambda_total;
    let a = mu_total / total;
    let b = lambda_total / total;
    let ln_n = libm::log(n as f64);
    let ln_a = libm::log(a);

    let mut acc = KahanSum::new();
    acc.add(n as f64 / total * libm::exp(ln_pow(a, n)) * series);
    if n >= 3 && a > 0.0 {
        for p in 2..n {
            let ln_coef = ln_binomial(ln_fact, n - 1, p - 2) + ln_fact[p] - (p - 1) as f64 * ln_n;
            let tail = -libm::expm1((n - p) as f64 * ln_a);
            acc.add(libm::exp(ln_coef + p as f64 * ln_a) * tail / total);
        }
    }
    if b > 0.0 {
        for p in 1..=n {
            let ln_coef = ln_binomial(ln_fact, n, p - 1) + ln_fact[p] - (p - 1) as f64 * ln_n;
            acc.add(b * libm::exp(ln_coef + ln_pow(a, p - 1)) / total);
        }
    }
    acc.value()
}

/// Only type-2 devices deliver: the monitor resets at Poisson rate `λ`.
pub fn aoi_type2_only(lambda_total: f64) -> Result<AoiResult> {
    check_rate("lambda", lambda_total)?;
    if lambda_total <= 0.0 {
        return Err(Error::ZeroRate);
    }
    Ok(AoiResult::new(
        1.0 / lambda_total,
        Method::Type2Only,
        0,
        0.0,
        lambda_total,
    ))
}

/// Homogeneous AoI for `n` type-1 devices at `mu_each` and total type-2 rate
/// `lambda_total`, dispatching to the type-2-only form when `n == 0`.
pub fn aoi_homogeneous(n: usize, mu_each: f64, lambda_total: f64) -> Result<AoiResult> {
    if n == 0 {
        return aoi_type2_only(lambda_total);
    }
    if lambda_total == 0.0 {
        return aoi_basic_homogeneous(n, n as f64 * mu_each);
    }
    aoi_hybrid_homogeneous(n, n as f64 * mu_each, lambda_total)
}

/// One row of a ratio table. `m == 0` for basic-system rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: usize,
    pub m: usize,
    pub ratio: f64,
}

/// `Δ_N / Δ_1` for the homogeneous basic system at a fixed per-device rate.
pub fn ratio_table_basic(n_list: &[usize]) -> Result<Vec<RatioRow>> {
    let base = aoi_basic_homogeneous(1, 1.0)?.value;
    n_list
        .iter()
        .map(|&n| {
            let v = aoi_basic_homogeneous(n, n as f64)?.value;
            Ok(RatioRow {
                n,
                m: 0,
                ratio: v / base,
            })
        })
        .collect()
}

/// `Δ_{N,M} / Δ_{1,1}` for the homogeneous hybrid system with `μ_i = λ_i = 1`,
/// one row per `(N, M)` pair in row-major order.
pub fn ratio_table_hybrid(n_list: &[usize], m_list: &[usize]) -> Result<Vec<RatioRow>> {
    let base = aoi_hybrid_homogeneous(1, 1.0, 1.0)?.value;
    let mut rows = Vec::with_capacity(n_list.len() * m_list.len());
    for &n in n_list {
        for &m in m_list {
            let v = aoi_hybrid_homogeneous(n, n as f64, m as f64)?.value;
            rows.push(RatioRow {
                n,
                m,
                ratio: v / base,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn basic_exact_examples() {
        let one = SystemConfig::basic(vec![1.0]).unwrap();
        assert_eq!(aoi_basic_exact(&one).unwrap().value, 2.0);
        let two = SystemConfig::basic(vec![1.0, 1.0]).unwrap();
        assert!(close(aoi_basic_exact(&two).unwrap().value, 1.25, 1e-14));
        let het = SystemConfig::basic(vec![1.0, 2.0]).unwrap();
        assert!(close(
            aoi_basic_exact(&het).unwrap().value,
            22.0 / 27.0,
            1e-14
        ));
    }

    #[test]
    fn basic_homogeneous_examples() {
        assert_eq!(aoi_basic_homogeneous(1, 1.0).unwrap().value, 2.0);
        assert!((aoi_basic_homogeneous(10, 10.0).unwrap().value - 0.4660).abs() < 5e-4);
        assert!((aoi_basic_homogeneous(10_000, 10_000.0).unwrap().value - 0.0126).abs() < 5e-4);
    }

    #[test]
    fn hybrid_exact_examples() {
        let c = SystemConfig::new(vec![1.0], vec![1.0]).unwrap();
        assert!(close(aoi_hybrid_exact(&c).unwrap().value, 0.75, 1e-15));
        let c = SystemConfig::new(vec![0.0], vec![2.0]).unwrap();
        assert_eq!(aoi_hybrid_exact(&c).unwrap().value, 0.5);
        let c = SystemConfig::new(vec![1.0, 1.0], vec![0.0]).unwrap();
        assert!(close(aoi_hybrid_exact(&c).unwrap().value, 1.25, 1e-14));
    }

    #[test]
    fn hybrid_homogeneous_examples() {
        assert!(close(
            aoi_hybrid_homogeneous(1, 1.0, 1.0).unwrap().value,
            0.75,
            1e-14
        ));
        assert!(close(
            aoi_hybrid_homogeneous(1, 1.0, 5.0).unwrap().value,
            7.0 / 36.0,
            1e-14
        ));
        assert!(
            (aoi_hybrid_homogeneous(10, 10.0, 1.0).unwrap().value - 0.4670 * 0.75).abs() < 5e-4
        );
    }

    #[test]
    fn type2_only_examples() {
        assert_eq!(aoi_type2_only(1.0).unwrap().value, 1.0);
        assert_eq!(aoi_type2_only(4.0).unwrap().value, 0.25);
        assert_eq!(aoi_type2_only(0.5).unwrap().value, 2.0);
        assert_eq!(aoi_type2_only(0.0), Err(Error::ZeroRate));
    }

    #[test]
    fn ratio_examples() {
        let rows = ratio_table_basic(&[1, 3, 100]).unwrap();
        assert_eq!(rows[0].ratio, 1.0);
        assert!((rows[1].ratio - 0.4815).abs() < 5e-4);
        assert!((rows[2].ratio - 0.0661).abs() < 5e-4);
        let rows = ratio_table_hybrid(&[1, 100], &[1, 10, 20]).unwrap();
        assert_eq!(rows[0].ratio, 1.0);
        assert!((rows[1].ratio - 0.1322).abs() < 5e-4);
        assert!((rows[5].ratio - 0.0566).abs() < 5e-4);
    }

    #[test]
    fn collapsed_form_matches_double_sum() {
        for n in [1usize, 2, 3, 7, 40, 300] {
            for (mu, lambda) in [
                (1.0, 0.0),
                (0.0, 2.0),
                (3.0, 1.0),
                (1.0, 9.0),
                (n as f64, 20.0),
            ] {
                let slow = aoi_hybrid_homogeneous(n, mu, lambda).unwrap().value;
                let fast = aoi_hybrid_homogeneous_collapsed(n, mu, lambda)
                    .unwrap()
                    .value;
                assert!(
                    close(fast, slow, 1e-12),
                    "n={n} mu={mu} lambda={lambda}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn zero_rates_are_rejected() {
        assert_eq!(aoi_basic_homogeneous(3, 0.0), Err(Error::ZeroTotalRate));
        assert_eq!(
            aoi_hybrid_homogeneous(3, 0.0, 0.0),
            Err(Error::ZeroTotalRate)
        );
        assert!(aoi_hybrid_homogeneous(0, 1.0, 1.0).is_err());
        assert!(aoi_basic_homogeneous(2, f64::NAN).is_err());
    }
}
