//! Floating-point evaluation of the partition asymptotics.
//!
//! Everything is computed as a natural logarithm first; the linear value is
//! only filled in when `exp` is representable. `f(n)` below is the prime
//! partition main term `exp((2*pi/sqrt 3) * sqrt(n / ln n))`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("{formula:?} needs n >= {min}, got {n}")]
    OutOfDomain { formula: Formula, n: u64, min: u64 },
    #[error("grid must be nonempty, ascending and start at 10 or more")]
    InvalidGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Formula {
    HardyRamanujan,
    PrimePartitionMainTerm,
    Lemma1LowerBound,
    IntegralTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub formula: Formula,
    pub n: u64,
    pub log_value: f64,
    /// `None` when `exp(log_value)` overflows an `f64`.
    pub value: Option<f64>,
}

impl Estimate {
    fn new(formula: Formula, n: u64, log_value: f64) -> Self {
        let value = Some(log_value.exp()).filter(|v| v.is_finite());
        Estimate {
            formula,
            n,
            log_value,
            value,
        }
    }
}

fn require(formula: Formula, n: u64, min: u64) -> Result<(), AsymptoticsError> {
    if n < min {
        Err(AsymptoticsError::OutOfDomain { formula, n, min })
    } else {
        Ok(())
    }
}

/// `2*pi/sqrt(3)`, the exponent constant of `f`.
pub const PRIME_EXPONENT: f64 = 2.0 * PI / 1.732_050_807_568_877_2;

pub fn log_hardy_ramanujan_at(x: f64) -> f64 {
    PI * (2.0 * x / 3.0).sqrt() - (4.0 * x * 3f64.sqrt()).ln()
}

pub fn log_prime_main_term_at(x: f64) -> f64 {
    PRIME_EXPONENT * (x / x.ln()).sqrt()
}

pub fn log_lemma1_bound_at(x: f64) -> f64 {
    0.25f64.ln() + 0.5 * (x * x.ln()).ln() + log_prime_main_term_at(x)
}

pub fn log_integral_target_at(x: f64) -> f64 {
    (3f64.sqrt() / PI).ln() + 0.5 * (x * x.ln()).ln() + log_prime_main_term_at(x)
}

/// `p(n) ~ exp(pi * sqrt(2n/3)) / (4 n sqrt 3)`.
pub fn hardy_ramanujan(n: u64) -> Result<Estimate, AsymptoticsError> {
    require(Formula::HardyRamanujan, n, 1)?;
    Ok(Estimate::new(Formula::HardyRamanujan, n, log_hardy_ramanujan_at(n as f64)))
}

/// `f(n) = exp((2*pi/sqrt 3) * sqrt(n / ln n))`.
pub fn prime_main_term(n: u64) -> Result<Estimate, AsymptoticsError> {
    require(Formula::PrimePartitionMainTerm, n, 2)?;
    Ok(Estimate::new(
        Formula::PrimePartitionMainTerm,
        n,
        log_prime_main_term_at(n as f64),
    ))
}

/// `(1/4) * sqrt(n ln n) * f(n)`.
pub fn lemma1_bound(n: u64) -> Result<Estimate, AsymptoticsError> {
    require(Formula::Lemma1LowerBound, n, 2)?;
    Ok(Estimate::new(Formula::Lemma1LowerBound, n, log_lemma1_bound_at(n as f64)))
}

/// `(sqrt 3 / pi) * sqrt(n ln n) * f(n)`, the claimed asymptotic of the
/// integral of `f`.
pub fn integral_target(n: u64) -> Result<Estimate, AsymptoticsError> {
    require(Formula::IntegralTarget, n, 2)?;
    Ok(Estimate::new(Formula::IntegralTarget, n, log_integral_target_at(n as f64)))
}

/// Central-difference step used by [`check_lhospital`].
pub fn finite_difference_step(n: u64) -> f64 {
    (n as f64 / 1000.0).max(1.0)
}

/// Central difference of `ln g` at `x`, i.e. an estimate of `g'(x) / g(x)`.
pub fn log_derivative(log_g: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (log_g(x + h) - log_g(x - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhospitalRow {
    pub n: u64,
    pub step: f64,
    /// `g'(n) / f(n)` with `g` the integral target.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhospitalReport {
    pub rows: Vec<LhospitalRow>,
    /// `|r - 1|` never increases along the grid.
    pub converging: bool,
}

pub fn lhospital_ratio(n: u64) -> LhospitalRow {
    let x = n as f64;
    let step = finite_difference_step(n);
    let dlog = log_derivative(log_integral_target_at, x, step);
    let ratio = dlog * (log_integral_target_at(x) - log_prime_main_term_at(x)).exp();
    LhospitalRow { n, step, ratio }
}

/// Numerically checks that `g'(n) / f(n)` tends to 1 for
/// `g(n) = (sqrt 3 / pi) sqrt(n ln n) f(n)`.
pub fn check_lhospital(grid: &[u64]) -> Result<LhospitalReport, AsymptoticsError> {
    if grid.is_empty() || grid[0] < 10 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AsymptoticsError::InvalidGrid);
    }
    let rows: Vec<LhospitalRow> = grid.iter().map(|&n| lhospital_ratio(n)).collect();
    let converging = rows
        .windows(2)
        .all(|w| (w[1].ratio - 1.0).abs() <= (w[0].ratio - 1.0).abs());
    Ok(LhospitalReport { rows, converging })
}

/// Natural log of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `exact / estimate`, computed in log space.
pub fn ratio_to_estimate(exact: &BigUint, estimate: &Estimate) -> f64 {
    (ln_biguint(exact) - estimate.log_value).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{count_partitions, PartClass};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn hardy_ramanujan_values() {
        let e = hardy_ramanujan(1).unwrap();
        let direct = (PI * (2.0f64 / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt());
        assert!(rel(e.value.unwrap(), direct) < 1e-12);

        let e = hardy_ramanujan(100).unwrap();
        // mpmath: 199280893.3497401
        assert!(rel(e.value.unwrap(), 199_280_893.349_740_1) < 1e-12, "{e:?}");
        let exact = count_partitions(100, PartClass::All);
        assert_eq!(exact.to_u64(), Some(190_569_292));
        let ratio = ratio_to_estimate(exact.as_biguint(), &e);
        assert!((ratio - 0.956_284_813_845_9).abs() < 1e-12, "{ratio}");

        let e = hardy_ramanujan(1_000_000).unwrap();
        assert!(e.log_value.is_finite());
        assert_eq!(e.value, None);
        assert!(hardy_ramanujan(0).is_err());
    }

    #[test]
    fn prime_main_term_values() {
        let e = prime_main_term(100).unwrap();
        // mpmath: 16.904269145122595
        assert!((e.log_value - 16.904_269_145_122_6).abs() < 1e-12, "{}", e.log_value);
        assert!(rel(e.value.unwrap(), 2.2e7) < 0.05);
        // n = 7 is the integer nearest e^2.
        let e = prime_main_term(7).unwrap();
        assert!(rel(e.log_value, PRIME_EXPONENT * (7.0 / 7f64.ln()).sqrt()) < 1e-15);
        assert_eq!(
            prime_main_term(1),
            Err(AsymptoticsError::OutOfDomain { formula: Formula::PrimePartitionMainTerm, n: 1, min: 2 })
        );
    }

    #[test]
    fn bound_and_target_identities() {
        for n in [2u64, 3, 10, 100, 10_000, 1_000_000] {
            let x = n as f64;
            let f = prime_main_term(n).unwrap().log_value;
            let bound = lemma1_bound(n).unwrap().log_value;
            let target = integral_target(n).unwrap().log_value;
            assert!((bound - f - (0.25 * (x * x.ln()).sqrt()).ln()).abs() < 1e-9);
            assert!((target - f - (3f64.sqrt() / PI * (x * x.ln()).sqrt()).ln()).abs() < 1e-9);
        }
        let b = lemma1_bound(100).unwrap().value.unwrap();
        let direct = 0.25 * (100.0 * 100f64.ln()).sqrt() * prime_main_term(100).unwrap().value.unwrap();
        assert!(rel(b, direct) < 1e-12);
        assert!(lemma1_bound(3).unwrap().value.unwrap() > 0.0);
        assert!(integral_target(2).unwrap().value.is_some());
    }

    #[test]
    fn differencer_calibration() {
        for n in [1_000u64, 10_000, 100_000, 1_000_000] {
            let x = n as f64;
            let d = log_derivative(f64::ln, x, finite_difference_step(n)) * x;
            assert!((d - 1.0).abs() < 1e-6, "{n}: {d}");
        }
        // With h = 1 the truncation error h^2 / (3 n^2) dominates.
        let d = log_derivative(f64::ln, 10.0, finite_difference_step(10)) * 10.0;
        assert!((d - 1.0 - 1.0 / 300.0).abs() < 1e-4, "{d}");
    }

    #[test]
    fn lhospital_trend() {
        let report = check_lhospital(&[1_000, 10_000, 100_000, 1_000_000]).unwrap();
        assert!(report.converging, "{report:?}");
        let last = report.rows.last().unwrap();
        let expansion = 1.0 - 1.0 / 1e6f64.ln();
        assert!((last.ratio - expansion).abs() < 0.005, "{}", last.ratio);
        assert!(check_lhospital(&[]).is_err());
        assert!(check_lhospital(&[5]).is_err());
        assert!(check_lhospital(&[100, 100]).is_err());
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(3u32).pow(2000);
        assert!(rel(ln_biguint(&x), 2000.0 * 3f64.ln()) < 1e-12);
        assert!(rel(ln_biguint(&BigUint::from(1000u32)), 1000f64.ln()) < 1e-15);
    }
}
