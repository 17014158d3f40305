//! The constant in `s <= C·sqrt(h / log h)`, the sweep over the primorial
//! family that certifies it, the prime-sum lower bounds it relies on, and the
//! `α`-threshold for the asymptotic refinement.
//!
//! All comparisons keep the integer parts exact: `n²`, `h_n` and the prime
//! sums stay below 2^53, so only the logarithms carry rounding error.

use serde::Serialize;

use crate::error::{Error, Result};

use super::sieve::PrimeTable;

/// `n` at which the primorial family attains the constant.
pub const EXTREMAL_INDEX: u64 = 30;
/// `h_30`.
pub const EXTREMAL_ORDER: u64 = 1564;
/// Relative gap below which two sides of a comparison count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// Largest prime index the sweep and prime-sum checks will sieve for.
pub const MAX_PRIME_COUNT: usize = 2_000_000;

/// `C = 30·sqrt(log 1564 / 1564)`.
pub fn essential_count_constant() -> f64 {
    let h = EXTREMAL_ORDER as f64;
    EXTREMAL_INDEX as f64 * (h.ln() / h).sqrt()
}

fn table_for(count: usize) -> Result<PrimeTable> {
    if count > MAX_PRIME_COUNT {
        return Err(Error::Capacity {
            needed: count,
            available: MAX_PRIME_COUNT,
        });
    }
    Ok(PrimeTable::with_count(count))
}

/// `n·sqrt(log h_n / h_n)`.
pub fn c_coefficient(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Precondition("the coefficient is defined for n >= 2".into()));
    }
    let h = (table_for(n)?.prefix_sum(n)? - n as u64 + 1) as f64;
    Ok(n as f64 * (h.ln() / h).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub h: u64,
    pub c: f64,
    /// `(R − L) / R` for `L = n²·1564·log h_n`, `R = 900·h_n·log 1564`;
    /// nonnegative iff `C_{h_n} <= C`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub n_max: u64,
    pub constant: f64,
    pub argmax: u64,
    pub max_c: f64,
    /// Indices whose comparison is within the tie tolerance.
    pub ties: Vec<u64>,
    /// Indices with `C_{h_n} > C` beyond the tolerance.
    pub exceedances: Vec<u64>,
    /// Least margin over the non-tied rows.
    pub min_margin: f64,
    pub min_margin_at: u64,
    #[serde(skip)]
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Every row is at most the constant, with equality exactly at `n = 30`.
    pub fn holds(&self) -> bool {
        let expect_tie = self.n_max >= EXTREMAL_INDEX;
        self.exceedances.is_empty()
            && if expect_tie {
                self.ties == [EXTREMAL_INDEX]
            } else {
                self.ties.is_empty()
            }
    }
}

/// Evaluates `C_{h_n}` for `2 <= n <= n_max` and compares each against `C`
/// through `n²·h_30·log h_n <= 900·h_n·log h_30`.
pub fn sweep_c(n_max: usize) -> Result<SweepReport> {
    if n_max < 2 {
        return Err(Error::Precondition("the sweep starts at n = 2".into()));
    }
    let table = table_for(n_max)?;
    let weight = (EXTREMAL_INDEX * EXTREMAL_INDEX) as f64 * (EXTREMAL_ORDER as f64).ln();
    let mut rows = Vec::with_capacity(n_max - 1);
    let mut ties = Vec::new();
    let mut exceedances = Vec::new();
    let (mut argmax, mut max_c) = (0, f64::NEG_INFINITY);
    let (mut min_margin, mut min_margin_at) = (f64::INFINITY, 0);
    for n in 2..=n_max {
        let h = table.prefix_sum(n)? - n as u64 + 1;
        let hf = h as f64;
        let n2 = (n as u64 * n as u64) as f64;
        let lhs = n2 * EXTREMAL_ORDER as f64 * hf.ln();
        let rhs = hf * weight;
        let margin = (rhs - lhs) / rhs;
        let c = n as f64 * (hf.ln() / hf).sqrt();
        let n = n as u64;
        if margin.abs() < TIE_TOLERANCE {
            ties.push(n);
        } else if margin < 0.0 {
            exceedances.push(n);
        } else if margin < min_margin {
            min_margin = margin;
            min_margin_at = n;
        }
        if c > max_c {
            argmax = n;
            max_c = c;
        }
        rows.push(SweepRow { n, h, c, margin });
    }
    Ok(SweepReport {
        n_max: n_max as u64,
        constant: essential_count_constant(),
        argmax,
        max_c,
        ties,
        exceedances,
        min_margin,
        min_margin_at,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSumReport {
    pub n_lo: u64,
    pub n_hi: u64,
    /// `Σ_{i<=n} p_i >= (n²/2)(log n + log log n − 1.5034)`.
    pub first_holds: bool,
    pub first_violations: Vec<u64>,
    /// `Σ_{i<=s} p_i >= (1/2)·s²·log s`.
    pub second_holds: bool,
    pub second_violations: Vec<u64>,
    /// Least relative slack `(Σ − rhs)/Σ` of each inequality.
    pub first_min_slack: f64,
    pub second_min_slack: f64,
}

impl PrimeSumReport {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds
    }
}

/// Upper float bound for an `f64` expression built from a handful of
/// correctly rounded operations.
fn round_up(x: f64) -> f64 {
    x + x.abs() * 1e-13 + f64::MIN_POSITIVE
}

/// Checks both prime-sum lower bounds for every `n` in `[n_lo, n_hi]`. An
/// integer sum passes only if it exceeds a rounded-up right-hand side.
pub fn verify_prime_sum_bounds(n_lo: usize, n_hi: usize) -> Result<PrimeSumReport> {
    if n_lo < 2 || n_lo > n_hi {
        return Err(Error::Precondition("need 2 <= n_lo <= n_hi".into()));
    }
    let table = table_for(n_hi)?;
    let mut report = PrimeSumReport {
        n_lo: n_lo as u64,
        n_hi: n_hi as u64,
        first_holds: true,
        first_violations: Vec::new(),
        second_holds: true,
        second_violations: Vec::new(),
        first_min_slack: f64::INFINITY,
        second_min_slack: f64::INFINITY,
    };
    for n in n_lo..=n_hi {
        let sum = table.prefix_sum(n)? as f64;
        let x = n as f64;
        let half_sq = x * x / 2.0;
        let first = half_sq * (x.ln() + x.ln().ln() - 1.5034);
        let second = half_sq * x.ln();
        if sum < round_up(first) {
            report.first_holds = false;
            report.first_violations.push(n as u64);
        }
        if sum < round_up(second) {
            report.second_holds = false;
            report.second_violations.push(n as u64);
        }
        report.first_min_slack = report.first_min_slack.min((sum - first) / sum);
        report.second_min_slack = report.second_min_slack.min((sum - second) / sum);
    }
    Ok(report)
}

/// `exp(−(7/2)·α²·log(α² − 4)/(α² − 4))`, the order past which
/// `s <= α·sqrt(h / log h)`. Meaningful for `2 < α <= C`; above `C` the
/// bound holds for every `h` anyway and the expression is still returned.
pub fn alpha_threshold(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 2.0 {
        return Err(Error::Precondition(format!("alpha must exceed 2, got {alpha}")));
    }
    let a2 = alpha * alpha;
    let t = a2 - 4.0;
    Ok((-3.5 * a2 * t.ln() / t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let c = essential_count_constant();
        assert!((c - 2.0572841285).abs() < 5e-11);
        assert!(c > 2.0);
        assert_eq!(c_coefficient(30).unwrap(), c);
    }

    #[test]
    fn coefficients() {
        let direct = |n: f64, h: f64| n * (h.ln() / h).sqrt();
        assert!((c_coefficient(2).unwrap() - direct(2.0, 4.0)).abs() < 1e-15);
        assert!((c_coefficient(2).unwrap() - 1.177410).abs() < 1e-6);
        // h_3 = 2 + 3 + 5 − 3 + 1 = 8
        assert!((c_coefficient(3).unwrap() - direct(3.0, 8.0)).abs() < 1e-15);
        assert!((c_coefficient(3).unwrap() - 1.529500).abs() < 1e-6);
        assert!(c_coefficient(1).is_err());
    }

    #[test]
    fn small_sweeps() {
        let r = sweep_c(100).unwrap();
        assert_eq!(r.argmax, 30);
        assert!(r.holds());
        assert_eq!(r.rows.len(), 99);
        let r = sweep_c(2).unwrap();
        assert_eq!((r.rows.len(), r.argmax), (1, 2));
        assert!(r.holds());
        assert!(sweep_c(1).is_err());
        assert!(matches!(sweep_c(MAX_PRIME_COUNT + 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn prime_sums() {
        let r = verify_prime_sum_bounds(2, 2).unwrap();
        assert!(r.holds());
        assert!(verify_prime_sum_bounds(2, 4691).unwrap().holds());
        // the first bound is only valid from much further out
        let r = verify_prime_sum_bounds(4680, 4700).unwrap();
        assert!(r.second_holds && !r.first_holds);
        assert_eq!(r.first_violations, (4692..=4700).collect::<Vec<u64>>());
        assert!(verify_prime_sum_bounds(127_042, 130_000).unwrap().holds());
        assert!(verify_prime_sum_bounds(1, 5).is_err());
    }

    #[test]
    fn alpha_thresholds() {
        let a = 2.1f64;
        let expect = (-3.5 * a * a * (a * a - 4.0).ln() / (a * a - 4.0)).exp();
        assert_eq!(alpha_threshold(a).unwrap(), expect);
        assert!(expect > 1e14 && expect < 1e15);
        let at_c = alpha_threshold(essential_count_constant()).unwrap();
        assert!(at_c.is_finite() && at_c > 0.0);
        assert!(alpha_threshold(2.0).is_err());
        assert!(alpha_threshold(1.5).is_err());
    }
}
