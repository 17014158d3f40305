//! Primitive and elementary sets, the two dessentialization iterations, and
//! the order audits that relate a basis to them.

use serde::Serialize;

use crate::analytics::sieve::first_primes;
use crate::arith::total_length;
use crate::error::{Error, Result};
use crate::essentials::{essential_elements, EssentialProfile};
use crate::order::{effective_bound, is_basis, order};
use crate::progression::{essential_subsets, raison_profile};
use crate::report::BoundReport;
use crate::set::Eps;

/// Relative slack allowed when a real-valued bound is compared to an integer.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Default ceiling for moduli built by [`construct_prescribed`].
pub const DEFAULT_PRESCRIBED_CAP: u64 = 1_000_000;

/// `(S ∖ removed − x0) / m` where `x0` and `m` are the least element and the
/// difference gcd of what remains.
fn contract_remainder(s: &Eps, removed: &[u64]) -> Result<(Eps, u64, u64)> {
    let rest = s.remove_finite(removed)?;
    let x0 = rest.min().ok_or(Error::FiniteSet)?;
    let m = rest.gcd_of_differences();
    let shifted = rest.translate(-(i64::try_from(x0).map_err(|_| Error::Overflow("anchoring"))?))?;
    Ok((shifted.affine_contract(m, 0)?, m, x0))
}

/// `P(A) = {(x − x0)/m(A) : x ∈ A ∖ Ess(A)}`.
pub fn primitive_set(s: &Eps) -> Result<Eps> {
    let ess = essential_elements(s)?;
    Ok(contract_remainder(s, &ess.elements)?.0)
}

/// `D(A) = (m(A)ℕ + x0) ∪ Ess(A)`.
pub fn elementary_set(s: &Eps) -> Result<Eps> {
    let ess = essential_elements(s)?;
    elementary_from(&ess)
}

fn elementary_from(ess: &EssentialProfile) -> Result<Eps> {
    Eps::progression(ess.module, ess.least_non_essential, ess.least_non_essential)?
        .union(&Eps::finite(ess.elements.iter().copied()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Strip essential elements.
    Elementary,
    /// Strip the union of all essential subsets.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    /// The set `P^i(A)`.
    pub set: Eps,
    /// Essential elements (elementary mode) or essential subsets (general
    /// mode) of `set`.
    pub essential_count: usize,
    /// gcd of the differences left after stripping.
    pub module: u64,
    /// Least element left after stripping.
    pub anchor: u64,
    pub ratio: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DessentializationTrace {
    pub mode: Mode,
    /// Steps `0..=delta`; the last one has `essential_count == 0`.
    pub steps: Vec<TraceStep>,
    pub delta: usize,
}

impl DessentializationTrace {
    pub fn final_set(&self) -> &Eps {
        &self.steps.last().expect("a trace has at least one step").set
    }

    pub fn counts(&self) -> Vec<usize> {
        self.steps.iter().map(|st| st.essential_count).collect()
    }
}

pub fn dessentialize_elementary(s: &Eps) -> Result<DessentializationTrace> {
    dessentialize(s, Mode::Elementary)
}

pub fn dessentialize_general(s: &Eps) -> Result<DessentializationTrace> {
    dessentialize(s, Mode::General)
}

fn dessentialize(s: &Eps, mode: Mode) -> Result<DessentializationTrace> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    let mut steps = Vec::new();
    let mut current = s.clone();
    loop {
        let removed: Vec<u64> = match mode {
            Mode::Elementary => essential_elements(&current)?.elements,
            Mode::General => {
                let mut all: Vec<u64> = essential_subsets(&current)?.into_iter().flatten().collect();
                all.sort_unstable();
                all.dedup();
                all
            }
        };
        let count = match mode {
            Mode::Elementary => removed.len(),
            Mode::General => essential_subsets(&current)?.len(),
        };
        let (next, module, anchor) = contract_remainder(&current, &removed)?;
        steps.push(TraceStep {
            index: steps.len(),
            set: current.clone(),
            essential_count: count,
            module,
            anchor,
            ratio: raison_profile(&current)?.ratio,
        });
        if count == 0 {
            break;
        }
        // a nonzero count gives module >= 2, so the period shrinks strictly
        debug_assert!(module >= 2 && next.modulus() < current.modulus());
        current = next;
    }
    Ok(DessentializationTrace {
        mode,
        delta: steps.len() - 1,
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaBound {
    pub order: u32,
    /// Least `N` past which every integer is a sum of `order` elements.
    pub effective_bound: u64,
    /// `max(log N / log 2 + 1, N^{1/h} − 2)`, evaluated at `max(N, 1)`.
    pub value: f64,
}

/// Upper bound on the number of elementary dessentialization steps in terms
/// of the order `h` and the effective bound `N`.
pub fn delta_bound(s: &Eps) -> Result<DeltaBound> {
    let h = order(s)?.order;
    let n = effective_bound(s, h)?;
    let x = n.max(1) as f64;
    let value = (x.log2() + 1.0).max(x.powf(1.0 / h as f64) - 2.0);
    Ok(DeltaBound {
        order: h,
        effective_bound: n,
        value,
    })
}

/// The chain `A_0 = ℕ, A_{i+1} = Q_i·A_i ∪ {Q_i/p_j}` where `Q_i` is the
/// product of the first `counts[n−i]` primes; the last entry is the basis
/// whose elementary dessentialization shows `counts` followed by 0.
pub fn construct_prescribed_chain(counts: &[usize], cap: u64) -> Result<Vec<Eps>> {
    if counts.is_empty() || counts.contains(&0) {
        return Err(Error::Precondition("counts must be a nonempty list of positive integers".into()));
    }
    let primes = first_primes(*counts.iter().max().expect("nonempty"));
    let mut chain = vec![Eps::naturals()];
    for &s in counts.iter().rev() {
        let q = primes[..s]
            .iter()
            .try_fold(1u64, |acc, &p| acc.checked_mul(p))
            .ok_or(Error::Overflow("multiplying primes"))?;
        let prev = chain.last().expect("chain starts at ℕ");
        let modulus = (prev.modulus() as u128) * (q as u128);
        if modulus > cap as u128 {
            return Err(Error::ModulusCap { modulus, cap });
        }
        let next = prev
            .dilate(q, 0)?
            .union(&Eps::finite(primes[..s].iter().map(|p| q / p)))?;
        chain.push(next);
    }
    Ok(chain)
}

pub fn construct_prescribed(counts: &[usize], cap: u64) -> Result<Eps> {
    Ok(construct_prescribed_chain(counts, cap)?.pop().expect("chain is nonempty"))
}

/// `ord D(A) <= ord A <= ord P(A) + ord D(A) − 1`.
pub fn audit_order_sandwich(s: &Eps) -> Result<BoundReport> {
    let h = order(s)?.order;
    let hp = order(&primitive_set(s)?)?.order;
    let hd = order(&elementary_set(s)?)?.order;
    let mut report = BoundReport::new("order_sandwich");
    report
        .int("ord_elementary", hd)
        .int("ord", h)
        .int("ord_primitive", hp)
        .verdict("ord D(A) <= ord A", hd <= h)
        .verdict("ord A <= ord P(A) + ord D(A) - 1", h < hp + hd);
    Ok(report)
}

/// `Σd_i − s + 1 <= ord D(A) <= (m/q)(Σd_i − s·(q/m)^{1/s}) + 1`, with
/// equality throughout when `q = m`.
pub fn audit_elementary_order_bounds(s: &Eps) -> Result<BoundReport> {
    let ess = essential_elements(s)?;
    let mut report = BoundReport::new("elementary_order_bounds");
    let count = ess.count() as u64;
    report.int("s", count);
    if count == 0 {
        report.verdict("no essential elements: nothing to bound", true);
        return Ok(report);
    }
    let hd = order(&elementary_from(&ess)?)?.order as u64;
    let sum_d: u64 = ess.divisors.iter().sum();
    let lower = sum_d - count + 1;
    let (q, m) = (ess.divisor_product, ess.module);
    report
        .int("sum_d", sum_d)
        .int("q", q)
        .int("m", m)
        .int("lower", lower)
        .int("ord_elementary", hd);
    let upper_holds = if q == m {
        report.int("upper", lower);
        hd <= lower
    } else {
        let ratio = m as f64 / q as f64;
        let upper = ratio * (sum_d as f64 - count as f64 * (1.0 / ratio).powf(1.0 / count as f64)) + 1.0;
        report.real("upper", upper);
        hd as f64 <= upper * (1.0 + REAL_TOLERANCE)
    };
    report
        .verdict("lower <= ord D(A)", lower <= hd)
        .verdict("ord D(A) <= upper", upper_holds)
        .verdict("q = m forces equality", q != m || hd == lower);
    Ok(report)
}

/// `ord A >= p_1 + ... + p_s − s + 1` for `s` essential elements.
pub fn audit_essential_count_bound(s: &Eps) -> Result<BoundReport> {
    let h = order(s)?.order as u64;
    let count = essential_elements(s)?.count();
    let prime_sum: u64 = first_primes(count).iter().sum();
    let bound = prime_sum + 1 - count as u64;
    let mut report = BoundReport::new("essential_count_bound");
    report
        .int("ord", h)
        .int("s", count as u64)
        .int("prime_sum", prime_sum)
        .int("bound", bound)
        .verdict("ord >= sum of the first s primes - s + 1", h >= bound);
    Ok(report)
}

/// `δ <= delta_bound` for the elementary iteration, and the general
/// iteration ending on the dessentialized set within `Ω(ratio)` steps.
pub fn audit_dessentialization(s: &Eps) -> Result<BoundReport> {
    let elementary = dessentialize_elementary(s)?;
    let general = dessentialize_general(s)?;
    let bound = delta_bound(s)?;
    let profile = raison_profile(s)?;
    let ratios: Vec<u64> = general.steps.iter().map(|st| st.ratio).collect();
    let mut report = BoundReport::new("dessentialization");
    report
        .int("delta", elementary.delta as u64)
        .real("delta_bound", bound.value)
        .int("general_steps", general.delta as u64)
        .int("ratio_length", total_length(profile.ratio))
        .verdict("delta <= delta bound", elementary.delta as f64 <= bound.value)
        .verdict(
            "ratio strictly decreases to 1",
            ratios.windows(2).all(|w| w[1] < w[0] && w[0] % w[1] == 0) && ratios.last() == Some(&1),
        )
        .verdict(
            "general steps <= length of the ratio",
            general.delta as u32 <= total_length(profile.ratio),
        )
        .verdict(
            "general iteration ends on the dessentialized set up to translation",
            general
                .final_set()
                .is_equivalent_up_to_translation(&profile.dessentialized),
        );
    Ok(report)
}
