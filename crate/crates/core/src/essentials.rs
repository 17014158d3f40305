//! Essential elements, their associated divisors and the module of a basis.
//!
//! An element `x` is essential when `S ∖ {x}` stops being a basis, which for
//! an infinite set happens exactly when the remaining differences share a
//! common divisor `d >= 2`. Only exceptional elements can qualify: removing a
//! tail element leaves its residue class intact beyond it, so the witness gcd
//! is unchanged.

use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::order::is_basis;
use crate::report::BoundReport;
use crate::set::Eps;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialProfile {
    /// Essential elements, sorted.
    pub elements: Vec<u64>,
    /// Associated divisor of each essential element, aligned with `elements`.
    pub divisors: Vec<u64>,
    /// Product of the divisors (1 when there are none).
    pub divisor_product: u64,
    /// gcd of the differences of the non-essential elements.
    pub module: u64,
    /// Least non-essential element.
    pub least_non_essential: u64,
}

impl EssentialProfile {
    pub fn count(&self) -> usize {
        self.elements.len()
    }
}

/// gcd of the differences of `S ∖ removed`.
pub fn gcd_without(s: &Eps, removed: &[u64]) -> Result<u64> {
    Ok(s.remove_finite(removed)?.gcd_of_differences())
}

pub fn essential_elements(s: &Eps) -> Result<EssentialProfile> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    let mut elements = Vec::new();
    let mut divisors = Vec::new();
    for &x in s.exceptional() {
        let d = gcd_without(s, &[x])?;
        if d >= 2 {
            elements.push(x);
            divisors.push(d);
        }
    }
    let divisor_product = divisors
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d))
        .ok_or(Error::Overflow("multiplying associated divisors"))?;
    let rest = s.remove_finite(&elements)?;
    Ok(EssentialProfile {
        module: rest.gcd_of_differences(),
        least_non_essential: rest.min().expect("a basis minus finitely many points is infinite"),
        elements,
        divisors,
        divisor_product,
    })
}

pub fn divisor_for(s: &Eps, x: u64) -> Result<u64> {
    if !s.contains(x) {
        return Err(Error::NotAMember(x));
    }
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    let d = gcd_without(s, &[x])?;
    if d >= 2 {
        Ok(d)
    } else {
        Err(Error::NotEssential { element: x })
    }
}

pub fn module_m(s: &Eps) -> Result<u64> {
    Ok(essential_elements(s)?.module)
}

/// True iff `p` is a finite essential subset: `S ∖ P` is not a basis while
/// `S ∖ P'` is one for every proper subset `P'`.
pub fn is_essential_subset(s: &Eps, p: &[u64]) -> Result<bool> {
    if p.is_empty() {
        return Ok(false);
    }
    if is_basis(&s.remove_finite(p)?) {
        return Ok(false);
    }
    for i in 0..p.len() {
        let smaller: Vec<u64> = p.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        if !is_basis(&s.remove_finite(&smaller)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two distinct essential subsets whose union is not the whole set have
/// coprime divisors `d(P) = gcd of the differences of S ∖ P`, both `>= 2`.
pub fn audit_divisor_coprimality(s: &Eps, p1: &[u64], p2: &[u64]) -> Result<BoundReport> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    let mut a = p1.to_vec();
    let mut b = p2.to_vec();
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    if a == b {
        return Err(Error::Precondition("the two subsets coincide".into()));
    }
    for part in [&a, &b] {
        if part.iter().any(|&x| !s.contains(x)) || !is_essential_subset(s, part)? {
            return Err(Error::Precondition(format!(
                "{part:?} is not an essential subset (infinite essentialities are out of scope)"
            )));
        }
    }
    // finite parts of an infinite set never cover it
    let d1 = gcd_without(s, &a)?;
    let d2 = gcd_without(s, &b)?;
    let mut report = BoundReport::new("divisor_coprimality");
    report
        .int("d1", d1)
        .int("d2", d2)
        .int("gcd", gcd(d1, d2))
        .verdict("d1 >= 2", d1 >= 2)
        .verdict("d2 >= 2", d2 >= 2)
        .verdict("gcd(d1, d2) = 1", gcd(d1, d2) == 1);
    Ok(report)
}
