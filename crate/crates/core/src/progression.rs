//! Ratio, dessentialized set and reservoir of an eventually periodic set,
//! and the essential subsets they control.
//!
//! Writing the set as `(a·B + b) ⊔ E` with `a` maximal, `0 <= b < a` and every
//! element of `E` off the class of `b`, the ratio `a` is the gcd of the
//! cofinite core's differences, i.e. the tail gcd of the canonical form.

use serde::Serialize;

use crate::arith::{factorize, radical_length, total_length};
use crate::error::{Error, Result};
use crate::order::is_basis;
use crate::report::BoundReport;
use crate::set::Eps;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionProfile {
    pub ratio: u64,
    /// `b`, normalized to `[0, ratio)`.
    pub offset: u64,
    pub dessentialized: Eps,
    /// Elements off the class `offset mod ratio`; always finite.
    pub reservoir: Vec<u64>,
    /// Distinct prime factors of the ratio.
    pub radical_length: u32,
    /// Prime factors of the ratio counted with multiplicity.
    pub total_length: u32,
    /// False when the input is not a basis; the decomposition is still exact.
    pub is_basis: bool,
}

impl ProgressionProfile {
    /// `(ratio·B + offset) ∪ E`.
    pub fn recompose(&self) -> Result<Eps> {
        self.dessentialized
            .dilate(self.ratio, self.offset)?
            .union(&Eps::finite(self.reservoir.iter().copied()))
    }
}

/// Decomposes an infinite set; non-bases are decomposed too and flagged.
pub fn raison_profile(s: &Eps) -> Result<ProgressionProfile> {
    if s.is_finite() {
        return Err(Error::FiniteSet);
    }
    let ratio = s.tail_gcd();
    let offset = s.residues()[0] % ratio;
    let reservoir: Vec<u64> = s
        .exceptional()
        .iter()
        .copied()
        .filter(|x| x % ratio != offset)
        .collect();
    let dessentialized = s.remove_finite(&reservoir)?.affine_contract(ratio, offset)?;
    Ok(ProgressionProfile {
        ratio,
        offset,
        dessentialized,
        reservoir,
        radical_length: radical_length(ratio),
        total_length: total_length(ratio),
        is_basis: is_basis(s),
    })
}

pub fn has_essential_subset(s: &Eps) -> Result<bool> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    Ok(raison_profile(s)?.ratio >= 2)
}

/// All essential subsets, one per prime `p | ratio` that yields one, ordered
/// by `p`.
///
/// An essential subset `P` has `d(P) >= 2`, and distinct ones have coprime
/// `d(P)`, which forces `d(P) | ratio`; for a prime `p | d(P)` the set `P`
/// must then contain every reservoir element off the class of `b` mod `p`.
/// Each candidate `{x ∈ E : x ≢ b mod p}` is verified directly.
pub fn essential_subsets(s: &Eps) -> Result<Vec<Vec<u64>>> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    let profile = raison_profile(s)?;
    let mut found: Vec<Vec<u64>> = Vec::new();
    for (p, _) in factorize(profile.ratio) {
        let candidate: Vec<u64> = profile
            .reservoir
            .iter()
            .copied()
            .filter(|x| x % p != profile.offset % p)
            .collect();
        if candidate.is_empty() || found.contains(&candidate) {
            continue;
        }
        if crate::essentials::is_essential_subset(s, &candidate)? {
            found.push(candidate);
        }
    }
    // is_essential_subset already enforces minimality; this guards the
    // inclusion order between candidates as well
    let minimal: Vec<Vec<u64>> = found
        .iter()
        .filter(|p| !found.iter().any(|q| q != *p && q.iter().all(|x| p.contains(x))))
        .cloned()
        .collect();
    Ok(minimal)
}

/// Every essential subset lies in the reservoir and there are at most
/// `ω(ratio)` of them.
pub fn audit_reservoir_bound(s: &Eps) -> Result<BoundReport> {
    let profile = raison_profile(s)?;
    let parts = essential_subsets(s)?;
    let inside = parts
        .iter()
        .all(|p| p.iter().all(|x| profile.reservoir.contains(x)));
    let mut report = BoundReport::new("reservoir_bound");
    report
        .int("ratio", profile.ratio)
        .int("essential_subsets", parts.len() as u64)
        .int("radical_length", profile.radical_length)
        .verdict("every essential subset lies in the reservoir", inside)
        .verdict(
            "count <= radical length of the ratio",
            parts.len() as u32 <= profile.radical_length,
        );
    Ok(report)
}

/// For `S ∼ a'·B' + b'`, the three statements `a = a'`, `B ∼ B' + k` and
/// "`B'` is a basis without essential subset" are equivalent.
pub fn audit_dessentialized_uniqueness(
    s: &Eps,
    ratio: u64,
    offset: u64,
    b_prime: &Eps,
) -> Result<BoundReport> {
    if !is_basis(s) {
        return Err(Error::NotABasis);
    }
    if ratio == 0 || !s.is_equivalent_cofinite(&b_prime.dilate(ratio, offset)?) {
        return Err(Error::Precondition(format!(
            "the set is not cofinitely {ratio}·B' + {offset}"
        )));
    }
    let profile = raison_profile(s)?;
    let same_ratio = profile.ratio == ratio;
    let translate_equivalent = profile.dessentialized.is_equivalent_up_to_translation(b_prime);
    let clean_basis = is_basis(b_prime) && raison_profile(b_prime)?.ratio == 1;
    let mut report = BoundReport::new("dessentialized_uniqueness");
    report
        .int("ratio", profile.ratio)
        .int("candidate_ratio", ratio)
        .int("i", same_ratio as u8)
        .int("ii", translate_equivalent as u8)
        .int("iii", clean_basis as u8)
        .verdict(
            "ratios agree <=> dessentialized sets agree up to translation <=> candidate is a clean basis",
            same_ratio == translate_equivalent && translate_equivalent == clean_basis,
        );
    Ok(report)
}
