//! Brute-force reference implementations for cross-checking the exact
//! engine, plus an empirical profile for bases that are not eventually
//! periodic (primes, k-th powers).
//!
//! Nothing here calls into the order engine, the essential-element code or
//! the progression code: sums are dense tables, gcds are recomputed from
//! enumerated elements. Only set enumeration is shared.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::Eps;

/// Default limit on the number of exceptional elements searched exhaustively.
pub const DEFAULT_SUBSET_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "order", rename_all = "snake_case")]
pub enum OracleOutcome {
    Order(u32),
    /// No `h <= h_max` covered the window; either not a basis or the search
    /// was too small. The exact engine decides.
    Inconclusive,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn naive_difference_gcd(elements: &[u64]) -> u64 {
    let Some(&first) = elements.first() else {
        return 0;
    };
    elements.iter().fold(0, |g, &x| gcd(g, x.abs_diff(first)))
}

/// A plain word-packed table, kept separate from the engine's bitsets.
#[derive(Clone)]
struct Table(Vec<u64>);

impl Table {
    fn new(len: usize) -> Self {
        Table(vec![0; len / 64 + 1])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    /// `self |= src << k` (bits past the end fall off).
    fn or_shifted(&mut self, src: &Table, k: usize) {
        let (ws, bs) = (k / 64, k % 64);
        let n = self.0.len();
        for j in (ws..n).rev() {
            let mut w = src.0[j - ws] << bs;
            if bs > 0 && j > ws {
                w |= src.0[j - ws - 1] >> (64 - bs);
            }
            self.0[j] |= w;
        }
    }

    fn or(&mut self, other: &Table) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

/// Least `h <= h_max` such that the `window` integers ending at the largest
/// listed element are all sums of exactly `h` listed elements, at least one
/// of which is `>= tail_from`.
///
/// `elements` must be every element of the set up to its maximum, and every
/// element `>= tail_from` must belong to a residue class (mod some period
/// `<= window`) that the set contains from `tail_from` on. Such a sum `v`
/// then certifies `v + k·period` for all `k`, so a full window proves
/// cofinite coverage.
pub fn naive_order(elements: &[u64], tail_from: u64, h_max: u32, window: usize) -> OracleOutcome {
    let Some(&top) = elements.last() else {
        return OracleOutcome::Inconclusive;
    };
    let len = top as usize + 1;
    if window == 0 || window > len {
        return OracleOutcome::Inconclusive;
    }
    let (tail, head): (Vec<usize>, Vec<usize>) = elements
        .iter()
        .map(|&e| e as usize)
        .partition(|&e| e as u64 >= tail_from);
    let mut plain = Table::new(len);
    plain.set(0);
    let mut flagged = Table::new(len);
    for h in 1..=h_max {
        let mut any = plain.clone();
        any.or(&flagged);
        let mut next_plain = Table::new(len);
        let mut next_flagged = Table::new(len);
        for &e in &head {
            next_plain.or_shifted(&plain, e);
            next_flagged.or_shifted(&flagged, e);
        }
        for &e in &tail {
            next_flagged.or_shifted(&any, e);
        }
        plain = next_plain;
        flagged = next_flagged;
        if (len - window..len).all(|x| flagged.get(x)) {
            return OracleOutcome::Order(h);
        }
    }
    OracleOutcome::Inconclusive
}

/// Runs [`naive_order`] on an eventually periodic set with a search range
/// large enough to be conclusive for every order `<= h_max`.
pub fn naive_order_of(s: &Eps, h_max: u32) -> OracleOutcome {
    if s.is_finite() {
        return OracleOutcome::Inconclusive;
    }
    let m = s.modulus();
    let f_top = s.exceptional().last().map_or(0, |&f| f + 1);
    let tail_from = s.threshold().max(f_top);
    // every least flagged sum is at most h·(tail_from + m)
    let window = 2 * m as usize;
    let bound = h_max as u64 * (tail_from + m) + window as u64 + m;
    // the window ends at the last element, which is within m of the bound
    naive_order(&s.enumerate(bound), tail_from, h_max, window)
}

/// Whether `S ∖ removed` still has coprime differences, judged from an
/// enumeration that reaches two full periods past every exception.
fn naive_is_basis_without(s: &Eps, removed: &[u64]) -> bool {
    let f_top = s.exceptional().last().map_or(0, |&f| f + 1);
    let bound = s.threshold().max(f_top) + 2 * s.modulus();
    let rest: Vec<u64> = s
        .enumerate(bound)
        .into_iter()
        .filter(|x| !removed.contains(x))
        .collect();
    naive_difference_gcd(&rest) == 1
}

/// Every inclusion-minimal `P ⊆ F` whose removal leaves a set with a common
/// difference divisor, by exhaustive search over the exceptional set `F`.
/// Subsets are sorted; the list is sorted lexicographically.
pub fn naive_essential_subsets(s: &Eps, cap: usize) -> Result<Vec<Vec<u64>>> {
    if s.is_finite() {
        return Err(Error::FiniteSet);
    }
    let f = s.exceptional();
    if f.len() > cap {
        return Err(Error::OracleCap { size: f.len(), cap });
    }
    if !naive_is_basis_without(s, &[]) {
        return Err(Error::NotABasis);
    }
    let mut hits: Vec<u32> = Vec::new();
    // masks in order of popcount so that minimality is a subset test against
    // earlier hits
    let mut masks: Vec<u32> = (1..1u32 << f.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        if hits.iter().any(|&h| h & !mask == 0) {
            continue;
        }
        let removed: Vec<u64> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
        if !naive_is_basis_without(s, &removed) {
            hits.push(mask);
        }
    }
    let mut out: Vec<Vec<u64>> = hits
        .into_iter()
        .map(|mask| (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect())
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalProfile {
    /// gcd of all differences in the sample.
    pub gcd: u64,
    /// gcd of the differences of the upper half of the sample.
    pub ratio: u64,
    pub offset: u64,
    /// Sample elements off the class `offset mod ratio`.
    pub reservoir: Vec<u64>,
    /// Least sample element from which the suffix gcd equals `ratio`.
    pub stable_from: u64,
    pub sample_size: usize,
    /// Always "empirical": there is no maximality certificate.
    pub label: &'static str,
}

/// Estimates ratio, offset and reservoir of an ascending stream from its
/// elements `<= bound`.
pub fn empirical_profile(stream: impl IntoIterator<Item = u64>, bound: u64) -> Result<EmpiricalProfile> {
    let mut sample = Vec::new();
    for x in stream {
        if x > bound {
            break;
        }
        if sample.last().is_some_and(|&prev| prev >= x) {
            return Err(Error::Precondition("the stream must be strictly ascending".into()));
        }
        sample.push(x);
    }
    if sample.len() < 2 {
        return Err(Error::Precondition("need at least two elements below the bound".into()));
    }
    // suffix[i] = gcd of the differences among sample[i..]
    let mut suffix = vec![0u64; sample.len()];
    for i in (0..sample.len() - 1).rev() {
        suffix[i] = gcd(suffix[i + 1], sample[i + 1] - sample[i]);
    }
    let mid = (sample.len() - 1) / 2;
    let ratio = suffix[mid];
    let offset = sample[mid] % ratio;
    let stable_from = sample[suffix.iter().position(|&g| g == ratio).expect("mid qualifies")];
    Ok(EmpiricalProfile {
        gcd: suffix[0],
        ratio,
        offset,
        reservoir: sample.iter().copied().filter(|x| x % ratio != offset).collect(),
        stable_from,
        sample_size: sample.len(),
        label: "empirical",
    })
}

/// A random infinite eventually periodic set with modulus `<= max_modulus`
/// and at most `max_exceptional` exceptional elements, all below `3·m`.
///
/// Half of the draws confine the tail to one class modulo a divisor of `m`,
/// so that essential elements and subsets actually occur.
pub fn random_eps<R: Rng>(rng: &mut R, max_modulus: u64, max_exceptional: usize) -> Eps {
    loop {
        let m = rng.gen_range(1..=max_modulus.max(1));
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        let d = if rng.gen_bool(0.5) {
            *divisors.choose(rng).expect("1 divides m")
        } else {
            1
        };
        let class = rng.gen_range(0..d);
        let pool: Vec<u64> = (0..m).filter(|r| r % d == class).collect();
        let k = rng.gen_range(1..=pool.len());
        let residues: Vec<u64> = pool.choose_multiple(rng, k).copied().collect();
        let threshold = rng.gen_range(0..=2 * m);
        let count = rng.gen_range(0..=max_exceptional);
        let exceptional: Vec<u64> = (0..count).map(|_| rng.gen_range(0..3 * m)).collect();
        if let Ok(s) = Eps::new(m, residues, threshold, exceptional) {
            if s.exceptional().len() <= max_exceptional {
                return s;
            }
        }
    }
}

/// Like [`random_eps`], redrawn until the differences are coprime.
pub fn random_basis<R: Rng>(rng: &mut R, max_modulus: u64, max_exceptional: usize) -> Eps {
    loop {
        let s = random_eps(rng, max_modulus, max_exceptional);
        if naive_is_basis_without(&s, &[]) {
            return s;
        }
    }
}
