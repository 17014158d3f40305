//! Eventually periodic subsets of the natural numbers.
//!
//! A set is stored as a finite list of exceptional elements together with a
//! periodic tail `{x >= t : x mod m in R}`. Every constructor canonicalizes,
//! so two values are equal as sets exactly when they are field-equal:
//!
//! * `m` is the least period of the tail pattern,
//! * `t` is the least threshold such that the whole tail from `t` on lies in
//!   the set,
//! * the exceptional elements are precisely the members outside that tail,
//! * a finite set has `m = 1`, `R = {}` and `t = 0`.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::arith::{divisors, gcd, lcm};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSet {
    modulus: u64,
    residues: Vec<u64>,
    threshold: u64,
    exceptional: Vec<u64>,
}

pub type Eps = EventuallyPeriodicSet;

impl EventuallyPeriodicSet {
    /// Builds the canonical set `F ∪ {x >= t : x mod m ∈ R}` from raw fields.
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        threshold: u64,
        exceptional: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus { pos: 0 });
        }
        let mut residues: Vec<u64> = residues.into_iter().map(|r| r % modulus).collect();
        residues.sort_unstable();
        residues.dedup();
        let mut exceptional: Vec<u64> = exceptional.into_iter().collect();
        exceptional.sort_unstable();
        exceptional.dedup();
        Ok(Self::canonicalize(modulus, residues, threshold, exceptional))
    }

    pub fn empty() -> Self {
        Self::finite(std::iter::empty())
    }

    pub fn naturals() -> Self {
        Self {
            modulus: 1,
            residues: vec![0],
            threshold: 0,
            exceptional: Vec::new(),
        }
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        let mut exceptional: Vec<u64> = elements.into_iter().collect();
        exceptional.sort_unstable();
        exceptional.dedup();
        Self {
            modulus: 1,
            residues: Vec::new(),
            threshold: 0,
            exceptional,
        }
    }

    /// `{x >= start : x ≡ offset mod step}`.
    pub fn progression(step: u64, offset: u64, start: u64) -> Result<Self> {
        Self::new(step, [offset], start, [])
    }

    // Inputs: residues reduced, sorted and deduplicated; exceptional sorted
    // and deduplicated.
    fn canonicalize(modulus: u64, residues: Vec<u64>, threshold: u64, exceptional: Vec<u64>) -> Self {
        if residues.is_empty() {
            return Self {
                modulus: 1,
                residues,
                threshold: 0,
                exceptional,
            };
        }
        let (modulus, residues) = minimal_period(modulus, residues);
        let in_tail_class = |x: u64| residues.binary_search(&(x % modulus)).is_ok();

        let mut t = threshold;
        while t > 0 {
            let y = t - 1;
            if in_tail_class(y) && exceptional.binary_search(&y).is_err() {
                break;
            }
            t = y;
        }
        let exceptional = exceptional
            .into_iter()
            .filter(|&f| f < t || !in_tail_class(f))
            .collect();
        Self {
            modulus,
            residues,
            threshold: t,
            exceptional,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn exceptional(&self) -> &[u64] {
        &self.exceptional
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.exceptional.is_empty()
    }

    /// Least tail element of residue class `r`.
    pub fn least_in_class(&self, r: u64) -> u64 {
        let m = self.modulus;
        self.threshold + (r % m + m - self.threshold % m) % m
    }

    /// Least tail element of every residue class of the tail, in residue order.
    pub fn tail_representatives(&self) -> Vec<u64> {
        self.residues.iter().map(|&r| self.least_in_class(r)).collect()
    }

    pub fn in_tail(&self, n: u64) -> bool {
        n >= self.threshold && self.residues.binary_search(&(n % self.modulus)).is_ok()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.in_tail(n) || self.exceptional.binary_search(&n).is_ok()
    }

    pub fn min(&self) -> Option<u64> {
        let tail_min = self.tail_representatives().into_iter().min();
        match (self.exceptional.first().copied(), tail_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Largest element of a finite set.
    pub fn max(&self) -> Option<u64> {
        if self.is_finite() {
            self.exceptional.last().copied()
        } else {
            None
        }
    }

    /// Sorted elements of `S ∩ [0, bound]`.
    pub fn enumerate(&self, bound: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .exceptional
            .iter()
            .copied()
            .take_while(|&f| f <= bound)
            .collect();
        if !self.is_finite() {
            for r in self.tail_representatives() {
                let mut x = r;
                while x <= bound {
                    out.push(x);
                    match x.checked_add(self.modulus) {
                        Some(next) => x = next,
                        None => break,
                    }
                }
            }
            out.sort_unstable();
        }
        out
    }

    /// `{x + k : x ∈ S}`.
    pub fn translate(&self, k: i64) -> Result<Self> {
        if k == 0 || self.is_empty() {
            return Ok(self.clone());
        }
        let min = self.min().unwrap_or(0);
        let shift = |x: u64| -> Result<u64> {
            let y = x as i128 + k as i128;
            if y < 0 {
                Err(Error::NegativeTranslate { shift: k })
            } else {
                u64::try_from(y).map_err(|_| Error::Overflow("translating"))
            }
        };
        shift(min)?;
        let exceptional = self.exceptional.iter().map(|&f| shift(f)).collect::<Result<Vec<_>>>()?;
        if self.is_finite() {
            return Ok(Self::finite(exceptional));
        }
        let m = self.modulus as i128;
        let residues: Vec<u64> = self
            .residues
            .iter()
            .map(|&r| (r as i128 + k as i128).rem_euclid(m) as u64)
            .collect();
        let threshold = (self.threshold as i128 + k as i128).max(0);
        let threshold = u64::try_from(threshold).map_err(|_| Error::Overflow("translating"))?;
        Self::new(self.modulus, residues, threshold, exceptional)
    }

    /// `{a·x + b : x ∈ S}`.
    pub fn dilate(&self, a: u64, b: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::ZeroModulus { pos: 0 });
        }
        let map = |x: u64| -> Result<u64> {
            x.checked_mul(a)
                .and_then(|y| y.checked_add(b))
                .ok_or(Error::Overflow("dilating"))
        };
        let exceptional = self.exceptional.iter().map(|&f| map(f)).collect::<Result<Vec<_>>>()?;
        if self.is_finite() {
            return Ok(Self::finite(exceptional));
        }
        let modulus = self.modulus.checked_mul(a).ok_or(Error::Overflow("dilating"))?;
        let residues: Vec<u64> = self
            .residues
            .iter()
            .map(|&r| map(r).map(|y| y % modulus))
            .collect::<Result<_>>()?;
        Self::new(modulus, residues, map(self.threshold)?, exceptional)
    }

    /// `{(x - b) / a : x ∈ S}`; every element must satisfy `x ≡ b mod a` and
    /// `x >= b`.
    pub fn affine_contract(&self, a: u64, b: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::ZeroModulus { pos: 0 });
        }
        let non_uniform = |element| Error::NonUniform {
            element,
            step: a,
            offset: b,
        };
        let map = |x: u64| -> Result<u64> {
            if x < b || (x - b) % a != 0 {
                Err(non_uniform(x))
            } else {
                Ok((x - b) / a)
            }
        };
        let exceptional = self.exceptional.iter().map(|&f| map(f)).collect::<Result<Vec<_>>>()?;
        if self.is_finite() {
            return Ok(Self::finite(exceptional));
        }
        let m = self.modulus;
        for rep in self.tail_representatives() {
            // the whole class rep + mℕ must stay on one residue mod a
            if m % a != 0 {
                return Err(non_uniform(rep + m));
            }
            map(rep)?;
        }
        let residues: Vec<u64> = self
            .residues
            .iter()
            .map(|&r| ((r + m - b % m) % m) / a)
            .collect();
        let threshold = if self.threshold > b {
            (self.threshold - b).div_ceil(a)
        } else {
            0
        };
        Self::new(m / a, residues, threshold, exceptional)
    }

    /// `S ∖ P` for a finite `P ⊆ S`. Tail elements that are removed open
    /// holes; the threshold moves past the largest of them and the surviving
    /// tail elements below it become exceptional.
    pub fn remove_finite(&self, removed: &[u64]) -> Result<Self> {
        if let Some(&x) = removed.iter().find(|&&x| !self.contains(x)) {
            return Err(Error::NotAMember(x));
        }
        let mut removed: Vec<u64> = removed.to_vec();
        removed.sort_unstable();
        removed.dedup();
        let is_removed = |x: &u64| removed.binary_search(x).is_ok();

        let mut exceptional: Vec<u64> = self.exceptional.iter().copied().filter(|x| !is_removed(x)).collect();
        if self.is_finite() {
            return Ok(Self::finite(exceptional));
        }
        let mut threshold = self.threshold;
        if let Some(&last_hole) = removed.iter().filter(|&&x| self.in_tail(x)).max() {
            threshold = last_hole + 1;
            exceptional.extend(
                (self.threshold..threshold).filter(|&x| self.in_tail(x) && !is_removed(&x)),
            );
        }
        Self::new(self.modulus, self.residues.clone(), threshold, exceptional)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        match (self.is_finite(), other.is_finite()) {
            (true, true) => Ok(Self::finite(
                self.exceptional.iter().chain(&other.exceptional).copied(),
            )),
            (true, false) => other.union(self),
            (false, true) => Self::new(
                self.modulus,
                self.residues.clone(),
                self.threshold,
                self.exceptional.iter().chain(&other.exceptional).copied(),
            ),
            (false, false) => {
                let m = lcm(self.modulus, other.modulus).ok_or(Error::Overflow("taking a union"))?;
                let residues = (0..m).filter(|&c| {
                    self.residues.binary_search(&(c % self.modulus)).is_ok()
                        || other.residues.binary_search(&(c % other.modulus)).is_ok()
                });
                let t = self.threshold.max(other.threshold);
                let mut exceptional: Vec<u64> = self.exceptional.clone();
                exceptional.extend_from_slice(&other.exceptional);
                for s in [self, other] {
                    exceptional.extend((s.threshold..t).filter(|&x| s.in_tail(x)));
                }
                Self::new(m, residues.collect::<Vec<_>>(), t, exceptional)
            }
        }
    }

    /// gcd of all pairwise differences; 0 when the set has at most one element.
    ///
    /// Every element is `w + k·m` for some `w` in the witness set made of the
    /// exceptional elements and the least element of each tail class, so the
    /// gcd over the witnesses (anchored at the minimum) together with `m` is
    /// exact.
    pub fn gcd_of_differences(&self) -> u64 {
        let Some(anchor) = self.min() else {
            return 0;
        };
        let mut g = if self.is_finite() { 0 } else { self.modulus };
        for w in self.exceptional.iter().copied().chain(self.tail_representatives()) {
            g = gcd(g, w - anchor);
        }
        g
    }

    /// gcd of the differences of the tail alone: the largest `a` such that all
    /// but finitely many elements share one residue mod `a`. 0 for finite sets.
    pub fn tail_gcd(&self) -> u64 {
        let Some(&r0) = self.residues.first() else {
            return 0;
        };
        self.residues.iter().fold(self.modulus, |g, &r| gcd(g, r - r0))
    }

    /// True iff the symmetric difference with `other` is finite.
    pub fn is_equivalent_cofinite(&self, other: &Self) -> bool {
        // canonical tails have minimal period, so equal tails are field-equal
        self.modulus == other.modulus && self.residues == other.residues
    }

    /// True iff `self ∼ other + k` for some integer `k` (the tails are
    /// rotations of each other).
    pub fn is_equivalent_up_to_translation(&self, other: &Self) -> bool {
        if self.is_finite() || other.is_finite() {
            return self.is_finite() && other.is_finite();
        }
        if self.modulus != other.modulus || self.residues.len() != other.residues.len() {
            return false;
        }
        let m = self.modulus;
        let base = other.residues[0];
        self.residues.iter().any(|&target| {
            let k = (target + m - base) % m;
            other
                .residues
                .iter()
                .all(|&r| self.residues.binary_search(&((r + k) % m)).is_ok())
        })
    }
}

/// Least period of the residue pattern `R ⊆ ℤ/m`, with `R` reduced to it.
fn minimal_period(modulus: u64, residues: Vec<u64>) -> (u64, Vec<u64>) {
    if residues.len() as u64 == modulus {
        return (1, vec![0]);
    }
    let mut mask = vec![false; modulus as usize];
    for &r in &residues {
        mask[r as usize] = true;
    }
    for d in divisors(modulus) {
        if d == modulus {
            break;
        }
        if residues.iter().all(|&r| mask[((r + d) % modulus) as usize]) {
            let mut reduced: Vec<u64> = residues.iter().map(|&r| r % d).collect();
            reduced.sort_unstable();
            reduced.dedup();
            return (d, reduced);
        }
    }
    (modulus, residues)
}

/// Serialized as the canonical text followed by the raw fields.
impl Serialize for EventuallyPeriodicSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EventuallyPeriodicSet", 5)?;
        st.serialize_field("canonical", &self.to_string())?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("residues", &self.residues)?;
        st.serialize_field("threshold", &self.threshold)?;
        st.serialize_field("exceptional", &self.exceptional)?;
        st.end()
    }
}

impl fmt::Display for EventuallyPeriodicSet {
    /// Canonical text: one `mN+r@t` term per tail residue, then the
    /// exceptional elements as one finite set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .residues
            .iter()
            .map(|r| format!("{}N+{}@{}", self.modulus, r, self.threshold))
            .collect();
        if !self.exceptional.is_empty() || terms.is_empty() {
            let items: Vec<String> = self.exceptional.iter().map(u64::to_string).collect();
            terms.push(format!("{{{}}}", items.join(",")));
        }
        f.write_str(&terms.join(" U "))
    }
}

impl fmt::Debug for EventuallyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Eps(m={}, R={:?}, t={}, F={:?})",
            self.modulus, self.residues, self.threshold, self.exceptional
        )
    }
}
