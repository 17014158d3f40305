//! Basicity and exact order of eventually periodic sets.
//!
//! Sums of exactly `h` elements are tracked as states `(residue mod m, flag)`
//! where the flag records that at least one summand came from the periodic
//! tail. A flagged sum `v` certifies `v + k·m ∈ hA` for every `k >= 0` (the
//! tail summand absorbs the shift), while unflagged sums only use the finitely
//! many exceptional elements. Hence `hA ∼ ℕ` iff every residue is reachable
//! with the flag set after exactly `h` steps.
//!
//! The state-set sequence is deterministic on a finite space, so it is
//! eventually periodic; a repeat without success is an exact proof that the
//! set is not a basis.

use serde::Serialize;

use crate::bitset::Bits;
use crate::error::{Error, Result};
use crate::set::Eps;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub order: u32,
    pub modulus: u64,
    /// `v_c`: least sum of exactly `order` elements that is `≡ c mod m` and
    /// uses at least one tail element, indexed by `c`.
    pub min_flagged_sums: Vec<u64>,
    /// `max_c v_c`; every integer from here on is a sum of `order` elements.
    pub coverage_threshold: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonBasisProof {
    Finite,
    /// The reachable-state sequence repeats: state `preperiod + period`
    /// equals state `preperiod`, and no state before that covers every
    /// residue with a tail summand.
    Cycle { preperiod: u64, period: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Basicity {
    Basis(OrderCertificate),
    NotBasis(NonBasisProof),
}

impl Basicity {
    pub fn is_basis(&self) -> bool {
        matches!(self, Basicity::Basis(_))
    }
}

#[derive(Debug, Clone, Copy)]
struct Generator {
    residue: usize,
    value: u64,
    flagged: bool,
}

/// One generator per exceptional residue (its least element) and one per
/// tail residue (its least tail element).
fn generators(s: &Eps) -> Vec<Generator> {
    let m = s.modulus();
    let mut plain: Vec<Generator> = Vec::new();
    for &f in s.exceptional() {
        let residue = (f % m) as usize;
        if !plain.iter().any(|g| g.residue == residue) {
            plain.push(Generator {
                residue,
                value: f,
                flagged: false,
            });
        }
    }
    let tail = s.residues().iter().map(|&r| Generator {
        residue: r as usize,
        value: s.least_in_class(r),
        flagged: true,
    });
    plain.into_iter().chain(tail).collect()
}

#[derive(Clone, PartialEq, Eq)]
struct Reach {
    plain: Bits,
    flagged: Bits,
}

impl Reach {
    fn start(m: usize) -> Self {
        let mut plain = Bits::new(m);
        plain.set(0);
        Self {
            plain,
            flagged: Bits::new(m),
        }
    }

    fn step(&self, gens: &[Generator]) -> Self {
        let m = self.plain.len();
        let mut plain = Bits::new(m);
        let mut flagged = Bits::new(m);
        let mut any = self.plain.clone();
        any.or_assign(&self.flagged);
        for g in gens {
            if g.flagged {
                flagged.or_rotated(&any, g.residue);
            } else {
                plain.or_rotated(&self.plain, g.residue);
                flagged.or_rotated(&self.flagged, g.residue);
            }
        }
        Self { plain, flagged }
    }

    fn covers(&self) -> bool {
        self.flagged.is_full()
    }
}

/// Least `h` with `hA ∼ ℕ`, or an exact proof that none exists.
pub fn reachability_order(s: &Eps) -> std::result::Result<u32, NonBasisProof> {
    if s.is_finite() {
        return Err(NonBasisProof::Finite);
    }
    let gens = generators(s);
    let start = Reach::start(s.modulus() as usize);

    // Brent's cycle detection; every state of the sequence is checked for
    // coverage in order, so the first covering index is the order.
    let mut steps: u64 = 1;
    let mut power: u64 = 1;
    let mut period: u64 = 1;
    let mut tortoise = start.clone();
    let mut hare = start.step(&gens);
    if hare.covers() {
        return Ok(1);
    }
    while tortoise != hare {
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = hare.step(&gens);
        period += 1;
        steps += 1;
        if hare.covers() {
            return Ok(u32::try_from(steps).expect("order fits in u32"));
        }
    }

    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..period {
        hare = hare.step(&gens);
    }
    let mut preperiod = 0;
    while tortoise != hare {
        tortoise = tortoise.step(&gens);
        hare = hare.step(&gens);
        preperiod += 1;
    }
    Err(NonBasisProof::Cycle { preperiod, period })
}

pub fn is_basis(s: &Eps) -> bool {
    reachability_order(s).is_ok()
}

pub fn basicity(s: &Eps) -> Basicity {
    match reachability_order(s) {
        Ok(h) => Basicity::Basis(certificate(s, h)),
        Err(proof) => Basicity::NotBasis(proof),
    }
}

/// Exact order with its coverage certificate.
pub fn order(s: &Eps) -> Result<OrderCertificate> {
    let h = reachability_order(s).map_err(|_| Error::NotABasis)?;
    Ok(certificate(s, h))
}

/// Order under "at most `h` summands" semantics, i.e. the order of `S ∪ {0}`.
pub fn order_at_most(s: &Eps) -> Result<OrderCertificate> {
    order(&s.union(&Eps::finite([0]))?)
}

fn certificate(s: &Eps, h: u32) -> OrderCertificate {
    let min_flagged_sums: Vec<u64> = min_flagged_sums(s, h)
        .into_iter()
        .map(|v| v.expect("every residue is flagged-reachable at the order"))
        .collect();
    let coverage_threshold = min_flagged_sums.iter().copied().max().unwrap_or(0);
    OrderCertificate {
        order: h,
        modulus: s.modulus(),
        min_flagged_sums,
        coverage_threshold,
    }
}

/// Min-plus dynamic program over exactly `h` summands: for each residue `c`,
/// the least sum `≡ c mod m` that uses at least one tail element.
pub fn min_flagged_sums(s: &Eps, h: u32) -> Vec<Option<u64>> {
    let m = s.modulus() as usize;
    if s.is_finite() {
        return vec![None; m];
    }
    const NONE: u64 = u64::MAX;
    let gens = generators(s);
    let mut plain = vec![NONE; m];
    let mut flagged = vec![NONE; m];
    plain[0] = 0;
    for _ in 0..h {
        let mut next_plain = vec![NONE; m];
        let mut next_flagged = vec![NONE; m];
        for c in 0..m {
            let (p, f) = (plain[c], flagged[c]);
            if p == NONE && f == NONE {
                continue;
            }
            for g in &gens {
                let target = (c + g.residue) % m;
                if p != NONE {
                    let slot = if g.flagged {
                        &mut next_flagged[target]
                    } else {
                        &mut next_plain[target]
                    };
                    *slot = (*slot).min(p + g.value);
                }
                if f != NONE {
                    let slot = &mut next_flagged[target];
                    *slot = (*slot).min(f + g.value);
                }
            }
        }
        plain = next_plain;
        flagged = next_flagged;
    }
    flagged.into_iter().map(|v| (v != NONE).then_some(v)).collect()
}

/// Dense table of `hA ∩ [0, bound]`.
pub fn sumset_membership_table(s: &Eps, h: u32, bound: u64) -> Vec<bool> {
    let sums = exact_sums(&s.enumerate(bound), h, bound as usize + 1);
    (0..=bound as usize).map(|i| sums.get(i)).collect()
}

/// Sums of exactly `h` of the given elements, as a bitset over `[0, len)`.
fn exact_sums(elements: &[u64], h: u32, len: usize) -> Bits {
    let mut cur = Bits::new(len);
    if len == 0 {
        return cur;
    }
    cur.set(0);
    for _ in 0..h {
        let mut next = Bits::new(len);
        for &e in elements {
            if (e as usize) < len {
                next.or_shifted_up(&cur, e as usize);
            }
        }
        cur = next;
    }
    cur
}

/// Least `N` such that every `n >= N` is a sum of exactly `h` elements.
///
/// In residue class `c` the sums with a tail summand are exactly
/// `v_c + mℕ`; below `v_c` only sums of exceptional elements can occur, so
/// walking down from `v_c` until the first gap gives the class's last
/// missing integer.
pub fn effective_bound(s: &Eps, h: u32) -> Result<u64> {
    let sums = min_flagged_sums(s, h);
    if sums.iter().any(Option::is_none) {
        return Err(match order(s) {
            Ok(cert) => Error::BelowOrder {
                order: cert.order,
                requested: h,
            },
            Err(e) => e,
        });
    }
    let sums: Vec<u64> = sums.into_iter().flatten().collect();
    let top = sums.iter().copied().max().unwrap_or(0);
    let plain = exact_sums(s.exceptional(), h, top as usize + 1);
    let m = s.modulus();
    let mut bound = 0;
    for &v in &sums {
        let mut x = v;
        while x >= m {
            x -= m;
            if !plain.get(x as usize) {
                bound = bound.max(x + 1);
                break;
            }
        }
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_set_expr;

    fn set(text: &str) -> Eps {
        parse_set_expr(text).unwrap()
    }

    /// Brute-force `hA` membership, independent of the bitset code.
    fn naive_sums(elements: &[u64], h: u32, bound: u64) -> Vec<bool> {
        let mut cur = vec![false; bound as usize + 1];
        cur[0] = true;
        for _ in 0..h {
            let mut next = vec![false; bound as usize + 1];
            for (i, &on) in cur.iter().enumerate() {
                if on {
                    for &e in elements {
                        let j = i + e as usize;
                        if j <= bound as usize {
                            next[j] = true;
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    #[test]
    fn basicity_examples() {
        assert_eq!(order(&Eps::naturals()).unwrap().order, 1);
        assert!(matches!(basicity(&set("2N")), Basicity::NotBasis(NonBasisProof::Cycle { .. })));
        assert!(!is_basis(&set("6N U {2,4}")));
        assert_eq!(set("6N U {2,4}").gcd_of_differences(), 2);
        assert_eq!(basicity(&set("{1,2,3}")), Basicity::NotBasis(NonBasisProof::Finite));
    }

    #[test]
    fn order_examples() {
        assert_eq!(order(&set("2N U {1}")).unwrap().order, 2);
        assert_eq!(order(&set("30N U {15,10,6}")).unwrap().order, 8);
        assert_eq!(order(&set("6N U {1,2,3,4,5}")).unwrap().order, 2);
        assert_eq!(order(&set("6N U {2,3}")).unwrap().order, 4);
        assert_eq!(order(&set("2N")), Err(Error::NotABasis));
    }

    #[test]
    fn order_without_zero() {
        // odd numbers plus 2: pairs of odds give evens, 2 + odd gives odds
        assert_eq!(order(&set("2N+1 U {2}")).unwrap().order, 2);
        // {x >= 5} needs only one summand
        assert_eq!(order(&set("1N+5")).unwrap().order, 1);
    }

    #[test]
    fn cycle_proof_is_a_real_repeat() {
        let s = set("4N+2 U {6}");
        let Basicity::NotBasis(NonBasisProof::Cycle { preperiod, period }) = basicity(&s) else {
            panic!("expected a cycle proof");
        };
        let gens = generators(&s);
        let mut states = vec![Reach::start(4)];
        for _ in 0..preperiod + period {
            let next = states.last().unwrap().step(&gens);
            states.push(next);
        }
        assert!(states[preperiod as usize] == states[(preperiod + period) as usize]);
        assert!(states.iter().all(|st| !st.covers()));
    }

    #[test]
    fn at_most_semantics() {
        // {3} ∪ 2ℕ+5 has no 0; allowing fewer summands is the same as adjoining 0
        let s = set("2N+5 U {2}");
        let exact = order(&s).unwrap().order;
        let at_most = order_at_most(&s).unwrap().order;
        assert!(at_most <= exact);
        assert_eq!(order_at_most(&Eps::naturals()).unwrap().order, 1);
    }

    #[test]
    fn certificate_sums_are_realized() {
        for text in ["2N U {1}", "6N U {2,3}", "30N U {15,10,6}", "6N U [1..5]", "7N+3 U 7N+5 U {1,4}"] {
            let s = set(text);
            let cert = order(&s).unwrap();
            let m = s.modulus();
            let bound = cert.coverage_threshold + m;
            let table = naive_sums(&s.enumerate(bound), cert.order, bound);
            for (c, &v) in cert.min_flagged_sums.iter().enumerate() {
                assert_eq!(v % m, c as u64);
                assert!(table[v as usize], "{text}: v_{c} = {v}");
                assert!(table[(v + m) as usize]);
            }
            for n in cert.coverage_threshold..=bound {
                assert!(table[n as usize], "{text}: {n} not covered");
            }
        }
    }

    #[test]
    fn effective_bound_examples() {
        assert_eq!(effective_bound(&Eps::naturals(), 1).unwrap(), 0);
        assert_eq!(effective_bound(&set("2N U {1}"), 2).unwrap(), 0);
        let s = set("6N U {2,3}");
        let n = effective_bound(&s, 4).unwrap();
        let bound = 10 * 6 * 4;
        let table = naive_sums(&s.enumerate(bound), 4, bound);
        assert!((n..=bound).all(|i| table[i as usize]));
        assert!(n == 0 || !table[(n - 1) as usize]);
        assert_eq!(
            effective_bound(&s, 3),
            Err(Error::BelowOrder { order: 4, requested: 3 })
        );
    }

    #[test]
    fn effective_bound_matches_dense_tables() {
        for text in ["2N+1 U {2}", "5N+1 U 5N+3 U {0,2}", "9N U {3,5,7}", "4N+3@11 U {0,1,6}"] {
            let s = set(text);
            let h0 = order(&s).unwrap().order;
            for h in h0..h0 + 3 {
                let n = effective_bound(&s, h).unwrap();
                let bound = n + 4 * s.modulus() + 50;
                let table = naive_sums(&s.enumerate(bound), h, bound);
                assert!((n..=bound).all(|i| table[i as usize]), "{text} h={h}");
                assert!(n == 0 || !table[(n - 1) as usize], "{text} h={h} N={n}");
            }
        }
    }

    #[test]
    fn membership_tables() {
        assert!(sumset_membership_table(&Eps::naturals(), 2, 5).iter().all(|&b| b));
        let evens = sumset_membership_table(&set("2N"), 2, 5);
        assert_eq!(evens, vec![true, false, true, false, true, false]);
        let s = set("6N U {2,3}");
        let got = sumset_membership_table(&s, 2, 12);
        let elems = s.enumerate(12);
        let mut brute = vec![false; 13];
        for &a in &elems {
            for &b in &elems {
                if a + b <= 12 {
                    brute[(a + b) as usize] = true;
                }
            }
        }
        assert_eq!(got, brute);
        let expect: Vec<u64> = vec![0, 2, 3, 4, 5, 6, 8, 9, 12];
        assert_eq!((0..=12).filter(|&i| got[i as usize]).collect::<Vec<u64>>(), expect);
    }
}
