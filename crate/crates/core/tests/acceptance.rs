//! One PASS/FAIL line per acceptance criterion.
//!
//! Two criteria fail on documented counterexamples (the first prime-sum
//! inequality on a middle range of `n`, and the δ bound on tiny prescribed
//! bases). They are printed as FAIL; the process exits non-zero only if a
//! criterion fails in any other way, or if those counterexamples change.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use additive_basis::analytics::{
    block_family, essential_count_constant, first_primes, h_n, primes_up_to, primorial_family,
    sweep_c, verify_prime_sum_bounds,
};
use additive_basis::dessentialize::{
    audit_elementary_order_bounds, construct_prescribed, delta_bound, dessentialize_elementary,
    DEFAULT_PRESCRIBED_CAP,
};
use additive_basis::essentials::essential_elements;
use additive_basis::oracle::{empirical_profile, naive_order_of, OracleOutcome};
use additive_basis::order::order;
use additive_basis::progression::essential_subsets;
use additive_basis::report::Value;
use additive_basis::suite::{run_oracle_check, run_property_suite, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1_000_000;
/// Agreement with the published constant, 10 significant digits.
const CONSTANT_TOLERANCE: f64 = 5e-11;

struct Outcome {
    pass: bool,
    detail: String,
    /// The failure matches a documented counterexample exactly.
    documented: bool,
}

fn pass(detail: String) -> Outcome {
    Outcome { pass: true, detail, documented: false }
}

fn fail(detail: String) -> Outcome {
    Outcome { pass: false, detail, documented: false }
}

fn within(limit: Duration, started: Instant) -> (bool, String) {
    let t = started.elapsed();
    (t < limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn primorial_orders() -> Outcome {
    let start = Instant::now();
    let mut orders = Vec::new();
    for n in 1..=5 {
        let a = primorial_family(n, CAP).unwrap();
        let exact = order(&a).unwrap().order;
        let formula = first_primes(n).iter().sum::<u64>() - n as u64 + 1;
        let naive = naive_order_of(&a, 30);
        if exact as u64 != formula || naive != OracleOutcome::Order(exact) {
            return fail(format!("A_{n}: engine {exact}, formula {formula}, oracle {naive:?}"));
        }
        orders.push(exact);
    }
    let (fast, time) = within(Duration::from_secs(10), start);
    let ok = orders == [2, 4, 8, 14, 24] && fast;
    let detail = format!("orders {orders:?}, oracle agrees, {time}");
    if ok { pass(detail) } else { fail(detail) }
}

fn primorial_essentials() -> Outcome {
    for n in 1..=5 {
        let a = primorial_family(n, CAP).unwrap();
        let primes = first_primes(n);
        let q: u64 = primes.iter().product();
        let ess = essential_elements(&a).unwrap();
        let mut pairs: Vec<(u64, u64)> = ess.elements.iter().copied().zip(ess.divisors.iter().copied()).collect();
        pairs.sort_unstable();
        let mut expected: Vec<(u64, u64)> = primes.iter().map(|&p| (q / p, p)).collect();
        expected.sort_unstable();
        if pairs != expected {
            return fail(format!("A_{n}: essential pairs {pairs:?}, expected {expected:?}"));
        }
        let r = audit_elementary_order_bounds(&a).unwrap();
        let ints = ["lower", "ord_elementary", "upper"].map(|k| r.get(k));
        let equal = matches!(ints, [Some(Value::Int(l)), Some(Value::Int(o)), Some(Value::Int(u))] if l == o && o == u);
        if !r.holds() || !equal || ess.module != q {
            return fail(format!("A_{n}: elementary bounds {ints:?}, q = {q}, m = {}", ess.module));
        }
    }
    pass("elements p_1..p_n / p_i with d_i = p_i; bounds exact and equal (n <= 5)".into())
}

fn block_parts() -> Outcome {
    let start = Instant::now();
    for n in 1..=3 {
        let x = block_family(n, CAP).unwrap();
        let primes = first_primes(n);
        let q: u64 = primes.iter().product();
        let ord = order(&x).unwrap().order;
        let mut parts = essential_subsets(&x).unwrap();
        parts.sort();
        let mut expected: Vec<Vec<u64>> =
            primes.iter().map(|&p| (1..=q).filter(|i| i % p != 0).collect()).collect();
        expected.sort();
        if ord != 2 || parts != expected {
            return fail(format!("X_{n}: order {ord}, {} parts", parts.len()));
        }
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    let detail = format!("order 2 with n parts for n <= 3, {time}");
    if fast { pass(detail) } else { fail(detail) }
}

fn constant() -> Outcome {
    let c = essential_count_constant();
    let h30 = h_n(30).unwrap();
    let detail = format!("C = {c:.12}, h_30 = {h30}, tolerance {CONSTANT_TOLERANCE:e}");
    if (c - 2.0572841285).abs() < CONSTANT_TOLERANCE && h30 == 1564 { pass(detail) } else { fail(detail) }
}

fn sweep() -> Outcome {
    let start = Instant::now();
    let r = sweep_c(127_042).unwrap();
    let (fast, time) = within(Duration::from_secs(60), start);
    let detail = format!(
        "argmax {}, ties {:?}, {} exceedances, least margin {:.3e} at n = {}, {time}",
        r.argmax,
        r.ties,
        r.exceedances.len(),
        r.min_margin,
        r.min_margin_at
    );
    if r.holds() && r.argmax == 30 && fast { pass(detail) } else { fail(detail) }
}

/// Splits a sorted list into maximal runs of consecutive integers.
fn runs(xs: &[u64]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == x => *hi = x,
            _ => out.push((x, x)),
        }
    }
    out
}

fn prime_sums() -> Outcome {
    let start = Instant::now();
    let r = verify_prime_sum_bounds(2, 100_000).unwrap();
    let (fast, time) = within(Duration::from_secs(30), start);
    let first = runs(&r.first_violations);
    let detail = format!(
        "first inequality violated on {first:?}; second {}; {time}",
        if r.second_holds { "holds" } else { "violated" }
    );
    if r.holds() && fast {
        return pass(detail);
    }
    let documented = r.second_holds && fast && first == [(4692, 4811), (5826, 100_000)];
    Outcome { pass: false, detail, documented }
}

fn property_suite() -> Outcome {
    let r = run_property_suite(DEFAULT_SEED, 500);
    let failing: Vec<String> = r
        .tallies
        .iter()
        .filter(|t| t.failed > 0)
        .map(|t| format!("{} ({}/{}, first {})", t.property, t.failed, t.checked, t.first_failure.as_deref().unwrap_or("?")))
        .collect();
    let detail = format!("{} instances, {} properties, seed {}; failing: {failing:?}", r.instances, r.tallies.len(), r.seed);
    if r.holds() { pass(detail) } else { fail(detail) }
}

fn oracle_agreement() -> Outcome {
    let r = run_oracle_check(DEFAULT_SEED, 500);
    let detail = format!(
        "{} instances: order {} agree / {} inconclusive, subsets {} agree / {} inconclusive, profiles {} agree, disagreements {:?}",
        r.instances,
        r.order_agreements,
        r.order_inconclusive,
        r.subset_agreements,
        r.subset_inconclusive,
        r.profile_agreements,
        r.disagreements
    );
    if r.holds() { pass(detail) } else { fail(detail) }
}

fn empirical() -> Outcome {
    let bound = 1_000_000;
    let p = empirical_profile(primes_up_to(bound), bound).unwrap();
    let sq = empirical_profile((0..=1000u64).map(|k| k * k), bound).unwrap();
    let ok = p.ratio == 2 && p.offset == 1 && p.reservoir == [2] && sq.ratio == 1 && sq.reservoir.is_empty();
    let detail = format!(
        "primes: ratio {}, reservoir {:?}; squares: ratio {}, reservoir {:?}",
        p.ratio, p.reservoir, sq.ratio, sq.reservoir
    );
    if ok { pass(detail) } else { fail(detail) }
}

fn prescribed() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut mismatched = Vec::new();
    let mut over_bound = Vec::new();
    for _ in 0..20 {
        let len = rng.gen_range(1..=4);
        let counts: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
        let a = construct_prescribed(&counts, DEFAULT_PRESCRIBED_CAP).unwrap();
        let trace = dessentialize_elementary(&a).unwrap();
        let mut expected = counts.clone();
        expected.push(0);
        if trace.counts() != expected || trace.delta != counts.len() {
            mismatched.push(counts.clone());
        }
        let b = delta_bound(&a).unwrap();
        if trace.delta as f64 > b.value {
            over_bound.push(format!("{counts:?}: delta {} > {:.3} (h = {}, N = {})", trace.delta, b.value, b.order, b.effective_bound));
        }
    }
    over_bound.dedup();
    let detail = format!("20 seeded vectors; count mismatches {mismatched:?}; delta over bound {over_bound:?}");
    if mismatched.is_empty() && over_bound.is_empty() {
        return pass(detail);
    }
    let documented = mismatched.is_empty()
        && over_bound.iter().all(|v| v.starts_with("[1, 1]") || v.starts_with("[1, 2, 1]") || v.starts_with("[2, 1, 1]"));
    Outcome { pass: false, detail, documented }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "primorial orders", primorial_orders),
        (2, "primorial essential elements", primorial_essentials),
        (3, "block family parts", block_parts),
        (4, "essential count constant", constant),
        (5, "constant sweep", sweep),
        (6, "prime-sum inequalities", prime_sums),
        (7, "property suite", property_suite),
        (8, "oracle agreement", oracle_agreement),
        (9, "empirical profiles", empirical),
        (10, "prescribed essential counts", prescribed),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.documented { " [documented counterexample]" } else { "" };
        println!("criterion {id:>2} {verdict} {name}: {}{note}", o.detail);
        if !o.pass && !o.documented {
            unexpected += 1;
        }
    }
    if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
