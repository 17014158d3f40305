use crate::error::{Error, Result};

const SEGMENT: u64 = 1 << 15;

/// All primes `<= limit`, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);
    let mut out = Vec::with_capacity(estimate_count(limit));
    let mut mark = vec![true; SEGMENT as usize];
    let mut low = 2;
    while low <= limit {
        let high = (low + SEGMENT - 1).min(limit);
        let span = (high - low + 1) as usize;
        mark[..span].iter_mut().for_each(|b| *b = true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut multiple = (low.div_ceil(p) * p).max(p * p);
            while multiple <= high {
                mark[(multiple - low) as usize] = false;
                multiple += p;
            }
        }
        out.extend((0..span).filter(|&i| mark[i]).map(|i| low + i as u64));
        low = high + 1;
    }
    out
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| is_prime[i]).map(|i| i as u64).collect()
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

/// An upper bound for the `n`-th prime (Rosser: `p_n < n(ln n + ln ln n)` for `n >= 6`).
pub fn nth_prime_upper_bound(n: usize) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// The first primes `p_1 < p_2 < ...` with running sums.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    prefix: Vec<u64>,
}

impl PrimeTable {
    /// Every prime up to `limit`.
    pub fn up_to(limit: u64) -> Self {
        let primes = primes_up_to(limit);
        let mut prefix = Vec::with_capacity(primes.len() + 1);
        prefix.push(0);
        let mut acc = 0u64;
        for &p in &primes {
            acc += p;
            prefix.push(acc);
        }
        Self { limit, primes, prefix }
    }

    /// At least the first `count` primes.
    pub fn with_count(count: usize) -> Self {
        let mut table = Self::up_to(nth_prime_upper_bound(count));
        table.primes.truncate(count);
        table.prefix.truncate(count + 1);
        table
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `p_n`, 1-based.
    pub fn nth(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Err(Error::Precondition("prime index starts at 1".into()));
        }
        self.primes.get(n - 1).copied().ok_or(Error::Capacity {
            needed: n,
            available: self.primes.len(),
        })
    }

    /// `p_1 + ... + p_n`.
    pub fn prefix_sum(&self, n: usize) -> Result<u64> {
        self.prefix.get(n).copied().ok_or(Error::Capacity {
            needed: n,
            available: self.primes.len(),
        })
    }
}

/// `p_n` for small `n`.
pub fn nth_prime(n: usize) -> Result<u64> {
    PrimeTable::with_count(n.max(1)).nth(n)
}

/// The first `n` primes.
pub fn first_primes(n: usize) -> Vec<u64> {
    PrimeTable::with_count(n).primes().to_vec()
}
