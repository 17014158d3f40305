//! The primorial family `A_n` (order `h_n`, `n` essential elements) and the
//! block family `X_n` (order 2, `n` essential subsets).

use crate::error::{Error, Result};
use crate::set::Eps;

use super::sieve::{first_primes, PrimeTable};

fn primorial(n: usize, cap: u64) -> Result<(u64, Vec<u64>)> {
    if n == 0 {
        return Err(Error::Precondition("family index starts at 1".into()));
    }
    let primes = first_primes(n);
    let mut q: u128 = 1;
    for &p in &primes {
        q *= p as u128;
        if q > cap as u128 {
            return Err(Error::ModulusCap { modulus: q, cap });
        }
    }
    Ok((q as u64, primes))
}

/// `A_n = p_1⋯p_n·ℕ ∪ {p_1⋯p̂_i⋯p_n}`; `A_1 = 2ℕ ∪ {1}`.
pub fn primorial_family(n: usize, cap: u64) -> Result<Eps> {
    let (q, primes) = primorial(n, cap)?;
    Eps::progression(q, 0, 0)?.union(&Eps::finite(primes.iter().map(|p| q / p)))
}

/// `X_n = p_1⋯p_n·ℕ ∪ {1, …, p_1⋯p_n}`.
pub fn block_family(n: usize, cap: u64) -> Result<Eps> {
    let (q, _) = primorial(n, cap)?;
    Eps::progression(q, 0, 0)?.union(&Eps::finite(1..q))
}

/// `h_n = p_1 + ⋯ + p_n − n + 1`, the order of `A_n`.
pub fn h_n(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("family index starts at 1".into()));
    }
    Ok(PrimeTable::with_count(n).prefix_sum(n)? - n as u64 + 1)
}
