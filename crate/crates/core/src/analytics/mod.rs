//! Prime tables, the two witness families, and the analytic side of the
//! essential-count bounds.

pub mod bounds;
pub mod families;
pub mod sieve;

pub use bounds::{
    alpha_threshold, c_coefficient, essential_count_constant, sweep_c, verify_prime_sum_bounds,
    PrimeSumReport, SweepReport, SweepRow,
};
pub use families::{block_family, h_n, primorial_family};
pub use sieve::{first_primes, nth_prime, primes_up_to, PrimeTable};
