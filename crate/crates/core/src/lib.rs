//! Ternary quadratic congruences `Q(x,y,z) = 0 mod p^n` for odd primes `p`.
//!
//! The crate solves, enumerates and counts solutions constructively and
//! checks every closed form against an independent brute-force route:
//!
//! - [`modarith`]: `Z/p^n`, valuations, Jacobi symbols, square roots.
//! - [`polyrat`]: integer polynomials and rational amplitudes `F1/F2`.
//! - [`charsum`]: additive characters and quadratic Gauss sums.
//! - [`conic`]: base points by Hensel lifting and the stratified conic
//!   parametrization.
//! - [`expsum`]: stationary-phase evaluation of complete exponential sums
//!   and the conic error sum `E(k1, k2, z; p^n)`.
//! - [`counting`]: the Gaussian-weighted count `T` by two methods, and its
//!   main term.
//! - [`quadric`]: the dual form, its invariants and primitive-zero counts.
//! - [`oracle`]: exhaustive reference computations.
//! - [`cli`]: the `quadcong` command-line front end.

pub mod charsum;
pub mod cli;
pub mod conic;
pub mod counting;
pub mod error;
pub mod expsum;
pub mod modarith;
pub mod oracle;
pub mod polyrat;
pub mod quadric;

pub use error::{Error, Result};
pub use modarith::{Order, PrimePowerModulus, Residue};

/// Master seed for every randomized suite; printed in CLI headers.
pub const MASTER_SEED: u64 = 0x5EED_0F_7E27A;

/// Proptest settings pinned to [`MASTER_SEED`], without failure files.
#[cfg(test)]
pub(crate) fn seeded_proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(MASTER_SEED),
        failure_persistence: None,
        ..Default::default()
    }
}
