//! Number-theoretic primitives: sieves, Möbius, squarefree parts, the
//! Kronecker symbol, fundamental discriminants and the auxiliary weights.

mod discriminant;
mod kronecker;
mod sieve;
mod weights;

pub use discriminant::{
    enumerate_discriminants, is_fundamental, squarefree_flags, FundamentalDiscriminant,
};
pub use kronecker::{jacobi, kronecker};
pub use sieve::{
    is_prime, is_square, is_squarefree, primes_up_to, trial_factorize, FactorTable,
    SquarefreeDecomposition, DEFAULT_MEMORY_BUDGET,
};
pub use weights::{g1_weight, h_of_primes, h_of_primes_exact};
