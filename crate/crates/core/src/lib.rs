//! Compiler and verifier for Szegedy quantum walks.
//!
//! A classical Markov chain with transition matrix `P` (column-stochastic,
//! entry `(i, j)` is the probability of `j -> i`) is quantized on two
//! registers as `U_walk = S (2 Pi - I)`. This crate
//!
//! - builds transition matrices for the supported chain families ([`markov`]),
//! - compiles them into gate-level circuits ([`synth`]) over a small gate
//!   IR ([`circuit`]),
//! - simulates those circuits on dense statevectors ([`simulator`]),
//! - checks every circuit against the dense walk operator ([`oracle`]), and
//! - runs quantum PageRank on the resulting walks ([`pagerank`]).
//!
//! Qubit 0 is the most significant bit of register 1. With `n` qubits per
//! register, basis state `|i, j>` is the integer `i * 2^n + j`.

pub mod circuit;
pub mod error;
pub mod markov;
pub mod oracle;
pub mod pagerank;
pub mod simulator;
pub mod synth;

pub use error::{Error, Result};

/// Number of qubits needed to index `n` states.
pub fn qubits_for(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::qubits_for;

    #[test]
    fn qubit_counts() {
        assert_eq!(qubits_for(1), 0);
        assert_eq!(qubits_for(2), 1);
        assert_eq!(qubits_for(3), 2);
        assert_eq!(qubits_for(8), 3);
        assert_eq!(qubits_for(9), 4);
        assert_eq!(qubits_for(12), 4);
    }
}
