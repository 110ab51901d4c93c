//! Dense walk operator built straight from the definitions.
//!
//! `U_walk = S (2 Pi - I)` with `Pi = sum_i |psi_i><psi_i|`,
//! `|psi_i> = |i> ⊗ |phi_i>` and `|phi_i>` the entrywise square root of
//! column `i`. This is ground truth for the synthesizers and is never on
//! a performance path.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;
use crate::simulator::StateVector;

/// Largest chain the oracle will densify (matrix dimension 4096).
pub const MAX_ORACLE_STATES: usize = 64;

#[derive(Debug, Clone)]
pub struct WalkOracle {
    n_states: usize,
    reflection: Array2<f64>,
    matrix: Array2<f64>,
}

impl WalkOracle {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    /// `N^2`, the dimension of the valid two-register space.
    pub fn valid_dim(&self) -> usize {
        self.n_states * self.n_states
    }

    /// `U_walk`.
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// `2 Pi - I`.
    pub fn reflection(&self) -> &Array2<f64> {
        &self.reflection
    }
}

/// Square root of column `i`.
pub fn column_state(p: &TransitionMatrix, i: usize) -> Result<Vec<f64>> {
    if i >= p.n() {
        return Err(Error::param(format!("column {i} outside 0..{}", p.n())));
    }
    Ok(p.column(i).iter().map(|v| v.sqrt()).collect())
}

/// Register swap on two `n`-state registers.
pub fn swap_matrix(n: usize) -> Array2<f64> {
    let mut s = Array2::zeros((n * n, n * n));
    for i in 0..n {
        for j in 0..n {
            s[[i * n + j, j * n + i]] = 1.0;
        }
    }
    s
}

pub fn walk_operator(p: &TransitionMatrix) -> Result<WalkOracle> {
    let n = p.n();
    if n > MAX_ORACLE_STATES {
        return Err(Error::TooLarge {
            what: "oracle vertex count",
            size: n,
            limit: MAX_ORACLE_STATES,
        });
    }
    let dim = n * n;
    let mut reflection = Array2::zeros((dim, dim));
    for i in 0..n {
        let phi = column_state(p, i)?;
        for j in 0..n {
            for k in 0..n {
                reflection[[i * n + j, i * n + k]] = 2.0 * phi[j] * phi[k];
            }
        }
    }
    for d in 0..dim {
        reflection[[d, d]] -= 1.0;
    }
    // S is a permutation: row (a, b) of S R is row (b, a) of R
    let mut matrix = Array2::zeros((dim, dim));
    for a in 0..n {
        for b in 0..n {
            matrix.row_mut(a * n + b).assign(&reflection.row(b * n + a));
        }
    }
    Ok(WalkOracle {
        n_states: n,
        reflection,
        matrix,
    })
}

/// Places the oracle on `n_qubits` per register, acting as identity on any
/// basis state with an index `>= N`.
pub fn embed(oracle: &WalkOracle, n_qubits: usize) -> Result<Array2<f64>> {
    let n = oracle.n_states;
    if n_qubits >= usize::BITS as usize / 2 || (1usize << n_qubits) < n {
        return Err(Error::param(format!(
            "{n_qubits} qubits per register cannot hold {n} states"
        )));
    }
    let reg = 1usize << n_qubits;
    let dim = reg * reg;
    let mut out = Array2::zeros((dim, dim));
    let valid = |k: usize| k / reg < n && k % reg < n;
    let compact = |k: usize| (k / reg) * n + k % reg;
    for col in 0..dim {
        if !valid(col) {
            out[[col, col]] = 1.0;
            continue;
        }
        for row in (0..dim).filter(|&r| valid(r)) {
            out[[row, col]] = oracle.matrix[[compact(row), compact(col)]];
        }
    }
    Ok(out)
}

/// `N^{-1/2} sum_i |i> ⊗ |phi_i>` on the compact `N^2` space.
pub fn initial_superposition(p: &TransitionMatrix) -> Vec<f64> {
    let n = p.n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut psi = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            psi[i * n + j] = scale * p.get(j, i).sqrt();
        }
    }
    psi
}

/// [`initial_superposition`] embedded on `n_qubits` per register.
pub fn initial_state(p: &TransitionMatrix, n_qubits: usize) -> Result<StateVector> {
    let n = p.n();
    if (1usize << n_qubits) < n {
        return Err(Error::param(format!(
            "{n_qubits} qubits per register cannot hold {n} states"
        )));
    }
    let reg = 1usize << n_qubits;
    let compact = initial_superposition(p);
    let mut amps = vec![0.0; reg * reg];
    for i in 0..n {
        for j in 0..n {
            amps[i * reg + j] = compact[i * n + j];
        }
    }
    StateVector::from_real(&amps)
}
