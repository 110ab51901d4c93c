//! Transition matrices for the chain families the synthesizers understand.
//!
//! Every matrix is dense and column-stochastic: entry `(i, j)` is the
//! probability of moving from vertex `j` to vertex `i`. Nothing in this
//! crate transposes.

use ndarray::{Array2, ArrayView1};
use serde::Serialize;

use crate::error::{Error, Result};

/// Column sums must be within this of 1.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Largest supported vertex count for dense storage.
pub const MAX_VERTICES: usize = 1024;

/// Outcome of checking a candidate transition matrix.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub max_column_deviation: f64,
    pub worst_column: Option<usize>,
    /// `(row, column, value)` of every negative entry.
    pub negative_entries: Vec<(usize, usize, f64)>,
    pub non_finite_entries: usize,
    pub pass: bool,
}

/// Checks non-negativity and column normalization at [`STOCHASTIC_TOL`].
///
/// All-zero columns fail here: the projector states need every column to be
/// a probability distribution.
pub fn validate(entries: &Array2<f64>) -> ValidationReport {
    let (rows, cols) = entries.dim();
    let mut report = ValidationReport {
        n: cols,
        max_column_deviation: 0.0,
        worst_column: None,
        negative_entries: Vec::new(),
        non_finite_entries: 0,
        pass: false,
    };
    for (j, column) in entries.columns().into_iter().enumerate() {
        let mut sum = 0.0;
        for (i, &v) in column.iter().enumerate() {
            if !v.is_finite() {
                report.non_finite_entries += 1;
                continue;
            }
            if v < 0.0 {
                report.negative_entries.push((i, j, v));
            }
            sum += v;
        }
        let dev = (sum - 1.0).abs();
        if report.worst_column.is_none() || dev > report.max_column_deviation {
            report.max_column_deviation = dev;
            report.worst_column = Some(j);
        }
    }
    report.pass = rows == cols
        && cols > 0
        && report.negative_entries.is_empty()
        && report.non_finite_entries == 0
        && report.max_column_deviation <= STOCHASTIC_TOL;
    report
}

/// Dense column-stochastic matrix of a Markov chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: Array2<f64>,
}

impl TransitionMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {rows}x{cols}, expected square"
            )));
        }
        if cols > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                size: cols,
                limit: MAX_VERTICES,
            });
        }
        let report = validate(&entries);
        if !report.pass {
            return Err(Error::InvalidMatrix(describe_failure(&report)));
        }
        Ok(TransitionMatrix { entries })
    }

    /// Builds from row-major nested vectors: `rows[i][j]` is the probability
    /// of `j -> i`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("ragged or non-square rows".into()));
        }
        let entries = Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]);
        Self::new(entries)
    }

    /// Column-normalizes a nonnegative weight matrix: `P(i,j) = A(i,j) / sum_i A(i,j)`.
    pub fn from_weights(weights: &Array2<f64>) -> Result<Self> {
        let mut entries = weights.clone();
        for (j, mut column) in entries.columns_mut().into_iter().enumerate() {
            let total: f64 = column.sum();
            if total <= 0.0 {
                return Err(Error::InvalidMatrix(format!("column {j} has no weight")));
            }
            column.mapv_inplace(|v| v / total);
        }
        Self::new(entries)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, f64> {
        self.entries.column(j)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.entries)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect()
    }
}

fn describe_failure(report: &ValidationReport) -> String {
    if report.non_finite_entries > 0 {
        format!("{} non-finite entries", report.non_finite_entries)
    } else if let Some(&(i, j, v)) = report.negative_entries.first() {
        format!("negative entry {v} at ({i}, {j})")
    } else if report.n == 0 {
        "empty matrix".into()
    } else {
        format!(
            "column {} sums to 1 {:+e}",
            report.worst_column.unwrap_or(0),
            report.max_column_deviation
        )
    }
}

/// 0/1 link matrix: entry `(i, j) = 1` when there is a link `j -> i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityMatrix {
    entries: Array2<u8>,
}

impl ConnectivityMatrix {
    pub fn new(entries: Array2<u8>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols || rows == 0 {
            return Err(Error::InvalidMatrix(format!(
                "connectivity matrix is {rows}x{cols}, expected non-empty square"
            )));
        }
        if let Some(v) = entries.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidMatrix(format!(
                "connectivity entries must be 0 or 1, found {v}"
            )));
        }
        Ok(ConnectivityMatrix { entries })
    }

    pub fn from_rows(rows: &[[u8; 8]]) -> Result<Self> {
        let n = rows.len();
        Self::new(Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[[i, j]]
    }

    /// Number of links leaving vertex `j` (the column sum).
    pub fn out_degree(&self, j: usize) -> usize {
        self.entries.column(j).iter().map(|&v| v as usize).sum()
    }

    pub fn as_array(&self) -> &Array2<u8> {
        &self.entries
    }
}

pub(crate) fn is_power_of_two(n: usize) -> bool {
    n > 0 && n & (n - 1) == 0
}

/// Multiplicity of the edge `j -> i` in the cycle `C_n` counted as `R + L`.
///
/// For `n >= 3` this is the 0/1 adjacency. For `n = 2` both neighbours
/// coincide and the single edge counts twice, keeping the weighted
/// interdependent network column-normalized.
fn cycle_weight(n: usize, i: usize, j: usize) -> f64 {
    let mut w = 0.0;
    if i == (j + 1) % n {
        w += 1.0;
    }
    if i == (j + n - 1) % n {
        w += 1.0;
    }
    w
}

/// Random walk on the cycle `C_n`.
pub fn cycle_graph(n_vertices: usize) -> Result<TransitionMatrix> {
    if n_vertices < 3 {
        return Err(Error::param(format!(
            "cycle graph needs at least 3 vertices, got {n_vertices}"
        )));
    }
    let n = n_vertices;
    TransitionMatrix::from_weights(&Array2::from_shape_fn((n, n), |(i, j)| {
        cycle_weight(n, i, j)
    }))
}

/// Random walk on the complete graph `K_n`.
pub fn complete_graph(n_vertices: usize) -> Result<TransitionMatrix> {
    if n_vertices < 2 {
        return Err(Error::param(format!(
            "complete graph needs at least 2 vertices, got {n_vertices}"
        )));
    }
    let n = n_vertices;
    TransitionMatrix::from_weights(&Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            0.0
        } else {
            1.0
        }
    }))
}

/// Random walk on `K_{n1,n2}`; vertices `0..n1` form the first side.
pub fn complete_bipartite(n1: usize, n2: usize) -> Result<TransitionMatrix> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::param("bipartite sides must be non-empty"));
    }
    let n = n1 + n2;
    let entries = Array2::from_shape_fn((n, n), |(i, j)| match (i < n1, j < n1) {
        (false, true) => 1.0 / n2 as f64,
        (true, false) => 1.0 / n1 as f64,
        _ => 0.0,
    });
    TransitionMatrix::new(entries)
}

/// Crown graph: the bipartite double cover `A(K_n) ⊗ A(K_2)`.
///
/// Vertex `(v, side)` has index `2 v + side`.
pub fn crown_graph(n: usize) -> Result<TransitionMatrix> {
    if n < 4 || !is_power_of_two(n) {
        return Err(Error::param(format!(
            "crown graph size must be a power of two >= 4, got {n}"
        )));
    }
    let dim = 2 * n;
    TransitionMatrix::from_weights(&Array2::from_shape_fn((dim, dim), |(i, j)| {
        let (vi, si) = (i / 2, i % 2);
        let (vj, sj) = (j / 2, j % 2);
        if vi != vj && si != sj {
            1.0
        } else {
            0.0
        }
    }))
}

/// Connectivity of the wheel `W_n` (undirected) or `W_n'` (directed, no
/// links out of the hub). The hub is the last vertex, index `n_outer`.
pub fn wheel_graph(n_outer: usize, directed: bool) -> Result<ConnectivityMatrix> {
    if n_outer < 4 || !is_power_of_two(n_outer) {
        return Err(Error::param(format!(
            "wheel outer cycle must have 2^m vertices with m >= 2, got {n_outer}"
        )));
    }
    let n = n_outer;
    let hub = n;
    let entries = Array2::from_shape_fn((n + 1, n + 1), |(i, j)| {
        let link = if j == hub {
            !directed && i != hub
        } else if i == hub {
            true
        } else {
            cycle_weight(n, i, j) > 0.0
        };
        link as u8
    });
    ConnectivityMatrix::new(entries)
}

/// The eight-vertex directed example with vertex classes `{0..3}`, `{4,5}`, `{6,7}`.
pub fn directed_example8() -> ConnectivityMatrix {
    const ROWS: [[u8; 8]; 8] = [
        [0, 0, 0, 1, 1, 0, 0, 0],
        [1, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 1],
    ];
    ConnectivityMatrix::from_rows(&ROWS).expect("static matrix is valid")
}

/// Google matrix `G = alpha E + (1 - alpha) J / N`, where `E` is the
/// connectivity normalized by out-degree with dangling columns made uniform.
pub fn google_matrix(c: &ConnectivityMatrix, alpha: f64) -> Result<TransitionMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param(format!("damping {alpha} outside [0, 1]")));
    }
    let n = c.n();
    let nf = n as f64;
    let degrees: Vec<usize> = (0..n).map(|j| c.out_degree(j)).collect();
    let teleport = (1.0 - alpha) / nf;
    let entries = Array2::from_shape_fn((n, n), |(i, j)| {
        let patched = match degrees[j] {
            0 => 1.0 / nf,
            d => c.get(i, j) as f64 / d as f64,
        };
        alpha * patched + teleport
    });
    TransitionMatrix::new(entries)
}

/// Kronecker product; index `(i1, i2)` maps to `i1 * n2 + i2`.
pub fn tensor(p1: &TransitionMatrix, p2: &TransitionMatrix) -> Result<TransitionMatrix> {
    let (n1, n2) = (p1.n(), p2.n());
    let entries = Array2::from_shape_fn((n1 * n2, n1 * n2), |(i, j)| {
        p1.get(i / n2, j / n2) * p2.get(i % n2, j % n2)
    });
    TransitionMatrix::new(entries)
}

/// Two cycles `C_{n1}`, `C_{n2}` joined by all cross links, every non-zero
/// entry of a column weighted equally.
pub fn win_cycles(n1: usize, n2: usize) -> Result<TransitionMatrix> {
    if !is_power_of_two(n1) || !is_power_of_two(n2) || n2 < 2 || n1 < n2 {
        return Err(Error::param(format!(
            "interdependent network needs n1 = 2^k1 >= n2 = 2^k2 >= 2, got ({n1}, {n2})"
        )));
    }
    let n = n1 + n2;
    let left = 1.0 / (2 + n2) as f64;
    let right = 1.0 / (2 + n1) as f64;
    let entries = Array2::from_shape_fn((n, n), |(i, j)| match (i < n1, j < n1) {
        (true, true) => cycle_weight(n1, i, j) * left,
        (false, true) => left,
        (true, false) => right,
        (false, false) => cycle_weight(n2, i - n1, j - n1) * right,
    });
    TransitionMatrix::new(entries)
}

/// Chain whose column `i` is column 0 rotated down by `i * offset` places.
pub fn cyclic_permutation(column: &[f64], offset: usize) -> Result<TransitionMatrix> {
    let n = column.len();
    if n == 0 {
        return Err(Error::param("empty generating column"));
    }
    let entries = Array2::from_shape_fn((n, n), |(r, i)| column[(r + n - (i * offset) % n) % n]);
    TransitionMatrix::new(entries)
}
