//! Declarative walk descriptions and their JSON form.
//!
//! ```json
//! {"type": "wheel", "params": {"n": 8, "alpha": 0.85}}
//! {"type": "tensor", "factors": [{"type": "complete", "params": {"n": 4}}, {"type": "k2"}]}
//! {"type": "custom", "matrix": [[0, 1], [1, 0]]}
//! ```
//!
//! Sizes are vertex counts. `matrix` is a list of rows, so `matrix[i][j]`
//! is the probability of `j -> i`.

use serde::Deserialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::markov::{
    complete_bipartite, complete_graph, crown_graph, cycle_graph, directed_example8, google_matrix,
    tensor, win_cycles, TransitionMatrix,
};
use crate::qubits_for;

use super::families::{
    bipartite_segments, circulant_diagonalizer, crown_diagonalizer, directed8_segments,
    k2_diagonalizer, synth_k2, wheel_chain, wheel_segments, win_segments, CirculantColumn,
};
use super::framework::{
    assemble, assemble_partitioned, find_left_shift, left_shift, padded_column,
    partitioned_segments, segments_diagonalizer, Diagonalizer, Partition, Segment,
};
use super::prep::state_prep;

pub const DEFAULT_ALPHA: f64 = 0.85;

#[derive(Debug, Clone, PartialEq)]
pub enum WalkSpec {
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// Column `i` is `column` rotated down by `i * offset_x`.
    Circulant {
        column: Vec<f64>,
        offset_x: u64,
    },
    Bipartite {
        n1: usize,
        n2: usize,
    },
    K2,
    Crown {
        n: usize,
    },
    Tensor(Box<WalkSpec>, Box<WalkSpec>),
    Win {
        n1: usize,
        n2: usize,
    },
    Wheel {
        n: usize,
        directed: bool,
        alpha: f64,
    },
    Directed8 {
        alpha: f64,
    },
    /// Explicit chain; without subsets every vertex shares one reference.
    Custom {
        matrix: TransitionMatrix,
        subsets: Option<Vec<Vec<usize>>>,
        references: Option<Vec<usize>>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: Option<usize>,
    n1: Option<usize>,
    n2: Option<usize>,
    alpha: Option<f64>,
    offset_x: Option<u64>,
    column: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    subsets: Vec<Vec<usize>>,
    references: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    params: RawParams,
    matrix: Option<Vec<Vec<f64>>>,
    partition: Option<RawPartition>,
    factors: Option<Vec<RawSpec>>,
}

fn need(v: Option<usize>, name: &str, kind: &str) -> Result<usize> {
    v.ok_or_else(|| Error::param(format!("\"{kind}\" needs params.{name}")))
}

fn exponent(n: usize, what: &str) -> Result<usize> {
    if !crate::markov::is_power_of_two(n) {
        return Err(Error::param(format!(
            "{what} must be a power of two, got {n}"
        )));
    }
    Ok(n.trailing_zeros() as usize)
}

impl TryFrom<RawSpec> for WalkSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let p = raw.params;
        let kind = raw.kind.as_str();
        let alpha = p.alpha.unwrap_or(DEFAULT_ALPHA);
        Ok(match kind {
            "cycle" => WalkSpec::Cycle {
                n: need(p.n, "n", kind)?,
            },
            "complete" => WalkSpec::Complete {
                n: need(p.n, "n", kind)?,
            },
            "circulant" => WalkSpec::Circulant {
                column: p
                    .column
                    .ok_or_else(|| Error::param("\"circulant\" needs params.column"))?,
                offset_x: p.offset_x.unwrap_or(1),
            },
            "bipartite" => WalkSpec::Bipartite {
                n1: need(p.n1, "n1", kind)?,
                n2: need(p.n2, "n2", kind)?,
            },
            "k2" => WalkSpec::K2,
            "crown" => WalkSpec::Crown {
                n: need(p.n, "n", kind)?,
            },
            "win" => WalkSpec::Win {
                n1: need(p.n1, "n1", kind)?,
                n2: need(p.n2, "n2", kind)?,
            },
            "wheel" | "wheel_directed" => WalkSpec::Wheel {
                n: need(p.n, "n", kind)?,
                directed: kind == "wheel_directed",
                alpha,
            },
            "directed8" => WalkSpec::Directed8 { alpha },
            "tensor" => {
                let factors = raw
                    .factors
                    .ok_or_else(|| Error::param("\"tensor\" needs factors"))?;
                let [a, b]: [RawSpec; 2] = factors
                    .try_into()
                    .map_err(|_| Error::param("\"tensor\" needs exactly two factors"))?;
                WalkSpec::Tensor(Box::new(a.try_into()?), Box::new(b.try_into()?))
            }
            "custom" => {
                let rows = raw
                    .matrix
                    .ok_or_else(|| Error::param("\"custom\" needs matrix"))?;
                let (subsets, references) = match raw.partition {
                    Some(z) => (Some(z.subsets), z.references),
                    None => (None, None),
                };
                WalkSpec::Custom {
                    matrix: TransitionMatrix::from_rows(&rows)?,
                    subsets,
                    references,
                }
            }
            other => return Err(Error::param(format!("unknown walk type \"{other}\""))),
        })
    }
}

impl WalkSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn transition_matrix(&self) -> Result<TransitionMatrix> {
        match self {
            WalkSpec::Cycle { n } => cycle_graph(*n),
            WalkSpec::Complete { n } => complete_graph(*n),
            WalkSpec::Circulant { column, offset_x } => {
                let n = exponent(column.len(), "circulant column length")?;
                CirculantColumn::Amplitudes(sqrt_column(column)?).transition_matrix(n, *offset_x)
            }
            WalkSpec::Bipartite { n1, n2 } => complete_bipartite(*n1, *n2),
            WalkSpec::K2 => complete_graph(2),
            WalkSpec::Crown { n } => crown_graph(*n),
            WalkSpec::Tensor(a, b) => tensor(&a.transition_matrix()?, &b.transition_matrix()?),
            WalkSpec::Win { n1, n2 } => win_cycles(*n1, *n2),
            WalkSpec::Wheel { n, directed, alpha } => {
                wheel_chain(exponent(*n, "wheel outer size")?, *directed, *alpha)
            }
            WalkSpec::Directed8 { alpha } => google_matrix(&directed_example8(), *alpha),
            WalkSpec::Custom { matrix, .. } => Ok(matrix.clone()),
        }
    }

    /// Qubits per register of the synthesized circuit.
    pub fn register_width(&self) -> Result<usize> {
        Ok(qubits_for(self.transition_matrix()?.n()))
    }

    pub fn synthesize(&self) -> Result<Circuit> {
        match self {
            WalkSpec::K2 => Ok(synth_k2()),
            WalkSpec::Tensor(..)
            | WalkSpec::Crown { .. }
            | WalkSpec::Cycle { .. }
            | WalkSpec::Complete { .. }
            | WalkSpec::Circulant { .. } => assemble(&self.diagonalizer()?),
            _ => {
                let (n, segments) = self.segments()?;
                assemble_partitioned(n, &segments)
            }
        }
    }

    fn segments(&self) -> Result<(usize, Vec<Segment>)> {
        Ok(match self {
            WalkSpec::Bipartite { n1, n2 } => {
                let (k1, k2) = (
                    exponent(*n1, "bipartite side")?,
                    exponent(*n2, "bipartite side")?,
                );
                (k1 + 1, bipartite_segments(k1, k2)?)
            }
            WalkSpec::Win { n1, n2 } => {
                let (k1, k2) = (exponent(*n1, "cycle size")?, exponent(*n2, "cycle size")?);
                (k1 + 1, win_segments(k1, k2)?)
            }
            WalkSpec::Wheel { n, directed, alpha } => {
                let m = exponent(*n, "wheel outer size")?;
                (m + 1, wheel_segments(m, *directed, *alpha)?)
            }
            WalkSpec::Directed8 { alpha } => (3, directed8_segments(*alpha)?),
            WalkSpec::Custom {
                matrix,
                subsets,
                references,
            } => (
                qubits_for(matrix.n()),
                custom_segments(matrix, subsets.as_deref(), references.as_deref())?,
            ),
            other => {
                return Err(Error::param(format!(
                    "{other:?} is not a partitioned construction"
                )))
            }
        })
    }

    /// Block-diagonal `U` of the construction, for use as a tensor factor.
    pub fn diagonalizer(&self) -> Result<Diagonalizer> {
        match self {
            WalkSpec::Cycle { n } => {
                let k = exponent(*n, "cycle size")?;
                circulant_diagonalizer(k, &CirculantColumn::Cycle, 1)
            }
            WalkSpec::Complete { n } => {
                let k = exponent(*n, "complete graph size")?;
                circulant_diagonalizer(k, &CirculantColumn::Complete, 1)
            }
            WalkSpec::Circulant { column, offset_x } => {
                let k = exponent(column.len(), "circulant column length")?;
                circulant_diagonalizer(
                    k,
                    &CirculantColumn::Amplitudes(sqrt_column(column)?),
                    *offset_x,
                )
            }
            WalkSpec::K2 => Ok(k2_diagonalizer()),
            WalkSpec::Crown { n } => crown_diagonalizer(exponent(*n, "crown size")?),
            WalkSpec::Tensor(a, b) => {
                let second = b.transition_matrix()?.n();
                if second > 1 && !crate::markov::is_power_of_two(second) {
                    return Err(Error::param(format!(
                        "second tensor factor must have a power-of-two size, got {second}"
                    )));
                }
                Diagonalizer::tensor(&a.diagonalizer()?, &b.diagonalizer()?)
            }
            _ => {
                let (n, segments) = self.segments()?;
                segments_diagonalizer(n, &segments)
            }
        }
    }
}

fn sqrt_column(probs: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::param(format!(
            "column entry {p} is negative or not finite"
        )));
    }
    Ok(probs.iter().map(|p| p.sqrt()).collect())
}

/// Partition segments for an explicit chain. Each member's transform is
/// the smallest full-register left rotation onto the reference column.
fn custom_segments(
    p: &TransitionMatrix,
    subsets: Option<&[Vec<usize>]>,
    references: Option<&[usize]>,
) -> Result<Vec<Segment>> {
    let big_n = p.n();
    let n = qubits_for(big_n);
    let subsets: Vec<Vec<usize>> = match subsets {
        Some(s) => s.to_vec(),
        None => vec![(0..big_n).collect()],
    };
    let references: Vec<usize> = match references {
        Some(r) => r.to_vec(),
        None => subsets
            .iter()
            .map(|s| s.first().copied().unwrap_or(0))
            .collect(),
    };
    let bases = vec![0; subsets.len()];
    let z = Partition::new(big_n, subsets, references, bases)?;
    let mut transforms = Vec::new();
    let mut preps = Vec::new();
    for (x, subset) in z.subsets().iter().enumerate() {
        let reference = padded_column(p, z.references()[x], n);
        let mut ts = Vec::new();
        for &y in subset {
            let s = find_left_shift(&padded_column(p, y, n), &reference).ok_or_else(|| {
                Error::Precondition {
                    subset: x,
                    member: y,
                    detail: "column is not a cyclic rotation of the reference".into(),
                }
            })?;
            ts.push(left_shift(n, s)?);
        }
        transforms.push(ts);
        preps.push(state_prep(&reference, 0)?);
    }
    partitioned_segments(p, &z, &transforms, &preps)
}
