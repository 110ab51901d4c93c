//! Circuit-versus-oracle comparison on the valid subspace.

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::markov::TransitionMatrix;
use crate::oracle::walk_operator;
use crate::qubits_for;
use crate::simulator::{apply, StateVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n_states: usize,
    pub n_qubits: usize,
    /// Largest `|U_circuit - U_oracle|` entry over valid columns.
    pub max_deviation: f64,
    /// Largest norm any valid column leaves outside the valid subspace.
    pub leakage: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn verify(circuit: &Circuit, p: &TransitionMatrix) -> Result<VerifyReport> {
    verify_with_tolerance(circuit, p, DEFAULT_TOLERANCE)
}

/// Simulates every valid basis column `|i, j>` and compares it with the
/// matching oracle column.
pub fn verify_with_tolerance(
    circuit: &Circuit,
    p: &TransitionMatrix,
    tolerance: f64,
) -> Result<VerifyReport> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::param(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let big_n = p.n();
    let n = qubits_for(big_n);
    if circuit.width() != 2 * n {
        return Err(Error::WidthMismatch {
            expected: 2 * n,
            found: circuit.width(),
        });
    }
    let oracle = walk_operator(p)?;
    let u = oracle.matrix();
    let reg = 1usize << n;

    let mut max_deviation: f64 = 0.0;
    let mut leakage: f64 = 0.0;
    for i in 0..big_n {
        for j in 0..big_n {
            let out = apply(circuit, &StateVector::basis(2 * n, i * reg + j)?)?;
            let col = i * big_n + j;
            let mut outside = 0.0;
            for (k, a) in out.amplitudes().iter().enumerate() {
                let (r1, r2) = (k / reg, k % reg);
                if r1 < big_n && r2 < big_n {
                    let expected = u[[r1 * big_n + r2, col]];
                    max_deviation = max_deviation.max((a - expected).norm());
                } else {
                    outside += a.norm_sqr();
                    max_deviation = max_deviation.max(a.norm());
                }
            }
            leakage = leakage.max(outside.sqrt());
        }
    }
    Ok(VerifyReport {
        n_states: big_n,
        n_qubits: n,
        max_deviation,
        leakage,
        tolerance,
        pass: max_deviation <= tolerance && leakage <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Op};
    use crate::markov::{complete_graph, cycle_graph};
    use crate::synth::{synth_circulant, synth_k2, CirculantColumn};

    #[test]
    fn k2_passes() {
        let r = verify(&synth_k2(), &complete_graph(2).unwrap()).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.n_qubits, 1);
    }

    #[test]
    fn dropped_global_phase_fails() {
        let mut gates = synth_k2().gates().to_vec();
        gates[1] = Gate::new(Op::PhaseFlip(1));
        let c = Circuit::from_gates(2, gates).unwrap();
        let r = verify(&c, &complete_graph(2).unwrap()).unwrap();
        assert!(!r.pass);
        assert!((r.max_deviation - 2.0).abs() < 1e-15);
    }

    #[test]
    fn width_and_tolerance_checked() {
        let c8 = synth_circulant(3, &CirculantColumn::Cycle, 1).unwrap();
        assert!(matches!(
            verify(&c8, &cycle_graph(4).unwrap()),
            Err(Error::WidthMismatch {
                expected: 4,
                found: 6
            })
        ));
        assert!(verify_with_tolerance(&c8, &cycle_graph(8).unwrap(), 0.0).is_err());
    }

    #[test]
    fn cycle_passes_and_serializes() {
        let c8 = synth_circulant(3, &CirculantColumn::Cycle, 1).unwrap();
        let r = verify(&c8, &cycle_graph(8).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["pass"], true);
        assert!(json["max_deviation"].as_f64().unwrap() < 1e-10);
    }
}
