//! Gate-level IR on two equal registers.
//!
//! Gates are listed in time order. `compose(a, b)` runs `a` first, so its
//! unitary is `U_b * U_a`. Multi-controlled gates are first-class; their
//! decomposition cost only shows up in [`GateCount`].

mod qasm;
mod text;

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use qasm::to_qasm;

/// Which basis value of a control qubit enables the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires when the control is `|1>`.
    One,
    /// Fires when the control is `|0>`.
    Zero,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::One
        } else {
            Polarity::Zero
        }
    }

    pub fn bit(self) -> bool {
        self == Polarity::One
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::One,
        }
    }

    pub fn off(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Zero,
        }
    }
}

/// Controls that match `value` on `qubits`, most significant bit first.
pub fn pattern(qubits: &[usize], value: usize) -> Vec<Control> {
    let w = qubits.len();
    qubits
        .iter()
        .enumerate()
        .map(|(k, &q)| Control {
            qubit: q,
            polarity: Polarity::from_bit((value >> (w - 1 - k)) & 1 == 1),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Gate action without its controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    X(usize),
    H(usize),
    /// `[[cos t, -sin t], [sin t, cos t]]`, so `Ry(t)|0> = cos t |0> + sin t |1>`.
    Ry(usize, f64),
    /// `-1` on `|1>`.
    PhaseFlip(usize),
    /// `-1` on `|0>`.
    PrimedPhaseFlip(usize),
    Swap(usize, usize),
    GlobalPhase(Sign),
}

impl Op {
    pub fn operands(&self) -> Vec<usize> {
        match *self {
            Op::X(q) | Op::H(q) | Op::Ry(q, _) | Op::PhaseFlip(q) | Op::PrimedPhaseFlip(q) => {
                vec![q]
            }
            Op::Swap(a, b) => vec![a, b],
            Op::GlobalPhase(_) => vec![],
        }
    }

    pub fn inverse(&self) -> Op {
        match *self {
            Op::Ry(q, t) => Op::Ry(q, -t),
            other => other,
        }
    }

    fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Op {
        match *self {
            Op::X(q) => Op::X(f(q)),
            Op::H(q) => Op::H(f(q)),
            Op::Ry(q, t) => Op::Ry(f(q), t),
            Op::PhaseFlip(q) => Op::PhaseFlip(f(q)),
            Op::PrimedPhaseFlip(q) => Op::PrimedPhaseFlip(f(q)),
            Op::Swap(a, b) => Op::Swap(f(a), f(b)),
            Op::GlobalPhase(s) => Op::GlobalPhase(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub op: Op,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(op: Op) -> Self {
        Gate {
            op,
            controls: Vec::new(),
        }
    }

    pub fn controlled(op: Op, controls: Vec<Control>) -> Self {
        Gate { op, controls }
    }

    pub fn with(mut self, control: Control) -> Self {
        self.controls.push(control);
        self
    }

    pub fn with_all(mut self, controls: impl IntoIterator<Item = Control>) -> Self {
        self.controls.extend(controls);
        self
    }

    pub fn x(q: usize) -> Self {
        Gate::new(Op::X(q))
    }

    pub fn h(q: usize) -> Self {
        Gate::new(Op::H(q))
    }

    pub fn ry(q: usize, angle: f64) -> Self {
        Gate::new(Op::Ry(q, angle))
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(Op::Swap(a, b))
    }

    /// `I - 2|v><v|` on the single qubit `q` for `v = bit`.
    pub fn flip_on(q: usize, bit: bool) -> Self {
        Gate::new(if bit {
            Op::PhaseFlip(q)
        } else {
            Op::PrimedPhaseFlip(q)
        })
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            op: self.op.inverse(),
            controls: self.controls.clone(),
        }
    }

    /// Checks indices, operand/control overlap and angle finiteness.
    pub fn check(&self, width: usize) -> Result<()> {
        let operands = self.op.operands();
        let mut seen = HashSet::new();
        for &q in &operands {
            if q >= width {
                return Err(Error::InvalidGate(format!(
                    "qubit {q} outside width {width}"
                )));
            }
            if !seen.insert(q) {
                return Err(Error::InvalidGate(format!("qubit {q} used twice")));
            }
        }
        for c in &self.controls {
            if c.qubit >= width {
                return Err(Error::InvalidGate(format!(
                    "control {} outside width {width}",
                    c.qubit
                )));
            }
            if !seen.insert(c.qubit) {
                return Err(Error::InvalidGate(format!(
                    "control {} overlaps an operand or another control",
                    c.qubit
                )));
            }
        }
        if let Op::Ry(_, t) = self.op {
            if !t.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {t}")));
            }
        }
        if matches!(self.op, Op::GlobalPhase(_)) && !self.controls.is_empty() {
            return Err(Error::InvalidGate(
                "global phase cannot carry controls".into(),
            ));
        }
        Ok(())
    }

    /// Two-qubit-equivalent cost: `2(k - 1) + 1` for `k >= 2` controls, else 1.
    pub fn decomposed_cost(&self) -> usize {
        match self.controls.len() {
            0 | 1 => 1,
            k => 2 * (k - 1) + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateCount {
    pub total: usize,
    pub decomposed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(width: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Appends `other` with its qubit `q` relabelled to `mapping[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, mapping: &[usize]) -> Result<()> {
        if mapping.len() != other.width {
            return Err(Error::WidthMismatch {
                expected: other.width,
                found: mapping.len(),
            });
        }
        for g in &other.gates {
            let mapped = Gate {
                op: g.op.map_qubits(|q| mapping[q]),
                controls: g
                    .controls
                    .iter()
                    .map(|c| Control {
                        qubit: mapping[c.qubit],
                        polarity: c.polarity,
                    })
                    .collect(),
            };
            self.push(mapped)?;
        }
        Ok(())
    }

    pub fn dagger(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn gate_count(&self) -> GateCount {
        GateCount {
            total: self.gates.len(),
            decomposed: self.gates.iter().map(Gate::decomposed_cost).sum(),
        }
    }
}

/// `a` followed by `b`.
pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
    let mut out = a.clone();
    out.append(b)?;
    Ok(out)
}

pub fn dagger(c: &Circuit) -> Circuit {
    c.dagger()
}

/// Adds `controls` to every gate of `c`.
///
/// A `GlobalPhase(-1)` turns into a phase flip on the control pattern: the
/// first control becomes the flipped qubit and the rest stay controls.
/// `GlobalPhase(+1)` is dropped.
pub fn with_controls(c: &Circuit, controls: &[Control]) -> Result<Circuit> {
    let mut out = Circuit::new(c.width);
    for g in &c.gates {
        match g.op {
            Op::GlobalPhase(Sign::Plus) => {}
            Op::GlobalPhase(Sign::Minus) => {
                if let Some((first, rest)) = controls.split_first() {
                    out.push(Gate::controlled(
                        Gate::flip_on(first.qubit, first.polarity.bit()).op,
                        rest.to_vec(),
                    ))?;
                } else {
                    out.push(g.clone())?;
                }
            }
            _ => {
                let mut all = controls.to_vec();
                all.extend(g.controls.iter().copied());
                out.push(Gate::controlled(g.op, all))?;
            }
        }
    }
    Ok(out)
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_circuit(self, f)
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        text::parse_circuit(s)
    }
}
