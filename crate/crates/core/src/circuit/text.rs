//! Line-oriented circuit text.
//!
//! ```text
//! # circuit v1 width=4
//! H 0
//! X 3 @0+ @1-
//! RY 2 @0+ angle=0.6154797086703874
//! Z 1
//! Z0 1
//! SWAP 0 2
//! GPHASE -1
//! ```
//!
//! `Z` flips the sign of `|1>`, `Z0` the sign of `|0>`. `@q+` fires on
//! `|1>`, `@q-` on `|0>`. Angles use Rust's shortest round-trip float
//! formatting, so printing then parsing gives back the same circuit.

use std::fmt;

use super::{Circuit, Control, Gate, Op, Polarity, Sign};
use crate::error::{Error, Result};

const HEADER: &str = "# circuit v1 width=";

pub(super) fn write_circuit(c: &Circuit, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    writeln!(f, "{HEADER}{}", c.width)?;
    for g in &c.gates {
        match g.op {
            Op::X(q) => write!(f, "X {q}")?,
            Op::H(q) => write!(f, "H {q}")?,
            Op::Ry(q, _) => write!(f, "RY {q}")?,
            Op::PhaseFlip(q) => write!(f, "Z {q}")?,
            Op::PrimedPhaseFlip(q) => write!(f, "Z0 {q}")?,
            Op::Swap(a, b) => write!(f, "SWAP {a} {b}")?,
            Op::GlobalPhase(Sign::Minus) => write!(f, "GPHASE -1")?,
            Op::GlobalPhase(Sign::Plus) => write!(f, "GPHASE +1")?,
        }
        for c in &g.controls {
            let p = if c.polarity == Polarity::One {
                '+'
            } else {
                '-'
            };
            write!(f, " @{}{p}", c.qubit)?;
        }
        if let Op::Ry(_, t) = g.op {
            write!(f, " angle={t}")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

pub(super) fn parse_circuit(s: &str) -> Result<Circuit> {
    let mut lines = s.lines().enumerate();
    let width = loop {
        let Some((no, line)) = lines.next() else {
            return Err(Error::Parse {
                line: 0,
                msg: "missing header".into(),
            });
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let w = line.strip_prefix(HEADER).ok_or_else(|| Error::Parse {
            line: no + 1,
            msg: format!("expected header `{HEADER}<width>`"),
        })?;
        break w.trim().parse::<usize>().map_err(|e| Error::Parse {
            line: no + 1,
            msg: format!("bad width: {e}"),
        })?;
    };

    let mut circuit = Circuit::new(width);
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let gate = parse_gate(line).map_err(|msg| Error::Parse { line: no + 1, msg })?;
        circuit.push(gate).map_err(|e| Error::Parse {
            line: no + 1,
            msg: e.to_string(),
        })?;
    }
    Ok(circuit)
}

fn parse_gate(line: &str) -> std::result::Result<Gate, String> {
    let mut tokens = line.split_whitespace();
    let name = tokens.next().ok_or("empty line")?;
    let mut positional = Vec::new();
    let mut controls = Vec::new();
    let mut angle = None;
    for tok in tokens {
        if let Some(ctrl) = tok.strip_prefix('@') {
            let (q, pol) = match ctrl.as_bytes().last() {
                Some(b'+') => (&ctrl[..ctrl.len() - 1], Polarity::One),
                Some(b'-') => (&ctrl[..ctrl.len() - 1], Polarity::Zero),
                _ => return Err(format!("control `{tok}` needs a + or - suffix")),
            };
            let qubit = q
                .parse()
                .map_err(|_| format!("bad control qubit `{tok}`"))?;
            controls.push(Control {
                qubit,
                polarity: pol,
            });
        } else if let Some(a) = tok.strip_prefix("angle=") {
            angle = Some(a.parse::<f64>().map_err(|_| format!("bad angle `{a}`"))?);
        } else {
            positional.push(tok);
        }
    }

    let qubit = |k: usize| -> std::result::Result<usize, String> {
        positional
            .get(k)
            .ok_or_else(|| format!("{name} is missing an operand"))?
            .parse()
            .map_err(|_| format!("bad qubit `{}`", positional[k]))
    };
    let expect_args = |n: usize| -> std::result::Result<(), String> {
        if positional.len() == n {
            Ok(())
        } else {
            Err(format!(
                "{name} takes {n} operands, found {}",
                positional.len()
            ))
        }
    };

    let op = match name {
        "X" | "H" | "Z" | "Z0" | "RY" => {
            expect_args(1)?;
            let q = qubit(0)?;
            match name {
                "X" => Op::X(q),
                "H" => Op::H(q),
                "Z" => Op::PhaseFlip(q),
                "Z0" => Op::PrimedPhaseFlip(q),
                _ => Op::Ry(q, angle.ok_or("RY needs angle=<radians>")?),
            }
        }
        "SWAP" => {
            expect_args(2)?;
            Op::Swap(qubit(0)?, qubit(1)?)
        }
        "GPHASE" => {
            expect_args(1)?;
            match positional[0] {
                "-1" => Op::GlobalPhase(Sign::Minus),
                "+1" | "1" => Op::GlobalPhase(Sign::Plus),
                s => return Err(format!("GPHASE sign must be +1 or -1, found {s}")),
            }
        }
        other => return Err(format!("unknown gate `{other}`")),
    };
    if angle.is_some() && !matches!(op, Op::Ry(..)) {
        return Err(format!("{name} does not take an angle"));
    }
    Ok(Gate::controlled(op, controls))
}
