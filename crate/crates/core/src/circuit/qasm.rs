//! Export to an OpenQASM 3 flavoured listing.
//!
//! Controls become `ctrl @` / `negctrl @` modifiers in the order they are
//! stored. Our `Ry(t)` rotates by `t` in the `cos t, sin t` sense, which is
//! the standard `ry(2 t)`. The primed phase flip is written as `x; z; x`
//! under the same controls. This is an export only; there is no parser.

use std::fmt::Write;

use super::{Circuit, Gate, Op, Polarity, Sign};

pub fn to_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let _ = writeln!(out, "qubit[{}] q;", c.width());
    for g in c.gates() {
        match g.op {
            Op::GlobalPhase(Sign::Minus) => out.push_str("gphase(pi);\n"),
            Op::GlobalPhase(Sign::Plus) => {}
            Op::PrimedPhaseFlip(t) => {
                for name in ["x", "z", "x"] {
                    let _ = writeln!(out, "{}{name} {};", modifiers(g), operands(g, &[t]));
                }
            }
            Op::X(t) => line(&mut out, g, "x", &[t]),
            Op::H(t) => line(&mut out, g, "h", &[t]),
            Op::PhaseFlip(t) => line(&mut out, g, "z", &[t]),
            Op::Ry(t, angle) => line(&mut out, g, &format!("ry({})", 2.0 * angle), &[t]),
            Op::Swap(a, b) => line(&mut out, g, "swap", &[a, b]),
        }
    }
    out
}

fn line(out: &mut String, g: &Gate, name: &str, targets: &[usize]) {
    let _ = writeln!(out, "{}{name} {};", modifiers(g), operands(g, targets));
}

fn modifiers(g: &Gate) -> String {
    g.controls
        .iter()
        .map(|c| {
            if c.polarity == Polarity::One {
                "ctrl @ "
            } else {
                "negctrl @ "
            }
        })
        .collect()
}

fn operands(g: &Gate, targets: &[usize]) -> String {
    g.controls
        .iter()
        .map(|c| c.qubit)
        .chain(targets.iter().copied())
        .map(|q| format!("q[{q}]"))
        .collect::<Vec<_>>()
        .join(", ")
}
