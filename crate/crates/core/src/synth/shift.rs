//! Modular shifts `|j> -> |j -/+ a mod 2^w>` built from multi-controlled X
//! cascades, and the register-controlled shift transform
//! `sum_i |i><i| ⊗ L^{i x}`.

use crate::circuit::{Circuit, Control, Gate, Polarity};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Subtract: the left rotation `L`.
    Left,
    /// Add: the right rotation `R`.
    Right,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// `+1` (or `-1`) on `register`, MSB first. Bit `t` flips when every less
/// significant bit is 1 (increment) or 0 (decrement).
fn append_unit_step(
    c: &mut Circuit,
    register: &[usize],
    direction: Direction,
    controls: &[Control],
) -> Result<()> {
    let carry = match direction {
        Direction::Right => Polarity::One,
        Direction::Left => Polarity::Zero,
    };
    for t in 0..register.len() {
        let mut ctrl = controls.to_vec();
        ctrl.extend(register[t + 1..].iter().map(|&q| Control {
            qubit: q,
            polarity: carry,
        }));
        c.push(Gate::x(register[t]).with_all(ctrl))?;
    }
    Ok(())
}

/// Appends a shift by `amount` on `register` (MSB first) under `controls`.
///
/// Each set bit `k` of `amount` is a unit step on the top `w - k` qubits.
pub(crate) fn append_shift(
    c: &mut Circuit,
    register: &[usize],
    amount: u64,
    direction: Direction,
    controls: &[Control],
) -> Result<()> {
    let w = register.len();
    if w == 0 {
        return Ok(());
    }
    let amount = if w >= 64 {
        amount
    } else {
        amount & ((1u64 << w) - 1)
    };
    for k in 0..w {
        if (amount >> k) & 1 == 1 {
            append_unit_step(c, &register[..w - k], direction, controls)?;
        }
    }
    Ok(())
}

/// For each qubit of `source` (MSB first, weight `2^k`), a shift of
/// `x * 2^k` on `target` controlled on that qubit plus `extra`.
pub(crate) fn append_controlled_shift(
    c: &mut Circuit,
    source: &[usize],
    target: &[usize],
    offset_x: u64,
    direction: Direction,
    extra: &[Control],
) -> Result<()> {
    let w = target.len();
    if w == 0 {
        return Ok(());
    }
    let modulus_mask = if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
    for (pos, &q) in source.iter().enumerate() {
        let k = source.len() - 1 - pos;
        if k >= 64 {
            continue;
        }
        let amount = (offset_x & modulus_mask).wrapping_shl(k as u32) & modulus_mask;
        if amount == 0 {
            continue;
        }
        let mut ctrl = extra.to_vec();
        ctrl.push(Control::on(q));
        append_shift(c, target, amount, direction, &ctrl)?;
    }
    Ok(())
}

/// Shift of `amount` on qubits `0..n`. Controls may name qubits `>= n`;
/// the circuit is widened to hold them.
pub fn shift_circuit(
    n: usize,
    amount: u64,
    direction: Direction,
    controls: &[Control],
) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::param("shift register needs at least one qubit"));
    }
    let width = controls.iter().map(|c| c.qubit + 1).fold(n, usize::max);
    let mut c = Circuit::new(width);
    let register: Vec<usize> = (0..n).collect();
    append_shift(&mut c, &register, amount, direction, controls)?;
    Ok(c)
}

/// `sum_i |i><i| ⊗ L^{i x}` (or `R^{i x}`) on two `n`-qubit registers.
pub fn controlled_shift_transform(
    n: usize,
    offset_x: u64,
    direction: Direction,
) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::param(
            "shift transform needs at least one qubit per register",
        ));
    }
    let mut c = Circuit::new(2 * n);
    let reg1: Vec<usize> = (0..n).collect();
    let reg2: Vec<usize> = (n..2 * n).collect();
    append_controlled_shift(&mut c, &reg1, &reg2, offset_x, direction, &[])?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{apply, StateVector};

    /// Basis index reached from `k`, asserting the image is a basis state.
    fn image(c: &Circuit, k: usize) -> usize {
        let out = apply(c, &StateVector::basis(c.width(), k).unwrap()).unwrap();
        let hits: Vec<usize> = out
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.5)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(hits.len(), 1);
        assert!((out.amplitudes()[hits[0]].re - 1.0).abs() < 1e-15);
        hits[0]
    }

    #[test]
    fn decrement_wraps() {
        let c = shift_circuit(3, 1, Direction::Left, &[]).unwrap();
        assert_eq!(image(&c, 0), 7);
        assert_eq!(image(&c, 5), 4);
    }

    #[test]
    fn zero_shift_is_empty() {
        assert!(shift_circuit(3, 0, Direction::Left, &[])
            .unwrap()
            .is_empty());
        assert!(controlled_shift_transform(3, 0, Direction::Left)
            .unwrap()
            .is_empty());
        assert!(shift_circuit(3, 8, Direction::Right, &[])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn add_five_mod_sixteen() {
        let c = shift_circuit(4, 5, Direction::Right, &[]).unwrap();
        for k in 0..16 {
            assert_eq!(image(&c, k), (k + 5) % 16);
        }
    }

    #[test]
    fn controls_gate_the_shift() {
        // register on qubits 0..2, control on qubit 2 with zero polarity
        let c = shift_circuit(2, 1, Direction::Right, &[Control::off(2)]).unwrap();
        assert_eq!(c.width(), 3);
        assert_eq!(image(&c, 0b010), 0b100);
        assert_eq!(image(&c, 0b011), 0b011);
    }

    #[test]
    fn transform_subtracts_register_one() {
        let c = controlled_shift_transform(2, 1, Direction::Left).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(image(&c, i * 4 + j), i * 4 + (j + 4 - i) % 4);
            }
        }
        let c = controlled_shift_transform(3, 2, Direction::Left).unwrap();
        assert_eq!(image(&c, 3 * 8 + 5), 3 * 8 + 7);
    }
}
