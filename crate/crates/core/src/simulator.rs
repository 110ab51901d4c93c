//! Dense statevector execution and unitary extraction.

use std::io::Write;

use ndarray::Array2;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, Op, Polarity, Sign};
use crate::error::{Error, Result};

/// Widest circuit [`unitary_of`] will extract.
pub const MAX_UNITARY_WIDTH: usize = 12;

/// Widest statevector we allocate.
pub const MAX_STATE_WIDTH: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Result<Self> {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Result<Self> {
        if width > MAX_STATE_WIDTH {
            return Err(Error::TooLarge {
                what: "state width",
                size: width,
                limit: MAX_STATE_WIDTH,
            });
        }
        let dim = 1usize << width;
        if index >= dim {
            return Err(Error::param(format!(
                "basis index {index} outside dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { width, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::param(format!(
                "state length {dim} is not a power of two"
            )));
        }
        let width = dim.trailing_zeros() as usize;
        Ok(StateVector { width, amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Runs `c` on this state in place.
    pub fn evolve(&mut self, c: &Circuit) -> Result<()> {
        if c.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: c.width(),
            });
        }
        for g in c.gates() {
            apply_gate(g, self.width, &mut self.amplitudes);
        }
        Ok(())
    }

    /// Writes `index,re,im` rows after a version comment.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        writeln!(out, "# statevector v1 width={}", self.width)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "re", "im"])?;
        for (k, a) in self.amplitudes.iter().enumerate() {
            w.write_record([k.to_string(), a.re.to_string(), a.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Returns `unitary(c) * s`, computed gate by gate.
pub fn apply(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    out.evolve(c)?;
    Ok(out)
}

/// Full unitary; column `k` is the image of basis state `k`.
pub fn unitary_of(c: &Circuit) -> Result<Array2<Complex64>> {
    let width = c.width();
    if width > MAX_UNITARY_WIDTH {
        return Err(Error::TooLarge {
            what: "unitary width",
            size: width,
            limit: MAX_UNITARY_WIDTH,
        });
    }
    let dim = 1usize << width;
    let mut u = Array2::zeros((dim, dim));
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..dim {
        column
            .iter_mut()
            .for_each(|a| *a = Complex64::new(0.0, 0.0));
        column[k] = Complex64::new(1.0, 0.0);
        for g in c.gates() {
            apply_gate(g, width, &mut column);
        }
        u.column_mut(k)
            .iter_mut()
            .zip(&column)
            .for_each(|(d, s)| *d = *s);
    }
    Ok(u)
}

/// Probability of each basis value of register 2: `sum_i |a(i, j)|^2`.
pub fn marginal_register2(s: &StateVector, n: usize) -> Result<Vec<f64>> {
    if s.width != 2 * n {
        return Err(Error::WidthMismatch {
            expected: 2 * n,
            found: s.width,
        });
    }
    let dim = 1usize << n;
    let mut probs = vec![0.0; dim];
    for (k, a) in s.amplitudes.iter().enumerate() {
        probs[k & (dim - 1)] += a.norm_sqr();
    }
    Ok(probs)
}

#[inline]
fn bit(width: usize, q: usize) -> usize {
    1 << (width - 1 - q)
}

fn control_mask(g: &Gate, width: usize) -> (usize, usize) {
    g.controls.iter().fold((0, 0), |(mask, value), c| {
        let b = bit(width, c.qubit);
        (
            mask | b,
            if c.polarity == Polarity::One {
                value | b
            } else {
                value
            },
        )
    })
}

/// Applies one gate to raw amplitudes. The gate must already be checked
/// against `width`.
pub(crate) fn apply_gate(g: &Gate, width: usize, amps: &mut [Complex64]) {
    let (mask, value) = control_mask(g, width);
    let fires = |i: usize| i & mask == value;
    match g.op {
        Op::GlobalPhase(Sign::Plus) => {}
        Op::GlobalPhase(Sign::Minus) => amps.iter_mut().for_each(|a| *a = -*a),
        Op::PhaseFlip(q) | Op::PrimedPhaseFlip(q) => {
            let t = bit(width, q);
            let want = if matches!(g.op, Op::PhaseFlip(_)) {
                t
            } else {
                0
            };
            for (i, a) in amps.iter_mut().enumerate() {
                if i & t == want && fires(i) {
                    *a = -*a;
                }
            }
        }
        Op::Swap(p, q) => {
            let (bp, bq) = (bit(width, p), bit(width, q));
            for i in 0..amps.len() {
                if i & bp != 0 && i & bq == 0 && fires(i) {
                    amps.swap(i, i ^ bp ^ bq);
                }
            }
        }
        Op::X(q) | Op::H(q) | Op::Ry(q, _) => {
            let t = bit(width, q);
            let pair: Box<dyn Fn(Complex64, Complex64) -> (Complex64, Complex64)> = match g.op {
                Op::X(_) => Box::new(|a, b| (b, a)),
                Op::H(_) => {
                    let r = std::f64::consts::FRAC_1_SQRT_2;
                    Box::new(move |a, b| ((a + b) * r, (a - b) * r))
                }
                Op::Ry(_, theta) => {
                    let (s, c) = theta.sin_cos();
                    Box::new(move |a, b| (a * c - b * s, a * s + b * c))
                }
                _ => unreachable!(),
            };
            for i in 0..amps.len() {
                if i & t == 0 && fires(i) {
                    let (a, b) = pair(amps[i], amps[i | t]);
                    amps[i] = a;
                    amps[i | t] = b;
                }
            }
        }
    }
}
