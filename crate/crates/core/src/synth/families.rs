//! Synthesizers for the supported chain classes.

use crate::circuit::{pattern, Circuit, Control, Gate, Op};
use crate::error::{Error, Result};
use crate::markov::{
    complete_graph, cycle_graph, directed_example8, google_matrix, wheel_graph, TransitionMatrix,
};

use super::framework::{
    assemble, assemble_partitioned, padded_column, register1, register2, segments_diagonalizer,
    Diagonalizer, Segment,
};
use super::prep::{kb_complete, kb_cycle, state_prep};
use super::shift::{append_controlled_shift, append_shift, controlled_shift_transform, Direction};

/// Generating column of a circulant chain.
#[derive(Debug, Clone, PartialEq)]
pub enum CirculantColumn {
    /// `{0, 1/sqrt 2, 0, .., 0, 1/sqrt 2}`.
    Cycle,
    /// `{0, 1/sqrt(N-1), .., 1/sqrt(N-1)}`.
    Complete,
    /// Explicit nonnegative amplitudes `sqrt(P(j, 0))`, length `2^n`.
    Amplitudes(Vec<f64>),
}

impl CirculantColumn {
    /// Transition matrix of the chain with column `i` rotated down by `i * offset_x`.
    pub fn transition_matrix(&self, n: usize, offset_x: u64) -> Result<TransitionMatrix> {
        let size = 1usize << n;
        let offset = (offset_x % size as u64) as usize;
        match self {
            CirculantColumn::Cycle if offset == 1 => cycle_graph(size),
            CirculantColumn::Complete if offset == 1 => complete_graph(size),
            other => {
                let amps = other.amplitudes(n)?;
                let probs: Vec<f64> = amps.iter().map(|a| a * a).collect();
                crate::markov::cyclic_permutation(&probs, offset)
            }
        }
    }

    fn amplitudes(&self, n: usize) -> Result<Vec<f64>> {
        let size = 1usize << n;
        Ok(match self {
            CirculantColumn::Cycle => {
                let mut v = vec![0.0; size];
                v[1] = std::f64::consts::FRAC_1_SQRT_2;
                v[size - 1] = std::f64::consts::FRAC_1_SQRT_2;
                v
            }
            CirculantColumn::Complete => {
                let a = (1.0 / (size as f64 - 1.0)).sqrt();
                (0..size).map(|k| if k == 0 { 0.0 } else { a }).collect()
            }
            CirculantColumn::Amplitudes(v) => {
                if v.len() != size {
                    return Err(Error::param(format!(
                        "generating column has length {}, expected {size}",
                        v.len()
                    )));
                }
                v.clone()
            }
        })
    }
}

fn check_width(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min || n > 30 {
        return Err(Error::param(format!(
            "{what} needs register width in {min}..=30, got {n}"
        )));
    }
    Ok(())
}

/// Diagonalizer of a circulant chain: `T = sum_i |i><i| ⊗ L^{i x}` and a
/// preparation of the generating column.
pub fn circulant_diagonalizer(
    n: usize,
    column: &CirculantColumn,
    offset_x: u64,
) -> Result<Diagonalizer> {
    let (kb, basis) = match column {
        CirculantColumn::Cycle => {
            check_width(n, 2, "cycle")?;
            let p = kb_cycle(n)?;
            (p.circuit, p.basis)
        }
        CirculantColumn::Complete => {
            check_width(n, 1, "complete graph")?;
            let p = kb_complete(n)?;
            (p.circuit, p.basis)
        }
        CirculantColumn::Amplitudes(_) => {
            check_width(n, 1, "circulant")?;
            (state_prep(&column.amplitudes(n)?, 0)?, 0)
        }
    };
    let t = controlled_shift_transform(n, offset_x, Direction::Left)?;
    Diagonalizer::single_reference(n, &t, &kb, basis)
}

/// Walk on the circulant chain on `2^n` vertices whose columns are
/// successive rotations by `offset_x` of the generating column.
pub fn synth_circulant(n: usize, column: &CirculantColumn, offset_x: u64) -> Result<Circuit> {
    assemble(&circulant_diagonalizer(n, column, offset_x)?)
}

/// Diagonalizer of `P(K_2)`: a CNOT maps `|0,1>`, `|1,0>` to `|0,1>`, `|1,1>`.
pub fn k2_diagonalizer() -> Diagonalizer {
    let u = Circuit::from_gates(2, vec![Gate::x(1).with(Control::on(0))])
        .expect("two-qubit CNOT is valid");
    Diagonalizer::new(1, u, 1).expect("width and basis are consistent")
}

/// Walk on `K_2`: CNOT, `2|1><1| - I` on the second qubit, CNOT, swap.
pub fn synth_k2() -> Circuit {
    let cnot = Gate::x(1).with(Control::on(0));
    Circuit::from_gates(
        2,
        vec![
            cnot.clone(),
            Gate::new(Op::PrimedPhaseFlip(1)),
            cnot,
            Gate::swap(0, 1),
        ],
    )
    .expect("two-qubit circuit is valid")
}

/// Segments of `K_{2^n1, 2^n2}` on `n1 + 1` qubits per register.
pub fn bipartite_segments(n1: usize, n2: usize) -> Result<Vec<Segment>> {
    if n2 > n1 || n1 > 29 {
        return Err(Error::param(format!(
            "bipartite widths need n1 >= n2, got ({n1}, {n2})"
        )));
    }
    let n = n1 + 1;
    let (big1, big2) = (1usize << n1, 1usize << n2);

    // columns of the first side are uniform over the second side
    let mut k1 = Circuit::new(n);
    k1.push(Gate::x(0))?;
    for q in n - n2..n {
        k1.push(Gate::h(q))?;
    }
    let mut k2 = Circuit::new(n);
    for q in 1..n {
        k2.push(Gate::h(q))?;
    }
    Ok(vec![
        Segment {
            members: (0..big1).collect(),
            transform: Circuit::new(2 * n),
            prep: k1,
            basis: 0,
        },
        Segment {
            members: (big1..big1 + big2).collect(),
            transform: Circuit::new(2 * n),
            prep: k2,
            basis: 0,
        },
    ])
}

/// Walk on the complete bipartite graph `K_{2^n1, 2^n2}`.
pub fn synth_bipartite(n1: usize, n2: usize) -> Result<Circuit> {
    assemble_partitioned(n1 + 1, &bipartite_segments(n1, n2)?)
}

/// Diagonalizer of `P(K_{2^n})` starting from `|0>`.
fn complete_from_zero(n: usize) -> Result<Diagonalizer> {
    let mut kb = Circuit::new(n);
    kb.push(Gate::x(n - 1))?;
    kb.append(&kb_complete(n)?.circuit)?;
    let t = controlled_shift_transform(n, 1, Direction::Left)?;
    Diagonalizer::single_reference(n, &t, &kb, 0)
}

/// Crown graph on `2^(n+1)` vertices as `K_{2^n} ⊗ K_2` with joint basis `|0, 1>`.
pub fn crown_diagonalizer(n: usize) -> Result<Diagonalizer> {
    check_width(n, 2, "crown graph")?;
    Diagonalizer::tensor(&complete_from_zero(n)?, &k2_diagonalizer())
}

pub fn synth_crown(n: usize) -> Result<Circuit> {
    assemble(&crown_diagonalizer(n)?)
}

/// Segments of the two-cycle interdependent network `WIN(2^n1, 2^n2)`.
pub fn win_segments(n1: usize, n2: usize) -> Result<Vec<Segment>> {
    if n2 == 0 || n2 > n1 || n1 > 10 {
        return Err(Error::param(format!(
            "interdependent network needs 10 >= n1 >= n2 >= 1, got ({n1}, {n2})"
        )));
    }
    let n = n1 + 1;
    let big1 = 1usize << n1;
    let big2 = 1usize << n2;
    let p = crate::markov::win_cycles(big1, big2)?;
    let reg1 = register1(n);
    let reg2 = register2(n);

    // first cycle: rotate rows below N1 by y
    let mut t1 = Circuit::new(2 * n);
    append_controlled_shift(
        &mut t1,
        &reg1[1..],
        &reg2[1..],
        1,
        Direction::Left,
        &[Control::off(reg1[0]), Control::off(reg2[0])],
    )?;

    // second cycle: rotate the N2 rows above N1 by y - N1
    let fixed = n1 - n2 + 1;
    let mut extra = pattern(&reg1[..fixed], 1 << (fixed - 1));
    extra.extend(pattern(&reg2[..fixed], 1 << (fixed - 1)));
    let mut t2 = Circuit::new(2 * n);
    append_controlled_shift(
        &mut t2,
        &reg1[fixed..],
        &reg2[fixed..],
        1,
        Direction::Left,
        &extra,
    )?;

    Ok(vec![
        Segment {
            members: (0..big1).collect(),
            transform: t1,
            prep: state_prep(&padded_column(&p, 0, n), 0)?,
            basis: 0,
        },
        Segment {
            members: (big1..big1 + big2).collect(),
            transform: t2,
            prep: state_prep(&padded_column(&p, big1, n), 0)?,
            basis: 0,
        },
    ])
}

pub fn synth_win_cycles(n1: usize, n2: usize) -> Result<Circuit> {
    assemble_partitioned(n1 + 1, &win_segments(n1, n2)?)
}

/// Google chain of the wheel with `2^m` outer vertices.
pub fn wheel_chain(m: usize, directed: bool, alpha: f64) -> Result<TransitionMatrix> {
    if !(2..=10).contains(&m) {
        return Err(Error::param(format!(
            "wheel exponent must be in 2..=10, got {m}"
        )));
    }
    google_matrix(&wheel_graph(1 << m, directed)?, alpha)
}

/// Segments of the wheel Google chain on `m + 1` qubits per register:
/// the outer cycle shares one reference column and the hub is alone.
pub fn wheel_segments(m: usize, directed: bool, alpha: f64) -> Result<Vec<Segment>> {
    let p = wheel_chain(m, directed, alpha)?;
    let n = m + 1;
    let big = 1usize << m;
    let reg1 = register1(n);
    let reg2 = register2(n);

    let mut t1 = Circuit::new(2 * n);
    append_controlled_shift(
        &mut t1,
        &reg1[1..],
        &reg2[1..],
        1,
        Direction::Left,
        &[Control::off(reg1[0]), Control::off(reg2[0])],
    )?;
    Ok(vec![
        Segment {
            members: (0..big).collect(),
            transform: t1,
            prep: state_prep(&padded_column(&p, 0, n), 0)?,
            basis: 0,
        },
        Segment {
            members: vec![big],
            transform: Circuit::new(2 * n),
            prep: state_prep(&padded_column(&p, big, n), 0)?,
            basis: 0,
        },
    ])
}

pub fn synth_wheel(m: usize, directed: bool, alpha: f64) -> Result<Circuit> {
    assemble_partitioned(m + 1, &wheel_segments(m, directed, alpha)?)
}

/// Segments of the eight-vertex directed example, subsets `{0..3}`, `{4,5}`, `{6,7}`.
pub fn directed8_segments(alpha: f64) -> Result<Vec<Segment>> {
    let p = google_matrix(&directed_example8(), alpha)?;
    let n = 3;
    let reg1 = register1(n);
    let reg2 = register2(n);

    // columns 0..3 rotate inside each half of register 2
    let mut t1 = Circuit::new(2 * n);
    append_controlled_shift(
        &mut t1,
        &reg1[1..],
        &reg2[1..],
        1,
        Direction::Left,
        &[Control::off(0)],
    )?;

    let mut t2 = Circuit::new(2 * n);
    append_shift(&mut t2, &reg2, 2, Direction::Left, &pattern(&reg1, 5))?;

    let prep = |r: usize| state_prep(&padded_column(&p, r, n), 0);
    Ok(vec![
        Segment {
            members: vec![0, 1, 2, 3],
            transform: t1,
            prep: prep(0)?,
            basis: 0,
        },
        Segment {
            members: vec![4, 5],
            transform: t2,
            prep: prep(4)?,
            basis: 0,
        },
        Segment {
            members: vec![6, 7],
            transform: Circuit::new(2 * n),
            prep: prep(6)?,
            basis: 0,
        },
    ])
}

pub fn synth_directed8(alpha: f64) -> Result<Circuit> {
    assemble_partitioned(3, &directed8_segments(alpha)?)
}

/// Diagonalizer from segments that share a basis state, for tensor use.
pub fn partitioned_diagonalizer(n: usize, segments: &[Segment]) -> Result<Diagonalizer> {
    segments_diagonalizer(n, segments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{complete_bipartite, crown_graph, win_cycles};
    use crate::oracle::walk_operator;
    use crate::simulator::{apply, unitary_of, StateVector};

    fn deviation_from_oracle(c: &Circuit, p: &TransitionMatrix) -> f64 {
        let n = crate::qubits_for(p.n());
        let reg = 1usize << n;
        let oracle = walk_operator(p).unwrap();
        let big_n = p.n();
        let mut worst: f64 = 0.0;
        for i in 0..big_n {
            for j in 0..big_n {
                let out = apply(c, &StateVector::basis(2 * n, i * reg + j).unwrap()).unwrap();
                for (k, a) in out.amplitudes().iter().enumerate() {
                    let (r1, r2) = (k / reg, k % reg);
                    let expected = if r1 < big_n && r2 < big_n {
                        oracle.matrix()[[r1 * big_n + r2, i * big_n + j]]
                    } else {
                        0.0
                    };
                    worst = worst.max((a - expected).norm());
                }
            }
        }
        worst
    }

    #[test]
    fn k2_matches_oracle() {
        let u = unitary_of(&synth_k2()).unwrap();
        let expected = [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(u[[r, c]].re, expected[r][c]);
            }
        }
        let via_diag = assemble(&k2_diagonalizer()).unwrap();
        assert!(deviation_from_oracle(&via_diag, &complete_graph(2).unwrap()) < 1e-15);
    }

    #[test]
    fn circulant_cases() {
        let c8 = synth_circulant(3, &CirculantColumn::Cycle, 1).unwrap();
        assert!(deviation_from_oracle(&c8, &cycle_graph(8).unwrap()) < 1e-12);
        let k8 = synth_circulant(3, &CirculantColumn::Complete, 1).unwrap();
        assert!(deviation_from_oracle(&k8, &complete_graph(8).unwrap()) < 1e-12);
        let k2 = synth_circulant(1, &CirculantColumn::Complete, 1).unwrap();
        assert!(deviation_from_oracle(&k2, &complete_graph(2).unwrap()) < 1e-12);
    }

    #[test]
    fn circulant_with_offset_two() {
        let probs = [0.1, 0.2, 0.05, 0.15, 0.0, 0.3, 0.1, 0.1];
        let amps: Vec<f64> = probs.iter().map(|p: &f64| p.sqrt()).collect();
        let col = CirculantColumn::Amplitudes(amps);
        let p = col.transition_matrix(3, 2).unwrap();
        assert_eq!(p.get(2, 1), probs[0]);
        let c = synth_circulant(3, &col, 2).unwrap();
        assert!(deviation_from_oracle(&c, &p) < 1e-12);
    }

    #[test]
    fn bipartite_cases() {
        for (n1, n2) in [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2)] {
            let c = synth_bipartite(n1, n2).unwrap();
            let p = complete_bipartite(1 << n1, 1 << n2).unwrap();
            assert!(deviation_from_oracle(&c, &p) < 1e-12, "K_{{{n1},{n2}}}");
        }
        assert!(synth_bipartite(1, 2).is_err());
    }

    #[test]
    fn crown_cases() {
        for n in 2..=3 {
            let c = synth_crown(n).unwrap();
            assert!(deviation_from_oracle(&c, &crown_graph(1 << n).unwrap()) < 1e-12);
        }
        assert!(synth_crown(1).is_err());
    }

    #[test]
    fn win_cases() {
        for (n1, n2) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let c = synth_win_cycles(n1, n2).unwrap();
            let p = win_cycles(1 << n1, 1 << n2).unwrap();
            assert!(deviation_from_oracle(&c, &p) < 1e-12, "WIN({n1},{n2})");
        }
    }

    #[test]
    fn win_top_angles() {
        let (big1, big2): (f64, f64) = (8.0, 4.0);
        let segs = win_segments(3, 2).unwrap();
        let first = |s: &Segment| match s.prep.gates()[0].op {
            Op::Ry(0, t) => t,
            ref other => panic!("unexpected first gate {other:?}"),
        };
        assert!((first(&segs[0]).cos() - (2.0 / (2.0 + big2)).sqrt()).abs() < 1e-14);
        assert!((first(&segs[1]).cos() - (big1 / (2.0 + big1)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn wheel_cases() {
        for directed in [false, true] {
            for alpha in [0.85, 1.0, 0.0] {
                let c = synth_wheel(2, directed, alpha).unwrap();
                let p = wheel_chain(2, directed, alpha).unwrap();
                assert!(
                    deviation_from_oracle(&c, &p) < 1e-12,
                    "directed={directed} alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn wheel_top_angles() {
        let alpha: f64 = 0.85;
        let big = 8.0;
        let beta = (1.0 - alpha) / (big + 1.0);
        let gamma = alpha / 3.0 + beta;
        let segs = wheel_segments(3, false, alpha).unwrap();
        // outer reference: hub row alone in the upper half
        let outer = match segs[0].prep.gates()[0].op {
            Op::Ry(0, t) => t,
            ref other => panic!("unexpected {other:?}"),
        };
        assert!((outer.cos() - (1.0 - gamma).sqrt()).abs() < 1e-14);
        let hub = match segs[1].prep.gates()[0].op {
            Op::Ry(0, t) => t,
            ref other => panic!("unexpected {other:?}"),
        };
        assert!((hub.cos() - (1.0 - beta).sqrt()).abs() < 1e-14);

        let segs = wheel_segments(3, true, alpha).unwrap();
        let hub = match segs[1].prep.gates()[0].op {
            Op::Ry(0, t) => t,
            ref other => panic!("unexpected {other:?}"),
        };
        assert!((hub.cos() - (big / (big + 1.0)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn directed8_cases() {
        for alpha in [0.85, 0.0, 1.0] {
            let c = synth_directed8(alpha).unwrap();
            let p = google_matrix(&directed_example8(), alpha).unwrap();
            assert!(deviation_from_oracle(&c, &p) < 1e-12, "alpha={alpha}");
        }
    }

    #[test]
    fn tensor_of_cycles() {
        let a = circulant_diagonalizer(2, &CirculantColumn::Cycle, 1).unwrap();
        let c = assemble(&Diagonalizer::tensor(&a, &a).unwrap()).unwrap();
        let p = crate::markov::tensor(&cycle_graph(4).unwrap(), &cycle_graph(4).unwrap()).unwrap();
        assert!(deviation_from_oracle(&c, &p) < 1e-12);
    }

    #[test]
    fn tensor_with_trivial_factor() {
        let one = Diagonalizer::new(0, Circuit::new(0), 0).unwrap();
        let k4 = circulant_diagonalizer(2, &CirculantColumn::Complete, 1).unwrap();
        let c = assemble(&Diagonalizer::tensor(&k4, &one).unwrap()).unwrap();
        assert!(deviation_from_oracle(&c, &complete_graph(4).unwrap()) < 1e-12);
    }

    #[test]
    fn wheel_diagonalizer_in_tensor() {
        let segs = wheel_segments(2, false, 0.85).unwrap();
        let w = partitioned_diagonalizer(3, &segs).unwrap();
        let c = assemble(&Diagonalizer::tensor(&w, &k2_diagonalizer()).unwrap()).unwrap();
        let p = crate::markov::tensor(
            &wheel_chain(2, false, 0.85).unwrap(),
            &complete_graph(2).unwrap(),
        )
        .unwrap();
        assert!(deviation_from_oracle(&c, &p) < 1e-12);
    }
}
