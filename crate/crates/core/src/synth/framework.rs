//! Generic assembly of `U_walk` from diagonalizing pieces.
//!
//! With `U` mapping every projector state `|i>|phi_i>` to `|i>|b>`,
//! `2 Pi - I = U^dag (I ⊗ (2|b><b| - I)) U`. The middle factor is a single
//! multi-controlled phase flip on register 2 plus a global `-1`. In the
//! partitioned form each subset `Z_x` contributes its own segment
//! `U_x^dag (I - 2 P_x) U_x`; the segments' projectors are orthogonal, so
//! their product is `I - 2 Pi` and one global `-1` finishes the reflection.

use crate::circuit::{pattern, with_controls, Circuit, Control, Gate, Op, Sign};
use crate::error::{Error, Result};
use crate::qubits_for;
use crate::simulator::{apply, StateVector};

use super::shift::append_shift;
use super::Direction;

/// Amplitude tolerance for transform and preparation preconditions.
pub const PRECONDITION_TOL: f64 = 1e-10;

/// Block-diagonal `U` on two `n`-qubit registers sending `|i>|phi_i>` to
/// `|i>|b>` for every valid `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagonalizer {
    n: usize,
    circuit: Circuit,
    basis: usize,
}

impl Diagonalizer {
    pub fn new(n: usize, circuit: Circuit, basis: usize) -> Result<Self> {
        if circuit.width() != 2 * n {
            return Err(Error::WidthMismatch {
                expected: 2 * n,
                found: circuit.width(),
            });
        }
        if n < usize::BITS as usize && basis >= 1usize << n {
            return Err(Error::param(format!(
                "basis {basis} does not fit {n} qubits"
            )));
        }
        Ok(Diagonalizer { n, circuit, basis })
    }

    /// `U = (I ⊗ K_b^dag) T` from a transform on `2n` qubits and a
    /// preparation `kb` on `n` qubits.
    pub fn single_reference(
        n: usize,
        transform: &Circuit,
        kb: &Circuit,
        basis: usize,
    ) -> Result<Self> {
        if transform.width() != 2 * n {
            return Err(Error::WidthMismatch {
                expected: 2 * n,
                found: transform.width(),
            });
        }
        if kb.width() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: kb.width(),
            });
        }
        let mut u = transform.clone();
        u.append_mapped(&kb.dagger(), &register2(n))?;
        Diagonalizer::new(n, u, basis)
    }

    /// Product diagonalizer for `P1 ⊗ P2`: register 1 is `(i, j)` and
    /// register 2 is `(i', j')`, with `a` acting on `(i, i')` and `b` on `(j, j')`.
    pub fn tensor(a: &Diagonalizer, b: &Diagonalizer) -> Result<Self> {
        let n = a.n + b.n;
        let map_a: Vec<usize> = (0..2 * a.n)
            .map(|q| if q < a.n { q } else { n + q - a.n })
            .collect();
        let map_b: Vec<usize> = (0..2 * b.n)
            .map(|q| if q < b.n { a.n + q } else { n + a.n + q - b.n })
            .collect();
        let mut u = Circuit::new(2 * n);
        u.append_mapped(&a.circuit, &map_a)?;
        u.append_mapped(&b.circuit, &map_b)?;
        Diagonalizer::new(n, u, (a.basis << b.n) | b.basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn basis(&self) -> usize {
        self.basis
    }
}

pub(crate) fn register1(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub(crate) fn register2(n: usize) -> Vec<usize> {
    (n..2 * n).collect()
}

/// `I - 2 |pattern><pattern|`: the last matched qubit carries the flip and
/// the rest become controls. An empty pattern is a global `-1`.
pub(crate) fn phase_flip(mut matched: Vec<Control>) -> Gate {
    match matched.pop() {
        None => Gate::new(Op::GlobalPhase(Sign::Minus)),
        Some(last) => Gate::flip_on(last.qubit, last.polarity.bit()).with_all(matched),
    }
}

/// Swaps register 1 and register 2 qubit by qubit.
pub fn register_swap(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(2 * n);
    for q in 0..n {
        c.push(Gate::swap(q, n + q))?;
    }
    Ok(c)
}

/// `S U^dag D U` for a single diagonalizer.
pub fn assemble(diag: &Diagonalizer) -> Result<Circuit> {
    let n = diag.n;
    let mut c = diag.circuit.clone();
    c.push(phase_flip(pattern(&register2(n), diag.basis)))?;
    c.push(Gate::new(Op::GlobalPhase(Sign::Minus)))?;
    c.append(&diag.circuit.dagger())?;
    c.append(&register_swap(n)?)?;
    Ok(c)
}

/// Single-reference walk: transform, `K_b^dag`, reflection about `|b>`,
/// `K_b`, inverse transform, register swap.
pub fn synth_single_reference(
    n: usize,
    transform: &Circuit,
    kb: &Circuit,
    basis_b: usize,
) -> Result<Circuit> {
    assemble(&Diagonalizer::single_reference(n, transform, kb, basis_b)?)
}

/// Walk operator of `P1 ⊗ P2` from the factors' diagonalizers.
pub fn synth_tensor(a: &Diagonalizer, b: &Diagonalizer) -> Result<Circuit> {
    assemble(&Diagonalizer::tensor(a, b)?)
}

/// Splits `members` into aligned power-of-two blocks, each described by a
/// control pattern on `register` (MSB first).
pub(crate) fn block_patterns(members: &[usize], register: &[usize]) -> Vec<Vec<Control>> {
    let n = register.len();
    let size = 1usize << n;
    let mut present = vec![false; size];
    for &m in members {
        if m < size {
            present[m] = true;
        }
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start < size {
        if !present[start] {
            start += 1;
            continue;
        }
        let mut k = 0;
        while k < n
            && start % (1 << (k + 1)) == 0
            && start + (1 << (k + 1)) <= size
            && present[start..start + (1 << (k + 1))].iter().all(|&p| p)
        {
            k += 1;
        }
        out.push(pattern(&register[..n - k], start >> k));
        start += 1 << k;
    }
    out
}

/// One subset's share of a partitioned walk.
#[derive(Debug, Clone)]
pub struct Segment {
    /// Vertices of the subset `Z_x`.
    pub members: Vec<usize>,
    /// `T_x` on `2n` qubits; only its action on rows of `members` matters.
    pub transform: Circuit,
    /// `K_{b_x}` on `n` qubits.
    pub prep: Circuit,
    pub basis: usize,
}

/// `S prod_x U_x^dag (I - 2 P_x) U_x` followed by a global `-1`.
pub fn assemble_partitioned(n: usize, segments: &[Segment]) -> Result<Circuit> {
    let reg1 = register1(n);
    let reg2 = register2(n);
    let mut c = Circuit::new(2 * n);
    for seg in segments {
        if seg.transform.width() != 2 * n {
            return Err(Error::WidthMismatch {
                expected: 2 * n,
                found: seg.transform.width(),
            });
        }
        if seg.prep.width() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: seg.prep.width(),
            });
        }
        let blocks = block_patterns(&seg.members, &reg1);
        let mut u = seg.transform.clone();
        let mut prep_dagger = Circuit::new(2 * n);
        prep_dagger.append_mapped(&seg.prep.dagger(), &reg2)?;
        for block in &blocks {
            u.append(&with_controls(&prep_dagger, block)?)?;
        }
        c.append(&u)?;
        for block in &blocks {
            let mut matched = block.clone();
            matched.extend(pattern(&reg2, seg.basis));
            c.push(phase_flip(matched))?;
        }
        c.append(&u.dagger())?;
    }
    c.push(Gate::new(Op::GlobalPhase(Sign::Minus)))?;
    c.append(&register_swap(n)?)?;
    Ok(c)
}

/// When every segment uses the same basis state, their `U_x` together form
/// one diagonalizer (usable as a tensor factor).
pub fn segments_diagonalizer(n: usize, segments: &[Segment]) -> Result<Diagonalizer> {
    let basis = segments.first().map_or(0, |s| s.basis);
    if segments.iter().any(|s| s.basis != basis) {
        return Err(Error::param("segments use different basis states"));
    }
    let reg1 = register1(n);
    let reg2 = register2(n);
    let mut u = Circuit::new(2 * n);
    for seg in segments {
        u.append(&seg.transform)?;
        let mut prep_dagger = Circuit::new(2 * n);
        prep_dagger.append_mapped(&seg.prep.dagger(), &reg2)?;
        for block in block_patterns(&seg.members, &reg1) {
            u.append(&with_controls(&prep_dagger, &block)?)?;
        }
    }
    Diagonalizer::new(n, u, basis)
}

/// Vertex partition with a reference column and basis state per subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    subsets: Vec<Vec<usize>>,
    references: Vec<usize>,
    bases: Vec<usize>,
}

impl Partition {
    pub fn new(
        n_states: usize,
        subsets: Vec<Vec<usize>>,
        references: Vec<usize>,
        bases: Vec<usize>,
    ) -> Result<Self> {
        if subsets.len() != references.len() || subsets.len() != bases.len() {
            return Err(Error::param(
                "subsets, references and bases differ in length",
            ));
        }
        let reg = 1usize << qubits_for(n_states);
        let mut owner = vec![None; n_states];
        for (x, subset) in subsets.iter().enumerate() {
            if subset.is_empty() {
                return Err(Error::param(format!("subset {x} is empty")));
            }
            for &y in subset {
                if y >= n_states {
                    return Err(Error::param(format!("vertex {y} outside 0..{n_states}")));
                }
                if let Some(prev) = owner[y].replace(x) {
                    return Err(Error::param(format!(
                        "vertex {y} in subsets {prev} and {x}"
                    )));
                }
            }
            if !subset.contains(&references[x]) {
                return Err(Error::param(format!(
                    "reference {} not in subset {x}",
                    references[x]
                )));
            }
            if bases[x] >= reg {
                return Err(Error::param(format!("basis {} outside register", bases[x])));
            }
        }
        if let Some(y) = owner.iter().position(Option::is_none) {
            return Err(Error::param(format!("vertex {y} is in no subset")));
        }
        Ok(Partition {
            subsets,
            references,
            bases,
        })
    }

    /// One subset holding every vertex.
    pub fn single(n_states: usize, reference: usize, basis: usize) -> Result<Self> {
        Partition::new(
            n_states,
            vec![(0..n_states).collect()],
            vec![reference],
            vec![basis],
        )
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn references(&self) -> &[usize] {
        &self.references
    }

    pub fn bases(&self) -> &[usize] {
        &self.bases
    }
}

fn max_deviation(out: &StateVector, target: &[f64]) -> f64 {
    out.amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| (a - target.get(k).copied().unwrap_or(0.0)).norm())
        .fold(0.0, f64::max)
}

/// Padded square-root column of `p`.
pub(crate) fn padded_column(p: &crate::markov::TransitionMatrix, i: usize, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; 1 << n];
    for (k, x) in p.column(i).iter().enumerate() {
        v[k] = x.sqrt();
    }
    v
}

/// General partitioned synthesis from per-member transforms.
///
/// `transforms[x][k]` is `T_{x,y}` on `n` qubits for the `k`-th member `y`
/// of subset `x` (an empty circuit for the identity) and `preps[x]` is
/// `K_{b_x}`. Both are checked numerically before assembly. Each `T_{x,y}`
/// is applied under a full control pattern for `y`.
pub fn synth_partitioned(
    p: &crate::markov::TransitionMatrix,
    z: &Partition,
    transforms: &[Vec<Circuit>],
    preps: &[Circuit],
) -> Result<Circuit> {
    let segments = partitioned_segments(p, z, transforms, preps)?;
    assemble_partitioned(qubits_for(p.n()), &segments)
}

/// The checked segments behind [`synth_partitioned`].
pub fn partitioned_segments(
    p: &crate::markov::TransitionMatrix,
    z: &Partition,
    transforms: &[Vec<Circuit>],
    preps: &[Circuit],
) -> Result<Vec<Segment>> {
    let n = qubits_for(p.n());
    if transforms.len() != z.subsets.len() || preps.len() != z.subsets.len() {
        return Err(Error::param(
            "need one transform list and one preparation per subset",
        ));
    }
    let reg1 = register1(n);
    let reg2 = register2(n);
    let mut segments = Vec::with_capacity(z.subsets.len());
    for (x, subset) in z.subsets.iter().enumerate() {
        let reference = padded_column(p, z.references[x], n);
        let prep = &preps[x];
        if prep.width() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: prep.width(),
            });
        }
        let prepared = apply(prep, &StateVector::basis(n, z.bases[x])?)?;
        let dev = max_deviation(&prepared, &reference);
        if dev > PRECONDITION_TOL {
            return Err(Error::Precondition {
                subset: x,
                member: z.references[x],
                detail: format!("preparation misses the reference column by {dev:e}"),
            });
        }
        if transforms[x].len() != subset.len() {
            return Err(Error::param(format!(
                "subset {x} needs {} transforms",
                subset.len()
            )));
        }
        let mut transform = Circuit::new(2 * n);
        for (&y, t) in subset.iter().zip(&transforms[x]) {
            if t.width() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: t.width(),
                });
            }
            let moved = apply(t, &StateVector::from_real(&padded_column(p, y, n))?)?;
            let dev = max_deviation(&moved, &reference);
            if dev > PRECONDITION_TOL {
                return Err(Error::Precondition {
                    subset: x,
                    member: y,
                    detail: format!("transform misses the reference column by {dev:e}"),
                });
            }
            let mut lifted = Circuit::new(2 * n);
            lifted.append_mapped(t, &reg2)?;
            transform.append(&with_controls(&lifted, &pattern(&reg1, y))?)?;
        }
        segments.push(Segment {
            members: subset.clone(),
            transform,
            prep: prep.clone(),
            basis: z.bases[x],
        });
    }
    Ok(segments)
}

/// Smallest left shift `s` of the whole register with `L^s phi_from = phi_to`.
pub(crate) fn find_left_shift(from: &[f64], to: &[f64]) -> Option<usize> {
    let len = from.len();
    (0..len).find(|&s| (0..len).all(|k| (from[(k + s) % len] - to[k]).abs() <= PRECONDITION_TOL))
}

/// `L^s` on `n` qubits as a circuit.
pub(crate) fn left_shift(n: usize, s: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    append_shift(&mut c, &register1(n), s as u64, Direction::Left, &[])?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_members() {
        let reg = [0, 1, 2];
        assert_eq!(
            block_patterns(&[0, 1, 2, 3], &reg),
            vec![vec![Control::off(0)]]
        );
        assert_eq!(
            block_patterns(&(0..8).collect::<Vec<_>>(), &reg),
            vec![vec![]]
        );
        assert_eq!(
            block_patterns(&[4, 5], &reg),
            vec![vec![Control::on(0), Control::off(1)]]
        );
        assert_eq!(
            block_patterns(&[3], &reg),
            vec![vec![Control::off(0), Control::on(1), Control::on(2)]]
        );
        // 1..=6 splits into {1}, {2,3}, {4,5}, {6}
        assert_eq!(block_patterns(&[1, 2, 3, 4, 5, 6], &reg).len(), 4);
    }

    #[test]
    fn phase_flip_uses_last_qubit() {
        let g = phase_flip(pattern(&[2, 3], 0b10));
        assert_eq!(
            g,
            Gate::controlled(Op::PrimedPhaseFlip(3), vec![Control::on(2)])
        );
        assert_eq!(phase_flip(vec![]), Gate::new(Op::GlobalPhase(Sign::Minus)));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(4, vec![vec![0, 1], vec![2, 3]], vec![0, 2], vec![0, 0]).is_ok());
        assert!(
            Partition::new(4, vec![vec![0, 1], vec![1, 2, 3]], vec![0, 2], vec![0, 0]).is_err()
        );
        assert!(Partition::new(4, vec![vec![0, 1], vec![2]], vec![0, 2], vec![0, 0]).is_err());
        assert!(Partition::new(4, vec![vec![0, 1], vec![2, 3]], vec![0, 1], vec![0, 0]).is_err());
        assert!(Partition::new(4, vec![vec![0, 1, 2, 3], vec![]], vec![0, 0], vec![0, 0]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2]], vec![0], vec![4]).is_err());
    }

    #[test]
    fn left_shift_search() {
        let a = [0.0, 0.6, 0.8, 0.0];
        let b = [0.6, 0.8, 0.0, 0.0];
        assert_eq!(find_left_shift(&a, &b), Some(1));
        assert_eq!(find_left_shift(&a, &a), Some(0));
        assert_eq!(find_left_shift(&a, &[0.8, 0.6, 0.0, 0.0]), None);
    }
}
