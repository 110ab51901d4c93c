use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array2;
use num_complex::Complex64;

use szegedy::circuit::Circuit;
use szegedy::markov::{
    complete_bipartite, complete_graph, crown_graph, cycle_graph, directed_example8, google_matrix,
    tensor, win_cycles, TransitionMatrix,
};
use szegedy::oracle::column_state;
use szegedy::simulator::{apply, unitary_of, StateVector};
use szegedy::synth::{
    bipartite_segments, controlled_shift_transform, kb_complete, kb_complete_with_angles, kb_cycle,
    state_prep, synth_bipartite, synth_circulant, synth_crown, synth_directed8, synth_k2,
    synth_partitioned, synth_single_reference, synth_tensor, synth_wheel, synth_win_cycles, verify,
    wheel_chain, CirculantColumn, Diagonalizer, Direction, Partition,
};
use szegedy::Error;

fn assert_passes(c: &Circuit, p: &TransitionMatrix, what: &str) {
    let r = verify(c, p).unwrap();
    assert!(r.pass, "{what}: {r:?}");
}

#[test]
fn single_reference_cycle_and_complete() {
    let kb = kb_cycle(3).unwrap();
    let t = controlled_shift_transform(3, 1, Direction::Left).unwrap();
    let c8 = synth_single_reference(3, &t, &kb.circuit, kb.basis).unwrap();
    assert_passes(&c8, &cycle_graph(8).unwrap(), "C_8");

    let kb = kb_complete(3).unwrap();
    let k8 = synth_single_reference(3, &t, &kb.circuit, kb.basis).unwrap();
    assert_passes(&k8, &complete_graph(8).unwrap(), "K_8");

    let kb = kb_complete(1).unwrap();
    let t1 = controlled_shift_transform(1, 1, Direction::Left).unwrap();
    let k2 = synth_single_reference(1, &t1, &kb.circuit, kb.basis).unwrap();
    assert_passes(&k2, &complete_graph(2).unwrap(), "K_2 circulant");
}

#[test]
fn single_reference_width_mismatch() {
    let kb = kb_cycle(3).unwrap();
    let t = controlled_shift_transform(2, 1, Direction::Left).unwrap();
    assert!(matches!(
        synth_single_reference(3, &t, &kb.circuit, kb.basis),
        Err(Error::WidthMismatch { .. })
    ));
}

#[test]
fn circulant_families() {
    for n in 2..=5 {
        let c = synth_circulant(n, &CirculantColumn::Cycle, 1).unwrap();
        assert_passes(&c, &cycle_graph(1 << n).unwrap(), "cycle");
    }
    let k16 = synth_circulant(4, &CirculantColumn::Complete, 1).unwrap();
    assert_passes(&k16, &complete_graph(16).unwrap(), "K_16");
    assert!(synth_circulant(0, &CirculantColumn::Complete, 1).is_err());
    assert!(synth_circulant(3, &CirculantColumn::Amplitudes(vec![1.0, 0.0]), 1).is_err());
}

#[test]
fn random_circulant_with_offset() {
    let probs = [0.02, 0.3, 0.08, 0.1, 0.15, 0.05, 0.2, 0.1];
    let amps: Vec<f64> = probs.iter().map(|p: &f64| p.sqrt()).collect();
    for x in [1, 2, 3, 5] {
        let col = CirculantColumn::Amplitudes(amps.clone());
        let p = col.transition_matrix(3, x).unwrap();
        // column i holds probs rotated down by i*x
        for i in 0..8 {
            for (r, q) in probs.iter().enumerate() {
                assert!((p.get((r + i * x as usize) % 8, i) - q).abs() < 1e-15);
            }
        }
        assert_passes(
            &synth_circulant(3, &col, x).unwrap(),
            &p,
            "circulant offset",
        );
    }
}

#[test]
fn k2_circuit() {
    let c = synth_k2();
    assert_passes(&c, &complete_graph(2).unwrap(), "K_2");
    let u = unitary_of(&c).unwrap();
    let sq = u.dot(&u);
    for r in 0..4 {
        for k in 0..4 {
            let id = if r == k { 1.0 } else { 0.0 };
            assert!((sq[[r, k]] - Complex64::new(id, 0.0)).norm() < 1e-15);
        }
    }
    let s = StateVector::from_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
    assert!((apply(&c, &s).unwrap().norm() - 1.0).abs() < 1e-15);
}

#[test]
fn bipartite_family() {
    assert_passes(
        &synth_bipartite(3, 2).unwrap(),
        &complete_bipartite(8, 4).unwrap(),
        "K_{8,4}",
    );
    assert_passes(
        &synth_bipartite(2, 2).unwrap(),
        &complete_bipartite(4, 4).unwrap(),
        "K_{4,4}",
    );
    assert_passes(
        &synth_bipartite(0, 0).unwrap(),
        &complete_graph(2).unwrap(),
        "K_{1,1}",
    );
}

#[test]
fn k22_is_relabelled_c4() {
    // cycle order 0, 2, 1, 3 of K_{2,2}
    let perm = [0usize, 2, 1, 3];
    let b = unitary_of(&synth_bipartite(1, 1).unwrap()).unwrap();
    let c = unitary_of(&synth_circulant(2, &CirculantColumn::Cycle, 1).unwrap()).unwrap();
    // K_{2,2} uses 2 qubits per register, so both live on 16-dim spaces
    let lift = |k: usize| perm[k / 4] * 4 + perm[k % 4];
    for r in 0..16 {
        for k in 0..16 {
            assert!((b[[lift(r), lift(k)]] - c[[r, k]]).norm() < 1e-12);
        }
    }
}

#[test]
fn crown_family() {
    assert_passes(&synth_crown(2).unwrap(), &crown_graph(4).unwrap(), "S_4");
    assert_passes(&synth_crown(3).unwrap(), &crown_graph(8).unwrap(), "S_8");
    let counts: Vec<usize> = (2..=6)
        .map(|n| synth_crown(n).unwrap().gate_count().decomposed)
        .collect();
    for (k, c) in counts.iter().enumerate() {
        let n = (k + 2) as f64;
        assert!((*c as f64) <= 4.0 * n.powi(3), "crown n={n} cost {c}");
    }
}

#[test]
fn tensor_products() {
    let k4 = szegedy::synth::circulant_diagonalizer(2, &CirculantColumn::Complete, 1).unwrap();
    let k2 = szegedy::synth::k2_diagonalizer();
    let p = tensor(&complete_graph(4).unwrap(), &complete_graph(2).unwrap()).unwrap();
    assert_passes(&synth_tensor(&k4, &k2).unwrap(), &p, "K_4 x K_2");

    let c4 = szegedy::synth::circulant_diagonalizer(2, &CirculantColumn::Cycle, 1).unwrap();
    let p = tensor(&cycle_graph(4).unwrap(), &cycle_graph(4).unwrap()).unwrap();
    assert_passes(&synth_tensor(&c4, &c4).unwrap(), &p, "C_4 x C_4");

    let one = Diagonalizer::new(0, Circuit::new(0), 0).unwrap();
    assert_passes(
        &synth_tensor(&one, &c4).unwrap(),
        &cycle_graph(4).unwrap(),
        "[1] x C_4",
    );
}

#[test]
fn win_family() {
    assert_passes(
        &synth_win_cycles(3, 2).unwrap(),
        &win_cycles(8, 4).unwrap(),
        "WIN(8,4)",
    );
    assert_passes(
        &synth_win_cycles(2, 2).unwrap(),
        &win_cycles(4, 4).unwrap(),
        "WIN(4,4)",
    );
    let p = win_cycles(8, 4).unwrap();
    for r in [0, 8] {
        let norm: f64 = column_state(&p, r).unwrap().iter().map(|a| a * a).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn wheel_family() {
    for directed in [false, true] {
        let p = wheel_chain(3, directed, 0.85).unwrap();
        assert_passes(&synth_wheel(3, directed, 0.85).unwrap(), &p, "W_8");
    }
    let p = wheel_chain(3, false, 1.0).unwrap();
    for j in 0..8 {
        assert!((p.get(j, 8) - 0.125).abs() < 1e-15);
    }
    assert_passes(&synth_wheel(3, false, 1.0).unwrap(), &p, "W_8 alpha=1");
    assert!(synth_wheel(1, false, 0.85).is_err());
    assert!(synth_wheel(3, false, 1.5).is_err());
}

#[test]
fn directed8_family() {
    for alpha in [0.85, 0.0] {
        let p = google_matrix(&directed_example8(), alpha).unwrap();
        assert_passes(&synth_directed8(alpha).unwrap(), &p, "directed8");
    }
}

fn max_unitary_diff(a: &Circuit, b: &Circuit) -> f64 {
    let (ua, ub) = (unitary_of(a).unwrap(), unitary_of(b).unwrap());
    ua.iter()
        .zip(&ub)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn partitioned_rank_one_chain() {
    let col = [0.1, 0.2, 0.3, 0.4];
    let p = TransitionMatrix::new(Array2::from_shape_fn((4, 4), |(i, _)| col[i])).unwrap();
    let amps: Vec<f64> = col.iter().map(|c: &f64| c.sqrt()).collect();
    let z = Partition::single(4, 0, 0).unwrap();
    let ident = vec![Circuit::new(2); 4];
    let c = synth_partitioned(&p, &z, &[ident], &[state_prep(&amps, 0).unwrap()]).unwrap();
    assert_passes(&c, &p, "rank one");
}

#[test]
fn partitioned_reproduces_bipartite() {
    let p = complete_bipartite(4, 2).unwrap();
    let z = Partition::new(
        6,
        vec![(0..4).collect(), (4..6).collect()],
        vec![0, 4],
        vec![0, 0],
    )
    .unwrap();
    let segs = bipartite_segments(2, 1).unwrap();
    let transforms = vec![vec![Circuit::new(3); 4], vec![Circuit::new(3); 2]];
    let preps = vec![segs[0].prep.clone(), segs[1].prep.clone()];
    let c = synth_partitioned(&p, &z, &transforms, &preps).unwrap();
    assert_passes(&c, &p, "generic bipartite");
    assert!(max_unitary_diff(&c, &synth_bipartite(2, 1).unwrap()) < 1e-12);
}

#[test]
fn partitioned_reproduces_wheel() {
    let p = wheel_chain(2, false, 0.85).unwrap();
    let z = Partition::new(5, vec![(0..4).collect(), vec![4]], vec![0, 4], vec![0, 0]).unwrap();
    // L^y on the low two qubits of a three-qubit register, only below row 4
    let shifts: Vec<Circuit> = (0..4u64)
        .map(|y| {
            let c = szegedy::synth::shift_circuit(2, y, Direction::Left, &[]).unwrap();
            let mut lifted = Circuit::new(3);
            lifted.append_mapped(&c, &[1, 2]).unwrap();
            szegedy::circuit::with_controls(&lifted, &[szegedy::circuit::Control::off(0)]).unwrap()
        })
        .collect();
    let segs = szegedy::synth::wheel_segments(2, false, 0.85).unwrap();
    let c = synth_partitioned(
        &p,
        &z,
        &[shifts, vec![Circuit::new(3)]],
        &[segs[0].prep.clone(), segs[1].prep.clone()],
    )
    .unwrap();
    assert_passes(&c, &p, "generic wheel");

    // agreement with the dedicated construction on the valid subspace
    let dedicated = synth_wheel(2, false, 0.85).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let s = StateVector::basis(6, i * 8 + j).unwrap();
            let (a, b) = (apply(&c, &s).unwrap(), apply(&dedicated, &s).unwrap());
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn partitioned_reports_bad_transform() {
    let p = cycle_graph(4).unwrap();
    let z = Partition::single(4, 0, 1).unwrap();
    let kb = kb_cycle(2).unwrap();
    let transforms = vec![vec![Circuit::new(2); 4]];
    let err = synth_partitioned(&p, &z, &transforms, &[kb.circuit]).unwrap_err();
    assert!(
        matches!(
            err,
            Error::Precondition {
                subset: 0,
                member: 1,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn complete_angles_need_square_roots() {
    // the literal ratio as cos(theta) instead of cos^2(theta)
    let n = 3;
    let literal: Vec<f64> = (1..n)
        .map(|i| {
            let a = (1u64 << (n - i)) as f64;
            ((a - 1.0) / (2.0 * a - 1.0)).acos()
        })
        .collect();
    let kb = kb_complete_with_angles(n, &literal).unwrap();
    let t = controlled_shift_transform(n, 1, Direction::Left).unwrap();
    let c = synth_single_reference(n, &t, &kb.circuit, kb.basis).unwrap();
    let r = verify(&c, &complete_graph(8).unwrap()).unwrap();
    assert!(!r.pass);
    assert!(r.max_deviation > 1e-3);
}

#[test]
fn verify_rejects_wrong_width() {
    let c = synth_circulant(3, &CirculantColumn::Cycle, 1).unwrap();
    assert!(matches!(
        verify(&c, &cycle_graph(16).unwrap()),
        Err(Error::WidthMismatch { .. })
    ));
}
