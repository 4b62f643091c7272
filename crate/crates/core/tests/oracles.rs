//! Known subsystem relations on small parity and minor spaces, checked with
//! both the quotient-set definition and the operator-set engine.

use entbundle::embeddings::edge_subsystem;
use entbundle::instances::{k5_parity, worked_example};
use entbundle::sim::{entanglement_spectrum, random_coefficients};
use entbundle::subspace::{quotient_set, subsystems_equivalent};
use entbundle::{EdgeSubset, MinorEmbedding, ParityEmbedding, StateVector, Subsystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn edges(pe: &ParityEmbedding, pairs: &[[u32; 2]]) -> EdgeSubset {
    let h = pe.logical();
    EdgeSubset::from_indices(h.num_edges(), pairs.iter().map(|p| h.edge_position(p).unwrap()))
}

/// Decides equivalence both ways and insists they agree.
fn equivalent(pe: &ParityEmbedding, a: &EdgeSubset, b: &EdgeSubset) -> bool {
    let r = pe.enumerate_states().unwrap();
    let oracle = subsystems_equivalent(&r, &edge_subsystem(a), &edge_subsystem(b));
    assert_eq!(pe.equivalent(a, b), oracle, "engine and oracle disagree on {a:?} vs {b:?}");
    oracle
}

#[test]
fn worked_example_quotients() {
    let r = worked_example();
    let q1 = quotient_set(&r, &Subsystem::from_qubits(3, &[1]).unwrap());
    assert_eq!(q1.len(), 2);
    let q2 = quotient_set(&r, &Subsystem::from_qubits(3, &[2]).unwrap());
    let q3 = quotient_set(&r, &Subsystem::from_qubits(3, &[3]).unwrap());
    assert_eq!(q2, q3);
    assert!(subsystems_equivalent(
        &r,
        &Subsystem::from_qubits(3, &[2]).unwrap(),
        &Subsystem::from_qubits(3, &[1, 3]).unwrap()
    ));
    assert!(!subsystems_equivalent(
        &r,
        &Subsystem::from_qubits(3, &[1]).unwrap(),
        &Subsystem::from_qubits(3, &[2]).unwrap()
    ));
}

#[test]
fn line_bundle_members() {
    let pe = k5_parity();
    let line = pe.logical().logical_line(3).unwrap();
    let rest = line.complement();
    let inside = [
        edges(&pe, &[[0, 2], [2, 4], [1, 4]]),
        edges(&pe, &[[0, 2], [2, 4], [1, 4], [0, 1]]),
        edges(&pe, &[[0, 2], [2, 4], [1, 2]]),
        rest.clone(),
    ];
    for a in &inside {
        assert!(equivalent(&pe, &line, a), "{a:?} should share the bundle of L_3");
    }
    let outside =
        [edges(&pe, &[[0, 1], [1, 4], [0, 4]]), edges(&pe, &[[0, 1], [1, 4]]), edges(&pe, &[[0, 2], [2, 4], [0, 4]])];
    for b in &outside {
        assert!(!equivalent(&pe, &line, b), "{b:?} should not share the bundle of L_3");
    }
    // The lowest two are one bundle, the triangle on {0, 2, 4} another.
    assert!(equivalent(&pe, &outside[0], &outside[1]));
    assert!(!equivalent(&pe, &outside[0], &outside[2]));
}

#[test]
fn cycle_and_disconnected_classes() {
    let pe = k5_parity();
    let c = pe.classify().unwrap();
    let cycle = edges(&pe, &[[1, 3], [3, 4], [1, 4]]);
    let with_edge = edges(&pe, &[[1, 3], [3, 4], [1, 4], [0, 2]]);
    for a in [&cycle, &with_edge] {
        let k = c.bundle_index(&edge_subsystem(a));
        assert_eq!(c.bundles()[k].num_members(), 8);
    }
    assert!(!equivalent(&pe, &cycle, &with_edge));
    assert!(equivalent(&pe, &with_edge, &edges(&pe, &[[1, 3], [3, 4], [0, 2]])));
}

#[test]
fn spanning_pair_spectrum_is_coefficient_moduli() {
    let pe = k5_parity();
    let a = edges(&pe, &[[0, 1], [1, 2], [2, 3], [3, 4]]);
    assert!(pe.logical().spans_connected(&a) && pe.logical().spans_connected(&a.complement()));
    assert_eq!(pe.operator_set(&a).operator_count(), 1);
    assert_eq!(pe.operator_set(&a.complement()).operator_count(), 1);

    let r = pe.enumerate_states().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi = StateVector::from_subspace(&r, &random_coefficients(r.len(), &mut rng)).unwrap();
    let mut expected: Vec<f64> = psi.coefficients_in(&r).unwrap().iter().map(|c| c.norm_sqr()).collect();
    expected.sort_by(|x, y| y.total_cmp(x));
    let s = entanglement_spectrum(&psi, &edge_subsystem(&a)).unwrap();
    for (x, y) in s.values.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn minor_chain_subsystems() {
    // Chains {1,2,3}, {4,5}, {6}.
    let me = MinorEmbedding::from_chain_sizes(&[3, 2, 1]).unwrap();
    let r = me.enumerate_states().unwrap();
    assert_eq!(r.len(), 8);
    let sub = |q: &[usize]| Subsystem::from_qubits(6, q).unwrap();
    // Cutting a chain anywhere gives the same bipartition up to equivalence.
    assert!(me.equivalent(&sub(&[1]), &sub(&[1, 2])));
    assert!(subsystems_equivalent(&r, &sub(&[1]), &sub(&[1, 2])));
    // Whole chains on one side: product state across the cut.
    assert_eq!(me.operator_set(&sub(&[1, 2, 3])).operator_count(), 4);
    assert!(!me.equivalent(&sub(&[1]), &sub(&[4])));
    let c = me.classify().unwrap();
    assert_eq!(c, entbundle::subspace::classify_subspace(&r).unwrap());
}

#[test]
fn k3_parity_space() {
    let pe = entbundle::instances::complete_parity(3);
    let r = pe.enumerate_states().unwrap();
    // Two vertices fix the parity of the third edge: 4 states on 3 qubits.
    assert_eq!(r.len(), 4);
    for s in r.states() {
        assert_eq!(s.0.count_ones() % 2, 1);
    }
}
