//! Symmetries, boundary handling and convention equivalence on lattices too
//! large for the dense oracle.

use lgt_tadpole::chain::{self, ChainSpec};
use lgt_tadpole::eigen::{lowest_eigenpair, EigenOptions};
use lgt_tadpole::honeycomb::{self, HoneycombSpec};
use lgt_tadpole::pauli::{apply, to_dense, Operator};
use lgt_tadpole::propagate::{step_propagate, PropagatorOptions};
use lgt_tadpole::{Model, ModelOperators, PauliSum, StateVector, TadpoleField, TadpoleKind};
use num_complex::Complex64 as C64;

fn seeded_state(n: usize, seed: u64) -> StateVector {
    let amps = (0..1usize << n)
        .map(|k| {
            let t = (k as f64 + 1.0) * (seed as f64 + 0.37);
            C64::new(t.sin(), (1.7 * t).cos())
        })
        .collect();
    StateVector::from_amplitudes(n, amps).unwrap().normalized().unwrap()
}

/// Moves qubit `q` to `map(q)`.
fn relabel(psi: &StateVector, map: impl Fn(usize) -> usize) -> StateVector {
    let n = psi.n_qubits();
    let mut out = vec![C64::default(); psi.dim()];
    for (b, a) in psi.amplitudes().iter().enumerate() {
        let nb = (0..n).fold(0, |acc, q| acc | ((b >> q & 1) << map(q)));
        out[nb] = *a;
    }
    StateVector::from_amplitudes(n, out).unwrap()
}

#[test]
fn chain_translation_covariance() {
    let l = 7;
    let spec = ChainSpec::new(l, 0.6).unwrap();
    let psi = seeded_state(l, 1);
    let shifted = relabel(&psi, |q| (q + 1) % l);
    for i in 0..l {
        let j = (i + 1) % l;
        for (a, b) in [
            (chain::plaquette_op(&spec, i).unwrap(), chain::plaquette_op(&spec, j).unwrap()),
            (
                chain::plaquette_electric_energy_op(&spec, i).unwrap(),
                chain::plaquette_electric_energy_op(&spec, j).unwrap(),
            ),
        ] {
            let lhs = relabel(&apply(&a, &psi).unwrap(), |q| (q + 1) % l);
            let rhs = apply(&b, &shifted).unwrap();
            assert!(lhs.distance(&rhs) < 1e-13);
        }
    }
    let h = chain::electric_hamiltonian(&spec);
    let lhs = relabel(&apply(&h, &psi).unwrap(), |q| (q + 1) % l);
    assert!(lhs.distance(&apply(&h, &shifted).unwrap()) < 1e-13);
}

#[test]
fn chain_reflection_symmetry() {
    // i -> -i mod L fixes plaquette 0
    let l = 8;
    let spec = ChainSpec::new(l, 0.5).unwrap();
    let field = TadpoleField::ones(TadpoleKind::Chain, l);
    let h = chain::hamiltonian(&spec, &field).unwrap();
    let psi = seeded_state(l, 2);
    let reflect = |q: usize| (l - q) % l;
    let lhs = relabel(&apply(&h, &psi).unwrap(), reflect);
    let rhs = apply(&h, &relabel(&psi, reflect)).unwrap();
    assert!(lhs.distance(&rhs) < 1e-12);
}

#[test]
fn basis_change_maps_between_conventions() {
    for l in [4, 6, 8] {
        let spec = ChainSpec::new(l, 0.5).unwrap();
        let field = TadpoleField::new(TadpoleKind::Chain, (0..l).map(|i| 1.0 + 0.03 * i as f64).collect()).unwrap();
        let u = chain::basis_change_unitary(&spec).unwrap().to_pauli_sum().unwrap();
        let eye = PauliSum::identity(l).unwrap();
        assert!(u.multiply(&u.adjoint()).unwrap().max_coefficient_diff(&eye) < 1e-14);
        let h = chain::hamiltonian(&spec, &field).unwrap();
        let conj = u.multiply(&h).unwrap().multiply(&u.adjoint()).unwrap();
        let alt = chain::alt_hamiltonian(&spec, &field).unwrap();
        assert!(conj.max_coefficient_diff(&alt) < 1e-13, "L={l}");
    }
    let odd = ChainSpec::new(5, 0.5).unwrap();
    assert!(chain::basis_change_unitary(&odd).is_err());
}

#[test]
fn honeycomb_frozen_boundary_equals_embedding_in_zero_background() {
    // a 2x2 patch placed at offset (1,1) in a 4x4 lattice whose other cells are |0>
    let small = HoneycombSpec::new(2, 2, 0.7).unwrap();
    let big = HoneycombSpec::new(4, 4, 0.7).unwrap();
    let place = |q: usize| {
        let (i, j) = small.cell(q);
        big.qubit(i as isize + 1, j as isize + 1).unwrap()
    };
    let embed = |psi: &StateVector| {
        let mut out = vec![C64::default(); 1 << 16];
        for (b, a) in psi.amplitudes().iter().enumerate() {
            let nb = (0..4).fold(0, |acc, q| acc | ((b >> q & 1) << place(q)));
            out[nb] = *a;
        }
        StateVector::from_amplitudes(16, out).unwrap()
    };
    let psi = seeded_state(4, 3);
    let big_psi = embed(&psi);
    for q in 0..4 {
        let (i, j) = small.cell(q);
        let pairs = [
            (
                honeycomb::hex_plaquette_op(&small, i, j).unwrap(),
                honeycomb::hex_plaquette_op(&big, i + 1, j + 1).unwrap(),
            ),
            (
                honeycomb::hex_electric_energy_op(&small, i, j).unwrap(),
                honeycomb::hex_electric_energy_op(&big, i + 1, j + 1).unwrap(),
            ),
        ];
        for (s, b) in pairs {
            let lhs = embed(&apply(&s, &psi).unwrap());
            let rhs = apply(&b, &big_psi).unwrap();
            assert!(lhs.distance(&rhs) < 1e-13);
        }
    }
    let lhs = embed(&apply(&honeycomb::hex_electric_hamiltonian(&small), &psi).unwrap());
    let rhs = apply(&honeycomb::hex_electric_hamiltonian(&big), &big_psi).unwrap();
    assert!(lhs.distance(&rhs) < 1e-12);
}

#[test]
fn honeycomb_inversion_symmetry() {
    let (lx, ly) = (3, 3);
    let spec = HoneycombSpec::new(lx, ly, 0.5).unwrap();
    let n = lx * ly;
    let invert = |q: usize| {
        let (i, j) = spec.cell(q);
        spec.qubit((lx - 1 - i) as isize, (ly - 1 - j) as isize).unwrap()
    };
    let vals: Vec<f64> = (0..n).map(|q| 1.0 + 0.01 * (q.min(invert(q))) as f64).collect();
    let field = TadpoleField::new(TadpoleKind::Honeycomb, vals).unwrap();
    let h = honeycomb::hamiltonian(&spec, &field).unwrap();
    let psi = seeded_state(n, 4);
    let lhs = relabel(&apply(&h, &psi).unwrap(), invert);
    let rhs = apply(&h, &relabel(&psi, invert)).unwrap();
    assert!(lhs.distance(&rhs) < 1e-12);
}

#[test]
fn krylov_paths_agree_with_dense_on_eight_sites() {
    let model = Model::Chain(ChainSpec::new(8, 0.5).unwrap());
    let ops = ModelOperators::new(model).unwrap();
    let field = TadpoleField::new(TadpoleKind::Chain, (0..8).map(|i| 1.1 + 0.02 * i as f64).collect()).unwrap();
    let h = ops.hamiltonian(&field).unwrap();

    let dense = lowest_eigenpair(&h, &EigenOptions { dense_max_qubits: 8, ..Default::default() }).unwrap();
    let lanczos = lowest_eigenpair(&h, &EigenOptions { dense_max_qubits: 0, ..Default::default() }).unwrap();
    assert!((dense.energy - lanczos.energy).abs() < 1e-10);
    let overlap = dense.state.inner(&lanczos.state).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-10);
    let dense_gap = dense.gap_estimate.unwrap();
    let ritz_gap = lanczos.gap_estimate.unwrap();
    // Ritz values bound the excited level from above
    assert!(ritz_gap > dense_gap - 1e-8 && ritz_gap < 1.01 * dense_gap, "{ritz_gap} vs {dense_gap}");

    let psi = StateVector::basis(8, 1).unwrap();
    let a = step_propagate(&h, &psi, 0.025, &PropagatorOptions { dense_max_qubits: 8, ..Default::default() }).unwrap();
    let b = step_propagate(&h, &psi, 0.025, &PropagatorOptions { dense_max_qubits: 0, ..Default::default() }).unwrap();
    assert!(a.distance(&b) < 1e-11);
    let long_a = step_propagate(&h, &psi, 1.5, &PropagatorOptions { dense_max_qubits: 8, ..Default::default() }).unwrap();
    let long_b = step_propagate(&h, &psi, 1.5, &PropagatorOptions { dense_max_qubits: 0, krylov_dim: 12, ..Default::default() }).unwrap();
    assert!(long_a.distance(&long_b) < 1e-10);
    assert!(to_dense(&chain::hamiltonian(&ChainSpec::new(8, 0.5).unwrap(), &field).unwrap()).is_ok());
    assert_eq!(h.n_qubits(), 8);
}
