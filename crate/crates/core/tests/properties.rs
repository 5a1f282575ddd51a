// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Property tests across the Gaussian and Fock engines.

use mesq::algebra::{structure_matrix, StructureKind};
use mesq::dynamics::*;
use mesq::fock::FockSpace;
use mesq::gaussian::{self, GaussianState, QuadraticGenerator, SymplecticMap};
use mesq::linalg::{max_abs, symplectic_form};
use mesq::states::{self, eigen_residual, ideal_entangled_vector, StateLabel, Variant};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn generator_strategy(n: usize) -> impl Strategy<Value = QuadraticGenerator> {
    let m = 2 * n;
    (prop::collection::vec(-1.0f64..1.0, m * m), prop::collection::vec(-1.0f64..1.0, m)).prop_map(move |(a, b)| {
        let a = DMatrix::from_vec(m, m, a);
        let a = (&a + a.transpose()) * 0.25;
        QuadraticGenerator::new(a, DVector::from_vec(b), "random").unwrap()
    })
}

fn lambdas(n: usize, bound: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-bound..bound, n)
}

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    max_abs(&(a - b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_flows_are_symplectic(g in generator_strategy(3), t in -1.5f64..1.5) {
        let m = gaussian::symplectic_of_generator(&g, t).unwrap();
        prop_assert!(m.symplectic_error() < 1e-10);
    }

    #[test]
    fn flow_composed_with_reverse_is_identity(g in generator_strategy(2), t in -1.0f64..1.0) {
        let f = gaussian::symplectic_of_generator(&g, t).unwrap();
        let b = gaussian::symplectic_of_generator(&g, -t).unwrap();
        let id = f.then(&b).unwrap();
        prop_assert!(close(id.s(), &DMatrix::identity(4, 4)) < 1e-10);
        prop_assert!(id.d().amax() < 1e-10);
        let inv = f.inverse();
        prop_assert!(close(inv.s(), b.s()) < 1e-10);
    }

    #[test]
    fn squeeze_and_its_negative_cancel(l in lambdas(4, 1.0)) {
        let p = SqueezeParams::new(l).unwrap();
        let id = squeeze_sn(&p).unwrap().then(&squeeze_sn(&p.scaled(-1.0)).unwrap()).unwrap();
        prop_assert!(close(id.s(), &DMatrix::identity(8, 8)) < 1e-10);
    }

    #[test]
    fn squeeze_scales_every_direction(l in lambdas(3, 1.0)) {
        let map = squeeze_sn(&SqueezeParams::new(l.clone()).unwrap()).unwrap();
        let p = states::total_momentum(3);
        let img = transport_observable(&map, &p).unwrap().coeffs;
        prop_assert!((img - &p * (-l[0]).exp()).amax() < 1e-12);
        for k in 1..3 {
            let q = states::relative_coordinate(3, k);
            let img = transport_observable(&map, &q).unwrap().coeffs;
            prop_assert!((img - &q * (-l[k]).exp()).amax() < 1e-12);
        }
    }

    #[test]
    fn splitters_are_passive(theta in 0.0f64..std::f64::consts::TAU, i in 0usize..4, j in 0usize..4) {
        prop_assume!(i != j);
        let m = beam_splitter_map(&BeamSplitterSpec::new(i, j, theta).unwrap(), 4).unwrap();
        prop_assert!(m.symplectic_error() < 1e-14);
        let out = gaussian::apply_map(&gaussian::vacuum(4).unwrap(), &m).unwrap();
        prop_assert!(close(out.cov(), &(DMatrix::identity(8, 8) * 0.5)) < 1e-14);
    }

    #[test]
    fn epr_output_is_centred_and_symmetric(n in 3usize..6, r in 0.0f64..2.5) {
        for v in [EprVariant::PChiZero, EprVariant::ChiPZero] {
            let s = generate_epr(n, r, v).unwrap();
            prop_assert!(s.mean().amax() < 1e-15);
            let c = s.cov();
            let mut perm: Vec<usize> = (0..2 * n).collect();
            perm.swap(1, n - 1);
            perm.swap(n + 1, 2 * n - 1);
            let pc = DMatrix::from_fn(2 * n, 2 * n, |a, b| c[(perm[a], perm[b])]);
            prop_assert!(close(&pc, c) < 1e-12);
        }
    }

    #[test]
    fn overlap_is_a_fidelity(g in generator_strategy(2), h in generator_strategy(2)) {
        let vac = gaussian::vacuum(2).unwrap();
        let a = gaussian::apply_map(&vac, &gaussian::symplectic_of_generator(&g, 1.0).unwrap()).unwrap();
        let b = gaussian::apply_map(&vac, &gaussian::symplectic_of_generator(&h, 1.0).unwrap()).unwrap();
        let f = gaussian::overlap(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - gaussian::overlap(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((gaussian::overlap(&a, &a).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pairwise_hamiltonian_is_permutation_symmetric(n in 2usize..6, bc in -2.0f64..2.0) {
        let a = pfister_hamiltonian(n, bc).unwrap().a().clone();
        let mut perm: Vec<usize> = (0..2 * n).collect();
        perm.swap(0, n - 1);
        perm.swap(n, 2 * n - 1);
        let pa = DMatrix::from_fn(2 * n, 2 * n, |x, y| a[(perm[x], perm[y])]);
        prop_assert!(close(&pa, &a) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn amplitudes_reproduce_moments(g in generator_strategy(2)) {
        let g = g.scale(0.4);
        let s = gaussian::apply_map(&gaussian::vacuum(2).unwrap(), &gaussian::symplectic_of_generator(&g, 1.0).unwrap()).unwrap();
        let v = gaussian::fock_amplitudes(&s, FockSpace::new(2, 30).unwrap()).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-8);
        let (m, c) = gaussian::fock_moments(&v).unwrap();
        prop_assert!((m - s.mean()).amax() < 1e-7);
        prop_assert!(close(&c, s.cov()) < 1e-7);
    }

    #[test]
    fn ideal_states_are_eigenvectors(p in -1.5f64..1.5, chi in -1.5f64..1.5, conj in any::<bool>()) {
        let variant = if conj { Variant::ChiP } else { Variant::PChi };
        let label = StateLabel::new(variant, p, vec![chi]).unwrap();
        let v = ideal_entangled_vector(FockSpace::new(2, 12).unwrap(), &label).unwrap();
        for (name, ratio) in eigen_residual(&v.vector, &label).unwrap() {
            prop_assert!(ratio <= 1e-10, "{} {}", name, ratio);
        }
    }

    #[test]
    fn literal_squeeze_is_unitary(l in lambdas(2, 0.5)) {
        let p = SqueezeParams::new(l).unwrap();
        prop_assert!(fock_squeeze_gram_defect(2, &p, 10, 30).unwrap() <= 1e-8);
    }

    #[test]
    fn literal_exponent_is_anti_hermitian(l in lambdas(3, 0.5)) {
        let space = FockSpace::new(3, 8).unwrap();
        let e = squeeze_sn_exponent(space, &SqueezeParams::new(l).unwrap()).unwrap();
        prop_assert!(e.add(&e.adjoint()).unwrap().project(6).max_abs() <= 1e-12);
    }
}

#[test]
fn inverse_structure_matrices() {
    for n in 2..=8 {
        let f = structure_matrix(StructureKind::F, n).unwrap();
        let fi = structure_matrix(StructureKind::Finv, n).unwrap();
        assert!(close(&(f.entries() * fi.entries()), &DMatrix::identity(n - 1, n - 1)) < 1e-12);
    }
}

#[test]
fn collective_quadratures_are_canonical() {
    for n in 2..6 {
        let x = collective_x(n);
        let y = collective_y(n);
        let bracket = (x.transpose() * symplectic_form(n) * &y)[(0, 0)];
        assert!((bracket - 0.5).abs() < 1e-14);
    }
}

#[test]
fn identity_map_leaves_state_unchanged() {
    let s = GaussianState::new(DVector::from_vec(vec![0.3, -0.2, 0.1, 0.4]), DMatrix::identity(4, 4) * 0.5).unwrap();
    let map = SymplecticMap::identity(2);
    let out = gaussian::apply_map(&s, &map).unwrap();
    assert_eq!(out, s);
}
