//! Property tests for the invariants that hold across the whole input space
//! rather than at pinned points.

use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use qsp_energy::circuits::decompose_long_range;
use qsp_energy::energy::{EomModel, PhaseWrap};
use qsp_energy::mesh::{clements_decompose, t_matrix, Crossing, MeshProgram};
use qsp_energy::numerics::{haar_unitary, RngStream};
use qsp_energy::verify::{simulate_with, StateVector};
use qsp_energy::circuits::{Gate, GateCircuit};

fn arbitrary_crossing() -> impl Strategy<Value = Crossing> {
    (0.0..=FRAC_PI_2, 0.0..TAU).prop_map(|(theta, phi)| Crossing::new(0, 0, theta, phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t_matrix_is_always_unitary(
        dim in 2usize..10,
        theta in 0.0..=FRAC_PI_2,
        phi in 0.0..TAU,
        mode_frac in 0.0f64..1.0,
    ) {
        let top_mode = ((dim - 1) as f64 * mode_frac) as usize;
        let t = t_matrix(dim, top_mode.min(dim - 2), theta, phi).unwrap();
        prop_assert!(t.unitarity_defect() < 1e-12);
    }

    #[test]
    fn crossing_energy_is_bounded_and_nonnegative(c in arbitrary_crossing()) {
        for wrap in [PhaseWrap::Symmetric, PhaseWrap::Positive] {
            let model = EomModel { external_wrap: wrap, ..EomModel::default() };
            let e = model.crossing_energy(&c);
            prop_assert!(e >= 0.0);
            let v_pi = model.v_pi;
            let v_ext_max = match wrap {
                PhaseWrap::Symmetric => v_pi,
                PhaseWrap::Positive => 2.0 * v_pi,
            };
            let bound = model.capacitance / 2.0 * (v_pi * v_pi + v_ext_max * v_ext_max);
            prop_assert!(e <= bound + 1e-18, "e = {e}, bound = {bound}");
        }
    }

    #[test]
    fn mesh_energy_is_permutation_invariant(
        thetas in prop::collection::vec(0.0..=FRAC_PI_2, 1..12),
        phis in prop::collection::vec(0.0..TAU, 12),
        rotation in 0usize..12,
    ) {
        let crossings: Vec<Crossing> = thetas
            .iter()
            .zip(&phis)
            .enumerate()
            .map(|(i, (&theta, &phi))| Crossing::new(i, 0, theta, phi))
            .collect();
        let dim = 2;
        let model = EomModel::default();
        let base = MeshProgram { dim, crossings: crossings.clone(), output_phases: vec![0.0; dim] };
        let mut rotated = crossings;
        let k = rotation % base.crossings.len();
        rotated.rotate_left(k);
        let permuted = MeshProgram { dim, crossings: rotated, output_phases: vec![0.0; dim] };
        let a = model.mesh_energy(&base).total_j;
        let b = model.mesh_energy(&permuted).total_j;
        prop_assert!((a - b).abs() <= 1e-15 * a.max(1e-30));
    }

    #[test]
    fn energy_scales_linearly_in_c_and_quadratically_in_v_pi(c in arbitrary_crossing()) {
        let model = EomModel::default();
        let base = model.crossing_energy(&c);
        let doubled_c = EomModel { capacitance: model.capacitance * 2.0, ..model };
        prop_assert_eq!(doubled_c.crossing_energy(&c), 2.0 * base);
        let doubled_v = EomModel { v_pi: model.v_pi * 2.0, ..model };
        prop_assert_eq!(doubled_v.crossing_energy(&c), 4.0 * base);
    }

    #[test]
    fn long_range_decomposition_is_nearest_neighbor(
        control in 0usize..12,
        offset in 2usize..8,
        downward in any::<bool>(),
    ) {
        let target = if downward && control >= offset {
            control - offset
        } else {
            control + offset
        };
        let gates = decompose_long_range(control, target).unwrap();
        prop_assert_eq!(gates.len(), 2 * control.abs_diff(target) - 1);
        for gate in &gates {
            if let Gate::Cnot { control, target } = gate {
                prop_assert_eq!(control.abs_diff(*target), 1);
            }
        }
    }

    #[test]
    fn decompose_canonicalizes_and_counts(seed in 0u64..200, dim in 2usize..10) {
        let u = haar_unitary(dim, RngStream::new(seed, 0)).unwrap();
        let p = clements_decompose(&u).unwrap();
        prop_assert_eq!(p.crossing_count(), dim * (dim - 1) / 2);
        for c in &p.crossings {
            prop_assert!((0.0..=FRAC_PI_2).contains(&c.theta));
            prop_assert!((0.0..TAU).contains(&c.phi));
        }
        for phase in &p.output_phases {
            prop_assert!((0.0..TAU).contains(phase));
        }
    }

    #[test]
    fn simulation_preserves_norm(
        angles in prop::collection::vec(-PI..PI, 12),
    ) {
        let gates = vec![
            Gate::sqo_slot(0),
            Gate::sqo_slot(1),
            Gate::cnot(0, 1),
            Gate::sqo_slot(1),
            Gate::cnot(1, 0),
            Gate::sqo_slot(0),
        ];
        let circuit = GateCircuit::new(2, gates).unwrap();
        let params: Vec<[f64; 3]> = angles.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let state = simulate_with(&circuit, &params).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn haar_unitarity_holds_for_every_dim_up_to_64() {
    use qsp_energy::numerics::UNITARY_TOL;
    for dim in 1..=64usize {
        for seed in 0..100u64 {
            let u = haar_unitary(dim, RngStream::new(seed, dim as u64)).unwrap();
            let defect = u.unitarity_defect();
            assert!(
                defect < UNITARY_TOL,
                "dim {dim} seed {seed}: defect {defect:.3e}"
            );
        }
    }
}

#[test]
fn haar_first_moment_at_full_scale() {
    // E|U_ij|^2 = 1/d for every entry, 3 standard errors at 1e5 samples.
    let dim = 8;
    let samples = 100_000usize;
    let mut acc = vec![0.0f64; dim * dim];
    for t in 0..samples {
        let u = haar_unitary(dim, RngStream::new(515, t as u64)).unwrap();
        for (slot, entry) in acc.iter_mut().zip(u.entries()) {
            *slot += entry.norm_sqr();
        }
    }
    let expect = 1.0 / dim as f64;
    let var = (dim as f64 - 1.0) / ((dim * dim) as f64 * (dim as f64 + 1.0));
    let tol = 3.0 * (var / samples as f64).sqrt();
    for (idx, sum) in acc.iter().enumerate() {
        let mean = sum / samples as f64;
        assert!(
            (mean - expect).abs() < tol,
            "entry {idx}: {mean} vs {expect} +- {tol}"
        );
    }
}

#[test]
fn fidelity_stays_clamped_for_near_identical_states() {
    let a = StateVector::zero(2).unwrap();
    let b = StateVector::zero(2).unwrap();
    let f = a.fidelity(&b);
    assert!(f <= 1.0 && f >= 1.0 - 1e-12);
}
