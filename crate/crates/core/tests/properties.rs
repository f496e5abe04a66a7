use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swanson_core::biortho::decompose;
use swanson_core::entangle::{mode_one_coherence, reduced_density};
use swanson_core::fock::build_basis;
use swanson_core::model::{
    build_hamiltonian, closed_form_spectrum, dyson_map, operator_hamiltonian, real_hamiltonian,
    ModelParams,
};
use swanson_core::phase::{
    classify_phase, delocalized_occupation, from_zdelta, ground_state, to_zdelta, NormKind, Phase,
    ZDeltaParams,
};
use swanson_core::trotter::{doubling_ladder, trotter_error_scan, ChainParams};
use swanson_core::{OperatorMatrix, C64};

fn max_entry(m: &OperatorMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn complex_matrix(n: usize) -> impl Strategy<Value = OperatorMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        DMatrix::from_iterator(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)))
    })
}

/// Interior points with a clearly real spectrum and non-zero couplings.
fn interior_point() -> impl Strategy<Value = ModelParams> {
    (0.01f64..0.99, -2.0f64..2.0, -2.0f64..2.0)
        .prop_filter("interior", |&(_, a, b)| {
            a.abs() > 1e-2 && b.abs() > 1e-2 && 4.0 * a * b + 1.0 > 1e-2
        })
        .prop_map(|(w, a, b)| ModelParams::new(w, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn anticommutation_relations(l in 1usize..=5) {
        let basis = build_basis(l).unwrap();
        let id = basis.identity();
        let zero = OperatorMatrix::zeros(basis.dimension(), basis.dimension());
        for i in 1..=l {
            let ci = basis.annihilation(i).unwrap();
            for j in 1..=l {
                let cj = basis.annihilation(j).unwrap();
                let cjd = basis.creation(j).unwrap();
                let mixed = &ci * &cjd + &cjd * &ci;
                prop_assert_eq!(mixed, if i == j { id.clone() } else { zero.clone() });
                prop_assert_eq!(&ci * &cj + &cj * &ci, zero.clone());
                let cid = basis.creation(i).unwrap();
                prop_assert_eq!(&cid * &cjd + &cjd * &cid, zero.clone());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_residuals_and_completeness(m in (1usize..=16).prop_flat_map(complex_matrix)) {
        let sys = decompose(&m).unwrap();
        let scale = m.norm();
        prop_assert!(!sys.defective);
        for i in 0..sys.len() {
            let lambda = sys.eigenvalues[i];
            let r = &sys.right_vectors[i];
            let l = &sys.left_vectors[i];
            prop_assert!((&m * r - r * lambda).norm() <= 1e-9 * scale);
            prop_assert!((l * &m - l * lambda).norm() <= 1e-9 * scale);
            prop_assert!((r.norm() - 1.0).abs() < 1e-12);
        }
        let n = m.nrows();
        prop_assert!(max_entry(&(sys.resolution_of_identity() - OperatorMatrix::identity(n, n))) < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_numeric_solver(p in interior_point()) {
        let h = build_hamiltonian(&p);
        let cf = closed_form_spectrum(&p).unwrap();
        let sys = decompose(&h).unwrap();
        let scale = h.norm();
        let mut used = [false; 4];
        for (k, &e) in cf.energies.iter().enumerate() {
            let (j, gap) = sys
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, z)| (j, (z - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            used[j] = true;
            prop_assert!(gap < 1e-10, "E{} off by {gap}", k + 1);
            let r = DMatrix::from_column_slice(4, 1, cf.right_vectors[k].as_slice());
            let residual = (&h * &r - &r * e).norm() / (r.norm() * scale);
            prop_assert!(residual <= 1e-9);
            let l = DMatrix::from_row_slice(1, 4, cf.left_vectors[k].as_slice());
            let residual = (&l * &h - &l * e).norm() / (l.norm() * scale);
            prop_assert!(residual <= 1e-9);
        }
    }

    #[test]
    fn operator_form_agrees_with_matrix(p in interior_point()) {
        prop_assert_eq!(operator_hamiltonian(&p).unwrap(), build_hamiltonian(&p));
    }

    #[test]
    fn dyson_map_hermitizes(
        w in 0.01f64..0.99,
        a in 0.01f64..1.0,
        b in 0.01f64..1.0,
        sign in prop::bool::ANY,
    ) {
        let s = if sign { 1.0 } else { -1.0 };
        let p = ModelParams::new(w, s * a, s * b).unwrap();
        let pair = dyson_map(&p).unwrap();
        let h = pair.transform(&real_hamiltonian(&p)).unwrap();
        let asym = (h - h.transpose()).abs().max();
        prop_assert!(asym <= 1e-12, "asymmetry {asym}");
        let mut ours: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        let mut theirs: Vec<f64> = closed_form_spectrum(&p).unwrap().energies.iter().map(|z| z.re).collect();
        ours.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ground_state_invariants(w in 0.01f64..0.49, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let p = ModelParams::new(w, a, b).unwrap();
        prop_assume!(p.discriminant() >= 0.0);
        let phase = classify_phase(&p).unwrap();
        prop_assume!(phase != Phase::Boundary);
        for kind in [NormKind::DiracLeft, NormKind::DiracRight] {
            let g = ground_state(&p, kind).unwrap();
            prop_assert_eq!(g.branch, phase);
            let rho = reduced_density(&g).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
            prop_assert!(rho.entropy >= 0.0 && rho.entropy <= std::f64::consts::LN_2 + 1e-12);
            prop_assert_eq!(mode_one_coherence(&g).unwrap(), C64::new(0.0, 0.0));
            match phase {
                Phase::Localized => {
                    prop_assert_eq!((g.n1, g.n2), (1.0, 0.0));
                    prop_assert_eq!(rho.entropy, 0.0);
                }
                _ => {
                    prop_assert!((g.n1 - g.n2).abs() < 1e-12);
                    if a != 0.0 && b != 0.0 {
                        let closed = delocalized_occupation(to_zdelta(a, b), kind);
                        prop_assert!((g.n1 - closed).abs() < 1e-12);
                    }
                }
            }
        }
        // α ↔ β exchanges the roles of the left and right vectors.
        let swapped = ModelParams::new(w, b, a).unwrap();
        let s_left = reduced_density(&ground_state(&p, NormKind::DiracLeft).unwrap()).unwrap().entropy;
        let s_right = reduced_density(&ground_state(&swapped, NormKind::DiracRight).unwrap()).unwrap().entropy;
        prop_assert!((s_left - s_right).abs() < 1e-12);
    }

    #[test]
    fn zdelta_round_trip_on_dyadics(i in -4096i32..4096, j in -4096i32..4096) {
        let (a, b) = (i as f64 / 1024.0, j as f64 / 1024.0);
        prop_assert_eq!(from_zdelta(to_zdelta(a, b)), (a, b));
        let zd = ZDeltaParams { z: a, delta: b };
        prop_assert_eq!(to_zdelta(from_zdelta(zd).0, from_zdelta(zd).1), zd);
    }

    #[test]
    fn zdelta_round_trip_to_ulps(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let (x, y) = from_zdelta(to_zdelta(a, b));
        let tol = 4.0 * f64::EPSILON * a.abs().max(b.abs());
        prop_assert!((x - a).abs() <= tol && (y - b).abs() <= tol);
    }
}

#[test]
fn random_chains_converge_at_first_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sites in [3, 4, 3] {
        let omegas: Vec<f64> = (0..sites).map(|_| rng.random_range(0.05..1.0)).collect();
        let mut coupling = || {
            let x: f64 = rng.random_range(0.2..1.0);
            if rng.random_bool(0.5) {
                x
            } else {
                -x
            }
        };
        let alphas: Vec<f64> = (1..sites).map(|_| coupling()).collect();
        let betas: Vec<f64> = (1..sites).map(|_| coupling()).collect();
        let p = ChainParams::new(omegas, alphas, betas).unwrap();
        let scan = trotter_error_scan(&p, 1.0, &doubling_ladder(16, 512)).unwrap();
        let slope = scan.slope.unwrap();
        assert!(
            (-1.15..=-0.85).contains(&slope),
            "L = {sites}: slope {slope}, {:?}",
            p
        );
    }
}
