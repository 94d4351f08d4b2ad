use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semihilbert::aops::{a_adjoint, a_numerical_radius, a_op_norm, Radius};
use semihilbert::bounds::{eval_pair, eval_single, BoundId, BoundParams};
use semihilbert::linalg::{herm_eig, herm_eigvals, numerical_radius, spectral_norm};
use semihilbert::space::{random_gaussian_matrix, random_operator_in_ba, random_space, SemiHilbertSpace};
use semihilbert::CMatrix;

fn fin(r: Radius) -> f64 {
    r.finite().expect("finite")
}

fn random_unitary(seed: u64, n: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_gaussian_matrix(&mut rng, n);
    herm_eig(&(&g + &g.adjoint())).unwrap().eigenvectors
}

fn to_na(m: &CMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eigenvalues_match_nalgebra(seed in 0u64..100_000, n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gaussian_matrix(&mut rng, n);
        let h = &g + &g.adjoint();
        let mine = herm_eigvals(&h).unwrap();
        let mut theirs: Vec<f64> = to_na(&h).symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in mine.iter().zip(&theirs) {
            prop_assert!(rel_close(*a, *b, 1e-10));
        }
        let sv = to_na(&g).singular_values().max();
        prop_assert!(rel_close(spectral_norm(&g), sv, 1e-10));
    }

    #[test]
    fn unitary_invariance(seed in 0u64..100_000, dim in 2usize..6) {
        let s = random_space(dim, seed, 0.5).unwrap();
        let t = random_operator_in_ba(&s, seed + 1);
        let u = random_unitary(seed + 2, dim);
        let a2 = u.adjoint().matmul(s.a()).matmul(&u);
        let s2 = SemiHilbertSpace::with_default_tol(a2).unwrap();
        let t2 = u.adjoint().matmul(&t).matmul(&u);
        let n1 = fin(a_op_norm(&s, &t).unwrap().value);
        let n2 = fin(a_op_norm(&s2, &t2).unwrap().value);
        prop_assert!(rel_close(n1, n2, 1e-8));
        let w1 = fin(a_numerical_radius(&s, &t).unwrap().value);
        let w2 = fin(a_numerical_radius(&s2, &t2).unwrap().value);
        prop_assert!(rel_close(w1, w2, 1e-8));
    }

    #[test]
    fn weight_scaling_invariance(seed in 0u64..100_000, dim in 2usize..6, c in 0.01f64..100.0) {
        let s = random_space(dim, seed, 0.5).unwrap();
        let t = random_operator_in_ba(&s, seed + 1);
        let sc = SemiHilbertSpace::with_default_tol(s.a().scale(c)).unwrap();
        let n1 = fin(a_op_norm(&s, &t).unwrap().value);
        let n2 = fin(a_op_norm(&sc, &t).unwrap().value);
        prop_assert!(rel_close(n1, n2, 1e-8));
        let w1 = fin(a_numerical_radius(&s, &t).unwrap().value);
        let w2 = fin(a_numerical_radius(&sc, &t).unwrap().value);
        prop_assert!(rel_close(w1, w2, 1e-8));
    }

    #[test]
    fn identity_weight_reduces_to_classical(seed in 0u64..100_000, dim in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_gaussian_matrix(&mut rng, dim);
        let s = SemiHilbertSpace::identity(dim);
        prop_assert!(a_adjoint(&s, &t).unwrap().max_abs_diff(&t.adjoint()) <= 1e-12);
        let w = fin(a_numerical_radius(&s, &t).unwrap().value);
        prop_assert!(rel_close(w, numerical_radius(&t).unwrap(), 1e-12));
    }

    #[test]
    fn bounds_hold_at_random_params(
        seed in 0u64..100_000,
        dim in 2usize..5,
        alpha in 0.0f64..=1.0,
        beta in 0.0f64..20.0,
        r in 1.0f64..3.0,
        n in 1u32..5,
    ) {
        let s = random_space(dim, seed, 0.5).unwrap();
        let t = random_operator_in_ba(&s, seed + 1);
        let u = random_operator_in_ba(&s, seed + 2);
        let p = BoundParams::new(alpha, beta, r, n).unwrap();
        for id in BoundId::ALL {
            let rep = if id.is_pair() {
                eval_pair(&s, &t, &u, id, p).unwrap()
            } else {
                eval_single(&s, &t, id, p).unwrap()
            };
            prop_assert!(rep.holds, "{id} {p:?}: lhs {} rhs {}", rep.lhs, rep.rhs);
        }
    }
}
