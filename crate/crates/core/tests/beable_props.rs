use beablekit::algebra::{commutant, generate_star_algebra, GeneratorSet, OperatorAlgebra};
use beablekit::beable::{
    closure_subspace, extend_to_maximal_beable, is_beable, is_beable_via_compression, is_maximal_beable,
    maximal_rbeable, membership_fast, rbeable_vector_state, Membership,
};
use beablekit::algebra::is_abelian;
use beablekit::random::{self, seeded};
use beablekit::states::State;
use beablekit::{CVector, ComplexMatrix, Tolerance, C64};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_combination(rng: &mut ChaCha8Rng, basis: &[CVector], n: usize) -> CVector {
    let mut v = CVector::zeros(n);
    for b in basis {
        let c = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        v += b * c;
    }
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// A beable pair, resampled until the verdict holds.
fn beable_pair(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> (OperatorAlgebra, State) {
    loop {
        let (b, rho) = random::algebra_state_pair(rng, n, tol);
        if is_beable(&b, &rho, tol).is_beable {
            return (b, rho);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn two_beable_tests_agree(seed in any::<u64>(), n in 2usize..=6) {
        let tol = Tolerance::for_dim(n);
        let (b, rho) = random::algebra_state_pair(&mut seeded(seed), n, &tol);
        prop_assert_eq!(is_beable(&b, &rho, &tol).is_beable, is_beable_via_compression(&b, &rho, &tol).unwrap());
    }

    #[test]
    fn beable_for_state_iff_beable_for_range_vectors(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let (b, rho) = random::algebra_state_pair(&mut rng, n, &tol);
        let verdict = is_beable(&b, &rho, &tol).is_beable;
        let mut all = true;
        for cl in &rho.spectral().clusters {
            if cl.value <= tol.rank_tol {
                continue;
            }
            for x in &cl.basis {
                all &= is_beable(&b, &State::from_vector(x, &tol).unwrap(), &tol).is_beable;
            }
        }
        if verdict {
            prop_assert!(all);
        }
        // a generic vector of the range witnesses failure
        let x = random_combination(&mut rng, rho.range().basis(), n);
        let at_x = is_beable(&b, &State::from_vector(&x, &tol).unwrap(), &tol).is_beable;
        prop_assert_eq!(verdict, at_x);
    }

    #[test]
    fn beable_passes_to_closure_vectors(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let (b, rho) = beable_pair(&mut rng, n, &tol);
        let t = closure_subspace(&b, rho.range(), &tol).unwrap();
        for _ in 0..20 {
            let x = random_combination(&mut rng, t.basis(), n);
            prop_assert!(is_beable(&b, &State::from_vector(&x, &tol).unwrap(), &tol).is_beable);
        }
    }

    #[test]
    fn faithful_beable_is_abelian(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let rho = random::state(&mut rng, n, n, &tol);
        let b = if rng.random_bool(0.5) {
            random::abelian_algebra(&mut rng, n)
        } else {
            random::block_algebra(&mut rng, n).0
        };
        if is_beable(&b, &rho, &tol).is_beable {
            prop_assert!(is_abelian(&b, &tol).abelian);
        }
    }

    #[test]
    fn extension_is_maximal_superset(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let (b0, rho) = beable_pair(&mut rng, n, &tol);
        let b = extend_to_maximal_beable(&b0, &rho, &tol).unwrap();
        prop_assert!(b.containment_residual(&b0) <= 1e-7);
        prop_assert!(is_maximal_beable(&b, &rho, &tol).unwrap());
        let again = generate_star_algebra(&b, &tol).unwrap();
        prop_assert!(again.span_equals(&b, &tol));
    }

    #[test]
    fn subalgebras_of_beable_are_beable(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let (b, rho) = beable_pair(&mut rng, n, &tol);
        let h = b.hermitian_basis(&tol);
        let mut x = ComplexMatrix::zeros(n);
        for e in &h {
            if rng.random_bool(0.5) {
                x = &x + &e.scale_real(rng.random::<f64>());
            }
        }
        let sub = generate_star_algebra(&[x][..], &tol).unwrap();
        prop_assert!(is_beable(&sub, &rho, &tol).is_beable);
    }

    #[test]
    fn vector_state_algebra_is_maximal_abelian_on_range(seed in any::<u64>(), n in 2usize..=5) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let rank = rng.random_range(1..n);
        let r = GeneratorSet::new(n, vec![random::projection(&mut rng, n, rank)], "R").unwrap();
        let v = random::unit_vector(&mut rng, n);
        let res = rbeable_vector_state(&r, &v, &tol).unwrap();
        let s = &res.privileged_subspace;
        let compressed = res.algebra.compress_to(s, &tol).unwrap();
        let comm = commutant(&compressed, &tol).unwrap();
        prop_assert!(comm.span_equals(&compressed, &tol));
        let again = generate_star_algebra(&res.algebra, &tol).unwrap();
        prop_assert!(again.span_equals(&res.algebra, &tol));

        for _ in 0..4 {
            let q = if rng.random_bool(0.5) {
                let mut x = ComplexMatrix::zeros(n);
                for e in res.algebra.hermitian_basis(&tol) {
                    x = &x + &e.scale_real(rng.random::<f64>() - 0.5);
                }
                x
            } else {
                random::hermitian(&mut rng, n)
            };
            let exact = res.algebra.contains(&q, &tol);
            match membership_fast(&q, &r, &v, &tol).unwrap() {
                Membership::Member => prop_assert!(exact),
                Membership::NonMember => prop_assert!(!exact),
                Membership::Inconclusive => {}
            }
        }
    }

    #[test]
    fn maximal_rbeable_is_closed(seed in any::<u64>(), n in 2usize..=4) {
        let tol = Tolerance::for_dim(n);
        let mut rng = seeded(seed);
        let r = GeneratorSet::new(n, vec![random::projection(&mut rng, n, 1)], "R").unwrap();
        let rank = rng.random_range(1..=n);
        let rho = random::state(&mut rng, n, rank, &tol);
        let res = maximal_rbeable(&r, &rho, None, &tol).unwrap();
        let again = generate_star_algebra(&res.algebra, &tol).unwrap();
        prop_assert!(again.span_equals(&res.algebra, &tol));
        prop_assert!(is_beable(&res.algebra, &rho, &tol).is_beable);
        prop_assert!(res.algebra.contains(&r.generators()[0], &tol));
    }
}
