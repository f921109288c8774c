//! Randomized properties of the exact kernels and the algebra operations.

use proptest::prelude::*;

use toricbv::bv::existence;
use toricbv::fanfile::corpus_fan;
use toricbv::linalg::fourier_motzkin::{feasible_point, Halfspace};
use toricbv::linalg::{inconsistency_certificate, kernel_basis, rank, rat, solve_affine, RatMatrix, Rational};
use toricbv::{CharacterVector, Fan, LatticeVector, Multivector, PolyvectorSpace};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols)
        .prop_map(move |v| RatMatrix::new(rows, cols, v.into_iter().map(rat).collect()).unwrap())
}

fn shaped_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))
}

fn multivector(n: usize, k: usize) -> impl Strategy<Value = Multivector> {
    let blades = toricbv::Blade::all_of_grade(n, k);
    prop::collection::vec(-2i64..=2, blades.len()).prop_map(move |cs| {
        Multivector::from_terms(n, k, blades.iter().copied().zip(cs.into_iter().map(rat))).unwrap()
    })
}

fn covector(n: usize) -> impl Strategy<Value = CharacterVector> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| CharacterVector::from_i64(&v))
}

proptest! {
    #[test]
    fn kernel_vectors_are_annihilated(m in shaped_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn solvability_matches_rank_test(m in shaped_matrix(), b in prop::collection::vec(-3i64..=3, 4)) {
        let b: Vec<Rational> = b.into_iter().take(m.rows()).map(rat).collect();
        let consistent = rank(&m) == rank(&m.augment(&b).unwrap());
        match solve_affine(&m, &b).unwrap() {
            Some(sol) => {
                prop_assert!(consistent);
                prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), b);
                prop_assert_eq!(sol.dimension(), m.cols() - rank(&m));
            }
            None => {
                prop_assert!(!consistent);
                let y = inconsistency_certificate(&m, &b).unwrap().unwrap();
                let yt = RatMatrix::new(1, y.len(), y.clone()).unwrap();
                prop_assert!(yt.mul(&m).unwrap().is_zero());
                let yb: Rational = y.iter().zip(&b).map(|(a, c)| a * c).sum();
                prop_assert_eq!(yb, rat(1));
            }
        }
    }

    #[test]
    fn feasible_points_satisfy_their_system(rows in prop::collection::vec((prop::collection::vec(-2i64..=2, 2), -3i64..=3), 1..6)) {
        let system: Vec<Halfspace> =
            rows.iter().map(|(a, b)| Halfspace::new(a.iter().copied().map(rat).collect(), rat(*b))).collect();
        if let Some(x) = feasible_point(&system, 2) {
            prop_assert!(system.iter().all(|h| h.contains(&x)));
        }
    }

    #[test]
    fn contraction_is_an_antiderivation(
        (a, b, alpha) in (0usize..=3, 0usize..=3).prop_flat_map(|(k, l)| (multivector(3, k), multivector(3, l), covector(3))),
    ) {
        let lhs = a.wedge(&b).unwrap().contract(&alpha).unwrap();
        let sign = if a.degree() % 2 == 0 { rat(1) } else { rat(-1) };
        let rhs = a.contract(&alpha).unwrap().wedge(&b).unwrap()
            .add(&a.wedge(&b.contract(&alpha).unwrap()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contractions_anticommute(a in multivector(4, 2), x in covector(4), y in covector(4)) {
        let xy = a.contract(&x).unwrap().contract(&y).unwrap();
        let yx = a.contract(&y).unwrap().contract(&x).unwrap();
        prop_assert!(xy.add(&yx).unwrap().is_zero());
        prop_assert!(a.contract(&x).unwrap().contract(&x).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(a in multivector(3, 1), b in multivector(3, 2)) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn ray_order_does_not_matter(name in prop::sample::select(vec!["P2", "F1", "F2", "dP6", "blowup16"]), shift in 0usize..16) {
        let fan = corpus_fan(name).unwrap();
        let r = fan.rays().len();
        let perm: Vec<usize> = (0..r).map(|i| (i + shift) % r).collect();
        // ray i moves to position perm[i]
        let mut rays = vec![LatticeVector(vec![]); r];
        for (i, ray) in fan.rays().iter().enumerate() {
            rays[perm[i]] = ray.clone();
        }
        let cones = fan.max_cones().iter().map(|c| c.iter().map(|&i| perm[i]).collect()).collect();
        let moved = Fan::new(fan.dim(), rays, cones).unwrap();
        let (a, b) = (PolyvectorSpace::new(&fan).unwrap(), PolyvectorSpace::new(&moved).unwrap());
        prop_assert_eq!(a.dims(), b.dims());
        prop_assert_eq!(
            existence(a.polytope(), a.points()).unwrap().exists,
            existence(b.polytope(), b.points()).unwrap().exists
        );
    }
}
