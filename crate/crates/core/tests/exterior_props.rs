mod common;

use common::{decomposable, nonzero_exterior, rng, FP, Q};
use plueckerlab::{plucker_relations_hold, random_exterior, ExteriorVector};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_graded_anticommutative(p in 1usize..4, q in 1usize..4, seed in any::<u64>()) {
        let n = 7;
        let mut g = rng(seed);
        let a = random_exterior(Q, n, p, &mut g).unwrap();
        let b = random_exterior(Q, n, q, &mut g).unwrap();
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        if (p * q) % 2 == 0 {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, ba.neg());
        }
    }

    #[test]
    fn wedge_associative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_exterior(FP, 8, 2, &mut g).unwrap();
        let b = random_exterior(FP, 8, 3, &mut g).unwrap();
        let c = random_exterior(FP, 8, 2, &mut g).unwrap();
        prop_assert_eq!(
            a.wedge(&b).unwrap().wedge(&c).unwrap(),
            a.wedge(&b.wedge(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn wedge_bilinear(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_exterior(Q, 6, 2, &mut g).unwrap();
        let b = random_exterior(Q, 6, 2, &mut g).unwrap();
        let c = random_exterior(Q, 6, 3, &mut g).unwrap();
        let s = Q.sample(&mut g);
        let lhs = a.scale(&s).add(&b).unwrap().wedge(&c).unwrap();
        let rhs = a.wedge(&c).unwrap().scale(&s).add(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_vectors_square_to_zero(seed in any::<u64>()) {
        let a = random_exterior(Q, 7, 3, &mut rng(seed)).unwrap();
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn relations_sound_on_decomposables(r in 1usize..5, extra in 0usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let w = decomposable(FP, r, r + extra + 1, &mut g);
        prop_assert!(plucker_relations_hold(&w).unwrap());
        // any rescaling stays decomposable
        let s = FP.sample_nonzero(&mut g);
        prop_assert!(plucker_relations_hold(&w.scale(&s)).unwrap());
    }

    #[test]
    fn relations_complete_in_degree_two(n in 4usize..8, seed in any::<u64>()) {
        let mut g = rng(seed);
        let w = if seed % 2 == 0 {
            decomposable(Q, 2, n, &mut g)
        } else {
            nonzero_exterior(Q, n, 2, &mut g)
        };
        let square_zero = w.wedge(&w).unwrap().is_zero();
        prop_assert_eq!(plucker_relations_hold(&w).unwrap(), square_zero);
    }

    #[test]
    fn json_roundtrip(degree in 0usize..5, seed in any::<u64>()) {
        let w = random_exterior(Q, 6, degree, &mut rng(seed)).unwrap();
        prop_assert_eq!(ExteriorVector::from_json(&w.to_json()).unwrap(), w.clone());
        let v = random_exterior(FP, 6, degree, &mut rng(seed)).unwrap();
        prop_assert_eq!(ExteriorVector::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn normalization_is_projective(seed in any::<u64>()) {
        let mut g = rng(seed);
        let w = random_exterior(FP, 6, 3, &mut g).unwrap();
        let s = FP.sample_nonzero(&mut g);
        prop_assert_eq!(w.normalized(), w.scale(&s).normalized());
        prop_assert!(w.projectively_eq(&w.scale(&s)));
    }
}
