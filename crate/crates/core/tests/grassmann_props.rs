mod common;

use common::{decomposable, nonzero_exterior, rng, FP, Q};
use plueckerlab::exterior::binomial;
use plueckerlab::scalars::determinant;
use plueckerlab::{
    ev_m_det, eval_form, is_decomposable, mu_rank, plucker_embed, plucker_relations_hold, theorem31_classify,
    DenseMatrix, ExteriorVector, PointTuple, VerdictTag,
};
use proptest::prelude::*;

fn sample_vector(kind: u8, r: usize, d: usize, seed: u64) -> ExteriorVector {
    let mut g = rng(seed);
    match kind % 3 {
        0 => decomposable(FP, r, d, &mut g),
        1 => decomposable(FP, r, d, &mut g).add(&decomposable(FP, r, d, &mut g)).unwrap(),
        _ => nonzero_exterior(FP, d, r, &mut g),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mu_rank_bound_and_equality(
        (r, s, d) in prop_oneof![Just((2, 1, 6)), Just((2, 2, 6)), Just((3, 1, 9)), Just((3, 2, 9)), Just((3, 3, 9))],
        kind in any::<u8>(),
        seed in any::<u64>(),
    ) {
        let w = sample_vector(kind, r, d, seed);
        prop_assume!(!w.is_zero());
        let rank = mu_rank(&w, s).unwrap();
        let bound = binomial(d - r, s);
        prop_assert!(rank >= bound);
        prop_assert_eq!(rank == bound, plucker_relations_hold(&w).unwrap());
        prop_assert_eq!(is_decomposable(&w).unwrap(), plucker_relations_hold(&w).unwrap());
    }

    #[test]
    fn mu_rank_projective(kind in any::<u8>(), s in 1usize..3, seed in any::<u64>()) {
        let w = sample_vector(kind, 2, 6, seed);
        prop_assume!(!w.is_zero());
        let c = FP.sample_nonzero(&mut rng(seed ^ 0xabc));
        prop_assert_eq!(mu_rank(&w, s).unwrap(), mu_rank(&w.scale(&c), s).unwrap());
    }

    #[test]
    fn minors_transform_by_determinant(r in 1usize..4, extra in 0usize..3, seed in any::<u64>()) {
        let n = r + extra + 1;
        let mut g = rng(seed);
        let a = DenseMatrix::random(Q, r, n, &mut g);
        let gm = DenseMatrix::random(Q, r, r, &mut g);
        let (Ok(p), Ok(q)) = (plucker_embed(&a), plucker_embed(&gm.mul(&a).unwrap())) else {
            return Ok(());
        };
        let det = determinant(&gm).unwrap();
        prop_assert_eq!(q.plucker().clone(), p.plucker().scale(&det));
        prop_assert!(plucker_relations_hold(p.plucker()).unwrap());
    }

    #[test]
    fn hyperplane_criterion(engineered in any::<bool>(), seed in any::<u64>()) {
        let (r, m) = (2, 3);
        let mut g = rng(seed);
        let points: Vec<_> = (0..m)
            .map(|_| {
                let mut a = DenseMatrix::random(FP, r, r * m, &mut g);
                if engineered {
                    for i in 0..r {
                        a.set(i, r * m - 1, FP.zero());
                    }
                }
                a
            })
            .filter_map(|a| plucker_embed(&a).ok())
            .collect();
        prop_assume!(points.len() == m);
        let det = ev_m_det(&points).unwrap();
        let tuple = PointTuple::new(r, m, points.iter().map(|p| p.plucker().clone()).collect()).unwrap();
        let form = eval_form(&tuple);
        prop_assert_eq!(det.is_zero(), form.is_zero());
        prop_assert_eq!(det.clone(), form);
        if engineered {
            prop_assert!(det.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn classifier_matches_oracle(kind in any::<u8>(), seed in any::<u64>()) {
        let w = sample_vector(kind, 2, 6, seed);
        prop_assume!(!w.is_zero());
        let verdict = theorem31_classify(&w).unwrap();
        let on_cone = plucker_relations_hold(&w).unwrap();
        prop_assert_eq!(verdict.tag == VerdictTag::InGrassmannian, on_cone);
        prop_assert_eq!(verdict.threshold, 18);
        let c = FP.sample_nonzero(&mut rng(seed ^ 7));
        prop_assert_eq!(theorem31_classify(&w.scale(&c)).unwrap(), verdict);
    }
}
