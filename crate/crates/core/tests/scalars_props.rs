mod common;

use common::{rng, FP, Q};
use plueckerlab::scalars::determinant;
use plueckerlab::{mat_rank, DenseMatrix, Field};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Q), Just(FP)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(field in field_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b, c) = (field.sample(&mut g), field.sample(&mut g), field.sample(&mut g));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &field.zero(), a.clone());
        prop_assert_eq!(&a * &field.one(), a.clone());
        prop_assert!((&a + &(-a.clone())).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn token_roundtrip(field in field_strategy(), seed in any::<u64>()) {
        let a = field.sample(&mut rng(seed));
        prop_assert_eq!(field.parse_token(&a.token()).unwrap(), a);
    }

    #[test]
    fn rank_invariances(
        field in field_strategy(),
        rows in 1usize..7,
        cols in 1usize..7,
        deficient in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let mut g = rng(seed);
        let mut a = DenseMatrix::random(field, rows, cols, &mut g);
        if deficient && rows > 1 {
            // make the last row a combination of the first two
            let c = field.sample(&mut g);
            for j in 0..cols {
                let v = &a.get(0, j) * &c + a.get(rows / 2, j);
                a.set(rows - 1, j, v);
            }
        }
        let rank = mat_rank(&a);
        prop_assert!(rank <= rows.min(cols));
        prop_assert_eq!(mat_rank(&a.transpose()), rank);

        let mut order: Vec<usize> = (0..rows).collect();
        order.rotate_left(seed as usize % rows);
        prop_assert_eq!(mat_rank(&a.select_rows(&order)), rank);

        let s = field.sample_nonzero(&mut g);
        let mut scaled = a.clone();
        let i = (seed as usize / 7) % rows;
        for j in 0..cols {
            scaled.set(i, j, &a.get(i, j) * &s);
        }
        prop_assert_eq!(mat_rank(&scaled), rank);
    }

    #[test]
    fn determinant_detects_rank(field in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let a = DenseMatrix::random(field, n, n, &mut rng(seed));
        let det = determinant(&a).unwrap();
        prop_assert_eq!(det.is_zero(), mat_rank(&a) < n);
        let b = DenseMatrix::random(field, n, n, &mut rng(seed ^ 1));
        let ab = determinant(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(ab, &det * &determinant(&b).unwrap());
    }
}
