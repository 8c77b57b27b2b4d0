mod common;

use common::{decomposable, random_directions, random_tuple, rng, FP, Q};
use plueckerlab::plucker_form::eval_expansion;
use plueckerlab::scalars::solve;
use plueckerlab::{
    diagonal_multiplicity, eval_form, expand_form, multiplicity_at, polar, DenseMatrix, ExteriorVector, Field,
    FieldElement, PointTuple,
};
use proptest::prelude::*;

/// Top coefficient of the slot-ordered wedge, with no `PointTuple` checks.
fn raw_form(slots: &[ExteriorVector]) -> FieldElement {
    ExteriorVector::wedge_all(slots).unwrap().top_coefficient()
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((1, 2)), Just((1, 3)), Just((2, 2)), Just((2, 3)), Just((3, 2)), Just((3, 3))]
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Coefficients of `ε ↦ form(w + ε t)` recovered from its values at
/// `ε = 0, …, m`.
fn interpolate(field: Field, w: &PointTuple, t: &[ExteriorVector]) -> Vec<FieldElement> {
    let m = w.m();
    let mut vander = DenseMatrix::zeros(field, m + 1, m + 1);
    let mut values = Vec::with_capacity(m + 1);
    for e in 0..=m {
        let eps = field.from_i64(e as i64);
        for j in 0..=m {
            vander.set(e, j, eps.pow(j as u32));
        }
        let moved: Vec<ExteriorVector> =
            w.slots().iter().zip(t).map(|(a, b)| a.add(&b.scale(&eps)).unwrap()).collect();
        values.push(raw_form(&moved));
    }
    solve(&vander, &values).unwrap().expect("Vandermonde at distinct nodes is invertible")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn form_is_total_wedge((r, m) in shape(), seed in any::<u64>()) {
        let p = random_tuple(Q, r, m, &mut rng(seed));
        prop_assert_eq!(eval_form(&p), raw_form(p.slots()));
    }

    #[test]
    fn taylor_coefficients_are_polars((r, m) in shape(), seed in any::<u64>()) {
        let field = if seed % 2 == 0 { Q } else { FP };
        let mut g = rng(seed);
        let w = random_tuple(field, r, m, &mut g);
        let t = random_directions(field, r, m, &mut g);
        let coeffs = interpolate(field, &w, &t);
        for (k, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(&polar(k, &w, &t).unwrap(), c, "k = {}", k);
        }
        prop_assert_eq!(polar(0, &w, &t).unwrap(), eval_form(&w));
    }

    #[test]
    fn shuffle_expansion_agrees((r, m) in prop_oneof![Just((1, 2)), Just((1, 3)), Just((2, 2)), Just((2, 3))], seed in any::<u64>()) {
        let terms = expand_form(r, m).unwrap();
        prop_assert_eq!(terms.len(), factorial(r * m) / factorial(r).pow(m as u32));
        let p = random_tuple(FP, r, m, &mut rng(seed));
        prop_assert_eq!(eval_expansion(&terms, &p), eval_form(&p));
    }

    #[test]
    fn swap_changes_sign_by_parity((r, m) in shape(), seed in any::<u64>()) {
        let p = random_tuple(FP, r, m, &mut rng(seed));
        let (i, j) = (0, m - 1);
        let swapped = eval_form(&p.swapped(i, j));
        let expected = if r % 2 == 0 { eval_form(&p) } else { -eval_form(&p) };
        prop_assert_eq!(swapped, expected);
    }

    #[test]
    fn multilinear_in_each_slot((r, m) in shape(), slot in 0usize..3, seed in any::<u64>()) {
        let slot = slot % m;
        let mut g = rng(seed);
        let p = random_tuple(FP, r, m, &mut g);
        let other = random_tuple(FP, r, m, &mut g);
        let (a, b) = (FP.sample(&mut g), FP.sample(&mut g));
        let mut mixed = p.slots().to_vec();
        mixed[slot] = p.slots()[slot].scale(&a).add(&other.slots()[slot].scale(&b)).unwrap();
        let mut replaced = p.slots().to_vec();
        replaced[slot] = other.slots()[slot].clone();
        prop_assert_eq!(raw_form(&mixed), &a * &eval_form(&p) + &b * &raw_form(&replaced));
    }

    #[test]
    fn multiplicity_below_m((r, m) in shape(), repeats in 0usize..3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = random_tuple(FP, r, m, &mut g);
        // adversarial: copy slot 0 into the first `repeats` other slots
        let mut slots = p.slots().to_vec();
        for s in 1..=repeats.min(m - 1) {
            slots[s] = slots[0].clone();
        }
        let q = PointTuple::new(r, m, slots).unwrap();
        prop_assert!(multiplicity_at(&q) <= m - 1);
        let d = PointTuple::diagonal(&decomposable(FP, r, r * m, &mut g)).unwrap();
        prop_assert_eq!(multiplicity_at(&d), m - 1);
    }

    #[test]
    fn multiplicity_matches_vanishing_polars((r, m) in shape(), kind in 0usize..3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = match kind {
            0 => random_tuple(FP, r, m, &mut g),
            1 => PointTuple::diagonal(&decomposable(FP, r, r * m, &mut g)).unwrap(),
            _ => {
                let w = common::nonzero_exterior(FP, r * m, r, &mut g);
                PointTuple::diagonal(&w).unwrap()
            }
        };
        let k = multiplicity_at(&p);
        let t = random_directions(FP, r, m, &mut g);
        for j in 0..k {
            prop_assert!(polar(j, &p, &t).unwrap().is_zero(), "order {} polar should vanish", j);
        }
        // generic directions detect the exact order (fails with probability <= deg/p)
        prop_assert!(!polar(k, &p, &t).unwrap().is_zero());
    }

    #[test]
    fn diagonal_multiplicity_consistent((r, m) in shape(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let w = common::nonzero_exterior(Q, r * m, r, &mut g);
        prop_assert_eq!(diagonal_multiplicity(&w).unwrap(), multiplicity_at(&PointTuple::diagonal(&w).unwrap()));
        let s = Q.sample_nonzero(&mut g);
        prop_assert_eq!(diagonal_multiplicity(&w).unwrap(), diagonal_multiplicity(&w.scale(&s)).unwrap());
    }

    #[test]
    fn slot_scaling_leaves_vanishing_unchanged((r, m) in shape(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = random_tuple(FP, r, m, &mut g);
        let scales: Vec<FieldElement> = (0..m).map(|_| FP.sample_nonzero(&mut g)).collect();
        let scaled: Vec<ExteriorVector> = p.slots().iter().zip(&scales).map(|(w, c)| w.scale(c)).collect();
        let q = PointTuple::new(r, m, scaled).unwrap();
        let factor = scales.iter().fold(FP.one(), |acc, c| &acc * c);
        prop_assert_eq!(eval_form(&q), &factor * &eval_form(&p));
        prop_assert_eq!(multiplicity_at(&q), multiplicity_at(&p));
        prop_assert!(q.projectively_eq(&p));
    }
}
