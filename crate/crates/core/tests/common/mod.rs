#![allow(dead_code)]

use plueckerlab::grassmann::random_grass_point;
use plueckerlab::scalars::{rng_from_seed, Rng};
use plueckerlab::{random_exterior, ExteriorVector, Field, PointTuple};

pub const Q: Field = Field::Rational;
pub const FP: Field = Field::FP;

pub fn rng(seed: u64) -> Rng {
    rng_from_seed(seed)
}

pub fn nonzero_exterior(field: Field, n: usize, degree: usize, rng: &mut Rng) -> ExteriorVector {
    loop {
        let v = random_exterior(field, n, degree, rng).unwrap();
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn decomposable(field: Field, r: usize, n: usize, rng: &mut Rng) -> ExteriorVector {
    random_grass_point(field, r, n, rng).unwrap().plucker().clone()
}

pub fn random_tuple(field: Field, r: usize, m: usize, rng: &mut Rng) -> PointTuple {
    let slots = (0..m).map(|_| nonzero_exterior(field, r * m, r, rng)).collect();
    PointTuple::new(r, m, slots).unwrap()
}

pub fn random_directions(field: Field, r: usize, m: usize, rng: &mut Rng) -> Vec<ExteriorVector> {
    (0..m).map(|_| random_exterior(field, r * m, r, rng).unwrap()).collect()
}
