//! Homogeneous elements of the exterior algebra of a coordinate space.
//!
//! Basis vectors `e_I` are labelled by [`MultiIndex`] bitmasks (bit `i - 1`
//! stands for `e_i`), so the ambient dimension is capped at 64. Vectors are
//! sparse maps from masks to nonzero coefficients kept in increasing mask
//! order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElement, Rng};

pub const MAX_DIM: usize = 64;

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All `k`-subsets of `{1..n}` as masks, in increasing numeric order.
pub fn subsets(n: usize, k: usize) -> Subsets {
    let next = if k > n { None } else { Some(low_bits(k) as u128) };
    Subsets { next, limit: 1u128 << n }
}

/// Iterator returned by [`subsets`] (Gosper's hack).
pub struct Subsets {
    next: Option<u128>,
    limit: u128,
}

impl Iterator for Subsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        if cur >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            Some((((ripple ^ cur) >> 2) / low) | ripple)
        };
        Some(cur as u64)
    }
}

/// Position of `mask` among the masks of equal popcount, in increasing order
/// (combinatorial number system).
pub fn mask_rank(mask: u64) -> usize {
    let mut rank = 0;
    let mut m = mask;
    let mut i = 1;
    while m != 0 {
        let pos = m.trailing_zeros() as usize;
        rank += binomial(pos, i);
        m &= m - 1;
        i += 1;
    }
    rank
}

/// Sign of `e_I ∧ e_J` relative to `e_(I ∪ J)`: zero if the sets meet,
/// otherwise the parity of the pairs `(a, b)` with `a ∈ I`, `b ∈ J`, `a > b`.
pub fn merge_sign(i: u64, j: u64) -> i8 {
    if i & j != 0 {
        return 0;
    }
    let mut inversions = 0;
    let mut m = i;
    while m != 0 {
        let bit = m.trailing_zeros();
        inversions += (j & ((1u64 << bit) - 1)).count_ones();
        m &= m - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A strictly increasing subset of `{1..n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    mask: u64,
    n: u8,
}

impl MultiIndex {
    pub fn new(mask: u64, n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::Malformed(format!("ambient dimension {n} exceeds {MAX_DIM}")));
        }
        if mask & !low_bits(n) != 0 {
            return Err(Error::Malformed(format!("mask {mask:#x} has bits beyond n = {n}")));
        }
        Ok(MultiIndex { mask, n: n as u8 })
    }

    /// From 1-based indices, in any order; repeats are rejected.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i == 0 || i > n.min(MAX_DIM) {
                return Err(Error::Malformed(format!("index {i} outside 1..={n}")));
            }
            let bit = 1u64 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::Malformed(format!("repeated index {i}")));
            }
            mask |= bit;
        }
        Self::new(mask, n)
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn degree(self) -> usize {
        self.mask.count_ones() as usize
    }

    /// The 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        bits(self.mask).map(|b| b + 1).collect()
    }

    pub fn merge_sign(self, other: MultiIndex) -> i8 {
        merge_sign(self.mask, other.mask)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Zero-based positions of the set bits, ascending.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(b)
    })
}

/// A homogeneous element of `∧^degree` of an `n`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorVector {
    field: Field,
    n: usize,
    degree: usize,
    terms: BTreeMap<u64, FieldElement>,
}

impl ExteriorVector {
    pub fn zero(field: Field, n: usize, degree: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::Malformed(format!("ambient dimension {n} exceeds {MAX_DIM}")));
        }
        if degree > n {
            return Err(Error::DegreeOverflow { degree, n });
        }
        Ok(ExteriorVector { field, n, degree, terms: BTreeMap::new() })
    }

    /// `e_I` for 1-based indices `I`.
    pub fn basis(field: Field, n: usize, indices: &[usize]) -> Result<Self> {
        let idx = MultiIndex::from_indices(indices, n)?;
        Self::basis_mask(field, n, idx.mask())
    }

    pub fn basis_mask(field: Field, n: usize, mask: u64) -> Result<Self> {
        MultiIndex::new(mask, n)?;
        let mut v = Self::zero(field, n, mask.count_ones() as usize)?;
        v.terms.insert(mask, field.one());
        Ok(v)
    }

    /// Builds a vector from `(mask, coefficient)` pairs; repeated masks add
    /// up and zero coefficients are dropped.
    pub fn from_terms(
        field: Field,
        n: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (u64, FieldElement)>,
    ) -> Result<Self> {
        let mut v = Self::zero(field, n, degree)?;
        for (mask, c) in terms {
            MultiIndex::new(mask, n)?;
            if mask.count_ones() as usize != degree {
                return Err(Error::Malformed(format!("mask {mask:#x} is not of degree {degree}")));
            }
            if c.field() != field {
                return Err(Error::MixedField);
            }
            v.add_term(mask, c);
        }
        Ok(v)
    }

    /// Degree-1 vector with the given coordinates.
    pub fn from_coords(field: Field, coords: &[FieldElement]) -> Result<Self> {
        Self::from_terms(
            field,
            coords.len(),
            1,
            coords.iter().enumerate().map(|(i, c)| (1u64 << i, c.clone())),
        )
    }

    /// Vector with coordinates `coords` in the increasing-mask basis of
    /// `∧^degree`.
    pub fn from_dense(field: Field, n: usize, degree: usize, coords: &[FieldElement]) -> Result<Self> {
        if coords.len() != binomial(n, degree) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a space of dimension {}",
                coords.len(),
                binomial(n, degree)
            )));
        }
        Self::from_terms(field, n, degree, subsets(n, degree).zip(coords.iter().cloned()))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &FieldElement)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u64) -> FieldElement {
        self.terms.get(&mask).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coordinates in the increasing-mask basis.
    pub fn to_dense(&self) -> Vec<FieldElement> {
        subsets(self.n, self.degree).map(|m| self.coefficient(m)).collect()
    }

    fn add_term(&mut self, mask: u64, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &ExteriorVector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedField);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExteriorVector) -> Result<ExteriorVector> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExteriorVector) -> Result<ExteriorVector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExteriorVector {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &FieldElement) -> ExteriorVector {
        let mut out = ExteriorVector { terms: BTreeMap::new(), ..*self };
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(&m, x)| (m, x * c)).collect();
        out
    }

    /// The wedge product `self ∧ other`.
    pub fn wedge(&self, other: &ExteriorVector) -> Result<ExteriorVector> {
        self.check_compatible(other)?;
        let degree = self.degree + other.degree;
        if degree > self.n {
            return Err(Error::DegreeOverflow { degree, n: self.n });
        }
        let mut out = ExteriorVector::zero(self.field, self.n, degree)?;
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                match merge_sign(i, j) {
                    0 => {}
                    1 => out.add_term(i | j, a * b),
                    _ => out.add_term(i | j, -(a * b)),
                }
            }
        }
        Ok(out)
    }

    /// Wedge of a nonempty sequence, left to right.
    pub fn wedge_all<'a>(factors: impl IntoIterator<Item = &'a ExteriorVector>) -> Result<ExteriorVector> {
        let mut it = factors.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Malformed("empty wedge product".into()))?
            .clone();
        it.try_fold(first, |acc, v| acc.wedge(v))
    }

    /// Coefficient of `e_1 ∧ … ∧ e_n`; zero unless `degree = n`.
    pub fn top_coefficient(&self) -> FieldElement {
        if self.degree != self.n {
            return self.field.zero();
        }
        self.coefficient(low_bits(self.n))
    }

    /// Representative whose first nonzero coefficient (in mask order) is 1.
    pub fn normalized(&self) -> ExteriorVector {
        match self.terms.values().next() {
            Some(lead) => self.scale(&lead.inv().expect("stored coefficients are nonzero")),
            None => self.clone(),
        }
    }

    /// Equality in projective space; two zero vectors compare equal.
    pub fn projectively_eq(&self, other: &ExteriorVector) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.degree == other.degree
            && self.normalized() == other.normalized()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("wire format serializes")
    }

    pub fn from_json(s: &str) -> Result<ExteriorVector> {
        let wire: ExteriorWire = serde_json::from_str(s)?;
        ExteriorVector::from_wire(wire)
    }

    pub fn to_wire(&self) -> ExteriorWire {
        ExteriorWire {
            n: self.n,
            degree: self.degree,
            modulus: self.field.size(),
            terms: self
                .terms
                .iter()
                .map(|(&m, c)| (bits(m).map(|b| b + 1).collect(), c.token()))
                .collect(),
        }
    }

    pub fn from_wire(wire: ExteriorWire) -> Result<ExteriorVector> {
        let field = match wire.modulus {
            None => Field::Rational,
            Some(p) => Field::prime(p)?,
        };
        let mut v = ExteriorVector::zero(field, wire.n, wire.degree)?;
        for (indices, token) in &wire.terms {
            let idx = MultiIndex::from_indices(indices, wire.n)?;
            if idx.degree() != wire.degree {
                return Err(Error::Malformed(format!("term {idx} is not of degree {}", wire.degree)));
            }
            if indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(format!("term {indices:?} is not strictly increasing")));
            }
            let c = field.parse_token(token)?;
            if c.is_zero() {
                return Err(Error::Malformed("stored zero coefficient".into()));
            }
            if v.terms.insert(idx.mask(), c).is_some() {
                return Err(Error::Malformed(format!("repeated term {idx}")));
            }
        }
        Ok(v)
    }
}

impl fmt::Display for ExteriorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let idx: Vec<String> = bits(m).map(|b| (b + 1).to_string()).collect();
                format!("{c}·e{{{}}}", idx.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON shape of an [`ExteriorVector`]: 1-based index lists paired with
/// `"num/den"` (rationals) or decimal residues (prime field, with the modulus
/// recorded once at top level).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorWire {
    pub n: usize,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub terms: Vec<(Vec<usize>, String)>,
}

/// Interior product of `w` with the dual basis covector `e^phi`, removing
/// `phi` from the front: `contract(phi, e_phi ∧ e_j) = e_j`.
pub fn contract(phi: MultiIndex, w: &ExteriorVector) -> Result<ExteriorVector> {
    if phi.n() != w.n() {
        return Err(Error::DimensionMismatch(format!("index over n = {}, vector over n = {}", phi.n(), w.n())));
    }
    if phi.degree() + 1 != w.degree() {
        return Err(Error::DimensionMismatch(format!(
            "contracting a degree-{} vector by a degree-{} index",
            w.degree(),
            phi.degree()
        )));
    }
    let mut out = ExteriorVector::zero(w.field(), w.n(), 1)?;
    for (mask, c) in w.terms() {
        if mask & phi.mask() != phi.mask() {
            continue;
        }
        let rest = mask & !phi.mask();
        match merge_sign(phi.mask(), rest) {
            1 => out.add_term(rest, c.clone()),
            _ => out.add_term(rest, -c),
        }
    }
    Ok(out)
}

/// Classical Plücker relations: `w` is decomposable iff
/// `contract(phi, w) ∧ w = 0` for every `phi` of degree `deg w - 1`.
pub fn plucker_relations_hold(w: &ExteriorVector) -> Result<bool> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let r = w.degree();
    // degrees 0, 1, n - 1 and n contain only decomposable vectors
    if r <= 1 || r + 1 >= w.n() {
        return Ok(true);
    }
    for phi in subsets(w.n(), r - 1) {
        let c = contract(MultiIndex::new(phi, w.n())?, w)?;
        if !c.is_zero() && !c.wedge(w)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dense random element of `∧^degree` with all coefficients sampled.
pub fn random_exterior(field: Field, n: usize, degree: usize, rng: &mut Rng) -> Result<ExteriorVector> {
    ExteriorVector::zero(field, n, degree)?;
    loop {
        let v = ExteriorVector::from_terms(
            field,
            n,
            degree,
            subsets(n, degree).map(|m| (m, field.sample(rng))).collect::<Vec<_>>(),
        )?;
        if !v.is_zero() {
            return Ok(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rng_from_seed;

    fn e(n: usize, idx: &[usize]) -> ExteriorVector {
        ExteriorVector::basis(Field::Rational, n, idx).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(e(6, &[1, 2]).wedge(&e(6, &[3, 4])).unwrap(), e(6, &[1, 2, 3, 4]));
        assert_eq!(e(4, &[1, 3]).wedge(&e(4, &[2])).unwrap(), e(4, &[1, 2, 3]).neg());
        assert!(e(6, &[1, 2]).wedge(&e(6, &[1, 3])).unwrap().is_zero());
    }

    #[test]
    fn wedge_errors() {
        assert!(matches!(
            e(4, &[1, 2, 3]).wedge(&e(4, &[1, 4])),
            Err(Error::DegreeOverflow { degree: 5, n: 4 })
        ));
        assert!(matches!(e(4, &[1]).wedge(&e(5, &[2])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn merge_sign_examples() {
        let idx = |v: &[usize]| MultiIndex::from_indices(v, 4).unwrap();
        assert_eq!(idx(&[1, 2]).merge_sign(idx(&[3, 4])), 1);
        assert_eq!(idx(&[2]).merge_sign(idx(&[1])), -1);
        assert_eq!(idx(&[1, 3]).merge_sign(idx(&[3])), 0);
    }

    #[test]
    fn contract_examples() {
        let phi = |i| MultiIndex::from_indices(&[i], 2).unwrap();
        assert_eq!(contract(phi(1), &e(2, &[1, 2])).unwrap(), e(2, &[2]));
        assert_eq!(contract(phi(2), &e(2, &[1, 2])).unwrap(), e(2, &[1]).neg());
        let phi3 = MultiIndex::from_indices(&[3], 3).unwrap();
        assert!(contract(phi3, &e(3, &[1, 2])).unwrap().is_zero());
        assert!(contract(phi(1), &e(2, &[1])).is_err());
    }

    #[test]
    fn relations_examples() {
        assert!(plucker_relations_hold(&e(6, &[1, 2])).unwrap());
        let split = e(6, &[1, 2]).add(&e(6, &[3, 4])).unwrap();
        assert!(!plucker_relations_hold(&split).unwrap());
        let factorable = e(6, &[1, 2]).add(&e(6, &[1, 3])).unwrap();
        assert!(plucker_relations_hold(&factorable).unwrap());
        assert_eq!(
            plucker_relations_hold(&ExteriorVector::zero(Field::Rational, 6, 2).unwrap()),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn random_shape_and_determinism() {
        let v = random_exterior(Field::FP, 6, 2, &mut rng_from_seed(9)).unwrap();
        assert_eq!(v.len(), 15);
        assert_eq!(v, random_exterior(Field::FP, 6, 2, &mut rng_from_seed(9)).unwrap());
        assert!(random_exterior(Field::FP, 4, 5, &mut rng_from_seed(9)).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let all: Vec<u64> = subsets(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for (rank, m) in subsets(9, 3).enumerate() {
            assert_eq!(mask_rank(m), rank);
        }
        assert_eq!(subsets(64, 63).count(), 64);
        assert_eq!(subsets(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
        assert_eq!(subsets(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets(3, 4).count(), 0);
        assert_eq!(binomial(12, 4), 495);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let q = Field::Rational;
        let v = ExteriorVector::from_terms(
            q,
            6,
            2,
            [(0b11, q.from_ratio(-3, 4).unwrap()), (0b1100, q.from_i64(2))],
        )
        .unwrap();
        let s = v.to_json();
        assert_eq!(s, r#"{"n":6,"degree":2,"terms":[[[1,2],"-3/4"],[[3,4],"2/1"]]}"#);
        assert_eq!(ExteriorVector::from_json(&s).unwrap(), v);
        assert_eq!(ExteriorVector::from_json(&s).unwrap().to_json(), s);

        let w = random_exterior(Field::FP, 5, 3, &mut rng_from_seed(1)).unwrap();
        let s = w.to_json();
        assert!(s.contains("\"modulus\":2147483647"));
        assert_eq!(ExteriorVector::from_json(&s).unwrap().to_json(), s);
    }

    #[test]
    fn json_rejects_bad_terms() {
        for bad in [
            r#"{"n":4,"degree":2,"terms":[[[2,1],"1/1"]]}"#,
            r#"{"n":4,"degree":2,"terms":[[[1,5],"1/1"]]}"#,
            r#"{"n":4,"degree":2,"terms":[[[1,2,3],"1/1"]]}"#,
            r#"{"n":4,"degree":2,"terms":[[[1,2],"0/1"]]}"#,
            r#"{"n":4,"degree":2,"terms":[[[1,2],"1/1"],[[1,2],"2/1"]]}"#,
            r#"{"n":4,"degree":2,"terms":[[[1,2],"2/4"]]}"#,
        ] {
            assert!(ExteriorVector::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn normalization() {
        let q = Field::Rational;
        let v = e(4, &[1, 2]).add(&e(4, &[3, 4]).scale(&q.from_i64(5))).unwrap();
        let w = v.scale(&q.from_ratio(-2, 7).unwrap());
        assert!(v.projectively_eq(&w));
        assert!(w.normalized().coefficient(0b11).is_one());
        assert!(!v.projectively_eq(&e(4, &[1, 2])));
    }
}
