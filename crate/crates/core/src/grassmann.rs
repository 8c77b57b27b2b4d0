//! Decomposable vectors, the Grassmannian inside `P(∧^r V)`, and its
//! recognition from the singular locus of the Plücker form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, mask_rank, merge_sign, plucker_relations_hold, subsets, ExteriorVector};
use crate::plucker_form::{diagonal_multiplicity, tangent_codim, PointTuple};
use crate::scalars::{determinant, mat_rank, DenseMatrix, Field, FieldElement, Rng};

/// An `r`-dimensional subspace of an `n`-dimensional space, with a basis and
/// its Plücker vector (the `r x r` minors of the basis, column sets in
/// increasing mask order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassPoint {
    r: usize,
    n: usize,
    basis_matrix: DenseMatrix,
    plucker: ExteriorVector,
}

impl GrassPoint {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_matrix(&self) -> &DenseMatrix {
        &self.basis_matrix
    }

    /// Wedge of the basis rows; its coefficients are exactly the minors.
    pub fn plucker(&self) -> &ExteriorVector {
        &self.plucker
    }

    /// Projectively normalized Plücker vector.
    pub fn normalized_plucker(&self) -> ExteriorVector {
        self.plucker.normalized()
    }
}

fn row_vector(a: &DenseMatrix, i: usize) -> ExteriorVector {
    ExteriorVector::from_coords(a.field(), &a.row(i)).expect("row length at most 64")
}

/// The subspace spanned by the rows of `a`.
pub fn plucker_embed(a: &DenseMatrix) -> Result<GrassPoint> {
    let (r, n) = (a.rows(), a.cols());
    if r == 0 || r > n {
        return Err(Error::Malformed(format!("cannot embed a {r}x{n} basis")));
    }
    let rank = mat_rank(a);
    if rank < r {
        return Err(Error::RankDeficient { expected: r, found: rank });
    }
    let plucker = ExteriorVector::wedge_all(&(0..r).map(|i| row_vector(a, i)).collect::<Vec<_>>())?;
    Ok(GrassPoint { r, n, basis_matrix: a.clone(), plucker })
}

/// A uniformly random full-rank `r x n` basis, embedded.
pub fn random_grass_point(field: Field, r: usize, n: usize, rng: &mut Rng) -> Result<GrassPoint> {
    loop {
        match plucker_embed(&DenseMatrix::random(field, r, n, rng)) {
            Err(Error::RankDeficient { .. }) => continue,
            other => return other,
        }
    }
}

/// Rank of `t ↦ w ∧ t` from `∧^s` to `∧^(r+s)`.
pub fn mu_rank(w: &ExteriorVector, s: usize) -> Result<usize> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (r, d) = (w.degree(), w.n());
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    if r + s > d {
        return Err(Error::DegreeOverflow { degree: r + s, n: d });
    }
    let mut matrix = DenseMatrix::zeros(w.field(), binomial(d, r + s), binomial(d, s));
    for (col, t) in subsets(d, s).enumerate() {
        for (i, c) in w.terms() {
            match merge_sign(i, t) {
                0 => {}
                1 => matrix.set(mask_rank(i | t), col, c.clone()),
                _ => matrix.set(mask_rank(i | t), col, -c),
            }
        }
    }
    Ok(mat_rank(&matrix))
}

/// Decomposability through the rank of `v ↦ w ∧ v`, which equals `d - r`
/// exactly on decomposable vectors. Falls back to the Plücker relations when
/// `d < 2r + 1`.
pub fn is_decomposable(w: &ExteriorVector) -> Result<bool> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (r, d) = (w.degree(), w.n());
    if d < 2 * r + 1 {
        return plucker_relations_hold(w);
    }
    Ok(mu_rank(w, 1)? == d - r)
}

/// Minimal tangent codimension at diagonal points of multiplicity `m - 1`,
/// attained exactly on decomposable vectors: `B = C((m-1)r, r)` times `m`
/// for even `r`, times `m - 1` for odd `r`. Requires `m >= 3`.
pub fn lemma33_threshold(r: usize, m: usize) -> Result<usize> {
    if m < 3 {
        return Err(Error::Unsupported(format!(
            "m = {m}: the threshold formula needs m >= 3, see lemma33_small_m_codim"
        )));
    }
    if r == 0 {
        return Err(Error::Malformed("r must be positive".into()));
    }
    let b = binomial((m - 1) * r, r);
    Ok(if r % 2 == 0 { m * b } else { (m - 1) * b })
}

/// The `m = 2` value of the tangent codimension, `m - 1 = 1`, independent of
/// decomposability.
pub fn lemma33_small_m_codim(m: usize) -> Result<usize> {
    match m {
        2 => Ok(1),
        _ => Err(Error::Unsupported(format!("small-m codimension is defined for m = 2 only, got {m}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictTag {
    InGrassmannian,
    FailsMultiplicity,
    FailsTangentBound,
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictTag::InGrassmannian => "InGrassmannian",
            VerdictTag::FailsMultiplicity => "FailsMultiplicity",
            VerdictTag::FailsTangentBound => "FailsTangentBound",
        };
        f.write_str(s)
    }
}

/// Outcome of [`theorem31_classify`]. `observed_codim` is absent exactly
/// when the multiplicity test already failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierVerdict {
    pub tag: VerdictTag,
    pub observed_codim: Option<usize>,
    pub threshold: usize,
}

/// Decides whether `[w]` lies on the Grassmannian using only the Plücker
/// form: the diagonal point `(w, …, w)` must have multiplicity `m - 1` and
/// its tangent codimension must equal the minimum [`lemma33_threshold`].
///
/// `m = n / deg w` must be at least 3. For odd `r` the multiplicity test
/// always passes, so discrimination is by the tangent bound alone.
pub fn theorem31_classify(w: &ExteriorVector) -> Result<ClassifierVerdict> {
    let (r, m) = diagonal_shape(w)?;
    if m < 3 {
        return Err(Error::Unsupported(format!("reconstruction needs m >= 3, got m = {m}")));
    }
    let threshold = lemma33_threshold(r, m)?;
    let verdict = classify_against(w, m, threshold)?;
    if let Some(c) = verdict.observed_codim {
        assert!(c >= threshold, "tangent codimension {c} below the lower bound {threshold}");
    }
    Ok(verdict)
}

/// The same two tests at `m = 2`, where the codimension is 1 for every
/// point of multiplicity 1. Exposed for experiments; the verdict is not a
/// membership test.
pub fn classify_small_m(w: &ExteriorVector) -> Result<ClassifierVerdict> {
    let (_, m) = diagonal_shape(w)?;
    classify_against(w, m, lemma33_small_m_codim(m)?)
}

fn diagonal_shape(w: &ExteriorVector) -> Result<(usize, usize)> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    let r = w.degree();
    if r == 0 || w.n() % r != 0 {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimension {} is not a multiple of the degree {r}",
            w.n()
        )));
    }
    Ok((r, w.n() / r))
}

fn classify_against(w: &ExteriorVector, m: usize, threshold: usize) -> Result<ClassifierVerdict> {
    if diagonal_multiplicity(w)? < m - 1 {
        return Ok(ClassifierVerdict { tag: VerdictTag::FailsMultiplicity, observed_codim: None, threshold });
    }
    let codim = tangent_codim(&PointTuple::diagonal(w)?, m - 1)?;
    let tag = if codim == threshold { VerdictTag::InGrassmannian } else { VerdictTag::FailsTangentBound };
    Ok(ClassifierVerdict { tag, observed_codim: Some(codim), threshold })
}

/// Determinant of the `rm x rm` matrix stacking the bases of `m` subspaces
/// of dimension `r`; zero iff their sum lies in a hyperplane.
pub fn ev_m_det(points: &[GrassPoint]) -> Result<FieldElement> {
    let first = points.first().ok_or_else(|| Error::Malformed("no points".into()))?;
    let (r, n) = (first.r, first.n);
    if r * points.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} subspaces of dimension {r} in a space of dimension {n}",
            points.len()
        )));
    }
    let field = first.basis_matrix.field();
    let mut rows = Vec::with_capacity(n);
    for p in points {
        if p.r != r || p.n != n {
            return Err(Error::DimensionMismatch("points of different shapes".into()));
        }
        if p.basis_matrix.field() != field {
            return Err(Error::MixedField);
        }
        rows.extend((0..r).map(|i| p.basis_matrix.row(i)));
    }
    determinant(&DenseMatrix::from_rows(field, rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rng_from_seed;

    const Q: Field = Field::Rational;

    fn e(n: usize, idx: &[usize]) -> ExteriorVector {
        ExteriorVector::basis(Q, n, idx).unwrap()
    }

    fn sum(parts: &[ExteriorVector]) -> ExteriorVector {
        parts[1..].iter().fold(parts[0].clone(), |acc, p| acc.add(p).unwrap())
    }

    #[test]
    fn embed_examples() {
        let a = DenseMatrix::from_i64_rows(Q, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]]).unwrap();
        assert_eq!(plucker_embed(&a).unwrap().plucker(), &e(6, &[1, 2]));
        let b = DenseMatrix::from_i64_rows(Q, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 1, 0, 0, 0]]).unwrap();
        assert_eq!(plucker_embed(&b).unwrap().plucker(), &sum(&[e(6, &[1, 2]), e(6, &[1, 3])]));
        let p = random_grass_point(Field::FP, 2, 6, &mut rng_from_seed(2)).unwrap();
        assert!(plucker_relations_hold(p.plucker()).unwrap());
        let bad = DenseMatrix::from_i64_rows(Q, &[&[1, 2, 0], &[2, 4, 0]]).unwrap();
        assert_eq!(plucker_embed(&bad), Err(Error::RankDeficient { expected: 2, found: 1 }));
    }

    #[test]
    fn minors_match_coefficients() {
        let a = DenseMatrix::from_i64_rows(Q, &[&[1, 2, 3, 4], &[0, 1, 5, 2]]).unwrap();
        let p = plucker_embed(&a).unwrap();
        for (rank, mask) in subsets(4, 2).enumerate() {
            let cols: Vec<usize> = crate::exterior::bits(mask).collect();
            let minor = determinant(&a.select_columns(&cols)).unwrap();
            assert_eq!(p.plucker().coefficient(mask), minor, "column set #{rank}");
        }
    }

    #[test]
    fn mu_rank_examples() {
        assert_eq!(mu_rank(&e(6, &[1, 2]), 1).unwrap(), 4);
        assert_eq!(mu_rank(&e(6, &[1, 2]), 2).unwrap(), 6);
        assert_eq!(mu_rank(&sum(&[e(6, &[1, 2]), e(6, &[3, 4])]), 1).unwrap(), 6);
        assert!(matches!(mu_rank(&e(6, &[1, 2]), 5), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn decomposability_examples() {
        assert!(is_decomposable(&e(9, &[1, 2, 3])).unwrap());
        let split = sum(&[e(9, &[1, 2, 3]), e(9, &[4, 5, 6])]);
        assert_eq!(mu_rank(&split, 1).unwrap(), 9);
        assert!(!is_decomposable(&split).unwrap());
        assert!(!plucker_relations_hold(&split).unwrap());
        assert!(is_decomposable(&sum(&[e(6, &[1, 2]), e(6, &[1, 3])])).unwrap());
        // d < 2r + 1 goes through the relations
        assert!(!is_decomposable(&sum(&[e(4, &[1, 2]), e(4, &[3, 4])])).unwrap());
    }

    #[test]
    fn thresholds() {
        assert_eq!(lemma33_threshold(2, 3).unwrap(), 18);
        assert_eq!(lemma33_threshold(3, 3).unwrap(), 40);
        assert_eq!(lemma33_threshold(4, 3).unwrap(), 210);
        assert!(lemma33_threshold(2, 2).is_err());
        assert_eq!(lemma33_small_m_codim(2).unwrap(), 1);
        assert!(lemma33_small_m_codim(1).is_err());
    }

    #[test]
    fn classify_examples() {
        let mut rng = rng_from_seed(31);
        let p = random_grass_point(Field::FP, 2, 6, &mut rng).unwrap();
        let v = theorem31_classify(p.plucker()).unwrap();
        assert_eq!(v, ClassifierVerdict { tag: VerdictTag::InGrassmannian, observed_codim: Some(18), threshold: 18 });
        let split = sum(&[e(6, &[1, 2]), e(6, &[3, 4])]);
        let v = theorem31_classify(&split).unwrap();
        assert_eq!(v.tag, VerdictTag::FailsMultiplicity);
        assert_eq!(v.observed_codim, None);
        assert!(matches!(theorem31_classify(&e(4, &[1, 2])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ev_m_det_examples() {
        let block = |rows: &[&[i64]]| plucker_embed(&DenseMatrix::from_i64_rows(Q, rows).unwrap()).unwrap();
        let pts = [
            block(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]]),
            block(&[&[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]]),
            block(&[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
        ];
        assert!(ev_m_det(&pts).unwrap().is_one());
        let shared = [
            block(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]]),
            block(&[&[1, 0, 0, 0, 0, 0], &[0, 0, 0, 1, 0, 0]]),
            block(&[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
        ];
        assert!(ev_m_det(&shared).unwrap().is_zero());
        assert!(ev_m_det(&pts[..2]).is_err());
    }
}
