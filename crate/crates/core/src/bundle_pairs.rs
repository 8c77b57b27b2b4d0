//! Pairs `(E, S)` on the projective line: a split bundle
//! `E = O(d_1) ⊕ … ⊕ O(d_r)` with `Σ d_i = r(m - 1)` and an `rm`-dimensional
//! space of sections `S`.
//!
//! Sections are `r`-tuples of binary forms in `(u, v)`, component `i` of
//! degree `d_i`, and fibres are trivialized by the monomial coordinates. The
//! determinant divisor on `(P^1)^m` is cut out by the determinant of the
//! `rm x rm` evaluation matrix at `m` points.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, bits, subsets, ExteriorVector};
use crate::scalars::{determinant, mat_rank, rng_from_seed, DenseMatrix, Field, FieldElement, Rng};

/// A binary form `Σ_a c_a u^a v^(degree - a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn zero(field: Field, degree: usize) -> Self {
        BinaryForm { coeffs: vec![field.zero(); degree + 1] }
    }

    /// `u^a v^(degree - a)`.
    pub fn monomial(field: Field, degree: usize, a: usize) -> Self {
        let mut f = Self::zero(field, degree);
        f.coeffs[a] = field.one();
        f
    }

    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Malformed("a binary form needs at least one coefficient".into()));
        }
        let field = coeffs[0].field();
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::MixedField);
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    /// Coefficient of `u^a v^(degree - a)`.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn eval(&self, x: &P1Point) -> FieldElement {
        let d = self.degree();
        let mut acc = self.field().zero();
        for (a, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * &(x.u.pow(a as u32) * x.v.pow((d - a) as u32)));
            }
        }
        acc
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degrees");
        BinaryForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = BinaryForm::zero(self.field(), self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += &(a * b);
            }
        }
        out
    }
}

/// A point of `P^1` in canonical form: `(u, 1)`, or `(1, 0)` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P1Point {
    u: FieldElement,
    v: FieldElement,
}

impl P1Point {
    pub fn new(u: FieldElement, v: FieldElement) -> Result<Self> {
        if u.field() != v.field() {
            return Err(Error::MixedField);
        }
        if !v.is_zero() {
            let inv = v.inv().expect("nonzero");
            let field = v.field();
            return Ok(P1Point { u: &u * &inv, v: field.one() });
        }
        if u.is_zero() {
            return Err(Error::Malformed("(0 : 0) is not a point".into()));
        }
        Ok(Self::infinity(u.field()))
    }

    pub fn affine(x: FieldElement) -> Self {
        let field = x.field();
        P1Point { u: x, v: field.one() }
    }

    pub fn infinity(field: Field) -> Self {
        P1Point { u: field.one(), v: field.zero() }
    }

    pub fn random(field: Field, rng: &mut Rng) -> Self {
        Self::affine(field.sample(rng))
    }

    pub fn u(&self) -> &FieldElement {
        &self.u
    }

    pub fn v(&self) -> &FieldElement {
        &self.v
    }

    pub fn field(&self) -> Field {
        self.u.field()
    }

    /// `u_self v_other - u_other v_self`, the equation of the diagonal.
    pub fn bracket(&self, other: &P1Point) -> FieldElement {
        &self.u * &other.v - &other.u * &self.v
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.u, self.v)
    }
}

/// Pair `(E, S)` on `P^1`; `sections[j][i]` is component `i` of section `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundlePairP1 {
    r: usize,
    m: usize,
    field: Field,
    splitting: Vec<i64>,
    sections: Vec<Vec<BinaryForm>>,
    complete: bool,
}

/// JSON pair description: `{"r", "m", "splitting", "field": "fp" | "q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDescription {
    pub r: usize,
    pub m: usize,
    pub splitting: Vec<i64>,
    pub field: String,
}

impl PairDescription {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Builds the complete monomial pair, over `F_prime` when the field tag
    /// is `"fp"`.
    pub fn build(&self, prime: u64) -> Result<BundlePairP1> {
        let field = match self.field.as_str() {
            "fp" => Field::prime(prime)?,
            "q" => Field::Rational,
            other => return Err(Error::Malformed(format!("unknown field tag {other:?}"))),
        };
        if self.splitting.len() != self.r {
            return Err(Error::Malformed(format!(
                "splitting {:?} has {} parts but r = {}",
                self.splitting,
                self.splitting.len(),
                self.r
            )));
        }
        make_pair(&self.splitting, self.m, field)
    }
}

/// The complete pair `(O(d_1) ⊕ … ⊕ O(d_r), H^0)` with the monomial basis
/// `u^a v^(d_i - a)` in each component, components in order.
pub fn make_pair(splitting: &[i64], m: usize, field: Field) -> Result<BundlePairP1> {
    let r = splitting.len();
    if r == 0 {
        return Err(Error::Malformed("empty splitting type".into()));
    }
    if m < 2 {
        return Err(Error::Malformed(format!("m = {m}, need m >= 2")));
    }
    if r * m > crate::exterior::MAX_DIM {
        return Err(Error::Unsupported(format!("rm = {} exceeds 64", r * m)));
    }
    if let Some(d) = splitting.iter().find(|&&d| d < 0) {
        return Err(Error::Malformed(format!("negative degree {d} in splitting {splitting:?}")));
    }
    let total: i64 = splitting.iter().sum();
    if total != (r * (m - 1)) as i64 {
        return Err(Error::Malformed(format!(
            "splitting {splitting:?} has degree {total}, expected r(m-1) = {}",
            r * (m - 1)
        )));
    }
    let count: i64 = splitting.iter().map(|&d| (d + 1).max(0)).sum();
    if count != (r * m) as i64 {
        return Err(Error::Malformed(format!(
            "splitting {splitting:?} has {count} sections, expected rm = {}",
            r * m
        )));
    }
    let mut sections = Vec::with_capacity(r * m);
    for (i, &d) in splitting.iter().enumerate() {
        let d = d as usize;
        for a in 0..=d {
            sections.push(
                splitting
                    .iter()
                    .enumerate()
                    .map(|(k, &dk)| {
                        if k == i {
                            BinaryForm::monomial(field, d, a)
                        } else {
                            BinaryForm::zero(field, dk as usize)
                        }
                    })
                    .collect(),
            );
        }
    }
    Ok(BundlePairP1 { r, m, field, splitting: splitting.to_vec(), sections, complete: true })
}

impl BundlePairP1 {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn splitting(&self) -> &[i64] {
        &self.splitting
    }

    pub fn sections(&self) -> &[Vec<BinaryForm>] {
        &self.sections
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// All parts of the splitting type equal (`E = L^(⊕r)`).
    pub fn is_balanced(&self) -> bool {
        self.splitting.iter().all(|&d| d == self.splitting[0])
    }

    /// Degree `r(m - 1)` of `det E`.
    pub fn det_degree(&self) -> usize {
        self.r * (self.m - 1)
    }

    pub fn description(&self) -> PairDescription {
        PairDescription {
            r: self.r,
            m: self.m,
            splitting: self.splitting.clone(),
            field: match self.field {
                Field::Rational => "q".into(),
                Field::Prime(_) => "fp".into(),
            },
        }
    }

    /// The same bundle with section basis `G · (s_1, …, s_rm)`.
    pub fn with_basis_change(&self, g: &DenseMatrix) -> Result<BundlePairP1> {
        let n = self.r * self.m;
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch(format!("basis change must be {n}x{n}")));
        }
        if g.field() != self.field {
            return Err(Error::MixedField);
        }
        if mat_rank(g) < n {
            return Err(Error::RankDeficient { expected: n, found: mat_rank(g) });
        }
        let sections = (0..n)
            .map(|j| {
                (0..self.r)
                    .map(|i| {
                        (0..n).fold(BinaryForm::zero(self.field, self.splitting[i] as usize), |acc, k| {
                            let c = g.get(j, k);
                            if c.is_zero() {
                                acc
                            } else {
                                acc.add(&self.sections[k][i].scale(&c))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(BundlePairP1 { sections, ..self.clone() })
    }

    /// `r x rm` matrix of section values at `x`: row `i` is component `i`.
    pub fn value_matrix(&self, x: &P1Point) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.r, self.sections.len());
        for (j, s) in self.sections.iter().enumerate() {
            for (i, form) in s.iter().enumerate() {
                out.set(i, j, form.eval(x));
            }
        }
        out
    }

    fn check_point(&self, x: &P1Point) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::MixedField);
        }
        Ok(())
    }
}

/// Row per section, a block of `r` columns per point.
pub fn evaluation_matrix(pair: &BundlePairP1, points: &[P1Point]) -> Result<DenseMatrix> {
    if points.len() != pair.m {
        return Err(Error::DimensionMismatch(format!("{} points for m = {}", points.len(), pair.m)));
    }
    let r = pair.r;
    let mut out = DenseMatrix::zeros(pair.field, pair.sections.len(), r * points.len());
    for (p, x) in points.iter().enumerate() {
        pair.check_point(x)?;
        for (j, s) in pair.sections.iter().enumerate() {
            for (i, form) in s.iter().enumerate() {
                out.set(j, p * r + i, form.eval(x));
            }
        }
    }
    Ok(out)
}

/// The determinant of [`evaluation_matrix`].
pub fn divisor_value(pair: &BundlePairP1, points: &[P1Point]) -> Result<FieldElement> {
    determinant(&evaluation_matrix(pair, points)?)
}

/// `Π_(i<j) (u_i v_j - u_j v_i)^power`.
pub fn diagonal_product(points: &[P1Point], power: u32) -> FieldElement {
    let field = points[0].field();
    let mut acc = field.one();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            acc *= &points[i].bracket(&points[j]).pow(power);
        }
    }
    acc
}

pub fn random_points(field: Field, count: usize, rng: &mut Rng) -> Vec<P1Point> {
    (0..count).map(|_| P1Point::random(field, rng)).collect()
}

/// Random points avoiding every pairwise diagonal.
pub fn random_distinct_points(field: Field, count: usize, rng: &mut Rng) -> Vec<P1Point> {
    loop {
        let pts = random_points(field, count, rng);
        if !diagonal_product(&pts, 1).is_zero() {
            return pts;
        }
    }
}

/// Outcome of a randomized search for a point tuple off the divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSearch {
    pub exists: bool,
    pub trials: usize,
    /// Schwartz-Zippel bound on a false "no" answer, `(deg / p)^trials`;
    /// `None` over the rationals.
    pub failure_bound: Option<f64>,
}

/// Whether the evaluation determinant is not identically zero, decided by
/// sampling up to `trials` point tuples.
pub fn has_plucker_form(pair: &BundlePairP1, trials: usize, seed: u64) -> Result<bool> {
    Ok(search_plucker_form(pair, trials, seed)?.exists)
}

pub fn search_plucker_form(pair: &BundlePairP1, trials: usize, seed: u64) -> Result<FormSearch> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is needed".into()));
    }
    let mut rng = rng_from_seed(seed);
    for t in 0..trials {
        let pts = random_points(pair.field, pair.m, &mut rng);
        if !divisor_value(pair, &pts)?.is_zero() {
            return Ok(FormSearch { exists: true, trials: t + 1, failure_bound: Some(0.0) });
        }
    }
    // total degree in the affine coordinates of all points
    let degree = (pair.m * pair.det_degree()) as f64;
    let failure_bound = pair.field.size().map(|p| (degree / p as f64).powi(trials as i32));
    Ok(FormSearch { exists: false, trials, failure_bound })
}

/// Result of fitting `det = c · Π_(i<j) (u_i v_j - u_j v_i)^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    /// Fitted constant, as a scalar token.
    pub constant_c: String,
    pub trials: usize,
    pub all_matched: bool,
    pub identically_zero: bool,
    pub mismatches: usize,
    /// For `E = L^(⊕r)`: the constant `c'` with `det = c' · det_L^r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_constant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_matched: Option<bool>,
}

impl DivisorReport {
    /// Report for a pair whose divisor vanishes identically.
    pub fn identically_zero(field: Field, trials: usize) -> Self {
        DivisorReport {
            constant_c: field.zero().token(),
            trials,
            all_matched: false,
            identically_zero: true,
            mismatches: 0,
            power_constant: None,
            power_matched: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Attempts before a pair is declared to have no Plücker form.
const FIT_ATTEMPTS: usize = 32;

/// Checks that the divisor is `r` times the big diagonal (plus nothing, on
/// `P^1`): fits `c` on one tuple of distinct points and verifies the identity
/// exactly on `trials` further random tuples. Balanced pairs are also
/// compared with the `r`-th power of the line-bundle divisor.
pub fn diagonal_factor_check(pair: &BundlePairP1, trials: usize, seed: u64) -> Result<DivisorReport> {
    let mut rng = rng_from_seed(seed);
    let field = pair.field;
    let power = pair.r as u32;
    let line = if pair.is_balanced() {
        Some(make_pair(&[pair.splitting[0]], pair.m, field)?)
    } else {
        None
    };

    let mut fitted = None;
    for _ in 0..FIT_ATTEMPTS {
        let pts = random_distinct_points(field, pair.m, &mut rng);
        let det = divisor_value(pair, &pts)?;
        if det.is_zero() {
            continue;
        }
        let c = det.checked_div(&diagonal_product(&pts, power)).expect("points are distinct");
        let c_line = match &line {
            Some(l) => {
                let base = divisor_value(l, &pts)?.pow(power);
                Some(det.checked_div(&base).expect("the line-bundle divisor is a Vandermonde"))
            }
            None => None,
        };
        fitted = Some((c, c_line));
        break;
    }
    let Some((c, c_line)) = fitted else {
        return Err(Error::IdenticallyZero);
    };

    let mut mismatches = 0;
    let mut power_mismatches = 0;
    for _ in 0..trials {
        let pts = random_points(field, pair.m, &mut rng);
        let det = divisor_value(pair, &pts)?;
        if det != &c * &diagonal_product(&pts, power) {
            mismatches += 1;
        }
        if let (Some(l), Some(cl)) = (&line, &c_line) {
            if det != cl * &divisor_value(l, &pts)?.pow(power) {
                power_mismatches += 1;
            }
        }
    }
    Ok(DivisorReport {
        constant_c: c.token(),
        trials,
        all_matched: mismatches == 0,
        identically_zero: false,
        mismatches,
        power_constant: c_line.as_ref().map(FieldElement::token),
        power_matched: c_line.map(|_| power_mismatches == 0),
    })
}

/// Multivariate polynomial in `u_1, v_1, …, u_m, v_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    field: Field,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Poly {
    fn constant(field: Field, c: FieldElement) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { field, terms }
    }

    fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(|| self.field.zero());
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn add(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly { field: self.field, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let len = ea.len().max(eb.len());
                let exps = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    fn scale(&self, c: &FieldElement) -> Poly {
        let mut out = Poly { field: self.field, terms: BTreeMap::new() };
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A binary form in the coordinates of point `p`.
    fn from_form(form: &BinaryForm, p: usize, vars: usize) -> Poly {
        let mut out = Poly { field: form.field(), terms: BTreeMap::new() };
        let d = form.degree() as u32;
        for (a, c) in form.coeffs().iter().enumerate() {
            let mut exps = vec![0; vars];
            exps[2 * p] = a as u32;
            exps[2 * p + 1] = d - a as u32;
            out.add_term(exps, c.clone());
        }
        out
    }
}

/// Outcome of the symbolic expansion of the evaluation determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicWitness {
    /// Number of monomials in the expanded determinant.
    pub terms: usize,
    /// Constant `c` with `det = c · Π (u_i v_j - u_j v_i)^r`, if it exists.
    pub constant: Option<FieldElement>,
}

/// Largest `rm` accepted by the symbolic expansion (Leibniz over `(rm)!`
/// permutations).
pub const SYMBOLIC_MAX_RM: usize = 8;

/// Expands the evaluation determinant as a polynomial in the homogeneous
/// coordinates of all points and compares it with a multiple of the
/// `r`-th power of the diagonal product.
pub fn symbolic_factor_check(pair: &BundlePairP1) -> Result<SymbolicWitness> {
    let n = pair.r * pair.m;
    if n > SYMBOLIC_MAX_RM {
        return Err(Error::Unsupported(format!("symbolic expansion limited to rm <= {SYMBOLIC_MAX_RM}")));
    }
    let field = pair.field;
    let vars = 2 * pair.m;
    // entries[j][p * r + i]
    let entries: Vec<Vec<Poly>> = pair
        .sections
        .iter()
        .map(|s| {
            (0..pair.m)
                .flat_map(|p| s.iter().map(move |form| Poly::from_form(form, p, vars)))
                .collect()
        })
        .collect();

    let mut det = Poly { field, terms: BTreeMap::new() };
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut perm, &mut |perm, sign| {
        let mut term = Poly::constant(field, field.from_i64(sign));
        for (row, &col) in perm.iter().enumerate() {
            if entries[row][col].is_zero() {
                return;
            }
            term = term.mul(&entries[row][col]);
        }
        det.add(&term);
    });

    let mut reference = Poly::constant(field, field.one());
    for i in 0..pair.m {
        for j in i + 1..pair.m {
            let mut bracket = Poly { field, terms: BTreeMap::new() };
            let mut e = vec![0; vars];
            e[2 * i] = 1;
            e[2 * j + 1] = 1;
            bracket.add_term(e, field.one());
            let mut e = vec![0; vars];
            e[2 * j] = 1;
            e[2 * i + 1] = 1;
            bracket.add_term(e, field.from_i64(-1));
            for _ in 0..pair.r {
                reference = reference.mul(&bracket);
            }
        }
    }

    let terms = det.terms.len();
    let constant = match (det.terms.iter().next(), reference.terms.get(det.terms.keys().next().unwrap_or(&vec![]))) {
        (Some((_, d)), Some(r)) => {
            let c = d.checked_div(r).expect("reference coefficients are nonzero");
            (reference.scale(&c) == det).then_some(c)
        }
        _ => None,
    };
    Ok(SymbolicWitness { terms, constant })
}

/// Heap's algorithm, reporting each permutation with its sign.
fn for_each_permutation(perm: &mut [usize], f: &mut dyn FnMut(&[usize], i64)) {
    let n = perm.len();
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    f(perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            f(perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Determinant of a square matrix of binary forms (Leibniz expansion).
fn form_determinant(rows: &[Vec<&BinaryForm>], degree: usize, field: Field) -> BinaryForm {
    let n = rows.len();
    let mut acc = BinaryForm::zero(field, degree);
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut perm, &mut |perm, sign| {
        let mut term: Option<BinaryForm> = None;
        for (i, &j) in perm.iter().enumerate() {
            let f = rows[i][j];
            if f.is_zero() {
                return;
            }
            term = Some(match term {
                None => f.clone(),
                Some(t) => t.mul(f),
            });
        }
        let term = term.expect("n >= 1");
        acc = acc.add(&if sign < 0 { term.scale(&field.from_i64(-1)) } else { term });
    });
    acc
}

/// Matrix of the determinant map `∧^r S → H^0(det E)`: one column per
/// `s_(j_1) ∧ … ∧ s_(j_r)`, `j_1 < … < j_r` (increasing mask order), holding
/// the coefficients of the pointwise determinant in the monomial basis
/// `u^a v^(D - a)`, `D = r(m - 1)`.
pub fn det_map_matrix(pair: &BundlePairP1) -> DenseMatrix {
    let n = pair.sections.len();
    let degree = pair.det_degree();
    let mut out = DenseMatrix::zeros(pair.field, degree + 1, binomial(n, pair.r));
    for (col, mask) in subsets(n, pair.r).enumerate() {
        let chosen: Vec<usize> = bits(mask).collect();
        let rows: Vec<Vec<&BinaryForm>> =
            (0..pair.r).map(|i| chosen.iter().map(|&j| &pair.sections[j][i]).collect()).collect();
        let det = form_determinant(&rows, degree, pair.field);
        for (a, c) in det.coeffs().iter().enumerate() {
            out.set(a, col, c.clone());
        }
    }
    out
}

pub fn det_map_rank(pair: &BundlePairP1) -> usize {
    mat_rank(&det_map_matrix(pair))
}

/// Plücker vector (in `∧^r S^*`) of the image of the dual evaluation at
/// `x`: the `r x r` minors of the section values at `x`.
pub fn classify_point(pair: &BundlePairP1, x: &P1Point) -> Result<ExteriorVector> {
    pair.check_point(x)?;
    let values = pair.value_matrix(x);
    let rank = mat_rank(&values);
    if rank < pair.r {
        return Err(Error::NotGloballyGenerated(x.to_string()));
    }
    let rows: Vec<ExteriorVector> = (0..pair.r)
        .map(|i| ExteriorVector::from_coords(pair.field, &values.row(i)).expect("rm <= 64"))
        .collect();
    ExteriorVector::wedge_all(&rows)
}

/// The functional "evaluate at `x`" on forms of degree `r(m - 1)`.
pub fn evaluation_functional(pair: &BundlePairP1, x: &P1Point) -> Vec<FieldElement> {
    let d = pair.det_degree();
    (0..=d).map(|a| x.u.pow(a as u32) * x.v.pow((d - a) as u32)).collect()
}

/// Image of a functional on `H^0(det E)` under the transpose of the
/// determinant map, read as a vector of `∧^r S^*`.
pub fn lambda_image(pair: &BundlePairP1, functional: &[FieldElement]) -> Result<ExteriorVector> {
    let d = det_map_matrix(pair);
    if functional.len() != d.rows() {
        return Err(Error::DimensionMismatch(format!(
            "functional of length {}, expected {}",
            functional.len(),
            d.rows()
        )));
    }
    if functional.iter().any(|c| c.field() != pair.field) {
        return Err(Error::MixedField);
    }
    let coords: Vec<FieldElement> = (0..d.cols())
        .map(|col| {
            functional
                .iter()
                .enumerate()
                .fold(pair.field.zero(), |acc, (a, f)| acc + f * &d.get(a, col))
        })
        .collect();
    let v = ExteriorVector::from_dense(pair.field, pair.sections.len(), pair.r, &coords)?;
    if v.is_zero() {
        return Err(Error::Indeterminacy);
    }
    Ok(v)
}

/// Rank of the span of [`classify_point`] at the given points.
pub fn span_rank(pair: &BundlePairP1, points: &[P1Point]) -> Result<usize> {
    let rows = points
        .iter()
        .map(|x| classify_point(pair, x).map(|v| v.to_dense()))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(mat_rank(&DenseMatrix::from_rows(pair.field, rows)?))
}

/// Linear span rank of the classifying curve through `samples` random
/// points; the projective span has dimension one less.
pub fn span_dimension(pair: &BundlePairP1, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = rng_from_seed(seed);
    span_rank(pair, &random_points(pair.field, samples, &mut rng))
}

/// Whether evaluation `S → E_x ⊕ E_y` is onto.
pub fn two_point_surjectivity(pair: &BundlePairP1, x: &P1Point, y: &P1Point) -> Result<bool> {
    pair.check_point(x)?;
    pair.check_point(y)?;
    if x == y {
        return Err(Error::Precondition("the two points must differ".into()));
    }
    let mut m = DenseMatrix::zeros(pair.field, pair.sections.len(), 2 * pair.r);
    for (p, pt) in [x, y].into_iter().enumerate() {
        for (j, s) in pair.sections.iter().enumerate() {
            for (i, form) in s.iter().enumerate() {
                m.set(j, p * pair.r + i, form.eval(pt));
            }
        }
    }
    Ok(mat_rank(&m) == 2 * pair.r)
}
