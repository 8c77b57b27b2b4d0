//! Exact scalars and the dense-matrix kernels shared by every other module.
//!
//! Two fields are supported: the rationals (arbitrary precision, always in
//! lowest terms) and a prime field `F_p` with `p >= 2^31 - 1`. All arithmetic
//! is exact. Ranks over the rationals use fraction-free (Bareiss)
//! elimination; over `F_p` a plain Gaussian elimination on machine words.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// The Mersenne prime `2^31 - 1`, the default modulus.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Smallest modulus accepted for the prime field.
pub const MIN_PRIME: u64 = DEFAULT_PRIME;

/// Deterministic random stream used for all sampling.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent per-sample seed from a base seed (splitmix64).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A computable base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// The default prime field `F_(2^31 - 1)`.
    pub const FP: Field = Field::Prime(DEFAULT_PRIME);

    /// Checked constructor for a prime field.
    pub fn prime(p: u64) -> Result<Field> {
        if p < MIN_PRIME {
            return Err(Error::Malformed(format!("modulus {p} is below 2^31 - 1")));
        }
        if !is_prime(p) {
            return Err(Error::Malformed(format!("modulus {p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, value: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(value.into())),
            Field::Prime(p) => FieldElement::Prime {
                residue: (value as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den`; `den` must be nonzero (and invertible mod p).
    pub fn from_ratio(self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::Malformed("zero denominator".into()));
        }
        match self {
            Field::Rational => Ok(FieldElement::Rational(BigRational::new(num.into(), den.into()))),
            Field::Prime(_) => self
                .from_i64(den)
                .inv()
                .map(|d| self.from_i64(num) * d)
                .ok_or_else(|| Error::Malformed("denominator vanishes mod p".into())),
        }
    }

    /// Uniform residue in `F_p`, or `a/b` with `a` uniform in `[-100, 100]`
    /// and `b` uniform in `[1, 10]`.
    pub fn sample(self, rng: &mut Rng) -> FieldElement {
        match self {
            Field::Rational => {
                let num: i64 = rng.gen_range(-100..=100);
                let den: i64 = rng.gen_range(1..=10);
                FieldElement::Rational(BigRational::new(num.into(), den.into()))
            }
            Field::Prime(p) => FieldElement::Prime { residue: rng.gen_range(0..p), modulus: p },
        }
    }

    /// Like [`Field::sample`] but never returns zero.
    pub fn sample_nonzero(self, rng: &mut Rng) -> FieldElement {
        loop {
            let x = self.sample(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// Parses the textual token written by [`FieldElement::token`].
    pub fn parse_token(self, token: &str) -> Result<FieldElement> {
        let bad = || Error::Malformed(format!("cannot parse scalar {token:?} for {self}"));
        match self {
            Field::Rational => {
                let (num, den) = token.split_once('/').ok_or_else(bad)?;
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if !den.is_positive() {
                    return Err(bad());
                }
                let value = BigRational::new(num.clone(), den.clone());
                // only the reduced form round-trips bit-exactly
                if value.numer() != &num || value.denom() != &den {
                    return Err(bad());
                }
                Ok(FieldElement::Rational(value))
            }
            Field::Prime(p) => {
                let residue: u64 = token.parse().map_err(|_| bad())?;
                if residue >= p {
                    return Err(bad());
                }
                Ok(FieldElement::Prime { residue, modulus: p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Exact scalar of either supported field.
///
/// Arithmetic operators panic when the operands belong to different fields;
/// matrix-level entry points validate homogeneity up front and return
/// [`Error::MixedField`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Prime { residue, .. } => *residue == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: inv_mod(*residue, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut exp: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn checked_div(&self, other: &FieldElement) -> Option<FieldElement> {
        other.inv().map(|inv| self * &inv)
    }

    /// Serialization token: `"num/den"` over Q, the decimal residue over F_p.
    pub fn token(&self) -> String {
        match self {
            FieldElement::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            FieldElement::Prime { residue, .. } => residue.to_string(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            FieldElement::Prime { .. } => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => write!(f, "{q}"),
            FieldElement::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn mixed() -> ! {
    panic!("arithmetic between elements of different fields")
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime { residue: add_mod(*a, *b, *p), modulus: *p },
            _ => mixed(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime { residue: add_mod(*a, *p - *b, *p), modulus: *p },
            _ => mixed(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime { residue: a, modulus: p },
                FieldElement::Prime { residue: b, modulus: q },
            ) if p == q => FieldElement::Prime { residue: mul_mod(*a, *b, *p), modulus: *p },
            _ => mixed(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

/// Draws one scalar of `field` from the stream.
pub fn sample_scalar(field: Field, rng: &mut Rng) -> FieldElement {
    field.sample(rng)
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Row-major dense matrix over one field.
///
/// Entries are stored unboxed: machine-word residues over `F_p`, big
/// rationals over Q. A matrix can therefore never mix fields; constructors
/// reject mixed input with [`Error::MixedField`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Rational(Vec<BigRational>),
    Prime { modulus: u64, residues: Vec<u64> },
}

impl DenseMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::MixedField);
        }
        let storage = match field {
            Field::Rational => Storage::Rational(
                entries
                    .into_iter()
                    .map(|e| match e {
                        FieldElement::Rational(q) => q,
                        FieldElement::Prime { .. } => unreachable!(),
                    })
                    .collect(),
            ),
            Field::Prime(p) => Storage::Prime {
                modulus: p,
                residues: entries
                    .into_iter()
                    .map(|e| match e {
                        FieldElement::Prime { residue, .. } => residue,
                        FieldElement::Rational(_) => unreachable!(),
                    })
                    .collect(),
            },
        };
        Ok(DenseMatrix { rows, cols, storage })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let storage = match field {
            Field::Rational => Storage::Rational(vec![BigRational::zero(); rows * cols]),
            Field::Prime(p) => Storage::Prime { modulus: p, residues: vec![0; rows * cols] },
        };
        DenseMatrix { rows, cols, storage }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect(),
        )
    }

    /// Matrix with independently sampled entries.
    pub fn random(field: Field, rows: usize, cols: usize, rng: &mut Rng) -> Self {
        let entries = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Self::new(field, rows, cols, entries).expect("entries sampled from one field")
    }

    pub fn field(&self) -> Field {
        match &self.storage {
            Storage::Rational(_) => Field::Rational,
            Storage::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        let k = i * self.cols + j;
        match &self.storage {
            Storage::Rational(v) => FieldElement::Rational(v[k].clone()),
            Storage::Prime { modulus, residues } => {
                FieldElement::Prime { residue: residues[k], modulus: *modulus }
            }
        }
    }

    /// Overwrites one entry.
    ///
    /// # Panics
    ///
    /// If `value` belongs to a different field or the index is out of bounds.
    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        let k = i * self.cols + j;
        match (&mut self.storage, value) {
            (Storage::Rational(v), FieldElement::Rational(q)) => v[k] = q,
            (Storage::Prime { modulus, residues }, FieldElement::Prime { residue, modulus: p })
                if *modulus == p =>
            {
                residues[k] = residue
            }
            _ => mixed(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> Vec<FieldElement> {
        (0..self.rows).flat_map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Rational(v) => v.iter().all(Zero::is_zero),
            Storage::Prime { residues, .. } => residues.iter().all(|&x| x == 0),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Sub-matrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field(), self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// Sub-matrix made of the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix {
        self.transpose().select_columns(rows).transpose()
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.field() != other.field() {
            return Err(Error::MixedField);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.field(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field().zero();
                for k in 0..self.cols {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact rank of `m` over its field.
pub fn mat_rank(m: &DenseMatrix) -> usize {
    match &m.storage {
        Storage::Prime { modulus, residues } => rank_mod_p(residues.clone(), m.rows, m.cols, *modulus),
        Storage::Rational(v) => {
            let mut rows = integer_rows(v, m.rows, m.cols).0;
            bareiss(&mut rows, m.cols).0
        }
    }
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &DenseMatrix) -> Result<FieldElement> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    match &m.storage {
        Storage::Prime { modulus, residues } => Ok(FieldElement::Prime {
            residue: det_mod_p(residues.clone(), m.rows, *modulus),
            modulus: *modulus,
        }),
        Storage::Rational(v) => {
            let (mut rows, scale) = integer_rows(v, m.rows, m.cols);
            let (rank, det) = bareiss(&mut rows, m.cols);
            if rank < m.rows {
                return Ok(Field::Rational.zero());
            }
            Ok(FieldElement::Rational(BigRational::new(det, scale)))
        }
    }
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &DenseMatrix, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let field = a.field();
    if b.iter().any(|x| x.field() != field) {
        return Err(Error::MixedField);
    }
    let n = a.rows;
    let mut aug: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            let mut row = a.row(i);
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
            return Ok(None);
        };
        aug.swap(col, piv);
        let inv = aug[col][col].inv().expect("nonzero pivot");
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * p);
            }
        }
    }
    Ok(Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect()))
}

/// Clears denominators row by row. Rank is unchanged; the determinant is
/// multiplied by the returned scale.
fn integer_rows(v: &[BigRational], rows: usize, cols: usize) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let out = (0..rows)
        .map(|i| {
            let row = &v[i * cols..(i + 1) * cols];
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let out = row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
            scale *= lcm;
            out
        })
        .collect();
    (out, scale)
}

/// Fraction-free elimination. Returns the rank and, for square full-rank
/// input, the determinant.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut negate = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        if piv != rank {
            a.swap(piv, rank);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    let det = if negate { -prev } else { prev };
    (rank, det)
}

/// Reduction modulo `p`, with a shift-and-add path for `2^31 - 1`.
#[derive(Clone, Copy)]
struct Modulus {
    p: u64,
    mersenne31: bool,
}

impl Modulus {
    fn new(p: u64) -> Self {
        Modulus { p, mersenne31: p == DEFAULT_PRIME }
    }

    /// `a + b*c mod p` for residues `a, b, c`, valid when `p < 2^32`.
    #[inline(always)]
    fn mul_add(self, a: u64, b: u64, c: u64) -> u64 {
        let x = a + b * c;
        if self.mersenne31 {
            let y = (x & DEFAULT_PRIME) + (x >> 31);
            let y = (y & DEFAULT_PRIME) + (y >> 31);
            if y >= DEFAULT_PRIME {
                y - DEFAULT_PRIME
            } else {
                y
            }
        } else {
            x % self.p
        }
    }
}

fn rank_mod_p(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    if p >= 1 << 32 {
        return rank_mod_p_wide(a, rows, cols, p);
    }
    let m = Modulus::new(p);
    let mut rank = 0;
    let mut pivot_row = vec![0u64; cols];
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
        if piv != rank {
            for j in c..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for j in c..cols {
            pivot_row[j] = m.mul_add(0, a[rank * cols + j], inv);
        }
        // store the negated pivot row so elimination is a multiply-add
        for j in c..cols {
            pivot_row[j] = if pivot_row[j] == 0 { 0 } else { p - pivot_row[j] };
        }
        for r in rank + 1..rows {
            let f = a[r * cols + c];
            if f == 0 {
                continue;
            }
            let row = &mut a[r * cols + c..(r + 1) * cols];
            for (x, &q) in row.iter_mut().zip(&pivot_row[c..]) {
                *x = m.mul_add(*x, f, q);
            }
        }
        rank += 1;
    }
    rank
}

fn rank_mod_p_wide(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
        if piv != rank {
            for j in c..cols {
                a.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for j in c..cols {
            a[rank * cols + j] = mul_mod(a[rank * cols + j], inv, p);
        }
        for r in rank + 1..rows {
            let f = a[r * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, a[rank * cols + j], p);
                a[r * cols + j] = add_mod(a[r * cols + j], p - sub, p);
            }
        }
        rank += 1;
    }
    rank
}

fn det_mod_p(residues: Vec<u64>, n: usize, p: u64) -> u64 {
    let mut a: Vec<Vec<u64>> = residues.chunks(n.max(1)).map(<[u64]>::to_vec).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else { return 0 };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[c][c], p);
        let inv = inv_mod(a[c][c], p);
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let f = mul_mod(a[r][c], inv, p);
            for j in c..n {
                let sub = mul_mod(f, a[c][j], p);
                a[r][j] = add_mod(a[r][j], p - sub, p);
            }
        }
    }
    det
}
