//! The total wedge form on `m` copies of `∧^r V`, `dim V = rm`.
//!
//! For `w = (w_1, …, w_m)` the form value is the coefficient of
//! `e_1 ∧ … ∧ e_rm` in `w_1 ∧ … ∧ w_m`. Everything here is local data of
//! the hypersurface it cuts out: polars at a point, the multiplicity at a
//! point, and the linear conditions for a direction to be tangent to the
//! locus of points of multiplicity at least `k`.
//!
//! Sign convention: a product taken in an order other than slot order is
//! brought back to slot order by the sign of the induced shuffle of
//! degree-`r` coordinate blocks, computed with [`merge_sign`]. For odd `r`
//! this is the parity of the slot permutation, for even `r` it is always
//! `+1`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exterior::{binomial, bits, mask_rank, merge_sign, random_exterior, subsets, ExteriorVector, MultiIndex};
use crate::scalars::{mat_rank, DenseMatrix, Field, FieldElement, Rng};

/// A point of `P(∧^r V)^m`, kept as one representative vector per slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointTuple {
    r: usize,
    m: usize,
    slots: Vec<ExteriorVector>,
}

impl PointTuple {
    pub fn new(r: usize, m: usize, slots: Vec<ExteriorVector>) -> Result<Self> {
        check_shape(r, m)?;
        if slots.len() != m {
            return Err(Error::Malformed(format!("{} slots for m = {m}", slots.len())));
        }
        let field = slots[0].field();
        for (i, s) in slots.iter().enumerate() {
            if s.field() != field {
                return Err(Error::MixedField);
            }
            if s.n() != r * m || s.degree() != r {
                return Err(Error::DimensionMismatch(format!(
                    "slot {} lies in ∧^{} of dimension {}, expected ∧^{r} of dimension {}",
                    i + 1,
                    s.degree(),
                    s.n(),
                    r * m
                )));
            }
            if s.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        Ok(PointTuple { r, m, slots })
    }

    /// The diagonal point `(w, …, w)` with `m = n / deg w` slots.
    pub fn diagonal(w: &ExteriorVector) -> Result<Self> {
        let r = w.degree();
        if r == 0 || w.n() % r != 0 {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimension {} is not a multiple of the degree {r}",
                w.n()
            )));
        }
        let m = w.n() / r;
        Self::new(r, m, vec![w.clone(); m])
    }

    /// Independent uniformly sampled nonzero slots.
    pub fn random(field: Field, r: usize, m: usize, rng: &mut Rng) -> Result<Self> {
        check_shape(r, m)?;
        let slots = (0..m).map(|_| random_exterior(field, r * m, r, rng)).collect::<Result<Vec<_>>>()?;
        Self::new(r, m, slots)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `rm`, the dimension of `V`.
    pub fn n(&self) -> usize {
        self.r * self.m
    }

    pub fn field(&self) -> Field {
        self.slots[0].field()
    }

    pub fn slots(&self) -> &[ExteriorVector] {
        &self.slots
    }

    /// Canonical representative: each slot scaled so that its first nonzero
    /// coefficient, in increasing mask order, is 1.
    pub fn canonical(&self) -> PointTuple {
        PointTuple { slots: self.slots.iter().map(ExteriorVector::normalized).collect(), ..*self }
    }

    /// Equality of the underlying points of the product of projective spaces.
    pub fn projectively_eq(&self, other: &PointTuple) -> bool {
        self.canonical() == other.canonical()
    }

    /// Copy with slots `i` and `j` exchanged (0-based).
    pub fn swapped(&self, i: usize, j: usize) -> PointTuple {
        let mut out = self.clone();
        out.slots.swap(i, j);
        out
    }
}

fn check_shape(r: usize, m: usize) -> Result<()> {
    if r == 0 || m == 0 {
        return Err(Error::Malformed(format!("r = {r} and m = {m} must be positive")));
    }
    if r * m > crate::exterior::MAX_DIM {
        return Err(Error::Unsupported(format!("rm = {} exceeds 64", r * m)));
    }
    Ok(())
}

/// Coordinate mask of the degree-`r` block belonging to each slot in `slots`.
fn block_mask(r: usize, slots: u32) -> u64 {
    bits(slots as u64).fold(0u64, |acc, s| acc | (((1u64 << r) - 1) << (s * r)))
}

/// Sign turning `x_A ∧ x_B` (each group in slot order) into the slot-ordered
/// product of all slots in `A ∪ B`.
fn block_sign(r: usize, a: u32, b: u32) -> i8 {
    merge_sign(block_mask(r, a), block_mask(r, b))
}

fn signed(sign: i8, x: FieldElement) -> FieldElement {
    if sign < 0 {
        -x
    } else {
        x
    }
}

/// Value of the form at the chosen representatives.
pub fn eval_form(p: &PointTuple) -> FieldElement {
    let mut acc = p.slots[0].clone();
    for s in &p.slots[1..] {
        acc = acc.wedge(s).expect("slots share ambient space and degrees sum to rm");
        if acc.is_zero() {
            return p.field().zero();
        }
    }
    acc.top_coefficient()
}

/// One monomial of the form: block `k` is the index set read from slot `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleTerm {
    pub blocks: Vec<MultiIndex>,
    pub sign: i8,
}

/// All ordered partitions of `{1..rm}` into `m` blocks of size `r`, with
/// the sign of `e_(I_1) ∧ … ∧ e_(I_m)` against `e_1 ∧ … ∧ e_rm`.
///
/// There are `(rm)! / (r!)^m` of them, in lexicographic order of the
/// block masks.
pub fn expand_form(r: usize, m: usize) -> Result<Vec<ShuffleTerm>> {
    check_shape(r, m)?;
    let n = r * m;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(m);
    fn rec(r: usize, n: usize, remaining: u64, used: u64, sign: i8, stack: &mut Vec<u64>, out: &mut Vec<ShuffleTerm>) {
        if remaining == 0 {
            let blocks = stack.iter().map(|&b| MultiIndex::new(b, n).expect("mask within n")).collect();
            out.push(ShuffleTerm { blocks, sign });
            return;
        }
        let free: Vec<usize> = bits(remaining).collect();
        for pick in subsets(free.len(), r) {
            let block = bits(pick).fold(0u64, |acc, i| acc | (1u64 << free[i]));
            stack.push(block);
            rec(r, n, remaining & !block, used | block, sign * merge_sign(used, block), stack, out);
            stack.pop();
        }
    }
    rec(r, n, full, 0, 1, &mut stack, &mut out);
    Ok(out)
}

/// Evaluates the shuffle expansion `Σ sign · Π p^(k)_(I_k)` at `p`.
pub fn eval_expansion(terms: &[ShuffleTerm], p: &PointTuple) -> FieldElement {
    let field = p.field();
    let mut acc = field.zero();
    'term: for t in terms {
        let mut prod = field.one();
        for (slot, block) in p.slots.iter().zip(&t.blocks) {
            let c = slot.coefficient(block.mask());
            if c.is_zero() {
                continue 'term;
            }
            prod *= &c;
        }
        acc += &signed(t.sign, prod);
    }
    acc
}

/// JSON list of `[blocks, sign]` pairs with 1-based index lists.
pub fn expansion_to_json(terms: &[ShuffleTerm]) -> String {
    let wire: Vec<(Vec<Vec<usize>>, i8)> =
        terms.iter().map(|t| (t.blocks.iter().map(|b| b.indices()).collect(), t.sign)).collect();
    serde_json::to_string(&wire).expect("plain data serializes")
}

fn check_directions(p: &PointTuple, t: &[ExteriorVector]) -> Result<()> {
    if t.len() != p.m {
        return Err(Error::DimensionMismatch(format!("{} directions for m = {}", t.len(), p.m)));
    }
    for x in t {
        if x.field() != p.field() {
            return Err(Error::MixedField);
        }
        if x.n() != p.n() || x.degree() != p.r {
            return Err(Error::DimensionMismatch(format!(
                "direction in ∧^{} of dimension {}, expected ∧^{} of dimension {}",
                x.degree(),
                x.n(),
                p.r,
                p.n()
            )));
        }
    }
    Ok(())
}

/// Wedge, in slot order, of the vectors `v[s]` for `s` in the slot set.
fn slot_wedge(v: &[ExteriorVector], slots: u32) -> Option<ExteriorVector> {
    let mut acc: Option<ExteriorVector> = None;
    for s in bits(slots as u64) {
        acc = Some(match acc {
            None => v[s].clone(),
            Some(a) => a.wedge(&v[s]).expect("degrees bounded by rm"),
        });
    }
    acc
}

/// The coefficient of `ε^k` in the form evaluated at `(w_i + ε t_i)`:
/// `Σ_{|S| = k} ± w_(M−S) ∧ t_S`.
pub fn polar(k: usize, w: &PointTuple, t: &[ExteriorVector]) -> Result<FieldElement> {
    check_directions(w, t)?;
    let m = w.m;
    if k > m {
        return Err(Error::Precondition(format!("polar order {k} exceeds m = {m}")));
    }
    let all: u32 = (1u32 << m) - 1;
    let mut acc = w.field().zero();
    for s in subsets(m, k) {
        let s = s as u32;
        let rest = all & !s;
        let value = match (slot_wedge(&w.slots, rest), slot_wedge(t, s)) {
            (Some(a), Some(b)) => a.wedge(&b)?.top_coefficient(),
            (Some(a), None) => a.top_coefficient(),
            (None, Some(b)) => b.top_coefficient(),
            (None, None) => unreachable!("m >= 1"),
        };
        acc += &signed(block_sign(w.r, rest, s), value);
    }
    Ok(acc)
}

/// Partial wedges `w_S` for every nonempty slot set, built bottom-up.
/// Sets containing a vanishing subset are recorded as zero without a product.
fn partial_wedges(p: &PointTuple) -> HashMap<u32, ExteriorVector> {
    let mut memo: HashMap<u32, ExteriorVector> = HashMap::new();
    for size in 1..=p.m {
        for s in subsets(p.m, size) {
            let s = s as u32;
            let top = 31 - s.leading_zeros();
            let rest = s & !(1 << top);
            let v = if rest == 0 {
                p.slots[top as usize].clone()
            } else {
                let prev = &memo[&rest];
                if prev.is_zero() {
                    ExteriorVector::zero(p.field(), p.n(), p.r * size).expect("degree within rm")
                } else {
                    prev.wedge(&p.slots[top as usize]).expect("degree within rm")
                }
            };
            memo.insert(s, v);
        }
    }
    memo
}

/// Multiplicity of the hypersurface at `p`: the largest `k` such that every
/// partial wedge `w_S` with `|S| = m − k + 1` vanishes. Always `<= m − 1`.
pub fn multiplicity_at(p: &PointTuple) -> usize {
    let memo = partial_wedges(p);
    let vanish = |size: usize| subsets(p.m, size).all(|s| memo[&(s as u32)].is_zero());
    debug_assert!(!vanish(1), "slots are nonzero");
    // largest k first: |S| = m - k + 1 grows from 2
    for k in (1..p.m).rev() {
        if vanish(p.m - k + 1) {
            return k;
        }
    }
    0
}

/// Multiplicity at the diagonal point `(w, …, w)`, from the powers of `w`.
pub fn diagonal_multiplicity(w: &ExteriorVector) -> Result<usize> {
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
    let m = w.n() / r;
    let mut power = w.clone();
    for j in 2..=m {
        power = power.wedge(w)?;
        if power.is_zero() {
            // w^j = 0 is the vanishing of every w_S with |S| = j
            return Ok(m - j + 1);
        }
    }
    Ok(0)
}

/// Linear conditions on `t = (t_1, …, t_m)` for the direction `t` at `p` to
/// be tangent to the locus of multiplicity `>= k`: for each slot set `S` with
/// `|S| = m − k + 1`, the `ε`-coefficient of `(w + εt)_S` vanishes.
///
/// Rows come in one block per `S` (increasing slot mask), indexed inside the
/// block by the basis of `∧^(r|S|) V`; columns are `(slot, basis of ∧^r V)`.
#[derive(Clone, Debug)]
pub struct TangentSystem {
    pub k: usize,
    pub base: PointTuple,
    pub matrix: DenseMatrix,
}

impl TangentSystem {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

pub fn build_tangent_system(p: &PointTuple, k: usize) -> Result<TangentSystem> {
    let (r, m, n) = (p.r, p.m, p.n());
    let cols_per_slot = binomial(n, r);
    let cols = m * cols_per_slot;
    let field = p.field();
    if k == 0 {
        return Ok(TangentSystem { k, base: p.clone(), matrix: DenseMatrix::zeros(field, 0, cols) });
    }
    let mult = multiplicity_at(p);
    if mult < k {
        return Err(Error::Precondition(format!(
            "point has multiplicity {mult}, tangent conditions requested at order {k}"
        )));
    }
    let size = m - k + 1;
    let rows_per_set = binomial(n, r * size);
    let sets: Vec<u32> = subsets(m, size).map(|s| s as u32).collect();
    let mut matrix = DenseMatrix::zeros(field, sets.len() * rows_per_set, cols);
    let memo = partial_wedges(p);
    let basis: Vec<u64> = subsets(n, r).collect();
    for (si, &set) in sets.iter().enumerate() {
        for s in bits(set as u64) {
            let others = set & !(1 << s);
            let shift = block_sign(r, others, 1 << s);
            let partial = &memo[&others];
            for (j, c) in partial.terms() {
                for (col, &i) in basis.iter().enumerate() {
                    let sign = merge_sign(j, i);
                    if sign == 0 {
                        continue;
                    }
                    let row = si * rows_per_set + mask_rank(j | i);
                    // each (j, i) hits a distinct row, so plain assignment suffices
                    matrix.set(row, s * cols_per_slot + col, signed(sign * shift, c.clone()));
                }
            }
        }
    }
    Ok(TangentSystem { k, base: p.clone(), matrix })
}

/// Codimension of the space of tangent directions at order `k` in
/// `(∧^r V)^m`: the rank of [`build_tangent_system`].
pub fn tangent_codim(p: &PointTuple, k: usize) -> Result<usize> {
    Ok(mat_rank(&build_tangent_system(p, k)?.matrix))
}
