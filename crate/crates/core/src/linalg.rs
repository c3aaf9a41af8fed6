//! Exact linear algebra over GF(q): row reduction, canonical subspaces,
//! sums, intersections and the subspace distance.

use std::fmt;

use thiserror::Error;

use crate::gf::{Field, FieldElem, GfError};

/// Upper bound on any brute-force enumeration (vectors or subspaces).
pub const ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has length {found}, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("matrix shapes {left:?} and {right:?} cannot be multiplied")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u64 },
    #[error("requested dimension {dim} exceeds {available}")]
    DimensionOutOfRange { dim: usize, available: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Dense row-major matrix of raw field values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixFq {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> MatrixFq {
        MatrixFq { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> MatrixFq {
        let mut m = MatrixFq::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a `rows.len() x cols` matrix from raw rows.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Result<MatrixFq, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged { row: i, expected: cols, found: r.len() });
            }
            if let Some(&bad) = r.iter().find(|&&v| !field.contains(v)) {
                return Err(GfError::OutOfRange { value: bad as u64, q: field.order() }.into());
            }
            data.extend_from_slice(r);
        }
        Ok(MatrixFq { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn entry(&self, r: usize, c: usize) -> FieldElem {
        self.field.elem(self.get(r, c)).expect("entries are field elements")
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact panics on zero width
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    pub fn mul(&self, other: &MatrixFq) -> Result<MatrixFq, LinalgError> {
        self.field.check_same(&other.field)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let f = &self.field;
        let mut out = MatrixFq::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and rank. The input is left untouched.
    pub fn rref(&self) -> (MatrixFq, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place().len();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Gauss-Jordan elimination; returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == self.rows {
                break;
            }
            let Some(r) = (prow..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if r != prow {
                for j in c..cols {
                    self.data.swap(r * cols + j, prow * cols + j);
                }
            }
            let inv = f.inv(self.get(prow, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = f.mul(inv, self.get(prow, j));
                self.set(prow, j, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, c);
                if r == prow || factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = f.add(self.get(r, j), f.mul(neg, self.get(prow, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }

    fn truncate_rows(&mut self, rows: usize) {
        self.rows = rows;
        self.data.truncate(rows * self.cols);
    }
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFq {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in self.row_iter() {
            let toks: Vec<String> = r.iter().map(|&v| self.field.format(v)).collect();
            writeln!(f, "  [{}]", toks.join(" "))?;
        }
        Ok(())
    }
}

/// A linear subspace of GF(q)^N held as its RREF basis with no zero rows.
/// Equal subspaces have identical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatrixFq,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { basis: MatrixFq::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace { basis: MatrixFq::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Row space of `m`.
    pub fn from_matrix(mut m: MatrixFq) -> Subspace {
        let pivots = m.rref_in_place();
        m.truncate_rows(pivots.len());
        Subspace { basis: m, pivots }
    }

    /// Span of raw coordinate vectors of length `ambient`.
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<u32>]) -> Result<Subspace, LinalgError> {
        Ok(Subspace::from_matrix(MatrixFq::from_rows(field, ambient, vectors)?))
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        self.field().check_same(other.field())?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Residual of `v` after clearing every pivot column of the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let factor = v[c];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                *x = f.add(*x, f.mul(neg, b));
            }
        }
        v
    }

    /// Membership by residual reduction. `v` must have length `ambient_dim`.
    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient_dim(), "vector length must match the ambient dimension");
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        Ok(self.dim() <= other.dim() && self.basis.row_iter().all(|r| other.contains(r)))
    }

    /// `V1 + V2`, the row space of both bases stacked.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let mut stacked = self.basis.clone();
        stacked.rows += other.dim();
        stacked.data.extend_from_slice(&other.basis.data);
        Ok(Subspace::from_matrix(stacked))
    }

    /// `V1 ∩ V2` by Zassenhaus block reduction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        Ok(zassenhaus(self, other)?.1)
    }

    /// Every vector of the subspace once: all combinations of the basis rows,
    /// coefficients running over the field in raw order, last row fastest.
    pub fn enumerate_vectors(&self) -> Result<Vec<Vec<u32>>, LinalgError> {
        let q = self.field().order() as u128;
        let count = q.pow(self.dim() as u32);
        if count > ENUMERATION_CAP as u128 {
            return Err(LinalgError::TooLarge { count, cap: ENUMERATION_CAP });
        }
        Ok(combinations(self.field(), &self.basis, count as usize))
    }
}

fn combinations(f: &Field, rows: &MatrixFq, count: usize) -> Vec<Vec<u32>> {
    let q = f.order();
    let k = rows.rows();
    let mut coeffs = vec![0u32; k];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut v = vec![0u32; rows.cols()];
        for (i, &a) in coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(rows.row(i)) {
                *x = f.add(*x, f.mul(a, b));
            }
        }
        out.push(v);
        for c in coeffs.iter_mut().rev() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
    out
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient_dim())?;
        fmt::Debug::fmt(&self.basis, f)
    }
}

/// Sum and intersection from one reduction of `[[V1, V1], [V2, 0]]`.
/// Rows whose left half vanishes carry the intersection in their right half.
pub fn zassenhaus(a: &Subspace, b: &Subspace) -> Result<(Subspace, Subspace), LinalgError> {
    a.check_compatible(b)?;
    let n = a.ambient_dim();
    let f = a.field();
    let mut block = MatrixFq::zeros(f, a.dim() + b.dim(), 2 * n);
    for (i, r) in a.basis.row_iter().enumerate() {
        block.data[i * 2 * n..i * 2 * n + n].copy_from_slice(r);
        block.data[i * 2 * n + n..(i + 1) * 2 * n].copy_from_slice(r);
    }
    for (i, r) in b.basis.row_iter().enumerate() {
        let i = i + a.dim();
        block.data[i * 2 * n..i * 2 * n + n].copy_from_slice(r);
    }
    let pivots = block.rref_in_place();
    let split = pivots.iter().take_while(|&&c| c < n).count();
    let half = |rows: std::ops::Range<usize>, offset: usize| {
        let data = rows.clone().flat_map(|r| block.row(r)[offset..offset + n].iter().copied()).collect();
        MatrixFq { field: f.clone(), rows: rows.len(), cols: n, data }
    };
    let sum = half(0..split, 0);
    let inter = half(split..pivots.len(), n);
    Ok((Subspace::from_matrix(sum), Subspace::from_matrix(inter)))
}

/// Free-function form of [`MatrixFq::rref`].
pub fn rref(m: &MatrixFq) -> (MatrixFq, usize) {
    m.rref()
}

/// `dim(V1 + V2) - dim(V1 ∩ V2)`, evaluated as `2 dim(V1 + V2) - dim V1 - dim V2`
/// so that only the sum needs reducing.
pub fn subspace_distance(a: &Subspace, b: &Subspace) -> Result<usize, LinalgError> {
    let sum = a.sum(b)?;
    Ok(2 * sum.dim() - a.dim() - b.dim())
}

/// Intersection dimension by brute force: counts the vectors of `a` that
/// reduce to zero against `b`, then takes log base q of the count.
pub fn intersect_oracle(a: &Subspace, b: &Subspace) -> Result<usize, LinalgError> {
    a.check_compatible(b)?;
    let hits = a.enumerate_vectors()?.iter().filter(|v| b.contains(v)).count() as u64;
    let q = a.field().order() as u64;
    let (mut rest, mut dim) = (hits, 0usize);
    while rest > 1 {
        debug_assert_eq!(rest % q, 0, "a subspace has q^k elements");
        rest /= q;
        dim += 1;
    }
    Ok(dim)
}

/// Number of `k`-dimensional subspaces of GF(q)^n, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    // after step i the running value is the count for dimension i + 1, so each division is exact
    let mut count = 1u128;
    for i in 0..k {
        let step = q.checked_pow((n - i) as u32).and_then(|top| count.checked_mul(top - 1));
        match step {
            Some(num) => count = num / (q.pow((i + 1) as u32) - 1),
            None => return u128::MAX,
        }
    }
    count
}

/// All `dim`-dimensional subspaces of `within`, enumerated as RREF
/// coefficient matrices relative to its basis.
pub fn enumerate_subspaces(within: &Subspace, dim: usize) -> Result<Vec<Subspace>, LinalgError> {
    let outer = within.dim();
    if dim > outer {
        return Err(LinalgError::DimensionOutOfRange { dim, available: outer });
    }
    let f = within.field();
    let q = f.order() as u64;
    let count = gaussian_binomial(outer, dim, q);
    if count > ENUMERATION_CAP as u128 {
        return Err(LinalgError::TooLarge { count, cap: ENUMERATION_CAP });
    }
    let mut out = Vec::with_capacity(count as usize);
    for pivots in pivot_sets(outer, dim) {
        // free positions: right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..outer).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut coeffs = MatrixFq::zeros(f, dim, outer);
        for (r, &p) in pivots.iter().enumerate() {
            coeffs.set(r, p, 1);
        }
        let fills = (q as u128).pow(free.len() as u32);
        for idx in 0..fills {
            let mut x = idx;
            for &(r, c) in &free {
                coeffs.set(r, c, (x % q as u128) as u32);
                x /= q as u128;
            }
            out.push(Subspace::from_matrix(coeffs.mul(&within.basis)?));
        }
    }
    Ok(out)
}

fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
