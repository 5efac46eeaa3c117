//! Dense bit-packed linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words. Matrices are stored row-major as a
//! list of [`BitVec`] rows. All operations are deterministic: elimination
//! always takes the lowest available pivot, and solutions set free
//! coordinates to zero.

use std::fmt;

use crate::error::{BgxError, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices` (repeated indices cancel).
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    /// Inner product over F2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            v.set(i, true);
        }
        for i in other.iter_ones() {
            v.set(self.len + i, true);
        }
        v
    }

    /// The coordinates `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        let mut v = BitVec::zeros(len);
        for i in self.iter_ones() {
            if i >= start && i < start + len {
                v.set(i - start, true);
            }
        }
        v
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// A dense `rows × cols` matrix over F2, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_bools(rows: &[Vec<bool>], cols: usize) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_bools(r)).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        self.data[r].set(c, value)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.data[r]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// Row vector times matrix: `x · self`.
    pub fn vec_mul(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.rows, "vector length must equal row count");
        let mut out = BitVec::zeros(self.cols);
        for r in x.iter_ones() {
            out.xor_assign(&self.data[r]);
        }
        out
    }

    /// Matrix times column vector: `self · x`.
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        BitVec::from_bools(&self.data.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data: self.data.iter().map(|r| other.vec_mul(r)).collect(),
        }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &BitMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        BitMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.concat(b))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Output of [`row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub rref: BitMatrix,
}

/// Reduced row-echelon form. Zero rows are dropped from `rref`, so
/// `rref.rows() == rank`.
pub fn row_reduce(m: &BitMatrix) -> RowReduction {
    let mut rows: Vec<BitVec> = m.data.clone();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    RowReduction {
        rank,
        pivots,
        rref: BitMatrix {
            rows: rank,
            cols: m.cols,
            data: rows,
        },
    }
}

/// Solves `a · x = b` for a column vector `x`. Free coordinates are set to
/// zero; `None` means the system is inconsistent.
pub fn solve(a: &BitMatrix, b: &BitVec) -> Result<Option<BitVec>> {
    if b.len() != a.rows() {
        return Err(BgxError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let bcol = BitMatrix::from_rows(1, (0..b.len()).map(|i| BitVec::from_bools(&[b.get(i)])).collect());
    let red = row_reduce(&a.hstack(&bcol));
    if red.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = BitVec::zeros(a.cols());
    for (k, &p) in red.pivots.iter().enumerate() {
        if red.rref.get(k, a.cols()) {
            x.set(p, true);
        }
    }
    Ok(Some(x))
}

/// The null space `{x : a · x = 0}`.
pub fn kernel_basis(a: &BitMatrix) -> Subspace {
    let red = row_reduce(a);
    let n = a.cols();
    let mut is_pivot = vec![false; n];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::unit(n, f);
        for (k, &p) in red.pivots.iter().enumerate() {
            if red.rref.get(k, f) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    Subspace::from_spanning(n, basis)
}

/// The left null space `{x : x · a = 0}`.
pub fn left_kernel(a: &BitMatrix) -> Subspace {
    kernel_basis(&a.transpose())
}

/// A linear subspace of `F2^ambient_dim`, held in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: BitMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: BitMatrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn from_spanning(ambient_dim: usize, vectors: Vec<BitVec>) -> Self {
        let red = row_reduce(&BitMatrix::from_rows(ambient_dim, vectors));
        Self {
            ambient_dim,
            basis: red.rref,
            pivots: red.pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> &[BitVec] {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the echelon basis. The residual is zero at every pivot column.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(self.basis.row(k));
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        if !self.contains(v) {
            return None;
        }
        Some(BitVec::from_bools(
            &self.pivots.iter().map(|&p| v.get(p)).collect::<Vec<_>>(),
        ))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.row_vecs().to_vec();
        vs.extend(other.basis.row_vecs().iter().cloned());
        Subspace::from_spanning(self.ambient_dim, vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        // x·[A; B] = 0 with x = (y, z) gives y·A = z·B in the intersection.
        let stacked = self.basis.vstack(&other.basis);
        let k = left_kernel(&stacked);
        let vs = k
            .basis_vectors()
            .iter()
            .map(|c| self.basis.vec_mul(&c.slice(0, self.dim())))
            .collect();
        Subspace::from_spanning(self.ambient_dim, vs)
    }

    /// Coordinates that are not pivots: a canonical complement basis.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn image_under(&self, m: &BitMatrix) -> Subspace {
        Subspace::from_spanning(
            m.cols(),
            self.basis_vectors().iter().map(|v| m.vec_mul(v)).collect(),
        )
    }
}

/// Incremental Gaussian elimination that remembers how each stored row was
/// formed from the inserted vectors, so membership tests also return the
/// combination that witnesses them.
#[derive(Clone, Debug)]
pub struct Eliminator {
    len: usize,
    inserted: usize,
    rows: Vec<(usize, BitVec, Vec<usize>)>,
}

impl Eliminator {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            inserted: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v`; returns the residual and the set of inserted indices
    /// whose sum was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, Vec<usize>) {
        assert_eq!(v.len(), self.len);
        let mut r = v.clone();
        let mut combo: Vec<usize> = Vec::new();
        for (p, row, c) in &self.rows {
            if r.get(*p) {
                r.xor_assign(row);
                toggle_all(&mut combo, c);
            }
        }
        combo.sort_unstable();
        (r, combo)
    }

    /// Inserts `v` as input number `self.inserted()`. Returns `true` if it was independent.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, mut combo) = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                toggle(&mut combo, idx);
                self.rows.push((p, r, combo));
                true
            }
        }
    }

    /// Expresses `v` as a sum of inserted vectors, if possible.
    pub fn express(&self, v: &BitVec) -> Option<Vec<usize>> {
        let (r, combo) = self.reduce(v);
        r.is_zero().then_some(combo)
    }
}

fn toggle(set: &mut Vec<usize>, x: usize) {
    if let Some(pos) = set.iter().position(|&y| y == x) {
        set.swap_remove(pos);
    } else {
        set.push(x);
    }
}

fn toggle_all(set: &mut Vec<usize>, xs: &[usize]) {
    for &x in xs {
        toggle(set, x);
    }
}

/// A quotient `Z / B` of subspaces of a common ambient space, with a fixed
/// basis of representatives and a coordinate map.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient_dim: usize,
    elim: Eliminator,
    sub_dim: usize,
    reps: Vec<BitVec>,
}

impl QuotientSpace {
    /// `sup` must contain `sub`.
    pub fn new(sup: &Subspace, sub: &Subspace) -> Self {
        let n = sup.ambient_dim();
        let mut elim = Eliminator::new(n);
        for v in sub.basis_vectors() {
            elim.insert(v);
        }
        let sub_dim = elim.inserted();
        let mut reps = Vec::new();
        for v in sup.basis_vectors() {
            if !elim.reduce(v).0.is_zero() {
                elim.insert(v);
                reps.push(v.clone());
            }
        }
        Self {
            ambient_dim: n,
            elim,
            sub_dim,
            reps,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn representatives(&self) -> &[BitVec] {
        &self.reps
    }

    /// Class coordinates of `v`, or `None` if `v` is not in the numerator.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let combo = self.elim.express(v)?;
        Some(BitVec::from_indices(
            self.reps.len(),
            combo.into_iter().filter(|&i| i >= self.sub_dim).map(|i| i - self.sub_dim),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_bools(
            &rows.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect::<Vec<_>>(),
            cols,
        )
    }

    #[test]
    fn row_reduce_examples() {
        let r = row_reduce(&BitMatrix::identity(3));
        assert_eq!((r.rank, r.pivots), (3, vec![0, 1, 2]));
        let r = row_reduce(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
        let r = row_reduce(&BitMatrix::zeros(3, 4));
        assert_eq!((r.rank, r.pivots), (0, vec![]));
    }

    #[test]
    fn solve_examples() {
        let x = solve(&BitMatrix::identity(2), &BitVec::from_bools(&[true, false])).unwrap();
        assert_eq!(x, Some(BitVec::from_bools(&[true, false])));
        let x = solve(&m(&[&[1, 1]]), &BitVec::from_bools(&[true])).unwrap();
        assert_eq!(x, Some(BitVec::from_bools(&[true, false])));
        let x = solve(&m(&[&[0, 0]]), &BitVec::from_bools(&[true])).unwrap();
        assert_eq!(x, None);
        assert!(solve(&m(&[&[0, 0]]), &BitVec::zeros(2)).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&BitMatrix::identity(4)).dim(), 0);
        assert_eq!(kernel_basis(&BitMatrix::zeros(1, 3)).dim(), 3);
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis_vectors()[0], BitVec::from_bools(&[true, true]));
    }

    #[test]
    fn quotient_coordinates() {
        let sup = Subspace::full(3);
        let sub = Subspace::from_spanning(3, vec![BitVec::from_bools(&[true, true, false])]);
        let q = QuotientSpace::new(&sup, &sub);
        assert_eq!(q.dim(), 2);
        let a = q.coordinates(&BitVec::from_bools(&[true, false, false])).unwrap();
        let b = q.coordinates(&BitVec::from_bools(&[false, true, false])).unwrap();
        assert_eq!(a, b);
        assert!(q.coordinates(&BitVec::from_bools(&[true, true, false])).unwrap().is_zero());
    }

    #[test]
    fn intersection() {
        let a = Subspace::from_spanning(3, vec![BitVec::unit(3, 0), BitVec::unit(3, 1)]);
        let b = Subspace::from_spanning(3, vec![BitVec::unit(3, 1), BitVec::unit(3, 2)]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&BitVec::unit(3, 1)));
    }
}
