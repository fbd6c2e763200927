//! Dense bit-packed linear algebra over GF(2).
//!
//! Matrices are stored row-major with each row packed into 64-bit words.
//! All elimination routines pivot on the leftmost column first and the
//! topmost row first, so every result here is deterministic and
//! platform-independent.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

struct OnesOfWord(u64);

impl Iterator for OnesOfWord {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let t = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(t)
        }
    }
}

fn ones_of_words(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words
        .iter()
        .enumerate()
        .flat_map(|(wi, &w)| OnesOfWord(w).map(move |b| wi * WORD_BITS + b))
}

/// A fixed-length vector over GF(2), bit-packed into 64-bit words.
///
/// Padding bits beyond `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinVector {
    len: usize,
    words: Vec<u64>,
}

impl BinVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// The unit vector with a single one at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Build from a slice of 0/1 entries. Panics on any other value.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "entries must be 0 or 1");
            v.set(i, b == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch");
        xor_words(&mut self.words, &other.words);
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of nonzero coordinates, in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        ones_of_words(&self.words)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }
}

/// Coordinate-lexicographic order: the first differing coordinate decides,
/// with 0 ordered before 1. Used for deterministic tie-breaking.
impl Ord for BinVector {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.len, other.len, "length mismatch");
        for (&a, &b) in self.words.iter().zip(&other.words) {
            if a != b {
                let t = (a ^ b).trailing_zeros();
                return if (a >> t) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BinVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinVector({})", self)
    }
}

/// A dense matrix over GF(2), row-major, each row bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    bits: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        Self {
            rows,
            cols,
            wpr,
            bits: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stack the given rows into a matrix. `cols` is explicit so an empty
    /// row set still carries its ambient dimension.
    pub fn from_rows(cols: usize, rows: &[BinVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m
    }

    /// Build from rows of 0/1 entries. Panics on ragged input.
    pub fn from_bits(rows: &[&[u8]]) -> Self {
        assert!(!rows.is_empty(), "use zeros() for an empty matrix");
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                assert!(b <= 1, "entries must be 0 or 1");
                m.set(i, j, b == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.wpr + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let idx = r * self.wpr + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.bits[r * self.wpr + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.wpr..(r + 1) * self.wpr]
    }

    pub fn row_vector(&self, r: usize) -> BinVector {
        BinVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn set_row(&mut self, r: usize, v: &BinVector) {
        assert_eq!(v.len(), self.cols, "length mismatch");
        self.bits[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(v.words());
    }

    pub fn xor_row(&mut self, r: usize, v: &BinVector) {
        assert_eq!(v.len(), self.cols, "length mismatch");
        xor_words(&mut self.bits[r * self.wpr..(r + 1) * self.wpr], v.words());
    }

    /// XOR row `src` into row `dst`.
    fn xor_row_internal(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let x = self.bits[s + k];
            self.bits[d + k] ^= x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.bits.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn column(&self, c: usize) -> BinVector {
        assert!(c < self.cols);
        let mut v = BinVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &BinVector) {
        assert_eq!(v.len(), self.rows, "length mismatch");
        for r in 0..self.rows {
            self.set(r, c, v.get(r));
        }
    }

    pub fn xor_column(&mut self, c: usize, v: &BinVector) {
        assert_eq!(v.len(), self.rows, "length mismatch");
        for r in v.iter_ones() {
            self.flip(r, c);
        }
    }

    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        ones_of_words(self.row_words(r))
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of nonzero rows, in increasing order.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.row_weight(r) > 0).collect()
    }

    /// Indices of nonzero columns, in increasing order.
    pub fn nonzero_cols(&self) -> Vec<usize> {
        let mut acc = vec![0u64; self.wpr];
        for r in 0..self.rows {
            for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                *a |= w;
            }
        }
        ones_of_words(&acc).collect()
    }

    pub fn transposed(&self) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, rhs: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = BinMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for j in self.row_ones(r) {
                let src = rhs.row_words(j).to_vec();
                xor_words(&mut out.bits[r * out.wpr..(r + 1) * out.wpr], &src);
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &BinVector) -> BinVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = BinVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Row-vector product `v^T * self`, returned as a vector of length `cols`.
    pub fn left_mul(&self, v: &BinVector) -> BinVector {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let mut out = BinVector::zeros(self.cols);
        for r in v.iter_ones() {
            out.xor_assign(&self.row_vector(r));
        }
        out
    }

    /// Kronecker (tensor) product.
    pub fn kron(&self, rhs: &BinMatrix) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                for k in 0..rhs.rows {
                    for l in rhs.row_ones(k) {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, true);
                    }
                }
            }
        }
        out
    }

    pub fn hconcat(&self, rhs: &BinMatrix) -> BinMatrix {
        assert_eq!(self.rows, rhs.rows, "row count mismatch");
        let mut out = BinMatrix::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out.set(r, c, true);
            }
            for c in rhs.row_ones(r) {
                out.set(r, self.cols + c, true);
            }
        }
        out
    }

    pub fn vconcat(&self, rhs: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, rhs.cols, "column count mismatch");
        let mut out = BinMatrix::zeros(self.rows + rhs.rows, self.cols);
        out.bits[..self.bits.len()].copy_from_slice(&self.bits);
        out.bits[self.bits.len()..].copy_from_slice(&rhs.bits);
        out
    }

    pub fn xor_assign(&mut self, rhs: &BinMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        xor_words(&mut self.bits, &rhs.bits);
    }

    pub fn xor(&self, rhs: &BinMatrix) -> BinMatrix {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        echelonize(self, false).pivots.len()
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row_vector(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinMatrix({}x{})\n{}", self.rows, self.cols, self)
    }
}

pub(crate) struct Echelon {
    pub m: BinMatrix,
    pub pivots: Vec<(usize, usize)>,
    pub transform: Option<BinMatrix>,
}

/// Reduced row echelon form with the fixed pivot rule: scan columns left to
/// right, pick the topmost unused row with a one. Optionally records the row
/// operations as a transform `E` with `E * input = rref`.
pub(crate) fn echelonize(input: &BinMatrix, with_transform: bool) -> Echelon {
    let mut m = input.clone();
    let mut t = with_transform.then(|| BinMatrix::identity(input.rows));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
            continue;
        };
        m.swap_rows(r, p);
        if let Some(t) = t.as_mut() {
            t.swap_rows(r, p);
        }
        for i in 0..m.rows {
            if i != r && m.get(i, c) {
                m.xor_row_internal(i, r);
                if let Some(t) = t.as_mut() {
                    t.xor_row_internal(i, r);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    Echelon { m, pivots, transform: t }
}

/// Inverse of a square full-rank matrix. Panics if singular.
pub fn invert(m: &BinMatrix) -> BinMatrix {
    assert_eq!(m.rows, m.cols, "not square");
    let ech = echelonize(m, true);
    assert_eq!(ech.pivots.len(), m.rows, "matrix is singular");
    ech.transform.unwrap()
}

/// A reusable solver for `A x = b` with fixed `A`.
///
/// Free variables are set to zero under the fixed pivot order, so the
/// returned solution is deterministic.
#[derive(Clone)]
pub struct GaussSolver {
    pivots: Vec<(usize, usize)>,
    transform: BinMatrix,
    in_rows: usize,
    in_cols: usize,
}

impl GaussSolver {
    pub fn new(a: &BinMatrix) -> Self {
        let ech = echelonize(a, true);
        Self {
            pivots: ech.pivots,
            transform: ech.transform.unwrap(),
            in_rows: a.rows,
            in_cols: a.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Some `x` with `A x = b`, or `None` when `b` is outside the image.
    pub fn solve(&self, b: &BinVector) -> Option<BinVector> {
        assert_eq!(b.len(), self.in_rows, "length mismatch");
        let bp = self.transform.mul_vec(b);
        for r in self.pivots.len()..self.in_rows {
            if bp.get(r) {
                return None;
            }
        }
        let mut x = BinVector::zeros(self.in_cols);
        for &(r, c) in &self.pivots {
            if bp.get(r) {
                x.set(c, true);
            }
        }
        Some(x)
    }
}

/// One-shot linear solve; see [`GaussSolver`].
pub fn solve(a: &BinMatrix, b: &BinVector) -> Option<BinVector> {
    GaussSolver::new(a).solve(b)
}

/// A basis of `ker A`, one row per basis vector.
///
/// Basis vectors are indexed by the free (non-pivot) columns in increasing
/// order, which makes the output deterministic.
pub fn kernel_basis(a: &BinMatrix) -> BinMatrix {
    let ech = echelonize(a, false);
    let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
    let mut is_pivot = vec![false; a.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..a.cols).filter(|&c| !is_pivot[c]).collect();
    let mut rows = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = BinVector::zeros(a.cols);
        x.set(f, true);
        for &(r, c) in &ech.pivots {
            if ech.m.get(r, f) {
                x.set(c, true);
            }
        }
        rows.push(x);
    }
    BinMatrix::from_rows(a.cols, &rows)
}

/// Membership of `v` in the row space of `m`.
pub fn in_row_span(m: &BinMatrix, v: &BinVector) -> bool {
    RowSpace::new(m).contains(v)
}

/// Echelonized row space of a matrix, for repeated membership tests.
#[derive(Clone)]
pub struct RowSpace {
    rows: BinMatrix,
    pivot_cols: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &BinMatrix) -> Self {
        let ech = echelonize(m, false);
        let rank = ech.pivots.len();
        let rows = BinMatrix::from_rows(
            m.cols,
            &(0..rank).map(|r| ech.m.row_vector(r)).collect::<Vec<_>>(),
        );
        Self {
            rows,
            pivot_cols: ech.pivots.iter().map(|&(_, c)| c).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn contains(&self, v: &BinVector) -> bool {
        assert_eq!(v.len(), self.rows.cols(), "length mismatch");
        let mut w = v.clone();
        for (i, &c) in self.pivot_cols.iter().enumerate() {
            if w.get(c) {
                w.xor_assign(&self.rows.row_vector(i));
            }
        }
        w.is_zero()
    }
}

/// A direct-sum splitting `F_2^m = V ⊕ V^⊥` where `V` is the span of an
/// image and `V^⊥` is spanned by unit vectors.
///
/// The complement is found by Gaussian reduction of the image basis stacked
/// over the identity, keeping the unit rows that extend the basis; the
/// resulting complement always consists of unit vectors. A projector onto
/// the complement component is cached so splits inside decode loops cost one
/// matrix multiplication.
#[derive(Clone)]
pub struct Decomposition {
    ambient: usize,
    rank: usize,
    image_basis: BinMatrix,
    complement_basis: BinMatrix,
    complement_positions: Vec<usize>,
    proj: BinMatrix,
    proj_t: BinMatrix,
}

impl Decomposition {
    /// Decomposition of the span of the rows of `m` inside `F_2^{cols}`.
    pub fn of_row_space(m: &BinMatrix) -> Self {
        let ambient = m.cols();
        let ech = echelonize(m, false);
        let rank = ech.pivots.len();
        let image_rows: Vec<BinVector> = (0..rank).map(|r| ech.m.row_vector(r)).collect();
        let image_basis = BinMatrix::from_rows(ambient, &image_rows);

        // Greedy completion by unit vectors, scanning positions in order.
        let mut reducer: Vec<(usize, BinVector)> = ech
            .pivots
            .iter()
            .enumerate()
            .map(|(i, &(_, c))| (c, image_rows[i].clone()))
            .collect();
        let mut positions = Vec::with_capacity(ambient - rank);
        for t in 0..ambient {
            if rank + positions.len() == ambient {
                break;
            }
            let mut v = BinVector::unit(ambient, t);
            for (c, row) in &reducer {
                if v.get(*c) {
                    v.xor_assign(row);
                }
            }
            if !v.is_zero() {
                positions.push(t);
                let lead = v.iter_ones().next().unwrap();
                reducer.push((lead, v));
            }
        }
        let complement_rows: Vec<BinVector> = positions
            .iter()
            .map(|&t| BinVector::unit(ambient, t))
            .collect();
        let complement_basis = BinMatrix::from_rows(ambient, &complement_rows);

        // Coefficient extraction: with B the stacked basis, x = (B^T)^{-1} v
        // are the coordinates of v; the complement component keeps only the
        // coefficients of the unit rows.
        let b = image_basis.vconcat(&complement_basis);
        let t_inv = invert(&b.transposed());
        let mut proj = BinMatrix::zeros(ambient, ambient);
        for (j, &t) in positions.iter().enumerate() {
            proj.set_row(t, &t_inv.row_vector(rank + j));
        }
        let proj_t = proj.transposed();
        Self {
            ambient,
            rank,
            image_basis,
            complement_basis,
            complement_positions: positions,
            proj,
            proj_t,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn image_basis(&self) -> &BinMatrix {
        &self.image_basis
    }

    pub fn complement_basis(&self) -> &BinMatrix {
        &self.complement_basis
    }

    /// Positions of the unit vectors spanning the complement.
    pub fn complement_positions(&self) -> &[usize] {
        &self.complement_positions
    }

    /// Split `v` into (image component, complement component); the two sum
    /// to `v` and the splitting is unique.
    pub fn split(&self, v: &BinVector) -> (BinVector, BinVector) {
        assert_eq!(v.len(), self.ambient, "dimension mismatch");
        let mu = self.proj.mul_vec(v);
        (v.xor(&mu), mu)
    }

    /// Membership of `v` in the image span.
    pub fn contains(&self, v: &BinVector) -> bool {
        assert_eq!(v.len(), self.ambient, "dimension mismatch");
        self.proj.mul_vec(v).is_zero()
    }

    /// Split every row of `m`; returns (image parts, complement parts).
    pub fn split_rows(&self, m: &BinMatrix) -> (BinMatrix, BinMatrix) {
        assert_eq!(m.cols(), self.ambient, "dimension mismatch");
        let logical = m.mul(&self.proj_t);
        (m.xor(&logical), logical)
    }

    /// Split every column of `m`; returns (image parts, complement parts).
    pub fn split_columns(&self, m: &BinMatrix) -> (BinMatrix, BinMatrix) {
        assert_eq!(m.rows(), self.ambient, "dimension mismatch");
        let logical = self.proj.mul(m);
        (m.xor(&logical), logical)
    }
}

impl fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Decomposition(ambient={}, rank={}, complement={:?})",
            self.ambient, self.rank, self.complement_positions
        )
    }
}

/// Decomposition of the image (column space) of `a` inside `F_2^{rows}`.
pub fn decompose(a: &BinMatrix) -> Decomposition {
    Decomposition::of_row_space(&a.transposed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hamming_degenerate() -> BinMatrix {
        BinMatrix::from_bits(&[
            &[0, 0, 0, 1, 1, 1, 1],
            &[0, 1, 1, 0, 0, 1, 1],
            &[1, 0, 1, 0, 1, 0, 1],
            &[1, 1, 0, 1, 0, 0, 1],
        ])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinMatrix::identity(3).rank(), 3);
        assert_eq!(BinMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(hamming_degenerate().rank(), 3);
    }

    #[test]
    fn rank_of_transpose_matches() {
        let h = hamming_degenerate();
        assert_eq!(h.rank(), h.transposed().rank());
        assert_eq!(h.transposed().transposed(), h);
    }

    #[test]
    fn solve_identity() {
        let a = BinMatrix::identity(3);
        let b = BinVector::from_bits(&[1, 0, 1]);
        assert_eq!(solve(&a, &b), Some(b));
    }

    #[test]
    fn solve_is_valid_and_deterministic() {
        let a = BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = BinVector::from_bits(&[1, 1]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert_eq!(solve(&a, &b).unwrap(), x);
    }

    #[test]
    fn solve_absent_for_zero_map() {
        let a = BinMatrix::zeros(2, 3);
        let b = BinVector::from_bits(&[1, 0]);
        assert_eq!(solve(&a, &b), None);
    }

    #[test]
    fn kernel_of_repetition_check() {
        let a = BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row_vector(0), BinVector::from_bits(&[1, 1, 1]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(kernel_basis(&BinMatrix::identity(4)).rows(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_full() {
        let k = kernel_basis(&BinMatrix::zeros(3, 5));
        assert_eq!(k, BinMatrix::identity(5));
    }

    #[test]
    fn decompose_selects_unit_complement() {
        // Columns span {(1,1,0), (0,1,1)} in F_2^3.
        let a = BinMatrix::from_bits(&[&[1, 0], &[1, 1], &[0, 1]]);
        let dec = decompose(&a);
        assert_eq!(dec.rank(), 2);
        assert_eq!(dec.complement_positions(), &[0]);
        // Directness: stacked basis has full rank.
        let stacked = dec.image_basis().vconcat(dec.complement_basis());
        assert_eq!(stacked.rank(), 3);
    }

    #[test]
    fn decompose_surjective_has_no_complement() {
        let dec = decompose(&BinMatrix::identity(4));
        assert!(dec.complement_positions().is_empty());
    }

    #[test]
    fn decompose_zero_map_complement_is_everything() {
        let dec = decompose(&BinMatrix::zeros(3, 2));
        assert_eq!(dec.complement_positions(), &[0, 1, 2]);
    }

    #[test]
    fn split_example() {
        let a = BinMatrix::from_bits(&[&[1, 0], &[1, 1], &[0, 1]]);
        let dec = decompose(&a);
        let v = BinVector::from_bits(&[0, 0, 1]);
        let (m_part, mu_part) = dec.split(&v);
        assert_eq!(m_part, BinVector::from_bits(&[1, 0, 1]));
        assert_eq!(mu_part, BinVector::from_bits(&[1, 0, 0]));
    }

    #[test]
    fn split_of_image_member_has_zero_complement_part() {
        let a = BinMatrix::from_bits(&[&[1, 0], &[1, 1], &[0, 1]]);
        let dec = decompose(&a);
        let v = BinVector::from_bits(&[1, 1, 0]);
        let (m_part, mu_part) = dec.split(&v);
        assert_eq!(m_part, v);
        assert!(mu_part.is_zero());
        let (m0, mu0) = dec.split(&BinVector::zeros(3));
        assert!(m0.is_zero() && mu0.is_zero());
    }

    #[test]
    fn row_span_membership() {
        let m = BinMatrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]]);
        assert!(in_row_span(&m, &BinVector::zeros(3)));
        assert!(!in_row_span(&m, &BinVector::from_bits(&[1, 0, 0])));
        assert!(in_row_span(&m, &BinVector::from_bits(&[1, 0, 1])));
        let id = BinMatrix::identity(3);
        assert!(in_row_span(&id, &BinVector::from_bits(&[1, 0, 1])));
    }

    #[test]
    fn lex_order_prefers_zero_at_first_difference() {
        let a = BinVector::from_bits(&[0, 0, 1, 1]);
        let b = BinVector::from_bits(&[0, 1, 0, 0]);
        assert!(a < b);
        assert!(BinVector::zeros(4) < a);
    }

    #[test]
    fn kron_and_concat_shapes() {
        let a = BinMatrix::from_bits(&[&[1, 1], &[0, 1]]);
        let b = BinMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!(k.get(0, 0) && k.get(0, 3) && k.get(2, 2) && !k.get(3, 0));
        let h = a.hconcat(&a);
        assert_eq!((h.rows(), h.cols()), (2, 4));
    }

    fn matrix_strategy(max_r: usize, max_c: usize) -> impl Strategy<Value = BinMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BinMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    m.set(i / c, i % c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_strategy(8, 10)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(m.rank() + k.rows(), m.cols());
            for r in 0..k.rows() {
                prop_assert!(m.mul_vec(&k.row_vector(r)).is_zero());
            }
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn split_is_a_direct_sum(m in matrix_strategy(8, 8), bits in proptest::collection::vec(any::<bool>(), 8)) {
            let dec = decompose(&m);
            let v = BinVector::from_bools(&bits[..m.rows()]);
            let (im_part, comp_part) = dec.split(&v);
            prop_assert_eq!(im_part.xor(&comp_part), v);
            prop_assert!(dec.contains(&im_part));
            for i in comp_part.iter_ones() {
                prop_assert!(dec.complement_positions().contains(&i));
            }
        }

        #[test]
        fn solve_matches_membership(m in matrix_strategy(8, 10), bits in proptest::collection::vec(any::<bool>(), 8)) {
            let b = BinVector::from_bools(&bits[..m.rows()]);
            match solve(&m, &b) {
                Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
                None => prop_assert!(!in_row_span(&m.transposed(), &b)),
            }
        }
    }
}
