//! The decoder: canonical forms, row-column weights, and the two-pass
//! decode that lifts classical nearest-codeword oracles to the product code.
//!
//! A Z-operator `(L, R)` splits uniquely into a *free* part (rows of `L` in
//! `im d_B^T`, columns of `R` in `im d_A`) and a *logical* part living in
//! the unit-vector complements. The free part can always be moved onto the
//! other grid by stabilizers; the logical part cannot, and the number of
//! logical rows/columns is a homology invariant. Decoding therefore splits
//! the starting solution, hands each nonzero logical column (resp. row) to
//! an exact classical decoder, and folds the answers back in. Every oracle
//! answer is a kernel vector, so the syndrome is preserved unconditionally.

use crate::classical::MwDecoder;
use crate::f2::{BinMatrix, Decomposition};
use crate::hgp::{HgpCode, OpPair, Species};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReshapeError {
    #[error("inconsistent syndrome: not in the image of the check matrix")]
    InconsistentSyndrome,
}

/// The canonical form of one side of an operator.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Component inside the image space (removable by stabilizers).
    pub free: BinMatrix,
    /// Component inside the unit-vector complement.
    pub logical: BinMatrix,
}

impl CanonicalForm {
    /// `free + logical` reconstructs the input.
    pub fn reconstruct(&self) -> BinMatrix {
        self.free.xor(&self.logical)
    }
}

/// Split the left part row-by-row against `im d_B^T`.
pub fn canonical_left(code: &HgpCode, left: &BinMatrix) -> CanonicalForm {
    assert_eq!((left.rows(), left.cols()), (code.n_a(), code.n_b()), "left shape mismatch");
    let (free, logical) = code.seed_b().dec_im_t().split_rows(left);
    CanonicalForm { free, logical }
}

/// Split the right part column-by-column against `im d_A`.
pub fn canonical_right(code: &HgpCode, right: &BinMatrix) -> CanonicalForm {
    assert_eq!((right.rows(), right.cols()), (code.m_a(), code.m_b()), "right shape mismatch");
    let (free, logical) = code.seed_a().dec_im().split_columns(right);
    CanonicalForm { free, logical }
}

/// Row-column weight: (#nonzero rows of `L`, #nonzero columns of `R`).
pub fn wt_rc(op: &OpPair) -> (usize, usize) {
    (op.left.nonzero_rows().len(), op.right.nonzero_cols().len())
}

/// Logical row-column weight of a Z-operator: rows of `L` outside
/// `im d_B^T` and columns of `R` outside `im d_A`. Equal to the row-column
/// weight of the canonical-form logical parts, and invariant under
/// stabilizer addition.
pub fn wt_rc_log(code: &HgpCode, op: &OpPair) -> (usize, usize) {
    (logical_rows(code, &op.left).len(), logical_cols(code, &op.right).len())
}

/// Indices of rows of a left part that fall outside `im d_B^T`.
pub fn logical_rows(code: &HgpCode, left: &BinMatrix) -> Vec<usize> {
    canonical_left(code, left).logical.nonzero_rows()
}

/// Indices of columns of a right part that fall outside `im d_A`.
pub fn logical_cols(code: &HgpCode, right: &BinMatrix) -> Vec<usize> {
    canonical_right(code, right).logical.nonzero_cols()
}

/// Outcome of a decode: a valid correction plus per-oracle call tallies.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub correction: OpPair,
    /// Calls to the A-side oracle (`D_{d_A}` for Z, `D_{d_A^T}` for X).
    pub oracle_calls_a: u64,
    /// Calls to the B-side oracle (`D_{d_B^T}` for Z, `D_{d_B}` for X).
    pub oracle_calls_b: u64,
}

/// Some Z-operator with the given X-syndrome, found by linear solving with
/// free variables zeroed; deterministic.
pub fn find_valid_solution_z(code: &HgpCode, s: &BinMatrix) -> Result<OpPair, ReshapeError> {
    assert_eq!((s.rows(), s.cols()), (code.m_a(), code.n_b()), "syndrome shape mismatch");
    let b = flatten_matrix(s);
    let x = code.solver_x().solve(&b).ok_or(ReshapeError::InconsistentSyndrome)?;
    Ok(code.reshape(&x, Species::Z))
}

/// Some X-operator with the given Z-syndrome.
pub fn find_valid_solution_x(code: &HgpCode, s: &BinMatrix) -> Result<OpPair, ReshapeError> {
    assert_eq!((s.rows(), s.cols()), (code.n_a(), code.m_b()), "syndrome shape mismatch");
    let b = flatten_matrix(s);
    let x = code.solver_z().solve(&b).ok_or(ReshapeError::InconsistentSyndrome)?;
    Ok(code.reshape(&x, Species::X))
}

fn flatten_matrix(m: &BinMatrix) -> crate::f2::BinVector {
    let mut v = crate::f2::BinVector::zeros(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in m.row_ones(r) {
            v.set(r * m.cols() + c, true);
        }
    }
    v
}

/// Split the rows of `part`, then decode every nonzero column of the
/// logical component and fold the answers back in. Zero columns are skipped;
/// the logical component is supported on the complement positions, so the
/// number of calls is bounded by the complement dimension.
fn column_pass(dec: &Decomposition, oracle: &MwDecoder, part: &BinMatrix, calls: &mut u64) -> BinMatrix {
    let (_, logical) = dec.split_rows(part);
    let mut out = part.clone();
    for j in 0..part.cols() {
        let col = logical.column(j);
        if !col.is_zero() {
            *calls += 1;
            out.xor_column(j, &oracle.nearest_codeword(&col));
        }
    }
    out
}

/// Mirror of [`column_pass`]: split columns, decode nonzero logical rows.
fn row_pass(dec: &Decomposition, oracle: &MwDecoder, part: &BinMatrix, calls: &mut u64) -> BinMatrix {
    let (_, logical) = dec.split_columns(part);
    let mut out = part.clone();
    for i in 0..part.rows() {
        let row = logical.row_vector(i);
        if !row.is_zero() {
            *calls += 1;
            out.xor_row(i, &oracle.nearest_codeword(&row));
        }
    }
    out
}

/// Decode a Z-error from its X-syndrome `s` and a valid starting solution.
///
/// The output always has syndrome `s`. When the minimum-weight operator
/// consistent with `s` has fewer than `d_a/2` logical rows and `d_b^T/2`
/// logical columns, the output lands in its homology class, and the oracle
/// call counts stay within `n_b - rk_b` and `m_a - rk_a`.
///
/// # Panics
///
/// Panics if `start` does not have syndrome `s`.
pub fn decode_z(
    code: &HgpCode,
    oracle_a: &MwDecoder,
    oracle_bt: &MwDecoder,
    s: &BinMatrix,
    start: &OpPair,
) -> DecodeResult {
    assert_eq!(start.species, Species::Z, "species mismatch");
    assert_eq!(&code.syndrome_z(start), s, "start operator does not match the syndrome");
    let mut calls_a = 0;
    let mut calls_b = 0;
    let left = column_pass(code.seed_b().dec_im_t(), oracle_a, &start.left, &mut calls_a);
    let right = row_pass(code.seed_a().dec_im(), oracle_bt, &start.right, &mut calls_b);
    let correction = OpPair { species: Species::Z, left, right };
    assert_eq!(&code.syndrome_z(&correction), s, "decode must preserve the syndrome");
    DecodeResult { correction, oracle_calls_a: calls_a, oracle_calls_b: calls_b }
}

/// Decode an X-error from its Z-syndrome; the duality mirror of
/// [`decode_z`], realized by running the same passes on transposed parts
/// with the roles of the seeds swapped.
pub fn decode_x(
    code: &HgpCode,
    oracle_at: &MwDecoder,
    oracle_b: &MwDecoder,
    s: &BinMatrix,
    start: &OpPair,
) -> DecodeResult {
    assert_eq!(start.species, Species::X, "species mismatch");
    assert_eq!(&code.syndrome_x(start), s, "start operator does not match the syndrome");
    let mut calls_a = 0;
    let mut calls_b = 0;
    let left_t = column_pass(code.seed_a().dec_im_t(), oracle_b, &start.left.transposed(), &mut calls_b);
    let right_t = row_pass(code.seed_b().dec_im(), oracle_at, &start.right.transposed(), &mut calls_a);
    let correction = OpPair {
        species: Species::X,
        left: left_t.transposed(),
        right: right_t.transposed(),
    };
    assert_eq!(&code.syndrome_x(&correction), s, "decode must preserve the syndrome");
    DecodeResult { correction, oracle_calls_a: calls_a, oracle_calls_b: calls_b }
}
