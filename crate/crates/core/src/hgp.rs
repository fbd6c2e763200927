//! The hypergraph product construction.
//!
//! Two seed matrices `d_A` (m_a x n_a) and `d_B` (m_b x n_b) produce a CSS
//! code on `n = n_a*n_b + m_a*m_b` qubits, split into a *left* grid of shape
//! n_a x n_b and a *right* grid of shape m_a x m_b. Check matrices:
//!
//! ```text
//! H_X = ( d_A ⊗ I_{n_b} | I_{m_a} ⊗ d_B^T )
//! H_Z = ( I_{n_a} ⊗ d_B | d_A^T ⊗ I_{m_b} )
//! ```
//!
//! Flat vectors are ordered left block first, row-major within each grid,
//! so that reshaping a vector into the matrix pair `(L, R)` turns the action
//! of `H_X` into the syndrome map `S = d_A L + R d_B`.

use crate::classical::{Distance, SeedCode};
use crate::f2::{BinMatrix, BinVector, GaussSolver, RowSpace};
use crate::io::render_dense;
use serde::Serialize;
use std::fmt;

/// Pauli species of an operator in the CSS splitting.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Species {
    Z,
    X,
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::Z => write!(f, "z"),
            Species::X => write!(f, "x"),
        }
    }
}

/// An operator in reshaped form: `left` acts on the left qubit grid
/// (n_a x n_b), `right` on the right grid (m_a x m_b).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpPair {
    pub species: Species,
    pub left: BinMatrix,
    pub right: BinMatrix,
}

impl OpPair {
    /// Operator weight `|L| + |R|`.
    pub fn weight(&self) -> usize {
        self.left.weight() + self.right.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    pub fn xor(&self, other: &OpPair) -> OpPair {
        assert_eq!(self.species, other.species, "species mismatch");
        OpPair {
            species: self.species,
            left: self.left.xor(&other.left),
            right: self.right.xor(&other.right),
        }
    }
}

/// A hypergraph product code with its cached solvers and row spaces.
#[derive(Clone)]
pub struct HgpCode {
    seed_a: SeedCode,
    seed_b: SeedCode,
    h_x: BinMatrix,
    h_z: BinMatrix,
    ha_t: BinMatrix,
    hb_t: BinMatrix,
    solver_x: GaussSolver,
    solver_z: GaussSolver,
    rowspace_x: RowSpace,
    rowspace_z: RowSpace,
}

/// Build the product code of two seeds.
pub fn build_hgp(seed_a: SeedCode, seed_b: SeedCode) -> HgpCode {
    let ha = seed_a.h();
    let hb = seed_b.h();
    let ha_t = ha.transposed();
    let hb_t = hb.transposed();
    let h_x = ha
        .kron(&BinMatrix::identity(seed_b.n()))
        .hconcat(&BinMatrix::identity(seed_a.m()).kron(&hb_t));
    let h_z = BinMatrix::identity(seed_a.n())
        .kron(hb)
        .hconcat(&ha_t.kron(&BinMatrix::identity(seed_b.m())));
    debug_assert!(h_x.mul(&h_z.transposed()).is_zero());
    let solver_x = GaussSolver::new(&h_x);
    let solver_z = GaussSolver::new(&h_z);
    let rowspace_x = RowSpace::new(&h_x);
    let rowspace_z = RowSpace::new(&h_z);
    HgpCode { seed_a, seed_b, h_x, h_z, ha_t, hb_t, solver_x, solver_z, rowspace_x, rowspace_z }
}

impl HgpCode {
    pub fn seed_a(&self) -> &SeedCode {
        &self.seed_a
    }

    pub fn seed_b(&self) -> &SeedCode {
        &self.seed_b
    }

    pub fn h_x(&self) -> &BinMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BinMatrix {
        &self.h_z
    }

    pub fn n_a(&self) -> usize {
        self.seed_a.n()
    }

    pub fn n_b(&self) -> usize {
        self.seed_b.n()
    }

    pub fn m_a(&self) -> usize {
        self.seed_a.m()
    }

    pub fn m_b(&self) -> usize {
        self.seed_b.m()
    }

    /// Number of physical qubits.
    pub fn n(&self) -> usize {
        self.n_a() * self.n_b() + self.m_a() * self.m_b()
    }

    /// Number of logical qubits.
    pub fn k(&self) -> usize {
        self.seed_a.k() * self.seed_b.k() + self.seed_a.k_t() * self.seed_b.k_t()
    }

    /// `d_x = min(d_a^T, d_b)`; `None` when a needed seed distance was not
    /// computed.
    pub fn d_x(&self) -> Option<Distance> {
        Some(self.seed_a.distance_t()?.min(self.seed_b.distance()?))
    }

    /// `d_z = min(d_a, d_b^T)`.
    pub fn d_z(&self) -> Option<Distance> {
        Some(self.seed_a.distance()?.min(self.seed_b.distance_t()?))
    }

    pub fn left_index(&self, j_a: usize, j_b: usize) -> usize {
        assert!(j_a < self.n_a() && j_b < self.n_b(), "index out of range");
        j_a * self.n_b() + j_b
    }

    pub fn right_index(&self, i_a: usize, i_b: usize) -> usize {
        assert!(i_a < self.m_a() && i_b < self.m_b(), "index out of range");
        self.n_a() * self.n_b() + i_a * self.m_b() + i_b
    }

    /// Reshape a flat length-`n` vector into an operator pair.
    pub fn reshape(&self, e: &BinVector, species: Species) -> OpPair {
        assert_eq!(e.len(), self.n(), "length mismatch");
        let (n_a, n_b, m_a, m_b) = (self.n_a(), self.n_b(), self.m_a(), self.m_b());
        let mut left = BinMatrix::zeros(n_a, n_b);
        let mut right = BinMatrix::zeros(m_a, m_b);
        for i in e.iter_ones() {
            if i < n_a * n_b {
                left.set(i / n_b, i % n_b, true);
            } else {
                let i = i - n_a * n_b;
                right.set(i / m_b, i % m_b, true);
            }
        }
        OpPair { species, left, right }
    }

    /// Flatten an operator pair back into a length-`n` vector.
    pub fn flatten(&self, op: &OpPair) -> BinVector {
        let (n_a, n_b, m_a, m_b) = (self.n_a(), self.n_b(), self.m_a(), self.m_b());
        assert_eq!((op.left.rows(), op.left.cols()), (n_a, n_b), "left shape mismatch");
        assert_eq!((op.right.rows(), op.right.cols()), (m_a, m_b), "right shape mismatch");
        let mut e = BinVector::zeros(self.n());
        for r in 0..n_a {
            for c in op.left.row_ones(r) {
                e.set(r * n_b + c, true);
            }
        }
        for r in 0..m_a {
            for c in op.right.row_ones(r) {
                e.set(n_a * n_b + r * m_b + c, true);
            }
        }
        e
    }

    /// X-syndrome of a Z-operator: the m_a x n_b matrix `d_A L + R d_B`.
    pub fn syndrome_z(&self, op: &OpPair) -> BinMatrix {
        assert_eq!(op.species, Species::Z, "syndrome_z takes a Z operator");
        self.seed_a.h().mul(&op.left).xor(&op.right.mul(self.seed_b.h()))
    }

    /// Z-syndrome of an X-operator: the n_a x m_b matrix `L d_B^T + d_A^T R`.
    pub fn syndrome_x(&self, op: &OpPair) -> BinMatrix {
        assert_eq!(op.species, Species::X, "syndrome_x takes an X operator");
        op.left.mul(&self.hb_t).xor(&self.ha_t.mul(&op.right))
    }

    /// The X-stabilizer generator indexed by a row of `d_A` and a column of
    /// `d_B`: `X(d_A^T E, E d_B^T)`.
    pub fn x_stabilizer(&self, i_a: usize, j_b: usize) -> OpPair {
        assert!(i_a < self.m_a() && j_b < self.n_b(), "index out of range");
        let mut left = BinMatrix::zeros(self.n_a(), self.n_b());
        left.set_column(j_b, &self.seed_a.h().row_vector(i_a));
        let mut right = BinMatrix::zeros(self.m_a(), self.m_b());
        right.set_row(i_a, &self.seed_b.h().column(j_b));
        OpPair { species: Species::X, left, right }
    }

    /// The Z-stabilizer generator `Z(E d_B, d_A E)`; its flattening is row
    /// `j_a * m_b + i_b` of `H_Z`.
    pub fn z_stabilizer(&self, j_a: usize, i_b: usize) -> OpPair {
        assert!(j_a < self.n_a() && i_b < self.m_b(), "index out of range");
        let mut left = BinMatrix::zeros(self.n_a(), self.n_b());
        left.set_row(j_a, &self.seed_b.h().row_vector(i_b));
        let mut right = BinMatrix::zeros(self.m_a(), self.m_b());
        right.set_column(i_b, &self.seed_a.h().column(j_a));
        OpPair { species: Species::Z, left, right }
    }

    /// Minimal generating set of logical Z-operators. Left generators are
    /// kernel vectors of `d_A` placed on single columns picked from the unit
    /// complement of `im d_B^T`; right generators are kernel vectors of
    /// `d_B^T` on single rows picked from the unit complement of `im d_A`.
    pub fn logical_z_basis(&self) -> Vec<OpPair> {
        let mut out = Vec::with_capacity(self.k());
        for ka in 0..self.seed_a.k() {
            let col = self.seed_a.kernel().row_vector(ka);
            for &j_b in self.seed_b.dec_im_t().complement_positions() {
                let mut left = BinMatrix::zeros(self.n_a(), self.n_b());
                left.set_column(j_b, &col);
                out.push(OpPair {
                    species: Species::Z,
                    left,
                    right: BinMatrix::zeros(self.m_a(), self.m_b()),
                });
            }
        }
        for &i_a in self.seed_a.dec_im().complement_positions() {
            for kb in 0..self.seed_b.k_t() {
                let row = self.seed_b.kernel_t().row_vector(kb);
                let mut right = BinMatrix::zeros(self.m_a(), self.m_b());
                right.set_row(i_a, &row);
                out.push(OpPair {
                    species: Species::Z,
                    left: BinMatrix::zeros(self.n_a(), self.n_b()),
                    right,
                });
            }
        }
        out
    }

    /// Minimal generating set of logical X-operators (the duality mirror of
    /// [`Self::logical_z_basis`]).
    pub fn logical_x_basis(&self) -> Vec<OpPair> {
        let mut out = Vec::with_capacity(self.k());
        for &j_a in self.seed_a.dec_im_t().complement_positions() {
            for kb in 0..self.seed_b.k() {
                let row = self.seed_b.kernel().row_vector(kb);
                let mut left = BinMatrix::zeros(self.n_a(), self.n_b());
                left.set_row(j_a, &row);
                out.push(OpPair {
                    species: Species::X,
                    left,
                    right: BinMatrix::zeros(self.m_a(), self.m_b()),
                });
            }
        }
        for ka in 0..self.seed_a.k_t() {
            let col = self.seed_a.kernel_t().row_vector(ka);
            for &i_b in self.seed_b.dec_im().complement_positions() {
                let mut right = BinMatrix::zeros(self.m_a(), self.m_b());
                right.set_column(i_b, &col);
                out.push(OpPair {
                    species: Species::X,
                    left: BinMatrix::zeros(self.n_a(), self.n_b()),
                    right,
                });
            }
        }
        out
    }

    /// Number of (left, right) logical Z generators.
    pub fn logical_z_counts(&self) -> (usize, usize) {
        (
            self.seed_a.k() * self.seed_b.dec_im_t().complement_positions().len(),
            self.seed_a.dec_im().complement_positions().len() * self.seed_b.k_t(),
        )
    }

    pub fn logical_x_counts(&self) -> (usize, usize) {
        (
            self.seed_a.dec_im_t().complement_positions().len() * self.seed_b.k(),
            self.seed_a.k_t() * self.seed_b.dec_im().complement_positions().len(),
        )
    }

    /// Membership in the Z-stabilizer group (row span of `H_Z`).
    pub fn is_stabilizer_z(&self, op: &OpPair) -> bool {
        assert_eq!(op.species, Species::Z);
        self.rowspace_z.contains(&self.flatten(op))
    }

    pub fn is_stabilizer_x(&self, op: &OpPair) -> bool {
        assert_eq!(op.species, Species::X);
        self.rowspace_x.contains(&self.flatten(op))
    }

    pub fn in_ker_hx(&self, op: &OpPair) -> bool {
        self.syndrome_z(op).is_zero()
    }

    pub fn in_ker_hz(&self, op: &OpPair) -> bool {
        self.syndrome_x(op).is_zero()
    }

    /// Whether two Z-operators are equal up to stabilizers. Panics when the
    /// sum is not in `ker H_X` (the quotient is undefined there).
    pub fn homology_equal_z(&self, a: &OpPair, b: &OpPair) -> bool {
        let sum = a.xor(b);
        assert!(self.in_ker_hx(&sum), "operators differ by a detectable error");
        self.is_stabilizer_z(&sum)
    }

    pub fn homology_equal_x(&self, a: &OpPair, b: &OpPair) -> bool {
        let sum = a.xor(b);
        assert!(self.in_ker_hz(&sum), "operators differ by a detectable error");
        self.is_stabilizer_x(&sum)
    }

    pub(crate) fn solver_x(&self) -> &GaussSolver {
        &self.solver_x
    }

    pub(crate) fn solver_z(&self) -> &GaussSolver {
        &self.solver_z
    }

    /// Exportable description of the code.
    pub fn summary(&self, code_id: impl Into<String>) -> CodeSummary {
        let (zl, zr) = self.logical_z_counts();
        let (xl, xr) = self.logical_x_counts();
        CodeSummary {
            code_id: code_id.into(),
            seed_a: render_dense(self.seed_a.h()),
            seed_b: render_dense(self.seed_b.h()),
            n: self.n(),
            k: self.k(),
            d_x: self.d_x(),
            d_z: self.d_z(),
            logical_z_left: zl,
            logical_z_right: zr,
            logical_x_left: xl,
            logical_x_right: xr,
        }
    }
}

impl fmt::Debug for HgpCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HgpCode([[{}, {}, {}, {}]])",
            self.n(),
            self.k(),
            self.d_x().map_or("?".into(), |d| d.to_string()),
            self.d_z().map_or("?".into(), |d| d.to_string()),
        )
    }
}

/// JSON-facing code summary with the seeds inlined as dense text.
#[derive(Serialize, Debug)]
pub struct CodeSummary {
    pub code_id: String,
    pub seed_a: String,
    pub seed_b: String,
    pub n: usize,
    pub k: usize,
    pub d_x: Option<Distance>,
    pub d_z: Option<Distance>,
    pub logical_z_left: usize,
    pub logical_z_right: usize,
    pub logical_x_left: usize,
    pub logical_x_right: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{build_seed, repetition_check};
    use crate::f2::in_row_span;
    use proptest::prelude::*;

    fn hamming_degenerate() -> BinMatrix {
        BinMatrix::from_bits(&[
            &[0, 0, 0, 1, 1, 1, 1],
            &[0, 1, 1, 0, 0, 1, 1],
            &[1, 0, 1, 0, 1, 0, 1],
            &[1, 1, 0, 1, 0, 0, 1],
        ])
    }

    fn planar3() -> HgpCode {
        let seed = build_seed(repetition_check(3, false), true).unwrap();
        build_hgp(seed.clone(), seed)
    }

    #[test]
    fn hamming_product_parameters() {
        let seed = build_seed(hamming_degenerate(), true).unwrap();
        let code = build_hgp(seed.clone(), seed);
        assert_eq!((code.n(), code.k()), (65, 17));
        assert_eq!(code.d_x(), Some(Distance::Finite(3)));
        assert_eq!(code.d_z(), Some(Distance::Finite(3)));
        assert_eq!(code.logical_z_counts(), (16, 1));
        assert_eq!(code.logical_x_counts(), (16, 1));
    }

    #[test]
    fn planar_product_parameters() {
        let code = planar3();
        assert_eq!((code.n(), code.k()), (13, 1));
        assert_eq!(code.d_x(), Some(Distance::Finite(3)));
        assert_eq!(code.d_z(), Some(Distance::Finite(3)));
        assert_eq!(code.logical_z_counts(), (1, 0));
    }

    #[test]
    fn toric_product_parameters() {
        for l in [3usize, 4, 5] {
            let seed = build_seed(repetition_check(l, true), true).unwrap();
            let code = build_hgp(seed.clone(), seed);
            assert_eq!((code.n(), code.k()), (2 * l * l, 2));
            assert_eq!(code.d_z(), Some(Distance::Finite(l)));
            assert_eq!(code.d_x(), Some(Distance::Finite(l)));
        }
    }

    #[test]
    fn css_commutation_holds() {
        let code = planar3();
        assert!(code.h_x().mul(&code.h_z().transposed()).is_zero());
    }

    #[test]
    fn reshape_unit_vectors() {
        let code = planar3();
        let op = code.reshape(&BinVector::unit(13, 0), Species::Z);
        assert!(op.left.get(0, 0) && op.left.weight() == 1 && op.right.is_zero());
        let op = code.reshape(&BinVector::unit(13, 9), Species::Z);
        assert!(op.left.is_zero() && op.right.get(0, 0) && op.right.weight() == 1);
    }

    proptest! {
        #[test]
        fn flatten_round_trips(bits in proptest::collection::vec(any::<bool>(), 13)) {
            let code = planar3();
            let e = BinVector::from_bools(&bits);
            let op = code.reshape(&e, Species::Z);
            prop_assert_eq!(code.flatten(&op), e);
        }
    }

    #[test]
    fn syndrome_matches_flat_checks_on_all_units() {
        let code = planar3();
        for i in 0..code.n() {
            let e = BinVector::unit(code.n(), i);
            let op = code.reshape(&e, Species::Z);
            let s = code.syndrome_z(&op);
            let flat = code.h_x().mul_vec(&e);
            for r in 0..code.m_a() {
                for c in 0..code.n_b() {
                    assert_eq!(s.get(r, c), flat.get(r * code.n_b() + c));
                }
            }
        }
    }

    #[test]
    fn syndrome_of_single_left_qubit() {
        let code = planar3();
        let mut left = BinMatrix::zeros(3, 3);
        left.set(0, 0, true);
        let op = OpPair { species: Species::Z, left, right: BinMatrix::zeros(2, 2) };
        let s = code.syndrome_z(&op);
        assert_eq!(s.column(0), code.seed_a().h().column(0));
        for c in 1..3 {
            assert!(s.column(c).is_zero());
        }
        let zero = OpPair {
            species: Species::Z,
            left: BinMatrix::zeros(3, 3),
            right: BinMatrix::zeros(2, 2),
        };
        assert!(code.syndrome_z(&zero).is_zero());
    }

    #[test]
    fn stabilizers_match_check_matrix_rows() {
        let code = planar3();
        for j_a in 0..code.n_a() {
            for i_b in 0..code.m_b() {
                let st = code.z_stabilizer(j_a, i_b);
                assert!(code.syndrome_z(&st).is_zero());
                let flat = code.flatten(&st);
                assert_eq!(flat, code.h_z().row_vector(j_a * code.m_b() + i_b));
            }
        }
        for i_a in 0..code.m_a() {
            for j_b in 0..code.n_b() {
                let st = code.x_stabilizer(i_a, j_b);
                let flat = code.flatten(&st);
                assert_eq!(flat, code.h_x().row_vector(i_a * code.n_b() + j_b));
            }
        }
    }

    #[test]
    fn x_stabilizer_cross_shape() {
        let code = planar3();
        let st = code.x_stabilizer(0, 0);
        // Left support: column 0 carries row 0 of d_A.
        assert_eq!(st.left.column(0), code.seed_a().h().row_vector(0));
        assert_eq!(st.left.weight(), 2);
        // Right support: row 0 carries column 0 of d_B.
        assert_eq!(st.right.row_vector(0), code.seed_b().h().column(0));
    }

    #[test]
    fn logical_z_generators_are_logical() {
        let seed = build_seed(hamming_degenerate(), true).unwrap();
        let code = build_hgp(seed.clone(), seed);
        let gens = code.logical_z_basis();
        assert_eq!(gens.len(), 17);
        let mut stacked = code.h_z().clone();
        for g in &gens {
            assert!(code.in_ker_hx(g));
            assert!(!code.is_stabilizer_z(g));
            stacked = stacked.vconcat(&BinMatrix::from_rows(code.n(), &[code.flatten(g)]));
        }
        // Homological independence: each generator extends the span.
        assert_eq!(stacked.rank(), code.h_z().rank() + gens.len());
    }

    #[test]
    fn logical_x_generators_are_logical() {
        let code = planar3();
        let gens = code.logical_x_basis();
        assert_eq!(gens.len(), 1);
        for g in &gens {
            assert!(code.in_ker_hz(g));
            assert!(!code.is_stabilizer_x(g));
        }
    }

    #[test]
    fn planar_logical_z_weight_is_distance() {
        let code = planar3();
        let gens = code.logical_z_basis();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].weight(), 3);
        // Single column string of kernel support.
        assert!(!in_row_span(
            code.seed_b().h(),
            &gens[0].left.row_vector(gens[0].left.nonzero_rows()[0])
        ));
    }

    #[test]
    fn homology_examples() {
        let code = planar3();
        let gens = code.logical_z_basis();
        let op = gens[0].clone();
        assert!(code.homology_equal_z(&op, &op));
        let shifted = op.xor(&code.z_stabilizer(0, 0));
        assert!(code.homology_equal_z(&op, &shifted));
        let zero = OpPair {
            species: Species::Z,
            left: BinMatrix::zeros(3, 3),
            right: BinMatrix::zeros(2, 2),
        };
        assert!(!code.homology_equal_z(&op, &zero));
    }

    #[test]
    fn commutation_on_random_seed_pairs() {
        use rand::Rng as _;
        use rand::SeedableRng as _;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (ra, ca) = (rng.random_range(1..=6), rng.random_range(1..=8));
            let (rb, cb) = (rng.random_range(1..=6), rng.random_range(1..=8));
            let mut ha = BinMatrix::zeros(ra, ca);
            let mut hb = BinMatrix::zeros(rb, cb);
            for r in 0..ra {
                for c in 0..ca {
                    ha.set(r, c, rng.random_bool(0.5));
                }
            }
            for r in 0..rb {
                for c in 0..cb {
                    hb.set(r, c, rng.random_bool(0.5));
                }
            }
            let code = build_hgp(build_seed(ha, false).unwrap(), build_seed(hb, false).unwrap());
            assert!(code.h_x().mul(&code.h_z().transposed()).is_zero());
            assert_eq!(code.h_x().cols(), code.n());
        }
    }

    #[test]
    fn summary_serializes() {
        let code = planar3();
        let json = serde_json::to_string(&code.summary("planar:3")).unwrap();
        assert!(json.contains("\"n\":13") && json.contains("\"k\":1"));
        assert!(json.contains("\"d_z\":3"));
    }

    #[test]
    #[should_panic(expected = "index out of range")]
    fn stabilizer_index_out_of_range_panics() {
        planar3().x_stabilizer(2, 0);
    }

    #[test]
    #[should_panic(expected = "differ by a detectable error")]
    fn homology_rejects_detectable_difference() {
        let code = planar3();
        let a = code.reshape(&BinVector::unit(13, 0), Species::Z);
        let b = code.reshape(&BinVector::unit(13, 1), Species::Z);
        code.homology_equal_z(&a, &b);
    }
}
