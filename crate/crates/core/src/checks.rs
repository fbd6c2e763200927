//! Executable invariant suites, shared by the `verify` command and the
//! acceptance tests.
//!
//! Each check returns a pass/fail outcome with a counterexample in the
//! detail string when it fails. The [`naive`] submodule is an independent
//! entry-wise GF(2) implementation used as a reference oracle; it must stay
//! independent of the bit-packed implementation it cross-checks.

use crate::classical::{build_seed, coset_leader_table, repetition_check, Budget, SeedCode};
use crate::f2::{kernel_basis, BinMatrix, BinVector};
use crate::families::{self, CodeBundle};
use crate::hgp::{HgpCode, OpPair, Species};
use crate::reshape::{
    canonical_left, canonical_right, decode_z, find_valid_solution_z, logical_cols, logical_rows,
    wt_rc_log,
};
use crate::sim::{
    adversarial_sweep, monte_carlo, pseudo_threshold_crossing, results_to_csv, sample_error,
    trial_rng, CrossingEstimate, McResult, NoiseModel, SweepReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self { name, passed: true, detail: detail.into() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        Self { name, passed: false, detail: detail.into() }
    }

    fn from_failures(name: &'static str, checked: usize, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self::pass(name, format!("{checked} cases"))
        } else {
            Self::fail(
                name,
                format!("{} of {checked} cases failed; first: {}", failures.len(), failures[0]),
            )
        }
    }
}

/// Entry-wise reference implementation over `Vec<Vec<bool>>`.
pub mod naive {
    pub type Mat = Vec<Vec<bool>>;

    pub fn from_bin(m: &crate::f2::BinMatrix) -> Mat {
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect()
    }

    pub fn transpose(a: &Mat) -> Mat {
        let (rows, cols) = (a.len(), a[0].len());
        (0..cols).map(|c| (0..rows).map(|r| a[r][c]).collect()).collect()
    }

    pub fn mul(a: &Mat, b: &Mat) -> Mat {
        let (n, p) = (a[0].len(), b[0].len());
        assert_eq!(n, b.len());
        a.iter()
            .map(|row| {
                (0..p)
                    .map(|j| (0..n).fold(false, |acc, k| acc ^ (row[k] & b[k][j])))
                    .collect()
            })
            .collect()
    }

    pub fn mul_vec(a: &Mat, v: &[bool]) -> Vec<bool> {
        a.iter()
            .map(|row| row.iter().zip(v).fold(false, |acc, (&x, &y)| acc ^ (x & y)))
            .collect()
    }

    pub fn rank(a: &Mat) -> usize {
        let mut m = a.clone();
        let (rows, cols) = (m.len(), m[0].len());
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| m[i][c]) else { continue };
            m.swap(r, p);
            for i in 0..rows {
                if i != r && m[i][c] {
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x ^= *y;
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Membership of `v` in the row span of `a` by a rank comparison.
    pub fn in_row_span(a: &Mat, v: &[bool]) -> bool {
        let mut stacked = a.clone();
        stacked.push(v.to_vec());
        rank(&stacked) == rank(a)
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BinMatrix {
    let mut m = BinMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.random_bool(0.5));
        }
    }
    m
}

fn random_vector(rng: &mut impl Rng, len: usize) -> BinVector {
    let mut v = BinVector::zeros(len);
    for i in 0..len {
        if rng.random_bool(0.5) {
            v.set(i, true);
        }
    }
    v
}

/// All vectors in the span of the given basis rows (including zero).
/// Guarded to 16 dimensions.
pub fn enumerate_span(basis: &BinMatrix) -> Vec<BinVector> {
    let dim = basis.rows();
    assert!(dim <= 16, "span enumeration limited to 16 dimensions");
    let mut out = Vec::with_capacity(1 << dim);
    let mut v = BinVector::zeros(basis.cols());
    out.push(v.clone());
    let mut prev_gray = 0u64;
    for i in 1..(1u64 << dim) {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        prev_gray = gray;
        v.xor_assign(&basis.row_vector(flipped));
        out.push(v.clone());
    }
    out
}

fn random_span_element(rng: &mut impl Rng, basis: &BinMatrix) -> BinVector {
    let mut v = BinVector::zeros(basis.cols());
    for r in 0..basis.rows() {
        if rng.random_bool(0.5) {
            v.xor_assign(&basis.row_vector(r));
        }
    }
    v
}

fn random_stabilizer_z(rng: &mut impl Rng, code: &HgpCode) -> OpPair {
    let flat = random_span_element(rng, code.h_z());
    code.reshape(&flat, Species::Z)
}

// ---------------------------------------------------------------------------
// f2

pub fn f2_rank_nullity() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    for case in 0..200 {
        let rows = rng.random_range(1..=12);
        let cols = rng.random_range(1..=14);
        let m = random_matrix(&mut rng, rows, cols);
        let k = kernel_basis(&m);
        if m.rank() + k.rows() != cols || (0..k.rows()).any(|r| !m.mul_vec(&k.row_vector(r)).is_zero()) {
            failures.push(format!("case {case}: {m:?}"));
        }
    }
    CheckOutcome::from_failures("f2/rank_nullity", 200, failures)
}

pub fn f2_split_direct_sum() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    for case in 0..200 {
        let rows = rng.random_range(1..=10);
        let cols = rng.random_range(1..=10);
        let m = random_matrix(&mut rng, rows, cols);
        let dec = crate::f2::decompose(&m);
        let v = random_vector(&mut rng, rows);
        let (im_part, comp_part) = dec.split(&v);
        let sum_ok = im_part.xor(&comp_part) == v;
        let im_ok = dec.contains(&im_part);
        let comp_ok = comp_part.iter_ones().all(|i| dec.complement_positions().contains(&i));
        let unit_ok = (0..dec.complement_basis().rows()).all(|r| dec.complement_basis().row_weight(r) == 1);
        if !(sum_ok && im_ok && comp_ok && unit_ok) {
            failures.push(format!("case {case}: v={v} against {m:?}"));
        }
    }
    CheckOutcome::from_failures("f2/split_direct_sum", 200, failures)
}

pub fn f2_solve_contract() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    for case in 0..300 {
        let rows = rng.random_range(1..=10);
        let cols = rng.random_range(1..=12);
        let m = random_matrix(&mut rng, rows, cols);
        let b = random_vector(&mut rng, rows);
        match crate::f2::solve(&m, &b) {
            Some(x) => {
                if m.mul_vec(&x) != b {
                    failures.push(format!("case {case}: invalid solution for b={b}"));
                }
            }
            None => {
                if crate::f2::in_row_span(&m.transposed(), &b) {
                    failures.push(format!("case {case}: missed solvable b={b}"));
                }
            }
        }
    }
    CheckOutcome::from_failures("f2/solve_contract", 300, failures)
}

pub fn f2_packed_vs_naive() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    for case in 0..200 {
        let rows = rng.random_range(1..=64);
        let cols = rng.random_range(1..=80);
        let m = random_matrix(&mut rng, rows, cols);
        let nm = naive::from_bin(&m);
        if m.rank() != naive::rank(&nm) {
            failures.push(format!("case {case}: rank mismatch on {rows}x{cols}"));
            continue;
        }
        if naive::from_bin(&m.transposed()) != naive::transpose(&nm) {
            failures.push(format!("case {case}: transpose mismatch"));
            continue;
        }
        let p = rng.random_range(1..=16);
        let b = random_matrix(&mut rng, cols, p);
        if naive::from_bin(&m.mul(&b)) != naive::mul(&nm, &naive::from_bin(&b)) {
            failures.push(format!("case {case}: product mismatch"));
            continue;
        }
        let v = random_vector(&mut rng, cols);
        let vb: Vec<bool> = (0..cols).map(|i| v.get(i)).collect();
        let got: Vec<bool> = {
            let w = m.mul_vec(&v);
            (0..rows).map(|i| w.get(i)).collect()
        };
        if got != naive::mul_vec(&nm, &vb) {
            failures.push(format!("case {case}: matrix-vector mismatch"));
        }
    }
    CheckOutcome::from_failures("f2/packed_vs_naive", 200, failures)
}

// ---------------------------------------------------------------------------
// classical

fn oracle_test_codes() -> Vec<SeedCode> {
    vec![
        build_seed(repetition_check(3, false), true).unwrap(),
        build_seed(repetition_check(4, true), true).unwrap(),
        build_seed(repetition_check(5, false), true).unwrap(),
        build_seed(families::hamming_7_4_degenerate_check(), true).unwrap(),
    ]
}

pub fn classical_oracle_exactness() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let mut failures = Vec::new();
    let mut checked = 0;
    for code in oracle_test_codes() {
        let kernel = code.kernel().clone();
        let n = code.n();
        let dec = coset_leader_table(code).unwrap();
        let span = enumerate_span(&kernel);
        for _ in 0..500 {
            checked += 1;
            let y = random_vector(&mut rng, n);
            let k = dec.nearest_codeword(&y);
            let achieved = k.xor(&y).weight();
            let best = span.iter().map(|c| c.xor(&y).weight()).min().unwrap();
            if achieved != best {
                failures.push(format!("y={y}: achieved {achieved}, brute force {best}"));
            }
        }
    }
    CheckOutcome::from_failures("classical/oracle_exactness", checked, failures)
}

pub fn classical_half_distance() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut failures = Vec::new();
    let mut checked = 0;
    for code in oracle_test_codes() {
        let n = code.n();
        let d = match code.distance().unwrap() {
            crate::classical::Distance::Finite(d) => d,
            crate::classical::Distance::Infinite => continue,
        };
        let t = (d - 1) / 2;
        let span = enumerate_span(code.kernel());
        let dec = coset_leader_table(code).unwrap();
        for _ in 0..200 {
            checked += 1;
            let c = span[rng.random_range(0..span.len())].clone();
            let w = rng.random_range(0..=t);
            let mut y = c.clone();
            let mut placed = 0;
            while placed < w {
                let i = rng.random_range(0..n);
                if y.get(i) == c.get(i) {
                    y.flip(i);
                    placed += 1;
                }
            }
            if dec.nearest_codeword(&y) != c {
                failures.push(format!("c={c} corrupted to y={y} was not recovered"));
            }
        }
    }
    CheckOutcome::from_failures("classical/half_distance", checked, failures)
}

pub fn classical_repetition_equiv_table() -> CheckOutcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for l in 2..=12usize {
        for closed in [false, true] {
            let analytic = crate::classical::repetition_decoder(l, closed);
            let table = coset_leader_table(build_seed(repetition_check(l, closed), true).unwrap()).unwrap();
            for bits in 0..(1u32 << l) {
                checked += 1;
                let y = BinVector::from_bools(&(0..l).map(|i| (bits >> i) & 1 == 1).collect::<Vec<_>>());
                if analytic.nearest_codeword(&y) != table.nearest_codeword(&y) {
                    failures.push(format!("l={l} closed={closed} y={y}"));
                }
            }
        }
    }
    CheckOutcome::from_failures("classical/repetition_equiv_table", checked, failures)
}

/// Oracle exactness against brute force over every input for every small
/// test code (n <= 12): the achieved coset-leader weight `|k + y|` must
/// equal the enumerated minimum on all 2^n inputs.
pub fn classical_oracle_exhaustive_small() -> CheckOutcome {
    let mut codes: Vec<SeedCode> = Vec::new();
    for l in 2..=12usize {
        codes.push(build_seed(repetition_check(l, false), true).unwrap());
        codes.push(build_seed(repetition_check(l, true), true).unwrap());
    }
    codes.push(build_seed(families::hamming_7_4_degenerate_check(), true).unwrap());
    codes.push(
        build_seed(
            BinMatrix::from_bits(&[
                &[0, 0, 0, 1, 1, 1, 1],
                &[0, 1, 1, 0, 0, 1, 1],
                &[1, 0, 1, 0, 1, 0, 1],
            ]),
            true,
        )
        .unwrap(),
    );
    let mut failures = Vec::new();
    let mut checked = 0;
    for code in codes {
        let n = code.n();
        let span = enumerate_span(code.kernel());
        let dec = coset_leader_table(code).unwrap();
        for bits in 0..(1u32 << n) {
            checked += 1;
            let y = BinVector::from_bools(&(0..n).map(|i| (bits >> i) & 1 == 1).collect::<Vec<_>>());
            let achieved = dec.nearest_codeword(&y).xor(&y).weight();
            let best = span.iter().map(|c| c.xor(&y).weight()).min().unwrap();
            if achieved != best {
                failures.push(format!("n={n} y={y}: achieved {achieved}, brute force {best}"));
            }
        }
    }
    CheckOutcome::from_failures("classical/oracle_exhaustive_small", checked, failures)
}

pub fn classical_call_counter() -> CheckOutcome {
    let dec = crate::classical::repetition_decoder(5, false);
    let y = BinVector::zeros(5);
    for expected in 1..=10u64 {
        dec.nearest_codeword(&y);
        if dec.calls() != expected {
            return CheckOutcome::fail(
                "classical/call_counter",
                format!("after {expected} calls the counter reads {}", dec.calls()),
            );
        }
    }
    CheckOutcome::pass("classical/call_counter", "10 calls")
}

// ---------------------------------------------------------------------------
// hgp

pub fn hgp_css_commutation() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut failures = Vec::new();
    for case in 0..20 {
        let (ra, ca) = (rng.random_range(1..=6), rng.random_range(1..=8));
        let (rb, cb) = (rng.random_range(1..=6), rng.random_range(1..=8));
        let ha = random_matrix(&mut rng, ra, ca);
        let hb = random_matrix(&mut rng, rb, cb);
        let code = crate::hgp::build_hgp(
            build_seed(ha, false).unwrap(),
            build_seed(hb, false).unwrap(),
        );
        if !code.h_x().mul(&code.h_z().transposed()).is_zero() {
            failures.push(format!("case {case}: H_X H_Z^T != 0"));
        }
    }
    CheckOutcome::from_failures("hgp/css_commutation", 20, failures)
}

pub fn hgp_kernel_structure() -> CheckOutcome {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let mut failures = Vec::new();
    let mut checked = 0;
    for bundle in [
        families::planar(3, &budget).unwrap(),
        families::toric(3, &budget).unwrap(),
        families::hamming65(&budget).unwrap(),
    ] {
        let code = &bundle.code;
        let ker = kernel_basis(code.h_x());
        let ha = code.seed_a().h();
        let hb = code.seed_b().h();
        let ker_b = code.seed_b().kernel();
        let ker_at = code.seed_a().kernel_t();
        for _ in 0..200 {
            checked += 1;
            let op = code.reshape(&random_span_element(&mut rng, &ker), Species::Z);
            // d_A L + R d_B = 0 forces d_A L k = 0 for k in ker d_B and
            // kbar^T R d_B = 0 for kbar in ker d_A^T.
            let dal = ha.mul(&op.left);
            for r in 0..ker_b.rows() {
                if !dal.mul_vec(&ker_b.row_vector(r)).is_zero() {
                    failures.push(format!("{}: d_A L k != 0", bundle.id));
                }
            }
            let rdb = op.right.mul(hb);
            for r in 0..ker_at.rows() {
                if !rdb.left_mul(&ker_at.row_vector(r)).is_zero() {
                    failures.push(format!("{}: kbar^T R d_B != 0", bundle.id));
                }
            }
        }
    }
    CheckOutcome::from_failures("hgp/kernel_structure", checked, failures)
}

/// Exhaustive logical-class structure on one small code: every nontrivial
/// logical Z-operator has at least `d_a` nonzero rows on the left or at
/// least `d_b^T` nonzero columns on the right, and the same holds counting
/// only rows/columns outside the respective image spaces.
fn logical_structure_on(bundle: &CodeBundle, name: &'static str) -> CheckOutcome {
    let code = &bundle.code;
    let ker = kernel_basis(code.h_x());
    if ker.rows() > 16 {
        return CheckOutcome::fail(name, "kernel too large for exhaustive enumeration");
    }
    let d_a = code.seed_a().distance().unwrap();
    let d_bt = code.seed_b().distance_t().unwrap();
    let meets = |rows: usize, cols: usize| {
        let left_ok = matches!(d_a, crate::classical::Distance::Finite(d) if rows >= d);
        let right_ok = matches!(d_bt, crate::classical::Distance::Finite(d) if cols >= d);
        left_ok || right_ok
    };
    let mut nontrivial = 0;
    let mut failures = Vec::new();
    for flat in enumerate_span(&ker) {
        let op = code.reshape(&flat, Species::Z);
        if code.is_stabilizer_z(&op) {
            continue;
        }
        nontrivial += 1;
        let rows = op.left.nonzero_rows().len();
        let cols = op.right.nonzero_cols().len();
        if !meets(rows, cols) {
            failures.push(format!("plain weights ({rows}, {cols}) for {flat}"));
        }
        let log_rows = logical_rows(code, &op.left).len();
        let log_cols = logical_cols(code, &op.right).len();
        if !meets(log_rows, log_cols) {
            failures.push(format!("logical weights ({log_rows}, {log_cols}) for {flat}"));
        }
    }
    CheckOutcome::from_failures(name, nontrivial, failures)
}

pub fn hgp_logical_structure_planar() -> CheckOutcome {
    let bundle = families::planar(3, &Budget::default()).unwrap();
    logical_structure_on(&bundle, "hgp/logical_structure_planar3")
}

pub fn hgp_logical_structure_toric() -> CheckOutcome {
    let bundle = families::toric(3, &Budget::default()).unwrap();
    logical_structure_on(&bundle, "hgp/logical_structure_toric3")
}

/// Exhaustive `d_z` over `ker H_X` matches `min(d_a, d_b^T)` for the planar
/// and toric distance-3 codes.
pub fn hgp_distance_crosscheck() -> CheckOutcome {
    let budget = Budget::default();
    let mut failures = Vec::new();
    for bundle in [families::planar(3, &budget).unwrap(), families::toric(3, &budget).unwrap()] {
        let code = &bundle.code;
        let ker = kernel_basis(code.h_x());
        let best = enumerate_span(&ker)
            .into_iter()
            .filter(|flat| !flat.is_zero())
            .filter(|flat| !code.is_stabilizer_z(&code.reshape(flat, Species::Z)))
            .map(|flat| flat.weight())
            .min()
            .unwrap();
        let formula = code.d_z().unwrap();
        if crate::classical::Distance::Finite(best) != formula {
            failures.push(format!("{}: enumerated {best}, formula {formula}", bundle.id));
        }
    }
    CheckOutcome::from_failures("hgp/distance_crosscheck", 2, failures)
}

// ---------------------------------------------------------------------------
// reshape

pub fn reshape_validity_random() -> CheckOutcome {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let bundles = [
        families::planar(3, &budget).unwrap(),
        families::toric(4, &budget).unwrap(),
        families::hamming65(&budget).unwrap(),
    ];
    let mut failures = Vec::new();
    for case in 0..1000 {
        let bundle = &bundles[case % bundles.len()];
        let code = &bundle.code;
        let e = sample_error(code.n(), &NoiseModel { p: 0.08, species: Species::Z }, &mut rng);
        let op = code.reshape(&e, Species::Z);
        let s = code.syndrome_z(&op);
        let start = find_valid_solution_z(code, &s).unwrap();
        let res = decode_z(code, &bundle.oracles.a, &bundle.oracles.bt, &s, &start);
        if code.syndrome_z(&res.correction) != s {
            failures.push(format!("case {case} on {}", bundle.id));
        }
    }
    CheckOutcome::from_failures("reshape/validity_random", 1000, failures)
}

pub fn reshape_logical_weight_invariance() -> CheckOutcome {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    let bundles = [families::planar(3, &budget).unwrap(), families::toric(3, &budget).unwrap()];
    let mut failures = Vec::new();
    for case in 0..1000 {
        let bundle = &bundles[case % bundles.len()];
        let code = &bundle.code;
        let op = code.reshape(&random_vector(&mut rng, code.n()), Species::Z);
        let shifted = op.xor(&random_stabilizer_z(&mut rng, code));
        if wt_rc_log(code, &op) != wt_rc_log(code, &shifted) {
            failures.push(format!("case {case}: weight changed on {}", bundle.id));
            continue;
        }
        // Stronger form: the index sets themselves are invariant.
        if logical_rows(code, &op.left) != logical_rows(code, &shifted.left)
            || logical_cols(code, &op.right) != logical_cols(code, &shifted.right)
        {
            failures.push(format!("case {case}: index sets changed on {}", bundle.id));
        }
    }
    CheckOutcome::from_failures("reshape/logical_weight_invariance", 1000, failures)
}

pub fn reshape_canonical_form() -> CheckOutcome {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    let bundles = [families::planar(3, &budget).unwrap(), families::hamming65(&budget).unwrap()];
    let mut failures = Vec::new();
    for case in 0..1000 {
        let bundle = &bundles[case % bundles.len()];
        let code = &bundle.code;
        let op = code.reshape(&random_vector(&mut rng, code.n()), Species::Z);
        let cl = canonical_left(code, &op.left);
        let cr = canonical_right(code, &op.right);
        if cl.reconstruct() != op.left || cr.reconstruct() != op.right {
            failures.push(format!("case {case}: reconstruction broke on {}", bundle.id));
            continue;
        }
        let dec_bt = code.seed_b().dec_im_t();
        let row_ok = (0..cl.free.rows()).all(|r| dec_bt.contains(&cl.free.row_vector(r)))
            && (0..cl.logical.rows()).all(|r| {
                cl.logical.row_ones(r).all(|c| dec_bt.complement_positions().contains(&c))
            });
        let dec_a = code.seed_a().dec_im();
        let col_ok = (0..cr.free.cols()).all(|c| dec_a.contains(&cr.free.column(c)))
            && (0..cr.logical.cols()).all(|c| {
                cr.logical.column(c).iter_ones().all(|r| dec_a.complement_positions().contains(&r))
            });
        if !(row_ok && col_ok) {
            failures.push(format!("case {case}: membership broke on {}", bundle.id));
        }
    }
    CheckOutcome::from_failures("reshape/canonical_form", 1000, failures)
}

/// The exhaustive decode sweeps behind the desk-scale correctness claim:
/// all weight-1 errors on planar:3 and hamming65, all weight-2 errors on
/// toric:5, every one decoded to the true homology class.
pub fn theorem1_sweeps(budget: &Budget) -> Vec<(CodeBundle, usize, SweepReport)> {
    [
        (families::planar(3, budget).unwrap(), 1usize),
        (families::hamming65(budget).unwrap(), 1),
        (families::toric(5, budget).unwrap(), 2),
    ]
    .into_iter()
    .map(|(bundle, t)| {
        let report = adversarial_sweep(&bundle.code, &bundle.oracles, Species::Z, t, budget).unwrap();
        (bundle, t, report)
    })
    .collect()
}

pub fn reshape_theorem1_desk_scale() -> CheckOutcome {
    let sweeps = theorem1_sweeps(&Budget::default());
    let mut failures = Vec::new();
    let mut total = 0;
    for (bundle, _, report) in &sweeps {
        total += report.total as usize;
        if !report.all_corrected() {
            failures.push(format!(
                "{}: {} uncorrected, first {}",
                bundle.id,
                report.failures.len(),
                report.failures[0]
            ));
        }
    }
    CheckOutcome::from_failures("reshape/theorem1_desk_scale", total, failures)
}

/// Per-decode oracle calls never exceed `n_b - rk_b` on the A side and
/// `m_a - rk_a` on the B side across the desk-scale sweeps.
pub fn reshape_oracle_call_bound() -> CheckOutcome {
    let mut failures = Vec::new();
    for (bundle, _, report) in theorem1_sweeps(&Budget::default()) {
        let code = &bundle.code;
        let bound_a = (code.n_b() - code.seed_b().rank()) as u64;
        let bound_b = (code.m_a() - code.seed_a().rank()) as u64;
        if report.max_calls_a > bound_a || report.max_calls_b > bound_b {
            failures.push(format!(
                "{}: calls ({}, {}) exceed bounds ({bound_a}, {bound_b})",
                bundle.id, report.max_calls_a, report.max_calls_b
            ));
        }
    }
    CheckOutcome::from_failures("reshape/oracle_call_bound", 3, failures)
}

/// Errors confined to a few lines are corrected far beyond half the
/// distance: on the distance-8 planar code, random errors supported on at
/// most 3 left rows and 3 right columns must always be corrected.
pub fn reshape_bounded_shape_correction() -> CheckOutcome {
    let budget = Budget::default();
    let bundle = families::planar(8, &budget).unwrap();
    let code = &bundle.code;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = Vec::new();
    let mut weights = Vec::with_capacity(1000);
    for case in 0..1000 {
        let mut left = BinMatrix::zeros(code.n_a(), code.n_b());
        let mut right = BinMatrix::zeros(code.m_a(), code.m_b());
        let rows: Vec<usize> = rand::seq::index::sample(&mut rng, code.n_a(), 3).into_vec();
        let cols: Vec<usize> = rand::seq::index::sample(&mut rng, code.m_b(), 3).into_vec();
        for &r in &rows {
            for c in 0..code.n_b() {
                if rng.random_bool(0.5) {
                    left.set(r, c, true);
                }
            }
        }
        for &c in &cols {
            for r in 0..code.m_a() {
                if rng.random_bool(0.5) {
                    right.set(r, c, true);
                }
            }
        }
        let op = OpPair { species: Species::Z, left, right };
        weights.push(op.weight());
        let s = code.syndrome_z(&op);
        let start = find_valid_solution_z(code, &s).unwrap();
        let res = decode_z(code, &bundle.oracles.a, &bundle.oracles.bt, &s, &start);
        if !code.homology_equal_z(&res.correction, &op) {
            failures.push(format!("case {case}: weight {} error missed", op.weight()));
        }
    }
    weights.sort_unstable();
    let median = weights[weights.len() / 2];
    if median * 2 <= 8 {
        return CheckOutcome::fail(
            "reshape/bounded_shape_correction",
            format!("median weight {median} does not exceed d/2"),
        );
    }
    let mut outcome = CheckOutcome::from_failures("reshape/bounded_shape_correction", 1000, failures);
    if outcome.passed {
        outcome.detail = format!("1000 cases, median weight {median} (d = 8)");
    }
    outcome
}

// ---------------------------------------------------------------------------
// sim

pub fn sim_determinism() -> CheckOutcome {
    let bundle = families::planar(3, &Budget::default()).unwrap();
    let p_list = [0.02, 0.08];
    let runs: Vec<String> = [1usize, 2, 8]
        .iter()
        .map(|&w| {
            results_to_csv(&monte_carlo(
                &bundle.code,
                &bundle.id,
                &bundle.oracles,
                Species::Z,
                &p_list,
                400,
                5,
                w,
            ))
        })
        .collect();
    if runs[0] == runs[1] && runs[0] == runs[2] {
        CheckOutcome::pass("sim/determinism", "workers 1, 2, 8 byte-identical")
    } else {
        CheckOutcome::fail("sim/determinism", "CSV output depends on worker count")
    }
}

/// Recount failures on logged trials with the naive reference: success iff
/// stacking the residual onto `H_Z` does not increase the rank.
pub fn sim_failure_count_naive() -> CheckOutcome {
    let bundle = families::toric(3, &Budget::default()).unwrap();
    let code = &bundle.code;
    let model = NoiseModel { p: 0.08, species: Species::Z };
    let hz = naive::from_bin(code.h_z());
    let mut mismatches = Vec::new();
    for trial in 0..100u64 {
        let mut rng = trial_rng(11, 0, trial);
        let e = sample_error(code.n(), &model, &mut rng);
        let op_e = code.reshape(&e, Species::Z);
        let s = code.syndrome_z(&op_e);
        let start = find_valid_solution_z(code, &s).unwrap();
        let res = decode_z(code, &bundle.oracles.a, &bundle.oracles.bt, &s, &start);
        let fast = code.homology_equal_z(&res.correction, &op_e);
        let residual = code.flatten(&res.correction).xor(&e);
        let residual_bools: Vec<bool> = (0..code.n()).map(|i| residual.get(i)).collect();
        let slow = naive::in_row_span(&hz, &residual_bools);
        if fast != slow {
            mismatches.push(format!("trial {trial}: fast {fast}, naive {slow}"));
        }
    }
    CheckOutcome::from_failures("sim/failure_count_naive", 100, mismatches)
}

/// The stochastic-noise grid used by the anti-threshold experiment.
pub const ANTI_THRESHOLD_P_GRID: [f64; 5] = [0.005, 0.01, 0.02, 0.04, 0.08];
pub const ANTI_THRESHOLD_DISTANCES: [usize; 3] = [4, 6, 8];

/// Failure-rate curves for the closed-repetition toric codes of distance
/// 4, 6 and 8 under phase-flip noise.
pub fn anti_threshold_data(
    trials_per_point: u64,
    master_seed: u64,
    workers: usize,
) -> Vec<(String, Vec<McResult>)> {
    ANTI_THRESHOLD_DISTANCES
        .iter()
        .map(|&l| {
            let bundle = families::toric(l, &Budget::default()).unwrap();
            let results = monte_carlo(
                &bundle.code,
                &bundle.id,
                &bundle.oracles,
                Species::Z,
                &ANTI_THRESHOLD_P_GRID,
                trials_per_point,
                master_seed,
                workers,
            );
            (bundle.id, results)
        })
        .collect()
}

/// Verdict on the anti-threshold behaviour: the crossing of each curve with
/// the `p_fail = p` line is non-increasing in distance, and the d=8
/// crossing sits below the d=4 crossing beyond the combined 95% Wilson
/// ranges.
pub fn anti_threshold_verdict(data: &[(String, Vec<McResult>)]) -> CheckOutcome {
    let name = "sim/anti_threshold";
    let mut crossings: Vec<(String, CrossingEstimate)> = Vec::new();
    for (id, results) in data {
        match pseudo_threshold_crossing(results) {
            Some(est) => crossings.push((id.clone(), est)),
            None => {
                return CheckOutcome::fail(name, format!("{id}: curve never crosses p_fail = p inside the grid"))
            }
        }
    }
    let detail = crossings
        .iter()
        .map(|(id, c)| format!("{id}: {:.4} [{:.4}, {:.4}]", c.point, c.lower, c.upper))
        .collect::<Vec<_>>()
        .join("; ");
    for w in crossings.windows(2) {
        if w[1].1.point > w[0].1.point {
            return CheckOutcome::fail(name, format!("crossing increased with distance: {detail}"));
        }
    }
    let first = &crossings.first().unwrap().1;
    let last = &crossings.last().unwrap().1;
    if last.upper >= first.lower {
        return CheckOutcome::fail(
            name,
            format!("d=8 crossing not significantly below d=4: {detail}"),
        );
    }
    CheckOutcome::pass(name, detail)
}

pub fn sim_anti_threshold(trials_per_point: u64, master_seed: u64, workers: usize) -> CheckOutcome {
    anti_threshold_verdict(&anti_threshold_data(trials_per_point, master_seed, workers))
}

/// Every suite, in module order. `mc_trials` sizes the stochastic
/// experiment (10_000 for the full run).
pub fn run_all(workers: usize, mc_trials: u64) -> Vec<CheckOutcome> {
    vec![
        f2_rank_nullity(),
        f2_split_direct_sum(),
        f2_solve_contract(),
        f2_packed_vs_naive(),
        classical_oracle_exactness(),
        classical_oracle_exhaustive_small(),
        classical_half_distance(),
        classical_repetition_equiv_table(),
        classical_call_counter(),
        hgp_css_commutation(),
        hgp_kernel_structure(),
        hgp_logical_structure_planar(),
        hgp_logical_structure_toric(),
        hgp_distance_crosscheck(),
        reshape_validity_random(),
        reshape_logical_weight_invariance(),
        reshape_canonical_form(),
        reshape_theorem1_desk_scale(),
        reshape_oracle_call_bound(),
        reshape_bounded_shape_correction(),
        sim_determinism(),
        sim_failure_count_naive(),
        sim_anti_threshold(mc_trials, 2026, workers),
    ]
}
