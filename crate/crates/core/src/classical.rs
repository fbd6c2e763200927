//! Classical seed codes and exact minimum-weight decoder oracles.
//!
//! A [`SeedCode`] caches everything the product construction and the decoder
//! need about one parity-check matrix: rank, kernel bases of `H` and `H^T`,
//! image-space decompositions, and (optionally) exact distances. The
//! [`MwDecoder`] oracle answers nearest-codeword queries, either from an
//! exhaustive coset-leader table or analytically for repetition codes, and
//! counts how many times it was called.

use crate::f2::{decompose, kernel_basis, BinMatrix, BinVector, Decomposition};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serializer;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Kernel dimension above which exact distance computation is refused.
pub const DISTANCE_KERNEL_LIMIT: usize = 24;

/// Enumeration budgets for the exhaustive machinery.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Coset-leader tables refuse codes with rank above this.
    pub max_table_rank: usize,
    /// Hard cap on error vectors enumerated while filling a table.
    pub max_table_enumeration: u64,
    /// Cap on the number of errors an adversarial sweep may enumerate.
    pub max_sweep: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_table_rank: 24,
            max_table_enumeration: 100_000_000,
            max_sweep: 10_000_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("kernel dimension {dim} too large for exact distance (limit {limit})")]
    DistanceTooLarge { dim: usize, limit: usize },
    #[error("coset table budget exceeded: rank {rank} over limit {max_rank}")]
    TableBudget { rank: usize, max_rank: usize },
    #[error("coset table enumeration exceeded {max} error vectors")]
    TableEnumeration { max: u64 },
    #[error("no full-rank regular matrix found after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}

/// Code distance with an explicit sentinel for codes whose kernel is
/// trivial, so `min` over distances stays total.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn as_finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => serializer.serialize_u64(*d as u64),
            Distance::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Minimum weight over the nonzero span of the given basis rows, walking the
/// span in Gray-code order so each step is a single row XOR.
fn min_weight_of_span(basis: &BinMatrix) -> Distance {
    let dim = basis.rows();
    if dim == 0 {
        return Distance::Infinite;
    }
    let mut v = BinVector::zeros(basis.cols());
    let mut best = usize::MAX;
    let total: u64 = 1 << dim;
    let mut prev_gray = 0u64;
    for i in 1..total {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        prev_gray = gray;
        v.xor_assign(&basis.row_vector(flipped));
        best = best.min(v.weight());
    }
    Distance::Finite(best)
}

/// A classical parity-check matrix with its cached linear-algebra artifacts.
#[derive(Clone)]
pub struct SeedCode {
    h: BinMatrix,
    rank: usize,
    kernel: BinMatrix,
    kernel_t: BinMatrix,
    dec_im: Decomposition,
    dec_im_t: Decomposition,
    distance: Option<Distance>,
    distance_t: Option<Distance>,
}

impl SeedCode {
    pub fn h(&self) -> &BinMatrix {
        &self.h
    }

    /// Code length (columns of `H`).
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of checks (rows of `H`).
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Basis of `ker H`, one row per vector.
    pub fn kernel(&self) -> &BinMatrix {
        &self.kernel
    }

    /// Basis of `ker H^T`.
    pub fn kernel_t(&self) -> &BinMatrix {
        &self.kernel_t
    }

    pub fn k(&self) -> usize {
        self.kernel.rows()
    }

    pub fn k_t(&self) -> usize {
        self.kernel_t.rows()
    }

    /// Decomposition of `im H` inside `F_2^m`.
    pub fn dec_im(&self) -> &Decomposition {
        &self.dec_im
    }

    /// Decomposition of `im H^T` (the row space) inside `F_2^n`.
    pub fn dec_im_t(&self) -> &Decomposition {
        &self.dec_im_t
    }

    pub fn distance(&self) -> Option<Distance> {
        self.distance
    }

    pub fn distance_t(&self) -> Option<Distance> {
        self.distance_t
    }

    /// The seed for the transposed matrix; caches are swapped, not
    /// recomputed.
    pub fn transposed(&self) -> SeedCode {
        SeedCode {
            h: self.h.transposed(),
            rank: self.rank,
            kernel: self.kernel_t.clone(),
            kernel_t: self.kernel.clone(),
            dec_im: self.dec_im_t.clone(),
            dec_im_t: self.dec_im.clone(),
            distance: self.distance_t,
            distance_t: self.distance,
        }
    }
}

impl fmt::Debug for SeedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SeedCode({}x{}, rank={}, k={}, k_t={})",
            self.m(),
            self.n(),
            self.rank,
            self.k(),
            self.k_t()
        )
    }
}

/// Build a [`SeedCode`]. Distances are found by exhaustive minimization over
/// the kernel span when requested, which is refused above
/// [`DISTANCE_KERNEL_LIMIT`] dimensions.
pub fn build_seed(h: BinMatrix, compute_distance: bool) -> Result<SeedCode, ClassicalError> {
    assert!(h.rows() > 0 && h.cols() > 0, "parity check must be nonempty");
    let rank = h.rank();
    let kernel = kernel_basis(&h);
    let kernel_t = kernel_basis(&h.transposed());
    let dec_im = decompose(&h);
    let dec_im_t = decompose(&h.transposed());
    let (distance, distance_t) = if compute_distance {
        let worst = kernel.rows().max(kernel_t.rows());
        if worst > DISTANCE_KERNEL_LIMIT {
            return Err(ClassicalError::DistanceTooLarge { dim: worst, limit: DISTANCE_KERNEL_LIMIT });
        }
        (Some(min_weight_of_span(&kernel)), Some(min_weight_of_span(&kernel_t)))
    } else {
        (None, None)
    };
    Ok(SeedCode { h, rank, kernel, kernel_t, dec_im, dec_im_t, distance, distance_t })
}

struct LeaderSet {
    weight: usize,
    errors: Vec<BinVector>,
}

struct CosetTable {
    leaders: HashMap<BinVector, LeaderSet>,
}

enum Backend {
    Table(CosetTable),
    Repetition,
}

/// An exact nearest-codeword oracle for a fixed parity-check matrix.
///
/// `nearest_codeword` returns the kernel element `k` minimizing `|k + y|`,
/// breaking ties by the lexicographically smallest `k`; the call counter is
/// atomic so one oracle can serve concurrent trials.
pub struct MwDecoder {
    code: SeedCode,
    backend: Backend,
    calls: AtomicU64,
}

impl MwDecoder {
    pub fn code(&self) -> &SeedCode {
        &self.code
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// The kernel element nearest to `y`; unique whenever
    /// `dist(y, ker H) < d/2`.
    pub fn nearest_codeword(&self, y: &BinVector) -> BinVector {
        assert_eq!(y.len(), self.code.n(), "length mismatch");
        self.calls.fetch_add(1, Ordering::Relaxed);
        match &self.backend {
            Backend::Repetition => {
                let l = self.code.n();
                if 2 * y.weight() <= l {
                    BinVector::zeros(l)
                } else {
                    BinVector::ones(l)
                }
            }
            Backend::Table(table) => {
                let s = self.code.h.mul_vec(y);
                let entry = table.leaders.get(&s).expect("complete table covers im H");
                entry
                    .errors
                    .iter()
                    .map(|e| y.xor(e))
                    .min()
                    .expect("leader sets are nonempty")
            }
        }
    }
}

impl fmt::Debug for MwDecoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.backend {
            Backend::Table(t) => format!("table[{}]", t.leaders.len()),
            Backend::Repetition => "repetition".into(),
        };
        write!(f, "MwDecoder({:?}, {kind}, calls={})", self.code, self.calls())
    }
}

/// Build an exact oracle by enumerating error vectors in increasing weight
/// until every syndrome in `im H` has its full set of minimum-weight coset
/// leaders.
pub fn coset_leader_table(code: SeedCode) -> Result<MwDecoder, ClassicalError> {
    coset_leader_table_with_budget(code, &Budget::default())
}

pub fn coset_leader_table_with_budget(code: SeedCode, budget: &Budget) -> Result<MwDecoder, ClassicalError> {
    if code.rank() > budget.max_table_rank {
        return Err(ClassicalError::TableBudget { rank: code.rank(), max_rank: budget.max_table_rank });
    }
    let n = code.n();
    let target = 1usize << code.rank();
    let mut leaders: HashMap<BinVector, LeaderSet> = HashMap::with_capacity(target);
    let mut enumerated: u64 = 0;
    for w in 0..=n {
        for combo in (0..n).combinations(w) {
            enumerated += 1;
            if enumerated > budget.max_table_enumeration {
                return Err(ClassicalError::TableEnumeration { max: budget.max_table_enumeration });
            }
            let mut e = BinVector::zeros(n);
            for &i in &combo {
                e.set(i, true);
            }
            let s = code.h.mul_vec(&e);
            match leaders.get_mut(&s) {
                None => {
                    leaders.insert(s, LeaderSet { weight: w, errors: vec![e] });
                }
                Some(entry) if entry.weight == w => entry.errors.push(e),
                Some(_) => {}
            }
        }
        // Every syndrome first seen at weight <= w is complete once the
        // whole weight-w level has been enumerated.
        if leaders.len() == target {
            break;
        }
    }
    debug_assert_eq!(leaders.len(), target);
    Ok(MwDecoder { code, backend: Backend::Table(CosetTable { leaders }), calls: AtomicU64::new(0) })
}

/// Parity-check matrix of the length-`l` repetition code: `(l-1) x l` open
/// chain, or `l x l` circulant when closed.
pub fn repetition_check(l: usize, closed: bool) -> BinMatrix {
    assert!(l >= 2, "repetition code needs length >= 2");
    let rows = if closed { l } else { l - 1 };
    let mut h = BinMatrix::zeros(rows, l);
    for r in 0..rows {
        h.set(r, r, true);
        h.set(r, (r + 1) % l, true);
    }
    h
}

/// Analytic oracle for the repetition code, equivalent to the table oracle:
/// the kernel is `{0, 1^l}`, so nearest-codeword is a majority vote with
/// ties resolved to the all-zero word.
pub fn repetition_decoder(l: usize, closed: bool) -> MwDecoder {
    let code = build_seed(repetition_check(l, closed), true).expect("repetition kernels are tiny");
    MwDecoder { code, backend: Backend::Repetition, calls: AtomicU64::new(0) }
}

/// A full-rank parity-check matrix with constant column weight `wc` and row
/// weight `wr`, built by randomly pairing column and row sockets and
/// resampling until the result has no repeated edge and full rank.
pub fn random_regular_check(
    wc: usize,
    wr: usize,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<BinMatrix, ClassicalError> {
    assert!(wc >= 1 && wr >= 1 && m >= 1 && n >= 1);
    assert_eq!(m * wr, n * wc, "socket counts must agree: m*wr == n*wc");
    const ATTEMPTS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let col_sockets: Vec<usize> = (0..n).flat_map(|c| std::iter::repeat_n(c, wc)).collect();
    for _ in 0..ATTEMPTS {
        let mut row_sockets: Vec<usize> = (0..m).flat_map(|r| std::iter::repeat_n(r, wr)).collect();
        row_sockets.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(col_sockets.len());
        if !col_sockets
            .iter()
            .zip(&row_sockets)
            .all(|(&c, &r)| seen.insert((r, c)))
        {
            continue;
        }
        let mut h = BinMatrix::zeros(m, n);
        for (&c, &r) in col_sockets.iter().zip(&row_sockets) {
            h.set(r, c, true);
        }
        if h.rank() == m {
            return Ok(h);
        }
    }
    Err(ClassicalError::GenerationFailed { attempts: ATTEMPTS })
}
