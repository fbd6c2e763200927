//! Built-in code families, so experiments need no external matrix files.
//!
//! - `planar:L`  — product of the open repetition check with itself,
//!   the distance-`L` surface code with boundaries.
//! - `toric:L`   — product of the closed (circulant) repetition check with
//!   itself, the distance-`L` toric code.
//! - `hamming65` — product of a rank-3 degenerate 4x7 check for the
//!   `[7,4,3]` Hamming code with itself, a `[[65,17,3,3]]` code.
//! - `random34:n:seed` — product of a random full-rank (3,4)-regular check
//!   with itself.

use crate::classical::{
    build_seed, coset_leader_table_with_budget, random_regular_check, repetition_decoder, Budget,
    ClassicalError, MwDecoder, SeedCode,
};
use crate::f2::BinMatrix;
use crate::hgp::{build_hgp, HgpCode};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?} (expected planar:L, toric:L, hamming65, random34:n:seed)")]
    UnknownFamily(String),
    #[error("bad family parameter in {spec:?}: {msg}")]
    BadParameter { spec: String, msg: String },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

/// The four classical oracles a product code can consume: decoders for
/// `d_A`, `d_B` and their transposes.
#[derive(Clone, Debug)]
pub struct HgpOracles {
    pub a: Arc<MwDecoder>,
    pub b: Arc<MwDecoder>,
    pub at: Arc<MwDecoder>,
    pub bt: Arc<MwDecoder>,
}

impl HgpOracles {
    /// Table-backed oracles for all four matrices.
    pub fn tables(code: &HgpCode, budget: &Budget) -> Result<Self, ClassicalError> {
        Ok(Self {
            a: Arc::new(coset_leader_table_with_budget(code.seed_a().clone(), budget)?),
            b: Arc::new(coset_leader_table_with_budget(code.seed_b().clone(), budget)?),
            at: Arc::new(coset_leader_table_with_budget(code.seed_a().transposed(), budget)?),
            bt: Arc::new(coset_leader_table_with_budget(code.seed_b().transposed(), budget)?),
        })
    }
}

/// A code together with its oracles and a replayable identifier.
#[derive(Clone, Debug)]
pub struct CodeBundle {
    pub id: String,
    pub code: HgpCode,
    pub oracles: HgpOracles,
}

/// A rank-3 degenerate parity check for the `[7,4,3]` Hamming code: the three
/// standard checks plus their sum, giving the transpose code distance 4.
pub fn hamming_7_4_degenerate_check() -> BinMatrix {
    BinMatrix::from_bits(&[
        &[0, 0, 0, 1, 1, 1, 1],
        &[0, 1, 1, 0, 0, 1, 1],
        &[1, 0, 1, 0, 1, 0, 1],
        &[1, 1, 0, 1, 0, 0, 1],
    ])
}

fn self_product(seed: SeedCode) -> HgpCode {
    build_hgp(seed.clone(), seed)
}

fn repetition_bundle(l: usize, closed: bool, budget: &Budget) -> Result<CodeBundle, FamilyError> {
    let seed = build_seed(crate::classical::repetition_check(l, closed), true)?;
    let code = self_product(seed);
    let rep = Arc::new(repetition_decoder(l, closed));
    let at = Arc::new(coset_leader_table_with_budget(code.seed_a().transposed(), budget)?);
    let bt = Arc::new(coset_leader_table_with_budget(code.seed_b().transposed(), budget)?);
    let oracles = HgpOracles { a: rep.clone(), b: rep, at, bt };
    let id = format!("{}:{l}", if closed { "toric" } else { "planar" });
    Ok(CodeBundle { id, code, oracles })
}

pub fn planar(l: usize, budget: &Budget) -> Result<CodeBundle, FamilyError> {
    repetition_bundle(l, false, budget)
}

pub fn toric(l: usize, budget: &Budget) -> Result<CodeBundle, FamilyError> {
    repetition_bundle(l, true, budget)
}

pub fn hamming65(budget: &Budget) -> Result<CodeBundle, FamilyError> {
    let seed = build_seed(hamming_7_4_degenerate_check(), true)?;
    let code = self_product(seed);
    let oracles = HgpOracles::tables(&code, budget)?;
    Ok(CodeBundle { id: "hamming65".into(), code, oracles })
}

/// Product of a random full-rank (3,4)-regular check with itself; `n` must
/// be a multiple of 4.
pub fn random34(n: usize, seed: u64, budget: &Budget) -> Result<CodeBundle, FamilyError> {
    if n < 4 || !n.is_multiple_of(4) {
        return Err(FamilyError::BadParameter {
            spec: format!("random34:{n}:{seed}"),
            msg: "n must be a positive multiple of 4".into(),
        });
    }
    let h = random_regular_check(3, 4, 3 * n / 4, n, seed)?;
    let seed_code = build_seed(h, true)?;
    let code = self_product(seed_code);
    let oracles = HgpOracles::tables(&code, budget)?;
    Ok(CodeBundle { id: format!("random34:{n}:{seed}"), code, oracles })
}

/// Parse a family spec like `planar:5` or `random34:16:7`.
pub fn from_spec(spec: &str, budget: &Budget) -> Result<CodeBundle, FamilyError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse_num = |tok: &str, what: &str| -> Result<u64, FamilyError> {
        tok.parse::<u64>().map_err(|_| FamilyError::BadParameter {
            spec: spec.to_string(),
            msg: format!("{what} must be an integer, found {tok:?}"),
        })
    };
    match parts.as_slice() {
        ["planar", l] => {
            let l = parse_num(l, "L")? as usize;
            if l < 2 {
                return Err(FamilyError::BadParameter { spec: spec.into(), msg: "L must be >= 2".into() });
            }
            planar(l, budget)
        }
        ["toric", l] => {
            let l = parse_num(l, "L")? as usize;
            if l < 2 {
                return Err(FamilyError::BadParameter { spec: spec.into(), msg: "L must be >= 2".into() });
            }
            toric(l, budget)
        }
        ["hamming65"] => hamming65(budget),
        ["random34", n, seed] => random34(parse_num(n, "n")? as usize, parse_num(seed, "seed")?, budget),
        _ => Err(FamilyError::UnknownFamily(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::Distance;

    #[test]
    fn spec_parsing() {
        let budget = Budget::default();
        assert_eq!(from_spec("planar:3", &budget).unwrap().code.n(), 13);
        assert_eq!(from_spec("toric:3", &budget).unwrap().code.n(), 18);
        assert_eq!(from_spec("hamming65", &budget).unwrap().code.n(), 65);
        assert!(matches!(from_spec("nope:1", &budget), Err(FamilyError::UnknownFamily(_))));
        assert!(matches!(from_spec("planar:x", &budget), Err(FamilyError::BadParameter { .. })));
        assert!(matches!(from_spec("random34:7:1", &budget), Err(FamilyError::BadParameter { .. })));
    }

    #[test]
    fn random34_parameters() {
        let bundle = random34(16, 1, &Budget::default()).unwrap();
        // n = 16^2 + 12^2, k = (n - m)^2.
        assert_eq!((bundle.code.n(), bundle.code.k()), (400, 16));
        assert_eq!(bundle.code.d_x(), bundle.code.d_z());
        assert!(matches!(bundle.code.d_z(), Some(Distance::Finite(_))));
    }
}
