//! Hypergraph product CSS codes and an exact decoder lifted from classical
//! minimum-weight decoders.
//!
//! The crate builds quantum CSS codes as the hypergraph product of two
//! classical parity-check matrices, decodes Z- and X-errors by reshaping
//! flat error vectors into matrix pairs and delegating to exact classical
//! coset-leader oracles, and ships a Monte Carlo harness for logical
//! failure-rate experiments.

pub mod checks;
pub mod classical;
pub mod f2;
pub mod families;
pub mod hgp;
pub mod io;
pub mod reshape;
pub mod sim;

pub use classical::{build_seed, Budget, Distance, MwDecoder, SeedCode};
pub use f2::{BinMatrix, BinVector};
pub use families::{CodeBundle, HgpOracles};
pub use hgp::{build_hgp, HgpCode, OpPair, Species};
pub use reshape::{decode_x, decode_z, DecodeResult};
pub use sim::{monte_carlo, run_trial, McResult, NoiseModel};
