//! Noise sampling, trial execution, exhaustive sweeps, and Monte Carlo
//! estimation of logical failure rates.
//!
//! Determinism contract: every trial draws from its own RNG stream derived
//! from `(master seed, noise-point index, trial index)` by a counter-based
//! scheme, so results are bit-identical for any worker count.

use crate::classical::Budget;
use crate::f2::BinVector;
use crate::hgp::{HgpCode, Species};
use crate::io::{matrix_sha256_hex, render_dense};
use crate::families::HgpOracles;
use crate::reshape::{decode_x, decode_z, find_valid_solution_x, find_valid_solution_z};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("sweep would enumerate {needed} errors, over the budget of {budget}")]
    SweepBudget { needed: u64, budget: u64 },
}

/// Independent single-qubit flips of one Pauli species.
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel {
    pub p: f64,
    pub species: Species,
}

/// One Monte Carlo point.
#[derive(Clone, Debug, Serialize)]
pub struct McResult {
    pub code_id: String,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub p_fail: f64,
    /// Half-width of the 95% Wilson interval around `p_fail`.
    pub ci_halfwidth: f64,
    pub seed: u64,
}

/// The per-trial RNG: a fixed stream per noise point, with each trial
/// offset to its own disjoint block of the keystream.
pub fn trial_rng(master_seed: u64, point_index: usize, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(point_index as u64);
    rng.set_word_pos((trial_index as u128) << 32);
    rng
}

/// A length-`n` vector of independent Bernoulli(p) flips.
pub fn sample_error(n: usize, model: &NoiseModel, rng: &mut impl Rng) -> BinVector {
    let mut e = BinVector::zeros(n);
    for i in 0..n {
        if rng.random::<f64>() < model.p {
            e.set(i, true);
        }
    }
    e
}

fn decode_flat_error(code: &HgpCode, oracles: &HgpOracles, species: Species, e: &BinVector) -> bool {
    let op_e = code.reshape(e, species);
    match species {
        Species::Z => {
            let s = code.syndrome_z(&op_e);
            let start = find_valid_solution_z(code, &s).expect("sampled syndromes are consistent");
            let res = decode_z(code, &oracles.a, &oracles.bt, &s, &start);
            code.homology_equal_z(&res.correction, &op_e)
        }
        Species::X => {
            let s = code.syndrome_x(&op_e);
            let start = find_valid_solution_x(code, &s).expect("sampled syndromes are consistent");
            let res = decode_x(code, &oracles.at, &oracles.b, &s, &start);
            code.homology_equal_x(&res.correction, &op_e)
        }
    }
}

/// Sample one error, decode it, and report success. Success means the
/// residual is a stabilizer (correction up to stabilizers); validity of the
/// correction is asserted inside the decoder, not counted as success.
pub fn run_trial(code: &HgpCode, oracles: &HgpOracles, model: &NoiseModel, rng: &mut impl Rng) -> bool {
    let e = sample_error(code.n(), model, rng);
    decode_flat_error(code, oracles, model.species, &e)
}

/// Monte Carlo failure-rate estimation over a grid of noise rates.
/// Bit-identical output for any `workers` value.
#[allow(clippy::too_many_arguments)]
pub fn monte_carlo(
    code: &HgpCode,
    code_id: &str,
    oracles: &HgpOracles,
    species: Species,
    p_list: &[f64],
    trials_per_point: u64,
    master_seed: u64,
    workers: usize,
) -> Vec<McResult> {
    assert!(trials_per_point >= 1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        p_list
            .iter()
            .enumerate()
            .map(|(point, &p)| {
                let model = NoiseModel { p, species };
                let failures = (0..trials_per_point)
                    .into_par_iter()
                    .filter(|&trial| {
                        let mut rng = trial_rng(master_seed, point, trial);
                        !run_trial(code, oracles, &model, &mut rng)
                    })
                    .count() as u64;
                let (_, halfwidth) = wilson_interval(failures, trials_per_point);
                McResult {
                    code_id: code_id.to_string(),
                    p,
                    trials: trials_per_point,
                    failures,
                    p_fail: failures as f64 / trials_per_point as f64,
                    ci_halfwidth: halfwidth,
                    seed: master_seed,
                }
            })
            .collect()
    })
}

/// 95% Wilson score interval; returns (center, half-width).
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = failures as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (center, half)
}

/// Report of an exhaustive sweep over all errors up to a weight cutoff.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub t_max: usize,
    pub total: u64,
    /// Errors that decoded to the wrong homology class.
    pub failures: Vec<BinVector>,
    /// Largest per-decode oracle call counts observed.
    pub max_calls_a: u64,
    pub max_calls_b: u64,
}

impl SweepReport {
    pub fn all_corrected(&self) -> bool {
        self.failures.is_empty()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Decode every error of weight <= `t_max`, injecting the exact error. All
/// must land in the true homology class whenever
/// `t_max <= floor((d - 1) / 2)`.
pub fn adversarial_sweep(
    code: &HgpCode,
    oracles: &HgpOracles,
    species: Species,
    t_max: usize,
    budget: &Budget,
) -> Result<SweepReport, SimError> {
    let n = code.n();
    let needed: u64 = (1..=t_max as u64).map(|w| binomial(n as u64, w)).sum();
    if needed > budget.max_sweep {
        return Err(SimError::SweepBudget { needed, budget: budget.max_sweep });
    }
    let mut report = SweepReport { t_max, total: 0, failures: Vec::new(), max_calls_a: 0, max_calls_b: 0 };
    for w in 1..=t_max {
        for combo in (0..n).combinations(w) {
            let mut e = BinVector::zeros(n);
            for &i in &combo {
                e.set(i, true);
            }
            report.total += 1;
            let op_e = code.reshape(&e, species);
            let (ok, calls_a, calls_b) = match species {
                Species::Z => {
                    let s = code.syndrome_z(&op_e);
                    let start = find_valid_solution_z(code, &s).expect("injected syndromes are consistent");
                    let res = decode_z(code, &oracles.a, &oracles.bt, &s, &start);
                    (
                        code.homology_equal_z(&res.correction, &op_e),
                        res.oracle_calls_a,
                        res.oracle_calls_b,
                    )
                }
                Species::X => {
                    let s = code.syndrome_x(&op_e);
                    let start = find_valid_solution_x(code, &s).expect("injected syndromes are consistent");
                    let res = decode_x(code, &oracles.at, &oracles.b, &s, &start);
                    (
                        code.homology_equal_x(&res.correction, &op_e),
                        res.oracle_calls_a,
                        res.oracle_calls_b,
                    )
                }
            };
            report.max_calls_a = report.max_calls_a.max(calls_a);
            report.max_calls_b = report.max_calls_b.max(calls_b);
            if !ok {
                report.failures.push(e);
            }
        }
    }
    Ok(report)
}

/// Render results as the stable CSV interchange format.
pub fn results_to_csv(results: &[McResult]) -> String {
    let mut out = String::from("code_id,p,trials,failures,p_fail,ci,seed\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.code_id, r.p, r.trials, r.failures, r.p_fail, r.ci_halfwidth, r.seed
        ));
    }
    out
}

/// Crossing of a failure curve with the `p_fail = p` line, with a 95%
/// confidence range derived from the Wilson bounds of each point.
#[derive(Clone, Copy, Debug)]
pub struct CrossingEstimate {
    pub lower: f64,
    pub point: f64,
    pub upper: f64,
}

/// Interpolated crossing of `(p, f(p))` with the line `f = p` in log-log
/// coordinates. Zero-failure points are floored at half a count. Returns
/// `None` when the curve stays on one side of the line over the whole grid.
fn crossing_of(points: &[(f64, f64, u64)]) -> Option<f64> {
    let g = |p_fail: f64, p: f64, trials: u64| -> f64 {
        let floor = 0.5 / trials as f64;
        (p_fail.max(floor)).ln() - p.ln()
    };
    let gs: Vec<f64> = points.iter().map(|&(p, f, t)| g(f, p, t)).collect();
    for i in 0..points.len() - 1 {
        let (g0, g1) = (gs[i], gs[i + 1]);
        if g0 <= 0.0 && g1 > 0.0 {
            let t = if g1 - g0 > 0.0 { -g0 / (g1 - g0) } else { 0.0 };
            let lp = points[i].0.ln() + t * (points[i + 1].0.ln() - points[i].0.ln());
            return Some(lp.exp());
        }
    }
    None
}

/// Pseudo-threshold of a single code's curve: where `p_fail(p)` crosses the
/// unencoded line `p_fail = p`. The confidence range uses the upper Wilson
/// curve for the lower crossing bound and vice versa; when a bound's curve
/// never crosses inside the grid it is clamped to the grid edge, which only
/// widens the range.
pub fn pseudo_threshold_crossing(results: &[McResult]) -> Option<CrossingEstimate> {
    if results.len() < 2 {
        return None;
    }
    let mut sorted: Vec<&McResult> = results.iter().collect();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    let p_min = sorted.first().unwrap().p;
    let p_max = sorted.last().unwrap().p;
    let curve =
        |f: &dyn Fn(&McResult) -> f64| sorted.iter().map(|r| (r.p, f(r), r.trials)).collect::<Vec<_>>();
    let mid = curve(&|r: &McResult| r.p_fail);
    let hi = curve(&|r: &McResult| {
        let (c, h) = wilson_interval(r.failures, r.trials);
        (c + h).min(1.0)
    });
    let lo = curve(&|r: &McResult| {
        let (c, h) = wilson_interval(r.failures, r.trials);
        (c - h).max(0.0)
    });
    let point = crossing_of(&mid)?;
    let lower = crossing_of(&hi).unwrap_or(p_min);
    let upper = crossing_of(&lo).unwrap_or(p_max);
    Some(CrossingEstimate { lower, point, upper })
}

/// Replay record for a Monte Carlo run.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub code_id: String,
    pub species: String,
    pub seed: u64,
    pub p_list: Vec<f64>,
    pub trials_per_point: u64,
    pub workers: usize,
    pub seed_a_sha256: String,
    pub seed_b_sha256: String,
    pub seed_a: String,
    pub seed_b: String,
}

impl RunManifest {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        code: &HgpCode,
        code_id: &str,
        species: Species,
        seed: u64,
        p_list: &[f64],
        trials_per_point: u64,
        workers: usize,
    ) -> Self {
        Self {
            code_id: code_id.to_string(),
            species: species.to_string(),
            seed,
            p_list: p_list.to_vec(),
            trials_per_point,
            workers,
            seed_a_sha256: matrix_sha256_hex(code.seed_a().h()),
            seed_b_sha256: matrix_sha256_hex(code.seed_b().h()),
            seed_a: render_dense(code.seed_a().h()),
            seed_b: render_dense(code.seed_b().h()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::Budget;
    use crate::families;

    fn planar3() -> families::CodeBundle {
        families::planar(3, &Budget::default()).unwrap()
    }

    #[test]
    fn sample_error_extremes() {
        let mut rng = trial_rng(1, 0, 0);
        let z = sample_error(50, &NoiseModel { p: 0.0, species: Species::Z }, &mut rng);
        assert!(z.is_zero());
        let o = sample_error(50, &NoiseModel { p: 1.0, species: Species::Z }, &mut rng);
        assert_eq!(o.weight(), 50);
    }

    #[test]
    fn sample_error_concentrates() {
        let model = NoiseModel { p: 0.1, species: Species::Z };
        let mut total = 0usize;
        for t in 0..100 {
            let mut rng = trial_rng(42, 0, t);
            total += sample_error(10_000, &model, &mut rng).weight();
        }
        let mean = total as f64 / 100.0;
        // 3 sigma of the mean of 100 samples of Binomial(1e4, 0.1).
        assert!((mean - 1000.0).abs() < 9.0, "mean weight {mean}");
    }

    #[test]
    fn trial_at_p_zero_succeeds() {
        let bundle = planar3();
        let model = NoiseModel { p: 0.0, species: Species::Z };
        let mut rng = trial_rng(7, 0, 0);
        assert!(run_trial(&bundle.code, &bundle.oracles, &model, &mut rng));
    }

    #[test]
    fn injected_logical_generator_fails_undetected() {
        let bundle = planar3();
        let gen = &bundle.code.logical_z_basis()[0];
        let e = bundle.code.flatten(gen);
        assert!(bundle.code.syndrome_z(gen).is_zero());
        assert!(!decode_flat_error(&bundle.code, &bundle.oracles, Species::Z, &e));
    }

    #[test]
    fn sweep_planar_weight_one() {
        let bundle = planar3();
        let report =
            adversarial_sweep(&bundle.code, &bundle.oracles, Species::Z, 1, &Budget::default()).unwrap();
        assert_eq!(report.total, 13);
        assert!(report.all_corrected());
        assert!(report.max_calls_a <= 1 && report.max_calls_b == 0);
    }

    #[test]
    fn sweep_budget_refusal() {
        let bundle = planar3();
        let tight = Budget { max_sweep: 5, ..Budget::default() };
        match adversarial_sweep(&bundle.code, &bundle.oracles, Species::Z, 2, &tight) {
            Err(SimError::SweepBudget { needed, budget: 5 }) => assert_eq!(needed, 13 + 78),
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_is_worker_independent() {
        let bundle = planar3();
        let p_list = [0.05, 0.1];
        let runs: Vec<Vec<McResult>> = [1usize, 2, 4]
            .iter()
            .map(|&w| {
                monte_carlo(&bundle.code, &bundle.id, &bundle.oracles, Species::Z, &p_list, 200, 99, w)
            })
            .collect();
        let csv0 = results_to_csv(&runs[0]);
        assert_eq!(csv0, results_to_csv(&runs[1]));
        assert_eq!(csv0, results_to_csv(&runs[2]));
        assert!(csv0.starts_with("code_id,p,trials,failures,p_fail,ci,seed\n"));
    }

    #[test]
    fn monte_carlo_p_zero_never_fails() {
        let bundle = planar3();
        let results =
            monte_carlo(&bundle.code, &bundle.id, &bundle.oracles, Species::Z, &[0.0], 100, 3, 2);
        assert_eq!(results[0].failures, 0);
        assert_eq!(results[0].p_fail, 0.0);
    }

    #[test]
    fn wilson_interval_sanity() {
        let (c, h) = wilson_interval(0, 10_000);
        assert!(c > 0.0 && h > 0.0 && c - h <= 0.0 + 1e-12);
        let (c, h) = wilson_interval(5000, 10_000);
        assert!((c - 0.5).abs() < 1e-6);
        assert!(h < 0.011 && h > 0.009);
    }

    #[test]
    fn crossing_interpolates_in_log_space() {
        // f(p) = p^2 / 0.01 crosses f = p at exactly p = 0.01.
        let results: Vec<McResult> = [0.005, 0.02]
            .iter()
            .map(|&p| McResult {
                code_id: "synthetic".into(),
                p,
                trials: 1_000_000,
                failures: (p * p / 0.01 * 1_000_000.0).round() as u64,
                p_fail: p * p / 0.01,
                ci_halfwidth: 0.0,
                seed: 0,
            })
            .collect();
        let est = pseudo_threshold_crossing(&results).unwrap();
        assert!((est.point - 0.01).abs() < 0.0005, "crossing {est:?}");
        assert!(est.lower <= est.point && est.point <= est.upper);
    }

    #[test]
    fn manifest_records_hashes() {
        let bundle = planar3();
        let manifest = RunManifest::new(&bundle.code, &bundle.id, Species::Z, 1, &[0.01], 100, 4);
        let json = serde_json::to_string_pretty(&manifest).unwrap();
        assert!(json.contains("seed_a_sha256"));
        assert_eq!(manifest.seed_a_sha256, manifest.seed_b_sha256);
    }
}
