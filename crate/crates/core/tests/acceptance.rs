//! Acceptance suite: one test per numbered criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them).

use reshape_core::checks::{
    self, anti_threshold_data, anti_threshold_verdict, theorem1_sweeps, CheckOutcome,
};
use reshape_core::classical::{Budget, Distance};
use reshape_core::families::{self, CodeBundle};
use reshape_core::sim::{results_to_csv, McResult, SweepReport};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const MC_TRIALS: u64 = 10_000;
const MC_SEED: u64 = 2026;

fn report(criterion: u32, title: &str, passed: bool, detail: &str) {
    println!(
        "acceptance criterion {criterion} ({title}): {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

fn assert_outcome(criterion: u32, title: &str, outcome: &CheckOutcome) {
    report(criterion, title, outcome.passed, &format!("{}: {}", outcome.name, outcome.detail));
    assert!(outcome.passed, "criterion {criterion} ({title}) failed: {}", outcome.detail);
}

#[test]
fn acceptance_1_parameter_reproduction() {
    let start = Instant::now();
    let bundle = families::hamming65(&Budget::default()).unwrap();
    let code = &bundle.code;
    let params = (code.n(), code.k(), code.d_x(), code.d_z());
    let counts = code.logical_z_counts();
    let elapsed = start.elapsed();
    let ok = params == (65, 17, Some(Distance::Finite(3)), Some(Distance::Finite(3)))
        && counts == (16, 1)
        && elapsed < Duration::from_secs(1);
    report(
        1,
        "parameter reproduction",
        ok,
        &format!(
            "[[{}, {}, {}, {}]], {} left + {} right logical Z generators in {elapsed:.2?}",
            params.0,
            params.1,
            params.2.unwrap(),
            params.3.unwrap(),
            counts.0,
            counts.1
        ),
    );
    assert!(ok, "criterion 1 failed: {params:?}, counts {counts:?}, {elapsed:?}");
}

type TimedSweeps = (Vec<(CodeBundle, usize, SweepReport)>, Duration);
type TimedCurves = (Vec<(String, Vec<McResult>)>, Duration);

fn sweeps() -> &'static TimedSweeps {
    static SWEEPS: OnceLock<TimedSweeps> = OnceLock::new();
    SWEEPS.get_or_init(|| {
        let start = Instant::now();
        let sweeps = theorem1_sweeps(&Budget::default());
        (sweeps, start.elapsed())
    })
}

#[test]
fn acceptance_2_exhaustive_half_distance_decoding() {
    let (sweeps, elapsed) = sweeps();
    let expected_totals = [13u64, 65, 1275];
    let mut ok = *elapsed < Duration::from_secs(30);
    let mut parts = Vec::new();
    for ((bundle, t, report), want) in sweeps.iter().zip(expected_totals) {
        let good = report.total == want && report.all_corrected();
        parts.push(format!("{} t<={t}: {}/{} corrected", bundle.id, report.total - report.failures.len() as u64, report.total));
        ok &= good;
    }
    report(
        2,
        "exhaustive decoding up to half distance",
        ok,
        &format!("{} in {elapsed:.2?}", parts.join(", ")),
    );
    assert!(ok, "criterion 2 failed: {parts:?} in {elapsed:?}");
}

#[test]
fn acceptance_3_oracle_call_bound() {
    let (sweeps, _) = sweeps();
    let mut ok = true;
    let mut parts = Vec::new();
    for (bundle, _, report) in sweeps {
        let code = &bundle.code;
        let bound_a = (code.n_b() - code.seed_b().rank()) as u64;
        let bound_b = (code.m_a() - code.seed_a().rank()) as u64;
        let good = report.max_calls_a <= bound_a && report.max_calls_b <= bound_b;
        parts.push(format!(
            "{}: max calls ({}, {}) within ({bound_a}, {bound_b})",
            bundle.id, report.max_calls_a, report.max_calls_b
        ));
        ok &= good;
    }
    report(3, "oracle call bound", ok, &parts.join("; "));
    assert!(ok, "criterion 3 failed: {parts:?}");
}

#[test]
fn acceptance_4_beyond_half_distance_shapes() {
    let start = Instant::now();
    let outcome = checks::reshape_bounded_shape_correction();
    let elapsed = start.elapsed();
    let ok = outcome.passed && elapsed < Duration::from_secs(60);
    report(
        4,
        "beyond-half-distance correction",
        ok,
        &format!("{} in {elapsed:.2?}", outcome.detail),
    );
    assert!(ok, "criterion 4 failed: {} in {elapsed:?}", outcome.detail);
}

#[test]
fn acceptance_5_invariant_suites() {
    assert_outcome(5, "logical structure, planar", &checks::hgp_logical_structure_planar());
    assert_outcome(5, "logical structure, toric", &checks::hgp_logical_structure_toric());
    assert_outcome(5, "logical weight invariance", &checks::reshape_logical_weight_invariance());
    assert_outcome(5, "canonical form", &checks::reshape_canonical_form());
    assert_outcome(5, "kernel structure", &checks::hgp_kernel_structure());
    assert_outcome(5, "classical oracle exactness", &checks::classical_oracle_exhaustive_small());
}

fn mc_data_single_worker() -> &'static TimedCurves {
    static DATA: OnceLock<TimedCurves> = OnceLock::new();
    DATA.get_or_init(|| {
        let start = Instant::now();
        let data = anti_threshold_data(MC_TRIALS, MC_SEED, 1);
        (data, start.elapsed())
    })
}

fn data_to_csv(data: &[(String, Vec<McResult>)]) -> String {
    let all: Vec<McResult> = data.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    results_to_csv(&all)
}

#[test]
fn acceptance_6_stochastic_anti_threshold() {
    let (data, elapsed) = mc_data_single_worker();
    let verdict = anti_threshold_verdict(data);
    let ok = verdict.passed && *elapsed < Duration::from_secs(600);
    report(
        6,
        "stochastic anti-threshold",
        ok,
        &format!("{} ({MC_TRIALS} trials/point, single worker, {elapsed:.2?})", verdict.detail),
    );
    assert!(
        ok,
        "criterion 6 failed: {} (elapsed {elapsed:?}); measured curves:\n{}",
        verdict.detail,
        data_to_csv(data)
    );
}

#[test]
fn acceptance_7_determinism_across_workers() {
    let (data1, _) = mc_data_single_worker();
    let csv1 = data_to_csv(data1);
    let start = Instant::now();
    let csv4 = data_to_csv(&anti_threshold_data(MC_TRIALS, MC_SEED, 4));
    let csv8 = data_to_csv(&anti_threshold_data(MC_TRIALS, MC_SEED, 8));
    let eight_worker_elapsed = start.elapsed() / 2;
    let ok = csv1 == csv4 && csv1 == csv8 && eight_worker_elapsed < Duration::from_secs(120);
    report(
        7,
        "worker-count determinism",
        ok,
        &format!(
            "CSV byte-identical across workers 1, 4, 8 ({} bytes, ~{eight_worker_elapsed:.2?} per parallel run)",
            csv1.len()
        ),
    );
    assert!(ok, "criterion 7 failed: workers 1 vs 4 equal: {}, 1 vs 8 equal: {}", csv1 == csv4, csv1 == csv8);
}
