//! Command-line surface: build product codes, decode single instances, run
//! Monte Carlo sweeps, verify the invariant suites, and generate seed
//! matrices.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 input error, 3 inconsistent
//! syndrome, 4 enumeration budget refusal.

use clap::{Args, Parser, Subcommand, ValueEnum};
use reshape_core::classical::{build_seed, Budget, ClassicalError, SeedCode};
use reshape_core::f2::BinMatrix;
use reshape_core::families::{self, CodeBundle, FamilyError, HgpOracles};
use reshape_core::hgp::{build_hgp, Species};
use reshape_core::io::{parse_alist, parse_bit_line, parse_dense, render_alist, render_dense, IoError};
use reshape_core::reshape::{
    canonical_left, canonical_right, decode_x, decode_z, find_valid_solution_x,
    find_valid_solution_z, DecodeResult, ReshapeError,
};
use reshape_core::sim::{monte_carlo, results_to_csv, RunManifest, SimError};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "reshape",
    version,
    about = "Hypergraph product CSS codes with exact decoders lifted from classical codes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code and print its [[n, k, d_x, d_z]] parameters.
    Build(BuildArgs),
    /// Decode one error or syndrome instance.
    Decode(DecodeArgs),
    /// Monte Carlo logical failure rates over a noise grid.
    Mc(McArgs),
    /// Run every invariant suite and report per-property pass/fail.
    Verify(VerifyArgs),
    /// Generate a random regular parity-check matrix.
    GenSeed(GenSeedArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dense,
    Alist,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpeciesArg {
    Z,
    X,
}

impl From<SpeciesArg> for Species {
    fn from(s: SpeciesArg) -> Species {
        match s {
            SpeciesArg::Z => Species::Z,
            SpeciesArg::X => Species::X,
        }
    }
}

#[derive(Args)]
struct CodeSource {
    /// Built-in family: planar:L, toric:L, hamming65, random34:n:seed.
    #[arg(long, conflicts_with_all = ["seed_a", "seed_b"])]
    family: Option<String>,
    /// Path to the first seed parity-check matrix.
    #[arg(long, requires = "seed_b")]
    seed_a: Option<PathBuf>,
    /// Path to the second seed parity-check matrix.
    #[arg(long, requires = "seed_a")]
    seed_b: Option<PathBuf>,
    /// Matrix file format; inferred from the extension when omitted
    /// (`.alist` selects alist, anything else dense text).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Write the code summary as JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Error vector file: one line of n space-separated 0/1 entries.
    #[arg(long, conflicts_with = "syndrome")]
    error: Option<PathBuf>,
    /// Syndrome matrix file in dense text (m_a x n_b for Z, n_a x m_b for X).
    #[arg(long)]
    syndrome: Option<PathBuf>,
    /// Which error species to decode.
    #[arg(long, value_enum, default_value = "z")]
    species: SpeciesArg,
    /// Print the split/decode trace (each classical oracle call).
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Comma-separated noise rates, e.g. 0.005,0.01,0.02.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Trials per noise point.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Master seed for the counter-based trial RNG.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the results do not depend on this.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Append CSV rows here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a JSON replay manifest here.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "z")]
    species: SpeciesArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Worker threads for the stochastic experiment.
    #[arg(long, default_value_t = 8)]
    workers: usize,
    /// Trials per point for the stochastic experiment.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

#[derive(Args)]
struct GenSeedArgs {
    /// Column weight.
    #[arg(long, default_value_t = 3)]
    wc: usize,
    /// Row weight.
    #[arg(long, default_value_t = 4)]
    wr: usize,
    /// Number of columns; rows follow from n*wc == m*wr.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "dense")]
    format: FormatArg,
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        Self { code: 2, msg: msg.into() }
    }

    fn budget(msg: impl Into<String>) -> Self {
        Self { code: 4, msg: msg.into() }
    }
}

impl From<ClassicalError> for CliError {
    fn from(e: ClassicalError) -> Self {
        CliError::budget(e.to_string())
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Classical(inner) => inner.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::budget(e.to_string())
    }
}

impl From<ReshapeError> for CliError {
    fn from(e: ReshapeError) -> Self {
        CliError { code: 3, msg: e.to_string() }
    }
}

fn budget_from_env() -> Budget {
    let mut budget = Budget::default();
    if let Ok(v) = std::env::var("RESHAPE_BUDGET") {
        if let Ok(v) = v.parse::<u64>() {
            budget.max_sweep = v;
            budget.max_table_enumeration = v;
        }
    }
    budget
}

fn read_matrix(path: &Path, format: Option<FormatArg>) -> Result<BinMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let format = format.unwrap_or_else(|| {
        if path.extension().is_some_and(|e| e == "alist") {
            FormatArg::Alist
        } else {
            FormatArg::Dense
        }
    });
    let parsed = match format {
        FormatArg::Dense => parse_dense(&text),
        FormatArg::Alist => parse_alist(&text),
    };
    parsed.map_err(|e: IoError| CliError::input(format!("{}: {e}", path.display())))
}

fn load_bundle(source: &CodeSource, budget: &Budget) -> Result<CodeBundle, CliError> {
    if let Some(spec) = &source.family {
        return Ok(families::from_spec(spec, budget)?);
    }
    let (Some(a), Some(b)) = (&source.seed_a, &source.seed_b) else {
        return Err(CliError::input("provide either --family or both --seed-a and --seed-b"));
    };
    let seed_a = build_seed_checked(read_matrix(a, source.format)?)?;
    let seed_b = build_seed_checked(read_matrix(b, source.format)?)?;
    let code = build_hgp(seed_a, seed_b);
    let oracles = HgpOracles::tables(&code, budget)?;
    let id = format!("{}x{}", a.display(), b.display());
    Ok(CodeBundle { id, code, oracles })
}

fn build_seed_checked(h: BinMatrix) -> Result<SeedCode, CliError> {
    Ok(build_seed(h, true)?)
}

fn write_or_print(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_build(args: &BuildArgs) -> Result<(), CliError> {
    let budget = budget_from_env();
    let bundle = load_bundle(&args.source, &budget)?;
    let code = &bundle.code;
    let fmt_d = |d: Option<reshape_core::Distance>| d.map_or("?".to_string(), |d| d.to_string());
    println!(
        "[[{}, {}, {}, {}]]",
        code.n(),
        code.k(),
        fmt_d(code.d_x()),
        fmt_d(code.d_z())
    );
    let (zl, zr) = code.logical_z_counts();
    println!("logical Z generators: {zl} left + {zr} right");
    if let Some(out) = &args.out {
        let summary = code.summary(bundle.id.clone());
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        fs::write(out, json).map_err(|e| CliError::input(format!("{}: {e}", out.display())))?;
        println!("summary written to {}", out.display());
    }
    Ok(())
}

/// Print each classical oracle call a Z-decode of `start` performs: the
/// nonzero logical columns and rows of the canonical form and their decoded
/// kernel answers.
fn print_z_trace(bundle: &CodeBundle, start: &reshape_core::OpPair) {
    let code = &bundle.code;
    let cl = canonical_left(code, &start.left);
    for j in 0..cl.logical.cols() {
        let col = cl.logical.column(j);
        if !col.is_zero() {
            println!("  left column {j}: {col} -> {}", bundle.oracles.a.nearest_codeword(&col));
        }
    }
    let cr = canonical_right(code, &start.right);
    for i in 0..cr.logical.rows() {
        let row = cr.logical.row_vector(i);
        if !row.is_zero() {
            println!("  right row {i}: {row} -> {}", bundle.oracles.bt.nearest_codeword(&row));
        }
    }
}

fn cmd_decode(args: &DecodeArgs) -> Result<(), CliError> {
    let budget = budget_from_env();
    let bundle = load_bundle(&args.source, &budget)?;
    let code = &bundle.code;
    let species: Species = args.species.into();

    let (syndrome, truth) = if let Some(err_path) = &args.error {
        let text = fs::read_to_string(err_path)
            .map_err(|e| CliError::input(format!("{}: {e}", err_path.display())))?;
        let e = parse_bit_line(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", err_path.display())))?;
        if e.len() != code.n() {
            return Err(CliError::input(format!(
                "{}: error has {} entries, code has {} qubits",
                err_path.display(),
                e.len(),
                code.n()
            )));
        }
        let op = code.reshape(&e, species);
        let s = match species {
            Species::Z => code.syndrome_z(&op),
            Species::X => code.syndrome_x(&op),
        };
        (s, Some(op))
    } else if let Some(syn_path) = &args.syndrome {
        let m = read_matrix(syn_path, Some(FormatArg::Dense))?;
        let want = match species {
            Species::Z => (code.m_a(), code.n_b()),
            Species::X => (code.n_a(), code.m_b()),
        };
        if (m.rows(), m.cols()) != want {
            return Err(CliError::input(format!(
                "{}: syndrome is {}x{}, expected {}x{}",
                syn_path.display(),
                m.rows(),
                m.cols(),
                want.0,
                want.1
            )));
        }
        (m, None)
    } else {
        return Err(CliError::input("provide --error or --syndrome"));
    };

    // A supplied error is itself a valid solution of its syndrome and is
    // used as the starting operator; syndrome-only decoding derives one.
    let start = match (&truth, species) {
        (Some(op), _) => op.clone(),
        (None, Species::Z) => find_valid_solution_z(code, &syndrome)?,
        (None, Species::X) => find_valid_solution_x(code, &syndrome)?,
    };
    let result: DecodeResult = match species {
        Species::Z => decode_z(code, &bundle.oracles.a, &bundle.oracles.bt, &syndrome, &start),
        Species::X => decode_x(code, &bundle.oracles.at, &bundle.oracles.b, &syndrome, &start),
    };
    if args.verbose && species == Species::Z {
        println!("split/decode trace:");
        print_z_trace(&bundle, &start);
    }

    let correction = &result.correction;
    let support: Vec<usize> = code.flatten(correction).iter_ones().collect();
    println!("correction weight: {}", correction.weight());
    println!("correction support (flat qubit indices): {support:?}");
    println!(
        "oracle calls: {} (A side), {} (B side)",
        result.oracle_calls_a, result.oracle_calls_b
    );
    let valid = match species {
        Species::Z => code.syndrome_z(correction) == syndrome,
        Species::X => code.syndrome_x(correction) == syndrome,
    };
    println!("valid: {valid}");
    if let Some(truth) = truth {
        let success = match species {
            Species::Z => code.homology_equal_z(correction, &truth),
            Species::X => code.homology_equal_x(correction, &truth),
        };
        println!("verdict: {}", if success { "success (homology class recovered)" } else { "logical failure" });
    }
    Ok(())
}

fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    let budget = budget_from_env();
    if args.trials == 0 {
        return Err(CliError::input("--trials must be at least 1"));
    }
    if args.p.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(CliError::input("noise rates must lie in [0, 1]"));
    }
    let bundle = load_bundle(&args.source, &budget)?;
    let species: Species = args.species.into();
    let results = monte_carlo(
        &bundle.code,
        &bundle.id,
        &bundle.oracles,
        species,
        &args.p,
        args.trials,
        args.seed,
        args.workers,
    );
    let csv = results_to_csv(&results);
    match &args.out {
        Some(path) => {
            use std::io::Write as _;
            // Append rows; write the header only when starting a new file.
            let existing = fs::metadata(path).map(|m| m.len()).unwrap_or(0);
            let mut file = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let body = if existing > 0 {
                csv.split_once('\n').map(|(_, rest)| rest).unwrap_or("")
            } else {
                csv.as_str()
            };
            file.write_all(body.as_bytes())
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            println!("{} rows appended to {}", results.len(), path.display());
        }
        None => print!("{csv}"),
    }
    if let Some(path) = &args.manifest {
        let manifest = RunManifest::new(
            &bundle.code,
            &bundle.id,
            species,
            args.seed,
            &args.p,
            args.trials,
            args.workers,
        );
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(path, json).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let outcomes = reshape_core::checks::run_all(args.workers, args.trials);
    let mut failed = 0;
    for o in &outcomes {
        println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} properties passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        return Err(CliError { code: 1, msg: format!("{failed} properties failed") });
    }
    Ok(())
}

fn cmd_gen_seed(args: &GenSeedArgs) -> Result<(), CliError> {
    if args.wc == 0 || args.wr == 0 || args.n == 0 {
        return Err(CliError::input("--wc, --wr and --n must be positive"));
    }
    if !(args.n * args.wc).is_multiple_of(args.wr) {
        return Err(CliError::input(format!(
            "no integer row count satisfies m*{} == {}*{}",
            args.wr, args.n, args.wc
        )));
    }
    let m = args.n * args.wc / args.wr;
    let h = reshape_core::classical::random_regular_check(args.wc, args.wr, m, args.n, args.seed)?;
    let text = match args.format {
        FormatArg::Dense => render_dense(&h),
        FormatArg::Alist => render_alist(&h),
    };
    write_or_print(args.out.as_ref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Build(args) => cmd_build(args),
        Cmd::Decode(args) => cmd_decode(args),
        Cmd::Mc(args) => cmd_mc(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::GenSeed(args) => cmd_gen_seed(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
