//! Command-line front end: eliminate, decide, verify, and table
//! validation. Results go to standard output, diagnostics to standard
//! error. Exit codes: 0 success; 1 verification or validation found
//! disagreements; 2 bad input (syntax, malformed tables, decide on an
//! open formula); 3 degree/backend capability exceeded; 4 external
//! bridge failure.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::elim::{self, ElimError, Mode};
use crate::formula::{evaluate, fold_constants, parse_formula, print_formula, Formula};
use crate::poly::Rational;
use crate::qea::{self, validate_entry, BackendKind, Bridge, Engine, PointfreeEngine, QeError};
use crate::realalg::decide_exists_1d;
use crate::sample::random_rational;
use crate::vsubst::VsError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_BRIDGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "vsqe",
    about = "Real quantifier elimination by virtual substitution",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eliminate all quantifiers from a prenex formula.
    Qe(QeArgs),
    /// Decide a closed prenex sentence, printing true or false.
    Decide(QeArgs),
    /// Eliminate ∃x, then compare pointwise against the exact decision
    /// procedure at random parameter points.
    Verify(VerifyArgs),
    /// Validate every table entry against the exact backend on sampled
    /// coefficient vectors.
    TablesValidate(TablesValidateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Lower,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Lower => Mode::Lower,
        }
    }
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Input file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Elimination-set construction.
    #[arg(long, value_enum, default_value_t = ModeArg::Lower)]
    mode: ModeArg,
    /// Backend chain, e.g. `tables,pointfree` or `bridge:CMD`.
    #[arg(long, default_value = "tables,pointfree")]
    backend: String,
    /// Directory of *.tables files (else built-in tables are used).
    #[arg(long, env = "VSQE_TABLES")]
    tables: Option<PathBuf>,
    /// Framework degree cap; defaults to each variable's actual degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Fold constants in the printed result.
    #[arg(long)]
    fold: bool,
}

#[derive(Args, Debug)]
struct QeArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Random parameter points to compare at.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Random seed; identical seeds give identical runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rational magnitude bound for sampled points.
    #[arg(long, default_value_t = 20)]
    coeff_bound: i64,
}

#[derive(Args, Debug)]
struct TablesValidateArgs {
    /// Directory of *.tables files (else built-in tables are validated).
    #[arg(long, env = "VSQE_TABLES")]
    tables: Option<PathBuf>,
    /// Sampled coefficient vectors per entry.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Random seed; identical seeds give identical runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integer magnitude bound for sampled coefficients.
    #[arg(long, default_value_t = 20)]
    coeff_bound: i64,
}

/// Parse argv and run. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Clap prints its own help/version through this path.
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Qe(a) => cmd_qe(&a.common, false),
        Command::Decide(a) => cmd_qe(&a.common, true),
        Command::Verify(a) => cmd_verify(&a),
        Command::TablesValidate(a) => cmd_tables_validate(&a),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

/// Build the engine from the backend chain, tables dir, and built-ins.
fn build_engine(common: &CommonArgs) -> Result<Engine, (i32, String)> {
    let mut order = Vec::new();
    let mut bridge = None;
    for part in common.backend.split(',') {
        let part = part.trim();
        if part == "tables" {
            order.push(BackendKind::Tables);
        } else if part == "pointfree" {
            order.push(BackendKind::Pointfree);
        } else if let Some(cmd) = part.strip_prefix("bridge:") {
            order.push(BackendKind::Bridge);
            bridge = Some(Bridge::new(cmd));
        } else {
            return Err((
                EXIT_BAD_INPUT,
                format!("unknown backend `{part}` (expected tables, pointfree, or bridge:CMD)"),
            ));
        }
    }
    if order.is_empty() {
        return Err((EXIT_BAD_INPUT, "empty backend chain".to_string()));
    }
    let mut engine = if order.contains(&BackendKind::Tables) && common.tables.is_none() {
        Engine::with_builtin_tables(order)
    } else {
        Engine::new(order)
    };
    if let Some(dir) = &common.tables {
        let sets = qea::load_dir(dir).map_err(|e| (EXIT_BAD_INPUT, e.to_string()))?;
        engine.set_tables(sets);
    }
    if let Some(b) = bridge {
        engine.set_bridge(b);
    }
    Ok(engine)
}

fn exit_code_for(err: &ElimError) -> i32 {
    match err {
        ElimError::DegreeExceedsBound { .. }
        | ElimError::DegreeGrowthExceedsCapability { .. }
        | ElimError::Qe(QeError::NoBackendApplicable(_))
        | ElimError::Qe(QeError::UnsupportedDegree(_))
        | ElimError::Vs(VsError::DegreeExceedsBound { .. })
        | ElimError::Vs(VsError::Qe(QeError::NoBackendApplicable(_))) => EXIT_CAPABILITY,
        ElimError::Qe(QeError::BridgeFailure(_))
        | ElimError::Vs(VsError::Qe(QeError::BridgeFailure(_))) => EXIT_BRIDGE,
        ElimError::NotPrenex => EXIT_BAD_INPUT,
        _ => EXIT_BAD_INPUT,
    }
}

fn cmd_qe(common: &CommonArgs, decide: bool) -> i32 {
    let src = match read_input(&common.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let phi = match parse_formula(&src) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    if decide && !phi.variables().is_empty() {
        eprintln!(
            "error: decide requires a closed sentence; free variables: {}",
            phi.variables().into_iter().collect::<Vec<_>>().join(", ")
        );
        return EXIT_BAD_INPUT;
    }
    let engine = match build_engine(common) {
        Ok(e) => e,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let result = match elim::eliminate_block(&phi, common.degree, common.mode.into(), &engine) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let result = if common.fold || decide { fold_constants(&result) } else { result };
    if decide && !result.is_constant() {
        eprintln!("error: decision did not reduce to a constant");
        return EXIT_BAD_INPUT;
    }
    println!("{}", print_formula(&result));
    EXIT_OK
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let src = match read_input(&args.common.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let phi = match parse_formula(&src) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let Formula::Exists(var, matrix) = &phi else {
        eprintln!("error: verify expects a single existential (exists (x) ...)");
        return EXIT_BAD_INPUT;
    };
    if !matrix.is_quantifier_free() {
        eprintln!("error: verify expects exactly one quantifier");
        return EXIT_BAD_INPUT;
    }
    let engine = match build_engine(&args.common) {
        Ok(e) => e,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let matrix = match crate::formula::positive_form(matrix) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let n = match args.common.degree {
        Some(n) => n,
        None => match crate::formula::atoms(&matrix) {
            Ok(ats) => ats.iter().map(|a| a.poly.degree_in(var)).max().unwrap_or(1).max(1),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_BAD_INPUT;
            }
        },
    };
    let psi = match elim::eliminate_exists(&matrix, var, n, args.common.mode.into(), &engine) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };

    let params: Vec<String> = matrix.variables().into_iter().filter(|v| v != var).collect();
    let samples = if params.is_empty() { 1 } else { args.samples.max(1) };
    let mut rng = crate::sample::rng_from_seed(args.seed);
    let mut agree = 0usize;
    let mut counterexamples: Vec<BTreeMap<String, Rational>> = Vec::new();
    for _ in 0..samples {
        let point: BTreeMap<String, Rational> = params
            .iter()
            .map(|p| (p.clone(), random_rational(&mut rng, args.coeff_bound)))
            .collect();
        let eliminated = match evaluate(&psi, &point) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("error: evaluating eliminated formula: {e}");
                return EXIT_BAD_INPUT;
            }
        };
        let oracle = match decide_exists_1d(&matrix, var, &point) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("error: exact decision: {e}");
                return EXIT_BAD_INPUT;
            }
        };
        if eliminated == oracle {
            agree += 1;
        } else {
            counterexamples.push(point);
        }
    }
    println!("{agree}/{samples} agree");
    if counterexamples.is_empty() {
        EXIT_OK
    } else {
        counterexamples.sort();
        let smallest = &counterexamples[0];
        let rendered: Vec<String> =
            smallest.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        println!("counterexample: {}", rendered.join(", "));
        EXIT_DISAGREE
    }
}

fn cmd_tables_validate(args: &TablesValidateArgs) -> i32 {
    let sets = match &args.tables {
        Some(dir) => match qea::load_dir(dir) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_BAD_INPUT;
            }
        },
        None => {
            eprintln!("note: no tables directory given; validating built-in tables");
            let mut m = BTreeMap::new();
            for d in [1usize, 2] {
                let set = qea::build_table(d).expect("built-in degrees");
                m.insert(d, set);
            }
            m
        }
    };
    if sets.is_empty() {
        eprintln!("warning: no table files found");
        println!("0 entries");
        return EXIT_OK;
    }
    let pf = PointfreeEngine::new();
    let mut entries = 0usize;
    let mut failed = 0usize;
    let mut total_samples = 0usize;
    let mut total_disagreements = 0usize;
    for set in sets.values() {
        for (key, template) in set.entries() {
            entries += 1;
            let report = match validate_entry(
                set.degree,
                &key,
                template,
                args.samples,
                args.seed,
                args.coeff_bound,
                &pf,
            ) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: validating degree {} {key}: {e}", set.degree);
                    return EXIT_BAD_INPUT;
                }
            };
            total_samples += report.samples;
            total_disagreements += report.disagreements.len();
            if report.disagreements.is_empty() {
                println!("degree {} {key}: ok ({} samples)", set.degree, report.samples);
            } else {
                failed += 1;
                let d = &report.disagreements[0];
                println!(
                    "degree {} {key}: FAIL ({} of {} samples; first at p = {:?}, q = {:?}, table {} vs exact {})",
                    set.degree,
                    report.disagreements.len(),
                    report.samples,
                    d.p_coeffs,
                    d.q_coeffs,
                    d.table_says,
                    d.direct_says,
                );
            }
        }
    }
    println!(
        "{entries} entries, {total_disagreements}/{total_samples} sample disagreements"
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    }
}
