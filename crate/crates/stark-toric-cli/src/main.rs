//! Command-line interface: build a system from a spec file, run the
//! analysis pipeline, and emit verdict reports and machine-readable curves.
//!
//! Exit codes: 0 for any rendered verdict (including indeterminate),
//! 1 for audit failures, 2 for invalid input or non-separable systems,
//! 3 when no bounded component exists, 4 for numeric failures.

mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stark_toric::{
    ck_table, classify_energy, dk_positivity, fd_derivative_audit, identity_audit, mc_area,
    separate, verdict, ActionError, CurveOptions, EnergyClass, HalfSystem,
    QuadratureOptions, SignClass, SystemError, UnivariatePoly, VerdictError, VerdictOptions,
    MAX_N,
};

use output::{coeffs_to_json, coeffs_to_text, curve_to_csv, curve_to_json};
use spec::SystemSpec;

const EXIT_AUDIT_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_NO_BOUNDED_COMPONENT: u8 = 3;
const EXIT_NUMERIC_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(name = "stark-toric", version, about = "Concave/convex toric domain analysis of planar Stark-type systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficient table C_k, the certificate sequence d_k and the D_k positivity scan
    Coeffs(CoeffsArgs),
    /// Analyze a system spec file; optionally write the sampled moment-map curve
    Analyze(AnalyzeArgs),
    /// Analyze and write the sampled curve (analyze with --out required)
    Curve(CurveArgs),
    /// Run the built-in validation oracles
    Audit(AuditArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    /// Family index, 1 <= n <= 64
    #[arg(long)]
    n: u32,
    /// Emit a structured JSON document instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct AnalyzeArgs {
    /// Path to the JSON system spec
    spec: PathBuf,
    /// Number of curve samples
    #[arg(long, default_value_t = 65)]
    samples: usize,
    /// Write the sampled curve to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Curve file format
    #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
    format: CurveFormat,
    /// Energy-window and barrier margin (fraction)
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
    /// Absolute curvature band treated as flat
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (results are identical for any value)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    analyze: AnalyzeArgs,
}

#[derive(Args)]
struct AuditArgs {
    /// Largest family index for the identity audit
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    /// Monte Carlo sample count per area check
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: u64,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (results are identical for any value)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Coeffs(args) => cmd_coeffs(&args),
        Command::Analyze(args) => cmd_analyze(&args, false),
        Command::Curve(args) => cmd_analyze(&args.analyze, true),
        Command::Audit(args) => cmd_audit(&args),
    }
}

fn configure_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn invalid(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID_INPUT)
}

fn cmd_coeffs(args: &CoeffsArgs) -> ExitCode {
    let table = match ck_table(args.n) {
        Ok(t) => t,
        Err(e) => return invalid(&e.to_string()),
    };
    let pos = dk_positivity(&table);
    if args.json {
        print!("{}", coeffs_to_json(&table, &pos));
    } else {
        print!("{}", coeffs_to_text(&table, &pos));
    }
    ExitCode::SUCCESS
}

fn sign_symbol(s: SignClass) -> &'static str {
    match s {
        SignClass::Positive => "> 0",
        SignClass::Negative => "< 0",
        SignClass::Zero => "= 0",
        SignClass::Mixed => "mixed",
    }
}

fn cmd_analyze(args: &AnalyzeArgs, require_out: bool) -> ExitCode {
    if require_out && args.out.is_none() {
        return invalid("the curve subcommand requires --out");
    }
    if args.samples < 2 {
        return invalid("--samples must be at least 2");
    }
    if !(args.margin > 0.0 && args.margin < 0.5) {
        return invalid("--margin must lie in (0, 1/2)");
    }
    if !(args.tolerance >= 0.0 && args.tolerance.is_finite()) {
        return invalid("--tolerance must be a finite nonnegative number");
    }
    configure_threads(args.threads);

    let spec = match SystemSpec::load(&args.spec) {
        Ok(s) => s,
        Err(e) => return invalid(&e),
    };
    let pot = match spec.to_potential() {
        Ok(p) => p,
        Err(e) => return invalid(&e),
    };
    let sys = match separate(&pot, spec.f) {
        Ok(s) => s,
        Err(e @ SystemError::NotSeparable(_)) => return invalid(&e.to_string()),
        Err(e) => return invalid(&e.to_string()),
    };

    println!("system: {}", pot.kind);
    match (pot.g_f64(), spec.n) {
        (Some(g), Some(n)) => println!("parameters: m = {}, g = {g}, n = {n}, f = {}", spec.m, spec.f),
        (Some(g), None) => println!("parameters: m = {}, g = {g}, f = {}", spec.m, spec.f),
        _ => println!("parameters: m = {}, f = {}", spec.m, spec.f),
    }
    println!("separated halves (kappa = 1/2, level m = {}):", spec.m);
    println!("  V1(u) = {}", sys.v1);
    println!("  V2(u) = {}", sys.v2);

    let class = classify_energy(&sys, &pot);
    println!("energy class: {class}");
    if let Some(n) = pot.family_index() {
        if let Some(g) = pot.g_f64() {
            if g > 0.0 {
                if let Ok(cd) = stark_toric::critical_values(n, pot.m_f64(), g) {
                    println!("critical values: E1 = {:.16e}, E2 = {:.16e}", cd.e1, cd.e2);
                }
            }
        }
    }
    if class == EnergyClass::AboveFirstCritical {
        eprintln!("error: no bounded component: energy above first critical value (-f <= E1)");
        return ExitCode::from(EXIT_NO_BOUNDED_COMPONENT);
    }

    let opts = VerdictOptions {
        curve: CurveOptions {
            samples: args.samples,
            endpoint_margin: args.margin,
            barrier_margin: args.margin,
            quadrature: QuadratureOptions::default(),
            tol_zero: args.tolerance,
        },
        curve_fallback: true,
        always_curve: args.out.is_some(),
    };
    let outcome = match verdict(&sys, &opts) {
        Ok(o) => o,
        Err(e @ VerdictError::NoBoundedComponent { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NO_BOUNDED_COMPONENT);
        }
        Err(e @ VerdictError::NotStarShaped { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERIC_FAILURE);
        }
        Err(VerdictError::Action { half, source }) => {
            match source {
                ActionError::Barrier(b) => {
                    eprintln!("error: half-system {half}: {b}");
                }
                other => eprintln!("error: half-system {half}: {other}"),
            }
            return ExitCode::from(EXIT_NUMERIC_FAILURE);
        }
    };

    println!("criterion 3 sign table (per half, over the swept range):");
    for (i, h) in outcome.verdict.criterion3.halves.iter().enumerate() {
        println!(
            "  half {}: V' {}, V'' {}  (0 < u <= {:.6e})",
            i + 1,
            sign_symbol(h.v_prime),
            sign_symbol(h.v_double_prime),
            h.u_max
        );
    }
    if let Some(curve) = &outcome.curve {
        let slope_min = curve.samples.iter().map(|s| s.slope).fold(f64::INFINITY, f64::min);
        let slope_max = curve.samples.iter().map(|s| s.slope).fold(f64::NEG_INFINITY, f64::max);
        println!(
            "curve: {} samples over a in [{:.6e}, {:.6e}], slope in [{:.6e}, {:.6e}]",
            curve.samples.len(),
            curve.samples.first().map(|s| s.a).unwrap_or(f64::NAN),
            curve.samples.last().map(|s| s.a).unwrap_or(f64::NAN),
            slope_min,
            slope_max
        );
    }
    if let Some(ev) = &outcome.verdict.curvature {
        println!(
            "curvature signs: {} negative, {} positive, {} flat (band {:.1e}), range [{:.6e}, {:.6e}]",
            ev.negative, ev.positive, ev.flat, ev.tol_zero, ev.min, ev.max
        );
    }
    for note in &outcome.verdict.notes {
        println!("note: {note}");
    }
    println!("verdict: {} ({})", outcome.verdict.kind, outcome.verdict.method);

    if let (Some(path), Some(curve)) = (&args.out, &outcome.curve) {
        let contents = match args.format {
            CurveFormat::Csv => curve_to_csv(curve),
            CurveFormat::Json => curve_to_json(&spec, curve, &outcome.verdict),
        };
        if let Err(e) = std::fs::write(path, contents) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_NUMERIC_FAILURE);
        }
        println!("curve written to {}", path.display());
    }
    ExitCode::SUCCESS
}

fn cmd_audit(args: &AuditArgs) -> ExitCode {
    configure_threads(args.threads);
    if args.n_max < 1 || args.n_max > MAX_N {
        return invalid(&format!("--n-max must satisfy 1 <= n <= {MAX_N}, got {}", args.n_max));
    }
    if args.mc_samples < 1000 {
        return invalid("--mc-samples must be at least 1000");
    }
    let mut failed = false;

    match identity_audit(args.n_max) {
        Ok(report) => {
            if report.passed() {
                println!(
                    "identity audit: n = 1..={} all coefficient tables match the brute-force solve",
                    args.n_max
                );
            } else {
                failed = true;
                println!("identity audit: FAILED");
                for m in &report.mismatches {
                    println!("  {m}");
                }
            }
        }
        Err(e) => return invalid(&e.to_string()),
    }

    let harmonic = HalfSystem::from_coeffs(0.5, vec![0.0, 0.5], f64::INFINITY, None);
    let frozen =
        HalfSystem::from_potential(0.5, &UnivariatePoly::from_integers(&[0, 2, 0, -1]))
            .expect("reference potential has a barrier");

    for (name, h, grid) in [
        ("harmonic f=1/2", &harmonic, vec![0.5, 1.0, 2.0]),
        (
            "frozen-hill f=2 g=1",
            &frozen,
            (1..=9).map(|k| 0.1 * k as f64 * frozen.a_max).collect(),
        ),
    ] {
        let audit = fd_derivative_audit(h, &grid, 1e-5);
        let ok = audit.failures.is_empty() && audit.max_error() <= 1e-6;
        failed |= !ok;
        println!(
            "derivative audit ({name}): max rel err A'={:.3e} A''={:.3e} I'={:.3e} I''={:.3e} [{}]",
            audit.max_rel_a1,
            audit.max_rel_a2,
            audit.max_rel_i1,
            audit.max_rel_i2,
            if ok { "ok" } else { "FAILED" }
        );
        for f in &audit.failures {
            println!("  failure: {f}");
        }
    }

    for (name, h, a) in [("harmonic f=1/2", &harmonic, 1.0), ("frozen-hill f=2 g=1", &frozen, 0.5)]
    {
        match (stark_toric::action(h, a), mc_area(h, a, args.mc_samples, args.seed)) {
            (Ok(act), Ok(est)) => {
                let expected = std::f64::consts::TAU * act.i;
                let sigmas = if est.stderr > 0.0 {
                    (est.value - expected).abs() / est.stderr
                } else {
                    f64::INFINITY
                };
                let ok = sigmas <= 3.0;
                failed |= !ok;
                println!(
                    "mc area ({name}, a={a}): mc={:.8e} 2*pi*I={:.8e} deviation={:.2} sigma [{}]",
                    est.value,
                    expected,
                    sigmas,
                    if ok { "ok" } else { "FAILED" }
                );
            }
            (Err(e), _) => {
                failed = true;
                println!("mc area ({name}): action failed: {e}");
            }
            (_, Err(e)) => {
                failed = true;
                println!("mc area ({name}): {e}");
            }
        }
    }

    if failed {
        println!("audit: FAIL");
        ExitCode::from(EXIT_AUDIT_FAILED)
    } else {
        println!("audit: PASS");
        ExitCode::SUCCESS
    }
}
