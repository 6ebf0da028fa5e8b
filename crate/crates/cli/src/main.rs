//! `lgmf`: build and verify matrix factorizations from toric fan files.
//!
//! Exit codes: 0 when every verification passes, 1 on a verification
//! failure, 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lgmf_core::builder::{all_vectors, oracle_sweep, random_vector, tilde_d_coefficients, wedge_contraction};
use lgmf_core::critical::{generator_at_point, solve_critical_points, SolverConfig};
use lgmf_core::exterior::mf_verify_with;
use lgmf_core::quantum::{apply_quantum_basis, only_wedge_contraction_positions, random_g, synthesize_d_minus3};
use lgmf_core::report::{timed, Counterexample, VerificationReport};
use lgmf_core::{build_potential, zoo, LaurentPoly, MfFailure, RingContext, Strategy, ToricFanoData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "lgmf", version, about = "Matrix factorizations of toric Landau-Ginzburg potentials")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print verification reports as JSON instead of one line each.
    #[arg(long, global = true)]
    json: bool,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print W and the ray coefficients of a fan.
    Potential { fan: PathBuf },
    /// Build or verify factorizations.
    Mf {
        #[command(subcommand)]
        command: MfCommand,
    },
    /// Critical points of W on the torus.
    Crit {
        fan: PathBuf,
        #[arg(long, default_value_t = (-1.0f64).exp())]
        t: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Generators R at each critical point, checked numerically.
    Generators {
        fan: PathBuf,
        #[arg(long, default_value_t = (-1.0f64).exp())]
        t: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Randomized and exhaustive oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Dimension-four basis change for a given or random g.
    Quantum4 {
        fan: PathBuf,
        /// g in canonical text, e.g. `z1*u2 - 1/2*T`.
        #[arg(long)]
        g: Option<String>,
    },
    /// Example fans.
    Fan {
        #[command(subcommand)]
        command: FanCommand,
    },
}

#[derive(Subcommand)]
enum MfCommand {
    /// Build the wedge-contraction factorization and print it.
    Build {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Output::Pretty)]
        out: Output,
    },
    /// Build and verify without printing the matrix.
    Verify { fan: PathBuf },
    /// A named example factorization.
    Preset {
        name: String,
        #[arg(long, value_enum, default_value_t = Output::Pretty)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Telescoping identity and closed-form/enumeration agreement.
    Telescope {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: i32,
        /// Random vectors instead of the exhaustive box.
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Subcommand)]
enum FanCommand {
    /// Print a preset fan as JSON.
    Preset { name: String },
    /// List preset names.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

/// A usage or input problem (exit 2), as opposed to a failed check (exit 1).
#[derive(Debug)]
struct InputError(String);

fn input<E: Into<anyhow::Error>>(e: E) -> anyhow::Error {
    anyhow::Error::new(InputError(format!("{:#}", e.into())))
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

struct Ctx {
    seed: u64,
    json: bool,
    strategy: Strategy,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let ctx = Ctx {
        seed: cli.seed,
        json: cli.json,
        strategy: if cli.sequential { Strategy::Sequential } else { Strategy::default() },
    };
    match run(&ctx, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<InputError>().is_some() { 2 } else { 1 })
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads() {
    if let Some(n) = std::env::var("LGMF_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() {}

fn load_fan(path: &Path) -> Result<ToricFanoData> {
    if !path.exists() {
        return Err(input(anyhow!("cannot read fan file {}", path.display())));
    }
    ToricFanoData::from_path(path)
        .map_err(|e| input(anyhow!(e)))
        .with_context(|| format!("loading {}", path.display()))
}

fn emit(ctx: &Ctx, mut reports: Vec<VerificationReport>) -> Result<bool> {
    reports.sort_by(|a, b| a.subject.cmp(&b.subject));
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            println!("{}", r.summary_line());
        }
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn mf_report(subject: &str, result: &std::result::Result<LaurentPoly, MfFailure>, elapsed: std::time::Duration) -> VerificationReport {
    match result {
        Ok(lambda) => VerificationReport::pass(subject, Some(lambda), elapsed),
        Err(f) => VerificationReport::from_mf_failure(subject, f, elapsed),
    }
}

fn subject_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "fan".into())
}

fn run(ctx: &Ctx, command: Command) -> Result<bool> {
    match command {
        Command::Potential { fan } => {
            let fan = load_fan(&fan)?;
            let pot = build_potential(&fan);
            println!("W = {}", pot.w);
            for (i, c) in pot.c.iter().enumerate() {
                println!("c{} = {}  (v = {:?})", i + 1, LaurentPoly::constant(pot.ctx(), c.clone()), fan.ray(i));
            }
            if fan.was_normalized() {
                println!("note: lattice basis changed so the first n rays are the standard basis");
            }
            Ok(true)
        }
        Command::Mf { command } => run_mf(ctx, command),
        Command::Crit { fan, t, tol } => {
            let fan = load_fan(&fan)?;
            let pot = build_potential(&fan);
            let config = SolverConfig {
                tol,
                strategy: ctx.strategy,
                ..SolverConfig::default()
            };
            let solve = solve_critical_points(&pot, t, &config)?;
            println!("{} critical points from {} starts (T = {t})", solve.points.len(), solve.starts);
            for (i, p) in solve.points.iter().enumerate() {
                let coords: Vec<String> = p.point.iter().map(|c| format!("{:.12}{:+.12}i", c.re, c.im)).collect();
                println!(
                    "  [{}] z = ({})  W = {:.12}{:+.12}i  residual = {:.1e}",
                    i + 1,
                    coords.join(", "),
                    p.value.re,
                    p.value.im,
                    p.residual
                );
            }
            if solve.singular_starts > 0 {
                println!("note: {} starts hit a singular Jacobian (possible degenerate critical points)", solve.singular_starts);
            }
            println!(
                "critical values {}",
                if solve.values_distinct(1e-9) { "are distinct" } else { "coincide" }
            );
            Ok(true)
        }
        Command::Generators { fan, t, tol } => {
            let name = subject_of(&fan);
            let fan = load_fan(&fan)?;
            let pot = build_potential(&fan);
            let config = SolverConfig {
                strategy: ctx.strategy,
                ..SolverConfig::default()
            };
            let solve = solve_critical_points(&pot, t, &config)?;
            println!("seed: {}", ctx.seed);
            let mut reports = Vec::new();
            for (i, p) in solve.points.iter().enumerate() {
                let (g, elapsed) = timed(|| generator_at_point(&fan, &pot, p, t, 20, ctx.seed));
                let g = g?;
                let subject = format!("{name}/R{}", i + 1);
                let lambda = format!("{:.12}{:+.12}i", g.lambda.re, g.lambda.im);
                let mut r = if g.max_error <= tol {
                    VerificationReport::pass(&subject, None, elapsed)
                } else {
                    VerificationReport::fail(
                        &subject,
                        format!("max error {:e} exceeds {tol:e}", g.max_error),
                        Counterexample {
                            row: "*".into(),
                            col: "*".into(),
                            difference: format!("{:e}", g.max_error),
                        },
                        elapsed,
                    )
                };
                r.lambda = Some(lambda);
                reports.push(r);
            }
            emit(ctx, reports)
        }
        Command::Oracle {
            command: OracleCommand::Telescope { n, max_entry, count },
        } => {
            if n == 0 || n > 12 || max_entry < 1 {
                return Err(input(anyhow!("need 1 <= n <= 12 and max-entry >= 1")));
            }
            let vectors = match count {
                None => all_vectors(n, max_entry),
                Some(count) => {
                    println!("seed: {}", ctx.seed);
                    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
                    (0..count).map(|_| random_vector(&mut rng, n, max_entry)).collect()
                }
            };
            let total = vectors.len();
            let (outcomes, elapsed) = timed(|| oracle_sweep(vectors, ctx.strategy));
            let subject = format!("telescope n={n} max-entry={max_entry}");
            let report = match outcomes.iter().find(|o| !o.passed()) {
                None => {
                    let mut r = VerificationReport::pass(&subject, None, elapsed);
                    r.message = Some(format!("{total} vectors"));
                    r
                }
                Some(o) => VerificationReport::fail(
                    &subject,
                    format!(
                        "v = {:?}: telescopes = {}, methods agree = {}",
                        o.v, o.telescopes, o.methods_agree
                    ),
                    Counterexample {
                        row: format!("{:?}", o.v),
                        col: "-".into(),
                        difference: "see message".into(),
                    },
                    elapsed,
                ),
            };
            if !ctx.json && report.pass {
                println!("{total} vectors checked");
            }
            emit(ctx, vec![report])
        }
        Command::Quantum4 { fan, g } => {
            let name = subject_of(&fan);
            let fan = load_fan(&fan)?;
            if fan.n() != 4 {
                return Err(input(anyhow!("quantum4 needs a 4-dimensional fan, got n = {}", fan.n())));
            }
            let pot = build_potential(&fan);
            let ring = RingContext::rational(4);
            let g = match g {
                Some(text) => LaurentPoly::parse(ring, &text).map_err(input)?,
                None => {
                    println!("seed: {}", ctx.seed);
                    random_g(&mut ChaCha8Rng::seed_from_u64(ctx.seed), ring, 3, 2)
                }
            };
            println!("g = {g}");
            let (x, w) = tilde_d_coefficients(&fan, &pot, ctx.strategy);
            let start = Instant::now();
            let full = wedge_contraction(&x, &w).try_add(&synthesize_d_minus3(&g)?)?;
            let verified = mf_verify_with(&full, &pot.w, ctx.strategy);
            let mut reports = vec![mf_report(&format!("{name}/d1+d-1+d-3"), &verified, start.elapsed())];
            let start = Instant::now();
            let changed = apply_quantum_basis(&full, &g, &pot.w);
            reports.push(match changed {
                Ok(out) if only_wedge_contraction_positions(&out.new_d) => {
                    VerificationReport::pass(format!("{name}/new basis"), Some(&out.lambda), start.elapsed())
                }
                Ok(_) => VerificationReport::fail(
                    format!("{name}/new basis"),
                    "entries outside wedge/contraction positions".into(),
                    Counterexample {
                        row: "*".into(),
                        col: "*".into(),
                        difference: "shape".into(),
                    },
                    start.elapsed(),
                ),
                Err(e) => VerificationReport::fail(
                    format!("{name}/new basis"),
                    e.to_string(),
                    Counterexample {
                        row: "*".into(),
                        col: "*".into(),
                        difference: e.to_string(),
                    },
                    start.elapsed(),
                ),
            });
            emit(ctx, reports)
        }
        Command::Fan { command } => match command {
            FanCommand::Preset { name } => {
                let fan = ToricFanoData::preset(&name).map_err(input)?;
                println!("{}", fan.to_json());
                Ok(true)
            }
            FanCommand::List => {
                for name in ToricFanoData::PRESETS {
                    println!("{name}");
                }
                Ok(true)
            }
        },
    }
}

fn run_mf(ctx: &Ctx, command: MfCommand) -> Result<bool> {
    match command {
        MfCommand::Build { fan, out } => {
            let name = subject_of(&fan);
            let fan = load_fan(&fan)?;
            let pot = build_potential(&fan);
            let (x, w) = tilde_d_coefficients(&fan, &pot, ctx.strategy);
            let endo = wedge_contraction(&x, &w);
            let (result, elapsed) = timed(|| check_lambda(&endo, &pot, ctx.strategy));
            match out {
                Output::Json => {
                    println!("{}", endo.to_json());
                    let report = mf_report(&name, &result, elapsed);
                    eprintln!("{}", report.summary_line());
                    Ok(report.pass)
                }
                Output::Pretty => {
                    println!("W = {}", pot.w);
                    print!("{}", endo.pretty());
                    emit(ctx, vec![mf_report(&name, &result, elapsed)])
                }
            }
        }
        MfCommand::Verify { fan } => {
            let name = subject_of(&fan);
            let fan = load_fan(&fan)?;
            let pot = build_potential(&fan);
            let (x, w) = tilde_d_coefficients(&fan, &pot, ctx.strategy);
            let endo = wedge_contraction(&x, &w);
            let (result, elapsed) = timed(|| check_lambda(&endo, &pot, ctx.strategy));
            emit(ctx, vec![mf_report(&name, &result, elapsed)])
        }
        MfCommand::Preset { name, out } => {
            let (result, elapsed) = timed(|| zoo::preset(&name));
            let Some(result) = result else {
                return Err(input(anyhow!(
                    "unknown preset `{name}`; available: {}",
                    zoo::PRESETS.join(", ")
                )));
            };
            let mf = match result {
                Ok(mf) => mf,
                Err(e) => {
                    let report = match &e {
                        zoo::ZooError::Verification(f) => VerificationReport::from_mf_failure(&name, f, elapsed),
                        other => VerificationReport::fail(
                            &name,
                            other.to_string(),
                            Counterexample {
                                row: "*".into(),
                                col: "*".into(),
                                difference: other.to_string(),
                            },
                            elapsed,
                        ),
                    };
                    return emit(ctx, vec![report]);
                }
            };
            match out {
                Output::Json => {
                    println!("{}", mf.endo.to_json());
                    eprintln!("{}", VerificationReport::pass(&name, Some(&mf.lambda), elapsed).summary_line());
                    Ok(true)
                }
                Output::Pretty => {
                    println!("W = {}", mf.potential);
                    match zoo::preset_labels(&name) {
                        Some((order, labels)) => print!("{}", mf.endo.pretty_with(&order, &labels)),
                        None => print!("{}", mf.endo.pretty()),
                    }
                    emit(ctx, vec![VerificationReport::pass(&name, Some(&mf.lambda), elapsed)])
                }
            }
        }
    }
}

/// `mf_verify` plus the requirement `λ = W(z̲)`.
fn check_lambda(
    endo: &lgmf_core::Endomorphism,
    pot: &lgmf_core::PotentialW,
    strategy: Strategy,
) -> std::result::Result<LaurentPoly, MfFailure> {
    let lambda = mf_verify_with(endo, &pot.w, strategy)?;
    let expected = pot.w_at_zbar();
    if lambda != expected {
        return Err(MfFailure::LambdaNotZFree {
            scalar: &pot.w - &lambda,
            lambda,
        });
    }
    Ok(lambda)
}
