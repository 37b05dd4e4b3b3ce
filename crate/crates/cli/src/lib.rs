//! Command-line front end for `torelli-calc`.
//!
//! [`run`] parses an argument list, dispatches to the core library and
//! returns the exit status with the text destined for stdout and stderr.
//! Exit codes: 0 success, 1 negative verdict (or a stuck reduction),
//! 2 usage or precondition error, 3 computation error.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torelli_core::casson::{casson_manifold, casson_surgery, CassonError};
use torelli_core::certify::{self, Certificate, CertifyError, DEFAULT_MAX_N};
use torelli_core::dfloer::{d_surgery, DError, DValue, Sign};
use torelli_core::knots::{alexander, seifert_genus, v_invariant, KnotError};
use torelli_core::manifold::{format_unit_fraction, parse_unit_fraction, ManifoldExpr};
use torelli_core::surgery::{integerize, reduce, ReduceOutcome, SurgeryError, SurgeryPresentation};
use torelli_core::torelli::{
    assemble_with, bfp_bound, conjugate_invariance_check, generator_defect_bound,
    nonsep_example, norm_lower_bound_from_d, surgery_bound, word_bound, word_norm, Generator,
    TorelliError, TorelliWord,
};
use torelli_core::{selftest, KnotSpec, Poly, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

/// Environment variable seeding `selftest`.
pub const SEED_VAR: &str = "TORELLI_CALC_SEED";

#[derive(Debug, Parser)]
#[command(name = "torelli-calc", version, about = "Exact invariants of integer homology spheres and Torelli surgery")]
struct Cli {
    /// Emit key-sorted JSON with numbers as strings.
    #[arg(long, global = true)]
    json: bool,
    /// Permit nonseparating twists in words.
    #[arg(long, global = true)]
    allow_nontorelli: bool,
    /// Largest link size for the finite-type certificate.
    #[arg(long, global = true, value_name = "INT")]
    max_n: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alexander polynomial and Seifert genus of a catalog knot.
    Alex { knot: String },
    /// Casson invariant of 1/n surgery on a knot.
    Casson {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        coeff: String,
    },
    /// Casson invariant of a manifold expression.
    CassonExpr {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// d-invariant of ±1/n surgery on a knot.
    Dinv {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        coeff: String,
    },
    /// d-invariant bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Surgery presentation of a word.
    Assemble {
        word: String,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, default_value = "S3", allow_hyphen_values = true)]
        base: String,
    },
    /// Order of H_1 of a presentation file.
    Homology { file: PathBuf },
    /// Reduce a presentation file to a manifold expression.
    Reduce { file: PathBuf },
    /// Trade rational coefficients for integer framings and earrings.
    Integerize { file: PathBuf },
    /// Emit a certificate.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Randomized property checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Norm, per-letter bounds and the word bound of a word.
    Word {
        word: String,
        #[arg(long)]
        genus: Option<u32>,
    },
    /// Defect bound of one generator.
    Generator { generator: String },
    /// 2|n| ceil(g/2) for 1/n surgery on a knot.
    Surgery {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Lower bound on the infinity norm from a d-invariant.
    NormFromD {
        #[arg(allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        genus: u32,
    },
    /// C ||phi||^2 for a supplied constant.
    Bfp { norm: u64, c: String },
    /// One nonseparating twist with d = -2k.
    Nonsep { k: u32 },
}

#[derive(Debug, Subcommand)]
enum CertifyCommand {
    Cayley {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        target: u64,
    },
    CassonUnbounded {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    NoMorita {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    NotFiniteType { n: u32 },
    /// Eq. d/chi identity for a connected sum of two manifolds.
    MoritaConsistency {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Overrides the seed from the environment.
    #[arg(long)]
    seed: Option<u64>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout: String::new(), stderr }
    }
}

/// Error with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

fn computation(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_COMPUTATION, msg: msg.into() }
}

impl From<KnotError> for Failure {
    fn from(e: KnotError) -> Self {
        match e {
            KnotError::Parse { .. } | KnotError::InvalidParameters(_) | KnotError::NotCoprime(..) => {
                usage(e.to_string())
            }
            other => computation(other.to_string()),
        }
    }
}

impl From<DError> for Failure {
    fn from(e: DError) -> Self {
        match e {
            DError::UnsupportedKnot(k) => k.into(),
            other => computation(other.to_string()),
        }
    }
}

impl From<CassonError> for Failure {
    fn from(e: CassonError) -> Self {
        computation(e.to_string())
    }
}

impl From<SurgeryError> for Failure {
    fn from(e: SurgeryError) -> Self {
        match e {
            SurgeryError::Parse(_) | SurgeryError::Invalid(_) => usage(e.to_string()),
            other => computation(other.to_string()),
        }
    }
}

impl From<TorelliError> for Failure {
    fn from(e: TorelliError) -> Self {
        match e {
            TorelliError::Knot(k) => k.into(),
            TorelliError::D(d) => d.into(),
            TorelliError::Surgery(s) => s.into(),
            other => usage(other.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::ZeroD | CertifyError::InvalidParameter(_) | CertifyError::NonAdditiveCasson { .. } => {
                usage(e.to_string())
            }
            CertifyError::Knot(k) => k.into(),
            CertifyError::D(d) => d.into(),
            CertifyError::Torelli(t) => t.into(),
            other => computation(other.to_string()),
        }
    }
}

fn parse_knot(s: &str) -> Result<KnotSpec, Failure> {
    Ok(s.parse::<KnotSpec>()?)
}

fn parse_coeff(s: &str) -> Result<i64, Failure> {
    parse_unit_fraction(s).ok_or_else(|| usage(format!("coefficient {s:?} is not of the form ±1/n with n >= 1")))
}

fn parse_expr(s: &str) -> Result<ManifoldExpr, Failure> {
    s.parse::<ManifoldExpr>().map_err(|e| usage(e.to_string()))
}

fn parse_word(s: &str, genus: Option<u32>) -> Result<TorelliWord, Failure> {
    Ok(TorelliWord::parse_with_genus(s, genus)?)
}

fn read_presentation(path: &PathBuf) -> Result<SurgeryPresentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(SurgeryPresentation::from_json_str(&text)?)
}

fn emit(json_mode: bool, value: Value, text: String) -> String {
    if json_mode {
        format!("{}\n", serde_json::to_string_pretty(&value).expect("values serialize"))
    } else if text.ends_with('\n') {
        text
    } else {
        format!("{text}\n")
    }
}

fn presentation_text(p: &SurgeryPresentation) -> String {
    let mut out = format!("base: {}\n", p.base);
    for c in p.components() {
        let links: Vec<String> = p
            .ids()
            .into_iter()
            .filter(|&o| o != c.id && p.linking(c.id, o) != 0.into())
            .map(|o| format!("{o}:{}", p.linking(c.id, o)))
            .collect();
        out.push_str(&format!(
            "{:>3}  {:<32} coeff {:<8} lk [{}]",
            c.id,
            c.curve.to_string(),
            c.coeff.to_string(),
            links.join(", ")
        ));
        if let Some(s) = &c.surface_framing {
            out.push_str(&format!(" s={s}"));
        }
        if let Some(a) = c.annulus_with {
            out.push_str(&format!(" annulus={a}"));
        }
        out.push('\n');
    }
    out
}

fn certificate_output(json_mode: bool, c: &Certificate) -> Outcome {
    let stdout = emit(json_mode, c.to_json_value(), c.to_string());
    Outcome { code: if c.verdict { EXIT_OK } else { EXIT_VERDICT_FALSE }, stdout, stderr: String::new() }
}

fn dispatch(cli: Cli, env_seed: Option<u64>) -> Result<Outcome, Failure> {
    let json_mode = cli.json;
    let out = |value: Value, text: String| Ok(Outcome::ok(emit(json_mode, value, text)));
    match cli.command {
        Command::Alex { knot } => {
            let k = parse_knot(&knot)?;
            let delta: Poly = alexander(&k);
            let g = seifert_genus(&k);
            out(
                json!({ "alexander": delta.to_string(), "genus": g.to_string(), "knot": k.to_string() }),
                format!("{delta}\ngenus {g}"),
            )
        }
        Command::Casson { knot, coeff } => {
            let k = parse_knot(&knot)?;
            let n = parse_coeff(&coeff)?;
            let lambda = casson_surgery(&k, n)?;
            out(json!({ "lambda": lambda.to_string() }), lambda.to_string())
        }
        Command::CassonExpr { expr } => {
            let e = parse_expr(&expr)?;
            let lambda = casson_manifold(&e)?;
            out(json!({ "lambda": lambda.to_string(), "manifold": e.to_string() }), lambda.to_string())
        }
        Command::Dinv { knot, coeff } => {
            let k = parse_knot(&knot)?;
            let n = parse_coeff(&coeff)?;
            let sign = Sign::of(n);
            let d = d_surgery(&k, sign, n.abs())?;
            let probe = if sign == Sign::Plus { k } else { k.mirrored() };
            let v0 = v_invariant(&probe, 0)?;
            out(
                json!({ "d": d.to_string(), "v0": v0.to_string() }),
                format!("{d}"),
            )
        }
        Command::Bounds(b) => bounds(json_mode, cli.allow_nontorelli, b),
        Command::Assemble { word, genus, base } => {
            let w = parse_word(&word, genus)?;
            let base = parse_expr(&base)?;
            let p = assemble_with(&w, base, cli.allow_nontorelli)?;
            let order = p.homology_order();
            let mut text = presentation_text(&p);
            text.push_str(&format!("|H_1| = {order}"));
            out(p.to_json(), text)
        }
        Command::Homology { file } => {
            let p = read_presentation(&file)?;
            let order = p.homology_order();
            out(json!({ "homology_order": order.to_string() }), order.to_string())
        }
        Command::Reduce { file } => {
            let p = read_presentation(&file)?;
            match reduce(&p)? {
                ReduceOutcome::Manifold { result, log } => out(
                    json!({ "log": log, "manifold": result.to_string(), "reduced": true }),
                    format!("{}\n{result}", log.join("\n")).trim_start().to_string(),
                ),
                ReduceOutcome::Stuck { remaining, reason, log } => {
                    let stdout = emit(
                        json_mode,
                        json!({ "log": log, "reason": reason, "reduced": false, "remaining": remaining.to_json() }),
                        format!("stuck: {reason}\n{}", presentation_text(&remaining)),
                    );
                    Ok(Outcome { code: EXIT_VERDICT_FALSE, stdout, stderr: String::new() })
                }
            }
        }
        Command::Integerize { file } => {
            let p = integerize(&read_presentation(&file)?);
            out(p.to_json(), presentation_text(&p))
        }
        Command::Certify(c) => {
            let cert = match c {
                CertifyCommand::Cayley { genus, target } => certify::cayley_diameter(genus, target)?,
                CertifyCommand::CassonUnbounded { n } => certify::casson_unbounded(n)?,
                CertifyCommand::NoMorita { d } => certify::no_morita(d)?,
                CertifyCommand::NotFiniteType { n } => {
                    certify::not_finite_type(n, cli.max_n.unwrap_or(DEFAULT_MAX_N))?
                }
                CertifyCommand::MoritaConsistency { a, b } => {
                    certify::morita_consistency_split(&parse_expr(&a)?, &parse_expr(&b)?)?
                }
            };
            Ok(certificate_output(json_mode, &cert))
        }
        Command::Selftest(args) => {
            let seed = args.seed.or(env_seed).unwrap_or(0);
            let report = selftest::run(seed, args.cases);
            let mut text = format!(
                "seed {seed}: {} checks over {} cases per suite, {} failures",
                report.checks,
                report.cases,
                report.failures.len()
            );
            for f in &report.failures {
                text.push_str(&format!("\n  {f}"));
            }
            let value = json!({
                "cases": report.cases.to_string(),
                "checks": report.checks.to_string(),
                "failures": report.failures,
                "passed": report.passed(),
                "seed": seed.to_string(),
            });
            let stdout = emit(json_mode, value, text);
            Ok(Outcome {
                code: if report.passed() { EXIT_OK } else { EXIT_VERDICT_FALSE },
                stdout,
                stderr: String::new(),
            })
        }
    }
}

fn bounds(json_mode: bool, allow_nontorelli: bool, b: BoundsCommand) -> Result<Outcome, Failure> {
    let out = |value: Value, text: String| Ok(Outcome::ok(emit(json_mode, value, text)));
    match b {
        BoundsCommand::Word { word, genus } => {
            let w = parse_word(&word, genus)?;
            w.validate()?;
            let mut gens: Vec<Generator> = Vec::new();
            for (g, _) in &w.letters {
                if !g.is_torelli() && !allow_nontorelli {
                    return Err(usage(format!("{g} is not a Torelli generator; pass --allow-nontorelli to inspect it")));
                }
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
            let norm = word_norm(&w);
            let mut letters = Vec::new();
            let mut text = format!("word {w}\nnorm {norm}\n");
            for g in &gens {
                let entry = match generator_defect_bound(g) {
                    Ok(b) => {
                        let refined = b.refined.map(|(lo, hi)| format!("[{lo}, {hi}]"));
                        text.push_str(&format!(
                            "  {g}: bound {}{}\n",
                            b.bound,
                            refined.as_ref().map(|r| format!(", refined {r}")).unwrap_or_default()
                        ));
                        json!({ "bound": b.bound.to_string(), "generator": g.to_string(), "refined": refined })
                    }
                    Err(_) => {
                        text.push_str(&format!("  {g}: no bound (not in the Torelli group)\n"));
                        json!({ "bound": null, "generator": g.to_string(), "refined": null })
                    }
                };
                letters.push(entry);
            }
            let wb = if gens.iter().all(Generator::is_torelli) {
                Some(word_bound(&w, &gens)?.to_string())
            } else {
                None
            };
            text.push_str(&format!("word bound {}", wb.clone().unwrap_or_else(|| "none".into())));
            let conj = conjugate_invariance_check(&w);
            out(
                json!({
                    "conjugation_invariant": conj.invariant,
                    "generators": letters,
                    "norm": norm.to_string(),
                    "word": w.to_string(),
                    "word_bound": wb,
                }),
                text,
            )
        }
        BoundsCommand::Generator { generator } => {
            let g: Generator = generator.parse()?;
            let b = generator_defect_bound(&g)?;
            let refined = b.refined.map(|(lo, hi)| format!("[{lo}, {hi}]"));
            out(
                json!({ "bound": b.bound.to_string(), "generator": g.to_string(), "refined": refined }),
                match &refined {
                    Some(r) => format!("{}\nrefined {r}", b.bound),
                    None => b.bound.to_string(),
                },
            )
        }
        BoundsCommand::Surgery { knot, n } => {
            let k = parse_knot(&knot)?;
            let g = seifert_genus(&k);
            let bound = surgery_bound(n, g);
            let mut value = json!({ "bound": bound.to_string(), "genus": g.to_string(), "knot": k.to_string() });
            let mut text = bound.to_string();
            if n != 0 {
                if let Ok(d) = d_surgery(&k, Sign::of(n), n.abs()) {
                    value["d"] = json!(d.to_string());
                    text.push_str(&format!("\nd(S3_{}({k})) = {d}", format_unit_fraction(n)));
                }
            }
            out(value, text)
        }
        BoundsCommand::NormFromD { d, genus } => {
            let dv = DValue::new(d)?;
            let bound = norm_lower_bound_from_d(dv, genus)?;
            out(json!({ "bound": bound.to_string() }), bound.to_string())
        }
        BoundsCommand::Bfp { norm, c } => {
            let c: Rational = c.parse().map_err(|_| usage(format!("{c:?} is not a rational number")))?;
            if c <= Rational::from_integer(0.into()) {
                return Err(usage("the constant must be positive"));
            }
            let v = bfp_bound(norm, &c);
            out(json!({ "bound": v.to_string() }), v.to_string())
        }
        BoundsCommand::Nonsep { k } => {
            let e = nonsep_example(k)?;
            out(
                json!({
                    "companion": e.companion.to_string(),
                    "d": e.d.to_string(),
                    "k": e.k.to_string(),
                    "manifold": e.manifold,
                    "meridional_wraps": e.meridional_wraps.to_string(),
                    "surface_framing": e.surface_framing.to_string(),
                    "word_norm": e.word_norm.to_string(),
                }),
                format!(
                    "C_{k}: {} with {} meridional wraps, surface framing {}\n{} has d = {}; one nonseparating twist",
                    e.companion, e.meridional_wraps, e.surface_framing, e.manifold, e.d
                ),
            )
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env_seed = std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok());
    run_with_seed(args, env_seed)
}

pub fn run_with_seed<I, S>(args: I, env_seed: Option<u64>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let first = rendered.lines().next().unwrap_or("usage error").to_string();
                Outcome::fail(EXIT_USAGE, first)
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    match dispatch(cli, env_seed) {
        Ok(o) => o,
        Err(f) => Outcome::fail(f.code, format!("error: {}", f.msg.lines().next().unwrap_or_default())),
    }
}
