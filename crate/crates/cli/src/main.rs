use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tatezeta::arith::parse_rational;
use tatezeta::characters::{Character, LambdaParam};
use tatezeta::fourier::{fourier, fourier_shell, Sign};
use tatezeta::localfield::{LocalField, LocalFieldParams};
use tatezeta::padic::PadicContext;
use tatezeta::serial;
use tatezeta::suites::{self, Suite};
use tatezeta::zeta::{rho_closed, rho_from_h, zeta_integral, zeta_shell};
use tatezeta::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "tatezeta",
    version,
    about = "Exact p-adic Fourier analysis and local zeta integrals on l-adic fields"
)]
struct Cli {
    #[command(flatten)]
    session: SessionArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SessionArgs {
    /// Residue characteristic of K.
    #[arg(long, global = true, default_value_t = 3)]
    ell: u64,
    /// Ramification index e (π^e = ℓ).
    #[arg(long = "ram-e", global = true, default_value_t = 1)]
    ram_e: u32,
    /// The prime of the coefficient field.
    #[arg(long, global = true, default_value_t = 5)]
    p: u64,
    /// Largest ℓ-power root of unity available to the additive character.
    #[arg(long, global = true, default_value_t = 4)]
    nroot: u32,
    /// Conductor M of the scalar field (default ℓ^nroot·(ℓ−1)).
    #[arg(long, global = true)]
    conductor: Option<u64>,
    /// Initial p-adic precision.
    #[arg(long, global = true, default_value_t = 40)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    cases: usize,
    /// Machine-readable output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Aligned plain-text output.
    #[arg(long, global = true)]
    text: bool,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharacterArgs {
    /// Level of the unit part χ̃.
    #[arg(long, default_value_t = 0)]
    level: i64,
    /// Index among the characters of exactly that level.
    #[arg(long = "char-index", default_value_t = 0)]
    char_index: usize,
    /// Character JSON file (overrides --level/--char-index).
    #[arg(long)]
    character: Option<PathBuf>,
    /// χ(π): FORMAL, or a rational such as 6 or 1/6.
    #[arg(long, default_value = "FORMAL")]
    lambda: String,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier transform of a step or shell function read from a JSON file.
    Transform {
        input: PathBuf,
        /// Use ζ^{−1} in place of ζ.
        #[arg(long)]
        inverse: bool,
        /// Also check that the opposite transform recovers the input.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Zeta integral Z(f, χ̃χ_λ).
    Zeta {
        input: PathBuf,
        #[command(flatten)]
        character: CharacterArgs,
    },
    /// ρ(χ) in closed form and as Z(h_n,χ)/Z(ĥ_n,χ*).
    Rho {
        #[command(flatten)]
        character: CharacterArgs,
    },
    /// Run a verification suite over the reference configurations.
    Verify {
        #[arg(value_parser = ["inversion", "poisson", "fe", "duality", "tables", "rl", "all"])]
        suite: String,
    },
    /// Session parameters and the p-adic embedding data.
    Session,
}

enum Outcome {
    Pass(Value, String),
    Fail(Value, String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = cli.session.text;
    let (code, value, rendered) = match run(&cli) {
        Ok(Outcome::Pass(v, t)) => (0, v, t),
        Ok(Outcome::Fail(v, t)) => (EXIT_FAIL, v, t),
        Err(e) => {
            let v = serial::error_to_json(&e);
            let t = format!("error {}: {e}", e.kind());
            (EXIT_INPUT, v, t)
        }
    };
    let body = if text {
        rendered
    } else {
        serde_json::to_string_pretty(&value).unwrap()
    };
    match &cli.session.out {
        Some(path) if code != EXIT_INPUT => {
            if let Err(e) = fs::write(path, body + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
        // a closed pipe (e.g. `| head`) is not an error worth a panic
        _ => {
            let _ = writeln!(std::io::stdout(), "{body}");
        }
    }
    ExitCode::from(code)
}

fn session_field(s: &SessionArgs) -> tatezeta::Result<Arc<LocalField>> {
    let mut params = LocalFieldParams::new(s.ell, s.ram_e, s.p, s.nroot)?;
    if let Some(m) = s.conductor {
        params = params.with_conductor(m)?;
    }
    LocalField::new(params)
}

fn read_json(path: &PathBuf) -> tatezeta::Result<Value> {
    let raw = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn character(field: &Arc<LocalField>, a: &CharacterArgs) -> tatezeta::Result<Character> {
    let chi = match &a.character {
        Some(path) => serial::character_from_json(field, &read_json(path)?)?,
        None => {
            let all = Character::all_of_level(field, a.level)?;
            let n = all.len();
            all.into_iter().nth(a.char_index).ok_or_else(|| {
                Error::BadParameter(format!(
                    "level {} has {n} characters; index {} out of range",
                    a.level, a.char_index
                ))
            })?
        }
    };
    let lambda = if a.lambda == "FORMAL" {
        LambdaParam::formal()
    } else {
        LambdaParam::rational(parse_rational(&a.lambda)?, field)
    };
    Ok(chi.with_lambda(lambda))
}

fn run(cli: &Cli) -> tatezeta::Result<Outcome> {
    let s = &cli.session;
    match &cli.command {
        Command::Transform {
            input,
            inverse,
            roundtrip,
        } => {
            let field = session_field(s)?;
            let f = serial::shell_from_json(&field, &read_json(input)?)?;
            let sign = if *inverse { Sign::ZetaInv } else { Sign::Zeta };
            let (out, back_ok) = if f.tails.is_empty() {
                let g = fourier(&f.step, sign)?;
                let ok = !roundtrip || fourier(&g, sign.flip())? == f.step;
                (serial::step_to_json(&g), ok)
            } else {
                let g = fourier_shell(&f, sign)?;
                let ok = !roundtrip || fourier_shell(&g, sign.flip())?.equals(&f)?;
                (serial::shell_to_json(&g), ok)
            };
            let text = serde_json::to_string(&out).unwrap();
            if back_ok {
                Ok(Outcome::Pass(out, text))
            } else {
                Ok(Outcome::Fail(
                    json!({ "error": "roundtrip", "transform": out }),
                    "roundtrip failed".into(),
                ))
            }
        }
        Command::Zeta { input, character: ca } => {
            let field = session_field(s)?;
            let f = serial::shell_from_json(&field, &read_json(input)?)?;
            let chi = character(&field, ca)?;
            let z = if f.tails.is_empty() {
                zeta_integral(&f.step, &chi)?
            } else {
                zeta_shell(&f, &chi)?
            };
            let text = format!("{}  on |λ|_p = p^t, t in {}", z.value, z.annulus);
            Ok(Outcome::Pass(serial::zeta_value_to_json(&z), text))
        }
        Command::Rho { character: ca } => {
            let field = session_field(s)?;
            let chi = character(&field, ca)?;
            let closed = rho_closed(&chi)?;
            let from_h = rho_from_h(&chi)?;
            let equal = closed.value.equals(&from_h.value);
            let v = json!({
                "character": serial::character_to_json(&chi),
                "rho_closed": serial::zeta_value_to_json(&closed),
                "rho_from_h": serial::zeta_value_to_json(&from_h),
                "equal": equal,
            });
            let text = format!(
                "rho_closed  {}\nrho_from_h  {}\nequal={equal}",
                closed.value, from_h.value
            );
            Ok(if equal {
                Outcome::Pass(v, text)
            } else {
                Outcome::Fail(v, text)
            })
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = suites::run(suite, s.cases, s.seed)?;
            let (v, t) = (report.to_json(), report.to_text());
            Ok(if report.all_passed() {
                Outcome::Pass(v, t)
            } else {
                Outcome::Fail(v, t)
            })
        }
        Command::Session => {
            let field = session_field(s)?;
            let ctx = PadicContext::new(field.cyc(), s.p, s.precision)?;
            let p = field.params();
            let v = json!({
                "ell": p.ell,
                "e": p.e,
                "p": p.p,
                "n_root": p.n_root,
                "M": p.conductor,
                "precision": s.precision,
                "enumeration_cap": p.enum_cap,
                "seed": s.seed,
                "context": ctx.to_json(),
            });
            let text = format!(
                "ell={} e={} p={} n_root={} M={} precision={} d={} seed={}",
                p.ell, p.e, p.p, p.n_root, p.conductor, s.precision, ctx.d, s.seed
            );
            Ok(Outcome::Pass(v, text))
        }
    }
}
