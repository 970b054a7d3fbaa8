//! Command-line front end for `pdcalc`: runs named checks and emits a
//! deterministic report document.

pub mod checks;
pub mod config;
pub mod document;
pub mod report;
pub mod targets;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use pdcalc::fgl::{FglKind, Lambda};
use pdcalc::senhom::BokstedtVariant;

use checks::{cartier, fgl, sen, witt, Check};
use config::{Format, Overrides, RunConfig};
use document::ReportDocument;
use targets::Targets;

/// Bad flags or config; exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Parser, Debug)]
#[command(name = "pdcalc", version, about = "Exact checks for Witt vectors, formal groups and Sen operators")]
pub struct Cli {
    /// Prime p.
    #[arg(short = 'p', global = true)]
    pub p: Option<u64>,
    /// p-adic precision N.
    #[arg(short = 'N', global = true)]
    pub precision: Option<u32>,
    /// Witt vector length L.
    #[arg(short = 'L', global = true)]
    pub witt_length: Option<usize>,
    /// Degree bound D.
    #[arg(short = 'D', global = true)]
    pub degree_bound: Option<i64>,
    /// Series truncation K.
    #[arg(short = 'K', global = true)]
    pub truncation: Option<u32>,
    /// File of `key = value` lines (p, N, L, D, K, format).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// JSON report.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Plain text report (the default without a config file).
    #[arg(long, global = true)]
    pub text: bool,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Witt vector identities.
    Witt {
        #[command(subcommand)]
        check: WittCmd,
    },
    /// Formal group laws and the right unit.
    Fgl {
        #[command(subcommand)]
        check: FglCmd,
    },
    /// Homology of Sen operator complexes.
    Sen {
        #[command(subcommand)]
        builder: SenCmd,
    },
    /// Eigenvalues, Weyl operators and delta-ring divisibility.
    Cartier {
        #[command(subcommand)]
        check: CartierCmd,
    },
    /// Every acceptance check with its fixed ranges.
    Report,
}

#[derive(Subcommand, Debug)]
pub enum WittCmd {
    /// [p] + V(y) = p and the unit y.
    Gabber,
    /// p^n = V(p^(n-1)) mod p^n.
    PnVanishing {
        #[arg(long, default_value_t = 4)]
        n_max: u32,
    },
    /// Solve F(x) = y for the Gabber y and its twists.
    SolveFrobenius,
    /// F applied to the Gabber identity.
    FrobeniusOfP,
    /// Integrality and additivity of Cartier characters.
    Cartier {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Recover r from log prod (1 - r_j t^j).
    Dwork {
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Additive,
    Multiplicative,
    Honda,
}

#[derive(Subcommand, Debug)]
pub enum FglCmd {
    /// The divided n-series <m>(x).
    Nseries {
        #[arg(long, value_enum, default_value = "additive")]
        kind: KindArg,
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: i64,
        /// `symbolic` or an integer.
        #[arg(long, default_value = "symbolic")]
        lambda: String,
        /// Height of the Honda law.
        #[arg(long, default_value_t = 1)]
        height: u32,
    },
    /// <n> of the multiplicative law against [n]_q.
    QIdentity {
        #[arg(long, default_value_t = 20)]
        n_max: u64,
    },
    /// <p^m> of the Honda law is a monomial.
    Honda {
        #[arg(long, default_value_t = 1)]
        height: u32,
    },
    /// The right unit on v_k.
    RightUnit {
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
    },
    /// The b_4 cobar class at p = 2.
    B4,
    /// Cohomology of the f-de Rham complex.
    Fderham {
        #[arg(long, value_enum, default_value = "additive")]
        kind: KindArg,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 6)]
        weight: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    #[value(name = "T1", alias = "t1")]
    T1,
    #[value(name = "Jp", alias = "jp")]
    Jp,
}

#[derive(Subcommand, Debug)]
pub enum SenCmd {
    /// Bokstedt-type periodicity, T1 or Jp.
    Bokstedt {
        #[arg(long, value_enum, default_value = "T1")]
        variant: VariantArg,
    },
    /// Serre complex for Z/p^n.
    Cmn {
        #[arg(short = 'n', default_value_t = 1)]
        n: u32,
    },
    /// Perfectoid Serre complex.
    Perfectoid,
    /// THH of Z/p^n via the Sen square.
    Zpn {
        #[arg(short = 'n', default_value_t = 2)]
        n: u32,
    },
    /// Homology and cohomology of Omega^2 Y_n.
    Omega2yn {
        #[arg(short = 'n', default_value_t = 2)]
        n: u32,
    },
    /// Sen square over a ramified DVR.
    Dvr {
        /// Monic E(u), coefficients highest degree first, e.g. "1,0,-3".
        #[arg(short = 'E', allow_hyphen_values = true)]
        e: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CartierCmd {
    /// Eigenvalue Witt vector Psi(m).
    Psi {
        #[arg(short = 'n', default_value_t = 3)]
        n: usize,
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: i64,
    },
    /// Psi(a) + Psi(b) = Psi(a + b) on random pairs.
    PsiTensor {
        #[arg(short = 'n', default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 200)]
        range: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Divided-power Weyl relations.
    Weyl {
        /// Operators `∂^{[p^j]}` for `j < n`.
        #[arg(short = 'n', default_value_t = 3)]
        n: u32,
        #[arg(short = 'M', default_value_t = 50)]
        m_max: usize,
    },
    /// Delta-ring divisibility of t = (q-1)^2/[p]_q.
    Delta {
        #[arg(short = 'n', default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        k_max: u32,
    },
}

/// What the process should print and return.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn kind(arg: KindArg, lambda: &str, p: u64, height: u32) -> Result<FglKind, UsageError> {
    Ok(match arg {
        KindArg::Additive => FglKind::Additive,
        KindArg::Multiplicative if lambda == "symbolic" => FglKind::Multiplicative(Lambda::Symbolic),
        KindArg::Multiplicative => FglKind::Multiplicative(Lambda::Value(
            lambda.parse::<BigInt>().map_err(|_| UsageError(format!("bad --lambda {lambda:?}")))?,
        )),
        KindArg::Honda => FglKind::Honda { p, n: height },
    })
}

fn dispatch(cmd: &Command, c: &RunConfig, t: &Targets) -> Result<(String, Vec<Check>), UsageError> {
    let (p, len, d) = (c.p, c.witt_length, c.degree_bound);
    Ok(match cmd {
        Command::Report => return Ok(("report".into(), report::cmd_report(c, t).checks)),
        Command::Witt { check } => {
            let w = &t.witt;
            let out = match check {
                WittCmd::Gabber => witt::gabber(p, len),
                WittCmd::PnVanishing { n_max } => witt::pn_vanishing(p, *n_max, len),
                WittCmd::SolveFrobenius => {
                    witt::solve_frobenius_trichotomy(p, len, &w.solve_frobenius_failure, &w.solve_frobenius_twists)
                }
                WittCmd::FrobeniusOfP => witt::frobenius_of_p(p, len),
                WittCmd::Cartier { samples, degree, seed } => witt::cartier(p, *samples, len, *degree, *seed),
                WittCmd::Dwork { instances, degree, seed } => witt::dwork(*instances, *degree, *seed),
            };
            ("witt".into(), vec![out])
        }
        Command::Fgl { check } => {
            let out = match check {
                FglCmd::Nseries { kind: k, m, lambda, height } => {
                    fgl::nseries(kind(*k, lambda, p, *height)?, *m, d.max(1) as u32)
                }
                FglCmd::QIdentity { n_max } => fgl::q_identity(*n_max, d as u32),
                FglCmd::Honda { height } => fgl::honda(p, *height, d as u64),
                FglCmd::RightUnit { n } => fgl::right_unit(p, *n, &t.fgl.right_unit),
                FglCmd::B4 => fgl::b4(&t.fgl.right_unit),
                FglCmd::Fderham { kind: k, lambda, weight } => {
                    fgl::fderham(kind(*k, lambda, p, 1)?, *weight, c.truncation as usize)
                }
            };
            ("fgl".into(), vec![out])
        }
        Command::Sen { builder } => {
            let out = match builder {
                SenCmd::Bokstedt { variant } => {
                    let v = match variant {
                        VariantArg::T1 => BokstedtVariant::T1,
                        VariantArg::Jp => BokstedtVariant::Jp,
                    };
                    sen::bokstedt(p, v, d)
                }
                SenCmd::Cmn { n } => sen::cmn(p, *n, d),
                SenCmd::Perfectoid => sen::perfectoid(p, d),
                SenCmd::Zpn { n } => sen::zpn(p, *n, d),
                SenCmd::Omega2yn { n } => sen::omega2yn(p, *n, d),
                SenCmd::Dvr { e } => {
                    let coeffs = targets::parse_eisenstein(e).map_err(UsageError)?;
                    sen::dvr(p, &coeffs, d, c.precision)
                }
            };
            ("sen".into(), vec![out])
        }
        Command::Cartier { check } => {
            let out = match check {
                CartierCmd::Psi { n, m } => cartier::psi(p, *n, *m),
                CartierCmd::PsiTensor { n, pairs, range, seed } => cartier::psi_tensor(p, *n, *pairs, *range, *seed),
                CartierCmd::Weyl { n, m_max } => cartier::weyl(p, *n, *m_max),
                CartierCmd::Delta { n, k_max } => cartier::delta(p, *n, *k_max, c.precision, c.truncation),
            };
            ("cartier".into(), vec![out])
        }
    })
}

fn usage(msg: impl std::fmt::Display) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

/// Parse `args` (including the program name) and run, with the bundled targets.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_targets(args, &Targets::bundled())
}

pub fn run_with_targets<I, T>(args: I, targets: &Targets) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let file = match cli.config.as_deref().map(Overrides::from_file).transpose() {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let format = if cli.json {
        Some(Format::Json)
    } else if cli.text {
        Some(Format::Text)
    } else {
        None
    };
    let flags = Overrides {
        p: cli.p,
        precision: cli.precision,
        witt_length: cli.witt_length,
        degree_bound: cli.degree_bound,
        truncation: cli.truncation,
        format,
    };
    let mut config = match RunConfig::resolve(flags, file) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if format.is_none() && cli.config.is_none() {
        config.format = Format::Text;
    }
    let (command, checks) = match dispatch(&cli.command, &config, targets) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let doc = ReportDocument::new(&command, &config, checks);
    let rendered = match config.format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
    };
    let mut stderr = String::new();
    if let Some(f) = doc.first_failure() {
        stderr += &format!("check {} failed: {}\n", f.name, f.counterexample.as_deref().unwrap_or("no detail"));
    }
    let stdout = match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                return Outcome { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) };
            }
            String::new()
        }
        None => rendered,
    };
    Outcome { code: doc.exit_code(), stdout, stderr }
}
