//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check ran and came out false, 2 the input or
//! the command line could not be used.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analyzer::{check_p_power_lengths, structure_theorem_check, synthesize, theorem_ranks, Ranks};
use crate::io::{self as formats, FormatError};
use crate::linalg::is_prime;
use crate::module::{GroupSpec, ModuleSummary};
use crate::oracle::EnumerationBudget;
use crate::selftest::{self, SelftestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest module dimension `theorem-ranks` will expand into a Jordan type.
pub const MAX_REPORT_DIM: usize = 1 << 16;
/// Largest module dimension `synthesize` will build.
pub const MAX_SYNTH_DIM: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fpg", version, about = "Modules over group rings of cyclic p-groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Largest p^dim enumerated exhaustively by the oracles.
    #[arg(long, global = true, default_value_t = 729)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jordan type of a module (module file, or a bare σ-matrix; `-` reads stdin).
    JordanType { file: PathBuf },
    /// Cyclic decomposition with generators grouped by length.
    Decompose { file: PathBuf },
    /// Jordan type of the restriction to the subgroup of index p^level.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        level: u32,
    },
    /// Summand multiplicities predicted by a norm-data file.
    TheoremRanks { file: PathBuf },
    /// Model file of the canonical witness for the given ranks.
    Synthesize {
        #[arg(long, value_parser = parse_prime)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Comma-separated rank_0,…,rank_n.
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
    },
    /// Checks the norm filtration of a model file at every j.
    VerifyModel { file: PathBuf },
    /// Whether every summand of a module has p-power length.
    CheckPPower { file: PathBuf },
    /// Runs the property sweeps against the brute-force oracles.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7", value_parser = parse_prime)]
        primes: Vec<u32>,
        #[arg(long, default_value_t = 9)]
        max_order: usize,
        #[arg(long, default_value_t = 16)]
        theorem_max_dim: usize,
        #[arg(long, default_value_t = 6)]
        chain_max_dim: usize,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
}

fn parse_prime(s: &str) -> Result<u32, String> {
    match s.trim().parse::<u32>() {
        Ok(p) if is_prime(p) && p < 1 << 16 => Ok(p),
        _ => Err(format!("`{s}` is not a prime below 65536")),
    }
}

/// An input or usage problem, reported with exit code 2.
struct Failure(String);

macro_rules! input_err {
    ($($arg:tt)*) => { Failure(format!($($arg)*)) };
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    format: Format,
}

impl Ctx<'_> {
    fn read(&mut self, path: &PathBuf, allow_stdin: bool) -> Result<String, Failure> {
        let name = path.display();
        if path.as_os_str() == "-" {
            if !allow_stdin {
                return Err(input_err!("`-`: this command reads a multi-record file, not stdin"));
            }
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| input_err!("stdin: {e}"))?;
            return Ok(s);
        }
        std::fs::read_to_string(path).map_err(|e| input_err!("{name}: {e}"))
    }

    fn with_file<T>(&mut self, path: &PathBuf, allow_stdin: bool, parse: fn(&str) -> Result<T, FormatError>) -> Result<T, Failure> {
        let text = self.read(path, allow_stdin)?;
        parse(&text).map_err(|e| input_err!("{}: {e}", path.display()))
    }
}

fn json_line(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn dispatch(cli: &Cli, ctx: &mut Ctx<'_>) -> Result<(String, i32), Failure> {
    let json = ctx.format == Format::Json;
    let budget = EnumerationBudget {
        max_elements: cli.budget,
        ..EnumerationBudget::default()
    };
    match &cli.command {
        Command::JordanType { file } => {
            let module = ctx.with_file(file, true, formats::parse_action)?;
            let summary = ModuleSummary::from(&module);
            let out = if json {
                json_line(json!(summary))
            } else {
                format!("{}\n", summary.jordan_type)
            };
            Ok((out, EXIT_OK))
        }
        Command::Decompose { file } => {
            let module = ctx.with_file(file, true, formats::parse_action)?;
            let d = module.decompose().map_err(|e| input_err!("{}: {e}", file.display()))?;
            let summaries = d.summaries();
            let out = if json {
                json_line(json!({ "module": ModuleSummary::from(&module), "summands": summaries }))
            } else {
                let mut s = format!("jordan type {}\n", d.jordan_type());
                for summary in &summaries {
                    s += &format!("length {} x{}\n", summary.length, summary.count);
                    for g in &summary.generators {
                        let g: Vec<String> = g.iter().map(u16::to_string).collect();
                        s += &format!("  {}\n", g.join(" "));
                    }
                }
                s
            };
            Ok((out, EXIT_OK))
        }
        Command::Restrict { file, level } => {
            let module = ctx.with_file(file, true, formats::parse_action)?;
            let restricted = module
                .restrict(*level)
                .map_err(|e| input_err!("--level {level}: {e}"))?;
            let summary = ModuleSummary::from(&restricted);
            let out = if json {
                json_line(json!({ "level": level, "restricted": summary }))
            } else {
                format!("{}\n", summary.jordan_type)
            };
            Ok((out, EXIT_OK))
        }
        Command::TheoremRanks { file } => {
            let data = ctx.with_file(file, true, formats::parse_norm_data)?;
            let ranks = theorem_ranks(&data).map_err(|e| input_err!("{}: {e}", file.display()))?;
            if ranks.total_dim() > MAX_REPORT_DIM {
                return Err(input_err!("{}: implied dimension exceeds {MAX_REPORT_DIM}", file.display()));
            }
            let out = if json {
                json_line(json!({
                    "ranks": ranks.ranks,
                    "dim": ranks.total_dim(),
                    "jordan_type": ranks.jordan_type(),
                }))
            } else {
                let r: Vec<String> = ranks.ranks.iter().map(usize::to_string).collect();
                format!("ranks {}\ndim {}\njordan type {}\n", r.join(" "), ranks.total_dim(), ranks.jordan_type())
            };
            Ok((out, EXIT_OK))
        }
        Command::Synthesize { p, n, ranks, m } => {
            let group = GroupSpec::new(*p, *n).map_err(|e| input_err!("--n {n}: {e}"))?;
            let ranks = Ranks::new(&group, ranks.clone()).map_err(|e| input_err!("--ranks: {e}"))?;
            if ranks.total_dim() > MAX_SYNTH_DIM {
                return Err(input_err!("--ranks: total dimension exceeds {MAX_SYNTH_DIM}"));
            }
            let model = synthesize(&ranks, *m).map_err(|e| input_err!("--ranks: {e}"))?;
            let text = formats::write_model(&model);
            let out = if json {
                let dims: Vec<usize> = model.levels().iter().map(|w| w.dim()).collect();
                json_line(json!({
                    "module": ModuleSummary::from(model.module()),
                    "level_dims": dims,
                    "m": model.m(),
                    "model": text,
                }))
            } else {
                text
            };
            Ok((out, EXIT_OK))
        }
        Command::VerifyModel { file } => {
            let model = ctx.with_file(file, false, formats::parse_model)?;
            let report = structure_theorem_check(&model).map_err(|e| input_err!("{}: {e}", file.display()))?;
            let code = if report.certified() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let out = if json {
                let rows: Vec<_> = report
                    .lemma
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "j": c.j,
                            "level": c.level,
                            "filtration_dim": c.filtration.dim(),
                            "designated_dim": c.designated.dim(),
                            "pass": c.equal,
                        })
                    })
                    .collect();
                json_line(json!({
                    "checks": rows,
                    "filtration_holds": report.lemma_holds(),
                    "theorem": report.theorem,
                    "certified": report.certified(),
                }))
            } else {
                let mut s = String::from("j     level  dim(rho^(j-1)X ∩ X^G)  dim(W_level)  result\n");
                for c in &report.lemma.checks {
                    s += &format!(
                        "{:<5} {:<6} {:<22} {:<13} {}\n",
                        c.j,
                        c.level,
                        c.filtration.dim(),
                        c.designated.dim(),
                        if c.equal { "pass" } else { "FAIL" }
                    );
                }
                match &report.theorem {
                    None => {
                        let js: Vec<String> = report.lemma.failing_js().iter().map(usize::to_string).collect();
                        s += &format!("filtration fails at j = {}\n", js.join(", "));
                    }
                    Some(t) => {
                        let summands: Vec<String> = t.summands.iter().map(|(l, c)| format!("{l}x{c}")).collect();
                        s += &format!(
                            "filtration holds\nsummands {}\nexpected ranks {:?}\nobserved ranks {:?}\n{}\n",
                            summands.join(" "),
                            t.expected_ranks,
                            t.observed_ranks,
                            if report.certified() { "certified" } else { "NOT certified" }
                        );
                    }
                }
                s
            };
            Ok((out, code))
        }
        Command::CheckPPower { file } => {
            let module = ctx.with_file(file, true, formats::parse_action)?;
            let report = check_p_power_lengths(&module);
            let code = if report.holds { EXIT_OK } else { EXIT_CHECK_FAILED };
            let out = if json {
                json_line(json!(report))
            } else if report.holds {
                format!("holds: type {}\n", report.jordan_type)
            } else {
                let o: Vec<String> = report.offenders.iter().map(usize::to_string).collect();
                format!("fails: type {}, non-p-power lengths {}\n", report.jordan_type, o.join(","))
            };
            Ok((out, code))
        }
        Command::Selftest {
            max_dim,
            primes,
            max_order,
            theorem_max_dim,
            chain_max_dim,
            seeds,
        } => {
            let config = SelftestConfig {
                primes: primes.clone(),
                max_order: *max_order,
                max_dim: *max_dim,
                theorem_max_dim: *theorem_max_dim,
                chain_max_dim: *chain_max_dim,
                seeds: *seeds,
                budget,
            };
            let report = selftest::run(&config);
            let code = if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let out = if json {
                json_line(json!({ "families": report.families, "passed": report.passed() }))
            } else {
                format!("{report}\n")
            };
            Ok((out, code))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let mut ctx = Ctx {
        stdin,
        format: cli.format,
    };
    match dispatch(&cli, &mut ctx) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
