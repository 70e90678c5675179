//! Command-line front end. `main.rs` only parses arguments and prints.

pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{AdditiveCode, DistanceMode};
use crate::error::{Error, Result};
use crate::decomp::hyperbolic_decompose;
use crate::extension::{analyze, build_extension, build_minimal_extension_from, eaqecc_distance, DistanceCase};
use crate::pauli::{build_stabilizer, undetectable_error_search};

pub use format::{parse_code_file, CodeFile};

pub const DEFAULT_MAX_ENUM: u64 = 1 << 22;
pub const DEFAULT_MAX_MATRIX_DIM: usize = 1024;

#[derive(Parser, Debug)]
#[command(name = "eaqecc", version, about = "Entanglement-assisted codes over Galois rings")]
pub struct Cli {
    #[command(flatten)]
    pub limits: Limits,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Limits {
    /// largest set enumerated by exhaustive searches
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENUM)]
    pub max_enum: u64,
    /// largest Hilbert space dimension turned into dense matrices
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MATRIX_DIM)]
    pub max_matrix_dim: usize,
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum: DEFAULT_MAX_ENUM,
            max_matrix_dim: DEFAULT_MAX_MATRIX_DIM,
            threads: None,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// code parameters ((n, K, D; c))
    Params { file: PathBuf },
    /// hyperbolic decomposition of the code
    Decompose { file: PathBuf },
    /// self-orthogonal extensions (minimal and one per pair)
    Extend { file: PathBuf },
    /// character dual at a level
    Dual {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// minimum symplectic weight
    Distance {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// parameters checked against the Pauli-matrix construction
    Verify { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Code,
    Dual,
    DualMinusCode,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Params { .. } => "params",
            Command::Decompose { .. } => "decompose",
            Command::Extend { .. } => "extend",
            Command::Dual { .. } => "dual",
            Command::Distance { .. } => "distance",
            Command::Verify { .. } => "verify",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Params { file }
            | Command::Decompose { file }
            | Command::Extend { file }
            | Command::Dual { file, .. }
            | Command::Distance { file, .. }
            | Command::Verify { file } => file,
        }
    }
}

/// A rendered report and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub json: String,
    pub exit_code: i32,
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Outcome {
    in_pool(&cli.limits, cli.command.name(), || {
        let (_, code) = parse_code_file(cli.command.file())?;
        execute(&cli.command, &code, &cli.limits)
    })
}

/// Runs `command` on an already built code; the command's file is ignored.
pub fn report_for(command: &Command, code: &AdditiveCode, limits: &Limits) -> Outcome {
    in_pool(limits, command.name(), || execute(command, code, limits))
}

fn in_pool(limits: &Limits, name: &str, f: impl FnOnce() -> Result<(Value, bool)> + Send) -> Outcome {
    let job = || match f() {
        Ok((v, capped)) => Outcome {
            json: render(&v),
            exit_code: if capped { 2 } else { 0 },
        },
        Err(e) => Outcome {
            json: render(&report::error_report(name, &e)),
            exit_code: 1,
        },
    };
    match limits.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(job),
            Err(e) => Outcome {
                json: render(&report::error_report(name, &Error::Io(format!("thread pool: {e}")))),
                exit_code: 1,
            },
        },
        None => job(),
    }
}

/// Returns the report and whether a cap cut it short.
fn execute(command: &Command, code: &AdditiveCode, limits: &Limits) -> Result<(Value, bool)> {
    let mut out = report::header(command.name(), code);
    let mut capped = false;
    match command {
        Command::Params { .. } => {
            let a = analyze(code, limits.max_enum)?;
            capped = a.params.distance.value.is_none();
            out.insert("params".into(), report::params_block(&a.params, &a.decomposition));
        }
        Command::Decompose { .. } => {
            let d = hyperbolic_decompose(code)?;
            out.insert("decomposition".into(), report::decomposition_block(code, &d)?);
        }
        Command::Extend { .. } => {
            let d = hyperbolic_decompose(code)?;
            let minimal = build_minimal_extension_from(&d)?;
            let direct = build_extension(&d)?;
            out.insert(
                "extension".into(),
                json!({
                    "minimal": report::extension_block(&minimal),
                    "per_pair": report::extension_block(&direct),
                }),
            );
        }
        Command::Dual { level, .. } => {
            if *level > code.ring().b() {
                return Err(Error::EntryOutOfRange {
                    value: *level as u64,
                    modulus: code.ring().b() as u64 + 1,
                });
            }
            let d = code.chi_dual_level(*level);
            let mut block = report::code_block(&d);
            if let Value::Object(m) = &mut block {
                m.insert("level".into(), json!(level));
                m.insert("self_orthogonal_code".into(), json!(code.is_chi_self_orthogonal()));
            }
            out.insert("dual".into(), block);
        }
        Command::Distance { mode, .. } => {
            let (value, case, searched) = match mode {
                Mode::Auto => {
                    let o = eaqecc_distance(code, limits.max_enum)?;
                    let case = match o.case {
                        DistanceCase::DualInCode => "dual",
                        DistanceCase::DualMinusCode => "dual-minus-code",
                    };
                    (o.value, case, o.searched.to_string())
                }
                other => {
                    let (m, name, set) = match other {
                        Mode::Code => (DistanceMode::Code, "code", code.clone()),
                        Mode::Dual => (DistanceMode::Dual, "dual", code.chi_dual()),
                        _ => (DistanceMode::DualMinusCode, "dual-minus-code", code.chi_dual()),
                    };
                    let v = match code.min_symplectic_distance(m, limits.max_enum) {
                        Ok(d) => Some(d),
                        Err(e) if e.is_cap() => None,
                        Err(e) => return Err(e),
                    };
                    (v, name, set.cardinality().to_string())
                }
            };
            capped = value.is_none();
            out.insert(
                "distance".into(),
                json!({
                    "value": report::distance(value),
                    "set": case,
                    "searched": searched,
                    "limit": limits.max_enum,
                }),
            );
        }
        Command::Verify { .. } => {
            let a = analyze(code, limits.max_enum)?;
            out.insert("params".into(), report::params_block(&a.params, &a.decomposition));
            out.insert("structure".into(), report::structure_block(&a));
            let search = build_stabilizer(&a.extension, limits.max_matrix_dim).and_then(|s| {
                let found = undetectable_error_search(
                    code,
                    &a.extension,
                    &s,
                    limits.max_enum,
                    limits.max_matrix_dim,
                )?;
                Ok((s.len(), s.space().dimension(), found))
            });
            let block = match search {
                Ok((size, hilbert, found)) => {
                    let mut b = report::search_block(&found, a.params.distance.value, &a.params.k_exact());
                    if let Value::Object(m) = &mut b {
                        m.insert("stabilizer_size".into(), json!(size));
                        m.insert("hilbert_dimension".into(), json!(hilbert));
                    }
                    b
                }
                Err(e) if e.is_cap() => {
                    capped = true;
                    report::skipped(&e)
                }
                Err(e) => return Err(e),
            };
            capped |= a.params.distance.value.is_none();
            out.insert("verification".into(), block);
        }
    }
    Ok((Value::Object(out), capped))
}
