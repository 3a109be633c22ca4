//! `acvf-lab`: batch front end for the exact valued-field toolkit.
//!
//! Every subcommand reads one JSON document (`--in FILE`, or stdin when the
//! flag is `-` or absent), computes, and prints a JSON envelope on stdout:
//!
//! ```text
//! {"schema":"1","manifest":{...},"result":{...}}
//! ```
//!
//! The manifest records the command, backend, seed, budget, the SHA-256 of
//! the input document and of the serialized result, and the library version;
//! rerunning the same command on the same input reproduces the output byte
//! for byte. Exit codes: 0 success, 1 malformed input, 2 domain error (the
//! error name appears in a structured field).

mod ops;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use acvf_core::{Backend, Error};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum BackendArg {
    Ratfunc,
    Puiseux,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Ratfunc => Backend::RatFunc,
            BackendArg::Puiseux => Backend::Puiseux,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "acvf-lab",
    version = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)"),
    about = "Exact linear algebra over valued fields: lattices, separated bases, Γ-types, tropical evaluation"
)]
pub struct Cli {
    /// Input JSON file; `-` or absent reads stdin.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,

    /// Expected field backend of the input (cross-checked when given).
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Sample budget for randomized subcommands.
    #[arg(long, global = true, default_value_t = 200)]
    pub budget: usize,

    /// Add a human-readable rendering next to the JSON result.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub cmd: Group,
}

#[derive(Subcommand)]
pub enum Group {
    /// Field backend operations.
    Field {
        #[command(subcommand)]
        op: FieldOp,
    },
    /// Valued vector spaces.
    Sep {
        #[command(subcommand)]
        op: SepOp,
    },
    /// Lattice codes.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Classified O-modules.
    Module {
        #[command(subcommand)]
        op: ModuleOp,
    },
    /// Definable types on the value group.
    Gamma {
        #[command(subcommand)]
        op: GammaOp,
    },
    /// Stably dominated types and tropical evaluation.
    Stcomp {
        #[command(subcommand)]
        op: StcompOp,
    },
    /// Congruence subgroups, coset codes, germ equivalence.
    Code {
        #[command(subcommand)]
        op: CodeOp,
    },
    /// Membership in the image of the stable completion.
    Appendix {
        #[command(subcommand)]
        op: AppendixOp,
    },
}

#[derive(Subcommand)]
pub enum FieldOp {
    /// Valuation (and residue, at valuation 0) of a field element.
    Eval,
    /// Truncation of the expansion below a cutoff exponent.
    Section,
}

#[derive(Subcommand)]
pub enum SepOp {
    /// Separated-basis reduction of a family of vectors.
    Basis,
}

#[derive(Subcommand)]
pub enum LatticeOp {
    /// Canonical lattice code of an invertible matrix.
    Diag,
    /// Recanonicalize a lattice code.
    Canon,
    /// Lattice equality.
    Eq,
    /// Lattice membership of a vector.
    Member,
    /// Dual lattice as a classified module.
    Dual,
    /// The Γ^n invariant of the diagonal part.
    G,
}

#[derive(Subcommand)]
pub enum ModuleOp {
    /// Classification triple (free, integral, strict).
    Classify,
    /// Componentwise dual.
    Dual,
    /// Smallest closed module containing the input.
    Closure,
    /// g-closed / semi-lattice / lattice predicates.
    Pred,
    /// Semi-lattice valuation of a vector.
    Vval,
}

#[derive(Subcommand)]
pub enum GammaOp {
    /// Pushforward under an affine rational map.
    Push,
    /// Product type (left factor realized generically over the right).
    Product,
    /// Limit point, when it exists.
    Limit,
    /// Split into finite-limit and purely infinite parts.
    Decompose,
    /// Translation making the type 0-definable.
    Translate,
    /// Stabilizer membership of a rational translation.
    Stab,
    /// Equality of definable types.
    Eq,
}

#[derive(Subcommand)]
pub enum StcompOp {
    /// Generic valuation of a polynomial at a polydisc type.
    Val,
    /// Degree-d semi-lattice image of a polydisc type.
    Jd,
    /// Tropical evaluation against a semi-lattice.
    Trop,
    /// Generic valuation under an integral type.
    Integrate,
    /// Canonical reparameterization of an integral type.
    Recover,
}

#[derive(Subcommand)]
pub enum CodeOp {
    /// Group criterion for a congruence-subgroup candidate.
    Group,
    /// Same-coset test.
    CosetEq,
    /// Canonical coset representative.
    CosetCode,
    /// The congruence subgroup of the diagonal flow of a Γ-type.
    Dnu,
    /// Germ equivalence of parameterized lattice families.
    GermEq,
}

#[derive(Subcommand)]
pub enum AppendixOp {
    /// Membership of a semi-lattice in the image of the stable completion.
    Member,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    backend: Option<String>,
    seed: u64,
    budget: usize,
    input_sha256: String,
    outputs: String,
    version: &'static str,
}

#[derive(Serialize)]
struct Envelope {
    schema: &'static str,
    manifest: Manifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pretty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

#[derive(Serialize)]
struct ErrorBody {
    name: String,
    message: String,
}

pub enum CliError {
    /// Unreadable or schema-invalid input: exit 1.
    Malformed(String),
    /// A domain error from the library: exit 2.
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn command_name(cmd: &Group) -> String {
    fn op<T: clap::Subcommand>(_: &T) -> &'static str {
        ""
    }
    let _ = op::<FieldOp>;
    match cmd {
        Group::Field { op } => format!(
            "field {}",
            match op {
                FieldOp::Eval => "eval",
                FieldOp::Section => "section",
            }
        ),
        Group::Sep { op } => format!(
            "sep {}",
            match op {
                SepOp::Basis => "basis",
            }
        ),
        Group::Lattice { op } => format!(
            "lattice {}",
            match op {
                LatticeOp::Diag => "diag",
                LatticeOp::Canon => "canon",
                LatticeOp::Eq => "eq",
                LatticeOp::Member => "member",
                LatticeOp::Dual => "dual",
                LatticeOp::G => "g",
            }
        ),
        Group::Module { op } => format!(
            "module {}",
            match op {
                ModuleOp::Classify => "classify",
                ModuleOp::Dual => "dual",
                ModuleOp::Closure => "closure",
                ModuleOp::Pred => "pred",
                ModuleOp::Vval => "vval",
            }
        ),
        Group::Gamma { op } => format!(
            "gamma {}",
            match op {
                GammaOp::Push => "push",
                GammaOp::Product => "product",
                GammaOp::Limit => "limit",
                GammaOp::Decompose => "decompose",
                GammaOp::Translate => "translate",
                GammaOp::Stab => "stab",
                GammaOp::Eq => "eq",
            }
        ),
        Group::Stcomp { op } => format!(
            "stcomp {}",
            match op {
                StcompOp::Val => "val",
                StcompOp::Jd => "jd",
                StcompOp::Trop => "trop",
                StcompOp::Integrate => "integrate",
                StcompOp::Recover => "recover",
            }
        ),
        Group::Code { op } => format!(
            "code {}",
            match op {
                CodeOp::Group => "group",
                CodeOp::CosetEq => "coset-eq",
                CodeOp::CosetCode => "coset-code",
                CodeOp::Dnu => "dnu",
                CodeOp::GermEq => "germ-eq",
            }
        ),
        Group::Appendix { op } => format!(
            "appendix {}",
            match op {
                AppendixOp::Member => "member",
            }
        ),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Malformed(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn sha256_hex(data: &str) -> String {
    let mut h = Sha256::new();
    h.update(data.as_bytes());
    hex::encode(h.finalize())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_name(&cli.cmd);
    let input = match read_input(&cli.input) {
        Ok(s) => s,
        Err(CliError::Malformed(msg)) => {
            // No input: still emit a structured error envelope.
            let env = Envelope {
                schema: SCHEMA_VERSION,
                manifest: Manifest {
                    command,
                    backend: cli.backend.map(|b| Backend::from(b).to_string()),
                    seed: cli.seed,
                    budget: cli.budget,
                    input_sha256: String::new(),
                    outputs: String::new(),
                    version: env!("CARGO_PKG_VERSION"),
                },
                result: None,
                pretty: None,
                error: Some(ErrorBody {
                    name: "MALFORMED".into(),
                    message: msg,
                }),
            };
            println!("{}", serde_json::to_string(&env).expect("serializable envelope"));
            return ExitCode::from(1);
        }
        Err(CliError::Domain(_)) => unreachable!("reading input raises malformed only"),
    };

    let outcome = ops::dispatch(&cli, &input);
    let (result, pretty, error, code) = match outcome {
        Ok(out) => (Some(out.value), out.pretty.filter(|_| cli.pretty), None, 0u8),
        Err(CliError::Malformed(msg)) => (
            None,
            None,
            Some(ErrorBody {
                name: "MALFORMED".into(),
                message: msg,
            }),
            1,
        ),
        Err(CliError::Domain(e)) => (
            None,
            None,
            Some(ErrorBody {
                name: e.name().into(),
                message: e.to_string(),
            }),
            2,
        ),
    };
    let outputs = result
        .as_ref()
        .map(|v| sha256_hex(&serde_json::to_string(v).expect("serializable result")))
        .unwrap_or_default();
    let env = Envelope {
        schema: SCHEMA_VERSION,
        manifest: Manifest {
            command,
            backend: cli.backend.map(|b| Backend::from(b).to_string()),
            seed: cli.seed,
            budget: cli.budget,
            input_sha256: sha256_hex(&input),
            outputs,
            version: env!("CARGO_PKG_VERSION"),
        },
        result,
        pretty,
        error,
    };
    println!("{}", serde_json::to_string(&env).expect("serializable envelope"));
    ExitCode::from(code)
}
