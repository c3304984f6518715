use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cuspcert::arith::{Matrix, Rational, Scalar, Subspace};
use cuspcert::chains::{build_chain_orthogonal, build_chain_symplectic, build_chain_unitary, AnyCertificate};
use cuspcert::embeddings::{
    hermitian_m2_space, order_containment_scale, order_of_lattice, segre_point, trace_zero_space, veronese_point,
    MatrixLattice,
};
use cuspcert::forms::{AnySpace, FormKind, FormSpace};
use cuspcert::isotropic::{find_isotropic_vector, SearchConfig};
use cuspcert::levels::{containment_level, FullLattice};
use cuspcert::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SEARCH_EXHAUSTED: u8 = 3;

/// Build and verify chain certificates between isotropic subspaces.
#[derive(Parser, Debug)]
#[command(name = "cuspcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Height up to which the search is expected to succeed.
    #[arg(long = "height", default_value_t = SearchConfig::default().height_bound)]
    height: u32,
    /// Hard cap on the search height.
    #[arg(long = "max-height", default_value_t = SearchConfig::default().max_height)]
    max_height: u32,
}

impl SearchArgs {
    fn config(self) -> Result<SearchConfig, CliError> {
        Ok(SearchConfig::new(self.height, self.max_height)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kind, dimension, signature and an isotropic vector of a form space.
    Analyze {
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search for a primitive isotropic vector.
    Isotropic {
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build a chain certificate between two isotropic subspaces.
    Chain {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        i1: PathBuf,
        #[arg(long)]
        i2: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate; exits 1 if any condition fails.
    Verify { certificate: PathBuf },
    /// Levels of the sandwich between two full lattices.
    Level {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long = "lattice-prime")]
        lattice_prime: PathBuf,
        #[arg(long = "N", default_value_t = 1)]
        n: u64,
    },
    /// Explicit models.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Trace-zero matrices with the trace form.
    TraceZero,
    /// A point on the Segre quadric in 2U.
    Segre {
        #[arg(long, allow_hyphen_values = true)]
        tau1: String,
        #[arg(long, allow_hyphen_values = true)]
        tau2: String,
    },
    /// A point on the Veronese conic in U + <2>.
    Veronese {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
    },
    /// M2(Q) as a Hermitian plane over Q(sqrt(-D)).
    HermitianM2 {
        #[arg(long = "D")]
        d: i64,
    },
    /// The left order of a lattice in M2(Q) and its index exponent in M2(Z).
    Order {
        #[arg(long)]
        lattice: PathBuf,
    },
}

#[derive(Debug)]
struct CliError {
    code: u8,
    kind: String,
    message: String,
}

impl CliError {
    fn input(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            kind: kind.to_string(),
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchExhausted { .. } => EXIT_SEARCH_EXHAUSTED,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            kind: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// What a command produced: a JSON document, where it goes and the status.
struct Output {
    value: Value,
    out: Option<PathBuf>,
    code: u8,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output {
            value,
            out: None,
            code: 0,
        }
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input("Json", format!("{}: {e}", path.display())))
}

fn read_space(path: &Path) -> Result<AnySpace, CliError> {
    Ok(AnySpace::from_json(&read_json(path)?)?)
}

fn read_rational_space(path: &Path) -> Result<FormSpace<Rational>, CliError> {
    match read_space(path)? {
        AnySpace::Rational(s) => Ok(s),
        AnySpace::Hermitian(_) => Err(CliError::input(
            "InvalidForm",
            "a symmetric or alternating space over Q is required",
        )),
    }
}

fn read_subspace<S: Scalar>(path: &Path, space: &FormSpace<S>) -> Result<Subspace<S>, CliError> {
    Ok(Subspace::from_json(&read_json(path)?, space.dim(), space.ctx())?)
}

fn parse_rational(name: &str, s: &str) -> Result<Rational, CliError> {
    s.parse()
        .map_err(|_| CliError::input("Parse", format!("--{name}: {s:?} is not a rational number")))
}

fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn signature_json<S: Scalar>(space: &FormSpace<S>) -> Value {
    match space.signature() {
        Ok(sig) => json!([sig.plus, sig.minus, sig.null]),
        Err(_) => Value::Null,
    }
}

fn analyze<S: Scalar>(space: &FormSpace<S>, cfg: &SearchConfig) -> Value {
    let found = find_isotropic_vector(space, cfg);
    json!({
        "kind": space.kind().as_str(),
        "dim": space.dim(),
        "signature": signature_json(space),
        "isotropicVector": found.as_deref().map_or(Value::Null, vector_json),
    })
}

fn isotropic<S: Scalar>(space: &FormSpace<S>, cfg: &SearchConfig) -> Value {
    let found = find_isotropic_vector(space, cfg);
    json!({
        "found": found.is_some(),
        "vector": found.as_deref().map_or(Value::Null, vector_json),
        "heightBound": cfg.height_bound,
        "maxHeight": cfg.max_height,
    })
}

fn chain(space: &AnySpace, i1: &Path, i2: &Path, cfg: &SearchConfig) -> Result<Value, CliError> {
    match space {
        AnySpace::Rational(s) => {
            let (a, b) = (read_subspace(i1, s)?, read_subspace(i2, s)?);
            let cert = match s.kind() {
                FormKind::Alternating => build_chain_symplectic(s, &a, &b)?,
                _ => build_chain_orthogonal(s, &a, &b, cfg)?,
            };
            Ok(cert.to_json())
        }
        AnySpace::Hermitian(s) => {
            let (a, b) = (read_subspace(i1, s)?, read_subspace(i2, s)?);
            Ok(build_chain_unitary(s, &a, &b)?.to_json())
        }
    }
}

fn demo(d: &Demo) -> Result<Value, CliError> {
    Ok(match d {
        Demo::TraceZero => {
            let (space, labels) = trace_zero_space();
            json!({
                "basis": labels,
                "gram": space.gram().to_json(),
                "signature": signature_json(&space),
            })
        }
        Demo::Segre { tau1, tau2 } => {
            let (t1, t2) = (parse_rational("tau1", tau1)?, parse_rational("tau2", tau2)?);
            let space = FormSpace::hyperbolic_sum(2, &[])?;
            let p = segre_point(&t1, &t2);
            json!({
                "basis": ["e1", "f1", "e2", "f2"],
                "gram": space.gram().to_json(),
                "point": vector_json(&p),
                "norm": space.norm(&p).to_json(),
            })
        }
        Demo::Veronese { tau } => {
            let t = parse_rational("tau", tau)?;
            let space = FormSpace::hyperbolic_sum(1, &[2])?;
            let p = veronese_point(&t);
            json!({
                "basis": ["e", "f", "v0"],
                "gram": space.gram().to_json(),
                "point": vector_json(&p),
                "norm": space.norm(&p).to_json(),
            })
        }
        Demo::HermitianM2 { d } => {
            let d = cuspcert::arith::check_discriminant(*d)?;
            let model = hermitian_m2_space(d)?;
            let space = model.space();
            let e11 = Matrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
            let z = model.coordinates(&e11);
            json!({
                "D": d,
                "basis": ["I", "e12"],
                "gram": space.gram().to_json(),
                "signature": signature_json(space),
                "JD": model.j_d().to_json(),
                "e11": vector_json(&z),
                "e11Norm": space.norm(&z).to_json(),
            })
        }
        Demo::Order { lattice } => {
            let lat = MatrixLattice::from_json(&read_json(lattice)?)?;
            let order = order_of_lattice(&lat);
            let n0 = match order_containment_scale(&order, &MatrixLattice::standard()) {
                Ok(n) => Value::String(n.to_string()),
                Err(Error::NotContained) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            json!({
                "lattice": lat.canonical().to_json(),
                "order": order.to_json(),
                "N0": n0,
            })
        }
    })
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze { space, search } => {
            let cfg = search.config()?;
            Ok(Output::ok(match read_space(&space)? {
                AnySpace::Rational(s) => analyze(&s, &cfg),
                AnySpace::Hermitian(s) => analyze(&s, &cfg),
            }))
        }
        Command::Isotropic { space, search } => {
            let cfg = search.config()?;
            Ok(Output::ok(match read_space(&space)? {
                AnySpace::Rational(s) => isotropic(&s, &cfg),
                AnySpace::Hermitian(s) => isotropic(&s, &cfg),
            }))
        }
        Command::Chain {
            space,
            i1,
            i2,
            search,
            out,
        } => {
            let cfg = search.config()?;
            let value = chain(&read_space(&space)?, &i1, &i2, &cfg)?;
            Ok(Output { value, out, code: 0 })
        }
        Command::Verify { certificate } => {
            let cert = AnyCertificate::from_json(&read_json(&certificate)?)?;
            let report = cert.verify();
            let code = if report.ok() { 0 } else { EXIT_VERIFY_FAILED };
            Ok(Output {
                value: report.to_json(),
                out: None,
                code,
            })
        }
        Command::Level {
            space,
            lattice,
            lattice_prime,
            n,
        } => {
            let ambient = read_rational_space(&space)?;
            let a = FullLattice::from_json(&read_json(&lattice)?, ambient.clone())?;
            let b = FullLattice::from_json(&read_json(&lattice_prime)?, ambient)?;
            Ok(Output::ok(containment_level(&a, &b, n)?.to_json()))
        }
        Command::Demo { demo: d } => Ok(Output::ok(demo(&d)?)),
    }
}

fn report_error(e: &CliError) -> ExitCode {
    let body = json!({ "error": { "kind": e.kind, "message": e.message } });
    let _ = std::io::stderr().write_all(render(&body).as_bytes());
    ExitCode::from(e.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return report_error(&CliError::input("Usage", msg.trim_end()));
        }
    };
    match run(cli) {
        Ok(output) => {
            let text = render(&output.value);
            if let Some(path) = output.out {
                if let Err(e) = fs::write(&path, text) {
                    return report_error(&CliError::input("Io", format!("cannot write {}: {e}", path.display())));
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
            }
            ExitCode::from(output.code)
        }
        Err(e) => report_error(&e),
    }
}
