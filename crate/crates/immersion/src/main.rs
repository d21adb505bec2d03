//! Thin command-line front end over the library: generators, finders, the
//! verifier, the brute-force oracle, and line-graph minors, with file-based
//! graphs and certificates and reproducible seeds.
//!
//! Exit codes: 0 success (oracle: witness found), 1 verification failed or
//! oracle exhausted, 2 bad parameters or precondition violation, 3 retries
//! exhausted, 4 certificate/host digest mismatch, 5 oracle budget exceeded.

use clap::{Args, Parser, Subcommand};
use immersion::cert::{CertError, ImmersionCertificate, LineMinorCertificate};
use immersion::constructions;
use immersion::dense::{self, DenseOptions};
use immersion::generators;
use immersion::graph::io as graph_io;
use immersion::graph::{MultiGraph, SimpleGraph};
use immersion::oracle::{self, OracleBudget};
use immersion::sparse;
use immersion::{verify_immersion, verify_line_minor};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_RETRIES: u8 = 3;
const EXIT_DIGEST: u8 = 4;
const EXIT_BUDGET: u8 = 5;

#[derive(Parser)]
#[command(
    name = "immersion",
    about = "Clique immersions in graphs, with machine-checkable certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph to a file.
    Gen(GenArgs),
    /// Find a clique immersion and write its certificate.
    Find(FindArgs),
    /// Verify a certificate against its host graph.
    Verify(VerifyArgs),
    /// Decide immersion containment exhaustively (tiny instances).
    Oracle(OracleArgs),
    /// Emit a clique-minor certificate for a line graph.
    LineMinor(LineMinorArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family: seymour | class2 | random-gnp | random-mindeg |
    /// complement-cycles | complete
    family: String,
    /// Output path for the graph file.
    #[arg(long)]
    out: PathBuf,
    /// Vertex count (random-gnp, random-mindeg, complete).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (random-gnp).
    #[arg(long)]
    p: Option<f64>,
    /// Minimum degree (random-mindeg).
    #[arg(long)]
    d: Option<usize>,
    /// Component degree (class2; must be even).
    #[arg(long = "D")]
    big_d: Option<usize>,
    /// Component count (class2).
    #[arg(long)]
    t: Option<usize>,
    /// Number of 5-cycles (complement-cycles).
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accept class-2 components without the odd-order parity certificate.
    #[arg(long)]
    unchecked: bool,
}

#[derive(Args)]
struct FindArgs {
    /// Method: dense | sparse | very-dense
    method: String,
    /// Host graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Pattern clique order (sparse only).
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certificate output path.
    #[arg(long)]
    cert_out: PathBuf,
    /// Dense finder: enumerate sampling pairs instead of drawing them.
    #[arg(long)]
    derandomize: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    /// Treat the certificate as a line-graph clique minor.
    #[arg(long)]
    line_minor: bool,
    /// Require the immersion to be strong.
    #[arg(long)]
    expect_strong: bool,
    /// Require every path to have exactly this many internal vertices.
    #[arg(long)]
    expect_k: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    t: usize,
    /// Decide strong immersion instead of plain.
    #[arg(long)]
    strong: bool,
    /// Restrict to 1-immersions (length-2 paths).
    #[arg(long)]
    one_immersion: bool,
    /// Override the vertex budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Write the witness certificate here when one exists.
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Args)]
struct LineMinorArgs {
    /// Plane order (odd prime): emits the K_{p^2+p+1} construction.
    #[arg(long)]
    p: Option<usize>,
    /// Host graph: runs the average-degree pipeline instead.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    cert_out: PathBuf,
    /// Also write the generated host graph (with --p).
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Find(args) => run_find(args),
        Command::Verify(args) => run_verify(args),
        Command::Oracle(args) => run_oracle(args),
        Command::LineMinor(args) => run_line_minor(args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}

fn need<T>(opt: Option<T>, what: &str) -> Result<T, String> {
    opt.ok_or_else(|| format!("missing required parameter {what}"))
}

fn run_gen(args: GenArgs) -> Result<u8, String> {
    let g: MultiGraph = match args.family.as_str() {
        "seymour" => constructions::seymour_graph().into_multigraph(),
        "class2" => {
            let d = need(args.big_d, "--D")?;
            let t = need(args.t, "--t")?;
            if d == 0 || (d % 2 != 0 && !args.unchecked) {
                return Err("class2 needs an even --D (odd-order complete components)".into());
            }
            let comp = generators::complete_simple(d + 1);
            let comps = vec![comp; t];
            constructions::class2_complement_family(&comps, args.unchecked)
                .map_err(|e| e.to_string())?
                .into_multigraph()
        }
        "random-gnp" => {
            let n = need(args.n, "--n")?;
            let p = need(args.p, "--p")?;
            generators::gnp_f64(n, p, args.seed).into_multigraph()
        }
        "random-mindeg" => {
            let n = need(args.n, "--n")?;
            let d = need(args.d, "--d")?;
            generators::random_min_degree(n, d, args.seed).into_multigraph()
        }
        "complement-cycles" => {
            let cycles = need(args.cycles, "--cycles")?;
            generators::complement_of_five_cycles(cycles).into_multigraph()
        }
        "complete" => generators::complete(need(args.n, "--n")?),
        other => return Err(format!("unknown family '{other}'")),
    };
    graph_io::write_graph(&g, &args.out).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} vertices, {} edges)",
        args.out.display(),
        g.n(),
        g.m()
    );
    Ok(EXIT_OK)
}

fn load_simple(path: &PathBuf) -> Result<SimpleGraph, String> {
    graph_io::read_simple_graph(path).map_err(|e| e.to_string())
}

fn run_find(args: FindArgs) -> Result<u8, String> {
    let g = load_simple(&args.graph)?;
    let cert: ImmersionCertificate = match args.method.as_str() {
        "dense" => {
            let opts = DenseOptions {
                derandomize: args.derandomize,
                ..DenseOptions::default()
            };
            match dense::find_dense_immersion(&g, args.seed, &opts) {
                Ok(c) => c,
                Err(dense::DenseError::RetriesExhausted { attempts }) => {
                    eprintln!("dependent random choice exhausted {attempts} attempts");
                    return Ok(EXIT_RETRIES);
                }
                Err(dense::DenseError::PreconditionViolated(m)) => {
                    eprintln!("precondition violated: {m}");
                    return Ok(EXIT_PRECONDITION);
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        "sparse" => {
            let t = need(args.t, "--t")?;
            match sparse::main_engine(&g, t) {
                Ok((c, log)) => {
                    println!("engine iterations: {}", log.iterations.len());
                    c
                }
                Err(sparse::SparseError::PreconditionViolated(m)) => {
                    eprintln!("precondition violated: {m}");
                    return Ok(EXIT_PRECONDITION);
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        "very-dense" => match constructions::very_dense_immersion(&g) {
            Ok(c) => c,
            Err(constructions::ConstructionError::PreconditionViolated(m)) => {
                eprintln!("precondition violated: {m}");
                return Ok(EXIT_PRECONDITION);
            }
            Err(e) => return Err(e.to_string()),
        },
        other => return Err(format!("unknown method '{other}'")),
    };
    // Never write an unverified certificate.
    let report = verify_immersion(&g, &cert).map_err(|e| e.to_string())?;
    if !report.valid {
        return Err(format!(
            "internal error: certificate failed verification: {:?}",
            report.failures
        ));
    }
    cert.write_file(&args.cert_out).map_err(|e| e.to_string())?;
    println!(
        "wrote {} (K_{} immersion, strong={}, k={:?})",
        args.cert_out.display(),
        cert.t,
        cert.strong,
        cert.k
    );
    Ok(EXIT_OK)
}

fn run_verify(args: VerifyArgs) -> Result<u8, String> {
    let g = graph_io::read_graph(&args.graph).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&args.cert).map_err(|e| e.to_string())?;
    if args.line_minor {
        let cert = LineMinorCertificate::from_json(&text).map_err(|e| e.to_string())?;
        return match verify_line_minor(&g, &cert) {
            Ok(report) if report.valid => {
                println!("valid line-graph clique minor of order {}", report.order);
                Ok(EXIT_OK)
            }
            Ok(report) => {
                for f in &report.failures {
                    eprintln!("invalid: {f}");
                }
                Ok(EXIT_INVALID)
            }
            Err(CertError::DigestMismatch) => {
                eprintln!("certificate host digest does not match the graph");
                Ok(EXIT_DIGEST)
            }
            Err(e) => Err(e.to_string()),
        };
    }
    let cert = ImmersionCertificate::from_json(&text).map_err(|e| e.to_string())?;
    match verify_immersion(&g, &cert) {
        Ok(report) => {
            if !report.valid {
                for f in &report.failures {
                    eprintln!("invalid: {f}");
                }
                return Ok(EXIT_INVALID);
            }
            if args.expect_strong && !report.strong {
                eprintln!("certificate is valid but not strong");
                return Ok(EXIT_INVALID);
            }
            if let Some(k) = args.expect_k {
                if report.k_uniform != Some(k) && !cert.paths.is_empty() {
                    eprintln!(
                        "certificate is valid but k-uniformity is {:?}, expected {k}",
                        report.k_uniform
                    );
                    return Ok(EXIT_INVALID);
                }
            }
            println!(
                "valid K_{} immersion (strong={}, k={:?})",
                cert.t, report.strong, report.k_uniform
            );
            Ok(EXIT_OK)
        }
        Err(CertError::DigestMismatch) => {
            eprintln!("certificate host digest does not match the graph");
            Ok(EXIT_DIGEST)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn run_oracle(args: OracleArgs) -> Result<u8, String> {
    let g = graph_io::read_graph(&args.graph).map_err(|e| e.to_string())?;
    let mut budget = if args.one_immersion {
        OracleBudget::one_immersion()
    } else {
        OracleBudget::default()
    };
    if let Some(b) = args.budget {
        budget.max_vertices = b;
    }
    let outcome = if args.one_immersion {
        oracle::brute_force_one_immersion(&g, args.t, args.strong, &budget)
    } else {
        oracle::brute_force_immersion(&g, args.t, args.strong, &budget)
    };
    match outcome {
        Ok(Some(cert)) => {
            println!(
                "K_{} {}immersion found",
                args.t,
                if args.strong { "strong " } else { "" }
            );
            if let Some(path) = args.cert_out {
                cert.write_file(&path).map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            Ok(EXIT_OK)
        }
        Ok(None) => {
            println!(
                "no K_{} {}immersion exists",
                args.t,
                if args.strong { "strong " } else { "" }
            );
            Ok(EXIT_INVALID)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(EXIT_BUDGET)
        }
    }
}

fn run_line_minor(args: LineMinorArgs) -> Result<u8, String> {
    match (args.p, args.graph) {
        (Some(p), None) => {
            let (host, cert) =
                constructions::line_graph_clique_minor(p).map_err(|e| e.to_string())?;
            if let Some(gp) = args.graph_out {
                graph_io::write_graph(&host, &gp).map_err(|e| e.to_string())?;
                println!("wrote {}", gp.display());
            }
            cert.write_file(&args.cert_out).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} parts in K_{})",
                args.cert_out.display(),
                cert.parts.len(),
                host.n()
            );
            Ok(EXIT_OK)
        }
        (None, Some(path)) => {
            let g = load_simple(&path)?;
            let out = constructions::corollary_line_minor(&g).map_err(|e| e.to_string())?;
            out.certificate
                .write_file(&args.cert_out)
                .map_err(|e| e.to_string())?;
            println!(
                "wrote {} (order {}, degenerate={})",
                args.cert_out.display(),
                out.order,
                out.degenerate
            );
            Ok(EXIT_OK)
        }
        _ => Err("pass exactly one of --p or --graph".into()),
    }
}
